//! `projhull`: curve construction, hull scans, the explicit-family verifier,
//! disk checks and Blaschke utilities.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage or validation error,
//! 3 degree-cap violation.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use projhull::curvelib::{build_curve, CurveJson, PoleSeriesParams, SampledCurve, SeriesVariant};
use projhull::diskmaps::{check_conditions, BlaschkeProduct, DiskMapJson, RationalDiskMap};
use projhull::hullscan::classify::{classify_grid, gamma0_reference_points, ClassifyOptions, Classifier, GridSlice};
use projhull::hullscan::disk_opt::{disk_lower_bound, DiskOptOptions};
use projhull::hullscan::kernel::KernelOptions;
use projhull::hullscan::theorem3::{default_test_points, verify_theorem3};
use projhull::numfmt::to_json_string;
use projhull::HullError;

use config::{
    coordinate_index, load_table, merge, parse_complex, parse_complex_list, parse_floats, parse_resolution, required,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Hull(#[from] HullError),
}

impl CliError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) | CliError::Hull(HullError::Infeasible { .. }) => 1,
            CliError::Hull(HullError::DegreeCap { .. }) => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "projhull", version, about = "Numerical projective-hull membership for closed curves")]
struct Cli {
    /// TOML file whose keys mirror the long flags of the subcommand; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed recorded in every output and used by the disk optimizer.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one of the pole-series curve families.
    Curve(CurveArgs),
    /// Classify a grid of points on a complex line.
    Scan(ScanArgs),
    /// Run the inequality suite for the explicit polynomial family.
    Thm3(Thm3Args),
    /// Analytic-disk conditions and the disk lower bound.
    #[command(subcommand)]
    Disk(DiskCommand),
    /// Evaluate a finite Blaschke product.
    Blaschke(BlaschkeArgs),
}

#[derive(Subcommand)]
enum DiskCommand {
    /// Check conditions (i)-(iv) for a disk map.
    Check(DiskCheckArgs),
    /// Maximize the pole log-sum over disks with boundary in the tube.
    Optimize(DiskOptimizeArgs),
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct CurveArgs {
    /// example1-standard, example1-rapid or example2.
    #[arg(long)]
    variant: Option<String>,
    /// Number of samples.
    #[arg(long)]
    m: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ScanArgs {
    /// Curve file.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Fixed coordinates, e.g. `z=0+0i`; unlisted coordinates are 0.
    #[arg(long)]
    fix: Option<Vec<String>>,
    /// The coordinate that ranges over the rectangle.
    #[arg(long)]
    vary: Option<String>,
    /// `re_min,im_min,re_max,im_max`.
    #[arg(long, allow_hyphen_values = true)]
    rect: Option<String>,
    /// `N` or `NXxNY`.
    #[arg(long)]
    res: Option<String>,
    #[arg(long)]
    dmax: Option<u32>,
    /// Working precision of the kernel in bits.
    #[arg(long)]
    precision: Option<u32>,
    /// Relative residual below which a basis direction is dropped.
    #[arg(long)]
    cutoff: Option<f64>,
    #[arg(long)]
    query_radius: Option<f64>,
    #[arg(long)]
    in_threshold: Option<f64>,
    #[arg(long)]
    out_threshold: Option<f64>,
    /// JSON report.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// CSV heatmap.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// PGM rendering of the class labels.
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct Thm3Args {
    /// example1-standard or example1-rapid.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    nmax: Option<usize>,
    /// Curve samples for the sup-norm checks.
    #[arg(long)]
    m: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct DiskCheckArgs {
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Disk-map file.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Use the series family truncated at this many poles instead of a file.
    #[arg(long)]
    series: Option<usize>,
    /// Series variant for `--series`; defaults to the curve's family.
    #[arg(long)]
    variant: Option<String>,
    /// Tube radius.
    #[arg(long)]
    r: Option<f64>,
    /// Center point, comma-separated complex coordinates.
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<String>,
    /// Bound in condition (iii).
    #[arg(long)]
    m_bound: Option<f64>,
    #[arg(long)]
    m_bdy: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct DiskOptimizeArgs {
    #[arg(long)]
    curve: Option<PathBuf>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    z0: Option<String>,
    #[arg(long)]
    max_poles: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    max_evals: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Clone, Debug)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct BlaschkeArgs {
    /// Comma-separated zeros, e.g. `0.5,0.1+0.2i`.
    #[arg(long, allow_hyphen_values = true)]
    zeros: Option<String>,
    /// File with one complex zero per line.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Boundary points for the modulus check.
    #[arg(long)]
    m: Option<usize>,
}

/// Where the run came from; embedded in every output file.
struct Provenance {
    command: &'static str,
    config: Value,
    seed: u64,
}

impl Provenance {
    fn value(&self) -> Value {
        json!({
            "tool": "projhull",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
        })
    }

    /// One-line form for text formats.
    fn comment(&self) -> String {
        serde_json::to_string(&self.value()).expect("provenance serializes")
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Serializes `value` with a `provenance` member added at the top level.
fn json_with_provenance<T: Serialize>(value: &T, prov: &Provenance) -> CliResult<String> {
    let mut v = serde_json::to_value(value).map_err(HullError::from)?;
    if let Value::Object(map) = &mut v {
        map.insert("provenance".into(), prov.value());
    }
    Ok(to_json_string(&v).map_err(HullError::from)?)
}

fn emit_json<T: Serialize>(value: &T, prov: &Provenance, output: Option<&Path>) -> CliResult<()> {
    let text = json_with_provenance(value, prov)?;
    match output {
        Some(path) => write_file(path, &text),
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn parse_variant(name: &str) -> CliResult<SeriesVariant> {
    SeriesVariant::parse(name).ok_or_else(|| {
        let names: Vec<&str> = SeriesVariant::ALL.iter().map(|v| v.name()).collect();
        CliError::Usage(format!("unknown variant {name:?}; expected one of {}", names.join(", ")))
    })
}

fn read_curve(path: &Path) -> CliResult<SampledCurve> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let j: CurveJson = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(SampledCurve::try_from(j)?)
}

fn cmd_curve(args: CurveArgs, seed: u64) -> CliResult<()> {
    let variant = parse_variant(&required(&args.variant, "variant")?)?;
    let m = required(&args.m, "m")?;
    let params = PoleSeriesParams::new(variant);
    let curve = build_curve(&params, m)?;
    let prov = Provenance {
        command: "curve",
        config: serde_json::to_value(&args).expect("config serializes"),
        seed,
    };
    emit_json(&CurveJson::from(&curve), &prov, args.output.as_deref())?;

    let mut lines = vec![
        format!("variant: {variant}"),
        format!("samples: {m}"),
        format!("kappa = {:.16}", params.kappa()),
        format!("sum eps_n = {:.16}", params.sum_eps()),
        format!(
            "series truncated at {} terms, boundary tail <= {:.3e}",
            params.curve_truncation(),
            params.boundary_tail(params.curve_truncation())
        ),
    ];
    if variant == SeriesVariant::Example2 {
        lines.push(format!("sum k c_k/eps_k <= {:.16} (finite)", params.weighted_sum()));
    } else {
        lines.push(format!("sum c_n/eps_n <= {:.16}", params.weighted_sum()));
    }
    let text = lines.join("\n") + "\n";
    // diagnostics go to stderr when the curve itself is on stdout
    if args.output.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanConfig {
    curve: PathBuf,
    base: Vec<[f64; 2]>,
    vary: String,
    rect: [f64; 4],
    resolution: [usize; 2],
    classify: ClassifyOptions,
    output: Option<PathBuf>,
    csv: Option<PathBuf>,
    pgm: Option<PathBuf>,
}

fn cmd_scan(args: ScanArgs, seed: u64) -> CliResult<()> {
    let curve_path = required(&args.curve, "curve")?;
    let curve = read_curve(&curve_path)?;
    let n = curve.n();
    let vary_name = required(&args.vary, "vary")?;
    let vary = coordinate_index(&vary_name, n)?;
    let mut base = vec![Complex64::new(0.0, 0.0); n];
    for spec in args.fix.iter().flatten() {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--fix expects name=value, got {spec:?}")))?;
        let k = coordinate_index(name.trim(), n)?;
        if k == vary {
            return Err(CliError::Usage(format!("coordinate {name} is both fixed and varied")));
        }
        base[k] = parse_complex(value)?;
    }
    let rect = parse_floats::<4>(&required(&args.rect, "rect")?, "rect")?;
    let resolution = parse_resolution(&required(&args.res, "res")?)?;
    let defaults = ClassifyOptions::default();
    let opts = ClassifyOptions {
        d_max: args.dmax.unwrap_or(defaults.d_max),
        kernel: KernelOptions {
            precision: args.precision.unwrap_or(defaults.kernel.precision),
            cutoff: args.cutoff.unwrap_or(defaults.kernel.cutoff),
        },
        query_radius: args.query_radius.unwrap_or(defaults.query_radius),
        in_threshold: args.in_threshold.unwrap_or(defaults.in_threshold),
        out_threshold: args.out_threshold.unwrap_or(defaults.out_threshold),
    };
    opts.validate()?;
    let slice = GridSlice {
        base: base.iter().map(|z| [z.re, z.im]).collect(),
        vary,
        rect,
        resolution,
    };
    slice.validate()?;
    let config = ScanConfig {
        curve: curve_path,
        base: slice.base.clone(),
        vary: vary_name,
        rect,
        resolution,
        classify: opts,
        output: args.output.clone(),
        csv: args.csv.clone(),
        pgm: args.pgm.clone(),
    };
    let prov = Provenance {
        command: "scan",
        config: serde_json::to_value(&config).expect("config serializes"),
        seed,
    };

    let classifier = Classifier::new(&curve, opts)?;
    let reference = if curve.family() == Some(SeriesVariant::Example1Standard) {
        let omega2 = PoleSeriesParams::standard().omega_full(Complex64::new(2.0, 0.0), 1e-15, None)?.value;
        classifier.check_reference(&gamma0_reference_points(omega2))?
    } else {
        Vec::new()
    };
    let report = classify_grid(&slice, &classifier, Value::Object(curve.meta().clone()), reference)?;

    emit_json(&report, &prov, args.output.as_deref())?;
    let header = format!("# {}\n", prov.comment());
    if let Some(path) = &args.csv {
        write_file(path, &(header.clone() + &report.to_csv()))?;
    }
    if let Some(path) = &args.pgm {
        // PGM comments must follow the magic number
        let pgm = report.to_pgm();
        let (magic, rest) = pgm.split_once('\n').expect("PGM has a header");
        write_file(path, &format!("{magic}\n{header}{rest}"))?;
    }
    let counts = |label: &str| report.points.iter().filter(|p| p.class.label() == label).count();
    eprintln!(
        "{} points: {} IN, {} MARGINAL, {} OUT",
        report.points.len(),
        counts("IN"),
        counts("MARGINAL"),
        counts("OUT")
    );
    Ok(())
}

fn cmd_thm3(args: Thm3Args, seed: u64) -> CliResult<()> {
    let variant = parse_variant(&required(&args.variant, "variant")?)?;
    let n_max = required(&args.nmax, "nmax")?;
    let m = args.m.unwrap_or(2048);
    let report = verify_theorem3(&PoleSeriesParams::new(variant), n_max, &default_test_points(), m)?;
    let config = json!({"variant": variant.name(), "nmax": n_max, "m": m, "output": args.output});
    let prov = Provenance { command: "thm3", config, seed };
    emit_json(&report, &prov, args.output.as_deref())?;
    let failures = report.failures();
    if failures.is_empty() {
        eprintln!("all checks pass ({variant}, N_max = {n_max})");
        Ok(())
    } else {
        Err(CliError::Check(failures.join(", ")))
    }
}

fn z0_for(curve: &SampledCurve, spec: Option<&str>) -> CliResult<Vec<Complex64>> {
    let z0 = match spec {
        Some(s) => parse_complex_list(s)?,
        None => vec![Complex64::new(0.0, 0.0); curve.n()],
    };
    if z0.len() != curve.n() {
        return Err(CliError::Usage(format!("--z0 needs {} coordinates, got {}", curve.n(), z0.len())));
    }
    Ok(z0)
}

fn cmd_disk_check(args: DiskCheckArgs, seed: u64) -> CliResult<()> {
    let curve = read_curve(&required(&args.curve, "curve")?)?;
    let f = match (&args.map, args.series) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let j: DiskMapJson =
                serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            RationalDiskMap::try_from(j)?
        }
        (None, Some(n)) => {
            let variant = match &args.variant {
                Some(v) => parse_variant(v)?,
                None => curve
                    .family()
                    .ok_or_else(|| CliError::Usage("--series needs --variant for a curve without a family".into()))?,
            };
            RationalDiskMap::series_family(&PoleSeriesParams::new(variant), n)?
        }
        _ => return Err(CliError::Usage("give exactly one of --map and --series".into())),
    };
    let r = required(&args.r, "r")?;
    let m_bound = required(&args.m_bound, "m-bound")?;
    let m_bdy = args.m_bdy.unwrap_or(1024);
    let z0 = z0_for(&curve, args.z0.as_deref())?;
    let report = check_conditions(&f, &curve, r, &z0, m_bound, m_bdy)?;
    let mut config = serde_json::to_value(&args).expect("config serializes");
    config["m-bdy"] = m_bdy.into();
    let prov = Provenance { command: "disk check", config, seed };
    emit_json(&report, &prov, args.output.as_deref())?;
    if report.all_hold() {
        eprintln!("conditions (i)-(iv) hold");
        Ok(())
    } else {
        let failed: Vec<&str> = [
            (!report.cond_i.holds).then_some("(i)"),
            (!report.cond_ii.holds).then_some("(ii)"),
            (!report.cond_iii.holds).then_some("(iii)"),
            (!report.cond_iv.holds).then_some("(iv)"),
        ]
        .into_iter()
        .flatten()
        .collect();
        Err(CliError::Check(format!("condition {} fails", failed.join(", "))))
    }
}

fn cmd_disk_optimize(args: DiskOptimizeArgs, seed: u64) -> CliResult<()> {
    let curve = read_curve(&required(&args.curve, "curve")?)?;
    let r = required(&args.r, "r")?;
    let z0 = z0_for(&curve, args.z0.as_deref())?;
    let defaults = DiskOptOptions::default();
    let opts = DiskOptOptions {
        max_poles: args.max_poles.unwrap_or(defaults.max_poles),
        restarts: args.restarts.unwrap_or(defaults.restarts),
        seed,
        max_evals: args.max_evals.unwrap_or(defaults.max_evals),
        ..defaults
    };
    let config = json!({
        "curve": args.curve,
        "r": r,
        "z0": z0.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "optimizer": opts,
        "output": args.output,
    });
    let prov = Provenance { command: "disk optimize", config, seed };
    match disk_lower_bound(&z0, &curve, r, &opts) {
        Ok(bound) => {
            emit_json(&bound, &prov, args.output.as_deref())?;
            eprintln!("best pole log-sum {:.10} with {} poles", bound.value, bound.a.len());
            Ok(())
        }
        Err(HullError::Infeasible { best_penalty }) => {
            emit_json(&json!({"infeasible": true, "best_penalty": best_penalty}), &prov, args.output.as_deref())?;
            Err(HullError::Infeasible { best_penalty }.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_blaschke(args: BlaschkeArgs) -> CliResult<()> {
    let mut zeros = Vec::new();
    if let Some(list) = &args.zeros {
        zeros.extend(parse_complex_list(list)?);
    }
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            zeros.push(parse_complex(line)?);
        }
    }
    if args.zeros.is_none() && args.file.is_none() {
        return Err(CliError::Usage("give --zeros or --file".into()));
    }
    let m = args.m.unwrap_or(256);
    let b = BlaschkeProduct::new(zeros.clone())?;
    let b0 = b.eval(Complex64::new(0.0, 0.0))?;
    let log_sum: f64 = zeros.iter().map(|z| z.norm().ln()).sum();
    println!("zeros: {}", zeros.len());
    println!("B(0) = {:.17e} {:+.17e}i", b0.re, b0.im);
    println!("log|B(0)| = {:.17e}", b0.norm().ln());
    println!("sum log|zeta_j| = {log_sum:.17e}");
    println!("max ||B| - 1| on {m} boundary points = {:.3e}", b.boundary_deviation(m));
    Ok(())
}

fn init_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("PROJHULL_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("PROJHULL_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    init_threads()?;
    let mut table = load_table(cli.config.as_deref())?;
    let file_seed = match table.remove("seed") {
        Some(v) => Some(v.as_u64().ok_or_else(|| CliError::Usage("config: seed must be a non-negative integer".into()))?),
        None => None,
    };
    let seed = cli.seed.or(file_seed).unwrap_or(0);
    match cli.command {
        Command::Curve(a) => cmd_curve(merge(&a, &table)?, seed),
        Command::Scan(a) => cmd_scan(merge(&a, &table)?, seed),
        Command::Thm3(a) => cmd_thm3(merge(&a, &table)?, seed),
        Command::Disk(DiskCommand::Check(a)) => cmd_disk_check(merge(&a, &table)?, seed),
        Command::Disk(DiskCommand::Optimize(a)) => cmd_disk_optimize(merge(&a, &table)?, seed),
        Command::Blaschke(a) => cmd_blaschke(merge(&a, &table)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
