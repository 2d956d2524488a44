//! Inequality suite for the explicit polynomial family of the `example1` curves.
//!
//! The polynomials `P_N(z, w) = (w - kappa - sum_{n<=N} c_n/(z - a_n)) prod_{n<=N} (z - a_n)`
//! are never expanded except in the small-degree chart cross-check. On the
//! curve they are evaluated through the remainder
//! `P_N(z, omega(z)) = (sum_{n>N} c_n/(z - a_n)) prod_{n<=N} (z - a_n)`,
//! and every magnitude is carried as a logarithm.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvelib::{unit_root_sample, PoleSeriesParams, SeriesVariant};
use crate::error::{HullError, Result};
use crate::polyring::{AffineChart, AffineSubstitution, ComplexPolynomial};

pub const MAX_N: usize = 120;
pub const MIN_SAMPLES: usize = 1024;
/// Truncation at which root limits are judged.
pub const ROOT_LIMIT_N: usize = 60;
/// Largest truncation for the chart checks.
pub const CHART_BOUND_N: usize = 12;
/// Largest truncation expanded into monomials.
pub const EXPANSION_N: usize = 6;
const POLE_FIBER_TOL: f64 = 1e-12;
/// Relative to the size of the expanded terms.
const EXPANSION_TOL: f64 = 1e-13;
/// Remainder series stops once terms fall below this fraction of the first.
const REMAINDER_REL: f64 = 1e-20;

/// One inequality `lhs <= rhs` (or equality within `tol` when stated).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl Check {
    fn le(name: &str, n: usize, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            n,
            lhs,
            rhs,
            pass: lhs <= rhs,
        }
    }

    fn close(name: &str, n: usize, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            n,
            lhs,
            rhs,
            pass: (lhs - rhs).abs() <= tol,
        }
    }
}

/// Complex number as `(ln |x|, arg x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_abs: f64,
    pub arg: f64,
}

impl LogComplex {
    fn from_c64(x: Complex64) -> Self {
        Self {
            log_abs: x.norm().ln(),
            arg: x.arg(),
        }
    }

    fn mul(self, other: Self) -> Self {
        Self {
            log_abs: self.log_abs + other.log_abs,
            arg: wrap(self.arg + other.arg),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::from_polar(self.log_abs.exp(), self.arg)
    }
}

fn wrap(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let r = (a + std::f64::consts::PI).rem_euclid(t) - std::f64::consts::PI;
    if r == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootLimit {
    pub z: [f64; 2],
    pub w: [f64; 2],
    /// `log |z - 1|`.
    pub target: f64,
    /// `(1/(N+1)) log |P_N(z, w)|` for `N = 1..`.
    pub trajectory: Vec<f64>,
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleFiber {
    /// Truncation `N`.
    pub n_trunc: usize,
    /// Pole index `n`.
    pub pole: usize,
    pub values: Vec<PoleFiberValue>,
    /// `-c_n prod_{j != n} (a_n - a_j)`.
    pub formula: LogComplex,
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleFiberValue {
    pub w: [f64; 2],
    pub value: LogComplex,
    /// The same value from the expanded polynomial, when `N` is small.
    pub expanded: Option<LogComplex>,
    /// `|expanded - value| / sum_a |coef_a z^a|`.
    pub expansion_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZEqualsOne {
    pub w_offset: f64,
    /// Whether the comparison decides membership for these parameters.
    pub gating: bool,
    /// `(1/(N+1)) log |P_N(1, w)|` against `(1/(N+1)) log` of the sup bound.
    pub checks: Vec<Check>,
    /// `lhs - rhs` grows and ends positive.
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremThreeReport {
    pub variant: String,
    pub n_max: usize,
    pub m: usize,
    pub kappa: f64,
    pub tail_checks: Vec<Check>,
    /// The faster tail condition; gating only for the rapid variant.
    pub tail_checks_rapid: Vec<Check>,
    pub sup_checks: Vec<Check>,
    pub root_limits: Vec<RootLimit>,
    pub pole_fiber_checks: Vec<PoleFiber>,
    pub z_equals_1_check: ZEqualsOne,
    pub infinity_chart_checks: Vec<Check>,
    /// `sup sqrt((1+|z-1|^2+|w|^2)/(1+|z|^2+|w|^2))` and its inverse bound
    /// over the curve: the chart change is not unitary.
    pub chart_comparison_factor: [f64; 2],
    pub all_pass: bool,
}

impl TheoremThreeReport {
    /// Names of failed gating checks.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let rapid = self.variant == SeriesVariant::Example1Rapid.name();
        let mut push = |c: &Check| {
            if !c.pass {
                out.push(format!("{}[N={}]", c.name, c.n));
            }
        };
        self.tail_checks.iter().for_each(&mut push);
        if rapid {
            self.tail_checks_rapid.iter().for_each(&mut push);
        }
        self.sup_checks.iter().for_each(&mut push);
        self.root_limits.iter().for_each(|r| push(&r.check));
        self.pole_fiber_checks.iter().for_each(|p| push(&p.check));
        self.infinity_chart_checks.iter().for_each(&mut push);
        if self.z_equals_1_check.gating && !self.z_equals_1_check.pass {
            out.push("z_equals_1".into());
        }
        out
    }
}

/// `log |sum_{n>N} c_n/(z - a_n)|` and its argument.
fn log_remainder(params: &PoleSeriesParams, n_trunc: usize, z: Complex64) -> LogComplex {
    let base = params.log_c(n_trunc + 1);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut terms = Vec::new();
    let mut n = n_trunc + 1;
    loop {
        let scale = (params.log_c(n) - base).exp();
        let term = scale / params.offset(z, n);
        terms.push(term);
        if scale / params.eps(n) < REMAINDER_REL * terms[0].norm() || n >= n_trunc + 60 {
            break;
        }
        n += 1;
    }
    // smallest first
    for t in terms.iter().rev() {
        sum += t;
    }
    LogComplex {
        log_abs: base + sum.norm().ln(),
        arg: sum.arg(),
    }
}

/// `prod_{n<=N} (z - a_n)` in log form.
fn log_product(params: &PoleSeriesParams, n_trunc: usize, z: Complex64, skip: Option<usize>) -> LogComplex {
    let mut acc = LogComplex { log_abs: 0.0, arg: 0.0 };
    for n in 1..=n_trunc {
        if Some(n) != skip {
            acc = acc.mul(LogComplex::from_c64(params.offset(z, n)));
        }
    }
    acc
}

/// `P_N(z, w)` from the defining product; at `z = a_n` the factor
/// `(z - a_n)` is moved into the bracket first.
pub fn log_pn(params: &PoleSeriesParams, n_trunc: usize, z: Complex64, w: Complex64) -> LogComplex {
    if let Some(pole) = (1..=n_trunc).find(|&n| params.offset(z, n) == Complex64::new(0.0, 0.0)) {
        // ((w - kappa - sum_{j != n} c_j/(z - a_j)) (z - a_n) - c_n) prod_{j != n}
        let mut bracket = w - params.kappa();
        for j in (1..=n_trunc).rev().filter(|&j| j != pole) {
            bracket -= params.c(j) / params.offset(z, j);
        }
        let lead = bracket * params.offset(z, pole);
        let value = if lead == Complex64::new(0.0, 0.0) {
            LogComplex {
                log_abs: params.log_c(pole),
                arg: std::f64::consts::PI,
            }
        } else {
            LogComplex::from_c64(lead - params.c(pole))
        };
        return value.mul(log_product(params, n_trunc, z, Some(pole)));
    }
    let mut bracket = w - params.kappa();
    for j in (1..=n_trunc).rev() {
        bracket -= params.c(j) / params.offset(z, j);
    }
    LogComplex::from_c64(bracket).mul(log_product(params, n_trunc, z, None))
}

/// `P_N(z, omega(z))` through the remainder.
pub fn log_pn_on_curve(params: &PoleSeriesParams, n_trunc: usize, z: Complex64) -> LogComplex {
    log_remainder(params, n_trunc, z).mul(log_product(params, n_trunc, z, None))
}

/// `P_N` expanded into monomials in `(z, w)`.
pub fn expand_pn(params: &PoleSeriesParams, n_trunc: usize) -> ComplexPolynomial {
    let z = ComplexPolynomial::variable(2, 0);
    let w = ComplexPolynomial::variable(2, 1);
    let factor = |n: usize| &z - &ComplexPolynomial::constant(2, Complex64::new(params.a(n), 0.0));
    let mut full = ComplexPolynomial::constant(2, Complex64::new(1.0, 0.0));
    for n in 1..=n_trunc {
        full = &full * &factor(n);
    }
    let kappa = ComplexPolynomial::constant(2, Complex64::new(params.kappa(), 0.0));
    let mut out = &(&w - &kappa) * &full;
    for n in 1..=n_trunc {
        let mut partial = ComplexPolynomial::constant(2, Complex64::new(params.c(n), 0.0));
        for j in (1..=n_trunc).filter(|&j| j != n) {
            partial = &partial * &factor(j);
        }
        out = &out - &partial;
    }
    out
}

/// The chart pipeline: shift `z = s + 1`, homogenize with `t_0`, set `s_0 = 1`.
/// The result is a polynomial in `(t, w)`.
pub fn chart_pipeline(p: &ComplexPolynomial, degree: u32) -> Result<ComplexPolynomial> {
    let shifted = p.affine_precompose(&[AffineSubstitution::shift(Complex64::new(1.0, 0.0)), AffineSubstitution::IDENTITY])?;
    let q = shifted.homogenize(degree)?;
    q.chart_restrict(&AffineChart::new(3, 1, vec![0, 2])?)
}

/// `P_N''(t, w) = (w - kappa t - sum c_n t^2/(1 + eps_n t)) prod (1 + eps_n t)`.
pub fn chart_closed_form(params: &PoleSeriesParams, n_trunc: usize, t: Complex64, w: Complex64) -> Complex64 {
    let mut bracket = w - params.kappa() * t;
    let mut prod = Complex64::new(1.0, 0.0);
    for n in (1..=n_trunc).rev() {
        let f = 1.0 + params.eps(n) * t;
        bracket -= params.c(n) * t * t / f;
        prod *= f;
    }
    bracket * prod
}

pub fn default_test_points() -> Vec<(Complex64, Complex64)> {
    vec![
        (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        (Complex64::new(0.0, 0.5), Complex64::new(2.0, 0.0)),
    ]
}

pub fn verify_theorem3(
    params: &PoleSeriesParams,
    n_max: usize,
    test_points: &[(Complex64, Complex64)],
    m: usize,
) -> Result<TheoremThreeReport> {
    if params.variant() == SeriesVariant::Example2 {
        return Err(HullError::Invalid("the verifier covers the example1 variants only".into()));
    }
    if n_max == 0 || n_max > MAX_N {
        return Err(HullError::Invalid(format!("N_max must lie in 1..={MAX_N}, got {n_max}")));
    }
    if m < MIN_SAMPLES {
        return Err(HullError::Invalid(format!("at least {MIN_SAMPLES} curve samples required, got {m}")));
    }

    let tail_checks = (1..=n_max)
        .map(|n| Check::le("tail", n, params.log_tail_bound(n), -((n + 1) as f64) * ((n + 1) as f64).ln()))
        .collect();
    let tail_checks_rapid = (1..=n_max)
        .map(|n| {
            let k = (n + 1) as f64;
            Check::le("tail_rapid", n, params.log_tail_bound(n), -k * k * k.ln())
        })
        .collect();

    let circle: Vec<Complex64> = (0..m).map(|k| unit_root_sample(k, m)).collect();
    let sup_log = |n: usize| {
        circle
            .iter()
            .map(|&z| log_pn_on_curve(params, n, z).log_abs)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut sup_checks = Vec::new();
    for n in 2..=n_max {
        let k = (n + 1) as f64;
        let sampled = sup_log(n) / k;
        let bound = (params.log_tail_bound(n) + n as f64 * LN_2) / k;
        sup_checks.push(Check::le("sup_vs_remainder_bound", n, sampled, bound));
        sup_checks.push(Check::le("sup", n, sampled, (2.0 / k).ln()));
    }

    let n_root = n_max.max(ROOT_LIMIT_N);
    let root_limits = test_points
        .iter()
        .map(|&(z, w)| {
            let trajectory: Vec<f64> = (1..=n_root)
                .map(|n| log_pn(params, n, z, w).log_abs / (n + 1) as f64)
                .collect();
            let target = (z - 1.0).norm().ln();
            let last = trajectory[ROOT_LIMIT_N - 1];
            let check = Check::le(
                "root_limit",
                ROOT_LIMIT_N,
                (last - target).abs(),
                2.0 / (ROOT_LIMIT_N + 1) as f64,
            );
            RootLimit {
                z: [z.re, z.im],
                w: [w.re, w.im],
                target,
                trajectory,
                check,
            }
        })
        .collect();

    let fiber_ws = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 5.0)];
    let mut pole_fiber_checks = Vec::new();
    for n_trunc in 2..=n_max.min(CHART_BOUND_N) {
        let expanded = (n_trunc <= EXPANSION_N).then(|| expand_pn(params, n_trunc));
        for pole in 1..=n_trunc.min(3) {
            let z = Complex64::new(params.a(pole), 0.0);
            let mut formula = LogComplex {
                log_abs: params.log_c(pole),
                arg: std::f64::consts::PI,
            };
            for j in (1..=n_trunc).filter(|&j| j != pole) {
                formula = formula.mul(LogComplex::from_c64(Complex64::new(params.eps(j) - params.eps(pole), 0.0)));
            }
            let values: Vec<PoleFiberValue> = fiber_ws
                .iter()
                .map(|&w| {
                    let value = log_pn(params, n_trunc, z, w);
                    let exp_value = expanded.as_ref().map(|p| p.eval(&[z, w]).expect("two variables"));
                    let expansion_error = expanded.as_ref().zip(exp_value).map(|(p, e)| {
                        let scale: f64 = p.terms().map(|(a, c)| c.norm() * a.eval(&[z, w]).norm()).sum();
                        (e - value.to_c64()).norm() / scale
                    });
                    PoleFiberValue {
                        w: [w.re, w.im],
                        value,
                        expanded: exp_value.map(LogComplex::from_c64),
                        expansion_error,
                    }
                })
                .collect();
            // spread over w, and agreement with the closed form and the expansion
            let spread = values
                .iter()
                .map(|v| (v.value.log_abs - values[0].value.log_abs).abs() + wrap(v.value.arg - values[0].value.arg).abs())
                .fold(0.0, f64::max);
            let formula_gap = (values[0].value.log_abs - formula.log_abs).abs() + wrap(values[0].value.arg - formula.arg).abs();
            let expansion_gap = values.iter().filter_map(|v| v.expansion_error).fold(0.0, f64::max);
            let pass = spread <= POLE_FIBER_TOL && formula_gap <= POLE_FIBER_TOL && expansion_gap <= EXPANSION_TOL;
            pole_fiber_checks.push(PoleFiber {
                n_trunc,
                pole,
                values,
                formula,
                check: Check {
                    name: "pole_fiber".into(),
                    n: n_trunc,
                    lhs: spread.max(formula_gap),
                    rhs: POLE_FIBER_TOL,
                    pass,
                },
            });
        }
    }

    // z = 1, w off the graph by one unit
    let omega1 = params.kappa() + params.weighted_sum();
    let w1 = Complex64::new(omega1 + 1.0, 0.0);
    let mut z1_checks = Vec::new();
    for n in 1..=n_max.min(CHART_BOUND_N) {
        let k = (n + 1) as f64;
        let lhs = log_pn(params, n, Complex64::new(1.0, 0.0), w1).log_abs / k;
        let rhs = (params.log_tail_bound(n) + n as f64 * LN_2) / k;
        z1_checks.push(Check::le("z_equals_1", n, rhs, lhs));
    }
    let gaps: Vec<f64> = z1_checks.iter().map(|c| c.rhs - c.lhs).collect();
    let z1_pass = gaps.windows(2).all(|g| g[1] > g[0]) && gaps.last().is_some_and(|&g| g > 0.0);
    let z_equals_1_check = ZEqualsOne {
        w_offset: 1.0,
        gating: params.variant() == SeriesVariant::Example1Rapid,
        checks: z1_checks,
        pass: z1_pass,
    };

    let mut infinity_chart_checks = Vec::new();
    for n in 1..=n_max.min(EXPANSION_N) {
        let chart = chart_pipeline(&expand_pn(params, n), (n + 1) as u32)?;
        for w in [Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0)] {
            let v = chart.eval(&[Complex64::new(0.0, 0.0), w])?;
            infinity_chart_checks.push(Check::close("chart_at_t0", n, (v - w).norm(), 0.0, 0.0));
        }
        let t = Complex64::new(0.3, -0.2);
        let w = Complex64::new(-0.4, 0.7);
        let closed = chart_closed_form(params, n, t, w);
        let v = chart.eval(&[t, w])?;
        infinity_chart_checks.push(Check::le("chart_closed_form", n, (v - closed).norm(), 1e-12 * (1.0 + closed.norm())));
    }
    // curve values: omega on the circle from the remainder-free partial sums
    let truncation = params.curve_truncation();
    let curve_w: Vec<Complex64> = circle
        .iter()
        .map(|&z| params.series_partial(truncation, z))
        .collect::<Result<_>>()?;
    let mut factor_hi: f64 = 0.0;
    let mut factor_lo: f64 = 0.0;
    for (&z, &w) in circle.iter().zip(&curve_w) {
        let r = ((1.0 + (z - 1.0).norm_sqr() + w.norm_sqr()) / (1.0 + z.norm_sqr() + w.norm_sqr())).sqrt();
        factor_hi = factor_hi.max(r);
        factor_lo = factor_lo.max(1.0 / r);
    }
    for n in 1..=n_max.min(CHART_BOUND_N) {
        let k = (n + 1) as f64;
        let sup = circle
            .iter()
            .zip(&curve_w)
            .map(|(&z, &w)| log_pn_on_curve(params, n, z).log_abs - 0.5 * k * (1.0 + (z - 1.0).norm_sqr() + w.norm_sqr()).ln())
            .fold(f64::NEG_INFINITY, f64::max);
        // K = 1: the remainder bound with the tail condition, and the metric factor is at most 1
        infinity_chart_checks.push(Check::le("chart_sup", n, sup / k, (2.0 / k).ln()));
        // at (0, w) the section norm stays bounded away from 0 while the sup decays
        let w = Complex64::new(1.0, 0.0);
        let at_fiber = (w.norm().ln() - 0.5 * k * (1.0 + w.norm_sqr()).ln()) / k;
        infinity_chart_checks.push(Check::le("chart_fiber_exceeds_sup", n, sup / k, at_fiber));
    }

    let mut report = TheoremThreeReport {
        variant: params.variant().name().into(),
        n_max,
        m,
        kappa: params.kappa(),
        tail_checks,
        tail_checks_rapid,
        sup_checks,
        root_limits,
        pole_fiber_checks,
        z_equals_1_check,
        infinity_chart_checks,
        chart_comparison_factor: [factor_hi, factor_lo],
        all_pass: false,
    };
    report.all_pass = report.failures().is_empty();
    Ok(report)
}
