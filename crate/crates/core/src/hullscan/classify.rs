//! Point and grid classification from the degree growth of the Christoffel
//! function.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{ChristoffelKernel, KernelOptions};
use crate::curvelib::SampledCurve;
use crate::error::{HullError, Result};
use crate::numfmt::{fmt_sig, CSV_SIG_DIGITS};

pub const MAX_GRID_SIDE: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub d_max: u32,
    pub kernel: KernelOptions,
    /// Radius of the ball around each query point over which the kernel is
    /// minimized; absorbs rounding in the query coordinates.
    pub query_radius: f64,
    /// IN when the growth slope is below this value.
    pub in_threshold: f64,
    /// OUT when the growth slope exceeds this value.
    pub out_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            d_max: 16,
            kernel: KernelOptions::default(),
            query_radius: 1e-6,
            in_threshold: 0.2,
            out_threshold: 0.5,
        }
    }
}

impl ClassifyOptions {
    pub fn validate(&self) -> Result<()> {
        if self.d_max < 2 {
            return Err(HullError::Invalid(format!("d_max must be at least 2, got {}", self.d_max)));
        }
        if !(self.query_radius >= 0.0 && self.query_radius.is_finite()) {
            return Err(HullError::Invalid(format!("query radius {} must be finite and >= 0", self.query_radius)));
        }
        if !(self.in_threshold <= self.out_threshold) {
            return Err(HullError::Invalid("IN threshold must not exceed OUT threshold".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Class {
    #[serde(rename = "IN")]
    In,
    #[serde(rename = "OUT")]
    Out,
    #[serde(rename = "MARGINAL")]
    Marginal,
}

impl Class {
    pub fn label(self) -> &'static str {
        match self {
            Class::In => "IN",
            Class::Out => "OUT",
            Class::Marginal => "MARGINAL",
        }
    }

    /// PGM grey level.
    pub fn grey(self) -> u8 {
        match self {
            Class::In => 255,
            Class::Marginal => 128,
            Class::Out => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    /// `C = max_d Lambda_d`.
    Bounded { c_hat: f64 },
    /// Growth between two degrees.
    Growth { d_low: u32, d_high: u32, ratio: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalProfile {
    /// Query point as `[re, im]` pairs.
    pub z: Vec<[f64; 2]>,
    pub degrees: Vec<u32>,
    pub lambda_hat: Vec<f64>,
    pub slope: f64,
    pub class: Class,
    pub certificate: Certificate,
    /// Distance from the query to the point where the kernel was evaluated.
    pub query_shift: f64,
}

impl ExtremalProfile {
    pub fn lambda_at(&self, d: u32) -> Option<f64> {
        self.degrees.iter().position(|&x| x == d).map(|i| self.lambda_hat[i])
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_hat.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Lambda_{d_max} / Lambda_{d_max / 2}`.
    pub fn growth_ratio(&self) -> f64 {
        let d_max = *self.degrees.last().expect("non-empty profile");
        self.lambda_at(d_max).unwrap() / self.lambda_at(d_max / 2).unwrap()
    }
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Classifier bound to one curve; the kernel is built once.
pub struct Classifier {
    kernel: ChristoffelKernel,
    opts: ClassifyOptions,
    samples: usize,
}

impl Classifier {
    pub fn new(curve: &SampledCurve, opts: ClassifyOptions) -> Result<Self> {
        opts.validate()?;
        let kernel = ChristoffelKernel::build(curve, opts.d_max, opts.kernel)?;
        Ok(Self {
            kernel,
            opts,
            samples: curve.len(),
        })
    }

    pub fn options(&self) -> &ClassifyOptions {
        &self.opts
    }

    pub fn kernel(&self) -> &ChristoffelKernel {
        &self.kernel
    }

    pub fn classify(&self, z: &[Complex64]) -> Result<ExtremalProfile> {
        let (log_k, shift) = self.kernel.log_kernel_refined(z, self.opts.query_radius)?;
        let d_max = self.opts.d_max;
        let degrees: Vec<u32> = (2..=d_max).collect();
        let lambda_hat: Vec<f64> = degrees
            .iter()
            .map(|&d| (log_k[d as usize] / (2.0 * d as f64)).exp())
            .collect();
        let window: Vec<u32> = (d_max / 2..=d_max).collect();
        let xs: Vec<f64> = window.iter().map(|&d| (d as f64).ln()).collect();
        let ys: Vec<f64> = window.iter().map(|&d| log_k[d as usize] / (2.0 * d as f64)).collect();
        let slope = ls_slope(&xs, &ys);
        let class = if slope > self.opts.out_threshold {
            Class::Out
        } else if slope < self.opts.in_threshold {
            Class::In
        } else {
            Class::Marginal
        };
        let lam = |d: u32| lambda_hat[(d - 2) as usize];
        let certificate = match class {
            Class::In => Certificate::Bounded {
                c_hat: lambda_hat.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            },
            _ => Certificate::Growth {
                d_low: d_max / 2,
                d_high: d_max,
                ratio: lam(d_max) / lam(d_max / 2),
            },
        };
        Ok(ExtremalProfile {
            z: z.iter().map(|c| [c.re, c.im]).collect(),
            degrees,
            lambda_hat,
            slope,
            class,
            certificate,
            query_shift: shift,
        })
    }

    /// Metadata describing the thresholds and numerics in force.
    pub fn calibration(&self, reference: Vec<CalibrationPoint>) -> Calibration {
        Calibration {
            in_threshold: self.opts.in_threshold,
            out_threshold: self.opts.out_threshold,
            slope_window: [self.opts.d_max / 2, self.opts.d_max],
            d_max: self.opts.d_max,
            samples: self.samples,
            precision_bits: self.opts.kernel.precision,
            residual_cutoff: self.opts.kernel.cutoff,
            query_radius: self.opts.query_radius,
            resampled: self.kernel.resampled(),
            dropped_per_degree: self.kernel.dropped_per_degree(),
            reference,
        }
    }

    /// Classifies labelled reference points and records the outcome.
    pub fn check_reference(&self, points: &[(String, Vec<Complex64>, Class)]) -> Result<Vec<CalibrationPoint>> {
        points
            .iter()
            .map(|(label, z, expected)| {
                let p = self.classify(z)?;
                Ok(CalibrationPoint {
                    label: label.clone(),
                    z: p.z.clone(),
                    expected: *expected,
                    class: p.class,
                    slope: p.slope,
                    growth_ratio: p.growth_ratio(),
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub label: String,
    pub z: Vec<[f64; 2]>,
    pub expected: Class,
    pub class: Class,
    pub slope: f64,
    pub growth_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub in_threshold: f64,
    pub out_threshold: f64,
    pub slope_window: [u32; 2],
    pub d_max: u32,
    pub samples: usize,
    pub precision_bits: u32,
    pub residual_cutoff: f64,
    pub query_radius: f64,
    pub resampled: bool,
    pub dropped_per_degree: Vec<usize>,
    pub reference: Vec<CalibrationPoint>,
}

/// Standard labelled points on the `example1-standard` curve: two on the graph of the
/// series, two off it.
pub fn gamma0_reference_points(omega2: Complex64) -> Vec<(String, Vec<Complex64>, Class)> {
    let c = Complex64::new;
    vec![
        ("(0,0)".into(), vec![c(0.0, 0.0), c(0.0, 0.0)], Class::In),
        ("(2,omega(2))".into(), vec![c(2.0, 0.0), omega2], Class::In),
        ("(0,0.5)".into(), vec![c(0.0, 0.0), c(0.5, 0.0)], Class::Out),
        ("(0.5,0)".into(), vec![c(0.5, 0.0), c(0.0, 0.0)], Class::Out),
    ]
}

pub fn classify_point(z: &[Complex64], curve: &SampledCurve, d_max: u32, opts: ClassifyOptions) -> Result<ExtremalProfile> {
    Classifier::new(curve, ClassifyOptions { d_max, ..opts })?.classify(z)
}

/// A complex line through a fixed point: coordinate `vary` ranges over a
/// rectangle, the others stay at `base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSlice {
    pub base: Vec<[f64; 2]>,
    pub vary: usize,
    /// `[re_min, im_min, re_max, im_max]`.
    pub rect: [f64; 4],
    /// `[columns, rows]`.
    pub resolution: [usize; 2],
}

impl GridSlice {
    pub fn validate(&self) -> Result<()> {
        let [nx, ny] = self.resolution;
        if nx == 0 || ny == 0 || nx > MAX_GRID_SIDE || ny > MAX_GRID_SIDE {
            return Err(HullError::Invalid(format!(
                "resolution {nx}x{ny} outside 1..={MAX_GRID_SIDE} per side"
            )));
        }
        if self.vary >= self.base.len() {
            return Err(HullError::Invalid(format!("varying coordinate {} out of range", self.vary)));
        }
        if self.rect.iter().any(|v| !v.is_finite()) {
            return Err(HullError::Invalid("rectangle must be finite".into()));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if n == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    /// Grid points, row-major with rows along the imaginary axis.
    pub fn points(&self) -> Vec<Vec<Complex64>> {
        let [nx, ny] = self.resolution;
        let [x0, y0, x1, y1] = self.rect;
        let base: Vec<Complex64> = self.base.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let mut z = base.clone();
                z[self.vary] = Complex64::new(Self::axis(x0, x1, nx, i), Self::axis(y0, y1, ny, j));
                out.push(z);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HullScanReport {
    pub curve_meta: serde_json::Value,
    pub slice: GridSlice,
    pub points: Vec<ExtremalProfile>,
    pub calibration: Calibration,
}

impl HullScanReport {
    /// CSV with header `re,im,lambda_max,slope,class`, row-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,lambda_max,slope,class\n");
        for p in &self.points {
            let v = p.z[self.slice.vary];
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_sig(v[0], CSV_SIG_DIGITS),
                fmt_sig(v[1], CSV_SIG_DIGITS),
                fmt_sig(p.lambda_max(), CSV_SIG_DIGITS),
                fmt_sig(p.slope, CSV_SIG_DIGITS),
                p.class.label()
            ));
        }
        out
    }

    /// ASCII PGM of the class labels.
    pub fn to_pgm(&self) -> String {
        let [nx, ny] = self.slice.resolution;
        let mut out = format!("P2\n{nx} {ny}\n255\n");
        for row in self.points.chunks(nx) {
            let line: Vec<String> = row.iter().map(|p| p.class.grey().to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn classify_grid(
    slice: &GridSlice,
    classifier: &Classifier,
    curve_meta: serde_json::Value,
    reference: Vec<CalibrationPoint>,
) -> Result<HullScanReport> {
    slice.validate()?;
    let points: Vec<ExtremalProfile> = slice
        .points()
        .par_iter()
        .map(|z| classifier.classify(z))
        .collect::<Result<_>>()?;
    Ok(HullScanReport {
        curve_meta,
        slice: slice.clone(),
        points,
        calibration: classifier.calibration(reference),
    })
}
