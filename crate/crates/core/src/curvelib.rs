//! Sampled closed curves, tube distances, and the two pole-series curve
//! families.
//!
//! The first family is the graph of
//! `omega(zeta) = sum_j c_j / (zeta - a_j) + sum_j c_j / a_j` over the unit
//! circle, with `a_j = 1 - eps_j`. The second replaces the single pole `a_k`
//! by its `k` rotations `e^{2 pi i l / k} a_k` and renormalizes so that the
//! function vanishes at the origin.
//!
//! Series constants are summed once per parameter set. Remainders are
//! certified by a geometric dominator: every supported variant has term
//! ratios `t_{n+1}/t_n` that decrease in `n`, so the ratio at the truncation
//! point bounds all later ratios.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};

/// Terms stored per parameter set. Must exceed the largest truncation used
/// plus the 60-term look-ahead of [`PoleSeriesParams::tail_bound`].
const STORED_TERMS: usize = 260;
const TAIL_LOOKAHEAD: usize = 60;
/// Tolerance used when sampling curves.
pub const CURVE_TAIL_TOL: f64 = 1e-12;
/// Points this close to the unit circle count as boundary points.
const BOUNDARY_SLACK: f64 = 4.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesVariant {
    /// `eps_n = 2^-n`, `c_n = 4^-n n^-n`.
    #[serde(rename = "example1-standard")]
    Example1Standard,
    /// `eps_n = 2^-n`, `c_n = 4^-n n^(-n^2)`.
    #[serde(rename = "example1-rapid")]
    Example1Rapid,
    /// Rotated poles with `eps_k = 2^-k`, `c_k = 4^-k k^-k`.
    #[serde(rename = "example2")]
    Example2,
}

impl SeriesVariant {
    pub const ALL: [SeriesVariant; 3] = [
        SeriesVariant::Example1Standard,
        SeriesVariant::Example1Rapid,
        SeriesVariant::Example2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesVariant::Example1Standard => "example1-standard",
            SeriesVariant::Example1Rapid => "example1-rapid",
            SeriesVariant::Example2 => "example2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s)
    }

    /// `ln c_n`.
    pub fn log_c(self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            SeriesVariant::Example1Standard | SeriesVariant::Example2 => {
                -nf * 4f64.ln() - nf * nf.ln()
            }
            SeriesVariant::Example1Rapid => -nf * 4f64.ln() - nf * nf * nf.ln(),
        }
    }

    /// Number of poles at level `n`.
    pub fn multiplicity(self, n: usize) -> usize {
        match self {
            SeriesVariant::Example2 => n,
            _ => 1,
        }
    }
}

impl std::fmt::Display for SeriesVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluated series value with its certified truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail: f64,
    pub terms: usize,
}

/// Sequences `eps_n`, `c_n`, `a_n = 1 - eps_n` and the derived constants.
#[derive(Clone, Debug)]
pub struct PoleSeriesParams {
    variant: SeriesVariant,
    /// `ln c_n`, index `n - 1`.
    log_c: Vec<f64>,
    /// `ln(m_n c_n / eps_n)` with `m_n` the pole multiplicity.
    log_weighted: Vec<f64>,
    kappa: f64,
    kappa_tail: f64,
}

impl PoleSeriesParams {
    pub fn new(variant: SeriesVariant) -> Self {
        let log_c: Vec<f64> = (1..=STORED_TERMS).map(|n| variant.log_c(n)).collect();
        let log_weighted = log_c
            .iter()
            .enumerate()
            .map(|(i, lc)| {
                let n = i + 1;
                lc + n as f64 * 2f64.ln() + (variant.multiplicity(n) as f64).ln()
            })
            .collect();
        let mut params = Self {
            variant,
            log_c,
            log_weighted,
            kappa: 0.0,
            kappa_tail: 0.0,
        };
        // kappa = sum c_n / a_n; its tail is dominated by the c/eps tail
        // since a_n >= eps_n.
        let cutoff = 80;
        params.kappa = (1..=cutoff).rev().map(|n| params.c(n) / params.a(n)).sum();
        params.kappa_tail = params.unweighted_tail(cutoff);
        params
    }

    pub fn standard() -> Self {
        Self::new(SeriesVariant::Example1Standard)
    }

    pub fn rapid() -> Self {
        Self::new(SeriesVariant::Example1Rapid)
    }

    pub fn variant(&self) -> SeriesVariant {
        self.variant
    }

    pub fn eps(&self, n: usize) -> f64 {
        assert!(n >= 1);
        2f64.powi(-(n as i32))
    }

    pub fn a(&self, n: usize) -> f64 {
        1.0 - self.eps(n)
    }

    pub fn log_c(&self, n: usize) -> f64 {
        assert!((1..=STORED_TERMS).contains(&n), "term {n} not stored");
        self.log_c[n - 1]
    }

    pub fn c(&self, n: usize) -> f64 {
        self.log_c(n).exp()
    }

    /// `kappa = sum_n c_n / a_n`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Certified bound on the error of the stored `kappa`.
    pub fn kappa_tail(&self) -> f64 {
        self.kappa_tail
    }

    /// `sum_{n <= N} c_n / a_n`.
    pub fn kappa_partial(&self, n: usize) -> f64 {
        (1..=n).rev().map(|j| self.c(j) / self.a(j)).sum()
    }

    /// `sum_n eps_n` (exactly 1 for `eps_n = 2^-n`).
    pub fn sum_eps(&self) -> f64 {
        1.0
    }

    fn log_term(&self, n: usize) -> f64 {
        self.log_weighted[n - 1]
    }

    /// Upper bound on `t_{n+1}/t_n` for all later `n` (the ratios decrease).
    fn dominator_ratio(&self, n: usize) -> f64 {
        (self.log_term(n + 1) - self.log_term(n)).exp()
    }

    /// `ln` of a certified upper bound on `sum_{n > N} m_n c_n / eps_n`,
    /// where `m_n` is the pole multiplicity (1 except for the rotated
    /// family). Partial sum to `N + 60` plus a geometric remainder.
    pub fn log_tail_bound(&self, n: usize) -> f64 {
        let last = n + TAIL_LOOKAHEAD;
        assert!(last + 2 <= STORED_TERMS, "truncation {n} too large");
        let rho = self.dominator_ratio(last + 1);
        let remainder = self.log_term(last + 1) - (1.0 - rho).ln();
        let logs: Vec<f64> = ((n + 1)..=last)
            .map(|j| self.log_term(j))
            .chain(std::iter::once(remainder))
            .collect();
        log_sum_exp(&logs)
    }

    /// Certified upper bound on `sum_{n > N} m_n c_n / eps_n`.
    pub fn tail_bound(&self, n: usize) -> f64 {
        self.log_tail_bound(n).exp()
    }

    /// Tail of `sum c_n / eps_n` without multiplicities.
    fn unweighted_tail(&self, n: usize) -> f64 {
        (n + 1..=n + TAIL_LOOKAHEAD)
            .map(|j| (self.log_c(j) + j as f64 * 2f64.ln()).exp())
            .sum::<f64>()
            * 2.0
    }

    /// `sum_n m_n c_n / eps_n` (for the rotated family this is the
    /// `sum k c_k / eps_k` constraint).
    pub fn weighted_sum(&self) -> f64 {
        (1..=TAIL_LOOKAHEAD)
            .rev()
            .map(|n| self.log_term(n).exp())
            .sum::<f64>()
            + self.tail_bound(TAIL_LOOKAHEAD)
    }

    /// Bound on `|omega - omega_N|` at points with `|zeta| >= 1`.
    pub fn boundary_tail(&self, n: usize) -> f64 {
        self.tail_bound(n) * (1.0 + self.eps(n + 1) / self.a(n + 1))
    }

    /// `zeta - a_j`, formed as `(zeta - 1) + eps_j` so it stays accurate
    /// near 1.
    pub fn offset(&self, zeta: Complex64, j: usize) -> Complex64 {
        Complex64::new(zeta.re - 1.0 + self.eps(j), zeta.im)
    }

    /// `omega_n(zeta) = sum_{j<=n} c_j/(zeta - a_j) + sum_{j<=n} c_j/a_j`.
    pub fn omega_partial(&self, n: usize, zeta: Complex64) -> Result<Complex64> {
        let mut poles = Complex64::new(0.0, 0.0);
        let mut constants = 0.0;
        for j in (1..=n).rev() {
            let den = self.offset(zeta, j);
            if den.re == 0.0 && den.im == 0.0 {
                return Err(HullError::Pole { index: j });
            }
            let c = self.c(j);
            poles += c / den;
            constants += c / self.a(j);
        }
        Ok(poles + constants)
    }

    /// `omega_N(zeta)` with `N` chosen so the certified tail is at most
    /// `tol`. Points inside the unit disk need a caller-supplied lower bound
    /// `delta` on the distance to every pole.
    pub fn omega_full(&self, zeta: Complex64, tol: f64, delta: Option<f64>) -> Result<SeriesValue> {
        if self.variant == SeriesVariant::Example2 {
            return self.omega_tilde_full(zeta, tol, delta);
        }
        let tail_at = self.tail_model(zeta, delta)?;
        let n = self.truncation_for(tol, &tail_at)?;
        Ok(SeriesValue {
            value: self.omega_partial(n, zeta)?,
            tail: tail_at(n),
            terms: n,
        })
    }

    fn truncation_for(&self, tol: f64, tail_at: &dyn Fn(usize) -> f64) -> Result<usize> {
        (1..=STORED_TERMS - TAIL_LOOKAHEAD - 2)
            .find(|&n| tail_at(n) <= tol)
            .ok_or_else(|| HullError::Domain(format!("tolerance {tol:e} not reachable")))
    }

    /// Returns the per-truncation tail bound for this evaluation point.
    fn tail_model(&self, zeta: Complex64, delta: Option<f64>) -> Result<Box<dyn Fn(usize) -> f64 + '_>> {
        if zeta.norm() >= 1.0 - BOUNDARY_SLACK {
            return Ok(Box::new(move |n| self.boundary_tail(n)));
        }
        let delta = delta.ok_or_else(|| {
            HullError::Domain(format!("{zeta} is inside the unit disk; a pole distance bound is required"))
        })?;
        if !(delta > 0.0) {
            return Err(HullError::Domain("pole distance bound must be positive".into()));
        }
        // Rotated poles accumulate on the whole circle, not only at 1.
        if self.variant == SeriesVariant::Example2 && zeta.norm() > 1.0 - delta {
            return Err(HullError::Domain(format!(
                "{zeta} is within {delta:e} of the unit circle, where rotated poles accumulate"
            )));
        }
        let to_one = (zeta - 1.0).norm();
        if to_one < delta {
            return Err(HullError::Domain(format!(
                "{zeta} is within {delta:e} of the accumulation point 1"
            )));
        }
        // Poles with eps_j < delta/2 sit within delta/2 of 1, hence at
        // distance >= delta/2 from zeta; earlier poles are checked directly.
        let mut j = 1;
        while self.eps(j) >= delta / 2.0 {
            for rot in self.rotations(j) {
                if (zeta - rot * self.a(j)).norm() < delta {
                    return Err(HullError::Domain(format!("{zeta} is within {delta:e} of a pole at level {j}")));
                }
            }
            j += 1;
        }
        let first_far = j;
        Ok(Box::new(move |n| {
            let lower = if n + 1 >= first_far { delta / 2.0 } else { delta };
            // |c/(zeta-a)| <= (c/eps) * eps/lower; the constant part as on the boundary.
            self.tail_bound(n) * self.eps(n + 1) * (1.0 / lower + 1.0 / self.a(n + 1))
        }))
    }

    fn rotations(&self, k: usize) -> Vec<Complex64> {
        match self.variant {
            SeriesVariant::Example2 => (1..=k).map(|l| root_of_unity(l, k)).collect(),
            _ => vec![Complex64::new(1.0, 0.0)],
        }
    }

    fn rotated_sum(&self, n: usize, zeta: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..=n).rev() {
            let c = self.c(k);
            let a = self.a(k);
            for l in 1..=k {
                let den = if l == k {
                    self.offset(zeta, k)
                } else {
                    zeta - root_of_unity(l, k) * a
                };
                if den.re == 0.0 && den.im == 0.0 {
                    return Err(HullError::RotatedPole { k, l });
                }
                acc += c / den;
            }
        }
        Ok(acc)
    }

    /// `kappa_n` normalizing the rotated partial sum to vanish at 0.
    pub fn kappa_tilde(&self, n: usize) -> Complex64 {
        self.rotated_sum(n, Complex64::new(0.0, 0.0))
            .expect("the origin is never a pole")
    }

    /// `omega~_n(zeta) = sum_{k<=n} sum_{l<=k} c_k/(zeta - e^{2 pi i l/k} a_k) - kappa_n`.
    pub fn omega_tilde_partial(&self, n: usize, zeta: Complex64) -> Result<Complex64> {
        Ok(self.rotated_sum(n, zeta)? - self.kappa_tilde(n))
    }

    fn omega_tilde_full(&self, zeta: Complex64, tol: f64, delta: Option<f64>) -> Result<SeriesValue> {
        let tail_at = self.tail_model(zeta, delta)?;
        let n = self.truncation_for(tol, &tail_at)?;
        Ok(SeriesValue {
            value: self.omega_tilde_partial(n, zeta)?,
            tail: tail_at(n),
            terms: n,
        })
    }

    /// Truncation used for curve samples (tail below [`CURVE_TAIL_TOL`] on
    /// the unit circle).
    pub fn curve_truncation(&self) -> usize {
        self.truncation_for(CURVE_TAIL_TOL, &|n| self.boundary_tail(n))
            .expect("boundary tolerance is reachable")
    }

    /// Partial sum matching the variant (plain or rotated).
    pub fn series_partial(&self, n: usize, zeta: Complex64) -> Result<Complex64> {
        match self.variant {
            SeriesVariant::Example2 => self.omega_tilde_partial(n, zeta),
            _ => self.omega_partial(n, zeta),
        }
    }
}

/// `e^{2 pi i l / k}`, exact on the axes.
pub fn root_of_unity(l: usize, k: usize) -> Complex64 {
    unit_root_sample(l, k)
}

/// `ln(sum exp(x_i))` computed stably; `-inf` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// One sample of a closed curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSample {
    pub t: f64,
    pub point: Vec<Complex64>,
}

/// Closed curve in `C^n` given by parameter-ordered samples.
#[derive(Clone, Debug)]
pub struct SampledCurve {
    n: usize,
    samples: Vec<CurveSample>,
    family: Option<SeriesVariant>,
    meta: serde_json::Map<String, serde_json::Value>,
}

pub const MIN_SAMPLES: usize = 16;
const MAX_GAP_RATIO: f64 = 8.0;

impl SampledCurve {
    /// Validates parameter order, sample count and the gap bound.
    pub fn new(n: usize, samples: Vec<CurveSample>) -> Result<Self> {
        if n == 0 {
            return Err(HullError::Invalid("ambient dimension must be positive".into()));
        }
        if samples.len() < MIN_SAMPLES {
            return Err(HullError::Invalid(format!(
                "a curve needs at least {MIN_SAMPLES} samples, got {}",
                samples.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|s| s.point.len() != n) {
            return Err(HullError::DimensionMismatch {
                expected: n,
                got: bad.point.len(),
            });
        }
        if samples.windows(2).any(|w| !(w[0].t < w[1].t)) {
            return Err(HullError::Invalid("sample parameters must be strictly increasing".into()));
        }
        let curve = Self {
            n,
            samples,
            family: None,
            meta: serde_json::Map::new(),
        };
        let gaps = curve.gaps();
        let mut sorted = gaps.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        let max = sorted[sorted.len() - 1];
        if max > MAX_GAP_RATIO * median {
            return Err(HullError::Invalid(format!(
                "sample gaps too uneven: max {max:e} exceeds {MAX_GAP_RATIO} x median {median:e}"
            )));
        }
        Ok(curve)
    }

    /// Equispaced unit circle in `C^1`.
    pub fn unit_circle(m: usize) -> Result<Self> {
        Self::from_parametrization(1, m, |t| vec![Complex64::from_polar(1.0, 2.0 * PI * t)])
    }

    /// Samples `t -> f(t)` at `t_k = k / m`.
    pub fn from_parametrization<F>(n: usize, m: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<Complex64>,
    {
        let samples = (0..m)
            .map(|k| {
                let t = k as f64 / m as f64;
                CurveSample { t, point: f(t) }
            })
            .collect();
        Self::new(n, samples)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn points(&self) -> impl Iterator<Item = &[Complex64]> {
        self.samples.iter().map(|s| s.point.as_slice())
    }

    pub fn closed(&self) -> bool {
        true
    }

    /// The series family this curve was sampled from, if any.
    pub fn family(&self) -> Option<SeriesVariant> {
        self.family
    }

    pub fn meta(&self) -> &serde_json::Map<String, serde_json::Value> {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut serde_json::Map<String, serde_json::Value> {
        &mut self.meta
    }

    /// Euclidean gaps between consecutive samples, including the closing gap.
    pub fn gaps(&self) -> Vec<f64> {
        let m = self.samples.len();
        (0..m)
            .map(|k| dist(&self.samples[k].point, &self.samples[(k + 1) % m].point))
            .collect()
    }

    /// Largest `|point|` over the samples.
    pub fn max_norm(&self) -> f64 {
        self.points().map(norm).fold(0.0, f64::max)
    }

    /// Distance from `z` to the curve: the nearest sample, refined by a
    /// quadratic through that sample and its two neighbours.
    pub fn dist_to_curve(&self, z: &[Complex64]) -> Result<f64> {
        if z.len() != self.n {
            return Err(HullError::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        let (k, best) = self
            .points()
            .map(|p| dist(z, p))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, d)| if d < acc.1 { (i, d) } else { acc });
        if best == 0.0 {
            return Ok(0.0);
        }
        let m = self.samples.len();
        let prev = &self.samples[(k + m - 1) % m].point;
        let here = &self.samples[k].point;
        let next = &self.samples[(k + 1) % m].point;
        Ok(best.min(quadratic_refine(z, prev, here, next)))
    }

    /// Whether `z` lies in the open tube of radius `r`.
    pub fn in_tube(&self, z: &[Complex64], r: f64) -> Result<bool> {
        Ok(self.dist_to_curve(z)? < r)
    }
}

/// `K_r`: the open tube of radius `r` around a sampled curve.
#[derive(Clone, Debug)]
pub struct TubeNeighborhood<'a> {
    curve: &'a SampledCurve,
    r: f64,
}

impl<'a> TubeNeighborhood<'a> {
    pub fn new(curve: &'a SampledCurve, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(HullError::Invalid(format!("tube radius must be positive, got {r}")));
        }
        Ok(Self { curve, r })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn curve(&self) -> &SampledCurve {
        self.curve
    }

    pub fn contains(&self, z: &[Complex64]) -> Result<bool> {
        self.curve.in_tube(z, self.r)
    }
}

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Minimum of `|z - q(s)|` for `s in [-1, 1]`, where `q` interpolates
/// `prev, here, next` at `s = -1, 0, 1`.
fn quadratic_refine(z: &[Complex64], prev: &[Complex64], here: &[Complex64], next: &[Complex64]) -> f64 {
    let at = |s: f64| -> f64 {
        let w_prev = 0.5 * s * (s - 1.0);
        let w_here = 1.0 - s * s;
        let w_next = 0.5 * s * (s + 1.0);
        z.iter()
            .enumerate()
            .map(|(i, zi)| (zi - (prev[i] * w_prev + here[i] * w_here + next[i] * w_next)).norm_sqr())
            .sum::<f64>()
    };
    const GRID: usize = 32;
    let h = 2.0 / GRID as f64;
    let (mut best_s, mut best) = (0.0, at(0.0));
    for i in 0..=GRID {
        let s = -1.0 + i as f64 * h;
        let v = at(s);
        if v < best {
            best = v;
            best_s = s;
        }
    }
    // golden-section search on the bracketing cell pair
    let (mut lo, mut hi) = ((best_s - h).max(-1.0), (best_s + h).min(1.0));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (at(x1), at(x2));
    for _ in 0..60 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = at(x2);
        }
    }
    best.min(f1).min(f2).sqrt()
}

/// Samples `(zeta_k, omega(zeta_k))`, `zeta_k = e^{2 pi i k/m}`, each with
/// certified tail at most [`CURVE_TAIL_TOL`].
pub fn build_curve(params: &PoleSeriesParams, m: usize) -> Result<SampledCurve> {
    if m < 64 {
        return Err(HullError::Invalid(format!("curve needs m >= 64 samples, got {m}")));
    }
    let n_terms = params.curve_truncation();
    let tail = params.boundary_tail(n_terms);
    let samples = (0..m)
        .map(|k| {
            let t = k as f64 / m as f64;
            let zeta = unit_root_sample(k, m);
            let w = params.series_partial(n_terms, zeta)?;
            Ok(CurveSample {
                t,
                point: vec![zeta, w],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut curve = SampledCurve::new(2, samples)?;
    curve.family = Some(params.variant());
    curve.meta.insert("family".into(), params.variant().name().into());
    curve.meta.insert("m".into(), m.into());
    curve.meta.insert("kappa".into(), params.kappa().into());
    curve.meta.insert("series_terms".into(), n_terms.into());
    curve.meta.insert("tail_bound".into(), tail.into());
    Ok(curve)
}

/// `e^{2 pi i k/m}` with exact values at the four axis points.
pub fn unit_root_sample(k: usize, m: usize) -> Complex64 {
    let k = k % m;
    if (4 * k) % m == 0 {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleJson {
    pub t: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Wire form: `{"n": int, "samples": [{"t", "re": [..], "im": [..]}], "meta": {..}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveJson {
    pub n: usize,
    pub samples: Vec<SampleJson>,
    #[serde(default)]
    pub meta: serde_json::Map<String, serde_json::Value>,
}

impl From<&SampledCurve> for CurveJson {
    fn from(c: &SampledCurve) -> Self {
        Self {
            n: c.n,
            samples: c
                .samples
                .iter()
                .map(|s| SampleJson {
                    t: s.t,
                    re: s.point.iter().map(|z| z.re).collect(),
                    im: s.point.iter().map(|z| z.im).collect(),
                })
                .collect(),
            meta: c.meta.clone(),
        }
    }
}

impl TryFrom<CurveJson> for SampledCurve {
    type Error = HullError;
    fn try_from(j: CurveJson) -> Result<Self> {
        let samples = j
            .samples
            .into_iter()
            .map(|s| {
                if s.re.len() != s.im.len() {
                    return Err(HullError::Invalid("re/im length mismatch in curve sample".into()));
                }
                Ok(CurveSample {
                    t: s.t,
                    point: s.re.iter().zip(&s.im).map(|(&r, &i)| Complex64::new(r, i)).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut curve = SampledCurve::new(j.n, samples)?;
        curve.family = j
            .meta
            .get("family")
            .and_then(|v| v.as_str())
            .and_then(SeriesVariant::parse);
        curve.meta = j.meta;
        Ok(curve)
    }
}
