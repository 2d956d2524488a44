//! Blaschke products, rational analytic disks and the subharmonic test
//! function `chi(zeta) = log|P(f(zeta))| + d log|B(zeta)|`.
//!
//! Disks are given in partial-fraction form: each coordinate is a
//! polynomial in `zeta` plus terms `residue / (zeta - pole)^order`. Poles are
//! explicit data and are never recovered by root finding.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvelib::{unit_root_sample, PoleSeriesParams, SampledCurve, SeriesVariant};
use crate::error::{HullError, Result};
use crate::polyring::ComplexPolynomial;

/// Boundary evaluation slack for `|zeta| <= 1`.
const BOUNDARY_SLACK: f64 = 1e-9;
/// Tolerance on `|f(0) - z0|` for condition (ii).
pub const CENTER_TOL: f64 = 1e-12;
/// Slack allowed by the maximum-principle comparisons.
pub const MAX_PRINCIPLE_SLACK: f64 = 1e-8;

/// `sum log|z_j|`; `-inf` when some `z_j` is 0.
pub fn log_abs_sum(points: &[Complex64]) -> f64 {
    points.iter().map(|z| z.norm().ln()).sum()
}

/// `B(zeta) = prod (zeta - zeta_j) / (1 - conj(zeta_j) zeta)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        if let Some(z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(HullError::Invalid(format!("Blaschke zero {z} is not in the open unit disk")));
        }
        Ok(Self { zeros })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    fn check_domain(zeta: Complex64) -> Result<()> {
        if zeta.norm() > 1.0 + BOUNDARY_SLACK {
            return Err(HullError::Domain(format!("{zeta} lies outside the closed unit disk")));
        }
        Ok(())
    }

    fn factor(zero: Complex64, zeta: Complex64) -> Complex64 {
        (zeta - zero) / (1.0 - zero.conj() * zeta)
    }

    /// Factor-by-factor product in stored order.
    pub fn eval(&self, zeta: Complex64) -> Result<Complex64> {
        Self::check_domain(zeta)?;
        Ok(self
            .zeros
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &z| acc * Self::factor(z, zeta)))
    }

    /// `log|B(zeta)|` as a sum of factor logs (no underflow for many zeros).
    pub fn log_abs(&self, zeta: Complex64) -> Result<f64> {
        Self::check_domain(zeta)?;
        Ok(self.zeros.iter().map(|&z| Self::factor(z, zeta).norm().ln()).sum())
    }

    /// `log|B(0)| = sum log|zeta_j|`.
    pub fn log_center(&self) -> f64 {
        log_abs_sum(&self.zeros)
    }

    /// `B_j(zeta_j) / (1 - |zeta_j|^2)`: the derivative of `B` at its
    /// simple zero `zeta_j`. Repeated zeros are included in `B_j`.
    pub fn derivative_at_zero(&self, j: usize) -> Complex64 {
        let zj = self.zeros[j];
        let rest = self
            .zeros
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .fold(Complex64::new(1.0, 0.0), |acc, (_, &z)| acc * Self::factor(z, zj));
        rest / (1.0 - zj.norm_sqr())
    }

    /// `max_k ||B(e^{2 pi i k/m})| - 1|`.
    pub fn boundary_deviation(&self, m: usize) -> f64 {
        (0..m)
            .map(|k| {
                let b = self.eval(unit_root_sample(k, m)).expect("boundary point");
                (b.norm() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// One principal-part term `residue / (zeta - pole)^order`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub residue: Complex64,
    pub order: u32,
}

impl PoleTerm {
    pub fn simple(pole: Complex64, residue: Complex64) -> Self {
        Self { pole, residue, order: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiskComponent {
    /// Coefficients of the polynomial part, ascending powers of `zeta`.
    pub poly: Vec<Complex64>,
    pub poles: Vec<PoleTerm>,
}

impl DiskComponent {
    pub fn polynomial(poly: Vec<Complex64>) -> Self {
        Self { poly, poles: Vec::new() }
    }

    fn poly_value(&self, zeta: Complex64) -> Complex64 {
        self.poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * zeta + c)
    }

    /// Polynomial part plus principal parts. The two are summed separately
    /// so that exactly cancelling normalizations give exact zeros.
    fn value(&self, zeta: Complex64) -> Complex64 {
        let principal = self
            .poles
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, t| acc + t.residue / (zeta - t.pole).powu(t.order));
        principal + self.poly_value(zeta)
    }
}

/// A pole of the disk with its residue vector (zero where a coordinate is
/// regular) and the simplicity flag of condition (iv).
#[derive(Clone, Debug, PartialEq)]
pub struct PoleInfo {
    pub pole: Complex64,
    pub residue: Vec<Complex64>,
    pub simple: bool,
}

/// `f: closed unit disk -> P^n`, affine coordinates in partial fractions.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalDiskMap {
    n: usize,
    components: Vec<DiskComponent>,
    pole_list: Vec<PoleInfo>,
}

/// Image of a disk point: affine, or the point `[0 : direction]` of the
/// hyperplane at infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum DiskPoint {
    Affine(Vec<Complex64>),
    Infinity(Vec<Complex64>),
}

impl DiskPoint {
    pub fn affine(&self) -> Option<&[Complex64]> {
        match self {
            DiskPoint::Affine(z) => Some(z),
            DiskPoint::Infinity(_) => None,
        }
    }

    /// Homogeneous coordinates `[1 : z]` or `[0 : direction]`.
    pub fn homogeneous(&self) -> Vec<Complex64> {
        let (head, rest) = match self {
            DiskPoint::Affine(z) => (1.0, z),
            DiskPoint::Infinity(v) => (0.0, v),
        };
        std::iter::once(Complex64::new(head, 0.0)).chain(rest.iter().copied()).collect()
    }
}

impl RationalDiskMap {
    pub fn new(components: Vec<DiskComponent>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(HullError::Invalid("a disk map needs at least one coordinate".into()));
        }
        let mut pole_list: Vec<PoleInfo> = Vec::new();
        for (i, comp) in components.iter().enumerate() {
            for t in &comp.poles {
                if !(t.pole.norm() < 1.0) {
                    return Err(HullError::Invalid(format!("pole {} is not inside the unit disk", t.pole)));
                }
                if t.order == 0 {
                    return Err(HullError::Invalid("pole term of order 0".into()));
                }
                let idx = match pole_list.iter().position(|p| p.pole == t.pole) {
                    Some(idx) => idx,
                    None => {
                        pole_list.push(PoleInfo {
                            pole: t.pole,
                            residue: vec![Complex64::new(0.0, 0.0); n],
                            simple: true,
                        });
                        pole_list.len() - 1
                    }
                };
                let info = &mut pole_list[idx];
                let repeated = info.residue[i] != Complex64::new(0.0, 0.0)
                    || comp.poles.iter().filter(|u| u.pole == t.pole).count() > 1;
                if t.order > 1 || repeated {
                    info.simple = false;
                }
                info.residue[i] += t.residue;
            }
        }
        Ok(Self { n, components, pole_list })
    }

    /// The constant disk `f = z0`.
    pub fn constant(z0: &[Complex64]) -> Result<Self> {
        Self::new(z0.iter().map(|&c| DiskComponent::polynomial(vec![c])).collect())
    }

    /// `f(zeta) = (z0_1 + zeta, ..., z0_n + sum c_j/(zeta - a_j) + sum c_j/a_j)`:
    /// simple poles at `a_j` in the last coordinate, normalized so that
    /// `f(0) = z0`. For `n = 1` both parts share the single coordinate.
    pub fn pole_family(z0: &[Complex64], a: &[f64], c: &[f64]) -> Result<Self> {
        if a.len() != c.len() {
            return Err(HullError::DimensionMismatch { expected: a.len(), got: c.len() });
        }
        let n = z0.len();
        if n == 0 {
            return Err(HullError::Invalid("empty base point".into()));
        }
        // Reverse order, matching the series partial sums.
        let order: Vec<usize> = (0..a.len()).rev().collect();
        let normalization: f64 = order.iter().map(|&j| c[j] / a[j]).sum();
        let poles = order
            .iter()
            .map(|&j| PoleTerm::simple(Complex64::new(a[j], 0.0), Complex64::new(c[j], 0.0)))
            .collect();
        let mut comps: Vec<DiskComponent> = z0.iter().map(|&z| DiskComponent::polynomial(vec![z])).collect();
        comps[0].poly.push(Complex64::new(1.0, 0.0));
        let last = &mut comps[n - 1];
        last.poly[0] += normalization;
        last.poles = poles;
        Self::new(comps)
    }

    /// `f_n(zeta) = (zeta, omega_n(zeta))`, or `(zeta, omega~_n(zeta))` for the
    /// rotated family.
    pub fn series_family(params: &PoleSeriesParams, n: usize) -> Result<Self> {
        if params.variant() != SeriesVariant::Example2 {
            let a: Vec<f64> = (1..=n).map(|j| params.a(j)).collect();
            let c: Vec<f64> = (1..=n).map(|j| params.c(j)).collect();
            return Self::pole_family(&[Complex64::new(0.0, 0.0); 2], &a, &c);
        }
        let mut poles = Vec::new();
        for k in (1..=n).rev() {
            for l in 1..=k {
                let pole = crate::curvelib::root_of_unity(l, k) * params.a(k);
                poles.push(PoleTerm::simple(pole, Complex64::new(params.c(k), 0.0)));
            }
        }
        let first = DiskComponent::polynomial(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let second = DiskComponent {
            poly: vec![-params.kappa_tilde(n)],
            poles,
        };
        Self::new(vec![first, second])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[DiskComponent] {
        &self.components
    }

    pub fn pole_list(&self) -> &[PoleInfo] {
        &self.pole_list
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.pole_list.iter().map(|p| p.pole).collect()
    }

    /// Blaschke product vanishing exactly at the poles, in pole-list order.
    pub fn blaschke(&self) -> BlaschkeProduct {
        BlaschkeProduct { zeros: self.poles() }
    }

    /// Affine value, assuming `zeta` is not a pole.
    fn affine_value(&self, zeta: Complex64) -> Vec<Complex64> {
        self.components.iter().map(|c| c.value(zeta)).collect()
    }

    fn pole_index(&self, zeta: Complex64) -> Option<usize> {
        self.pole_list.iter().position(|p| p.pole == zeta)
    }

    pub fn eval(&self, zeta: Complex64) -> Result<DiskPoint> {
        if zeta.norm() > 1.0 + BOUNDARY_SLACK {
            return Err(HullError::Domain(format!("{zeta} lies outside the closed unit disk")));
        }
        match self.pole_index(zeta) {
            None => Ok(DiskPoint::Affine(self.affine_value(zeta))),
            Some(j) => {
                let info = &self.pole_list[j];
                if !info.simple {
                    let order = self.components.iter().flat_map(|c| &c.poles).filter(|t| t.pole == zeta).map(|t| t.order).max().unwrap_or(1);
                    return Err(HullError::UnsupportedPole { pole: zeta, order });
                }
                Ok(DiskPoint::Infinity(info.residue.clone()))
            }
        }
    }

    /// `f(e^{2 pi i k/m})` for `k = 0..m`.
    pub fn boundary_values(&self, m: usize) -> Vec<Vec<Complex64>> {
        (0..m).map(|k| self.affine_value(unit_root_sample(k, m))).collect()
    }

    fn require_simple(&self) -> Result<()> {
        if let Some(p) = self.pole_list.iter().find(|p| !p.simple) {
            let order = self.components.iter().flat_map(|c| &c.poles).filter(|t| t.pole == p.pole).map(|t| t.order).max().unwrap_or(1);
            return Err(HullError::UnsupportedPole { pole: p.pole, order });
        }
        Ok(())
    }

    fn require_matching(&self, b: &BlaschkeProduct) -> Result<()> {
        let key = |z: &Complex64| (z.re.to_bits(), z.im.to_bits());
        let poles: BTreeSet<_> = self.pole_list.iter().map(|p| key(&p.pole)).collect();
        let zeros: BTreeSet<_> = b.zeros.iter().map(key).collect();
        if poles != zeros || b.zeros.len() != self.pole_list.len() {
            return Err(HullError::Invalid("Blaschke zeros must equal the disk poles".into()));
        }
        Ok(())
    }
}

/// `Sigma log|zeta_j|` over the poles of `f`.
pub fn disk_functional(f: &RationalDiskMap) -> f64 {
    log_abs_sum(&f.poles())
}

/// A value of `chi`; `NegInfinity` when `P(f(zeta)) = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Chi {
    Finite(f64),
    NegInfinity,
}

impl Chi {
    fn from_log(x: f64) -> Self {
        if x == f64::NEG_INFINITY {
            Chi::NegInfinity
        } else {
            Chi::Finite(x)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Chi::Finite(x) => x,
            Chi::NegInfinity => f64::NEG_INFINITY,
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, Chi::NegInfinity)
    }
}

/// `chi(zeta) = log|P(f(zeta))| + d log|B(zeta)|`. At a pole `zeta_j` the
/// removable limit `log|P^h(0, r_j)| + d log|B'(zeta_j)|` is returned, where
/// `P^h` is the degree-`d` homogenization and `r_j` the residue vector.
pub fn chi_eval(p: &ComplexPolynomial, d: u32, f: &RationalDiskMap, b: &BlaschkeProduct, zeta: Complex64) -> Result<Chi> {
    if p.degree() > d {
        return Err(HullError::DegreeExceeded { degree: p.degree(), bound: d });
    }
    if p.n_vars() != f.n() {
        return Err(HullError::DimensionMismatch { expected: f.n(), got: p.n_vars() });
    }
    f.require_matching(b)?;
    match f.pole_index(zeta) {
        None => {
            let z = f.affine_value(zeta);
            let lp = p.eval(&z)?.norm().ln();
            let lb = b.log_abs(zeta)?;
            Ok(Chi::from_log(lp + d as f64 * lb))
        }
        Some(j) => {
            f.require_simple()?;
            let info = &f.pole_list[j];
            let mut lifted = vec![Complex64::new(0.0, 0.0)];
            lifted.extend_from_slice(&info.residue);
            let top = p.homogenize(d)?.eval(&lifted)?;
            let zj = b.zeros.iter().position(|&z| z == zeta).expect("zeros match poles");
            let deriv = b.derivative_at_zero(zj);
            Ok(Chi::from_log(top.norm().ln() + d as f64 * deriv.norm().ln()))
        }
    }
}

/// Interior radial-angular grid: radii `i / radial` for `i < radial`,
/// angles `2 pi k / angular`.
#[derive(Clone, Copy, Debug)]
pub struct DiskGrid {
    pub radial: usize,
    pub angular: usize,
}

impl DiskGrid {
    pub const MIN: DiskGrid = DiskGrid { radial: 64, angular: 64 };

    pub fn points(self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.radial * self.angular);
        for i in 0..self.radial {
            let rho = i as f64 / self.radial as f64;
            for k in 0..self.angular {
                pts.push(Complex64::from_polar(rho, 2.0 * PI * k as f64 / self.angular as f64));
            }
        }
        pts
    }

    fn validate(self) -> Result<()> {
        if self.radial < 64 || self.angular < 64 {
            return Err(HullError::Invalid(format!(
                "grid {}x{} is below the 64x64 minimum",
                self.radial, self.angular
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MaxPrincipleReport {
    pub interior_max: f64,
    pub boundary_max: f64,
    pub pass: bool,
}

/// Max over a point set, in point order; `-inf` values are legal.
fn ordered_max(values: Vec<f64>) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Compares the interior grid maximum of `chi` with its boundary maximum.
pub fn max_principle_check(
    p: &ComplexPolynomial,
    d: u32,
    f: &RationalDiskMap,
    b: &BlaschkeProduct,
    grid: DiskGrid,
    m_bdy: usize,
) -> Result<MaxPrincipleReport> {
    grid.validate()?;
    let chi = |z: Complex64| chi_eval(p, d, f, b, z).map(Chi::value);
    let interior = grid.points().into_par_iter().map(chi).collect::<Result<Vec<_>>>()?;
    let boundary = (0..m_bdy)
        .into_par_iter()
        .map(|k| chi(unit_root_sample(k, m_bdy)))
        .collect::<Result<Vec<_>>>()?;
    let interior_max = ordered_max(interior);
    let boundary_max = ordered_max(boundary);
    Ok(MaxPrincipleReport {
        interior_max,
        boundary_max,
        pass: interior_max <= boundary_max + MAX_PRINCIPLE_SLACK,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MembershipBound {
    /// `log|P(f(a))|`.
    pub log_lhs: f64,
    /// `log(sup) - d log|B(a)|`.
    pub log_rhs: f64,
    pub holds: bool,
}

/// Checks `|P(f(a))| <= sup_on_tube |1/B(a)|^d` in log-space.
pub fn membership_bound_check(
    p: &ComplexPolynomial,
    d: u32,
    f: &RationalDiskMap,
    b: &BlaschkeProduct,
    a: Complex64,
    sup_on_tube: f64,
) -> Result<MembershipBound> {
    if p.degree() > d {
        return Err(HullError::DegreeExceeded { degree: p.degree(), bound: d });
    }
    let ba = b.eval(a)?;
    if ba == Complex64::new(0.0, 0.0) || f.pole_index(a).is_some() {
        return Err(HullError::BlaschkeZero(a));
    }
    let log_lhs = p.eval(&f.affine_value(a))?.norm().ln();
    let log_rhs = sup_on_tube.ln() - d as f64 * b.log_abs(a)?;
    Ok(MembershipBound {
        log_lhs,
        log_rhs,
        holds: log_lhs <= log_rhs,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GProductReport {
    pub boundary_sup: f64,
    /// `G(zeta_j) = r_j B'(zeta_j)` per pole, in pole-list order.
    pub pole_values: Vec<Vec<Complex64>>,
    pub interior_max: f64,
    pub max_principle_holds: bool,
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// `G = f B`, which is holomorphic once every pole is simple.
pub fn g_product_bound(f: &RationalDiskMap, b: &BlaschkeProduct, m_bdy: usize) -> Result<GProductReport> {
    f.require_simple()?;
    f.require_matching(b)?;
    let g = |zeta: Complex64| -> Result<Vec<Complex64>> {
        match f.pole_index(zeta) {
            None => {
                let bz = b.eval(zeta)?;
                Ok(f.affine_value(zeta).into_iter().map(|w| w * bz).collect())
            }
            Some(j) => {
                let zj = b.zeros.iter().position(|&z| z == zeta).expect("zeros match poles");
                let deriv = b.derivative_at_zero(zj);
                Ok(f.pole_list[j].residue.iter().map(|r| r * deriv).collect())
            }
        }
    };
    let pole_values = f.pole_list.iter().map(|p| g(p.pole)).collect::<Result<Vec<_>>>()?;
    let boundary = (0..m_bdy)
        .into_par_iter()
        .map(|k| g(unit_root_sample(k, m_bdy)).map(|v| vec_norm(&v)))
        .collect::<Result<Vec<_>>>()?;
    let interior = DiskGrid::MIN
        .points()
        .into_par_iter()
        .map(|z| g(z).map(|v| vec_norm(&v)))
        .collect::<Result<Vec<_>>>()?;
    let boundary_sup = ordered_max(boundary);
    let interior_max = ordered_max(interior);
    Ok(GProductReport {
        boundary_sup,
        pole_values,
        interior_max,
        max_principle_holds: interior_max <= boundary_sup + MAX_PRINCIPLE_SLACK,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionI {
    pub holds: bool,
    pub max_boundary_distance: f64,
    /// Holds with the safety factor: distance below `r / 2`.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionII {
    pub holds: bool,
    pub center_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionIII {
    pub holds: bool,
    pub pole_log_sum: f64,
    pub m: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionIV {
    pub holds: bool,
    pub offending_poles: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiskConditionsReport {
    pub cond_i: ConditionI,
    pub cond_ii: ConditionII,
    pub cond_iii: ConditionIII,
    pub cond_iv: ConditionIV,
    /// `2 max_gamma (1 + |z|^2)^{1/2}`: converts the affine bound
    /// `|P(f(a))| <= 2 |1/B(a)|^d` into a section-norm bound
    /// `||P(f(a))|| <= |kappa / B(a)|^d ||P||_gamma` for `d >= 1`.
    pub section_kappa: f64,
}

impl DiskConditionsReport {
    pub fn all_hold(&self) -> bool {
        self.cond_i.holds && self.cond_ii.holds && self.cond_iii.holds && self.cond_iv.holds
    }
}

/// `2 max_gamma (1 + |z|^2)^{1/2}`.
pub fn section_kappa(curve: &SampledCurve) -> f64 {
    2.0 * (1.0 + curve.max_norm().powi(2)).sqrt()
}

pub fn check_conditions(
    f: &RationalDiskMap,
    curve: &SampledCurve,
    r: f64,
    z0: &[Complex64],
    m: f64,
    m_bdy: usize,
) -> Result<DiskConditionsReport> {
    if m_bdy < 256 {
        return Err(HullError::Invalid(format!("m_bdy = {m_bdy} is below 256")));
    }
    if !(r > 0.0) {
        return Err(HullError::Invalid(format!("tube radius must be positive, got {r}")));
    }
    if z0.len() != f.n() {
        return Err(HullError::DimensionMismatch { expected: f.n(), got: z0.len() });
    }
    if curve.n() != f.n() {
        return Err(HullError::DimensionMismatch { expected: curve.n(), got: f.n() });
    }
    let distances = f
        .boundary_values(m_bdy)
        .into_par_iter()
        .map(|w| curve.dist_to_curve(&w))
        .collect::<Result<Vec<_>>>()?;
    let max_boundary_distance = ordered_max(distances);
    let center_distance = match f.eval(Complex64::new(0.0, 0.0))? {
        DiskPoint::Affine(w) => vec_norm(&w.iter().zip(z0).map(|(a, b)| a - b).collect::<Vec<_>>()),
        DiskPoint::Infinity(_) => f64::INFINITY,
    };
    let pole_log_sum = f.blaschke().log_center();
    let offending_poles: Vec<Complex64> = f.pole_list.iter().filter(|p| !p.simple).map(|p| p.pole).collect();
    Ok(DiskConditionsReport {
        cond_i: ConditionI {
            holds: max_boundary_distance < r,
            max_boundary_distance,
            certified: max_boundary_distance < 0.5 * r,
        },
        cond_ii: ConditionII {
            holds: center_distance <= CENTER_TOL * (1.0 + vec_norm(z0)),
            center_distance,
        },
        cond_iii: ConditionIII {
            holds: pole_log_sum >= -m,
            pole_log_sum,
            m,
        },
        cond_iv: ConditionIV {
            holds: offending_poles.is_empty(),
            offending_poles,
        },
        section_kappa: section_kappa(curve),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleJson {
    pub re: f64,
    pub im: f64,
    pub res_re: f64,
    pub res_im: f64,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub order: u32,
}

fn one() -> u32 {
    1
}

fn is_one(x: &u32) -> bool {
    *x == 1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComponentJson {
    pub poly: Vec<CoefficientJson>,
    pub poles: Vec<PoleJson>,
}

/// Wire form `{"n": int, "components": [{"poly": [..], "poles": [..]}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiskMapJson {
    pub n: usize,
    pub components: Vec<ComponentJson>,
}

impl From<&RationalDiskMap> for DiskMapJson {
    fn from(f: &RationalDiskMap) -> Self {
        Self {
            n: f.n,
            components: f
                .components
                .iter()
                .map(|c| ComponentJson {
                    poly: c.poly.iter().map(|z| CoefficientJson { re: z.re, im: z.im }).collect(),
                    poles: c
                        .poles
                        .iter()
                        .map(|t| PoleJson {
                            re: t.pole.re,
                            im: t.pole.im,
                            res_re: t.residue.re,
                            res_im: t.residue.im,
                            order: t.order,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<DiskMapJson> for RationalDiskMap {
    type Error = HullError;
    fn try_from(j: DiskMapJson) -> Result<Self> {
        if j.components.len() != j.n {
            return Err(HullError::DimensionMismatch { expected: j.n, got: j.components.len() });
        }
        RationalDiskMap::new(
            j.components
                .into_iter()
                .map(|c| DiskComponent {
                    poly: c.poly.into_iter().map(|z| Complex64::new(z.re, z.im)).collect(),
                    poles: c
                        .poles
                        .into_iter()
                        .map(|p| PoleTerm {
                            pole: Complex64::new(p.re, p.im),
                            residue: Complex64::new(p.res_re, p.res_im),
                            order: p.order,
                        })
                        .collect(),
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvelib::build_curve;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn w_poly() -> ComplexPolynomial {
        ComplexPolynomial::variable(2, 1)
    }

    /// `f(zeta) = (zeta, 0.25/(zeta - 0.5))`.
    fn harmonic_case() -> (RationalDiskMap, BlaschkeProduct) {
        let f = RationalDiskMap::new(vec![
            DiskComponent::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0)]),
            DiskComponent {
                poly: vec![],
                poles: vec![PoleTerm::simple(c(0.5, 0.0), c(0.25, 0.0))],
            },
        ])
        .unwrap();
        let b = f.blaschke();
        (f, b)
    }

    #[test]
    fn blaschke_examples() {
        let empty = BlaschkeProduct::default();
        assert_eq!(empty.eval(c(0.3, -0.2)).unwrap(), c(1.0, 0.0));
        assert_eq!(empty.log_center(), 0.0);
        let half = BlaschkeProduct::new(vec![c(0.5, 0.0)]).unwrap();
        assert_eq!(half.eval(c(0.0, 0.0)).unwrap(), c(-0.5, 0.0));
        let two = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.0, 0.3)]).unwrap();
        let v = two.eval(Complex64::from_polar(1.0, PI / 3.0)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-12);
        let example = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.75, 0.0), c(0.875, 0.0)]).unwrap();
        assert!((example.log_center() - (-1.114_360_645_636_249)).abs() < 1e-12);
        assert!(BlaschkeProduct::new(vec![c(1.0, 0.0)]).is_err());
        assert!(half.eval(c(1.1, 0.0)).is_err());
    }

    #[test]
    fn thirty_series_zeros() {
        let zeros = (1..=30).map(|j| c(1.0 - 2f64.powi(-j), 0.0)).collect();
        let b = BlaschkeProduct::new(zeros).unwrap();
        assert!((b.log_center() - (-1.242_062_094_8)).abs() < 1e-6);
    }

    #[test]
    fn center_identity_without_zero_at_origin() {
        let b = BlaschkeProduct::new(vec![c(0.2, 0.1), c(-0.7, 0.3), c(0.0, -0.95)]).unwrap();
        let direct = b.eval(c(0.0, 0.0)).unwrap().norm().ln();
        assert!((direct - b.log_center()).abs() < 1e-12);
        let with_zero = BlaschkeProduct::new(vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(with_zero.log_center(), f64::NEG_INFINITY);
    }

    #[test]
    fn eval_disk_examples() {
        let p = PoleSeriesParams::standard();
        let f1 = RationalDiskMap::series_family(&p, 1).unwrap();
        assert_eq!(f1.eval(c(0.0, 0.0)).unwrap(), DiskPoint::Affine(vec![c(0.0, 0.0); 2]));
        let at_m1 = f1.eval(c(-1.0, 0.0)).unwrap();
        let w = at_m1.affine().unwrap();
        assert_eq!(w[0], c(-1.0, 0.0));
        assert!((w[1] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        match f1.eval(c(0.5, 0.0)).unwrap() {
            DiskPoint::Infinity(dir) => {
                assert_eq!(dir[0], c(0.0, 0.0));
                assert_ne!(dir[1], c(0.0, 0.0));
            }
            other => panic!("expected a point at infinity, got {other:?}"),
        }
        assert!(f1.eval(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn series_family_center_is_exact() {
        let p = PoleSeriesParams::standard();
        for n in 1..=30 {
            let f = RationalDiskMap::series_family(&p, n).unwrap();
            assert_eq!(f.eval(c(0.0, 0.0)).unwrap(), DiskPoint::Affine(vec![c(0.0, 0.0); 2]), "n = {n}");
        }
        let rotated = RationalDiskMap::series_family(&PoleSeriesParams::new(SeriesVariant::Example2), 4).unwrap();
        assert_eq!(rotated.pole_list().len(), 10);
        let v = rotated.eval(c(0.0, 0.0)).unwrap();
        assert!(vec_norm(v.affine().unwrap()) < 1e-15);
    }

    #[test]
    fn non_simple_poles() {
        let f = RationalDiskMap::new(vec![DiskComponent {
            poly: vec![],
            poles: vec![PoleTerm { pole: c(0.1, 0.0), residue: c(1.0, 0.0), order: 2 }],
        }])
        .unwrap();
        assert!(!f.pole_list()[0].simple);
        assert!(matches!(f.eval(c(0.1, 0.0)), Err(HullError::UnsupportedPole { order: 2, .. })));
        assert!(g_product_bound(&f, &f.blaschke(), 256).is_err());
        // two coordinates sharing one simple pole stay simple
        let shared = RationalDiskMap::new(vec![
            DiskComponent { poly: vec![], poles: vec![PoleTerm::simple(c(0.1, 0.0), c(1.0, 0.0))] },
            DiskComponent { poly: vec![], poles: vec![PoleTerm::simple(c(0.1, 0.0), c(2.0, 0.0))] },
        ])
        .unwrap();
        assert_eq!(shared.pole_list().len(), 1);
        assert!(shared.pole_list()[0].simple);
    }

    #[test]
    fn chi_closed_form() {
        let (f, b) = harmonic_case();
        let chi = |z| chi_eval(&w_poly(), 1, &f, &b, z).unwrap().value();
        assert!((chi(c(0.0, 0.0)) - 0.25f64.ln()).abs() < 1e-14);
        assert!((chi(c(1.0, 0.0)) - (0.25f64.ln() - 0.5f64.ln())).abs() < 1e-14);
        assert!((chi(c(0.5, 0.0)) - (0.25f64.ln() - 0.75f64.ln())).abs() < 1e-14);
        let far = chi_eval(&ComplexPolynomial::zero(2), 1, &f, &b, c(0.2, 0.0)).unwrap();
        assert!(far.is_neg_infinity());
    }

    #[test]
    fn chi_requires_matching_blaschke() {
        let (f, _) = harmonic_case();
        let wrong = BlaschkeProduct::new(vec![c(0.4, 0.0)]).unwrap();
        assert!(chi_eval(&w_poly(), 1, &f, &wrong, c(0.0, 0.0)).is_err());
        assert!(chi_eval(&(&w_poly() * &w_poly()), 1, &f, &f.blaschke(), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn chi_is_continuous_at_poles() {
        let p = PoleSeriesParams::standard();
        let f = RationalDiskMap::series_family(&p, 3).unwrap();
        let b = f.blaschke();
        // the top-degree part w^2 does not vanish on the residue direction
        let top = &(&w_poly() * &w_poly()) + &(&w_poly() * &ComplexPolynomial::variable(2, 0));
        let poly = &top + &ComplexPolynomial::constant(2, c(0.3, 0.1));
        for pole in f.poles() {
            let at = chi_eval(&poly, 2, &f, &b, pole).unwrap().value();
            // chi is harmonic near the pole, so the circle mean is the centre value
            let mut mean = 0.0;
            for k in 0..16 {
                let z = pole + Complex64::from_polar(1e-4, 2.0 * PI * k as f64 / 16.0);
                let near = chi_eval(&poly, 2, &f, &b, z).unwrap().value();
                mean += near / 16.0;
            }
            assert!((mean - at).abs() < 1e-6, "{pole}: mean {mean} vs {at}");
        }
    }

    #[test]
    fn max_principle_cases() {
        let (f, b) = harmonic_case();
        let rep = max_principle_check(&w_poly(), 1, &f, &b, DiskGrid::MIN, 1024).unwrap();
        assert!((rep.boundary_max - (-0.693_147_180_559_945_3)).abs() < 1e-12);
        assert!(rep.interior_max < rep.boundary_max);
        assert!(rep.pass);
        let constant = ComplexPolynomial::constant(2, c(3.0, 0.0));
        let rep = max_principle_check(&constant, 2, &f, &b, DiskGrid::MIN, 256).unwrap();
        assert!(rep.pass && (rep.boundary_max - 3f64.ln()).abs() < 1e-12);
        assert!(max_principle_check(&w_poly(), 1, &f, &b, DiskGrid { radial: 32, angular: 64 }, 256).is_err());
    }

    #[test]
    fn membership_bound_examples() {
        let p = PoleSeriesParams::standard();
        let f1 = RationalDiskMap::series_family(&p, 1).unwrap();
        let b1 = f1.blaschke();
        let z = ComplexPolynomial::variable(2, 0);
        let rep = membership_bound_check(&z, 1, &f1, &b1, c(0.9, 0.0), 2.0).unwrap();
        assert!((rep.log_lhs - 0.9f64.ln()).abs() < 1e-14);
        assert!((rep.log_rhs - 2.75f64.ln()).abs() < 1e-12);
        assert!(rep.holds);
        let zero = &w_poly() - &w_poly();
        assert!(membership_bound_check(&zero, 1, &f1, &b1, c(0.3, 0.2), 2.0).unwrap().holds);
        assert!(matches!(
            membership_bound_check(&z, 1, &f1, &b1, c(0.5, 0.0), 2.0),
            Err(HullError::BlaschkeZero(_))
        ));
    }

    #[test]
    fn g_product_examples() {
        let p = PoleSeriesParams::standard();
        let f1 = RationalDiskMap::series_family(&p, 1).unwrap();
        let rep = g_product_bound(&f1, &f1.blaschke(), 512).unwrap();
        assert!((rep.pole_values[0][1] - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(rep.pole_values[0][0], c(0.0, 0.0));
        assert!(rep.max_principle_holds);
        let plain = RationalDiskMap::new(vec![DiskComponent::polynomial(vec![c(0.0, 0.0), c(2.0, 0.0)])]).unwrap();
        let rep = g_product_bound(&plain, &plain.blaschke(), 256).unwrap();
        assert!((rep.boundary_sup - 2.0).abs() < 1e-15 && rep.pole_values.is_empty());
    }

    #[test]
    fn conditions_for_series_family() {
        let p = PoleSeriesParams::standard();
        let gamma0 = build_curve(&p, 2048).unwrap();
        let z0 = [c(0.0, 0.0); 2];
        let f3 = RationalDiskMap::series_family(&p, 3).unwrap();
        let rep = check_conditions(&f3, &gamma0, 0.1, &z0, 1.25, 1024).unwrap();
        assert!(rep.all_hold(), "{rep:?}");
        assert_eq!(rep.cond_ii.center_distance, 0.0);
        assert!((rep.cond_iii.pole_log_sum - (-1.114_360_645_636_249)).abs() < 1e-12);
        assert_eq!(rep.cond_iii.pole_log_sum, disk_functional(&f3));

        let constant = RationalDiskMap::constant(&z0).unwrap();
        let rep = check_conditions(&constant, &gamma0, 0.01, &z0, 1.25, 256).unwrap();
        assert!(!rep.cond_i.holds && rep.cond_ii.holds);
        assert!((rep.cond_i.max_boundary_distance - gamma0.dist_to_curve(&z0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn long_truncation_stays_in_tail_sized_tube() {
        let p = PoleSeriesParams::standard();
        let gamma0 = build_curve(&p, 2048).unwrap();
        let f20 = RationalDiskMap::series_family(&p, 20).unwrap();
        // boundary points sit on curve samples, so the distance is the gap
        // between two truncations of the series plus rounding
        let curve_tail = gamma0.meta()["tail_bound"].as_f64().unwrap();
        let r = 2.0 * (p.boundary_tail(20) + curve_tail) + 1e-14;
        let rep = check_conditions(&f20, &gamma0, r, &[c(0.0, 0.0); 2], 2.0, 256).unwrap();
        assert!(rep.cond_i.holds, "{:e} vs r = {r:e}", rep.cond_i.max_boundary_distance);
    }

    #[test]
    fn pole_at_center_fails_condition_ii() {
        let circle = SampledCurve::unit_circle(256).unwrap();
        let f = RationalDiskMap::new(vec![DiskComponent {
            poly: vec![],
            poles: vec![PoleTerm::simple(c(0.0, 0.0), c(0.01, 0.0))],
        }])
        .unwrap();
        let rep = check_conditions(&f, &circle, 0.1, &[c(0.0, 0.0)], 1.0, 256).unwrap();
        assert!(!rep.cond_ii.holds);
        assert_eq!(rep.cond_iii.pole_log_sum, f64::NEG_INFINITY);
    }

    #[test]
    fn disk_json_round_trip() {
        let p = PoleSeriesParams::standard();
        let f = RationalDiskMap::series_family(&p, 5).unwrap();
        let text = serde_json::to_string(&DiskMapJson::from(&f)).unwrap();
        let back: RationalDiskMap = serde_json::from_str::<DiskMapJson>(&text).unwrap().try_into().unwrap();
        assert_eq!(back, f);
    }
}
