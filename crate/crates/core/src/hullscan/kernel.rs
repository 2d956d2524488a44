//! Multiprecision Christoffel kernel on a sampled curve.
//!
//! Monomials of total degree `<= d_max` are orthonormalized over the curve
//! samples in graded order by classical Gram-Schmidt with
//! reorthogonalization, in MPFR arithmetic. A monomial whose new direction
//! has norm below `cutoff` times its own norm counts as numerically
//! dependent on lower monomials and is left out of the kernel. The cutoff
//! plays the role of the eigenvalue threshold of a Gram pseudo-inverse but
//! does not depend on the working precision, as long as the precision is
//! well beyond it.
//!
//! Curves sampled from a pole-series family are re-sampled at the working
//! precision; other curves are promoted from their double samples.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::curvelib::{PoleSeriesParams, SampledCurve, SeriesVariant};
use crate::error::{HullError, Result};
use crate::polyring::Multidegree;

/// Samples per parallel chunk; fixed so reductions are deterministic.
const CHUNK: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KernelOptions {
    /// MPFR mantissa bits.
    pub precision: u32,
    /// Relative residual below which a monomial is dropped.
    pub cutoff: f64,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            precision: 320,
            cutoff: 1e-70,
        }
    }
}

impl KernelOptions {
    fn validate(&self) -> Result<()> {
        if self.precision < 64 {
            return Err(HullError::Invalid(format!("precision {} is below 64 bits", self.precision)));
        }
        if !(self.cutoff > 0.0 && self.cutoff < 1.0) {
            return Err(HullError::Invalid(format!("cutoff {} must lie in (0, 1)", self.cutoff)));
        }
        // the residual must be resolved well below the cutoff
        if self.cutoff.log2() < -(self.precision as f64) + 64.0 {
            return Err(HullError::Invalid(format!(
                "cutoff {:e} is not resolved at {} bits",
                self.cutoff, self.precision
            )));
        }
        Ok(())
    }
}

/// Complex MPFR number.
#[derive(Clone, Debug)]
struct Mpc {
    re: Float,
    im: Float,
}

impl Mpc {
    fn zero(prec: u32) -> Self {
        Self {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    fn from_c64(prec: u32, z: Complex64) -> Self {
        Self {
            re: Float::with_val(prec, z.re),
            im: Float::with_val(prec, z.im),
        }
    }

    fn norm_sqr(&self) -> Float {
        let mut s = Float::with_val(self.re.prec(), self.re.square_ref());
        s += &self.im * &self.im;
        s
    }

    /// `self * other`.
    fn mul(&self, other: &Mpc, tmp: &mut Float) -> Mpc {
        let prec = self.re.prec();
        let mut re = Float::with_val(prec, &self.re * &other.re);
        tmp.assign(&self.im * &other.im);
        re -= &*tmp;
        let mut im = Float::with_val(prec, &self.re * &other.im);
        tmp.assign(&self.im * &other.re);
        im += &*tmp;
        Mpc { re, im }
    }

    /// `self += conj(a) * b`.
    fn add_conj_mul(&mut self, a: &Mpc, b: &Mpc, tmp: &mut Float) {
        tmp.assign(&a.re * &b.re);
        self.re += &*tmp;
        tmp.assign(&a.im * &b.im);
        self.re += &*tmp;
        tmp.assign(&a.re * &b.im);
        self.im += &*tmp;
        tmp.assign(&a.im * &b.re);
        self.im -= &*tmp;
    }

    /// `self -= a * b`.
    fn sub_mul(&mut self, a: &Mpc, b: &Mpc, tmp: &mut Float) {
        tmp.assign(&a.re * &b.re);
        self.re -= &*tmp;
        tmp.assign(&a.im * &b.im);
        self.re += &*tmp;
        tmp.assign(&a.re * &b.im);
        self.im -= &*tmp;
        tmp.assign(&a.im * &b.re);
        self.im -= &*tmp;
    }

    fn add_assign(&mut self, other: &Mpc) {
        self.re += &other.re;
        self.im += &other.im;
    }

    fn recip(&self) -> Mpc {
        let n = self.norm_sqr();
        Mpc {
            re: Float::with_val(self.re.prec(), &self.re / &n),
            im: -Float::with_val(self.re.prec(), &self.im / &n),
        }
    }

    fn div_real(&mut self, r: &Float) {
        self.re /= r;
        self.im /= r;
    }
}

/// Samples at working precision.
fn high_precision_samples(curve: &SampledCurve, prec: u32) -> Vec<Vec<Mpc>> {
    let regenerate = curve.family().filter(|_| curve.n() == 2 && is_equispaced_circle(curve));
    match regenerate {
        Some(variant) => {
            let params = PoleSeriesParams::new(variant);
            let series = MpSeries::new(&params, prec);
            let m = curve.len();
            (0..m)
                .into_par_iter()
                .map(|k| {
                    let zeta = mp_root_of_unity(k, m, prec);
                    let w = series.eval(&zeta);
                    vec![zeta, w]
                })
                .collect()
        }
        None => curve
            .points()
            .map(|p| p.iter().map(|&z| Mpc::from_c64(prec, z)).collect())
            .collect(),
    }
}

fn is_equispaced_circle(curve: &SampledCurve) -> bool {
    let m = curve.len();
    curve.samples().iter().enumerate().all(|(k, s)| {
        s.t == k as f64 / m as f64 && (s.point[0] - crate::curvelib::unit_root_sample(k, m)).norm() < 1e-14
    })
}

fn mp_root_of_unity(k: usize, m: usize, prec: u32) -> Mpc {
    let mut angle = Float::with_val(prec, Constant::Pi);
    angle *= 2 * k as u64;
    angle /= m as u64;
    let (s, c) = angle.sin_cos(Float::new(prec));
    Mpc { re: c, im: s }
}

/// `c_j` exactly at working precision: `(4j)^-j`, or `4^-j j^(-j^2)`.
fn exact_c(variant: SeriesVariant, j: usize, prec: u32) -> Float {
    let j32 = j as u32;
    let denominator = match variant {
        SeriesVariant::Example1Rapid => {
            let mut d = Float::with_val(prec, 4u32).pow(j32);
            d *= Float::with_val(prec, j32).pow(j32 * j32);
            d
        }
        _ => Float::with_val(prec, 4 * j32).pow(j32),
    };
    denominator.recip()
}

/// The series `omega` (or the rotated `omega~`) at working precision.
struct MpSeries {
    prec: u32,
    /// `(pole, c)` pairs.
    poles: Vec<(Mpc, Float)>,
    constant: Mpc,
}

impl MpSeries {
    fn new(params: &PoleSeriesParams, prec: u32) -> Self {
        // terms until the certified tail drops below 2^-(prec + 16)
        let target = -((prec + 16) as f64) * LN_2;
        let mut n = 1;
        while params.log_tail_bound(n) > target {
            n += 1;
        }
        let mut poles = Vec::new();
        for j in 1..=n {
            let c = exact_c(params.variant(), j, prec);
            let a = Float::with_val(prec, 1) - Float::with_val(prec, params.eps(j));
            let rotations = params.variant().multiplicity(j);
            for l in 1..=rotations {
                let pole = if params.variant() == SeriesVariant::Example2 {
                    let r = mp_root_of_unity(l, j, prec);
                    Mpc {
                        re: Float::with_val(prec, &r.re * &a),
                        im: Float::with_val(prec, &r.im * &a),
                    }
                } else {
                    Mpc {
                        re: a.clone(),
                        im: Float::new(prec),
                    }
                };
                poles.push((pole, c.clone()));
            }
        }
        let mut series = Self {
            prec,
            poles,
            constant: Mpc::zero(prec),
        };
        // normalize so that the value at 0 vanishes
        let at_zero = series.eval(&Mpc::zero(prec));
        series.constant = Mpc {
            re: -at_zero.re,
            im: -at_zero.im,
        };
        series
    }

    fn eval(&self, zeta: &Mpc) -> Mpc {
        let prec = self.prec;
        let mut acc = self.constant.clone();
        for (pole, c) in &self.poles {
            // c / (zeta - pole)
            let dr = Float::with_val(prec, &zeta.re - &pole.re);
            let di = Float::with_val(prec, &zeta.im - &pole.im);
            let mut den = Float::with_val(prec, dr.square_ref());
            den += &di * &di;
            let scale = Float::with_val(prec, c / &den);
            acc.re += Float::with_val(prec, &dr * &scale);
            acc.im -= Float::with_val(prec, &di * &scale);
        }
        acc
    }
}

/// Orthonormalized monomial basis on a sampled curve.
pub struct ChristoffelKernel {
    n: usize,
    d_max: u32,
    m: usize,
    prec: u32,
    opts: KernelOptions,
    basis: Vec<Multidegree>,
    /// Per basis element: `Some((h, r))` with `q_j = (v_j - sum_l h_l q_l) / r`
    /// over the kept `l < j`, or `None` when dropped.
    recipe: Vec<Option<(Vec<Mpc>, Float)>>,
    kept: Vec<usize>,
    relative_residuals: Vec<f64>,
    resampled: bool,
}

impl std::fmt::Debug for ChristoffelKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChristoffelKernel")
            .field("n", &self.n)
            .field("d_max", &self.d_max)
            .field("m", &self.m)
            .field("kept", &self.kept.len())
            .finish()
    }
}

/// Parallel dot products `<q_l, v>` for every `l`, each summed in fixed
/// chunk order.
fn dots(qs: &[Vec<Mpc>], v: &[Mpc], prec: u32) -> Vec<Mpc> {
    qs.par_iter()
        .map(|q| {
            let mut acc = Mpc::zero(prec);
            let mut tmp = Float::new(prec);
            for (a, b) in q.iter().zip(v) {
                acc.add_conj_mul(a, b, &mut tmp);
            }
            acc
        })
        .collect()
}

/// `v -= sum_l h_l q_l`, parallel over sample chunks.
fn subtract_combination(v: &mut [Mpc], qs: &[Vec<Mpc>], h: &[Mpc], prec: u32) {
    v.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, chunk)| {
        let mut tmp = Float::new(prec);
        for (off, x) in chunk.iter_mut().enumerate() {
            let k = ci * CHUNK + off;
            for (q, hl) in qs.iter().zip(h) {
                x.sub_mul(hl, &q[k], &mut tmp);
            }
        }
    });
}

fn vector_norm(v: &[Mpc], prec: u32) -> Float {
    let mut s = Float::new(prec);
    for x in v {
        s += x.norm_sqr();
    }
    s.sqrt()
}

impl ChristoffelKernel {
    pub fn build(curve: &SampledCurve, d_max: u32, opts: KernelOptions) -> Result<Self> {
        opts.validate()?;
        let n = curve.n();
        let m = curve.len();
        let basis = Multidegree::graded_basis(n, d_max);
        let cap = m / 4;
        if basis.len() > cap {
            return Err(HullError::DegreeCap {
                degree: d_max,
                dim: basis.len(),
                cap,
            });
        }
        let prec = opts.precision;
        let samples = high_precision_samples(curve, prec);
        let resampled = curve.family().is_some() && curve.n() == 2 && is_equispaced_circle(curve);
        let inv_sqrt_m = Float::with_val(prec, m).sqrt().recip();

        // monomial values per sample, built along the graded basis
        let mut qs: Vec<Vec<Mpc>> = Vec::new();
        let mut recipe = Vec::with_capacity(basis.len());
        let mut kept = Vec::new();
        let mut relative_residuals = Vec::with_capacity(basis.len());
        let mut monomials: Vec<Vec<Mpc>> = Vec::with_capacity(basis.len());
        let cutoff = Float::with_val(prec, opts.cutoff);
        for (j, alpha) in basis.iter().enumerate() {
            let v: Vec<Mpc> = if j == 0 {
                (0..m)
                    .map(|_| Mpc {
                        re: inv_sqrt_m.clone(),
                        im: Float::new(prec),
                    })
                    .collect()
            } else {
                let (parent, var) = parent_of(&basis, alpha);
                monomials[parent]
                    .par_iter()
                    .zip(samples.par_iter())
                    .map(|(x, s)| x.mul(&s[var], &mut Float::new(prec)))
                    .collect()
            };
            let v_norm = vector_norm(&v, prec);
            let mut w = v.clone();
            monomials.push(v);
            let mut h = vec![Mpc::zero(prec); qs.len()];
            for _ in 0..2 {
                let pass = dots(&qs, &w, prec);
                subtract_combination(&mut w, &qs, &pass, prec);
                for (acc, x) in h.iter_mut().zip(&pass) {
                    acc.add_assign(x);
                }
            }
            let r = vector_norm(&w, prec);
            let rel = Float::with_val(prec, &r / &v_norm);
            relative_residuals.push(rel.to_f64());
            if rel < cutoff {
                recipe.push(None);
                continue;
            }
            for x in w.iter_mut() {
                x.div_real(&r);
            }
            qs.push(w);
            kept.push(j);
            recipe.push(Some((h, r)));
        }
        Ok(Self {
            n,
            d_max,
            m,
            prec,
            opts,
            basis,
            recipe,
            kept,
            relative_residuals,
            resampled,
        })
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn options(&self) -> KernelOptions {
        self.opts
    }

    /// Whether samples were regenerated at working precision.
    pub fn resampled(&self) -> bool {
        self.resampled
    }

    /// Monomials excluded by the cutoff, per degree `0..=d_max`.
    pub fn dropped_per_degree(&self) -> Vec<usize> {
        let mut out = vec![0; self.d_max as usize + 1];
        for (alpha, r) in self.basis.iter().zip(&self.recipe) {
            if r.is_none() {
                out[alpha.total() as usize] += 1;
            }
        }
        out
    }

    /// Relative residual of each basis monomial, in graded order.
    pub fn relative_residuals(&self) -> &[f64] {
        &self.relative_residuals
    }

    /// `ln K_d(z, z)` for `d = 0..=d_max`, with `K_d = m sum_{deg <= d} |q_j(z)|^2`
    /// (the kernel for the sample-averaged norm).
    pub fn log_kernel(&self, z: &[Complex64]) -> Result<Vec<f64>> {
        self.check_dim(z)?;
        let zp: Vec<Mpc> = z.iter().map(|&c| Mpc::from_c64(self.prec, c)).collect();
        Ok(self.log_kernel_mp(&zp))
    }

    /// Like [`log_kernel`](Self::log_kernel), but at the point of the closed
    /// ball of radius `radius` around `z` where `K_{d_max}` is smallest, found
    /// by damped Gauss-Newton. Query coordinates carry rounding error, and a
    /// point a rounding error away from a hull point is resolved as outside
    /// once the kernel is accurate enough; the ball absorbs that error.
    /// Returns the profile and the distance moved.
    pub fn log_kernel_refined(&self, z: &[Complex64], radius: f64) -> Result<(Vec<f64>, f64)> {
        self.check_dim(z)?;
        let prec = self.prec;
        let z0: Vec<Mpc> = z.iter().map(|&c| Mpc::from_c64(prec, c)).collect();
        if radius <= 0.0 {
            return Ok((self.log_kernel_mp(&z0), 0.0));
        }
        let radius_f = Float::with_val(prec, radius);
        let step = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
        let mut cur = z0.clone();
        let mut cur_q = self.q_values(&cur);
        let mut cur_k = sum_norm_sqr(&cur_q, prec);
        for _ in 0..6 {
            // finite-difference Jacobian of q in each coordinate
            let cols: Vec<Vec<Mpc>> = (0..self.n)
                .map(|i| {
                    let mut zi = cur.clone();
                    zi[i].re += &step;
                    let qi = self.q_values(&zi);
                    qi.iter()
                        .zip(&cur_q)
                        .map(|(a, b)| {
                            let mut d = a.clone();
                            d.re -= &b.re;
                            d.im -= &b.im;
                            d.div_real(&step);
                            d
                        })
                        .collect()
                })
                .collect();
            let mut tmp = Float::new(prec);
            // normal equations (B^H B + lambda I) t = -B^H q
            let mut gram = vec![vec![Mpc::zero(prec); self.n]; self.n];
            let mut rhs = vec![Mpc::zero(prec); self.n];
            for i in 0..self.n {
                for k in 0..self.n {
                    for (a, b) in cols[i].iter().zip(&cols[k]) {
                        gram[i][k].add_conj_mul(a, b, &mut tmp);
                    }
                }
                for (a, b) in cols[i].iter().zip(&cur_q) {
                    rhs[i].add_conj_mul(a, b, &mut tmp);
                }
                rhs[i].re = -rhs[i].re.clone();
                rhs[i].im = -rhs[i].im.clone();
            }
            let mut trace = Float::new(prec);
            for (i, row) in gram.iter().enumerate() {
                trace += &row[i].re;
            }
            let lambda = Float::with_val(prec, &trace * Float::with_val(prec, 1e-30));
            for (i, row) in gram.iter_mut().enumerate() {
                row[i].re += &lambda;
            }
            let Some(t) = solve_small(gram, rhs, prec) else { break };
            let mut next: Vec<Mpc> = cur.iter().zip(&t).map(|(a, b)| {
                let mut x = a.clone();
                x.add_assign(b);
                x
            }).collect();
            // stay inside the ball
            let mut dist = Float::new(prec);
            for (a, b) in next.iter().zip(&z0) {
                let mut d = a.clone();
                d.re -= &b.re;
                d.im -= &b.im;
                dist += d.norm_sqr();
            }
            let dist = dist.sqrt();
            if dist > radius_f {
                let scale = Float::with_val(prec, &radius_f / &dist);
                for (a, b) in next.iter_mut().zip(&z0) {
                    let mut d = a.clone();
                    d.re -= &b.re;
                    d.im -= &b.im;
                    d.re *= &scale;
                    d.im *= &scale;
                    *a = b.clone();
                    a.add_assign(&d);
                }
            }
            let next_q = self.q_values(&next);
            let next_k = sum_norm_sqr(&next_q, prec);
            if next_k >= cur_k {
                break;
            }
            cur = next;
            cur_q = next_q;
            cur_k = next_k;
        }
        let mut moved = Float::new(prec);
        for (a, b) in cur.iter().zip(&z0) {
            let mut d = a.clone();
            d.re -= &b.re;
            d.im -= &b.im;
            moved += d.norm_sqr();
        }
        Ok((self.log_kernel_mp(&cur), moved.sqrt().to_f64()))
    }

    fn check_dim(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.n {
            return Err(HullError::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        Ok(())
    }

    /// Values of the kept orthonormal polynomials at `zp`.
    fn q_values(&self, zp: &[Mpc]) -> Vec<Mpc> {
        let prec = self.prec;
        let mut tmp = Float::new(prec);
        let mut mono: Vec<Mpc> = Vec::with_capacity(self.basis.len());
        let mut q_at: Vec<Mpc> = Vec::with_capacity(self.kept.len());
        let inv_sqrt_m = Float::with_val(prec, self.m).sqrt().recip();
        for (j, alpha) in self.basis.iter().enumerate() {
            let v = if j == 0 {
                Mpc {
                    re: inv_sqrt_m.clone(),
                    im: Float::new(prec),
                }
            } else {
                let (parent, var) = parent_of(&self.basis, alpha);
                mono[parent].mul(&zp[var], &mut tmp)
            };
            if let Some((h, r)) = &self.recipe[j] {
                let mut x = v.clone();
                for (q, hl) in q_at.iter().zip(h) {
                    x.sub_mul(hl, q, &mut tmp);
                }
                x.div_real(r);
                q_at.push(x);
            }
            mono.push(v);
        }
        q_at
    }

    fn log_kernel_mp(&self, zp: &[Mpc]) -> Vec<f64> {
        let prec = self.prec;
        let q = self.q_values(zp);
        let mut per_degree = vec![Float::new(prec); self.d_max as usize + 1];
        for (x, &j) in q.iter().zip(&self.kept) {
            per_degree[self.basis[j].total() as usize] += x.norm_sqr();
        }
        let ln_m = (self.m as f64).ln();
        let mut acc = Float::new(prec);
        per_degree
            .iter()
            .map(|s| {
                acc += s;
                acc.clone().ln().to_f64() + ln_m
            })
            .collect()
    }
}

fn sum_norm_sqr(v: &[Mpc], prec: u32) -> Float {
    let mut s = Float::new(prec);
    for x in v {
        s += x.norm_sqr();
    }
    s
}

/// Gaussian elimination with partial pivoting on a small complex system.
fn solve_small(mut a: Vec<Vec<Mpc>>, mut b: Vec<Mpc>, prec: u32) -> Option<Vec<Mpc>> {
    let n = b.len();
    let mut tmp = Float::new(prec);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &k| a[i][col].norm_sqr().partial_cmp(&a[k][col].norm_sqr()).unwrap())?;
        if a[pivot][col].norm_sqr().is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for row in col + 1..n {
            let f = a[row][col].mul(&inv, &mut tmp);
            for k in col..n {
                let sub = a[col][k].clone();
                a[row][k].sub_mul(&f, &sub, &mut tmp);
            }
            let sub = b[col].clone();
            b[row].sub_mul(&f, &sub, &mut tmp);
        }
    }
    let mut x = vec![Mpc::zero(prec); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc.sub_mul(&a[row][k], &x[k], &mut tmp);
        }
        x[row] = acc.mul(&a[row][row].recip(), &mut tmp);
    }
    Some(x)
}

/// Index of `alpha - e_var` in the graded basis and the variable `var`
/// (the first variable with a positive exponent).
fn parent_of(basis: &[Multidegree], alpha: &Multidegree) -> (usize, usize) {
    let var = alpha.exponents().iter().position(|&e| e > 0).expect("non-constant monomial");
    let mut exps = alpha.exponents().to_vec();
    exps[var] -= 1;
    let parent = Multidegree::new(exps);
    let idx = basis
        .binary_search(&parent)
        .expect("graded basis is closed under lowering");
    (idx, var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvelib::SampledCurve;

    #[test]
    fn unit_circle_closed_form() {
        let circle = SampledCurve::unit_circle(256).unwrap();
        let k = ChristoffelKernel::build(&circle, 24, KernelOptions { precision: 160, cutoff: 1e-20 }).unwrap();
        let logs = k.log_kernel(&[Complex64::new(2.0, 0.0)]).unwrap();
        for (d, lk) in logs.iter().enumerate() {
            let exact = ((4f64.powi(d as i32 + 1) - 1.0) / 3.0).ln();
            assert!((lk - exact).abs() < 1e-12, "d = {d}");
        }
        let at0 = k.log_kernel(&[Complex64::new(0.0, 0.0)]).unwrap();
        assert!(at0.iter().all(|x| x.abs() < 1e-14));
        assert!(k.dropped_per_degree().iter().all(|&x| x == 0));
    }

    #[test]
    fn options_are_validated() {
        let circle = SampledCurve::unit_circle(64).unwrap();
        assert!(ChristoffelKernel::build(&circle, 4, KernelOptions { precision: 160, cutoff: 1e-60 }).is_err());
        assert!(ChristoffelKernel::build(&circle, 4, KernelOptions { precision: 32, cutoff: 1e-3 }).is_err());
        assert!(matches!(
            ChristoffelKernel::build(&circle, 16, KernelOptions::default()),
            Err(HullError::DegreeCap { .. })
        ));
    }

    #[test]
    fn dependent_monomials_are_dropped() {
        // on the line w = z every mixed monomial duplicates a power of z
        let line = SampledCurve::from_parametrization(2, 128, |t| {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t);
            vec![z, z]
        })
        .unwrap();
        let k = ChristoffelKernel::build(&line, 3, KernelOptions { precision: 160, cutoff: 1e-20 }).unwrap();
        assert_eq!(k.dropped_per_degree(), vec![0, 1, 2, 3]);
        let logs = k.log_kernel(&[Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)]).unwrap();
        let exact = (0..=3).map(|d| (0..=d).map(|j| 0.25f64.powi(j)).sum::<f64>().ln());
        for (lk, ex) in logs.iter().zip(exact) {
            assert!((lk - ex).abs() < 1e-12);
        }
    }
}
