//! Double-precision Gram operator and Christoffel function.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::curvelib::SampledCurve;
use crate::error::{HullError, Result};
use crate::polyring::Multidegree;

pub const DEFAULT_EIGEN_CUTOFF: f64 = 1e-12;

/// Averaged monomial inner products `(1/m) sum_k z_k^a conj(z_k^b)` with a
/// thresholded eigendecomposition for pseudo-inversion.
#[derive(Clone, Debug)]
pub struct GramOperator {
    degree: u32,
    n: usize,
    basis: Vec<Multidegree>,
    matrix: DMatrix<Complex64>,
    eigen_cutoff: f64,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// Basis dimension, or an error when it exceeds the sample budget `m/4`.
pub(crate) fn check_cap(n: usize, d: u32, m: usize) -> Result<usize> {
    let dim = Multidegree::graded_basis(n, d).len();
    let cap = m / 4;
    if dim > cap {
        return Err(HullError::DegreeCap { degree: d, dim, cap });
    }
    Ok(dim)
}

fn monomial_row(basis: &[Multidegree], z: &[Complex64]) -> Vec<Complex64> {
    basis.iter().map(|a| a.eval(z)).collect()
}

pub fn gram_build(curve: &SampledCurve, d: u32, eigen_cutoff: f64) -> Result<GramOperator> {
    if !(eigen_cutoff > 0.0 && eigen_cutoff < 1.0) {
        return Err(HullError::Invalid(format!("eigen cutoff {eigen_cutoff} must lie in (0, 1)")));
    }
    let n = curve.n();
    let m = curve.len();
    let dim = check_cap(n, d, m)?;
    let basis = Multidegree::graded_basis(n, d);
    let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
    for z in curve.points() {
        let v = monomial_row(&basis, z);
        for a in 0..dim {
            for b in a..dim {
                matrix[(a, b)] += v[a] * v[b].conj();
            }
        }
    }
    let scale = 1.0 / m as f64;
    for a in 0..dim {
        for b in a..dim {
            let x = matrix[(a, b)] * scale;
            matrix[(a, b)] = x;
            matrix[(b, a)] = x.conj();
        }
        matrix[(a, a)].im = 0.0;
    }
    let eig = matrix.clone().symmetric_eigen();
    Ok(GramOperator {
        degree: d,
        n,
        basis,
        matrix,
        eigen_cutoff,
        eigenvalues: eig.eigenvalues,
        eigenvectors: eig.eigenvectors,
    })
}

impl GramOperator {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Multidegree] {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigen_cutoff(&self) -> f64 {
        self.eigen_cutoff
    }

    fn lambda_max(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(0.0, f64::max)
    }

    fn kept(&self) -> Result<Vec<usize>> {
        let threshold = self.eigen_cutoff * self.lambda_max();
        let kept: Vec<usize> = (0..self.dim()).filter(|&i| self.eigenvalues[i] > threshold).collect();
        if kept.is_empty() || self.lambda_max() <= 0.0 {
            return Err(HullError::SingularGram);
        }
        Ok(kept)
    }

    /// `conj(G^+ v(z))`: coefficients of the polynomial attaining the kernel
    /// maximum, with `P(z) = K(z, z)`.
    pub fn reproducing_coefficients(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_point(z)?;
        let v = monomial_row(&self.basis, z);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for i in self.kept()? {
            let u = self.eigenvectors.column(i);
            let proj: Complex64 = u.iter().zip(&v).map(|(ua, va)| ua.conj() * va).sum();
            let s = proj / self.eigenvalues[i];
            for (o, ua) in out.iter_mut().zip(u.iter()) {
                *o += (ua * s).conj();
            }
        }
        Ok(out)
    }

    /// Averaged squared norm `c* G c` of a coefficient vector in basis order.
    pub fn quadrature_norm_sqr(&self, coeffs: &[Complex64]) -> f64 {
        let c = DVector::from_column_slice(coeffs);
        // with G_ab = avg z^a conj(z^b), the norm of sum c_a z^a is c^T G conj(c)
        (c.transpose() * &self.matrix * c.map(|x| x.conj()))[(0, 0)].re
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.n {
            return Err(HullError::DimensionMismatch { expected: self.n, got: z.len() });
        }
        Ok(())
    }
}

/// `K_d(z, z) = v(z)* G^+ v(z)` and `Lambda_d = K^(1/(2d))`.
pub fn christoffel_lambda(z: &[Complex64], g: &GramOperator) -> Result<(f64, f64)> {
    g.check_point(z)?;
    if g.degree == 0 {
        return Err(HullError::Invalid("kernel growth needs degree at least 1".into()));
    }
    let v = monomial_row(&g.basis, z);
    let mut k = 0.0;
    for i in g.kept()? {
        let u = g.eigenvectors.column(i);
        let proj: Complex64 = u.iter().zip(&v).map(|(ua, va)| ua.conj() * va).sum();
        k += proj.norm_sqr() / g.eigenvalues[i];
    }
    Ok((k, k.powf(1.0 / (2.0 * g.degree as f64))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degree_zero_is_one() {
        let curve = SampledCurve::unit_circle(64).unwrap();
        let g = gram_build(&curve, 0, DEFAULT_EIGEN_CUTOFF).unwrap();
        assert_eq!(g.dim(), 1);
        assert!((g.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circle_gram_is_identity() {
        let curve = SampledCurve::unit_circle(512).unwrap();
        let g = gram_build(&curve, 24, DEFAULT_EIGEN_CUTOFF).unwrap();
        let dev = (g.matrix() - DMatrix::<Complex64>::identity(25, 25)).camax();
        assert!(dev < 1e-13, "{dev}");
    }

    #[test]
    fn circle_kernel_closed_forms() {
        let curve = SampledCurve::unit_circle(512).unwrap();
        let g = gram_build(&curve, 24, DEFAULT_EIGEN_CUTOFF).unwrap();
        let (k, lam) = christoffel_lambda(&[c(2.0, 0.0)], &g).unwrap();
        let exact = (4f64.powi(25) - 1.0) / 3.0;
        assert!((k / exact - 1.0).abs() < 1e-10);
        assert!((lam / 2.0120 - 1.0).abs() < 5e-3, "{lam}");
        let (k0, l0) = christoffel_lambda(&[c(0.0, 0.0)], &g).unwrap();
        assert!((k0 - 1.0).abs() < 1e-12 && (l0 - 1.0).abs() < 1e-12);
        let (k1, l1) = christoffel_lambda(&[Complex64::from_polar(1.0, 0.3)], &g).unwrap();
        assert!((k1 - 25.0).abs() < 1e-9);
        assert!((l1 / 1.0694 - 1.0).abs() < 5e-3);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let curve = SampledCurve::unit_circle(64).unwrap();
        assert!(matches!(
            gram_build(&curve, 16, DEFAULT_EIGEN_CUTOFF),
            Err(HullError::DegreeCap { cap: 16, dim: 17, .. })
        ));
    }

    #[test]
    fn reproducing_polynomial_attains_kernel() {
        let curve = SampledCurve::from_parametrization(2, 256, |t| {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * t);
            vec![z, c(0.3, 0.1) * z * z + c(0.0, 0.5) / z]
        })
        .unwrap();
        let g = gram_build(&curve, 3, DEFAULT_EIGEN_CUTOFF).unwrap();
        let z = [c(0.4, -0.2), c(0.7, 0.3)];
        let (k, _) = christoffel_lambda(&z, &g).unwrap();
        let coeffs = g.reproducing_coefficients(&z).unwrap();
        let norm = g.quadrature_norm_sqr(&coeffs);
        let value: Complex64 = g.basis().iter().zip(&coeffs).map(|(a, c)| c * a.eval(&z)).sum();
        assert!((value.norm_sqr() / norm / k - 1.0).abs() < 1e-8);
        assert!((value / k - 1.0).norm() < 1e-8);
    }
}
