use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use projhull::curvelib::{build_curve, PoleSeriesParams, SampledCurve};
use projhull::diskmaps::{chi_eval, BlaschkeProduct, RationalDiskMap};
use projhull::hullscan::gram::{christoffel_lambda, gram_build, DEFAULT_EIGEN_CUTOFF};
use projhull::hullscan::lp::sup_extremal_lp;
use projhull::polyring::{AffineChart, ComplexPolynomial, Multidegree};

fn complex(scale: f64) -> impl Strategy<Value = Complex64> {
    (-scale..scale, -scale..scale).prop_map(|(re, im)| Complex64::new(re, im))
}

fn in_disk(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..TAU).prop_map(move |(s, t)| Complex64::from_polar(radius * s.sqrt(), t))
}

/// A dense random polynomial in `n` variables of degree exactly `d`.
fn polynomial(n: usize, max_degree: u32) -> impl Strategy<Value = ComplexPolynomial> {
    (0..=max_degree).prop_flat_map(move |d| {
        let basis = Multidegree::graded_basis(n, d);
        prop::collection::vec(complex(1.0), basis.len()).prop_map(move |coeffs| {
            let terms = basis.iter().zip(coeffs).map(|(a, c)| (a.exponents().to_vec(), c));
            ComplexPolynomial::from_terms(n, terms.collect::<Vec<_>>()).unwrap()
        })
    })
}

/// A perturbation of a fixed curve that lies on no algebraic curve of low
/// degree, so the Gram matrices stay nonsingular for every seed.
fn trig_curve(seed: [Complex64; 4]) -> SampledCurve {
    SampledCurve::from_parametrization(2, 256, move |t| {
        let e = |k: f64| Complex64::from_polar(1.0, TAU * k * t);
        let z = e(1.0) + e(-2.0) * 0.3 + seed[0] * e(-1.0) * 0.2 + seed[1] * e(2.0) * 0.2;
        let w = e(2.0) * 0.5 + e(-3.0) * 0.25 + e(5.0) * 0.2 + seed[2] * e(1.0) * 0.2 + seed[3] * e(-2.0) * 0.2;
        vec![z, w]
    })
    .unwrap()
}

fn rel_close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multidegree_total_and_length(exps in prop::collection::vec(0u32..9, 1..5)) {
        let a = Multidegree::new(exps.clone());
        prop_assert_eq!(a.total(), exps.iter().sum::<u32>());
        prop_assert_eq!(a.n_vars(), exps.len());
    }

    #[test]
    fn homogenize_is_homogeneous_and_round_trips(p in polynomial(2, 6), extra in 0u32..3) {
        let d = p.degree() + extra;
        let h = p.homogenize(d).unwrap();
        prop_assert!(h.is_homogeneous());
        prop_assert!(h.as_polynomial().terms().all(|(a, _)| a.total() == d));
        let back = h.chart_restrict(&AffineChart::standard(2)).unwrap();
        for (a, c) in p.terms() {
            prop_assert!(rel_close(back.coefficient(a.exponents()), *c, 1e-14));
        }
        prop_assert_eq!(back.num_terms(), p.num_terms());
    }

    #[test]
    fn homogeneous_eval_matches_affine(p in polynomial(2, 6), z in prop::collection::vec(complex(1.5), 2)) {
        let h = p.homogenize(p.degree()).unwrap();
        let lifted = [Complex64::new(1.0, 0.0), z[0], z[1]];
        prop_assert!(rel_close(h.eval(&lifted).unwrap(), p.eval(&z).unwrap(), 1e-13));
    }

    #[test]
    fn fubini_study_norm_is_unitarily_invariant(
        p in polynomial(2, 5),
        entries in prop::collection::vec(complex(1.0), 9),
        x in prop::collection::vec(complex(1.0), 3),
    ) {
        prop_assume!(x.iter().map(|v| v.norm()).sum::<f64>() > 0.1);
        let q = DMatrix::from_row_slice(3, 3, &entries).qr().q();
        let rows: Vec<Vec<Complex64>> = (0..3).map(|i| (0..3).map(|j| q[(i, j)]).collect()).collect();
        let h = p.homogenize(p.degree()).unwrap();
        let composed = h.compose_linear(&rows).unwrap();
        let ux: Vec<Complex64> = (0..3).map(|i| (0..3).map(|j| q[(i, j)] * x[j]).sum()).collect();
        let direct = h.fs_norm(&ux).unwrap();
        let pulled = composed.fs_norm(&x).unwrap();
        prop_assert!((direct - pulled).abs() <= 1e-12 * direct.max(1e-300) + 1e-300, "{} vs {}", direct, pulled);
    }

    #[test]
    fn blaschke_unit_modulus_and_center(zeros in prop::collection::vec(in_disk(0.95), 1..=20)) {
        prop_assume!(zeros.iter().all(|z| z.norm() > 1e-6));
        let b = BlaschkeProduct::new(zeros.clone()).unwrap();
        prop_assert!(b.boundary_deviation(256) <= 1e-10);
        let direct: f64 = zeros.iter().map(|z| z.norm().ln()).sum();
        let at0 = b.eval(Complex64::new(0.0, 0.0)).unwrap().norm().ln();
        prop_assert!((b.log_center() - direct).abs() <= 1e-12);
        prop_assert!((at0 - b.log_center()).abs() <= 1e-12);
    }

    #[test]
    fn chi_at_pole_is_circle_limit(
        a in 0.2..0.9f64,
        c in 0.01..0.3f64,
        z0 in prop::collection::vec(in_disk(0.5), 2),
        p in polynomial(2, 3),
    ) {
        prop_assume!(p.degree() >= 1);
        let d = p.degree();
        let f = RationalDiskMap::pole_family(&z0, &[a], &[c]).unwrap();
        let b = f.blaschke();
        let pole = Complex64::new(a, 0.0);
        let at = chi_eval(&p, d, &f, &b, pole).unwrap();
        prop_assume!(!at.is_neg_infinity() && at.value() > -20.0);
        // the mean over a small circle removes the first-order term
        let ring: Vec<f64> = (0..64)
            .map(|k| chi_eval(&p, d, &f, &b, pole + Complex64::from_polar(1e-4, TAU * k as f64 / 64.0)).unwrap().value())
            .collect();
        let mean = ring.iter().sum::<f64>() / 64.0;
        prop_assert!((mean - at.value()).abs() <= 1e-6, "{} vs {}", mean, at.value());
    }

    #[test]
    fn kernel_certificate(
        seed in prop::collection::vec(in_disk(0.5), 4),
        d in 1u32..=4,
        coeffs in prop::collection::vec(complex(1.0), 15),
        z in prop::collection::vec(complex(1.5), 2),
    ) {
        let curve = trig_curve([seed[0], seed[1], seed[2], seed[3]]);
        let g = gram_build(&curve, d, DEFAULT_EIGEN_CUTOFF).unwrap();
        let c = &coeffs[..g.dim()];
        let norm = g.quadrature_norm_sqr(c);
        let value: Complex64 = g.basis().iter().zip(c).map(|(a, ca)| ca * a.eval(&z)).sum();
        let (k, _) = christoffel_lambda(&z, &g).unwrap();
        prop_assert!(value.norm_sqr() / norm <= k * (1.0 + 1e-10));
        let best = g.reproducing_coefficients(&z).unwrap();
        let at: Complex64 = g.basis().iter().zip(&best).map(|(a, ca)| ca * a.eval(&z)).sum();
        let attained = at.norm_sqr() / g.quadrature_norm_sqr(&best);
        prop_assert!((attained / k - 1.0).abs() <= 1e-8, "{} vs {}", attained, k);
    }

    #[test]
    fn degree_cap_always_errors(m in 16usize..200, d in 1u32..20) {
        let curve = SampledCurve::unit_circle(m).unwrap();
        let dim = (d + 1) as usize;
        let result = gram_build(&curve, d, DEFAULT_EIGEN_CUTOFF);
        prop_assert_eq!(result.is_err(), 4 * dim > m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lp_kernel_sandwich(
        seed in prop::collection::vec(in_disk(0.5), 4),
        d in 1u32..=3,
        z in prop::collection::vec(complex(1.5), 2),
    ) {
        let curve = trig_curve([seed[0], seed[1], seed[2], seed[3]]);
        let lp = sup_extremal_lp(&z, &curve, d, 32).map_err(|e| TestCaseError::fail(format!("{e:?} z={z:?} d={d} seed={seed:?}")))?;
        let g = gram_build(&curve, d, DEFAULT_EIGEN_CUTOFF).unwrap();
        let (k, _) = christoffel_lambda(&z, &g).unwrap();
        prop_assert!(lp.value <= k.sqrt() * (1.0 + 1e-9));
        // K(z) <= Phi(z)^2 * max over the samples of K(zeta)
        let k_curve = curve
            .points()
            .map(|p| christoffel_lambda(p, &g).unwrap().0)
            .fold(0.0, f64::max);
        prop_assert!(k.sqrt() <= lp.lp_value * k_curve.sqrt() * (1.0 + 1e-9));
    }

    #[test]
    fn omega_partial_sums_are_cauchy_outside(r in 1.0..3.0f64, t in 0.0..TAU, n in 1usize..30, extra in 1usize..30) {
        let params = PoleSeriesParams::standard();
        let zeta = Complex64::from_polar(r, t);
        prop_assume!((zeta - 1.0).norm() > 1e-6);
        let a = params.omega_partial(n, zeta).unwrap();
        let b = params.omega_partial(n + extra, zeta).unwrap();
        prop_assert!((a - b).norm() <= params.boundary_tail(n) * (1.0 + 1e-12));
        let full = params.omega_full(zeta, 1e-15, None).unwrap().value;
        prop_assert!((full - a).norm() <= params.boundary_tail(n) * (1.0 + 1e-12) + 1e-15);
    }
}

#[test]
fn gamma0_samples_lie_on_the_graph() {
    let params = PoleSeriesParams::standard();
    let curve = build_curve(&params, 512).unwrap();
    for s in curve.samples().iter().step_by(7) {
        let (z, w) = (s.point[0], s.point[1]);
        if (z - 1.0).norm() < 1e-9 {
            continue;
        }
        let omega = params.omega_full(z, 1e-15, None).unwrap().value;
        assert!((omega - w).norm() <= 1e-10, "{z}: {omega} vs {w}");
        assert!(curve.dist_to_curve(&s.point).unwrap() <= 1e-12);
    }
}
