//! Sparse multivariate polynomials over the complex numbers.
//!
//! Affine polynomials live in [`ComplexPolynomial`]; the degree-`d` sections of
//! `O(d)` on projective space are [`HomogeneousSection`]s in one more variable,
//! with the homogenizing coordinate at index 0. Terms are kept in a `BTreeMap`
//! so every traversal (evaluation included) runs in the same graded order.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Exponent vector of a monomial, ordered by total degree and then
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multidegree {
    exponents: Vec<u32>,
    total: u32,
}

impl Multidegree {
    pub fn new(exponents: Vec<u32>) -> Self {
        let total = exponents.iter().sum();
        Self { exponents, total }
    }

    pub fn zero(n_vars: usize) -> Self {
        Self::new(vec![0; n_vars])
    }

    pub fn unit(n_vars: usize, var: usize) -> Self {
        let mut exponents = vec![0; n_vars];
        exponents[var] = 1;
        Self::new(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn n_vars(&self) -> usize {
        self.exponents.len()
    }

    fn plus(&self, other: &Self) -> Self {
        Self::new(
            self.exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Evaluates `z^alpha` by repeated multiplication.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.exponents
            .iter()
            .zip(z)
            .fold(ONE, |acc, (&e, &x)| acc * x.powu(e))
    }

    /// All multidegrees in `n_vars` variables with total at most `degree`, in
    /// canonical (graded) order.
    pub fn graded_basis(n_vars: usize, degree: u32) -> Vec<Multidegree> {
        let mut out = Vec::new();
        for total in 0..=degree {
            let mut current = vec![0u32; n_vars];
            fill_exact(n_vars, total, 0, &mut current, &mut out);
        }
        out.sort();
        out
    }
}

fn fill_exact(n: usize, remaining: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Multidegree>) {
    if n == 0 {
        if remaining == 0 {
            out.push(Multidegree::new(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = remaining;
        out.push(Multidegree::new(cur.clone()));
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        fill_exact(n, remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total
            .cmp(&other.total)
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exponents)
    }
}

/// Sparse polynomial in `n_vars` complex variables. No zero coefficient is
/// ever stored; the zero polynomial has an empty term map and degree 0.
#[derive(Clone, PartialEq)]
pub struct ComplexPolynomial {
    n_vars: usize,
    terms: BTreeMap<Multidegree, Complex64>,
}

impl ComplexPolynomial {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Multidegree::zero(n_vars), c);
        p
    }

    /// The coordinate function `x_var`.
    pub fn variable(n_vars: usize, var: usize) -> Self {
        assert!(var < n_vars, "variable index {var} out of range");
        let mut p = Self::zero(n_vars);
        p.add_term(Multidegree::unit(n_vars, var), ONE);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed and exact zeros dropped.
    pub fn from_terms<I>(n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut p = Self::zero(n_vars);
        for (exps, c) in terms {
            if exps.len() != n_vars {
                return Err(HullError::DimensionMismatch {
                    expected: n_vars,
                    got: exps.len(),
                });
            }
            p.add_term(Multidegree::new(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, alpha: Multidegree, c: Complex64) {
        if c == ZERO {
            return;
        }
        match self.terms.entry(alpha) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if *slot.get() == ZERO {
                    slot.remove();
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Multidegree::total).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Complex64 {
        self.terms
            .get(&Multidegree::new(exponents.to_vec()))
            .copied()
            .unwrap_or(ZERO)
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n_vars {
            return Err(HullError::DimensionMismatch {
                expected: self.n_vars,
                got,
            });
        }
        Ok(())
    }

    /// `sum c_alpha z^alpha`, accumulated in canonical term order.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.check_dim(z.len())?;
        Ok(self
            .terms
            .iter()
            .fold(ZERO, |acc, (alpha, c)| acc + c * alpha.eval(z)))
    }

    /// Fubini-Study norm `(1 + |z|^2)^(-d/2) |P(z)|` of `P` read as a
    /// degree-`d` section at the affine point `z`.
    pub fn section_norm(&self, z: &[Complex64], d: u32) -> Result<f64> {
        self.check_section_degree(d)?;
        let value = self.eval(z)?;
        let sq: f64 = z.iter().map(Complex64::norm_sqr).sum();
        Ok((1.0 + sq).powf(-0.5 * d as f64) * value.norm())
    }

    fn check_section_degree(&self, d: u32) -> Result<()> {
        let degree = self.degree();
        if degree > d {
            return Err(HullError::DegreeExceeded { degree, bound: d });
        }
        Ok(())
    }

    /// `t_0^d P(x_1/t_0, ..., x_n/t_0)` as a section in `n + 1` variables.
    pub fn homogenize(&self, d: u32) -> Result<HomogeneousSection> {
        self.check_section_degree(d)?;
        let mut out = ComplexPolynomial::zero(self.n_vars + 1);
        for (alpha, &c) in &self.terms {
            let mut exps = Vec::with_capacity(self.n_vars + 1);
            exps.push(d - alpha.total());
            exps.extend_from_slice(alpha.exponents());
            out.add_term(Multidegree::new(exps), c);
        }
        Ok(HomogeneousSection {
            poly: out,
            degree: d,
        })
    }

    /// Substitutes `x_i -> scale_i * x_i + shift_i` in every variable and
    /// expands exactly.
    pub fn affine_precompose(&self, subs: &[AffineSubstitution]) -> Result<Self> {
        self.check_dim(subs.len())?;
        let n = self.n_vars;
        let images: Vec<ComplexPolynomial> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| {
                &ComplexPolynomial::variable(n, i).scale(s.scale)
                    + &ComplexPolynomial::constant(n, s.shift)
            })
            .collect();
        Ok(self.substitute(&images))
    }

    /// Replaces variable `i` by the polynomial `images[i]` (all in the same
    /// ring) and expands.
    pub fn substitute(&self, images: &[ComplexPolynomial]) -> Self {
        assert_eq!(images.len(), self.n_vars);
        let target_vars = images.first().map_or(self.n_vars, |p| p.n_vars);
        let mut powers: Vec<Vec<ComplexPolynomial>> = images
            .iter()
            .map(|p| vec![ComplexPolynomial::constant(target_vars, ONE), p.clone()])
            .collect();
        let mut out = ComplexPolynomial::zero(target_vars);
        for (alpha, &c) in &self.terms {
            let mut term = ComplexPolynomial::constant(target_vars, c);
            for (i, &e) in alpha.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (alpha, &c) in &self.terms {
            out.add_term(alpha.clone(), c * s);
        }
        out
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn add(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        assert_eq!(self.n_vars, rhs.n_vars, "ring mismatch");
        let mut out = self.clone();
        for (alpha, &c) in &rhs.terms {
            out.add_term(alpha.clone(), c);
        }
        out
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn sub(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn neg(self) -> ComplexPolynomial {
        self.scale(-ONE)
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn mul(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        assert_eq!(self.n_vars, rhs.n_vars, "ring mismatch");
        let mut out = ComplexPolynomial::zero(self.n_vars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                out.add_term(a.plus(b), ca * cb);
            }
        }
        out
    }
}

/// `x -> scale * x + shift` for a single variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineSubstitution {
    pub scale: Complex64,
    pub shift: Complex64,
}

impl AffineSubstitution {
    pub const IDENTITY: Self = Self {
        scale: ONE,
        shift: ZERO,
    };

    pub fn shift(shift: Complex64) -> Self {
        Self { scale: ONE, shift }
    }
}

/// Homogeneous polynomial of exact degree `degree` in `n + 1` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousSection {
    poly: ComplexPolynomial,
    degree: u32,
}

impl HomogeneousSection {
    pub fn new(poly: ComplexPolynomial, degree: u32) -> Result<Self> {
        if let Some((alpha, _)) = poly.terms().find(|(a, _)| a.total() != degree) {
            return Err(HullError::NotHomogeneous {
                total: alpha.total(),
                degree,
            });
        }
        Ok(Self { poly, degree })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n_plus_1_vars(&self) -> usize {
        self.poly.n_vars()
    }

    pub fn as_polynomial(&self) -> &ComplexPolynomial {
        &self.poly
    }

    pub fn is_homogeneous(&self) -> bool {
        self.poly.terms().all(|(a, _)| a.total() == self.degree)
    }

    pub fn eval(&self, homogeneous_point: &[Complex64]) -> Result<Complex64> {
        self.poly.eval(homogeneous_point)
    }

    /// Pointwise Fubini-Study norm `|Q(Z)| / |Z|^d`; independent of the
    /// representative `Z` of the projective point.
    pub fn fs_norm(&self, homogeneous_point: &[Complex64]) -> Result<f64> {
        let value = self.eval(homogeneous_point)?;
        let norm: f64 = homogeneous_point
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            return Err(HullError::Domain("the zero vector is not a projective point".into()));
        }
        Ok(value.norm() / norm.powi(self.degree as i32))
    }

    /// `Q(A Z)` for a square matrix `A` given by rows.
    pub fn compose_linear(&self, rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = self.n_plus_1_vars();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(HullError::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let images: Vec<ComplexPolynomial> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(ComplexPolynomial::zero(n), |acc, (j, &a)| {
                        &acc + &ComplexPolynomial::variable(n, j).scale(a)
                    })
            })
            .collect();
        Self::new(self.poly.substitute(&images), self.degree)
    }

    /// Sets the coordinate `chart.dehomogenize_index` to 1 and renames the
    /// others in `chart.variable_order`.
    pub fn chart_restrict(&self, chart: &AffineChart) -> Result<ComplexPolynomial> {
        if !self.is_homogeneous() {
            let total = self
                .poly
                .terms()
                .map(|(a, _)| a.total())
                .find(|&t| t != self.degree)
                .unwrap_or(0);
            return Err(HullError::NotHomogeneous {
                total,
                degree: self.degree,
            });
        }
        if chart.n_plus_1_vars() != self.n_plus_1_vars() {
            return Err(HullError::DimensionMismatch {
                expected: self.n_plus_1_vars(),
                got: chart.n_plus_1_vars(),
            });
        }
        let n = self.n_plus_1_vars() - 1;
        let mut out = ComplexPolynomial::zero(n);
        for (alpha, &c) in self.poly.terms() {
            let exps = chart
                .variable_order
                .iter()
                .map(|&k| alpha.exponents()[k])
                .collect();
            out.add_term(Multidegree::new(exps), c);
        }
        Ok(out)
    }
}

/// Affine chart `{Z_k = 1}` of projective space, with the surviving
/// coordinates listed in the order they become affine variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineChart {
    dehomogenize_index: usize,
    variable_order: Vec<usize>,
}

impl AffineChart {
    pub fn new(n_plus_1_vars: usize, dehomogenize_index: usize, variable_order: Vec<usize>) -> Result<Self> {
        if dehomogenize_index >= n_plus_1_vars {
            return Err(HullError::InvalidChart(format!(
                "index {dehomogenize_index} out of range for {n_plus_1_vars} coordinates"
            )));
        }
        let mut seen = vec![false; n_plus_1_vars];
        seen[dehomogenize_index] = true;
        for &k in &variable_order {
            if k >= n_plus_1_vars || seen[k] {
                return Err(HullError::InvalidChart(format!(
                    "variable order {variable_order:?} is not a permutation of the remaining coordinates"
                )));
            }
            seen[k] = true;
        }
        if variable_order.len() + 1 != n_plus_1_vars {
            return Err(HullError::InvalidChart(format!(
                "variable order {variable_order:?} is not a permutation of the remaining coordinates"
            )));
        }
        Ok(Self {
            dehomogenize_index,
            variable_order,
        })
    }

    /// The chart `t_0 = 1` with the affine variables in their natural order.
    pub fn standard(n: usize) -> Self {
        Self {
            dehomogenize_index: 0,
            variable_order: (1..=n).collect(),
        }
    }

    pub fn dehomogenize_index(&self) -> usize {
        self.dehomogenize_index
    }

    pub fn variable_order(&self) -> &[usize] {
        &self.variable_order
    }

    pub fn n_plus_1_vars(&self) -> usize {
        self.variable_order.len() + 1
    }

    /// Homogeneous coordinates of the affine point `x` of this chart.
    pub fn lift(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.n_plus_1_vars()];
        out[self.dehomogenize_index] = ONE;
        for (&k, &v) in self.variable_order.iter().zip(x) {
            out[k] = v;
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

/// Wire form: `{"n_vars": int, "terms": [{"exp": [..], "re": f, "im": f}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n_vars: usize,
    pub terms: Vec<TermJson>,
}

impl From<&ComplexPolynomial> for PolynomialJson {
    fn from(p: &ComplexPolynomial) -> Self {
        Self {
            n_vars: p.n_vars,
            terms: p
                .terms
                .iter()
                .map(|(a, c)| TermJson {
                    exp: a.exponents().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for ComplexPolynomial {
    type Error = HullError;
    fn try_from(j: PolynomialJson) -> Result<Self> {
        if j.n_vars == 0 {
            return Err(HullError::Invalid("n_vars must be positive".into()));
        }
        ComplexPolynomial::from_terms(
            j.n_vars,
            j.terms
                .into_iter()
                .map(|t| (t.exp, Complex64::new(t.re, t.im))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zw_minus_one() -> ComplexPolynomial {
        ComplexPolynomial::from_terms(2, [(vec![1, 1], c(1.0, 0.0)), (vec![0, 0], c(-1.0, 0.0))]).unwrap()
    }

    #[test]
    fn constant_and_projection_eval() {
        let one = ComplexPolynomial::constant(2, ONE);
        assert_eq!(one.eval(&[c(3.2, 0.0), c(-1.0, 0.0)]).unwrap(), ONE);
        let w = ComplexPolynomial::variable(2, 1);
        assert_eq!(w.eval(&[ZERO, ONE]).unwrap(), ONE);
    }

    #[test]
    fn eval_rejects_wrong_dimension() {
        let w = ComplexPolynomial::variable(2, 1);
        assert!(matches!(
            w.eval(&[ONE]),
            Err(HullError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn section_norm_examples() {
        let w = ComplexPolynomial::variable(2, 1);
        assert_eq!(w.section_norm(&[ZERO, ZERO], 1).unwrap(), 0.0);
        let one = ComplexPolynomial::constant(2, ONE);
        assert_eq!(one.section_norm(&[c(5.0, 1.0), c(-2.0, 0.5)], 0).unwrap(), 1.0);
        let v = w.section_norm(&[ZERO, ONE], 1).unwrap();
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            zw_minus_one().section_norm(&[ZERO, ZERO], 1),
            Err(HullError::DegreeExceeded { degree: 2, bound: 1 })
        ));
        assert_eq!(ComplexPolynomial::zero(2).section_norm(&[ONE, ONE], 3).unwrap(), 0.0);
    }

    #[test]
    fn homogenize_examples() {
        let w = ComplexPolynomial::variable(2, 1);
        let h = w.homogenize(1).unwrap();
        assert_eq!(h.as_polynomial(), &ComplexPolynomial::variable(3, 2));

        let h = zw_minus_one().homogenize(2).unwrap();
        let expected = ComplexPolynomial::from_terms(
            3,
            [(vec![0, 1, 1], c(1.0, 0.0)), (vec![2, 0, 0], c(-1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(h.as_polynomial(), &expected);
        assert!(h.is_homogeneous());
        assert!(zw_minus_one().homogenize(1).is_err());
    }

    #[test]
    fn chart_restrict_of_w0_in_s0_chart() {
        // coordinates (t0, s0, w0); chart s0 = 1 keeps (t, w)
        let q = HomogeneousSection::new(ComplexPolynomial::variable(3, 2), 1).unwrap();
        let chart = AffineChart::new(3, 1, vec![0, 2]).unwrap();
        assert_eq!(q.chart_restrict(&chart).unwrap(), ComplexPolynomial::variable(2, 1));
    }

    #[test]
    fn non_homogeneous_sections_are_rejected() {
        let p = zw_minus_one();
        assert!(matches!(
            HomogeneousSection::new(p, 2),
            Err(HullError::NotHomogeneous { total: 0, degree: 2 })
        ));
    }

    #[test]
    fn chart_validation() {
        assert!(AffineChart::new(3, 3, vec![0, 1]).is_err());
        assert!(AffineChart::new(3, 1, vec![0, 0]).is_err());
        assert!(AffineChart::new(3, 1, vec![0, 1]).is_err());
        assert!(AffineChart::new(3, 1, vec![0]).is_err());
        assert!(AffineChart::new(3, 1, vec![2, 0]).is_ok());
    }

    #[test]
    fn affine_shift_examples() {
        let z = ComplexPolynomial::variable(2, 0);
        let subs = [AffineSubstitution::shift(ONE), AffineSubstitution::IDENTITY];
        let shifted = z.affine_precompose(&subs).unwrap();
        let expected =
            ComplexPolynomial::from_terms(2, [(vec![1, 0], ONE), (vec![0, 0], ONE)]).unwrap();
        assert_eq!(shifted, expected);

        let z2 = &z * &z;
        let expected = ComplexPolynomial::from_terms(
            2,
            [(vec![2, 0], ONE), (vec![1, 0], c(2.0, 0.0)), (vec![0, 0], ONE)],
        )
        .unwrap();
        assert_eq!(z2.affine_precompose(&subs).unwrap(), expected);
        assert_eq!(z2.affine_precompose(&subs).unwrap().degree(), 2);
    }

    #[test]
    fn cancellation_removes_terms() {
        let w = ComplexPolynomial::variable(2, 1);
        let zero = &w - &w;
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), 0);
        assert_eq!(zero.num_terms(), 0);
    }

    #[test]
    fn graded_basis_counts() {
        assert_eq!(Multidegree::graded_basis(2, 0).len(), 1);
        assert_eq!(Multidegree::graded_basis(2, 16).len(), 153);
        assert_eq!(Multidegree::graded_basis(3, 4).len(), 35);
        let b = Multidegree::graded_basis(2, 3);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b[0].total(), 0);
        assert_eq!(b.last().unwrap().total(), 3);
    }

    #[test]
    fn json_round_trip() {
        let p = zw_minus_one();
        let text = serde_json::to_string(&PolynomialJson::from(&p)).unwrap();
        let back: ComplexPolynomial = serde_json::from_str::<PolynomialJson>(&text)
            .unwrap()
            .try_into()
            .unwrap();
        assert_eq!(back, p);
    }
}
