//! Sup-norm extremal value at small degree by linear programming.
//!
//! The disk constraint `|P(z_k)| <= 1` is replaced by the circumscribed
//! polygon `Re(e^{-i phi_l} P(z_k)) <= 1` over `phases` equally spaced
//! directions. The polygon admits `|P| <= sec(pi/phases)`, so the LP optimum
//! is scaled by `cos(pi/phases)` to give a lower bound on the true value.

use std::f64::consts::PI;

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};
use num_complex::Complex64;

use crate::curvelib::SampledCurve;
use crate::error::{HullError, Result};
use crate::polyring::Multidegree;

pub const MAX_LP_DEGREE: u32 = 4;
pub const MIN_PHASES: usize = 32;

#[derive(Clone, Debug)]
pub struct LpSolution {
    /// Lower bound `cos(pi/phases) * LP optimum` on the sup-norm extremal value.
    pub value: f64,
    /// Raw LP optimum.
    pub lp_value: f64,
    /// Coefficients of the optimal polynomial in graded basis order.
    pub coefficients: Vec<Complex64>,
}

/// `max |P(z)|` over polynomials of degree `<= d` with `|P| <= 1` on the
/// curve samples, from below.
pub fn sup_extremal_lp(z: &[Complex64], curve: &SampledCurve, d: u32, phases: usize) -> Result<LpSolution> {
    if d > MAX_LP_DEGREE {
        return Err(HullError::Invalid(format!("LP oracle supports degree <= {MAX_LP_DEGREE}, got {d}")));
    }
    if phases < MIN_PHASES {
        return Err(HullError::Invalid(format!("at least {MIN_PHASES} phases required, got {phases}")));
    }
    if z.len() != curve.n() {
        return Err(HullError::DimensionMismatch { expected: curve.n(), got: z.len() });
    }
    let basis = Multidegree::graded_basis(curve.n(), d);
    let dim = basis.len();
    let nv = 2 * dim;
    // variables x = (Re c_a, Im c_a); Re(e^{-i phi} c z^a) = Re c Re(u) - Im c Im(u), u = e^{-i phi} z^a
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(curve.len() * phases);
    for p in curve.points() {
        let mono: Vec<Complex64> = basis.iter().map(|a| a.eval(p)).collect();
        for l in 0..phases {
            let rot = Complex64::from_polar(1.0, -2.0 * PI * l as f64 / phases as f64);
            let mut row = Vec::with_capacity(nv);
            for u in &mono {
                row.push((rot * u).re);
            }
            for u in &mono {
                row.push(-(rot * u).im);
            }
            rows.push(row);
        }
    }
    // objective Re P(z); the feasible set is invariant under rotation by the
    // phase grid, so the maximum over theta is attained at theta = 0
    let at: Vec<Complex64> = basis.iter().map(|a| a.eval(z)).collect();
    let mut objective: Vec<f64> = at.iter().map(|u| u.re).collect();
    objective.extend(at.iter().map(|u| -u.im));
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<Variable> = objective.iter().map(|&c| lp.add_var(c, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for row in &rows {
        let expr: LinearExpr = vars.iter().zip(row).map(|(&v, &a)| (v, a)).collect();
        lp.add_constraint(expr, ComparisonOp::Le, 1.0);
    }
    let solution = lp.solve().map_err(|e| match e {
        microlp::Error::Unbounded => HullError::UnboundedLp { degree: d },
        other => HullError::Domain(format!("LP solver failed: {other}")),
    })?;
    let x: Vec<f64> = vars.iter().map(|&v| *solution.var_value(v)).collect();
    let lp_value = solution.objective();
    let coefficients = (0..dim).map(|i| Complex64::new(x[i], x[dim + i])).collect();
    Ok(LpSolution {
        value: lp_value * (PI / phases as f64).cos(),
        lp_value,
        coefficients,
    })
}
