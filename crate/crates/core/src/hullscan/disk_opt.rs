//! Lower bound for `-V_{K_r}(z0)` by searching analytic disks with simple
//! poles whose boundary stays in the tube `K_r`.
//!
//! Disks come from the pole family `f(zeta) = (z0_1 + zeta, ..., z0_n +
//! sum c_j/(zeta - a_j) + sum c_j/a_j)`, so `f(0) = z0`. The objective is
//! the pole log-sum `sum log a_j`, maximized by Nelder-Mead over
//! `(logit a_j, log c_j)` with a quadratic penalty on the boundary distance
//! in excess of `r`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvelib::{PoleSeriesParams, SampledCurve};
use crate::diskmaps::{check_conditions, RationalDiskMap};
use crate::error::{HullError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskOptOptions {
    /// Largest number of poles tried; every count from 0 up is searched.
    pub max_poles: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Function evaluations per Nelder-Mead run.
    pub max_evals: usize,
    /// Boundary points during the search.
    pub search_boundary: usize,
    /// Boundary points for the final check.
    pub check_boundary: usize,
}

impl Default for DiskOptOptions {
    fn default() -> Self {
        Self {
            max_poles: 3,
            restarts: 5,
            seed: 0,
            max_evals: 400,
            search_boundary: 128,
            check_boundary: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub poles: usize,
    /// Best feasible log-sum for this count, if any.
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskBound {
    /// Best feasible `sum log a_j`.
    pub value: f64,
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub boundary_distance: f64,
    pub penalty_weight: f64,
    pub evaluations: usize,
    pub per_count: Vec<CountResult>,
}

struct Problem<'a> {
    curve: &'a SampledCurve,
    z0: &'a [Complex64],
    r: f64,
    mu: f64,
    m_bdy: usize,
}

impl Problem<'_> {
    fn decode(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let k = x.len() / 2;
        let a = x[..k].iter().map(|&u| 1.0 / (1.0 + (-u).exp())).collect();
        let c = x[k..].iter().map(|&v| v.exp()).collect();
        (a, c)
    }

    fn disk(&self, a: &[f64], c: &[f64]) -> Result<RationalDiskMap> {
        RationalDiskMap::pole_family(self.z0, a, c)
    }

    fn boundary_distance(&self, f: &RationalDiskMap, m_bdy: usize) -> Result<f64> {
        let d = f
            .boundary_values(m_bdy)
            .into_par_iter()
            .map(|w| self.curve.dist_to_curve(&w))
            .collect::<Result<Vec<_>>>()?;
        Ok(d.into_iter().fold(0.0, f64::max))
    }

    /// Penalized negated objective, and the boundary distance.
    fn eval(&self, x: &[f64]) -> (f64, f64) {
        let (a, c) = Self::decode(x);
        if a.iter().any(|&v| !(v > 0.0 && v < 1.0)) || c.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return (f64::INFINITY, f64::INFINITY);
        }
        let dist = match self.disk(&a, &c).and_then(|f| self.boundary_distance(&f, self.m_bdy)) {
            Ok(d) if d.is_finite() => d,
            _ => return (f64::INFINITY, f64::INFINITY),
        };
        let objective: f64 = a.iter().map(|v| v.ln()).sum();
        let excess = (dist - self.r).max(0.0);
        (-objective + self.mu * excess * excess, dist)
    }
}

/// Minimizes `f` from `x0` with initial steps `step`; returns the best point,
/// its value and the evaluation count.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], step: f64, max_evals: usize) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;
    while evals < max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        if (values[n] - values[0]).abs() <= 1e-12 * (1.0 + values[0].abs()) && values[0].is_finite() {
            break;
        }
        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + t * (simplex[n][k] - centroid[k])).collect() };
        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let x = along(-0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = along(0.5);
                let v = f(&x);
                (x, v)
            };
            evals += 1;
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                for i in 1..=n {
                    let shrunk: Vec<f64> = (0..n).map(|k| simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k])).collect();
                    values[i] = f(&shrunk);
                    simplex[i] = shrunk;
                }
                evals += n;
            }
        }
    }
    let best = (0..=n).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    (simplex[best].clone(), values[best], evals)
}

pub fn disk_lower_bound(z0: &[Complex64], curve: &SampledCurve, r: f64, opts: &DiskOptOptions) -> Result<DiskBound> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(HullError::Invalid(format!("tube radius must be positive, got {r}")));
    }
    if z0.len() != curve.n() {
        return Err(HullError::DimensionMismatch { expected: curve.n(), got: z0.len() });
    }
    if opts.restarts == 0 {
        return Err(HullError::Invalid("at least one restart is required".into()));
    }
    let mu = 1e4 / (r * r);
    let problem = Problem {
        curve,
        z0,
        r,
        mu,
        m_bdy: opts.search_boundary,
    };
    let family = PoleSeriesParams::standard();
    let mut evaluations = 0;
    let mut best: Option<(f64, Vec<f64>, Vec<f64>, f64)> = None;
    let mut best_penalty = f64::INFINITY;
    let mut per_count = Vec::new();

    // the pole-free disk zeta -> z0 + zeta e_1
    let flat = problem.disk(&[], &[])?;
    let flat_dist = problem.boundary_distance(&flat, opts.check_boundary)?;
    evaluations += 1;
    if flat_dist < r {
        best = Some((0.0, vec![], vec![], flat_dist));
        per_count.push(CountResult { poles: 0, value: Some(0.0) });
    } else {
        best_penalty = best_penalty.min(mu * (flat_dist - r).powi(2));
        per_count.push(CountResult { poles: 0, value: None });
    }

    for k in 1..=opts.max_poles {
        let mut count_best: Option<f64> = None;
        let x_family: Vec<f64> = (1..=k)
            .map(|j| {
                let a = family.a(j);
                (a / (1.0 - a)).ln()
            })
            .chain((1..=k).map(|j| family.log_c(j)))
            .collect();
        for restart in 0..opts.restarts {
            let x0: Vec<f64> = if restart == 0 {
                x_family.clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((k as u64) << 32) ^ restart as u64);
                x_family.iter().map(|&v| v + rng.gen_range(-0.5..0.5)).collect()
            };
            let (x, value, evals) = nelder_mead(|x| problem.eval(x).0, &x0, 0.5, opts.max_evals);
            evaluations += evals;
            best_penalty = best_penalty.min(value);
            let (a, c) = Problem::decode(&x);
            // confirm feasibility on the finer boundary grid
            let f = problem.disk(&a, &c)?;
            let dist = problem.boundary_distance(&f, opts.check_boundary)?;
            if dist < r {
                let log_sum: f64 = a.iter().map(|v| v.ln()).sum();
                count_best = Some(count_best.map_or(log_sum, |b: f64| b.max(log_sum)));
                if best.as_ref().map_or(true, |b| log_sum > b.0) {
                    best = Some((log_sum, a, c, dist));
                }
            }
        }
        per_count.push(CountResult { poles: k, value: count_best });
    }
    let Some((value, a, c, boundary_distance)) = best else {
        return Err(HullError::Infeasible { best_penalty });
    };
    Ok(DiskBound {
        value,
        a,
        c,
        boundary_distance,
        penalty_weight: mu,
        evaluations,
        per_count,
    })
}

/// Checks conditions (i)-(iv) for the optimized disk.
pub fn verify_bound(bound: &DiskBound, z0: &[Complex64], curve: &SampledCurve, r: f64, m: f64) -> Result<bool> {
    let f = RationalDiskMap::pole_family(z0, &bound.a, &bound.c)?;
    Ok(check_conditions(&f, curve, r, z0, m, 256)?.all_hold())
}
