//! Brute-force geometric discord: minimum squared Hilbert–Schmidt distance
//! between a state and its image under a local projective measurement, over a
//! uniform grid of measurement directions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{bloch_decompose, geometric_discord_lower, one_sided_discords, pauli};
use crate::error::{Error, Result};
use crate::linalg::{cmat_mul, cmat_zero, frobenius_sqr, kron2, CMat4};
use crate::state::TwoQubitState;

const MIN_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// `θ_i = π i / (n_θ − 1)`, `φ_j = 2π j / n_φ`; the poles carry one direction each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub side: Side,
}

impl MeasurementGrid {
    pub fn new(n_theta: usize, n_phi: usize, side: Side) -> Result<Self> {
        if n_theta < MIN_POINTS || n_phi < MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "measurement grid needs n_theta, n_phi >= {MIN_POINTS}, got {n_theta} x {n_phi}"
            )));
        }
        Ok(Self {
            n_theta,
            n_phi,
            side,
        })
    }

    pub fn with_side(self, side: Side) -> Self {
        Self { side, ..self }
    }

    /// Finer grid containing every direction of this one.
    pub fn refined(&self) -> Self {
        Self {
            n_theta: 2 * self.n_theta - 1,
            n_phi: 2 * self.n_phi,
            side: self.side,
        }
    }

    pub fn theta_step(&self) -> f64 {
        PI / (self.n_theta - 1) as f64
    }

    pub fn phi_step(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }

    /// Unit vectors of the grid, poles first and last.
    pub fn directions(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity((self.n_theta - 2) * self.n_phi + 2);
        for i in 0..self.n_theta {
            let theta = PI * (i as f64 / (self.n_theta - 1) as f64);
            let n_phi = if i == 0 || i == self.n_theta - 1 {
                1
            } else {
                self.n_phi
            };
            let (st, ct) = theta.sin_cos();
            for j in 0..n_phi {
                let phi = 2.0 * PI * (j as f64 / self.n_phi as f64);
                let (sp, cp) = phi.sin_cos();
                out.push([st * cp, st * sp, ct]);
            }
        }
        out
    }

    /// Worst-case excess of the grid minimum over the exact minimum for a
    /// side whose correlation matrix has trace `trace_k`.
    pub fn tolerance(&self, trace_k: f64) -> f64 {
        let h = 0.5 * (self.theta_step() + self.phi_step());
        0.25 * trace_k * h * h + 1e-12
    }
}

fn dephased_distance(rho: &CMat4, n: &[f64; 3], side: Side) -> f64 {
    let s = pauli();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let id = [[one, zero], [zero, one]];
    let mut image = cmat_zero();
    for sign in [1.0, -1.0] {
        let mut p = [[zero; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let ns = s[0][a][b] * n[0] + s[1][a][b] * n[1] + s[2][a][b] * n[2];
                p[a][b] = (id[a][b] + ns * sign) * 0.5;
            }
        }
        let proj = match side {
            Side::Left => kron2(&p, &id),
            Side::Right => kron2(&id, &p),
        };
        let term = cmat_mul(&cmat_mul(&proj, rho), &proj);
        for (row, trow) in image.iter_mut().zip(term.iter()) {
            for (z, tz) in row.iter_mut().zip(trow.iter()) {
                *z += tz;
            }
        }
    }
    let mut diff = *rho;
    for (row, irow) in diff.iter_mut().zip(image.iter()) {
        for (z, iz) in row.iter_mut().zip(irow.iter()) {
            *z -= iz;
        }
    }
    frobenius_sqr(&diff)
}

/// Minimum over grid directions of `‖ρ − Σ_a (Π_a⊗I) ρ (Π_a⊗I)‖²_HS`
/// (`I⊗Π_a` for the right side).
pub fn oracle_one_sided(rho: &TwoQubitState, grid: &MeasurementGrid) -> f64 {
    let m = rho.matrix();
    grid.directions()
        .par_iter()
        .map(|n| dephased_distance(m, n, grid.side))
        .reduce(|| f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub lower: f64,
    pub closed_left: f64,
    pub closed_right: f64,
    pub oracle_left: f64,
    pub oracle_right: f64,
    pub tolerance_left: f64,
    pub tolerance_right: f64,
}

/// Runs the oracle on both sides and checks it against the closed forms.
/// The grid's `side` field is ignored.
pub fn sandwich_check(rho: &TwoQubitState, grid: &MeasurementGrid) -> Result<SandwichReport> {
    let bloch = bloch_decompose(rho);
    let trace = |k: [[f64; 3]; 3]| k[0][0] + k[1][1] + k[2][2];
    let (closed_left, closed_right) = one_sided_discords(&bloch);
    let report = SandwichReport {
        lower: geometric_discord_lower(rho),
        closed_left,
        closed_right,
        oracle_left: oracle_one_sided(rho, &grid.with_side(Side::Left)),
        oracle_right: oracle_one_sided(rho, &grid.with_side(Side::Right)),
        tolerance_left: grid.tolerance(trace(bloch.k_left())),
        tolerance_right: grid.tolerance(trace(bloch.k_right())),
    };
    let tol = report.tolerance_left.max(report.tolerance_right);
    let mut failures = Vec::new();
    if report.lower > report.oracle_left.max(report.oracle_right) + tol {
        failures.push("lower bound exceeds both oracle values");
    }
    if report.oracle_left < report.closed_left - report.tolerance_left {
        failures.push("left oracle below its closed form");
    }
    if report.oracle_right < report.closed_right - report.tolerance_right {
        failures.push("right oracle below its closed form");
    }
    if report.oracle_left > report.closed_left + report.tolerance_left {
        failures.push("left oracle above its closed form beyond grid tolerance");
    }
    if report.oracle_right > report.closed_right + report.tolerance_right {
        failures.push("right oracle above its closed form beyond grid tolerance");
    }
    if failures.is_empty() {
        Ok(report)
    } else {
        Err(Error::Sandwich(format!(
            "{}; report {}; state {}",
            failures.join(", "),
            serde_json::to_string(&report).unwrap_or_default(),
            rho.to_json_string()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{pure_product_state, x_state};
    use approx::assert_abs_diff_eq;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn grid_validation_and_shape() {
        assert!(MeasurementGrid::new(31, 64, Side::Left).is_err());
        let g = MeasurementGrid::new(32, 40, Side::Right).unwrap();
        let dirs = g.directions();
        assert_eq!(dirs.len(), 30 * 40 + 2);
        assert_eq!(dirs[0], [0.0, 0.0, 1.0]);
        for d in &dirs {
            assert_abs_diff_eq!(
                d[0] * d[0] + d[1] * d[1] + d[2] * d[2],
                1.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn refined_grid_contains_coarse() {
        let g = MeasurementGrid::new(33, 32, Side::Left).unwrap();
        let fine = g.refined().directions();
        for d in g.directions() {
            assert!(fine.contains(&d));
        }
    }

    #[test]
    fn diagonal_product_is_zero() {
        let s = x_state(0.1, 0.2, 0.5, c(0.0), c(0.0)).unwrap();
        let g = MeasurementGrid::new(32, 32, Side::Left).unwrap();
        assert_abs_diff_eq!(oracle_one_sided(&s, &g), 0.0, epsilon = 1e-15);
        let s = pure_product_state(c(0.6), c(0.8)).unwrap();
        assert!(oracle_one_sided(&s, &g.with_side(Side::Right)) < 1e-3);
    }

    #[test]
    fn bell_state_coarse_grid() {
        let s = x_state(0.5, 0.0, 0.5, c(0.0), c(0.5)).unwrap();
        let g = MeasurementGrid::new(128, 128, Side::Left).unwrap();
        assert_abs_diff_eq!(oracle_one_sided(&s, &g), 0.5, epsilon = 1e-3);
        let report = sandwich_check(&s, &g).unwrap();
        assert_abs_diff_eq!(report.closed_left, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn sandwich_on_asymmetric_x_state() {
        let s = x_state(0.4, 0.1, 0.4, c(0.05), Complex64::new(0.0, 0.3)).unwrap();
        let g = MeasurementGrid::new(64, 64, Side::Left).unwrap();
        let r = sandwich_check(&s, &g).unwrap();
        assert!(
            r.oracle_left
                <= MeasurementGrid::new(64, 64, Side::Left)
                    .map(|g| oracle_one_sided(&s, &g))
                    .unwrap()
        );
        let fine = oracle_one_sided(&s, &g.refined());
        assert!(fine <= r.oracle_left + 1e-12);
    }
}
