//! Bloch decomposition and geometric quantum-correlation measures of two qubits.
//!
//! Geometric discord is reported as a (lower, upper) pair. The lower bound is
//! `¼ max(Tr K_x − k_x, Tr K_y − k_y)`; the upper bound is
//! `¼ min(Tr K_x − k_x + Tr L_y − l_y, Tr K_y − k_y + Tr L_x − l_x)`, where
//! `K_x = x xᵀ + T Tᵀ`, `K_y = y yᵀ + Tᵀ T`, `L_x = x xᵀ + T k̂_y k̂_yᵀ Tᵀ`,
//! `L_y = y yᵀ + Tᵀ k̂_x k̂_xᵀ T`, and lowercase letters denote top eigenvalues.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    cmat_mul, cmat_trace, cmat_zero, jacobi_hermitian, jacobi_symmetric, kron2, singular_values,
    CMat4, SymmetricEigen,
};
use crate::state::TwoQubitState;

type Vec3 = [f64; 3];
type Mat3 = [[f64; 3]; 3];

const DEGENERACY_TOL: f64 = 1e-12;

pub(crate) fn pauli() -> [[[Complex64; 2]; 2]; 3] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        [[o, one], [one, o]],
        [[o, -i], [i, o]],
        [[one, o], [o, -one]],
    ]
}

fn identity2() -> [[Complex64; 2]; 2] {
    let o = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [[one, o], [o, one]]
}

fn expectation(rho: &CMat4, op: &CMat4) -> f64 {
    cmat_trace(&cmat_mul(rho, op)).re
}

/// Local Bloch vectors and correlation matrix:
/// `ρ = ¼(I⊗I + Σ x_i σ_i⊗I + Σ y_i I⊗σ_i + Σ T_ij σ_i⊗σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochDecomposition {
    pub x_vec: Vec3,
    pub y_vec: Vec3,
    pub t_mat: Mat3,
}

impl BlochDecomposition {
    pub fn reconstruct(&self) -> CMat4 {
        let s = pauli();
        let id = identity2();
        let mut rho = kron2(&id, &id);
        let mut add = |m: CMat4, w: f64| {
            for (row, mrow) in rho.iter_mut().zip(m.iter()) {
                for (z, mz) in row.iter_mut().zip(mrow.iter()) {
                    *z += mz * w;
                }
            }
        };
        for i in 0..3 {
            add(kron2(&s[i], &id), self.x_vec[i]);
            add(kron2(&id, &s[i]), self.y_vec[i]);
            for j in 0..3 {
                add(kron2(&s[i], &s[j]), self.t_mat[i][j]);
            }
        }
        for z in rho.iter_mut().flatten() {
            *z *= 0.25;
        }
        rho
    }

    /// `K_x = x xᵀ + T Tᵀ`.
    pub fn k_left(&self) -> Mat3 {
        let t = &self.t_mat;
        let mut k = outer(&self.x_vec, &self.x_vec);
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] += (0..3).map(|m| t[i][m] * t[j][m]).sum::<f64>();
            }
        }
        k
    }

    /// `K_y = y yᵀ + Tᵀ T`.
    pub fn k_right(&self) -> Mat3 {
        let t = &self.t_mat;
        let mut k = outer(&self.y_vec, &self.y_vec);
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] += (0..3).map(|m| t[m][i] * t[m][j]).sum::<f64>();
            }
        }
        k
    }
}

pub fn bloch_decompose(rho: &TwoQubitState) -> BlochDecomposition {
    let s = pauli();
    let id = identity2();
    let m = rho.matrix();
    let mut out = BlochDecomposition {
        x_vec: [0.0; 3],
        y_vec: [0.0; 3],
        t_mat: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        out.x_vec[i] = expectation(m, &kron2(&s[i], &id));
        out.y_vec[i] = expectation(m, &kron2(&id, &s[i]));
        for j in 0..3 {
            out.t_mat[i][j] = expectation(m, &kron2(&s[i], &s[j]));
        }
    }
    out
}

fn outer(a: &Vec3, b: &Vec3) -> Mat3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i] * b[j];
        }
    }
    m
}

fn trace3(m: &Mat3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

/// `Tr K − k_max`, clamped at zero against rounding.
fn residual(eig: &SymmetricEigen<3>) -> f64 {
    (eig.values[1] + eig.values[2]).max(0.0)
}

/// Top eigenvector with a deterministic choice inside a degenerate top eigenspace:
/// among the computed eigenvectors whose eigenvalue ties the maximum, take the
/// one with lexicographically largest component magnitudes, then make its first
/// nonzero component positive.
pub fn top_eigenvector(eig: &SymmetricEigen<3>) -> Vec3 {
    let top = eig.values[0];
    let tol = DEGENERACY_TOL * top.abs().max(1.0);
    let mut best = eig.vectors[0];
    for (value, vec) in eig.values.iter().zip(eig.vectors.iter()).skip(1) {
        if top - value > tol {
            break;
        }
        if lexicographically_larger(vec, &best) {
            best = *vec;
        }
    }
    if let Some(lead) = best.iter().find(|c| c.abs() > DEGENERACY_TOL) {
        if *lead < 0.0 {
            best = best.map(|c| -c);
        }
    }
    best
}

fn lexicographically_larger(a: &Vec3, b: &Vec3) -> bool {
    for k in 0..3 {
        let (ma, mb) = (a[k].abs(), b[k].abs());
        if (ma - mb).abs() > DEGENERACY_TOL {
            return ma > mb;
        }
    }
    false
}

/// One-sided closed forms `(¼(Tr K_x − k_x), ¼(Tr K_y − k_y))`.
pub fn one_sided_discords(bloch: &BlochDecomposition) -> (f64, f64) {
    let ex = jacobi_symmetric(&bloch.k_left());
    let ey = jacobi_symmetric(&bloch.k_right());
    (0.25 * residual(&ex), 0.25 * residual(&ey))
}

/// Lower bound on the geometric discord.
pub fn geometric_discord_lower(rho: &TwoQubitState) -> f64 {
    let (left, right) = one_sided_discords(&bloch_decompose(rho));
    left.max(right)
}

/// Upper bound on the geometric discord.
pub fn geometric_discord_upper(rho: &TwoQubitState) -> f64 {
    geometric_discord_bounds_of(&bloch_decompose(rho)).1
}

/// `(lower, upper)` from one Bloch decomposition.
pub fn geometric_discord_bounds(rho: &TwoQubitState) -> (f64, f64) {
    geometric_discord_bounds_of(&bloch_decompose(rho))
}

fn geometric_discord_bounds_of(bloch: &BlochDecomposition) -> (f64, f64) {
    let kx = bloch.k_left();
    let ky = bloch.k_right();
    let ex = jacobi_symmetric(&kx);
    let ey = jacobi_symmetric(&ky);
    let rx = residual(&ex);
    let ry = residual(&ey);
    let lower = 0.25 * rx.max(ry);

    let khat_x = top_eigenvector(&ex);
    let khat_y = top_eigenvector(&ey);
    let t = &bloch.t_mat;
    // T k̂_y and Tᵀ k̂_x
    let t_ky: Vec3 = std::array::from_fn(|i| (0..3).map(|j| t[i][j] * khat_y[j]).sum());
    let tt_kx: Vec3 = std::array::from_fn(|i| (0..3).map(|j| t[j][i] * khat_x[j]).sum());
    let mut lx = outer(&bloch.x_vec, &bloch.x_vec);
    let mut ly = outer(&bloch.y_vec, &bloch.y_vec);
    let (a, b) = (outer(&t_ky, &t_ky), outer(&tt_kx, &tt_kx));
    for i in 0..3 {
        for j in 0..3 {
            lx[i][j] += a[i][j];
            ly[i][j] += b[i][j];
        }
    }
    let elx = jacobi_symmetric(&lx);
    let ely = jacobi_symmetric(&ly);
    debug_assert!((trace3(&lx) - elx.values.iter().sum::<f64>()).abs() < 1e-12);
    let upper = 0.25 * (rx + residual(&ely)).min(ry + residual(&elx));
    (lower, upper)
}

/// Purity-compensated rescaled discord
/// `D = ½(1 − √3/2)⁻¹ [1 − √(1 − D_S / (2 Tr ρ²))]`.
pub fn rescaled_discord(ds: f64, purity: f64) -> Result<f64> {
    if !(ds.is_finite() && purity.is_finite()) || purity <= 0.0 {
        return Err(Error::Domain(format!(
            "rescaled discord needs finite inputs and positive purity (ds = {ds}, purity = {purity})"
        )));
    }
    if ds < -1e-12 || ds > 2.0 * purity * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "rescaled discord needs 0 <= ds <= 2*purity (ds = {ds}, purity = {purity})"
        )));
    }
    Ok(rescale(ds.max(0.0), purity))
}

fn rescale(ds: f64, purity: f64) -> f64 {
    let radicand = (1.0 - ds / (2.0 * purity)).max(0.0);
    let norm = 0.5 / (1.0 - 0.75f64.sqrt());
    norm * (1.0 - radicand.sqrt())
}

/// Closed-form geometric discord of an X-state: the minimum of
/// `2|y|² + 2|x|²` and `½[(a − b)² + (b − c)²] + (|y| − |x|)²`.
pub fn x_state_geometric_discord(a: f64, b: f64, c: f64, x: Complex64, y: Complex64) -> f64 {
    let (xm, ym) = (x.norm(), y.norm());
    let coherent = 2.0 * ym * ym + 2.0 * xm * xm;
    let populations = 0.5 * ((a - b).powi(2) + (b - c).powi(2)) + (ym - xm).powi(2);
    coherent.min(populations)
}

/// Geometric discord of the X-state built from the product state with
/// single-dot occupation `alpha2 = |α|²`:
/// `min[¼(2|α|² − 1)²((2|α|² − 1)² + 1), 4|α|⁴(1 − |α|²)²]`.
pub fn initial_x_discord(alpha2: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha2) {
        return Err(Error::InvalidParameter(format!(
            "alpha2 must lie in [0, 1], got {alpha2}"
        )));
    }
    let u = 2.0 * alpha2 - 1.0;
    let beta2 = 1.0 - alpha2;
    let populations = 0.25 * u * u * (u * u + 1.0);
    let coherent = 4.0 * alpha2 * alpha2 * beta2 * beta2;
    Ok(populations.min(coherent))
}

/// `Tr ρ²`.
pub fn purity(rho: &TwoQubitState) -> f64 {
    rho.matrix().iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// Eigenvalues of `ρ` at or below this are treated as exact zeros when
/// building the concurrence; they are below the eigen-solver's resolution.
const SPECTRUM_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, with `λ_i` the square
/// roots of the eigenvalues of `√ρ ρ̃ √ρ`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
///
/// The `λ_i` are obtained as the singular values of `Wᵀ (σ_y⊗σ_y) W` with
/// `ρ = W W†`, which avoids square roots of rounding-level eigenvalues.
pub fn concurrence(rho: &TwoQubitState) -> f64 {
    let eig = jacobi_hermitian(rho.matrix());
    let mut w = cmat_zero();
    for (col, (p, v)) in eig.values.iter().zip(eig.vectors.iter()).enumerate() {
        if *p <= SPECTRUM_FLOOR {
            continue;
        }
        let root = p.sqrt();
        for i in 0..4 {
            w[i][col] = v[i] * root;
        }
    }
    let s = pauli();
    let yy = kron2(&s[1], &s[1]);
    let mut wt = cmat_zero();
    for i in 0..4 {
        for j in 0..4 {
            wt[i][j] = w[j][i];
        }
    }
    let tau = cmat_mul(&cmat_mul(&wt, &yy), &w);
    let lambda = singular_values(&tau);
    (lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0)
}

/// Correlation summary of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscordReport {
    pub ds_lower: f64,
    pub ds_upper: f64,
    pub purity: f64,
    pub d_lower: f64,
    pub d_upper: f64,
    pub concurrence: f64,
}

impl DiscordReport {
    pub fn of(rho: &TwoQubitState) -> Self {
        let (ds_lower, ds_upper) = geometric_discord_bounds(rho);
        let p = purity(rho);
        Self {
            ds_lower,
            ds_upper,
            purity: p,
            // D_S <= Tr ρ² − ¼ < 2 Tr ρ² for every state, so the radicand stays positive
            d_lower: rescale(ds_lower, p),
            d_upper: rescale(ds_upper, p),
            concurrence: concurrence(rho),
        }
    }
}

/// `(lower, upper)` rescaled discord without the concurrence computation.
pub fn rescaled_discord_bounds(rho: &TwoQubitState) -> (f64, f64) {
    let (lo, hi) = geometric_discord_bounds(rho);
    let p = purity(rho);
    (rescale(lo, p), rescale(hi, p))
}
