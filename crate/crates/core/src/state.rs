//! Two-qubit density matrices and the initial-state builders.
//!
//! Basis ordering: `|0⟩ = |0_L 0_R⟩`, `|1⟩ = |0_L 1_R⟩`, `|2⟩ = |1_L 0_R⟩`,
//! `|3⟩ = |1_L 1_R⟩`, so the left dot is the more significant tensor factor.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{cmat_zero, jacobi_hermitian, CMat4};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
const NORMALIZATION_TOL: f64 = 1e-12;

/// Validated 4×4 density matrix of the two dots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    rho: CMat4,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(rho: CMat4) -> Result<Self> {
        let violations = invariant_violations(&rho);
        if violations.is_empty() {
            Ok(Self { rho })
        } else {
            Err(Error::InvalidState(violations))
        }
    }

    /// Skips validation. For matrices produced by invariant-preserving maps.
    pub(crate) fn from_matrix_unchecked(rho: CMat4) -> Self {
        Self { rho }
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.rho
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rho[i][j]
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.rho[i][i].re)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        jacobi_hermitian(&self.rho).values
    }

    /// Single-qubit reduced states `(ρ_L, ρ_R)`.
    pub fn marginals(&self) -> ([[Complex64; 2]; 2], [[Complex64; 2]; 2]) {
        let zero = Complex64::new(0.0, 0.0);
        let mut left = [[zero; 2]; 2];
        let mut right = [[zero; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    left[a][b] += self.rho[2 * a + k][2 * b + k];
                    right[a][b] += self.rho[2 * k + a][2 * k + b];
                }
            }
        }
        (left, right)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let rows: StateJson = serde_json::from_str(s)?;
        Self::new(rows.into_matrix()?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::io(path, e))
    }
}

fn invariant_violations(rho: &CMat4) -> Vec<String> {
    let mut out = Vec::new();
    if rho
        .iter()
        .flatten()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        out.push("entries must be finite".to_string());
        return out;
    }
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in i..4 {
            worst = worst.max((rho[j][i] - rho[i][j].conj()).norm());
        }
    }
    if worst > HERMITICITY_TOL {
        out.push(format!(
            "not Hermitian (max |rho_ji - conj rho_ij| = {worst:e})"
        ));
    }
    let trace: f64 = (0..4).map(|i| rho[i][i].re).sum();
    if (trace - 1.0).abs() > TRACE_TOL {
        out.push(format!("trace = {trace} differs from 1"));
    }
    let min_eig = jacobi_hermitian(rho).values[3];
    if min_eig < EIGENVALUE_FLOOR {
        out.push(format!(
            "not positive semidefinite (min eigenvalue {min_eig:e})"
        ));
    }
    out
}

/// JSON layout: 4×4 array of `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct StateJson(Vec<Vec<[f64; 2]>>);

impl StateJson {
    fn into_matrix(self) -> Result<CMat4> {
        if self.0.len() != 4 || self.0.iter().any(|row| row.len() != 4) {
            return Err(Error::InvalidState(vec![
                "state must be a 4x4 array of [re, im] pairs".into(),
            ]));
        }
        let mut m = cmat_zero();
        for (i, row) in self.0.iter().enumerate() {
            for (j, [re, im]) in row.iter().enumerate() {
                m[i][j] = Complex64::new(*re, *im);
            }
        }
        Ok(m)
    }
}

impl Serialize for TwoQubitState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .rho
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        StateJson(rows).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TwoQubitState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = StateJson::deserialize(deserializer)?;
        let m = rows.into_matrix().map_err(serde::de::Error::custom)?;
        TwoQubitState::new(m).map_err(serde::de::Error::custom)
    }
}

/// `|Ψ⟩_L ⊗ |Ψ⟩_R` with `|Ψ⟩ = α|0⟩ + β|1⟩`, i.e. the projector onto
/// `α²|0⟩ + αβ|1⟩ + αβ|2⟩ + β²|3⟩`.
pub fn pure_product_state(alpha: Complex64, beta: Complex64) -> Result<TwoQubitState> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let psi = [alpha * alpha, alpha * beta, alpha * beta, beta * beta];
    Ok(TwoQubitState::from_matrix_unchecked(projector(&psi)))
}

/// Product state with real amplitudes `α = √alpha2`, `β = √(1 − alpha2)`.
pub fn pure_product_from_alpha2(alpha2: f64) -> Result<TwoQubitState> {
    check_alpha2(alpha2)?;
    pure_product_state(
        Complex64::new(alpha2.sqrt(), 0.0),
        Complex64::new((1.0 - alpha2).sqrt(), 0.0),
    )
}

pub(crate) fn projector(psi: &[Complex64; 4]) -> CMat4 {
    let mut m = cmat_zero();
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = psi[i] * psi[j].conj();
        }
    }
    m
}

/// X-state
/// ```text
/// | a  0  0  y |
/// | 0  b  x  0 |
/// | 0  x* b  0 |
/// | y* 0  0  c |
/// ```
pub fn x_state(a: f64, b: f64, c: f64, x: Complex64, y: Complex64) -> Result<TwoQubitState> {
    const TOL: f64 = 1e-12;
    if [a, b, c, x.re, x.im, y.re, y.im]
        .iter()
        .any(|v| !v.is_finite())
    {
        return Err(Error::XStatePositivity("entries must be finite".into()));
    }
    if a < -TOL || b < -TOL || c < -TOL {
        return Err(Error::XStatePositivity(format!(
            "populations must be >= 0 (a = {a}, b = {b}, c = {c})"
        )));
    }
    let trace = a + 2.0 * b + c;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::XStatePositivity(format!(
            "a + 2b + c = {trace} differs from 1"
        )));
    }
    if x.norm() > b + TOL {
        return Err(Error::XStatePositivity(format!(
            "inner block {{1,2}} requires b >= |x| (b = {b}, |x| = {})",
            x.norm()
        )));
    }
    if y.norm_sqr() > a * c + TOL {
        return Err(Error::XStatePositivity(format!(
            "outer block {{0,3}} requires a*c >= |y|^2 (a*c = {}, |y|^2 = {})",
            a * c,
            y.norm_sqr()
        )));
    }
    let mut m = cmat_zero();
    m[0][0] = Complex64::new(a, 0.0);
    m[1][1] = Complex64::new(b, 0.0);
    m[2][2] = Complex64::new(b, 0.0);
    m[3][3] = Complex64::new(c, 0.0);
    m[0][3] = y;
    m[3][0] = y.conj();
    m[1][2] = x;
    m[2][1] = x.conj();
    Ok(TwoQubitState::from_matrix_unchecked(m))
}

/// X-state obtained from the pure product state by dropping the four
/// coherences outside the anti-diagonal: `a = |α|⁴`, `b = x = y = |α|²|β|²`,
/// `c = |β|⁴` for real amplitudes.
pub fn initial_x_from_alpha(alpha2: f64) -> Result<TwoQubitState> {
    check_alpha2(alpha2)?;
    let beta2 = 1.0 - alpha2;
    let b = alpha2 * beta2;
    x_state(
        alpha2 * alpha2,
        b,
        beta2 * beta2,
        Complex64::new(b, 0.0),
        Complex64::new(b, 0.0),
    )
}

fn check_alpha2(alpha2: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha2) {
        return Err(Error::InvalidParameter(format!(
            "alpha2 must lie in [0, 1], got {alpha2}"
        )));
    }
    Ok(())
}
