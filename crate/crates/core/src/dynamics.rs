//! Exact pure-dephasing evolution of the two-dot density matrix.
//!
//! Populations are untouched; each coherence picks up
//! `ρ_ij(t) = ρ_ij(0) e^{i(E_j − E_i)t/ħ} e^{−iA_ij(t) + B_ij(t)}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{DephasingKernel, KernelPoint, HBAR};
use crate::state::TwoQubitState;

/// Upper-triangle coherence pairs `(i, j)`, `i < j`.
pub const COHERENCE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Optional deterministic phase from the polaron-shifted dot energies.
///
/// The phase is a product of local unitaries, so it changes no correlation
/// measure used here; it is off by default (rotating frame).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSettings {
    /// Shifted left-dot energy `E_L` (meV).
    #[serde(default)]
    pub level_shift_l: f64,
    /// Shifted right-dot energy `E_R` (meV).
    #[serde(default)]
    pub level_shift_r: f64,
    #[serde(default)]
    pub include_energy_phase: bool,
}

impl PropagationSettings {
    /// Basis energies `(E₀, E₁, E₂, E₃) = (0, E_R, E_L, E_L + E_R)`; all zero unless enabled.
    pub fn basis_energies(&self) -> [f64; 4] {
        if !self.include_energy_phase {
            return [0.0; 4];
        }
        let (el, er) = (self.level_shift_l, self.level_shift_r);
        [0.0, er, el, el + er]
    }
}

/// Evolves `rho0` to `kernel.time_grid()[t_index]`.
pub fn propagate(
    rho0: &TwoQubitState,
    kernel: &DephasingKernel,
    t_index: usize,
    settings: &PropagationSettings,
) -> Result<TwoQubitState> {
    let point = kernel.point(t_index).ok_or_else(|| {
        Error::TimeGridMismatch(format!(
            "time index {t_index} outside kernel grid of {} points",
            kernel.len()
        ))
    })?;
    let t = kernel.time_grid()[t_index];
    if settings.include_energy_phase && !t.is_finite() {
        return Err(Error::TimeGridMismatch(
            "energy phase requested on the long-time kernel, which has no finite time".into(),
        ));
    }
    Ok(propagate_point(rho0, &point, t, settings))
}

/// Evolves `rho0` to the kernel time equal to `t_ps`; the time must be on the grid.
pub fn propagate_at(
    rho0: &TwoQubitState,
    kernel: &DephasingKernel,
    t_ps: f64,
    settings: &PropagationSettings,
) -> Result<TwoQubitState> {
    let index = kernel
        .time_grid()
        .iter()
        .position(|&t| t == t_ps)
        .ok_or_else(|| {
            Error::TimeGridMismatch(format!("t = {t_ps} ps is not on the kernel grid"))
        })?;
    propagate(rho0, kernel, index, settings)
}

/// Applies the dephasing map for a single kernel point at time `t` (ps).
pub fn propagate_point(
    rho0: &TwoQubitState,
    point: &KernelPoint,
    t: f64,
    settings: &PropagationSettings,
) -> TwoQubitState {
    let energies = settings.basis_energies();
    let mut rho = *rho0.matrix();
    for (i, j) in COHERENCE_PAIRS {
        let (a, b) = point.exponent(i, j);
        let mut phase = -a;
        if settings.include_energy_phase {
            phase += (energies[j] - energies[i]) * t / HBAR;
        }
        let factor = Complex64::from_polar(b.exp(), phase);
        rho[i][j] = rho0.get(i, j) * factor;
        rho[j][i] = rho[i][j].conj();
    }
    TwoQubitState::from_matrix_unchecked(rho)
}

/// `|ρ_ij(t)| / |ρ_ij(0)|` for every upper-triangle pair with nonzero initial coherence.
pub fn normalized_coherences(
    rho0: &TwoQubitState,
    kernel: &DephasingKernel,
    t_index: usize,
) -> Result<BTreeMap<(usize, usize), f64>> {
    let evolved = propagate(rho0, kernel, t_index, &PropagationSettings::default())?;
    Ok(COHERENCE_PAIRS
        .iter()
        .filter(|&&(i, j)| rho0.get(i, j).norm() > 0.0)
        .map(|&(i, j)| ((i, j), evolved.get(i, j).norm() / rho0.get(i, j).norm()))
        .collect())
}
