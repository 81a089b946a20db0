//! Phonon-bath integrals behind the pure-dephasing functions.
//!
//! Units throughout: meV, ps, nm, K. The mode sum over phonon wave vectors is
//! replaced by `V/(2π)³ ∫ d³k`; the normalization volume cancels against the
//! `1/V` in the squared coupling, so every quantity below is volume free.

mod kernel;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use kernel::{
    asymptotic_b, compute_kernel, AsymptoticDamping, AzimuthalMode, Channel, DephasingKernel,
    KernelPoint, Separation, SpectralDensities, SpectralGrid,
};

/// Reduced Planck constant (meV·ps).
pub const HBAR: f64 = 0.6582119569;
/// Boltzmann constant (meV/K).
pub const BOLTZMANN_K: f64 = 0.08617333262;
/// One kg/m³ expressed in meV·ps²/nm⁵.
pub const KG_PER_M3: f64 = 6.241509074460763;

/// Deformation-potential and confinement parameters of the dots.
///
/// `mass_density` is stored in meV·ps²/nm⁵; use [`MaterialParams::with_density_kg_m3`]
/// to set it from SI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialParams {
    /// Electron deformation potential (meV).
    pub sigma_e: f64,
    /// Hole deformation potential (meV).
    pub sigma_h: f64,
    /// Longitudinal sound speed (nm/ps).
    pub sound_speed: f64,
    /// Crystal density (meV·ps²/nm⁵).
    pub mass_density: f64,
    /// In-plane electron wavefunction width (nm).
    pub l_e: f64,
    /// In-plane hole wavefunction width (nm).
    pub l_h: f64,
    /// Vertical wavefunction width (nm).
    pub l_z: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::gaas()
    }
}

impl MaterialParams {
    /// GaAs self-assembled dot parameters.
    pub fn gaas() -> Self {
        Self {
            sigma_e: 8000.0,
            sigma_h: -1000.0,
            sound_speed: 5.6,
            mass_density: 5600.0 * KG_PER_M3,
            l_e: 4.4,
            l_h: 3.6,
            l_z: 1.0,
        }
    }

    pub fn with_density_kg_m3(mut self, density: f64) -> Self {
        self.mass_density = density * KG_PER_M3;
        self
    }

    pub fn density_kg_m3(&self) -> f64 {
        self.mass_density / KG_PER_M3
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("sound_speed", self.sound_speed),
            ("mass_density", self.mass_density),
            ("l_e", self.l_e),
            ("l_h", self.l_h),
            ("l_z", self.l_z),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {value}"
                )));
            }
        }
        if !(self.sigma_e.is_finite() && self.sigma_h.is_finite()) {
            return Err(Error::InvalidParameter(
                "deformation potentials must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Gaussian form factor `e^{-l_z² k_z²/4}[σ_e e^{-l_e² k⊥²/4} − σ_h e^{-l_h² k⊥²/4}]` (meV).
    pub fn form_factor(&self, k_perp: f64, k_z: f64) -> f64 {
        let kp2 = k_perp * k_perp;
        let vertical = (-0.25 * self.l_z * self.l_z * k_z * k_z).exp();
        let electron = self.sigma_e * (-0.25 * self.l_e * self.l_e * kp2).exp();
        let hole = self.sigma_h * (-0.25 * self.l_h * self.l_h * kp2).exp();
        vertical * (electron - hole)
    }
}

/// Thermal state of the phonon reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    /// Bath temperature (K).
    pub temperature: f64,
    /// Boltzmann constant (meV/K).
    pub boltzmann_k: f64,
    /// Reduced Planck constant (meV·ps).
    pub hbar: f64,
}

impl BathSpec {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature must be finite and >= 0 K, got {temperature}"
            )));
        }
        Ok(Self {
            temperature,
            boltzmann_k: BOLTZMANN_K,
            hbar: HBAR,
        })
    }

    /// Bose occupation `1/(e^{ħω/k_BT} − 1)` of a mode with angular frequency `omega` (1/ps).
    pub fn occupation(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            return 0.0;
        }
        1.0 / (self.hbar * omega / (self.boltzmann_k * self.temperature)).exp_m1()
    }
}

/// Volume-normalized squared coupling `V·|g_k|² = V·|f_k|²/(ħω_k)²` (nm³) with `ω_k = c·k`.
///
/// Equals `F² / (2ϱħc³k)`; the wave vector `k = 0` is assigned 0.
pub fn coupling_density(k_perp: f64, k_z: f64, params: &MaterialParams) -> f64 {
    let k = k_perp.hypot(k_z);
    if k == 0.0 {
        return 0.0;
    }
    let f = params.form_factor(k_perp, k_z);
    let c = params.sound_speed;
    f * f / (2.0 * params.mass_density * HBAR * c * c * c * k)
}

/// `2n(ω) + 1 = coth(ħω / 2k_BT)`, exactly 1 at zero temperature.
pub fn thermal_factor(omega: f64, bath: &BathSpec) -> Result<f64> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain(format!(
            "thermal factor needs a positive frequency, got {omega}"
        )));
    }
    if bath.temperature == 0.0 {
        return Ok(1.0);
    }
    let x = bath.hbar * omega / (2.0 * bath.boltzmann_k * bath.temperature);
    Ok(1.0 / x.tanh())
}
