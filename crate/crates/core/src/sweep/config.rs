use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::PropagationSettings;
use crate::error::{Error, Result};
use crate::spectral::{MaterialParams, Separation, SpectralGrid, KG_PER_M3};

/// Experiment families a sweep can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Fig1Grid,
    CoherenceTraces,
    SteadyStateVsAlpha2,
    SingleState,
    KernelExport,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1Grid => "fig1_grid",
            Experiment::CoherenceTraces => "coherence_traces",
            Experiment::SteadyStateVsAlpha2 => "steady_state_vs_alpha2",
            Experiment::SingleState => "single_state",
            Experiment::KernelExport => "kernel_export",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeSpacing {
    /// `t = 0` followed by `n_times` log-spaced points over `[t_min_ps, t_max_ps]`.
    #[default]
    Log,
    /// `n_times` evenly spaced points over `[0, t_max_ps]`.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SteadyMode {
    /// Analytic `t → ∞` kernel with oscillating terms averaged out.
    #[default]
    LongTime,
    /// Kernel evaluated at the finite time `steady_t_ps`.
    FiniteTime,
}

/// Material section of a config file. Identical to [`MaterialParams`] except
/// that the density is given in kg/m³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    pub sigma_e: f64,
    pub sigma_h: f64,
    pub sound_speed: f64,
    pub mass_density_kg_m3: f64,
    pub l_e: f64,
    pub l_h: f64,
    pub l_z: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self::from(MaterialParams::gaas())
    }
}

impl From<MaterialParams> for MaterialConfig {
    fn from(p: MaterialParams) -> Self {
        Self {
            sigma_e: p.sigma_e,
            sigma_h: p.sigma_h,
            sound_speed: p.sound_speed,
            mass_density_kg_m3: p.mass_density / KG_PER_M3,
            l_e: p.l_e,
            l_h: p.l_h,
            l_z: p.l_z,
        }
    }
}

impl MaterialConfig {
    pub fn params(&self) -> MaterialParams {
        MaterialParams {
            sigma_e: self.sigma_e,
            sigma_h: self.sigma_h,
            sound_speed: self.sound_speed,
            mass_density: self.mass_density_kg_m3 * KG_PER_M3,
            l_e: self.l_e,
            l_h: self.l_h,
            l_z: self.l_z,
        }
    }
}

/// Parameters of one sweep run. Every field has a default, so `{}` is a
/// valid config; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub material: MaterialConfig,
    pub grid: SpectralGrid,
    pub distance_nm: f64,
    pub experiment: Option<Experiment>,
    pub t_max_ps: f64,
    pub t_min_ps: f64,
    pub n_times: usize,
    pub time_spacing: TimeSpacing,
    #[serde(alias = "temperatures_K")]
    pub temperatures_k: Vec<f64>,
    pub alpha2_values: Vec<f64>,
    pub output_dir: PathBuf,
    pub steady_mode: SteadyMode,
    pub steady_t_ps: f64,
    pub propagation: PropagationSettings,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            material: MaterialConfig::default(),
            grid: SpectralGrid::default(),
            distance_nm: 6.0,
            experiment: None,
            t_max_ps: 10.0,
            t_min_ps: 0.01,
            n_times: 200,
            time_spacing: TimeSpacing::Log,
            temperatures_k: vec![0.0, 10.0, 25.0, 50.0, 100.0, 150.0, 200.0, 300.0],
            alpha2_values: (0..=20).map(|i| i as f64 / 20.0).collect(),
            output_dir: PathBuf::from("out"),
            steady_mode: SteadyMode::LongTime,
            steady_t_ps: 20.0,
            propagation: PropagationSettings::default(),
        }
    }
}

impl SweepConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn material_params(&self) -> MaterialParams {
        self.material.params()
    }

    pub fn separation(&self) -> Separation {
        Separation::Finite(self.distance_nm)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        self.material_params()
            .validate()
            .map_err(|e| Error::Config(format!("material: {e}")))?;
        self.grid
            .validate()
            .map_err(|e| Error::Config(format!("grid: {e}")))?;
        if !(self.distance_nm.is_finite() && self.distance_nm >= 0.0) {
            return fail(format!(
                "distance_nm must be finite and >= 0, got {}",
                self.distance_nm
            ));
        }
        if !(self.t_max_ps.is_finite() && self.t_max_ps > 0.0) {
            return fail(format!(
                "t_max_ps must be finite and > 0, got {}",
                self.t_max_ps
            ));
        }
        if self.n_times < 2 {
            return fail(format!("n_times must be >= 2, got {}", self.n_times));
        }
        if self.time_spacing == TimeSpacing::Log
            && !(self.t_min_ps.is_finite() && self.t_min_ps > 0.0 && self.t_min_ps < self.t_max_ps)
        {
            return fail(format!(
                "t_min_ps must lie in (0, t_max_ps) for log spacing, got {}",
                self.t_min_ps
            ));
        }
        if self.temperatures_k.is_empty() {
            return fail("temperatures_k must not be empty".into());
        }
        if let Some(t) = self
            .temperatures_k
            .iter()
            .find(|t| !(t.is_finite() && **t >= 0.0))
        {
            return fail(format!("temperatures must be finite and >= 0, got {t}"));
        }
        if self.alpha2_values.is_empty() {
            return fail("alpha2_values must not be empty".into());
        }
        if let Some(a) = self
            .alpha2_values
            .iter()
            .find(|a| !(0.0..=1.0).contains(*a))
        {
            return fail(format!("alpha2 values must lie in [0, 1], got {a}"));
        }
        if !(self.steady_t_ps.is_finite() && self.steady_t_ps > 0.0) {
            return fail(format!(
                "steady_t_ps must be finite and > 0, got {}",
                self.steady_t_ps
            ));
        }
        Ok(())
    }

    /// Sample times (ps), ascending, starting at 0.
    pub fn time_grid(&self) -> Vec<f64> {
        let n = self.n_times;
        match self.time_spacing {
            TimeSpacing::Linear => (0..n)
                .map(|i| self.t_max_ps * (i as f64 / (n - 1) as f64))
                .collect(),
            TimeSpacing::Log => {
                let ratio = (self.t_max_ps / self.t_min_ps).ln();
                let mut times = Vec::with_capacity(n + 1);
                times.push(0.0);
                times.extend((0..n).map(|i| {
                    if i == n - 1 {
                        self.t_max_ps
                    } else {
                        self.t_min_ps * (ratio * i as f64 / (n - 1) as f64).exp()
                    }
                }));
                times
            }
        }
    }

    /// Checks that the config's `experiment` field, if set, agrees with the request.
    pub fn check_experiment(&self, requested: Experiment) -> Result<()> {
        match self.experiment {
            Some(e) if e != requested => Err(Error::Config(format!(
                "config declares experiment {} but {} was requested",
                e.name(),
                requested.name()
            ))),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let c = SweepConfig::from_json_str("{}").unwrap();
        assert_eq!(c, SweepConfig::default());
        assert_eq!(c.material_params(), MaterialParams::gaas());
        assert_eq!(c.alpha2_values.len(), 21);
        assert_eq!(c.alpha2_values[20], 1.0);
    }

    #[test]
    fn density_converted_from_si() {
        let c =
            SweepConfig::from_json_str(r#"{"material": {"mass_density_kg_m3": 5320}}"#).unwrap();
        assert!((c.material_params().density_kg_m3() - 5320.0).abs() < 1e-9);
        assert_eq!(c.material.sigma_e, 8000.0);
    }

    #[test]
    fn temperature_alias_and_unknown_keys() {
        let c = SweepConfig::from_json_str(r#"{"temperatures_K": [4, 77]}"#).unwrap();
        assert_eq!(c.temperatures_k, vec![4.0, 77.0]);
        assert!(matches!(
            SweepConfig::from_json_str(r#"{"temp": 4}"#),
            Err(Error::Config(_))
        ));
        assert!(SweepConfig::from_json_str(r#"{"material": {"mass_density": 1}}"#).is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        for bad in [
            r#"{"t_max_ps": 0}"#,
            r#"{"n_times": 1}"#,
            r#"{"temperatures_k": []}"#,
            r#"{"temperatures_k": [-1]}"#,
            r#"{"alpha2_values": [1.5]}"#,
            r#"{"distance_nm": -2}"#,
            r#"{"t_min_ps": 20}"#,
            r#"{"grid": {"k_max": 6, "n_k": 100, "n_theta": 128}}"#,
        ] {
            assert!(
                matches!(SweepConfig::from_json_str(bad), Err(Error::Config(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn log_grid_shape() {
        let c = SweepConfig::default();
        let t = c.time_grid();
        assert_eq!(t.len(), 201);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1], 0.01);
        assert_eq!(t[200], 10.0);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn linear_grid_shape() {
        let c = SweepConfig {
            time_spacing: TimeSpacing::Linear,
            n_times: 11,
            t_max_ps: 5.0,
            ..SweepConfig::default()
        };
        assert_eq!(
            c.time_grid(),
            vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0]
        );
    }

    #[test]
    fn experiment_mismatch() {
        let c = SweepConfig::from_json_str(r#"{"experiment": "fig1_grid"}"#).unwrap();
        c.check_experiment(Experiment::Fig1Grid).unwrap();
        assert!(c.check_experiment(Experiment::SteadyStateVsAlpha2).is_err());
        SweepConfig::default()
            .check_experiment(Experiment::SingleState)
            .unwrap();
    }
}
