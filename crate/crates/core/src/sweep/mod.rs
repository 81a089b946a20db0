//! Batch sweeps over time, temperature and initial occupation, written as CSV
//! tables with a JSON manifest.

mod config;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{rescaled_discord_bounds, DiscordReport};
use crate::dynamics::{normalized_coherences, propagate, PropagationSettings};
use crate::error::{Error, Result};
use crate::numfmt::format_sig;
use crate::spectral::{BathSpec, DephasingKernel, SpectralDensities, SpectralGrid};
use crate::state::{initial_x_from_alpha, pure_product_from_alpha2, x_state, TwoQubitState};

pub use config::{Experiment, MaterialConfig, SteadyMode, SweepConfig, TimeSpacing};

/// A numeric table with a single header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Comma-separated, 12 significant digits, `\n` line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// One file produced by a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConvergence {
    pub refined_grid: SpectralGrid,
    /// Largest change of any dephasing function under refinement, relative to
    /// that function's largest magnitude on the sampled times.
    pub max_relative_change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub experiment: Experiment,
    pub config: SweepConfig,
    pub grid_convergence: GridConvergence,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputFile>,
}

/// Per-time correlation summary of an evolved state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReportRow {
    pub t_ps: f64,
    pub temperature_k: f64,
    pub report: DiscordReport,
}

fn temperature_tag(t: f64) -> String {
    format_sig(t)
}

fn equal_superposition() -> TwoQubitState {
    pure_product_from_alpha2(0.5).expect("valid occupation")
}

fn quarter_x_state() -> TwoQubitState {
    let q = Complex64::new(0.25, 0.0);
    x_state(0.25, 0.25, 0.25, q, q).expect("valid X-state")
}

fn densities(config: &SweepConfig, grid: &SpectralGrid) -> Result<SpectralDensities> {
    SpectralDensities::new(&config.material_params(), grid, config.separation())
}

/// Time-resolved kernels for every configured temperature, in config order.
fn kernels(
    config: &SweepConfig,
    times: &[f64],
    grid: &SpectralGrid,
) -> Result<Vec<DephasingKernel>> {
    let dens = densities(config, grid)?;
    dens.check_resolution(times.iter().copied().fold(0.0, f64::max))?;
    config
        .temperatures_k
        .par_iter()
        .map(|&t| dens.kernel(times, &BathSpec::new(t)?))
        .collect()
}

fn steady_kernels(config: &SweepConfig, grid: &SpectralGrid) -> Result<Vec<DephasingKernel>> {
    let dens = densities(config, grid)?;
    config
        .temperatures_k
        .par_iter()
        .map(|&t| {
            let bath = BathSpec::new(t)?;
            match config.steady_mode {
                SteadyMode::LongTime => dens.long_time_kernel(&bath),
                SteadyMode::FiniteTime => dens.kernel(&[config.steady_t_ps], &bath),
            }
        })
        .collect()
}

fn evolve(
    rho0: &TwoQubitState,
    kernel: &DephasingKernel,
    index: usize,
    config: &SweepConfig,
) -> Result<TwoQubitState> {
    let settings = if kernel.time_grid()[index].is_finite() {
        config.propagation
    } else {
        PropagationSettings::default()
    };
    propagate(rho0, kernel, index, &settings)
}

/// `t_ps,T_K,discord_lower,discord_upper` for the equal-superposition product
/// state; temperature outer, time inner.
pub fn fig1_table(config: &SweepConfig) -> Result<Table> {
    let times = config.time_grid();
    let kernels = kernels(config, &times, &config.grid)?;
    let rho0 = equal_superposition();
    let mut table = Table::new(&["t_ps", "T_K", "discord_lower", "discord_upper"]);
    for (kernel, &temp) in kernels.iter().zip(&config.temperatures_k) {
        let rows: Vec<Vec<f64>> = (0..times.len())
            .into_par_iter()
            .map(|i| {
                let (lo, hi) = rescaled_discord_bounds(&evolve(&rho0, kernel, i, config)?);
                Ok(vec![times[i], temp, lo, hi])
            })
            .collect::<Result<_>>()?;
        table.rows.extend(rows);
    }
    Ok(table)
}

/// One `traces_T<K>` table per temperature:
/// `t_ps,n01,n03,n12,discord_pure_lo,discord_pure_hi,discord_x`.
pub fn coherence_trace_tables(config: &SweepConfig) -> Result<Vec<(f64, Table)>> {
    let times = config.time_grid();
    let kernels = kernels(config, &times, &config.grid)?;
    let pure = equal_superposition();
    let xs = quarter_x_state();
    let header = [
        "t_ps",
        "n01",
        "n03",
        "n12",
        "discord_pure_lo",
        "discord_pure_hi",
        "discord_x",
    ];
    kernels
        .iter()
        .zip(&config.temperatures_k)
        .map(|(kernel, &temp)| {
            let rows: Vec<Vec<f64>> = (0..times.len())
                .into_par_iter()
                .map(|i| {
                    let n = normalized_coherences(&pure, kernel, i)?;
                    let (plo, phi) = rescaled_discord_bounds(&evolve(&pure, kernel, i, config)?);
                    let (xlo, _) = rescaled_discord_bounds(&evolve(&xs, kernel, i, config)?);
                    Ok(vec![
                        times[i],
                        n[&(0, 1)],
                        n[&(0, 3)],
                        n[&(1, 2)],
                        plo,
                        phi,
                        xlo,
                    ])
                })
                .collect::<Result<_>>()?;
            let mut table = Table::new(&header);
            table.rows = rows;
            Ok((temp, table))
        })
        .collect()
}

/// `alpha2,T_K,pure_lo,pure_hi,x_lo,x_hi` from the steady-state kernel;
/// temperature outer, occupation inner.
pub fn steady_state_table(config: &SweepConfig) -> Result<Table> {
    let kernels = steady_kernels(config, &config.grid)?;
    let mut table = Table::new(&["alpha2", "T_K", "pure_lo", "pure_hi", "x_lo", "x_hi"]);
    for (kernel, &temp) in kernels.iter().zip(&config.temperatures_k) {
        let rows: Vec<Vec<f64>> = config
            .alpha2_values
            .par_iter()
            .map(|&a2| {
                let pure = evolve(&pure_product_from_alpha2(a2)?, kernel, 0, config)?;
                let x = evolve(&initial_x_from_alpha(a2)?, kernel, 0, config)?;
                let (plo, phi) = rescaled_discord_bounds(&pure);
                let (xlo, xhi) = rescaled_discord_bounds(&x);
                Ok(vec![a2, temp, plo, phi, xlo, xhi])
            })
            .collect::<Result<_>>()?;
        table.rows.extend(rows);
    }
    Ok(table)
}

/// Discord report of `rho0` at every configured time and temperature.
pub fn single_state_reports(
    config: &SweepConfig,
    rho0: &TwoQubitState,
) -> Result<Vec<StateReportRow>> {
    let times = config.time_grid();
    let kernels = kernels(config, &times, &config.grid)?;
    let mut out = Vec::with_capacity(times.len() * kernels.len());
    for (kernel, &temp) in kernels.iter().zip(&config.temperatures_k) {
        for (i, &t) in times.iter().enumerate() {
            out.push(StateReportRow {
                t_ps: t,
                temperature_k: temp,
                report: DiscordReport::of(&evolve(rho0, kernel, i, config)?),
            });
        }
    }
    Ok(out)
}

fn max_relative_change(coarse: &[DephasingKernel], fine: &[DephasingKernel]) -> f64 {
    let mut worst: f64 = 0.0;
    for (c, f) in coarse.iter().zip(fine) {
        for (a, b) in [
            (c.a01(), f.a01()),
            (c.a03(), f.a03()),
            (c.b01(), f.b01()),
            (c.b03(), f.b03()),
        ] {
            let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                continue;
            }
            let diff = a
                .iter()
                .zip(b)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
            worst = worst.max(diff / scale);
        }
    }
    worst
}

/// Compares the kernels used by a run against the same kernels on
/// [`SpectralGrid::refined`].
pub fn grid_convergence(config: &SweepConfig, experiment: Experiment) -> Result<GridConvergence> {
    let refined_grid = config.grid.refined();
    let max_relative_change = if experiment == Experiment::SteadyStateVsAlpha2 {
        max_relative_change(
            &steady_kernels(config, &config.grid)?,
            &steady_kernels(config, &refined_grid)?,
        )
    } else {
        let times = config.time_grid();
        max_relative_change(
            &kernels(config, &times, &config.grid)?,
            &kernels(config, &times, &refined_grid)?,
        )
    };
    Ok(GridConvergence {
        refined_grid,
        max_relative_change,
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(path, e))
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(contents.as_bytes())
        .and_then(|_| f.sync_all())
        .map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Runs `experiment` and writes its outputs plus `manifest.json` into
/// `config.output_dir`. `state_path` is required for [`Experiment::SingleState`].
pub fn run(
    config: &SweepConfig,
    experiment: Experiment,
    state_path: Option<&Path>,
) -> Result<RunManifest> {
    let start = Instant::now();
    config.validate()?;
    config.check_experiment(experiment)?;
    let rho0 = match (experiment, state_path) {
        (Experiment::SingleState, Some(p)) => Some(TwoQubitState::load(p)?),
        (Experiment::SingleState, None) => {
            return Err(Error::Config("single_state needs a state file".into()))
        }
        _ => None,
    };

    let mut files: Vec<(String, String, usize)> = Vec::new();
    match experiment {
        Experiment::Fig1Grid => {
            let t = fig1_table(config)?;
            files.push(("fig1.csv".into(), t.to_csv(), t.rows.len()));
        }
        Experiment::CoherenceTraces => {
            for (temp, t) in coherence_trace_tables(config)? {
                files.push((
                    format!("traces_T{}.csv", temperature_tag(temp)),
                    t.to_csv(),
                    t.rows.len(),
                ));
            }
        }
        Experiment::SteadyStateVsAlpha2 => {
            let t = steady_state_table(config)?;
            files.push(("steady.csv".into(), t.to_csv(), t.rows.len()));
        }
        Experiment::SingleState => {
            let rows = single_state_reports(config, rho0.as_ref().expect("state loaded"))?;
            let json = serde_json::to_string_pretty(&rows)?;
            files.push(("state_reports.json".into(), json, rows.len()));
        }
        Experiment::KernelExport => {
            let times = config.time_grid();
            for k in kernels(config, &times, &config.grid)? {
                files.push((
                    format!("kernel_T{}.csv", temperature_tag(k.temperature())),
                    k.to_csv(),
                    k.len(),
                ));
            }
        }
    }
    let grid_convergence = grid_convergence(config, experiment)?;

    let dir: &PathBuf = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, contents, _) in &files {
        write_file(dir, name, contents)?;
    }
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        experiment,
        config: config.clone(),
        grid_convergence,
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs: files
            .into_iter()
            .map(|(file, _, rows)| OutputFile { file, rows })
            .collect(),
    };
    write_atomic(
        &dir.join("manifest.json"),
        &serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SweepConfig {
        SweepConfig {
            grid: SpectralGrid {
                n_k: 256,
                n_theta: 32,
                ..SpectralGrid::default()
            },
            n_times: 12,
            t_max_ps: 4.0,
            temperatures_k: vec![0.0, 100.0],
            alpha2_values: vec![0.0, 0.3, 0.5, 1.0],
            ..SweepConfig::default()
        }
    }

    #[test]
    fn fig1_starts_at_zero_and_orders_bounds() {
        let t = fig1_table(&small_config()).unwrap();
        assert_eq!(t.rows.len(), 2 * 13);
        assert_eq!(t.rows[0], vec![0.0, 0.0, 0.0, 0.0]);
        assert_eq!(t.rows[13][..2], [0.0, 100.0]);
        for r in &t.rows {
            assert!(r[2] <= r[3] + 1e-15);
        }
    }

    #[test]
    fn traces_start_at_one() {
        let tables = coherence_trace_tables(&small_config()).unwrap();
        assert_eq!(tables.len(), 2);
        let (_, t) = &tables[1];
        assert_eq!(t.rows[0][1..4], [1.0, 1.0, 1.0]);
        assert_eq!(t.column("n12").unwrap().len(), 13);
    }

    #[test]
    fn steady_edges_vanish() {
        let t = steady_state_table(&small_config()).unwrap();
        assert_eq!(t.rows.len(), 8);
        for r in t.rows.iter().filter(|r| r[0] == 0.0 || r[0] == 1.0) {
            assert!(r[2..].iter().all(|v| v.abs() < 1e-12), "{r:?}");
        }
    }

    #[test]
    fn csv_format() {
        let mut t = Table::new(&["a", "b"]);
        t.rows.push(vec![0.1, 1.0 / 3.0]);
        assert_eq!(t.to_csv(), "a,b\n0.1,0.333333333333\n");
    }

    #[test]
    fn run_writes_outputs_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let config = SweepConfig {
            output_dir: dir.path().to_path_buf(),
            ..small_config()
        };
        let m = run(&config, Experiment::CoherenceTraces, None).unwrap();
        let names: Vec<_> = m.outputs.iter().map(|o| o.file.as_str()).collect();
        assert_eq!(names, ["traces_T0.csv", "traces_T100.csv"]);
        for o in &m.outputs {
            let text = fs::read_to_string(dir.path().join(&o.file)).unwrap();
            assert_eq!(text.lines().count(), o.rows + 1);
        }
        let back: RunManifest =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
                .unwrap();
        assert_eq!(back.outputs, m.outputs);
        assert!(m.grid_convergence.max_relative_change < 1e-3);
        assert!(!dir.path().join("manifest.json.tmp").exists());
    }

    #[test]
    fn single_state_requires_file() {
        assert!(matches!(
            run(&small_config(), Experiment::SingleState, None),
            Err(Error::Config(_))
        ));
    }
}
