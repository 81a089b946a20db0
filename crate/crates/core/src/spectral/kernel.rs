use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::{composite_gauss_legendre, CompensatedSum, PANEL_ORDER};
use super::{coupling_density, thermal_factor, BathSpec, MaterialParams};
use crate::error::{Error, Result};
use crate::numfmt::format_sig;

/// How the azimuthal average of `cos²(k⊥ d cos φ / 2)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AzimuthalMode {
    /// Closed form `∫ cos²(k⊥ d cos φ/2) dφ = π(1 + J₀(k⊥ d))`.
    #[default]
    BesselReduction,
    /// Periodic trapezoid rule with `n_phi` points, kept for cross-validation.
    Trapezoid { n_phi: usize },
}

/// Quadrature grid in spherical wave-vector coordinates.
///
/// The radial integral runs over `k ∈ (0, k_max)` and the polar angle over the
/// upper half-space `θ ∈ (0, π/2)` (the integrand is even in `k_z`). Both use
/// composite 8-point Gauss–Legendre panels, so point counts must be multiples of 8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralGrid {
    /// Radial momentum cutoff (1/nm).
    pub k_max: f64,
    pub n_k: usize,
    pub n_theta: usize,
    #[serde(default)]
    pub azimuthal_mode: AzimuthalMode,
}

impl Default for SpectralGrid {
    fn default() -> Self {
        Self {
            k_max: 6.0,
            n_k: 1024,
            n_theta: 128,
            azimuthal_mode: AzimuthalMode::BesselReduction,
        }
    }
}

impl SpectralGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_max.is_finite() && self.k_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "k_max must be finite and > 0, got {}",
                self.k_max
            )));
        }
        for (name, n) in [("n_k", self.n_k), ("n_theta", self.n_theta)] {
            if n < 16 || n % PANEL_ORDER != 0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be >= 16 and a multiple of {PANEL_ORDER}, got {n}"
                )));
            }
        }
        if let AzimuthalMode::Trapezoid { n_phi } = self.azimuthal_mode {
            if n_phi < 16 {
                return Err(Error::InvalidParameter(format!(
                    "trapezoid n_phi must be >= 16, got {n_phi}"
                )));
            }
        }
        Ok(())
    }

    /// Same grid with both point counts doubled.
    pub fn refined(&self) -> Self {
        Self {
            n_k: 2 * self.n_k,
            n_theta: 2 * self.n_theta,
            ..*self
        }
    }

    /// Mean radial node spacing (1/nm).
    pub fn k_spacing(&self) -> f64 {
        self.k_max / self.n_k as f64
    }
}

/// Interdot geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    /// Dots displaced in-plane by this distance (nm).
    Finite(f64),
    /// Large-distance limit with `cos²(k_x d/2)` and `sin²(k_x d/2)` replaced by 1/2.
    SeparateBaths,
}

impl Separation {
    fn validate(&self) -> Result<()> {
        match *self {
            Separation::Finite(d) if !(d.is_finite() && d >= 0.0) => Err(Error::InvalidParameter(
                format!("interdot distance must be finite and >= 0, got {d}"),
            )),
            _ => Ok(()),
        }
    }
}

/// Which weighted mode sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// `Σ|g|² (...)`, governs single-exciton coherences.
    Common,
    /// `4Σ|g|² cos²(k_x d/2) (...)`, governs ρ₀₃.
    Pair,
    /// `4Σ|g|² sin²(k_x d/2) (...)`, governs ρ₁₂; evaluated independently of the other two.
    Cross,
}

/// Radial spectral densities: each entry is the angular integral of the
/// coupling density at one radial node, already multiplied by the radial
/// quadrature weight and the `k²/(2π)³` measure.
#[derive(Debug, Clone)]
pub struct SpectralDensities {
    k: Vec<f64>,
    common: Vec<f64>,
    pair: Vec<f64>,
    cross: Vec<f64>,
    sound_speed: f64,
    grid: SpectralGrid,
    separation: Separation,
}

impl SpectralDensities {
    pub fn new(
        params: &MaterialParams,
        grid: &SpectralGrid,
        separation: Separation,
    ) -> Result<Self> {
        params.validate()?;
        grid.validate()?;
        separation.validate()?;

        let (k_nodes, k_weights) = composite_gauss_legendre(0.0, grid.k_max, grid.n_k);
        let (theta_nodes, theta_weights) = composite_gauss_legendre(0.0, FRAC_PI_2, grid.n_theta);
        let (sin_t, cos_t): (Vec<f64>, Vec<f64>) = theta_nodes.iter().map(|t| t.sin_cos()).unzip();
        // factor 2 for k_z < 0
        let measure = 2.0 / (2.0 * PI).powi(3);

        let rows: Vec<(f64, f64, f64)> = k_nodes
            .par_iter()
            .zip(k_weights.par_iter())
            .map(|(&k, &wk)| {
                let mut common = CompensatedSum::default();
                let mut pair = CompensatedSum::default();
                let mut cross = CompensatedSum::default();
                for j in 0..theta_nodes.len() {
                    let k_perp = k * sin_t[j];
                    let k_z = k * cos_t[j];
                    let w = coupling_density(k_perp, k_z, params) * sin_t[j] * theta_weights[j];
                    common.add(2.0 * PI * w);
                    match separation {
                        Separation::Finite(d) if d > 0.0 => {
                            let (cos_avg, sin_avg) =
                                azimuthal_integrals(k_perp * d, grid.azimuthal_mode);
                            pair.add(4.0 * cos_avg * w);
                            cross.add(4.0 * sin_avg * w);
                        }
                        _ => {}
                    }
                }
                let scale = measure * k * k * wk;
                let common = scale * common.value();
                // scaling by powers of two is exact in floating point
                match separation {
                    Separation::Finite(0.0) => (common, 4.0 * common, 0.0),
                    Separation::Finite(_) => (common, scale * pair.value(), scale * cross.value()),
                    Separation::SeparateBaths => (common, 2.0 * common, 2.0 * common),
                }
            })
            .collect();

        let mut common = Vec::with_capacity(rows.len());
        let mut pair = Vec::with_capacity(rows.len());
        let mut cross = Vec::with_capacity(rows.len());
        for (c, p, x) in rows {
            common.push(c);
            pair.push(p);
            cross.push(x);
        }
        Ok(Self {
            k: k_nodes,
            common,
            pair,
            cross,
            sound_speed: params.sound_speed,
            grid: *grid,
            separation,
        })
    }

    pub fn separation(&self) -> Separation {
        self.separation
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn k_nodes(&self) -> &[f64] {
        &self.k
    }

    pub fn channel(&self, channel: Channel) -> &[f64] {
        match channel {
            Channel::Common => &self.common,
            Channel::Pair => &self.pair,
            Channel::Cross => &self.cross,
        }
    }

    /// Refuses time windows whose phase advance per radial node exceeds π/4.
    pub fn check_resolution(&self, t_max: f64) -> Result<()> {
        let phase_step = self.grid.k_spacing() * self.sound_speed * t_max;
        if phase_step > FRAC_PI_4 {
            let needed = (self.grid.k_max * self.sound_speed * t_max / FRAC_PI_4).ceil() as usize;
            let required_n_k = needed.div_ceil(PANEL_ORDER) * PANEL_ORDER;
            return Err(Error::Resolution {
                t_max_ps: t_max,
                n_k: self.grid.n_k,
                phase_step,
                required_n_k,
            });
        }
        Ok(())
    }

    fn thermal_factors(&self, bath: &BathSpec) -> Result<Vec<f64>> {
        self.k
            .iter()
            .map(|&k| thermal_factor(self.sound_speed * k, bath))
            .collect()
    }

    /// `Σ w_k sin(ω_k t)` over the chosen channel.
    pub fn phase(&self, channel: Channel, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let c = self.sound_speed;
        let dens = self.channel(channel);
        self.k
            .iter()
            .zip(dens)
            .map(|(&k, &w)| w * (c * k * t).sin())
            .collect::<CompensatedSum>()
            .value()
    }

    /// `Σ w_k (cos ω_k t − 1)(2n_k + 1)` over the chosen channel.
    pub fn damping(&self, channel: Channel, t: f64, bath: &BathSpec) -> Result<f64> {
        let coth = self.thermal_factors(bath)?;
        Ok(self.damping_with(self.channel(channel), t, &coth))
    }

    /// Long-time limit `−Σ w_k (2n_k + 1)` of [`Self::damping`].
    pub fn asymptotic_damping(&self, channel: Channel, bath: &BathSpec) -> Result<f64> {
        let coth = self.thermal_factors(bath)?;
        Ok(-self
            .channel(channel)
            .iter()
            .zip(&coth)
            .map(|(w, n)| w * n)
            .collect::<CompensatedSum>()
            .value())
    }

    fn damping_with(&self, dens: &[f64], t: f64, coth: &[f64]) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let half = 0.5 * self.sound_speed * t;
        self.k
            .iter()
            .zip(dens)
            .zip(coth)
            .map(|((&k, &w), &n)| {
                let s = (half * k).sin();
                // cos x − 1 = −2 sin²(x/2), without cancellation at small x
                -2.0 * s * s * w * n
            })
            .collect::<CompensatedSum>()
            .value()
    }

    /// Tabulates the dephasing functions on `times` for one bath temperature.
    pub fn kernel(&self, times: &[f64], bath: &BathSpec) -> Result<DephasingKernel> {
        validate_times(times)?;
        let t_max = times.iter().copied().fold(0.0, f64::max);
        self.check_resolution(t_max)?;
        let coth = self.thermal_factors(bath)?;
        let points: Vec<KernelPoint> = times
            .par_iter()
            .map(|&t| KernelPoint {
                a01: self.phase(Channel::Common, t),
                a03: self.phase(Channel::Pair, t),
                b01: self.damping_with(&self.common, t, &coth),
                b03: self.damping_with(&self.pair, t, &coth),
            })
            .collect();
        Ok(DephasingKernel::from_points(
            times.to_vec(),
            &points,
            bath.temperature,
            self.separation,
        ))
    }

    /// Long-time kernel: a single point at `t = ∞` with the oscillating
    /// `cos ωt` and `sin ωt` terms averaged to zero.
    pub fn long_time_kernel(&self, bath: &BathSpec) -> Result<DephasingKernel> {
        let b01 = self.asymptotic_damping(Channel::Common, bath)?;
        let b03 = self.asymptotic_damping(Channel::Pair, bath)?;
        let point = KernelPoint {
            a01: 0.0,
            a03: 0.0,
            b01,
            b03,
        };
        Ok(DephasingKernel::from_points(
            vec![f64::INFINITY],
            &[point],
            bath.temperature,
            self.separation,
        ))
    }
}

/// `(∫₀^{2π} cos²(x cos φ/2) dφ, ∫₀^{2π} sin²(x cos φ/2) dφ)` for `x = k⊥ d`.
fn azimuthal_integrals(x: f64, mode: AzimuthalMode) -> (f64, f64) {
    match mode {
        AzimuthalMode::BesselReduction => {
            let j0 = libm::j0(x);
            (PI * (1.0 + j0), PI * (1.0 - j0))
        }
        AzimuthalMode::Trapezoid { n_phi } => {
            let step = 2.0 * PI / n_phi as f64;
            let mut cos_sum = CompensatedSum::default();
            let mut sin_sum = CompensatedSum::default();
            for j in 0..n_phi {
                let arg = 0.5 * x * (step * j as f64).cos();
                let (s, c) = arg.sin_cos();
                cos_sum.add(c * c);
                sin_sum.add(s * s);
            }
            (step * cos_sum.value(), step * sin_sum.value())
        }
    }
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty".into()));
    }
    for (i, &t) in times.iter().enumerate() {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "times must be finite and >= 0, got {t} at index {i}"
            )));
        }
        if i > 0 && t < times[i - 1] {
            return Err(Error::InvalidParameter(format!(
                "times must be non-decreasing, got {} before {t}",
                times[i - 1]
            )));
        }
    }
    Ok(())
}

/// The four independent dephasing functions at one instant.
///
/// All other coherence exponents follow from these:
/// `A₀₂ = A₀₁`, `A₁₂ = 0`, `A₁₃ = A₂₃ = A₀₃ − A₀₁`,
/// `B₀₂ = B₁₃ = B₂₃ = B₀₁`, `B₁₂ = 4B₀₁ − B₀₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub a01: f64,
    pub a03: f64,
    pub b01: f64,
    pub b03: f64,
}

impl KernelPoint {
    pub fn a13(&self) -> f64 {
        self.a03 - self.a01
    }

    pub fn b12(&self) -> f64 {
        4.0 * self.b01 - self.b03
    }

    /// `(A_ij, B_ij)` for an upper-triangle pair `i < j`.
    pub fn exponent(&self, i: usize, j: usize) -> (f64, f64) {
        match (i, j) {
            (0, 1) | (0, 2) => (self.a01, self.b01),
            (0, 3) => (self.a03, self.b03),
            (1, 2) => (0.0, self.b12()),
            (1, 3) | (2, 3) => (self.a13(), self.b01),
            _ => panic!("no coherence exponent for pair ({i}, {j})"),
        }
    }
}

/// Long-time damping values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticDamping {
    pub b01: f64,
    pub b03: f64,
    pub b12: f64,
}

/// Dephasing functions tabulated on a time grid for fixed temperature and geometry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DephasingKernel {
    time_grid: Vec<f64>,
    a01: Vec<f64>,
    a03: Vec<f64>,
    b01: Vec<f64>,
    b03: Vec<f64>,
    temperature: f64,
    separation: Separation,
}

impl DephasingKernel {
    fn from_points(
        time_grid: Vec<f64>,
        points: &[KernelPoint],
        temperature: f64,
        separation: Separation,
    ) -> Self {
        Self {
            time_grid,
            a01: points.iter().map(|p| p.a01).collect(),
            a03: points.iter().map(|p| p.a03).collect(),
            b01: points.iter().map(|p| p.b01).collect(),
            b03: points.iter().map(|p| p.b03).collect(),
            temperature,
            separation,
        }
    }

    /// Builds a kernel from explicit columns, e.g. synthetic kernels in tests.
    pub fn from_columns(
        time_grid: Vec<f64>,
        a01: Vec<f64>,
        a03: Vec<f64>,
        b01: Vec<f64>,
        b03: Vec<f64>,
        temperature: f64,
        separation: Separation,
    ) -> Result<Self> {
        let n = time_grid.len();
        if [a01.len(), a03.len(), b01.len(), b03.len()]
            .iter()
            .any(|&m| m != n)
        {
            return Err(Error::InvalidParameter(
                "kernel columns must match the time grid length".into(),
            ));
        }
        if b01.iter().chain(&b03).any(|&b| !(b <= 0.0)) {
            return Err(Error::InvalidParameter(
                "damping functions must be <= 0".into(),
            ));
        }
        Ok(Self {
            time_grid,
            a01,
            a03,
            b01,
            b03,
            temperature,
            separation,
        })
    }

    pub fn len(&self) -> usize {
        self.time_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time_grid.is_empty()
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn separation(&self) -> Separation {
        self.separation
    }

    pub fn a01(&self) -> &[f64] {
        &self.a01
    }

    pub fn a03(&self) -> &[f64] {
        &self.a03
    }

    pub fn b01(&self) -> &[f64] {
        &self.b01
    }

    pub fn b03(&self) -> &[f64] {
        &self.b03
    }

    pub fn b12(&self) -> Vec<f64> {
        self.b01
            .iter()
            .zip(&self.b03)
            .map(|(b01, b03)| 4.0 * b01 - b03)
            .collect()
    }

    pub fn a13(&self) -> Vec<f64> {
        self.a03
            .iter()
            .zip(&self.a01)
            .map(|(a03, a01)| a03 - a01)
            .collect()
    }

    pub fn point(&self, index: usize) -> Option<KernelPoint> {
        (index < self.len()).then(|| KernelPoint {
            a01: self.a01[index],
            a03: self.a03[index],
            b01: self.b01[index],
            b03: self.b03[index],
        })
    }

    /// CSV table `t_ps,a01,a03,b01,b03,b12`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_ps,a01,a03,b01,b03,b12\n");
        for i in 0..self.len() {
            let p = self.point(i).expect("index in range");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                format_sig(self.time_grid[i]),
                format_sig(p.a01),
                format_sig(p.a03),
                format_sig(p.b01),
                format_sig(p.b03),
                format_sig(p.b12()),
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Tabulates `A₀₁, A₀₃, B₀₁, B₀₃` on `times` (ps).
pub fn compute_kernel(
    times: &[f64],
    bath: &BathSpec,
    separation: Separation,
    params: &MaterialParams,
    grid: &SpectralGrid,
) -> Result<DephasingKernel> {
    validate_times(times)?;
    let densities = SpectralDensities::new(params, grid, separation)?;
    densities.kernel(times, bath)
}

/// Long-time damping `B_ij(∞)` with `cos ωt` averaged to zero.
pub fn asymptotic_b(
    bath: &BathSpec,
    separation: Separation,
    params: &MaterialParams,
    grid: &SpectralGrid,
) -> Result<AsymptoticDamping> {
    let densities = SpectralDensities::new(params, grid, separation)?;
    let b01 = densities.asymptotic_damping(Channel::Common, bath)?;
    let b03 = densities.asymptotic_damping(Channel::Pair, bath)?;
    Ok(AsymptoticDamping {
        b01,
        b03,
        b12: 4.0 * b01 - b03,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gaas() -> MaterialParams {
        MaterialParams::gaas()
    }

    fn bath(t: f64) -> BathSpec {
        BathSpec::new(t).unwrap()
    }

    #[test]
    fn zero_time_is_exactly_zero() {
        let k = compute_kernel(
            &[0.0, 0.5],
            &bath(100.0),
            Separation::Finite(6.0),
            &gaas(),
            &SpectralGrid::default(),
        )
        .unwrap();
        let p = k.point(0).unwrap();
        assert_eq!((p.a01, p.a03, p.b01, p.b03), (0.0, 0.0, 0.0, 0.0));
        assert!(k.b01()[1] < 0.0);
    }

    #[test]
    fn zero_distance_pair_is_four_times_common() {
        let k = compute_kernel(
            &[0.3, 1.0, 4.0],
            &bath(50.0),
            Separation::Finite(0.0),
            &gaas(),
            &SpectralGrid::default(),
        )
        .unwrap();
        for i in 0..k.len() {
            let p = k.point(i).unwrap();
            assert_eq!(p.a03, 4.0 * p.a01);
            assert_eq!(p.b03, 4.0 * p.b01);
            assert_eq!(p.b12(), 0.0);
        }
    }

    #[test]
    fn frozen_values_match_cylindrical_quadrature() {
        // scipy dblquad in (k⊥, k_z) coordinates, epsrel 1e-12
        let k = compute_kernel(
            &[1.0],
            &bath(100.0),
            Separation::Finite(6.0),
            &gaas(),
            &SpectralGrid::default(),
        )
        .unwrap();
        let p = k.point(0).unwrap();
        assert_relative_eq!(p.a01, 1.892410456392628e-02, max_relative = 1e-8);
        assert_relative_eq!(p.a03, 6.611211834696318e-02, max_relative = 1e-8);
        assert_relative_eq!(p.b01, -7.360407646101195e-01, max_relative = 1e-8);
        assert_relative_eq!(p.b03, -2.178109815024049e+00, max_relative = 1e-8);
    }

    #[test]
    fn zero_temperature_asymptote_matches_independent_integral() {
        // mpmath, both spherical and cylindrical orderings agree to 15 digits
        let b = asymptotic_b(
            &bath(0.0),
            Separation::Finite(6.0),
            &gaas(),
            &SpectralGrid::default(),
        )
        .unwrap();
        assert_relative_eq!(b.b01, -0.0602453106163233, max_relative = 1e-8);
        assert!(b.b01 < 0.0);
    }

    #[test]
    fn separate_baths_limit_is_exact() {
        let b = asymptotic_b(
            &bath(80.0),
            Separation::SeparateBaths,
            &gaas(),
            &SpectralGrid::default(),
        )
        .unwrap();
        assert_eq!(b.b03, 2.0 * b.b01);
        assert_eq!(b.b12, 2.0 * b.b01);
    }

    #[test]
    fn asymptote_linear_in_temperature_at_high_t() {
        let grid = SpectralGrid::default();
        let b1 = asymptotic_b(&bath(1e6), Separation::Finite(6.0), &gaas(), &grid).unwrap();
        let b10 = asymptotic_b(&bath(1e7), Separation::Finite(6.0), &gaas(), &grid).unwrap();
        assert_relative_eq!(b10.b01 / b1.b01, 10.0, max_relative = 1e-2);
    }

    #[test]
    fn resolution_guard_names_required_count() {
        let grid = SpectralGrid {
            n_k: 64,
            ..SpectralGrid::default()
        };
        let err = compute_kernel(
            &[0.0, 10.0],
            &bath(10.0),
            Separation::Finite(6.0),
            &gaas(),
            &grid,
        )
        .unwrap_err();
        match err {
            Error::Resolution { required_n_k, .. } => {
                assert_eq!(required_n_k % 8, 0);
                let ok = SpectralGrid {
                    n_k: required_n_k,
                    ..grid
                };
                compute_kernel(&[10.0], &bath(10.0), Separation::Finite(6.0), &gaas(), &ok)
                    .unwrap();
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let grid = SpectralGrid::default();
        assert!(compute_kernel(
            &[1.0, 0.5],
            &bath(1.0),
            Separation::Finite(6.0),
            &gaas(),
            &grid
        )
        .is_err());
        assert!(
            compute_kernel(&[-1.0], &bath(1.0), Separation::Finite(6.0), &gaas(), &grid).is_err()
        );
        assert!(
            compute_kernel(&[1.0], &bath(1.0), Separation::Finite(-2.0), &gaas(), &grid).is_err()
        );
        let odd = SpectralGrid { n_k: 100, ..grid };
        assert!(odd.validate().is_err());
    }

    #[test]
    fn trapezoid_azimuth_agrees_with_bessel() {
        let base = SpectralGrid {
            n_k: 256,
            n_theta: 64,
            ..SpectralGrid::default()
        };
        let trap = SpectralGrid {
            azimuthal_mode: AzimuthalMode::Trapezoid { n_phi: 96 },
            ..base
        };
        let times = [0.4, 2.0];
        let a = compute_kernel(
            &times,
            &bath(150.0),
            Separation::Finite(6.0),
            &gaas(),
            &base,
        )
        .unwrap();
        let b = compute_kernel(
            &times,
            &bath(150.0),
            Separation::Finite(6.0),
            &gaas(),
            &trap,
        )
        .unwrap();
        for i in 0..times.len() {
            assert_relative_eq!(a.a03()[i], b.a03()[i], max_relative = 1e-10);
            assert_relative_eq!(a.b03()[i], b.b03()[i], max_relative = 1e-10);
        }
    }

    #[test]
    fn azimuthal_integrals_sum_to_two_pi() {
        for x in [0.0, 0.7, 13.0, 250.0] {
            let (c, s) = azimuthal_integrals(x, AzimuthalMode::BesselReduction);
            assert_relative_eq!(c + s, 2.0 * PI, max_relative = 1e-15);
        }
        let (c, _) = azimuthal_integrals(0.0, AzimuthalMode::Trapezoid { n_phi: 16 });
        assert_relative_eq!(c, 2.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let k = compute_kernel(
            &[0.0, 1.0],
            &bath(10.0),
            Separation::Finite(6.0),
            &gaas(),
            &SpectralGrid::default(),
        )
        .unwrap();
        let csv = k.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t_ps,a01,a03,b01,b03,b12");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,0,0,0,0,"));
    }
}
