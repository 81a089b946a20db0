//! Phonon-induced dephasing of two excitonic quantum-dot qubits sharing a
//! GaAs acoustic-phonon bath, and the geometric quantum discord it leaves.
//!
//! The pipeline is: material parameters → spectral densities and dephasing
//! kernel ([`spectral`]) → exact pure-dephasing evolution ([`dynamics`]) →
//! correlation measures ([`correlations`]), with a brute-force measurement
//! oracle ([`oracle`]) and batch sweeps writing CSV datasets ([`sweep`]).

pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod numfmt;
pub mod oracle;
pub mod spectral;
pub mod state;
pub mod sweep;

pub use correlations::{
    bloch_decompose, concurrence, geometric_discord_bounds, geometric_discord_lower,
    geometric_discord_upper, initial_x_discord, purity, rescaled_discord,
    x_state_geometric_discord, BlochDecomposition, DiscordReport,
};
pub use dynamics::{normalized_coherences, propagate, propagate_at, PropagationSettings};
pub use error::{Error, Result};
pub use oracle::{oracle_one_sided, sandwich_check, MeasurementGrid, SandwichReport, Side};
pub use spectral::{
    asymptotic_b, compute_kernel, coupling_density, thermal_factor, BathSpec, DephasingKernel,
    MaterialParams, Separation, SpectralGrid,
};
pub use state::{
    initial_x_from_alpha, pure_product_from_alpha2, pure_product_state, x_state, TwoQubitState,
};
pub use sweep::{run, Experiment, RunManifest, SweepConfig};
