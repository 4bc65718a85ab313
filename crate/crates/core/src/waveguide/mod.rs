//! Scalar-mode waveguide analysis: materials, layered profiles, the
//! LP01 solver and its dispersion post-processing.

mod dispersion;
mod material;
mod profile;
mod solver;

use thiserror::Error;

pub use dispersion::{
    dispersion_params, dispersion_params_with, group_delay_per_km, group_delay_per_km_with,
    mode_analysis, mode_analysis_with, DispersionParams, ModeAnalysis, StencilConfig,
    PS_PER_KM_PER_GROUP_INDEX,
};
pub use material::{MaterialModel, MAX_ABS_DELTA, WAVELENGTH_RANGE_M};
pub use profile::{Layer, RadialProfile, HOST_CLADDING_RADIUS_M};
pub use solver::{
    solve_lp01, solve_lp01_with, FieldLayer, ModeSolution, RadialKind, SolverOptions,
};

/// Errors from material evaluation, profile validation and mode solving.
#[derive(Debug, Error)]
pub enum WaveguideError {
    #[error(
        "wavelength {wavelength_nm:.1} nm outside the supported range \
         [{min_nm:.0}, {max_nm:.0}] nm"
    )]
    WavelengthOutOfRange {
        wavelength_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("no guided LP01 mode at {wavelength_nm:.1} nm: {detail}")]
    NoGuidedMode { wavelength_nm: f64, detail: String },

    #[error("mode solver failed to converge: {detail}")]
    ConvergenceFailure { detail: String },

    #[error(
        "finite-difference stencil (±{reach_nm:.2} nm around {wavelength_nm:.1} nm) \
         leaves the supported wavelength range [{min_nm:.0}, {max_nm:.0}] nm"
    )]
    StencilOutOfRange {
        wavelength_nm: f64,
        reach_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },
}
