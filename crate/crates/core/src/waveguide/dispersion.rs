//! Group delay, chromatic dispersion and dispersion slope from the mode
//! solver, by centered finite differences on `n_eff(λ)`.
//!
//! The chain is the textbook one:
//!
//! ```text
//! n_g(λ) = n_eff − λ·dn_eff/dλ          (group index)
//! τ_g    = n_g / c                      (group delay per unit length)
//! D      = dτ_g/dλ                      (dispersion, ps/(km·nm))
//! S      = d²τ_g/dλ²                    (slope, ps/(km·nm²))
//! ```
//!
//! All wavelength derivatives are evaluated on a τ_g(λ) series that is
//! itself assembled from first derivatives of `n_eff`, so a single
//! seven-point `n_eff` grid (λ0 ± 3h) feeds every output: 3-point first
//! differences for `n_g`, a 3-point stencil for `D` and a 5-point
//! stencil for `S`. The mode solver converges `n_eff` to ~1e-15, which
//! keeps the differentiation noise at the 1e-3 level for `D` and usable
//! for `S` at the default step of 0.1 nm.

use serde::{Deserialize, Serialize};

use super::material::{MaterialModel, WAVELENGTH_RANGE_M};
use super::profile::RadialProfile;
use super::solver::{solve_lp01_with, SolverOptions};
use super::WaveguideError;
use crate::SPEED_OF_LIGHT;

/// τ_g [ps/km] = n_g × this.
pub const PS_PER_KM_PER_GROUP_INDEX: f64 = 1e15 / SPEED_OF_LIGHT;

/// Finite-difference configuration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StencilConfig {
    /// Wavelength step `h` of the grid, meters. Default 0.1 nm trades
    /// truncation against solver round-off noise.
    pub step: f64,
}

impl Default for StencilConfig {
    fn default() -> Self {
        Self { step: 0.1e-9 }
    }
}

/// Dispersion outputs at the evaluation wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams {
    /// D, ps/(km·nm).
    pub dispersion_ps_km_nm: f64,
    /// S = dD/dλ, ps/(km·nm²).
    pub slope_ps_km_nm2: f64,
}

/// Everything the designers need from one profile at one wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeAnalysis {
    pub n_eff: f64,
    /// τ_g over 1 km, ps.
    pub group_delay_ps_km: f64,
    pub dispersion_ps_km_nm: f64,
    pub slope_ps_km_nm2: f64,
}

/// `n_g` from three `n_eff` samples at λ−h, λ, λ+h.
pub(crate) fn group_index_from_samples(
    n_minus: f64,
    n_center: f64,
    n_plus: f64,
    wavelength: f64,
    h: f64,
) -> f64 {
    let dn_dl = (n_plus - n_minus) / (2.0 * h);
    n_center - wavelength * dn_dl
}

/// 3-point first derivative of a τ_g series (per nm).
pub(crate) fn first_derivative_ps_nm(tau_minus: f64, tau_plus: f64, h_nm: f64) -> f64 {
    (tau_plus - tau_minus) / (2.0 * h_nm)
}

/// 5-point second derivative of a τ_g series (per nm²).
pub(crate) fn second_derivative_ps_nm2(tau: [f64; 5], h_nm: f64) -> f64 {
    (-tau[4] + 16.0 * tau[3] - 30.0 * tau[2] + 16.0 * tau[1] - tau[0]) / (12.0 * h_nm * h_nm)
}

fn check_stencil_range(wavelength: f64, reach: f64) -> Result<(), WaveguideError> {
    let (lo, hi) = WAVELENGTH_RANGE_M;
    if wavelength - reach < lo || wavelength + reach > hi {
        return Err(WaveguideError::StencilOutOfRange {
            wavelength_nm: wavelength * 1e9,
            reach_nm: reach * 1e9,
            min_nm: lo * 1e9,
            max_nm: hi * 1e9,
        });
    }
    Ok(())
}

fn solve_grid<const N: usize>(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
    h: f64,
    solver: &SolverOptions,
) -> Result<[f64; N], WaveguideError> {
    let half = (N / 2) as isize;
    let mut out = [0.0; N];
    for (slot, k) in (-half..=half).enumerate() {
        let lam = wavelength + (k as f64) * h;
        out[slot] = solve_lp01_with(profile, material, lam, solver)?.n_eff;
    }
    Ok(out)
}

/// Group delay per km of fiber, ps, with explicit stencil/solver knobs.
pub fn group_delay_per_km_with(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
    stencil: &StencilConfig,
    solver: &SolverOptions,
) -> Result<f64, WaveguideError> {
    let h = stencil.step;
    check_stencil_range(wavelength, h)?;
    let n: [f64; 3] = solve_grid(profile, material, wavelength, h, solver)?;
    let ng = group_index_from_samples(n[0], n[1], n[2], wavelength, h);
    Ok(ng * PS_PER_KM_PER_GROUP_INDEX)
}

/// Group delay per km of fiber, ps (default step 0.1 nm).
pub fn group_delay_per_km(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
) -> Result<f64, WaveguideError> {
    group_delay_per_km_with(
        profile,
        material,
        wavelength,
        &StencilConfig::default(),
        &SolverOptions::default(),
    )
}

/// Dispersion and slope with explicit stencil/solver knobs.
pub fn dispersion_params_with(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
    stencil: &StencilConfig,
    solver: &SolverOptions,
) -> Result<DispersionParams, WaveguideError> {
    let a = mode_analysis_with(profile, material, wavelength, stencil, solver)?;
    Ok(DispersionParams {
        dispersion_ps_km_nm: a.dispersion_ps_km_nm,
        slope_ps_km_nm2: a.slope_ps_km_nm2,
    })
}

/// Dispersion and slope at `wavelength` (default step 0.1 nm).
pub fn dispersion_params(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
) -> Result<DispersionParams, WaveguideError> {
    dispersion_params_with(
        profile,
        material,
        wavelength,
        &StencilConfig::default(),
        &SolverOptions::default(),
    )
}

/// One-shot `n_eff`, τ_g, D, S from a single seven-point grid — the
/// workhorse of the core designers, which would otherwise re-solve the
/// same wavelengths three times.
pub fn mode_analysis_with(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
    stencil: &StencilConfig,
    solver: &SolverOptions,
) -> Result<ModeAnalysis, WaveguideError> {
    let h = stencil.step;
    check_stencil_range(wavelength, 3.0 * h)?;
    let n: [f64; 7] = solve_grid(profile, material, wavelength, h, solver)?;
    // τ_g series on the inner five points (each needs n_eff one step out)
    let h_nm = h * 1e9;
    let mut tau = [0.0_f64; 5];
    for (i, t) in tau.iter_mut().enumerate() {
        let k = i + 1; // grid slot of the series center
        let lam = wavelength + ((k as isize - 3) as f64) * h;
        let ng = group_index_from_samples(n[k - 1], n[k], n[k + 1], lam, h);
        *t = ng * PS_PER_KM_PER_GROUP_INDEX;
    }
    Ok(ModeAnalysis {
        n_eff: n[3],
        group_delay_ps_km: tau[2],
        dispersion_ps_km_nm: first_derivative_ps_nm(tau[1], tau[3], h_nm),
        slope_ps_km_nm2: second_derivative_ps_nm2(tau, h_nm),
    })
}

/// One-shot analysis with default knobs.
pub fn mode_analysis(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
) -> Result<ModeAnalysis, WaveguideError> {
    mode_analysis_with(
        profile,
        material,
        wavelength,
        &StencilConfig::default(),
        &SolverOptions::default(),
    )
}
