//! Structured design/analysis reports, serialized as JSON in the same
//! format family as the run configuration.

use serde::Serialize;
use ttdl_core::hetero::{bend_threshold_radius, CoreDesign, HeteroMcf};
use ttdl_core::waveguide::ModeAnalysis;

use crate::config::ProfileConfig;
use crate::error::{computation_error, CliError};

/// Per-core achieved geometry and propagation figures.
#[derive(Debug, Clone, Serialize)]
pub struct CoreReport {
    pub index: usize,
    pub a1_um: f64,
    pub delta1_percent: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta2_percent: Option<f64>,
    pub n_eff: f64,
    pub tau_g0_ps_km: f64,
    pub dispersion_ps_km_nm: f64,
    pub slope_ps_km_nm2: f64,
}

impl CoreReport {
    pub fn from_design(core: &CoreDesign) -> Self {
        let trench = core.trench();
        Self {
            index: core.index,
            a1_um: core.core_radius() * 1e6,
            delta1_percent: core.core_delta() * 100.0,
            a2_um: trench.map(|t| t.a2 * 1e6),
            w_um: trench.map(|t| t.w * 1e6),
            delta2_percent: trench.map(|t| t.delta2 * 100.0),
            n_eff: core.n_eff0,
            tau_g0_ps_km: core.tau_g0_ps_km,
            dispersion_ps_km_nm: core.dispersion_ps_km_nm,
            slope_ps_km_nm2: core.slope_ps_km_nm2,
        }
    }

    pub fn from_analysis(index: usize, profile: &ProfileConfig, analysis: &ModeAnalysis) -> Self {
        Self {
            index,
            a1_um: profile.a1_um,
            delta1_percent: profile.delta1_percent,
            a2_um: profile.trench.map(|t| t.a2_um),
            w_um: profile.trench.map(|t| t.w_um),
            delta2_percent: profile.trench.map(|t| t.delta2_percent),
            n_eff: analysis.n_eff,
            tau_g0_ps_km: analysis.group_delay_ps_km,
            dispersion_ps_km_nm: analysis.dispersion_ps_km_nm,
            slope_ps_km_nm2: analysis.slope_ps_km_nm2,
        }
    }
}

/// Pass/fail summary of the design targets.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ToleranceFlags {
    /// Every core dispersion within ±0.05 ps/(km·nm) of its ladder
    /// target.
    pub dispersion_ladder_ok: bool,
    /// Anchor group delays spread under 0.2 ps/km.
    pub tau_spread_ok: bool,
    /// Every adjacent-core n_eff separation at or above the requested
    /// floor.
    pub separation_floor_ok: bool,
    pub all_ok: bool,
}

/// The report document: achieved cores, pair separations, the
/// phase-matching radius estimate, tolerance flags and an echo of the
/// effective configuration.
#[derive(Debug, Clone, Serialize)]
pub struct DesignReport {
    pub toolkit_version: String,
    pub command: String,
    pub lambda_nm: f64,
    pub stencil_step_nm: f64,
    pub cores: Vec<CoreReport>,
    pub adjacent_delta_n_eff: Vec<f64>,
    /// Worst (largest) adjacent-pair phase-matching threshold radius,
    /// meters; absent for fewer than two cores or degenerate pairs.
    pub bend_threshold_radius_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceFlags>,
    pub config_echo: serde_json::Value,
}

impl DesignReport {
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| computation_error(format!("cannot serialize report: {e}")))?;
        text.push('\n');
        Ok(text)
    }
}

/// Worst-case threshold radius over adjacent pairs: the pair with the
/// smallest index separation binds. `None` when no pair exists or any
/// pair is degenerate.
pub fn bend_radius_estimate(n_effs: &[f64], pitch_m: f64) -> Option<f64> {
    let mut worst: Option<f64> = None;
    if n_effs.len() < 2 {
        return None;
    }
    for pair in n_effs.windows(2) {
        let delta = (pair[1] - pair[0]).abs();
        let mean = 0.5 * (pair[0] + pair[1]);
        match bend_threshold_radius(mean, delta, pitch_m) {
            Ok(r) => worst = Some(worst.map_or(r, |w: f64| w.max(r))),
            Err(_) => return None,
        }
    }
    worst
}

/// Builds the `design` report from a finished fiber design.
pub fn design_report(
    mcf: &HeteroMcf,
    d_start: f64,
    floor: f64,
    stencil_step_nm: f64,
    config_echo: serde_json::Value,
) -> DesignReport {
    let cores: Vec<CoreReport> = mcf.cores.iter().map(CoreReport::from_design).collect();
    let adjacent = mcf.adjacent_delta_n_eff();
    let n_effs: Vec<f64> = mcf.cores.iter().map(|c| c.n_eff0).collect();
    let dispersion_ladder_ok = mcf.cores.iter().enumerate().all(|(i, c)| {
        let target = d_start + i as f64 * mcf.delta_d_target;
        (c.dispersion_ps_km_nm - target).abs() <= 0.05
    });
    let tau_spread_ok = mcf.tau_g0_spread_ps_km() < 0.2;
    let separation_floor_ok = adjacent.iter().all(|d| *d >= floor);
    DesignReport {
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        command: "design".to_string(),
        lambda_nm: mcf.lambda0 * 1e9,
        stencil_step_nm,
        cores,
        adjacent_delta_n_eff: adjacent,
        bend_threshold_radius_m: bend_radius_estimate(&n_effs, mcf.pitch),
        tolerances: Some(ToleranceFlags {
            dispersion_ladder_ok,
            tau_spread_ok,
            separation_floor_ok,
            all_ok: dispersion_ladder_ok && tau_spread_ok && separation_floor_ok,
        }),
        config_echo,
    }
}
