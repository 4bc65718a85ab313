//! Declarative run configuration: one JSON file with a schema version
//! and one section per subcommand. Unknown keys are rejected and every
//! physical quantity carries its unit in the key name.

use std::path::Path;

use serde::{Deserialize, Serialize};
use ttdl_core::fbg::{FiberParams, GratingSpec, MulticavityLayout};
use ttdl_core::hetero::{DesignOptions, HeteroDesignParams, TrenchParams};
use ttdl_core::waveguide::{RadialProfile, StencilConfig};

use crate::error::{config_error, CliError};

/// The schema generation this binary understands.
pub const SCHEMA_VERSION: u32 = 1;

/// Top-level configuration document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analyze: Option<AnalyzeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl RunConfig {
    /// Reads and schema-validates a configuration file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| config_error(format!("invalid config {}: {e}", path.display())))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(config_error(format!(
                "unsupported schema_version {} (this build understands {})",
                cfg.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(cfg)
    }
}

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

/// Inputs for `analyze`: index profiles and the evaluation wavelength,
/// plus an optional wavelength grid for a per-λ CSV curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    #[serde(default = "default_wavelength_nm")]
    pub wavelength_nm: f64,
    pub profiles: Vec<ProfileConfig>,
    /// Optional per-λ sampling grid; the curve goes to `--output`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<WavelengthGridConfig>,
    /// Finite-difference step for τ_g/D/S, nm.
    #[serde(default = "default_stencil_nm")]
    pub stencil_step_nm: f64,
    /// Core pitch used for the phase-matching radius estimate, µm.
    #[serde(default = "default_pitch_um")]
    pub pitch_um: f64,
}

fn default_wavelength_nm() -> f64 {
    1550.0
}

fn default_stencil_nm() -> f64 {
    0.1
}

fn default_pitch_um() -> f64 {
    35.0
}

/// One radial index profile: a step core with an optional trench.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub a1_um: f64,
    pub delta1_percent: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trench: Option<TrenchConfig>,
}

impl ProfileConfig {
    pub fn to_profile(&self) -> Result<RadialProfile, CliError> {
        let a1 = self.a1_um * 1e-6;
        let d1 = self.delta1_percent / 100.0;
        match &self.trench {
            None => RadialProfile::step_index(a1, d1),
            Some(t) => RadialProfile::trench_assisted(
                a1,
                d1,
                t.a2_um * 1e-6,
                t.w_um * 1e-6,
                t.delta2_percent / 100.0,
            ),
        }
        .map_err(|e| config_error(format!("invalid profile: {e}")))
    }
}

/// Trench geometry: undoped spacer width `a2`, trench width `w`, and
/// depressed contrast `delta2` (positive = depth below cladding).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrenchConfig {
    pub a2_um: f64,
    pub w_um: f64,
    pub delta2_percent: f64,
}

impl TrenchConfig {
    pub fn to_trench(self) -> TrenchParams {
        TrenchParams {
            a2: self.a2_um * 1e-6,
            w: self.w_um * 1e-6,
            delta2: self.delta2_percent / 100.0,
        }
    }

    pub fn from_trench(t: TrenchParams) -> Self {
        Self {
            a2_um: t.a2 * 1e6,
            w_um: t.w * 1e6,
            delta2_percent: t.delta2 * 100.0,
        }
    }
}

/// Evenly spaced wavelength samples, nm.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavelengthGridConfig {
    pub start_nm: f64,
    pub stop_nm: f64,
    pub points: usize,
}

impl WavelengthGridConfig {
    pub fn samples_m(&self) -> Result<Vec<f64>, CliError> {
        grid_samples(self.start_nm, self.stop_nm, self.points, "nm")
            .map(|v| v.into_iter().map(|nm| nm * 1e-9).collect())
    }
}

/// Evenly spaced frequency samples, GHz.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyGridConfig {
    pub start_ghz: f64,
    pub stop_ghz: f64,
    pub points: usize,
}

fn grid_samples(start: f64, stop: f64, points: usize, unit: &str) -> Result<Vec<f64>, CliError> {
    if !start.is_finite() || !stop.is_finite() || stop <= start {
        return Err(config_error(format!(
            "grid needs finite start < stop, got [{start}, {stop}] {unit}"
        )));
    }
    if points < 2 {
        return Err(config_error(format!(
            "grid needs at least 2 points, got {points}"
        )));
    }
    let step = (stop - start) / (points - 1) as f64;
    Ok((0..points).map(|i| start + i as f64 * step).collect())
}

// ---------------------------------------------------------------------
// design
// ---------------------------------------------------------------------

/// Inputs for `design`: the dispersion ladder and fiber geometry. All
/// fields default to the seven-core reference design.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    #[serde(default = "default_n_cores")]
    pub n_cores: usize,
    #[serde(default = "default_d_start")]
    pub d_start_ps_km_nm: f64,
    #[serde(default = "default_delta_d")]
    pub delta_d_ps_km_nm: f64,
    #[serde(default = "default_lambda0_nm")]
    pub lambda0_nm: f64,
    #[serde(default = "default_pitch_um")]
    pub pitch_um: f64,
    #[serde(default = "default_cladding_um")]
    pub cladding_diameter_um: f64,
    /// Adjacent-core effective-index separation floor. Defaults to
    /// 1e-4, or 0 for a homogeneous ladder (`delta_d_ps_km_nm = 0`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_adjacent_delta_n_eff: Option<f64>,
    /// Starting core contrast, percent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_delta1_percent: Option<f64>,
    /// Candidate trench geometries tried in order per core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trench_menu: Option<Vec<TrenchConfig>>,
}

fn default_n_cores() -> usize {
    7
}

fn default_d_start() -> f64 {
    14.75
}

fn default_delta_d() -> f64 {
    1.0
}

fn default_lambda0_nm() -> f64 {
    1550.0
}

fn default_cladding_um() -> f64 {
    125.0
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            n_cores: default_n_cores(),
            d_start_ps_km_nm: default_d_start(),
            delta_d_ps_km_nm: default_delta_d(),
            lambda0_nm: default_lambda0_nm(),
            pitch_um: default_pitch_um(),
            cladding_diameter_um: default_cladding_um(),
            min_adjacent_delta_n_eff: None,
            initial_delta1_percent: None,
            trench_menu: None,
        }
    }
}

impl DesignConfig {
    /// Converts to design-program parameters, resolving defaults. The
    /// effective separation floor is returned alongside so it can be
    /// echoed in the report.
    pub fn to_params(&self) -> Result<HeteroDesignParams, CliError> {
        let defaults = HeteroDesignParams::default();
        let mut core_options = DesignOptions::default();
        if let Some(pct) = self.initial_delta1_percent {
            core_options.initial_delta1 = pct / 100.0;
        }
        let floor = match self.min_adjacent_delta_n_eff {
            Some(f) if f >= 0.0 => f,
            Some(f) => {
                return Err(config_error(format!(
                    "min_adjacent_delta_n_eff must be non-negative, got {f}"
                )))
            }
            None if self.delta_d_ps_km_nm == 0.0 => 0.0,
            None => defaults.min_adjacent_delta_n_eff,
        };
        let trench_menu = match &self.trench_menu {
            None => defaults.trench_menu,
            Some(menu) if menu.is_empty() => {
                return Err(config_error("trench_menu must not be empty"))
            }
            Some(menu) => menu.iter().map(|t| t.to_trench()).collect(),
        };
        Ok(HeteroDesignParams {
            n_cores: self.n_cores,
            d_start: self.d_start_ps_km_nm,
            delta_d: self.delta_d_ps_km_nm,
            lambda0: self.lambda0_nm * 1e-9,
            pitch: self.pitch_um * 1e-6,
            cladding_diameter: self.cladding_diameter_um * 1e-6,
            trench_menu,
            min_adjacent_delta_n_eff: floor,
            core_options,
        })
    }

    /// A copy with every defaulted field made explicit, for the report
    /// echo.
    pub fn effective(&self, params: &HeteroDesignParams) -> Self {
        Self {
            min_adjacent_delta_n_eff: Some(params.min_adjacent_delta_n_eff),
            initial_delta1_percent: Some(params.core_options.initial_delta1 * 100.0),
            trench_menu: Some(
                params
                    .trench_menu
                    .iter()
                    .map(|t| TrenchConfig::from_trench(*t))
                    .collect(),
            ),
            ..self.clone()
        }
    }
}

// ---------------------------------------------------------------------
// filter and sweep
// ---------------------------------------------------------------------

/// Inputs for `filter`: where the taps come from and the frequency
/// grid to sample.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    pub source: TapSourceConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<FrequencyGridConfig>,
}

/// A tap source: explicit delays, a dispersive fiber link, or an FBG
/// multicavity device read out along one diversity dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum TapSourceConfig {
    Explicit {
        delays_ps: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        amplitudes: Option<Vec<f64>>,
    },
    HeteroLink {
        /// Fiber design; omitted = the default seven-core design.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        design: Option<DesignConfig>,
        lambda_nm: f64,
        length_km: f64,
    },
    FbgLayout {
        /// Device layout; omitted = the built-in reference device.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        layout: Option<LayoutConfig>,
        diversity: DiversityConfig,
    },
}

/// Which dimension of a 2D (core × wavelength) delay line to read.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum DiversityConfig {
    /// One tap per core at a fixed channel wavelength.
    Spatial { channel_nm: f64 },
    /// One tap per channel from a single core.
    Wavelength { core: usize },
}

/// An FBG multicavity device layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutConfig {
    pub n_eff: f64,
    pub group_index: f64,
    pub length_mm: f64,
    pub gratings: Vec<GratingConfig>,
    #[serde(default)]
    pub channels_nm: Vec<f64>,
}

impl LayoutConfig {
    pub fn to_layout(&self) -> Result<MulticavityLayout, CliError> {
        let fiber = FiberParams {
            n_eff: self.n_eff,
            group_index: self.group_index,
            length: self.length_mm * 1e-3,
        };
        let gratings = self
            .gratings
            .iter()
            .map(|g| GratingSpec {
                core_id: g.core,
                z_start: g.z_start_mm * 1e-3,
                length: g.length_mm * 1e-3,
                bragg_wavelength: g.bragg_nm * 1e-9,
                delta_n: g.delta_n,
                reflectivity_weight: g.weight,
            })
            .collect();
        let channels = self.channels_nm.iter().map(|nm| nm * 1e-9).collect();
        MulticavityLayout::new(fiber, gratings, channels)
            .map_err(|e| config_error(format!("invalid layout: {e}")))
    }
}

/// One uniform grating along a core.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GratingConfig {
    pub core: usize,
    pub z_start_mm: f64,
    pub length_mm: f64,
    pub bragg_nm: f64,
    #[serde(default = "default_delta_n")]
    pub delta_n: f64,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_delta_n() -> f64 {
    1e-4
}

fn default_weight() -> f64 {
    1.0
}

/// Inputs for `sweep`: one swept parameter against a tap source; the
/// output tabulates the FSR per point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub source: TapSourceConfig,
}

/// What `sweep` varies. Wavelength and length sweeps need a
/// `hetero_link` source; group-index sweeps need an `fbg_layout`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    LambdaNm,
    LengthKm,
    GroupIndex,
}

impl SweepParameter {
    /// CSV column name for the swept value.
    pub fn column(&self) -> &'static str {
        match self {
            SweepParameter::LambdaNm => "lambda_nm",
            SweepParameter::LengthKm => "length_km",
            SweepParameter::GroupIndex => "group_index",
        }
    }
}

impl SweepConfig {
    pub fn samples(&self) -> Result<Vec<f64>, CliError> {
        grid_samples(self.start, self.stop, self.points, self.parameter.column())
    }
}

// ---------------------------------------------------------------------
// default stencil helper
// ---------------------------------------------------------------------

/// Builds the analysis stencil from a nm step, rejecting non-physical
/// values.
pub fn stencil_from_nm(step_nm: f64) -> Result<StencilConfig, CliError> {
    if !step_nm.is_finite() || step_nm <= 0.0 || step_nm > 5.0 {
        return Err(config_error(format!(
            "stencil_step_nm must lie in (0, 5], got {step_nm}"
        )));
    }
    Ok(StencilConfig {
        step: step_nm * 1e-9,
    })
}
