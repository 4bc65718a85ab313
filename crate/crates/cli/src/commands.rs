//! The four subcommands: analyze, design, filter, sweep.

use std::fmt::Write as _;
use std::path::Path;

use ttdl_core::fbg::{self, DiversityMode, FbgError, FiberParams, MulticavityLayout};
use ttdl_core::filter::{self, FilterError, TapSet};
use ttdl_core::hetero::{self, HeteroMcf};
use ttdl_core::waveguide::{mode_analysis_with, MaterialModel, SolverOptions};

use crate::config::{
    stencil_from_nm, AnalyzeConfig, DesignConfig, DiversityConfig, FrequencyGridConfig,
    LayoutConfig, SweepConfig, SweepParameter, TapSourceConfig,
};
use crate::error::{computation_error, config_error, CliError};
use crate::report::{bend_radius_estimate, design_report, CoreReport, DesignReport};

/// Default frequency grid when the configuration gives none: DC to
/// 30 GHz at 10 MHz resolution.
const DEFAULT_GRID: FrequencyGridConfig = FrequencyGridConfig {
    start_ghz: 0.0,
    stop_ghz: 30.0,
    points: 3001,
};

/// How close a requested channel must be to a layout channel to snap
/// onto it, nm.
const CHANNEL_SNAP_NM: f64 = 0.5;

/// Writes `text` to `path`, or to standard output when no path is
/// given. One single write per artifact keeps outputs byte-stable.
fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| computation_error(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------

pub fn cmd_analyze(cfg: &AnalyzeConfig, output: Option<&Path>) -> Result<(), CliError> {
    if cfg.profiles.is_empty() {
        return Err(config_error("analyze needs at least one profile"));
    }
    let stencil = stencil_from_nm(cfg.stencil_step_nm)?;
    let solver = SolverOptions::default();
    let material = MaterialModel::fused_silica();
    let wavelength = cfg.wavelength_nm * 1e-9;

    let profiles = cfg
        .profiles
        .iter()
        .map(|p| p.to_profile())
        .collect::<Result<Vec<_>, _>>()?;

    let mut cores = Vec::with_capacity(profiles.len());
    for (i, (pc, profile)) in cfg.profiles.iter().zip(&profiles).enumerate() {
        let analysis = mode_analysis_with(profile, &material, wavelength, &stencil, &solver)
            .map_err(|e| computation_error(format!("profile {}: {e}", i + 1)))?;
        cores.push(CoreReport::from_analysis(i + 1, pc, &analysis));
    }

    let n_effs: Vec<f64> = cores.iter().map(|c| c.n_eff).collect();
    let adjacent: Vec<f64> = n_effs.windows(2).map(|p| (p[1] - p[0]).abs()).collect();
    let report = DesignReport {
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        command: "analyze".to_string(),
        lambda_nm: cfg.wavelength_nm,
        stencil_step_nm: cfg.stencil_step_nm,
        cores,
        adjacent_delta_n_eff: adjacent,
        bend_threshold_radius_m: bend_radius_estimate(&n_effs, cfg.pitch_um * 1e-6),
        tolerances: None,
        config_echo: serde_json::to_value(cfg)
            .map_err(|e| computation_error(format!("cannot echo config: {e}")))?,
    };

    // The per-λ curve (when requested) goes to --output; the report
    // always goes to standard output.
    if let Some(grid) = &cfg.grid {
        if profiles.len() != 1 {
            return Err(config_error(format!(
                "a wavelength-grid CSV needs exactly one profile, got {}",
                profiles.len()
            )));
        }
        let out = output.ok_or_else(|| {
            config_error("a wavelength-grid CSV needs --output for the curve file")
        })?;
        let mut csv =
            String::from("wavelength_nm,n_eff,group_delay_ps_per_km,dispersion_ps_km_nm\n");
        for lam in grid.samples_m()? {
            let a = mode_analysis_with(&profiles[0], &material, lam, &stencil, &solver)
                .map_err(|e| computation_error(format!("at {} nm: {e}", lam * 1e9)))?;
            let _ = writeln!(
                csv,
                "{:.8e},{:.8e},{:.8e},{:.8e}",
                lam * 1e9,
                a.n_eff,
                a.group_delay_ps_km,
                a.dispersion_ps_km_nm
            );
        }
        write_text(Some(out), &csv)?;
        write_text(None, &report.to_json()?)
    } else {
        write_text(output, &report.to_json()?)
    }
}

// ---------------------------------------------------------------------
// design
// ---------------------------------------------------------------------

pub fn cmd_design(cfg: &DesignConfig, output: Option<&Path>) -> Result<(), CliError> {
    let params = cfg.to_params()?;
    if params.delta_d == 0.0 {
        eprintln!(
            "warning: homogeneous ladder requested (delta_d = 0): cores are nominally \
             identical and the phase-matching threshold radius is undefined"
        );
    }
    let material = MaterialModel::fused_silica();
    let mcf = hetero::design_hetero_mcf(&params, &material)
        .map_err(|e| computation_error(format!("design failed: {e}")))?;

    let echo = serde_json::to_value(cfg.effective(&params))
        .map_err(|e| computation_error(format!("cannot echo config: {e}")))?;
    let mut report = design_report(
        &mcf,
        params.d_start,
        params.min_adjacent_delta_n_eff,
        params.core_options.stencil.step * 1e9,
        echo,
    );
    // echo the requested anchor as written, not round-tripped through metres
    report.lambda_nm = cfg.lambda0_nm;
    if params.delta_d == 0.0 {
        // Nominally identical cores: whatever tiny n_eff difference the
        // solver left over is numerical, not a phase-matching threshold.
        report.bend_threshold_radius_m = None;
    }
    write_text(output, &report.to_json()?)?;

    let flags = report.tolerances.expect("design reports carry flags");
    if !flags.all_ok {
        let mut failing = Vec::new();
        if !flags.dispersion_ladder_ok {
            failing.push("dispersion ladder outside ±0.05 ps/(km·nm)");
        }
        if !flags.tau_spread_ok {
            failing.push("anchor group-delay spread at or above 0.2 ps/km");
        }
        if !flags.separation_floor_ok {
            failing.push("adjacent n_eff separation below the floor");
        }
        return Err(computation_error(format!(
            "design tolerances not met: {}",
            failing.join("; ")
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// tap sources (filter and sweep)
// ---------------------------------------------------------------------

/// Runs the fiber design for a link source.
fn hetero_design_from(design: Option<&DesignConfig>) -> Result<HeteroMcf, CliError> {
    let cfg = design.cloned().unwrap_or_default();
    let params = cfg.to_params()?;
    let material = MaterialModel::fused_silica();
    hetero::design_hetero_mcf(&params, &material)
        .map_err(|e| computation_error(format!("design failed: {e}")))
}

/// Tap set of a fiber link: one tap per core, unit amplitudes.
fn link_tap_set(mcf: &HeteroMcf, lambda_nm: f64, length_km: f64) -> Result<TapSet, CliError> {
    if !lambda_nm.is_finite() || lambda_nm <= 0.0 {
        return Err(config_error(format!(
            "lambda_nm must be positive, got {lambda_nm}"
        )));
    }
    if !length_km.is_finite() || length_km <= 0.0 {
        return Err(config_error(format!(
            "length_km must be positive, got {length_km}"
        )));
    }
    let link = hetero::link_delays(mcf, lambda_nm * 1e-9, length_km)
        .map_err(|e| computation_error(format!("link evaluation failed: {e}")))?;
    let n = link.delays_ps.len();
    TapSet::new(link.delays_ps, vec![1.0; n])
        .map_err(|e| computation_error(format!("link taps degenerate: {e}")))
}

/// Materializes a layout configuration (or the built-in device).
fn fbg_layout_from(layout: Option<&LayoutConfig>) -> Result<MulticavityLayout, CliError> {
    match layout {
        Some(cfg) => cfg.to_layout(),
        None => Ok(fbg::canonical_paper_layout()),
    }
}

/// Resolves a diversity request against a layout, snapping a requested
/// channel wavelength onto the nearest plan channel within 0.5 nm so
/// users can type `1546.26` rather than a full-precision float.
fn diversity_mode(layout: &MulticavityLayout, cfg: &DiversityConfig) -> DiversityMode {
    match cfg {
        DiversityConfig::Wavelength { core } => DiversityMode::Wavelength { core_id: *core },
        DiversityConfig::Spatial { channel_nm } => {
            let requested = channel_nm * 1e-9;
            let mut candidates: Vec<f64> = layout.wavelength_channels().to_vec();
            if candidates.is_empty() {
                candidates = layout
                    .gratings()
                    .iter()
                    .map(|g| g.bragg_wavelength)
                    .collect();
            }
            let snapped = candidates
                .iter()
                .copied()
                .min_by(|a, b| (a - requested).abs().total_cmp(&(b - requested).abs()))
                .filter(|c| (c - requested).abs() <= CHANNEL_SNAP_NM * 1e-9)
                .unwrap_or(requested);
            DiversityMode::Spatial {
                channel_wavelength: snapped,
            }
        }
    }
}

/// Tap set of an FBG device readout.
fn fbg_tap_set(layout: &MulticavityLayout, cfg: &DiversityConfig) -> Result<TapSet, CliError> {
    let mode = diversity_mode(layout, cfg);
    fbg::tap_set(layout, mode).map_err(|e| match e {
        FbgError::ChannelNotFound { .. } | FbgError::CoreNotFound { .. } => {
            config_error(format!("{e}"))
        }
        other => computation_error(format!("{other}")),
    })
}

/// Builds the tap set for any source.
fn materialize_taps(source: &TapSourceConfig) -> Result<TapSet, CliError> {
    match source {
        TapSourceConfig::Explicit {
            delays_ps,
            amplitudes,
        } => {
            let amps = amplitudes
                .clone()
                .unwrap_or_else(|| vec![1.0; delays_ps.len()]);
            TapSet::new(delays_ps.clone(), amps)
                .map_err(|e| config_error(format!("invalid explicit taps: {e}")))
        }
        TapSourceConfig::HeteroLink {
            design,
            lambda_nm,
            length_km,
        } => {
            let mcf = hetero_design_from(design.as_ref())?;
            link_tap_set(&mcf, *lambda_nm, *length_km)
        }
        TapSourceConfig::FbgLayout { layout, diversity } => {
            let device = fbg_layout_from(layout.as_ref())?;
            fbg_tap_set(&device, diversity)
        }
    }
}

// ---------------------------------------------------------------------
// filter
// ---------------------------------------------------------------------

pub fn cmd_filter(
    source: &TapSourceConfig,
    grid: Option<FrequencyGridConfig>,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let grid = grid.unwrap_or(DEFAULT_GRID);
    let taps = materialize_taps(source)?;

    let resp = filter::transfer_function(
        &taps,
        grid.start_ghz * 1e9,
        grid.stop_ghz * 1e9,
        grid.points,
    )
    .map_err(|e| computation_error(format!("{e}")))?;

    let mut csv = Vec::new();
    filter::write_response_csv(&resp, &mut csv)
        .map_err(|e| computation_error(format!("cannot render CSV: {e}")))?;
    let csv = String::from_utf8(csv).expect("CSV output is ASCII");
    write_text(output, &csv)?;

    // Metrics go to standard output after the curve: the model FSR
    // from the tap spacings plus lobe figures measured off the sampled
    // response. A single tap has no spacing — no metrics line.
    if taps.len() < 2 {
        return Ok(());
    }
    let fsr_model = filter::fsr(&taps).map_err(|e| computation_error(format!("{e}")))?;
    match filter::filter_metrics(&resp) {
        Ok(m) => println!(
            "# fsr_ghz={:.6} mslr_db={:.6} bw3db_ghz={:.6}",
            fsr_model, m.mslr_db, m.bw3db_ghz
        ),
        Err(FilterError::InsufficientPeaks { .. }) => {
            println!("# fsr_ghz={fsr_model:.6} mslr_db=NA bw3db_ghz=NA")
        }
        Err(e) => return Err(computation_error(format!("{e}"))),
    }
    Ok(())
}

// ---------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------

pub fn cmd_sweep(cfg: &SweepConfig, output: Option<&Path>) -> Result<(), CliError> {
    let samples = cfg.samples()?;
    let column = cfg.parameter.column();
    let mut csv = format!("{column},fsr_ghz\n");

    match (cfg.parameter, &cfg.source) {
        (
            SweepParameter::LambdaNm | SweepParameter::LengthKm,
            TapSourceConfig::HeteroLink {
                design,
                lambda_nm,
                length_km,
            },
        ) => {
            let mcf = hetero_design_from(design.as_ref())?;
            for v in samples {
                let (lam, len) = match cfg.parameter {
                    SweepParameter::LambdaNm => (v, *length_km),
                    _ => (*lambda_nm, v),
                };
                let taps = link_tap_set(&mcf, lam, len)?;
                let f = filter::fsr(&taps)
                    .map_err(|e| computation_error(format!("at {column} = {v}: {e}")))?;
                let _ = writeln!(csv, "{v:.8e},{f:.8e}");
            }
        }
        (SweepParameter::GroupIndex, TapSourceConfig::FbgLayout { layout, diversity }) => {
            let base = fbg_layout_from(layout.as_ref())?;
            for v in samples {
                let swept = MulticavityLayout::new(
                    FiberParams {
                        n_eff: base.fiber().n_eff,
                        group_index: v,
                        length: base.fiber().length,
                    },
                    base.gratings().to_vec(),
                    base.wavelength_channels().to_vec(),
                )
                .map_err(|e| computation_error(format!("at {column} = {v}: {e}")))?;
                let taps = fbg_tap_set(&swept, diversity)?;
                let f = filter::fsr(&taps)
                    .map_err(|e| computation_error(format!("at {column} = {v}: {e}")))?;
                let _ = writeln!(csv, "{v:.8e},{f:.8e}");
            }
        }
        (SweepParameter::LambdaNm | SweepParameter::LengthKm, _) => {
            return Err(config_error(format!(
                "sweep parameter {column} needs a hetero_link source"
            )));
        }
        (SweepParameter::GroupIndex, _) => {
            return Err(config_error(
                "sweep parameter group_index needs an fbg_layout source",
            ));
        }
    }
    write_text(output, &csv)
}
