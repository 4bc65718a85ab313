//! Heterogeneous MCF design: per-core dispersion targets with a common
//! group delay at the anchor wavelength, tap delays over a link, and the
//! phase-matching bend-threshold radius.
//!
//! Each core `n` of the heterogeneous fiber carries a Taylor model of
//! its group delay around the anchor wavelength λ0:
//!
//! ```text
//! τ_g,n(λ) = τ_g(λ0) + D_n·(λ−λ0) + (S_n/2)·(λ−λ0)²        (per km)
//! ```
//!
//! With a common τ_g(λ0) across cores and D_n increasing linearly with
//! core number (ΔD per step), the delay difference between adjacent
//! cores at an operating wavelength λm
//!
//! ```text
//! Δτ_{n,n+1} = ΔD·(λm−λ0) + (ΔS/2)·(λm−λ0)²                (per km)
//! ```
//!
//! is near-constant across the core array, which is exactly a true-time
//! -delay tap line whose basic delay (and hence filter FSR = 1/Δτ) is
//! tuned by the operating wavelength.
//!
//! The designers in this module realize that program with the
//! [`waveguide`](crate::waveguide) solver: per core, a damped 2D Newton
//! iteration adjusts core radius `a1` and contrast `Δ1` until dispersion
//! hits the core's target and the group delay matches core 1's achieved
//! anchor value, with the trench geometry chosen per core from a small
//! caller-supplied menu (mild options first) under an adjacent-core
//! `Δn_eff` separation floor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::waveguide::{
    mode_analysis_with, MaterialModel, ModeAnalysis, RadialProfile, SolverOptions, StencilConfig,
    WaveguideError,
};

/// Default anchor wavelength λ0, meters.
pub const DEFAULT_LAMBDA0: f64 = 1.55e-6;
/// Default Taylor-model validity band around λ0, meters (±).
pub const DEFAULT_VALIDITY_BAND: f64 = 30e-9;
/// Default core pitch, meters.
pub const DEFAULT_PITCH: f64 = 35e-6;
/// Default cladding diameter, meters.
pub const DEFAULT_CLADDING_DIAMETER: f64 = 125e-6;

/// Errors from the design and delay-evaluation operations.
#[derive(Debug, Error)]
pub enum DesignError {
    #[error(
        "wavelength {wavelength_nm:.2} nm outside the ±{band_nm:.0} nm validity band \
         around {lambda0_nm:.1} nm"
    )]
    OutsideValidityBand {
        wavelength_nm: f64,
        lambda0_nm: f64,
        band_nm: f64,
    },

    #[error("invalid design input: {0}")]
    InvalidInput(String),

    #[error("no solution in the search box for D = {d_target} ps/(km·nm): {detail}")]
    NoSolutionInBox { d_target: f64, detail: String },

    #[error("design iteration diverged: {detail}")]
    SolverDivergence { detail: String },

    #[error("heterogeneous design infeasible at core {core}: {constraint}")]
    DesignInfeasible { core: usize, constraint: String },

    #[error(
        "degenerate cores: adjacent-core effective-index difference must be positive \
         (got {delta_n_eff:e}); homogeneous neighbors have no finite phase-matching radius"
    )]
    DegenerateCores { delta_n_eff: f64 },

    #[error(transparent)]
    Waveguide(#[from] WaveguideError),
}

/// One designed core: its profile plus the achieved Taylor coefficients
/// at the anchor wavelength.
///
/// The stored values are reproducible from `profile` via the waveguide
/// module: `n_eff0` to ~1e-12, `tau_g0` to ~0.01 ps/km and `D` to
/// ~0.02 ps/(km·nm) at any reasonable stencil step; `S` to ~0.002
/// ps/(km·nm²) at the design stencil step (finite-difference noise in
/// the second derivative grows as the step shrinks — see
/// [`DesignOptions::stencil`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreDesign {
    /// Core number, 1-based.
    pub index: usize,
    pub profile: RadialProfile,
    /// Anchor wavelength λ0 the Taylor coefficients refer to, meters.
    pub lambda0: f64,
    /// Effective index at λ0.
    pub n_eff0: f64,
    /// Group delay at λ0, ps/km.
    pub tau_g0_ps_km: f64,
    /// Chromatic dispersion D at λ0, ps/(km·nm).
    pub dispersion_ps_km_nm: f64,
    /// Dispersion slope S at λ0, ps/(km·nm²).
    pub slope_ps_km_nm2: f64,
}

impl CoreDesign {
    /// Core radius a1, meters (first profile layer).
    pub fn core_radius(&self) -> f64 {
        self.profile.layers()[0].outer_radius
    }

    /// Core contrast Δ1 (first profile layer).
    pub fn core_delta(&self) -> f64 {
        self.profile.layers()[0].delta
    }

    /// Trench geometry, if the profile carries a depressed outer layer.
    pub fn trench(&self) -> Option<TrenchParams> {
        let layers = self.profile.layers();
        let last = layers.last()?;
        if last.delta >= 0.0 || layers.len() < 2 {
            return None;
        }
        let inner = layers[layers.len() - 2].outer_radius;
        Some(TrenchParams {
            a2: inner - self.core_radius(),
            w: last.outer_radius - inner,
            delta2: -last.delta,
        })
    }
}

/// A designed heterogeneous multicore fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeteroMcf {
    /// Cores ordered by index (1-based indices inside).
    pub cores: Vec<CoreDesign>,
    /// Core pitch, meters.
    pub pitch: f64,
    /// Cladding diameter, meters.
    pub cladding_diameter: f64,
    /// Anchor wavelength, meters.
    pub lambda0: f64,
    /// Designed adjacent-core dispersion step ΔD, ps/(km·nm).
    pub delta_d_target: f64,
}

impl HeteroMcf {
    /// `n_eff` separation |Δn_eff| for every adjacent core pair.
    pub fn adjacent_delta_n_eff(&self) -> Vec<f64> {
        self.cores
            .windows(2)
            .map(|p| (p[1].n_eff0 - p[0].n_eff0).abs())
            .collect()
    }

    /// Adjacent-pair dispersion-slope differences ΔS (design-quality
    /// metric; not targeted by the designer).
    pub fn adjacent_slope_deltas(&self) -> Vec<f64> {
        self.cores
            .windows(2)
            .map(|p| p[1].slope_ps_km_nm2 - p[0].slope_ps_km_nm2)
            .collect()
    }

    /// Spread of the anchor group delays, ps/km.
    pub fn tau_g0_spread_ps_km(&self) -> f64 {
        let taus = self.cores.iter().map(|c| c.tau_g0_ps_km);
        let lo = taus.clone().fold(f64::INFINITY, f64::min);
        let hi = taus.fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

/// Per-core tap delays over a link at one operating wavelength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkDelayProfile {
    /// Link length, km.
    pub length_km: f64,
    /// Operating wavelength λm, meters.
    pub wavelength: f64,
    /// Absolute per-core delays, ps (core order).
    pub delays_ps: Vec<f64>,
    /// Adjacent-pair differential delays Δτ_{n,n+1}, ps.
    pub differential_ps: Vec<f64>,
    /// Uniformity metric: max |Δτ entry − mean|, ps.
    pub max_differential_deviation_ps: f64,
}

impl LinkDelayProfile {
    /// Mean adjacent differential delay, ps (None for a single core).
    pub fn mean_differential_ps(&self) -> Option<f64> {
        if self.differential_ps.is_empty() {
            return None;
        }
        Some(self.differential_ps.iter().sum::<f64>() / self.differential_ps.len() as f64)
    }
}

/// Trench geometry offered to the designer: undoped spacer width `a2`,
/// trench width `w` (both meters) and depressed contrast `delta2` > 0.
/// `w = 0` encodes "no trench".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrenchParams {
    pub a2: f64,
    pub w: f64,
    pub delta2: f64,
}

/// Root-finding configuration for the per-core design.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DesignOptions {
    /// Starting core radius, meters.
    pub initial_a1: f64,
    /// Starting (and, for the 1D solve, fixed) core contrast.
    pub initial_delta1: f64,
    /// Search box for a1, meters.
    pub a1_box: (f64, f64),
    /// Search box for Δ1.
    pub delta1_box: (f64, f64),
    /// Convergence tolerance on D, ps/(km·nm).
    pub d_tolerance: f64,
    /// Convergence tolerance on τ_g0, ps/km.
    pub tau_tolerance: f64,
    /// Newton iteration cap.
    pub max_iterations: usize,
    /// Stencil used for design-time analyses. The default step (0.5 nm)
    /// is wider than the waveguide module's 0.1 nm so the dispersion
    /// slope, a second derivative, stays below ~1e-4 ps/(km·nm²) of
    /// round-off noise; truncation error is negligible at this width.
    pub stencil: StencilConfig,
    /// Mode-solver options for design-time analyses.
    pub solver: SolverOptions,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self {
            initial_a1: 4.2e-6,
            // Operating contrast for the ladder. Slightly above the
            // conventional ~0.36%: near 0.48% the slope ladder across a
            // 14.75..20.75 dispersion span is at its flattest (best tap
            // uniformity) and the adjacent-core n_eff separation clears
            // the 1e-4 crosstalk floor with margin.
            initial_delta1: 0.0048,
            a1_box: (2.5e-6, 6.0e-6),
            delta1_box: (0.002, 0.008),
            d_tolerance: 1e-3,
            tau_tolerance: 0.02,
            max_iterations: 60,
            stencil: StencilConfig { step: 0.5e-9 },
            solver: SolverOptions {
                scan_resolution: 1e-5,
                bracket_margin: 1e-7,
            },
        }
    }
}

/// Parameters for the whole-fiber design program.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HeteroDesignParams {
    pub n_cores: usize,
    /// Core 1 dispersion target, ps/(km·nm).
    pub d_start: f64,
    /// Dispersion increment per core, ps/(km·nm).
    pub delta_d: f64,
    /// Anchor wavelength, meters.
    pub lambda0: f64,
    pub pitch: f64,
    pub cladding_diameter: f64,
    /// Candidate trench geometries, tried in order per core (put mild
    /// options first: the first converged candidate that clears the
    /// `min_adjacent_delta_n_eff` floor is taken).
    pub trench_menu: Vec<TrenchParams>,
    /// Adjacent-core effective-index separation floor.
    pub min_adjacent_delta_n_eff: f64,
    pub core_options: DesignOptions,
}

impl Default for HeteroDesignParams {
    fn default() -> Self {
        Self {
            n_cores: 7,
            d_start: 14.75,
            delta_d: 1.0,
            lambda0: DEFAULT_LAMBDA0,
            pitch: DEFAULT_PITCH,
            cladding_diameter: DEFAULT_CLADDING_DIAMETER,
            // Mild-first menu: the lead entry barely perturbs the
            // dispersion-slope ladder (keeping tap delays uniform); the
            // deeper 1% trenches are confinement-oriented fallbacks.
            trench_menu: vec![
                TrenchParams {
                    a2: 10.0e-6,
                    w: 3.0e-6,
                    delta2: 0.003,
                },
                TrenchParams {
                    a2: 10.0e-6,
                    w: 3.0e-6,
                    delta2: 0.01,
                },
                TrenchParams {
                    a2: 8.0e-6,
                    w: 3.0e-6,
                    delta2: 0.01,
                },
            ],
            min_adjacent_delta_n_eff: 1e-4,
            core_options: DesignOptions::default(),
        }
    }
}

fn check_band(wavelength: f64, lambda0: f64, band: f64) -> Result<f64, DesignError> {
    let d = wavelength - lambda0;
    // tiny slack so a band-edge wavelength entered in nm round-trips
    if d.abs() > band * (1.0 + 1e-12) {
        return Err(DesignError::OutsideValidityBand {
            wavelength_nm: wavelength * 1e9,
            lambda0_nm: lambda0 * 1e9,
            band_nm: band * 1e9,
        });
    }
    Ok(d)
}

fn check_length(length_km: f64) -> Result<(), DesignError> {
    if !length_km.is_finite() || length_km < 0.0 {
        return Err(DesignError::InvalidInput(format!(
            "link length must be finite and non-negative, got {length_km} km"
        )));
    }
    Ok(())
}

/// Absolute tap delay of one core over `length_km`, ps, from the Taylor
/// model — validity band ±30 nm.
pub fn taylor_group_delay(
    core: &CoreDesign,
    wavelength: f64,
    length_km: f64,
) -> Result<f64, DesignError> {
    taylor_group_delay_with(core, wavelength, length_km, DEFAULT_VALIDITY_BAND)
}

/// [`taylor_group_delay`] with an explicit validity band (meters, ±).
pub fn taylor_group_delay_with(
    core: &CoreDesign,
    wavelength: f64,
    length_km: f64,
    band: f64,
) -> Result<f64, DesignError> {
    check_length(length_km)?;
    let d_nm = check_band(wavelength, core.lambda0, band)? * 1e9;
    let per_km = core.tau_g0_ps_km
        + core.dispersion_ps_km_nm * d_nm
        + 0.5 * core.slope_ps_km_nm2 * d_nm * d_nm;
    Ok(length_km * per_km)
}

/// Differential delay Δτ_{n,n+1} between adjacent cores over
/// `length_km`, ps:
///
/// ```text
/// Δτ = L·[ΔD·(λm−λ0) + (ΔS/2)·(λm−λ0)²]
/// ```
///
/// This is the printed two-term form: it vanishes identically at
/// λm = λ0 and equals the difference of the cores' Taylor delays when
/// the anchor delays are exactly common (the design program equalizes
/// them to tolerance, so for designed fibers the difference from the
/// Taylor form is below `L`·0.04 ps/km).
pub fn differential_delay(
    core_n: &CoreDesign,
    core_n1: &CoreDesign,
    wavelength: f64,
    length_km: f64,
) -> Result<f64, DesignError> {
    differential_delay_with(
        core_n,
        core_n1,
        wavelength,
        length_km,
        DEFAULT_VALIDITY_BAND,
    )
}

/// [`differential_delay`] with an explicit validity band (meters, ±).
pub fn differential_delay_with(
    core_n: &CoreDesign,
    core_n1: &CoreDesign,
    wavelength: f64,
    length_km: f64,
    band: f64,
) -> Result<f64, DesignError> {
    check_length(length_km)?;
    if core_n.lambda0 != core_n1.lambda0 {
        return Err(DesignError::InvalidInput(format!(
            "cores anchored at different wavelengths ({} vs {} nm)",
            core_n.lambda0 * 1e9,
            core_n1.lambda0 * 1e9
        )));
    }
    let d_nm = check_band(wavelength, core_n.lambda0, band)? * 1e9;
    let delta_d = core_n1.dispersion_ps_km_nm - core_n.dispersion_ps_km_nm;
    let delta_s = core_n1.slope_ps_km_nm2 - core_n.slope_ps_km_nm2;
    Ok(length_km * (delta_d * d_nm + 0.5 * delta_s * d_nm * d_nm))
}

/// Evaluates all per-core and adjacent-pair delays of a design at one
/// operating wavelength.
pub fn link_delays(
    mcf: &HeteroMcf,
    wavelength: f64,
    length_km: f64,
) -> Result<LinkDelayProfile, DesignError> {
    let delays_ps = mcf
        .cores
        .iter()
        .map(|c| taylor_group_delay(c, wavelength, length_km))
        .collect::<Result<Vec<_>, _>>()?;
    let differential_ps = mcf
        .cores
        .windows(2)
        .map(|p| differential_delay(&p[0], &p[1], wavelength, length_km))
        .collect::<Result<Vec<_>, _>>()?;
    let max_differential_deviation_ps = if differential_ps.is_empty() {
        0.0
    } else {
        let mean = differential_ps.iter().sum::<f64>() / differential_ps.len() as f64;
        differential_ps
            .iter()
            .map(|d| (d - mean).abs())
            .fold(0.0, f64::max)
    };
    Ok(LinkDelayProfile {
        length_km,
        wavelength,
        delays_ps,
        differential_ps,
        max_differential_deviation_ps,
    })
}

/// Threshold bending radius below which adjacent heterogeneous cores
/// become phase-matched: `R_pk = pitch · n_eff / Δn_eff`.
pub fn bend_threshold_radius(
    n_eff_ref: f64,
    delta_n_eff: f64,
    pitch: f64,
) -> Result<f64, DesignError> {
    if !n_eff_ref.is_finite() || n_eff_ref <= 0.0 || !pitch.is_finite() || pitch <= 0.0 {
        return Err(DesignError::InvalidInput(format!(
            "need positive n_eff and pitch, got n_eff = {n_eff_ref}, pitch = {pitch} m"
        )));
    }
    // negated form so a NaN separation counts as degenerate
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(delta_n_eff > 0.0) {
        return Err(DesignError::DegenerateCores { delta_n_eff });
    }
    Ok(pitch * n_eff_ref / delta_n_eff)
}

// ---------------------------------------------------------------------
// per-core root finding
// ---------------------------------------------------------------------

struct Eval {
    analysis: ModeAnalysis,
    profile: RadialProfile,
}

fn eval_core(
    a1: f64,
    delta1: f64,
    trench: Option<&TrenchParams>,
    lambda0: f64,
    material: &MaterialModel,
    opts: &DesignOptions,
) -> Result<Eval, WaveguideError> {
    let profile = match trench {
        Some(t) if t.w > 0.0 => RadialProfile::trench_assisted(a1, delta1, t.a2, t.w, t.delta2)?,
        _ => RadialProfile::step_index(a1, delta1)?,
    };
    let analysis = mode_analysis_with(&profile, material, lambda0, &opts.stencil, &opts.solver)?;
    Ok(Eval { analysis, profile })
}

fn build_core(lambda0: f64, e: Eval) -> CoreDesign {
    CoreDesign {
        index: 1,
        profile: e.profile,
        lambda0,
        n_eff0: e.analysis.n_eff,
        tau_g0_ps_km: e.analysis.group_delay_ps_km,
        dispersion_ps_km_nm: e.analysis.dispersion_ps_km_nm,
        slope_ps_km_nm2: e.analysis.slope_ps_km_nm2,
    }
}

/// 1D solve: bisect a1 at fixed Δ1 until D hits the target. Scans the
/// box coarsely and takes the rightmost bracketing interval, which
/// selects the wide-core branch where D grows with a1.
fn design_core_1d(
    d_target: f64,
    trench: Option<&TrenchParams>,
    lambda0: f64,
    material: &MaterialModel,
    opts: &DesignOptions,
) -> Result<CoreDesign, DesignError> {
    let delta1 = opts.initial_delta1;
    let (a_lo, a_hi) = opts.a1_box;
    const SCAN: usize = 12;
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(SCAN + 1); // (a1, D − target)
    for i in 0..=SCAN {
        let a1 = a_lo + (a_hi - a_lo) * (i as f64) / (SCAN as f64);
        if let Ok(e) = eval_core(a1, delta1, trench, lambda0, material, opts) {
            pts.push((a1, e.analysis.dispersion_ps_km_nm - d_target));
        }
    }
    let bracket = pts
        .windows(2)
        .rev()
        .find(|p| p[0].1.signum() != p[1].1.signum());
    let Some(&[(mut lo, mut flo), (mut hi, _)]) = bracket else {
        let span = pts
            .iter()
            .map(|p| p.1 + d_target)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), d| {
                (a.min(d), b.max(d))
            });
        return Err(DesignError::NoSolutionInBox {
            d_target,
            detail: format!(
                "at Δ1 = {delta1}, D spans [{:.2}, {:.2}] ps/(km·nm) over the a1 box with \
                 no crossing of the target",
                span.0, span.1
            ),
        });
    };
    for _ in 0..64 {
        if hi - lo < 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let Ok(e) = eval_core(mid, delta1, trench, lambda0, material, opts) else {
            return Err(DesignError::SolverDivergence {
                detail: format!("mode lost during bisection at a1 = {mid:e} m"),
            });
        };
        let fm = e.analysis.dispersion_ps_km_nm - d_target;
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let a1 = 0.5 * (lo + hi);
    let e = eval_core(a1, delta1, trench, lambda0, material, opts).map_err(DesignError::from)?;
    let err = (e.analysis.dispersion_ps_km_nm - d_target).abs();
    if err > opts.d_tolerance.max(0.05) {
        return Err(DesignError::NoSolutionInBox {
            d_target,
            detail: format!("bisection stalled with |D − target| = {err:.3}"),
        });
    }
    Ok(build_core(lambda0, e))
}

/// Damped-Newton 2D solve for (a1, Δ1) against targets (D, τ_g0), with
/// a finite-difference Jacobian and backtracking line search on the
/// tolerance-scaled residual norm.
fn design_core_2d(
    d_target: f64,
    tau_target: f64,
    trench: Option<&TrenchParams>,
    lambda0: f64,
    material: &MaterialModel,
    opts: &DesignOptions,
) -> Result<CoreDesign, DesignError> {
    let clamp = |a1: f64, d1: f64| {
        (
            a1.clamp(opts.a1_box.0, opts.a1_box.1),
            d1.clamp(opts.delta1_box.0, opts.delta1_box.1),
        )
    };
    let norm = |e: &Eval| {
        let rd = (e.analysis.dispersion_ps_km_nm - d_target) / opts.d_tolerance;
        let rt = (e.analysis.group_delay_ps_km - tau_target) / opts.tau_tolerance;
        rd.abs().max(rt.abs())
    };

    let (mut a1, mut d1) = clamp(opts.initial_a1, opts.initial_delta1);
    let mut e = match eval_core(a1, d1, trench, lambda0, material, opts) {
        Ok(e) => e,
        Err(_) => {
            // fall back to the box center before giving up
            let (ca, cd) = (
                0.5 * (opts.a1_box.0 + opts.a1_box.1),
                0.5 * (opts.delta1_box.0 + opts.delta1_box.1),
            );
            a1 = ca;
            d1 = cd;
            eval_core(ca, cd, trench, lambda0, material, opts).map_err(|err| {
                DesignError::NoSolutionInBox {
                    d_target,
                    detail: format!("no guided mode at start points: {err}"),
                }
            })?
        }
    };

    for _ in 0..opts.max_iterations {
        let n0 = norm(&e);
        if n0 < 1.0 {
            return Ok(build_core(lambda0, e));
        }
        // forward-difference Jacobian, stepping into the box interior
        let da = if a1 + 0.02e-6 <= opts.a1_box.1 {
            0.02e-6
        } else {
            -0.02e-6
        };
        let dd = if d1 + 2e-5 <= opts.delta1_box.1 {
            2e-5
        } else {
            -2e-5
        };
        let ea = eval_core(a1 + da, d1, trench, lambda0, material, opts).map_err(|err| {
            DesignError::SolverDivergence {
                detail: format!("Jacobian probe failed at a1 = {:e}: {err}", a1 + da),
            }
        })?;
        let ed = eval_core(a1, d1 + dd, trench, lambda0, material, opts).map_err(|err| {
            DesignError::SolverDivergence {
                detail: format!("Jacobian probe failed at Δ1 = {}: {err}", d1 + dd),
            }
        })?;
        let j00 = (ea.analysis.dispersion_ps_km_nm - e.analysis.dispersion_ps_km_nm) / da;
        let j10 = (ea.analysis.group_delay_ps_km - e.analysis.group_delay_ps_km) / da;
        let j01 = (ed.analysis.dispersion_ps_km_nm - e.analysis.dispersion_ps_km_nm) / dd;
        let j11 = (ed.analysis.group_delay_ps_km - e.analysis.group_delay_ps_km) / dd;
        let det = j00 * j11 - j01 * j10;
        if !det.is_finite() || det.abs() < 1e-30 {
            return Err(DesignError::SolverDivergence {
                detail: format!("singular design Jacobian (det = {det:e})"),
            });
        }
        let rd = e.analysis.dispersion_ps_km_nm - d_target;
        let rt = e.analysis.group_delay_ps_km - tau_target;
        // Newton step solves J·s = −r; damp to a trust region
        let sa = ((-rd) * j11 - (-rt) * j01) / det;
        let sd = ((-rt) * j00 - (-rd) * j10) / det;
        let sa = sa.clamp(-0.5e-6, 0.5e-6);
        let sd = sd.clamp(-1e-3, 1e-3);

        let mut accepted = false;
        let mut t = 1.0;
        for _ in 0..7 {
            let (na1, nd1) = clamp(a1 + t * sa, d1 + t * sd);
            if let Ok(en) = eval_core(na1, nd1, trench, lambda0, material, opts) {
                let n1 = norm(&en);
                if n1 < n0 {
                    a1 = na1;
                    d1 = nd1;
                    e = en;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            let on_edge = a1 <= opts.a1_box.0
                || a1 >= opts.a1_box.1
                || d1 <= opts.delta1_box.0
                || d1 >= opts.delta1_box.1;
            let detail = format!(
                "line search stalled at (a1 = {:.3} µm, Δ1 = {:.4}%) with residuals \
                 (D: {rd:+.4}, τ: {rt:+.4})",
                a1 * 1e6,
                d1 * 100.0
            );
            return Err(if on_edge {
                DesignError::NoSolutionInBox { d_target, detail }
            } else {
                DesignError::SolverDivergence { detail }
            });
        }
    }
    Err(DesignError::SolverDivergence {
        detail: format!("no convergence within {} iterations", opts.max_iterations),
    })
}

/// Designs one core to a dispersion target (and, optionally, a group
/// delay target) with default options. See [`design_core_with`].
pub fn design_core(
    d_target: f64,
    tau_g_target: Option<f64>,
    trench: Option<&TrenchParams>,
    lambda0: f64,
    material: &MaterialModel,
) -> Result<CoreDesign, DesignError> {
    design_core_with(
        d_target,
        tau_g_target,
        trench,
        lambda0,
        material,
        &DesignOptions::default(),
    )
}

/// Designs one core: finds (a1, Δ1) in the search box so dispersion
/// hits `d_target` (within `options.d_tolerance`) and, when given, the
/// anchor group delay hits `tau_g_target` (within
/// `options.tau_tolerance`). With no delay target, Δ1 stays at
/// `options.initial_delta1` and only a1 is solved.
pub fn design_core_with(
    d_target: f64,
    tau_g_target: Option<f64>,
    trench: Option<&TrenchParams>,
    lambda0: f64,
    material: &MaterialModel,
    options: &DesignOptions,
) -> Result<CoreDesign, DesignError> {
    if !(10.0..=25.0).contains(&d_target) {
        return Err(DesignError::InvalidInput(format!(
            "dispersion target {d_target} ps/(km·nm) outside the supported range [10, 25]"
        )));
    }
    if let Some(t) = trench {
        if t.a2 < 0.0 || t.w < 0.0 || !(0.0..0.05).contains(&t.delta2) {
            return Err(DesignError::InvalidInput(format!(
                "non-physical trench parameters (a2 = {} m, w = {} m, Δ2 = {})",
                t.a2, t.w, t.delta2
            )));
        }
    }
    match tau_g_target {
        None => design_core_1d(d_target, trench, lambda0, material, options),
        Some(tau) => design_core_2d(d_target, tau, trench, lambda0, material, options),
    }
}

/// Designs the full heterogeneous fiber: core 1 at `d_start` (setting
/// the common anchor delay), cores 2..N at `d_start + (n−1)·ΔD` with
/// the anchor delay as a second target, each core taking the first
/// trench-menu entry that converges and keeps its `n_eff` at least
/// `min_adjacent_delta_n_eff` away from the previous core's.
pub fn design_hetero_mcf(
    params: &HeteroDesignParams,
    material: &MaterialModel,
) -> Result<HeteroMcf, DesignError> {
    if params.n_cores == 0 {
        return Err(DesignError::InvalidInput(
            "n_cores must be at least 1".into(),
        ));
    }
    if params.trench_menu.is_empty() {
        return Err(DesignError::InvalidInput(
            "trench menu must not be empty".into(),
        ));
    }
    if params.delta_d < 0.0 {
        return Err(DesignError::InvalidInput(format!(
            "delta_d must be non-negative, got {}",
            params.delta_d
        )));
    }
    if params.pitch <= 0.0 || params.cladding_diameter <= 0.0 {
        return Err(DesignError::InvalidInput(
            "pitch and cladding diameter must be positive".into(),
        ));
    }
    if params.min_adjacent_delta_n_eff < 0.0 {
        return Err(DesignError::InvalidInput(
            "adjacent-core Δn_eff floor must be non-negative".into(),
        ));
    }

    let opts = params.core_options;
    // core 1: dispersion only; its achieved delay anchors the rest
    let mut core1 = None;
    let mut last_err = String::new();
    for trench in &params.trench_menu {
        match design_core_with(
            params.d_start,
            None,
            Some(trench),
            params.lambda0,
            material,
            &opts,
        ) {
            Ok(c) => {
                core1 = Some(c);
                break;
            }
            Err(e) => last_err = e.to_string(),
        }
    }
    let core1 = core1.ok_or_else(|| DesignError::DesignInfeasible {
        core: 1,
        constraint: format!(
            "no trench-menu option reaches D = {}: {last_err}",
            params.d_start
        ),
    })?;
    let anchor_tau = core1.tau_g0_ps_km;

    let mut cores = vec![core1];
    for n in 2..=params.n_cores {
        let d_target = params.d_start + (n - 1) as f64 * params.delta_d;
        let prev = cores.last().expect("at least core 1");
        let warm = DesignOptions {
            initial_a1: prev.core_radius(),
            initial_delta1: prev.core_delta(),
            ..opts
        };
        let mut chosen = None;
        let mut attempts = Vec::new();
        for trench in &params.trench_menu {
            match design_core_with(
                d_target,
                Some(anchor_tau),
                Some(trench),
                params.lambda0,
                material,
                &warm,
            ) {
                Ok(c) => {
                    let sep = (c.n_eff0 - prev.n_eff0).abs();
                    if sep >= params.min_adjacent_delta_n_eff {
                        chosen = Some(c);
                        break;
                    }
                    attempts.push(format!(
                        "trench (a2 = {} µm, w = {} µm, Δ2 = {}): adjacent Δn_eff {sep:.2e} \
                         below floor {:.2e}",
                        trench.a2 * 1e6,
                        trench.w * 1e6,
                        trench.delta2,
                        params.min_adjacent_delta_n_eff
                    ));
                }
                Err(e) => attempts.push(format!(
                    "trench (a2 = {} µm, w = {} µm, Δ2 = {}): {e}",
                    trench.a2 * 1e6,
                    trench.w * 1e6,
                    trench.delta2
                )),
            }
        }
        let mut c = chosen.ok_or_else(|| DesignError::DesignInfeasible {
            core: n,
            constraint: attempts.join("; "),
        })?;
        c.index = n;
        cores.push(c);
    }

    let mcf = HeteroMcf {
        cores,
        pitch: params.pitch,
        cladding_diameter: params.cladding_diameter,
        lambda0: params.lambda0,
        delta_d_target: params.delta_d,
    };
    // defensive closed-loop checks mirroring the type invariants
    for pair in mcf.cores.windows(2) {
        let step = pair[1].dispersion_ps_km_nm - pair[0].dispersion_ps_km_nm;
        if (step - params.delta_d).abs() >= 0.05 {
            return Err(DesignError::DesignInfeasible {
                core: pair[1].index,
                constraint: format!(
                    "dispersion step {step:.4} deviates from ΔD = {} by ≥ 0.05",
                    params.delta_d
                ),
            });
        }
    }
    if mcf.tau_g0_spread_ps_km() >= 0.2 {
        return Err(DesignError::DesignInfeasible {
            core: 0,
            constraint: format!(
                "anchor group-delay spread {:.3} ps/km exceeds 0.2",
                mcf.tau_g0_spread_ps_km()
            ),
        });
    }
    Ok(mcf)
}
