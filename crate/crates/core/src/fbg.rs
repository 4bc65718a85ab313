//! Selective-inscription FBG multicavity device in a homogeneous MCF:
//! per-core arrays of uniform gratings at arbitrary longitudinal
//! positions and Bragg wavelengths, giving a two-dimensional sampled
//! true-time-delay line.
//!
//! Each grating reflects one wavelength channel at one position, so a
//! tap's round-trip delay is set by the grating's location:
//! τ = 2·n_g·z_center/c. Picking the gratings of one core across
//! channels ("wavelength diversity") or the gratings of one channel
//! across cores ("spatial diversity") yields two independent delay
//! ladders from a single device, with the basic differential delay set
//! by the intra-core grating spacing or the inter-core displacement
//! respectively.
//!
//! Spectra use the standard uniform-grating coupled-mode closed form
//! with coupling κ = π·Δn/λ and detuning δ = 2π·n_eff·(1/λ − 1/λB).

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filter::TapSet;
use crate::SPEED_OF_LIGHT;

/// Bragg wavelengths (and spectrum grids) are restricted to this band.
pub const BRAGG_BAND_M: (f64, f64) = (1.5e-6, 1.6e-6);
/// Maximum supported device length, meters.
pub const MAX_FIBER_LENGTH_M: f64 = 0.2;
/// Two wavelengths within this distance refer to the same channel.
pub const CHANNEL_MATCH_TOLERANCE_M: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FbgError {
    #[error("invalid multicavity layout: {0}")]
    InvalidLayout(String),

    #[error("no grating matches channel {wavelength_nm:.2} nm")]
    ChannelNotFound { wavelength_nm: f64 },

    #[error("no grating inscribed in core {core_id}")]
    CoreNotFound { core_id: usize },

    #[error("selected gratings produce a degenerate tap set: {0}")]
    DegenerateTaps(String),
}

/// One uniform grating inscribed in one core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GratingSpec {
    pub core_id: usize,
    /// Leading-edge position along the fiber, meters.
    pub z_start: f64,
    /// Grating length, meters.
    pub length: f64,
    /// Bragg wavelength λB, meters.
    pub bragg_wavelength: f64,
    /// Index-modulation amplitude Δn.
    pub delta_n: f64,
    /// Linear field-amplitude weight ∈ (0, 1] applied to this tap.
    pub reflectivity_weight: f64,
}

impl GratingSpec {
    /// Geometric center, the reference point for tap delays.
    pub fn z_center(&self) -> f64 {
        self.z_start + 0.5 * self.length
    }

    /// Coupling coefficient κ = π·Δn/λ at the Bragg wavelength, 1/m.
    pub fn kappa(&self) -> f64 {
        std::f64::consts::PI * self.delta_n / self.bragg_wavelength
    }

    /// Peak (Bragg-wavelength) power reflectivity tanh²(κL).
    pub fn peak_reflectivity(&self) -> f64 {
        (self.kappa() * self.length).tanh().powi(2)
    }

    /// Checks the per-grating invariants.
    pub fn validate(&self) -> Result<(), FbgError> {
        let bad = |msg: String| Err(FbgError::InvalidLayout(msg));
        if !self.z_start.is_finite() || self.z_start < 0.0 {
            return bad(format!(
                "core {}: z_start must be finite and non-negative, got {} m",
                self.core_id, self.z_start
            ));
        }
        if !self.length.is_finite() || self.length <= 0.0 {
            return bad(format!(
                "core {}: grating length must be positive, got {} m",
                self.core_id, self.length
            ));
        }
        if !self.bragg_wavelength.is_finite()
            || self.bragg_wavelength < BRAGG_BAND_M.0
            || self.bragg_wavelength > BRAGG_BAND_M.1
        {
            return bad(format!(
                "core {}: Bragg wavelength {} m outside [{}, {}] m",
                self.core_id, self.bragg_wavelength, BRAGG_BAND_M.0, BRAGG_BAND_M.1
            ));
        }
        if !self.delta_n.is_finite() || self.delta_n < 0.0 {
            return bad(format!(
                "core {}: delta_n must be non-negative, got {}",
                self.core_id, self.delta_n
            ));
        }
        if !self.reflectivity_weight.is_finite()
            || self.reflectivity_weight <= 0.0
            || self.reflectivity_weight > 1.0
        {
            return bad(format!(
                "core {}: reflectivity weight must lie in (0, 1], got {}",
                self.core_id, self.reflectivity_weight
            ));
        }
        Ok(())
    }
}

/// Host-fiber optical parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberParams {
    /// Effective index used for grating detuning.
    pub n_eff: f64,
    /// Group index used for tap delays.
    pub group_index: f64,
    /// Device length, meters.
    pub length: f64,
}

/// A multicavity device: several gratings across several cores of one
/// homogeneous MCF, plus the nominal wavelength-channel plan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticavityLayout {
    fiber: FiberParams,
    gratings: Vec<GratingSpec>,
    wavelength_channels: Vec<f64>,
}

impl MulticavityLayout {
    /// Validates and builds a layout: gratings inside the fiber, no
    /// overlap within a core, one grating per (core, channel), Bragg
    /// wavelengths in band.
    pub fn new(
        fiber: FiberParams,
        gratings: Vec<GratingSpec>,
        wavelength_channels: Vec<f64>,
    ) -> Result<Self, FbgError> {
        let bad = |msg: String| Err(FbgError::InvalidLayout(msg));
        if !fiber.length.is_finite() || fiber.length <= 0.0 || fiber.length > MAX_FIBER_LENGTH_M {
            return bad(format!(
                "fiber length must lie in (0, {MAX_FIBER_LENGTH_M}] m, got {} m",
                fiber.length
            ));
        }
        if !fiber.n_eff.is_finite() || fiber.n_eff <= 1.0 || fiber.n_eff >= 2.0 {
            return bad(format!("implausible n_eff {}", fiber.n_eff));
        }
        if !fiber.group_index.is_finite() || fiber.group_index <= 1.0 || fiber.group_index >= 2.0 {
            return bad(format!("implausible group index {}", fiber.group_index));
        }
        if gratings.is_empty() {
            return bad("layout needs at least one grating".into());
        }
        for g in &gratings {
            g.validate()?;
            if g.z_start + g.length > fiber.length {
                return bad(format!(
                    "core {}: grating [{}, {}] m extends past the fiber end at {} m",
                    g.core_id,
                    g.z_start,
                    g.z_start + g.length,
                    fiber.length
                ));
            }
        }
        for ch in &wavelength_channels {
            if !ch.is_finite() || *ch < BRAGG_BAND_M.0 || *ch > BRAGG_BAND_M.1 {
                return bad(format!("channel wavelength {ch} m outside the band"));
            }
        }
        // pairwise checks within each core: no overlap, no duplicated channel
        for (i, a) in gratings.iter().enumerate() {
            for b in gratings.iter().skip(i + 1) {
                if a.core_id != b.core_id {
                    continue;
                }
                let disjoint =
                    a.z_start + a.length <= b.z_start || b.z_start + b.length <= a.z_start;
                if !disjoint {
                    return bad(format!(
                        "core {}: gratings at z = {} m and z = {} m overlap",
                        a.core_id, a.z_start, b.z_start
                    ));
                }
                if (a.bragg_wavelength - b.bragg_wavelength).abs() <= CHANNEL_MATCH_TOLERANCE_M {
                    return bad(format!(
                        "core {}: two gratings share channel {:.2} nm",
                        a.core_id,
                        a.bragg_wavelength * 1e9
                    ));
                }
            }
        }
        Ok(Self {
            fiber,
            gratings,
            wavelength_channels,
        })
    }

    pub fn fiber(&self) -> &FiberParams {
        &self.fiber
    }

    pub fn gratings(&self) -> &[GratingSpec] {
        &self.gratings
    }

    pub fn wavelength_channels(&self) -> &[f64] {
        &self.wavelength_channels
    }
}

/// Which dimension of the 2D delay line to read out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiversityMode {
    /// One tap per core: the grating matching `channel_wavelength`
    /// in each core that has one.
    Spatial { channel_wavelength: f64 },
    /// One tap per channel: every grating inscribed in `core_id`.
    Wavelength { core_id: usize },
}

/// One selected grating with its absolute round-trip delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectedTap {
    pub core_id: usize,
    pub bragg_wavelength: f64,
    pub z_center: f64,
    /// Round-trip delay 2·n_g·z_center/c, ps (not rebased).
    pub absolute_delay_ps: f64,
    pub amplitude: f64,
}

/// Selects the gratings for a diversity query, sorted by delay.
pub fn select_taps(
    layout: &MulticavityLayout,
    mode: DiversityMode,
) -> Result<Vec<SelectedTap>, FbgError> {
    let picked: Vec<&GratingSpec> = match mode {
        DiversityMode::Spatial { channel_wavelength } => {
            let hits: Vec<&GratingSpec> = layout
                .gratings()
                .iter()
                .filter(|g| {
                    (g.bragg_wavelength - channel_wavelength).abs() <= CHANNEL_MATCH_TOLERANCE_M
                })
                .collect();
            if hits.is_empty() {
                return Err(FbgError::ChannelNotFound {
                    wavelength_nm: channel_wavelength * 1e9,
                });
            }
            hits
        }
        DiversityMode::Wavelength { core_id } => {
            let hits: Vec<&GratingSpec> = layout
                .gratings()
                .iter()
                .filter(|g| g.core_id == core_id)
                .collect();
            if hits.is_empty() {
                return Err(FbgError::CoreNotFound { core_id });
            }
            hits
        }
    };
    let n_g = layout.fiber().group_index;
    let mut taps: Vec<SelectedTap> = picked
        .into_iter()
        .map(|g| SelectedTap {
            core_id: g.core_id,
            bragg_wavelength: g.bragg_wavelength,
            z_center: g.z_center(),
            absolute_delay_ps: 2.0 * n_g * g.z_center() / SPEED_OF_LIGHT * 1e12,
            amplitude: g.reflectivity_weight,
        })
        .collect();
    taps.sort_by(|a, b| a.absolute_delay_ps.total_cmp(&b.absolute_delay_ps));
    Ok(taps)
}

/// Tap delays for a diversity query, ps, sorted ascending and rebased
/// so the earliest tap is 0.
pub fn tap_delays(layout: &MulticavityLayout, mode: DiversityMode) -> Result<Vec<f64>, FbgError> {
    let taps = select_taps(layout, mode)?;
    let base = taps[0].absolute_delay_ps;
    Ok(taps.iter().map(|t| t.absolute_delay_ps - base).collect())
}

/// Tap amplitudes for a diversity query, ordered with [`tap_delays`].
pub fn tap_amplitudes(
    layout: &MulticavityLayout,
    mode: DiversityMode,
) -> Result<Vec<f64>, FbgError> {
    Ok(select_taps(layout, mode)?
        .iter()
        .map(|t| t.amplitude)
        .collect())
}

/// Bundles a diversity query into a filter tap set.
pub fn tap_set(layout: &MulticavityLayout, mode: DiversityMode) -> Result<TapSet, FbgError> {
    let taps = select_taps(layout, mode)?;
    TapSet::new(
        taps.iter().map(|t| t.absolute_delay_ps).collect(),
        taps.iter().map(|t| t.amplitude).collect(),
    )
    .map_err(|e| FbgError::DegenerateTaps(e.to_string()))
}

/// The §-canonical device: cores 4, 5 and 6 of a homogeneous MCF, three
/// gratings per core at channels λ1 = 1537.07 nm, λ2 = 1541.51 nm and
/// λ3 = 1546.26 nm; intra-core spacings 22, 21 and 20 mm for cores 4,
/// 5 and 6; inter-core channel displacements 6, 7 and 8 mm for λ1, λ2
/// and λ3.
pub fn canonical_paper_layout() -> MulticavityLayout {
    let channels = [1537.07e-9, 1541.51e-9, 1546.26e-9];
    // leading-edge positions, mm, per (core, channel)
    let z_mm: [(usize, [f64; 3]); 3] = [
        (4, [14.0, 36.0, 58.0]),
        (5, [8.0, 29.0, 50.0]),
        (6, [2.0, 22.0, 42.0]),
    ];
    let gratings = z_mm
        .iter()
        .flat_map(|(core, zs)| {
            zs.iter().zip(channels).map(|(z, ch)| GratingSpec {
                core_id: *core,
                z_start: z * 1e-3,
                length: 5.0e-3,
                bragg_wavelength: ch,
                delta_n: 1e-4,
                reflectivity_weight: 1.0,
            })
        })
        .collect();
    MulticavityLayout::new(
        FiberParams {
            n_eff: 1.446,
            group_index: 1.468,
            length: 0.09,
        },
        gratings,
        channels.to_vec(),
    )
    .expect("canonical layout satisfies its own invariants")
}

/// A sampled single-grating reflection spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSpectrum {
    wavelengths: Vec<f64>,
    reflection: Vec<Complex64>,
    reflectivity: Vec<f64>,
}

impl ReflectionSpectrum {
    /// Wavelength grid, meters.
    pub fn wavelengths(&self) -> &[f64] {
        &self.wavelengths
    }

    /// Complex field reflection coefficient ρ(λ).
    pub fn reflection(&self) -> &[Complex64] {
        &self.reflection
    }

    /// Power reflectivity R = |ρ|² ∈ [0, 1].
    pub fn reflectivity(&self) -> &[f64] {
        &self.reflectivity
    }

    /// Wavelength of the reflectivity maximum, if any point is nonzero.
    pub fn peak_wavelength(&self) -> Option<f64> {
        let (mut best, mut best_r) = (None, 0.0);
        for (lam, r) in self.wavelengths.iter().zip(&self.reflectivity) {
            if *r > best_r {
                best_r = *r;
                best = Some(*lam);
            }
        }
        best
    }
}

/// Complex (ρ, t) of a uniform grating at one wavelength: the
/// coupled-mode closed form with κ = π·Δn/λ, δ = 2π·n_eff·(1/λ − 1/λB)
/// and γ = √(κ² − δ²) continued over the band edge.
fn coupling_at(spec: &GratingSpec, n_eff: f64, wavelength: f64) -> (Complex64, Complex64) {
    let l = spec.length;
    let kappa = std::f64::consts::PI * spec.delta_n / wavelength;
    if kappa == 0.0 {
        return (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    }
    let delta =
        2.0 * std::f64::consts::PI * n_eff * (1.0 / wavelength - 1.0 / spec.bragg_wavelength);
    let gamma = Complex64::new(kappa * kappa - delta * delta, 0.0).sqrt();
    let i = Complex64::new(0.0, 1.0);
    if (gamma * l).norm() < 1e-9 {
        // band edge |δ| = κ: sinh(γL)/γ → L
        let den = Complex64::new(delta * l, 1.0);
        return (-Complex64::new(kappa * l, 0.0) / den, -i / den);
    }
    let sh = (gamma * l).sinh();
    let ch = (gamma * l).cosh();
    let den = delta * sh + i * gamma * ch;
    (-kappa * sh / den, -i * gamma / den)
}

/// Samples one grating's reflection over a wavelength grid.
///
/// Total in λ: the closed form is defined at any positive wavelength,
/// so off-band grids extrapolate rather than fail; layout construction
/// is where the band invariants are enforced.
pub fn uniform_grating_response(
    spec: &GratingSpec,
    n_eff: f64,
    wavelengths: &[f64],
) -> ReflectionSpectrum {
    debug_assert!(wavelengths.iter().all(|l| *l > 0.0 && l.is_finite()));
    let mut reflection = Vec::with_capacity(wavelengths.len());
    let mut reflectivity = Vec::with_capacity(wavelengths.len());
    for &lam in wavelengths {
        let (rho, _) = coupling_at(spec, n_eff, lam);
        reflection.push(rho);
        reflectivity.push(rho.norm_sqr().min(1.0));
    }
    ReflectionSpectrum {
        wavelengths: wavelengths.to_vec(),
        reflection,
        reflectivity,
    }
}

/// Writes a spectrum as CSV: header `wavelength_nm,reflectivity_db`,
/// 9 significant digits, floor −120 dB.
pub fn write_spectrum_csv<W: Write>(
    spectrum: &ReflectionSpectrum,
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "wavelength_nm,reflectivity_db")?;
    for (lam, r) in spectrum.wavelengths().iter().zip(spectrum.reflectivity()) {
        let db = (10.0 * r.log10()).max(-120.0);
        writeln!(w, "{:.8e},{:.8e}", lam * 1e9, db)?;
    }
    Ok(())
}
