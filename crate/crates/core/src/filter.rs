//! Microwave-photonic FIR filter synthesis from a delay-line tap set.
//!
//! A true-time-delay line feeding a photodetector implements an FIR
//! filter on the RF envelope: each core/grating contributes one tap of
//! delay τ_k and non-negative intensity weight a_k (incoherent regime),
//! and the RF transfer function is
//!
//! ```text
//! H(f) = Σ_k a_k · exp(−j·2π·f·τ_k)
//! ```
//!
//! For uniformly spaced taps the response is periodic with free
//! spectral range FSR = 1/Δτ. [`transfer_function`] samples |H| on a
//! frequency grid in dB normalized to the peak, [`fsr`] computes the
//! spacing-based FSR, and [`filter_metrics`] extracts figure-of-merit
//! numbers (measured FSR, main-to-sidelobe ratio, −3 dB bandwidth)
//! from a sampled response.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Magnitudes below this floor are clamped for plotting/CSV stability
/// at exact nulls.
pub const MAGNITUDE_FLOOR_DB: f64 = -120.0;

/// Main-lobe classification threshold: a local maximum at or above this
/// normalized level counts as a passband peak, below it as a sidelobe.
pub const MAIN_LOBE_THRESHOLD_DB: f64 = -3.0;

#[derive(Debug, Error)]
pub enum FilterError {
    #[error("tap set is empty")]
    EmptyTapSet,

    #[error("invalid tap set: {0}")]
    InvalidTapSet(String),

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("operation needs at least two taps")]
    EmptyOrSingleTap,

    #[error(
        "tap spacing is not uniform: differences deviate up to {max_relative_deviation:.3}% \
         from the mean {mean_ps:.4} ps (tolerance 1%)"
    )]
    NonUniformSpacing {
        mean_ps: f64,
        max_relative_deviation: f64,
    },

    #[error("response has insufficient peaks: {detail}")]
    InsufficientPeaks { detail: String },
}

/// A set of FIR taps: strictly increasing delays (rebased so the first
/// is 0) with non-negative linear amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TapSet {
    delays_ps: Vec<f64>,
    amplitudes: Vec<f64>,
}

impl TapSet {
    /// Builds a tap set from paired delays (ps) and amplitudes. Taps
    /// are sorted by delay and rebased so the earliest tap sits at 0.
    pub fn new(delays_ps: Vec<f64>, amplitudes: Vec<f64>) -> Result<Self, FilterError> {
        if delays_ps.is_empty() {
            return Err(FilterError::EmptyTapSet);
        }
        if delays_ps.len() != amplitudes.len() {
            return Err(FilterError::InvalidTapSet(format!(
                "{} delays but {} amplitudes",
                delays_ps.len(),
                amplitudes.len()
            )));
        }
        if delays_ps.iter().any(|d| !d.is_finite()) {
            return Err(FilterError::InvalidTapSet("non-finite delay".into()));
        }
        if amplitudes.iter().any(|a| !a.is_finite() || *a < 0.0) {
            return Err(FilterError::InvalidTapSet(
                "amplitudes must be finite and non-negative".into(),
            ));
        }
        if amplitudes.iter().all(|a| *a == 0.0) {
            return Err(FilterError::InvalidTapSet(
                "at least one amplitude must be positive".into(),
            ));
        }
        let mut pairs: Vec<(f64, f64)> = delays_ps.into_iter().zip(amplitudes).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(FilterError::InvalidTapSet(
                "delays must be distinct (duplicate tap positions)".into(),
            ));
        }
        let base = pairs[0].0;
        Ok(Self {
            delays_ps: pairs.iter().map(|p| p.0 - base).collect(),
            amplitudes: pairs.into_iter().map(|p| p.1).collect(),
        })
    }

    /// `n` equal-amplitude taps spaced `delta_tau_ps` apart.
    pub fn uniform(n: usize, delta_tau_ps: f64) -> Result<Self, FilterError> {
        // negated form so NaN spacing is rejected too
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(delta_tau_ps > 0.0) || !delta_tau_ps.is_finite() {
            return Err(FilterError::InvalidTapSet(format!(
                "tap spacing must be positive and finite, got {delta_tau_ps} ps"
            )));
        }
        Self::new(
            (0..n).map(|i| i as f64 * delta_tau_ps).collect(),
            vec![1.0; n],
        )
    }

    pub fn len(&self) -> usize {
        self.delays_ps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays_ps.is_empty()
    }

    /// Delays in ps, sorted ascending, first = 0.
    pub fn delays_ps(&self) -> &[f64] {
        &self.delays_ps
    }

    /// Linear amplitudes, ordered with the delays.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// Complex FIR response at one frequency (Hz), unnormalized.
    pub fn response_at(&self, frequency_hz: f64) -> Complex64 {
        let mut h = Complex64::new(0.0, 0.0);
        for (tau_ps, a) in self.delays_ps.iter().zip(&self.amplitudes) {
            let phase = -2.0 * std::f64::consts::PI * frequency_hz * tau_ps * 1e-12;
            h += a * Complex64::from_polar(1.0, phase);
        }
        h
    }
}

/// A sampled, peak-normalized magnitude response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterResponse {
    frequencies_hz: Vec<f64>,
    magnitude_db: Vec<f64>,
}

impl FilterResponse {
    /// Frequency grid, Hz, strictly increasing.
    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    /// Normalized magnitudes, dB; maximum is 0 dB, floor −120 dB.
    pub fn magnitude_db(&self) -> &[f64] {
        &self.magnitude_db
    }

    pub fn len(&self) -> usize {
        self.frequencies_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies_hz.is_empty()
    }
}

/// Samples |H(f)| on a uniform grid of `points` frequencies spanning
/// [`f_start`, `f_stop`] Hz, normalized so the grid maximum is 0 dB,
/// clamped at −120 dB.
pub fn transfer_function(
    taps: &TapSet,
    f_start: f64,
    f_stop: f64,
    points: usize,
) -> Result<FilterResponse, FilterError> {
    if !f_start.is_finite() || !f_stop.is_finite() || f_start < 0.0 || f_stop <= f_start {
        return Err(FilterError::InvalidGrid(format!(
            "need finite 0 ≤ f_start < f_stop, got [{f_start}, {f_stop}] Hz"
        )));
    }
    if points < 2 {
        return Err(FilterError::InvalidGrid(format!(
            "need at least 2 grid points, got {points}"
        )));
    }
    let step = (f_stop - f_start) / (points - 1) as f64;
    let frequencies_hz: Vec<f64> = (0..points).map(|i| f_start + i as f64 * step).collect();
    let linear: Vec<f64> = frequencies_hz
        .iter()
        .map(|&f| taps.response_at(f).norm())
        .collect();
    let peak = linear.iter().cloned().fold(0.0, f64::max);
    let total: f64 = taps.amplitudes().iter().sum();
    if peak <= total * 1e-12 {
        return Err(FilterError::InvalidGrid(
            "every grid point falls on a response null; nothing to normalize against".into(),
        ));
    }
    let magnitude_db = linear
        .iter()
        .map(|&m| (20.0 * (m / peak).log10()).max(MAGNITUDE_FLOOR_DB))
        .collect();
    Ok(FilterResponse {
        frequencies_hz,
        magnitude_db,
    })
}

/// Spacing-based free spectral range, GHz: FSR = 1/mean(Δτ), requiring
/// the adjacent delay differences to be uniform within 1% relative.
pub fn fsr(taps: &TapSet) -> Result<f64, FilterError> {
    if taps.len() < 2 {
        return Err(FilterError::EmptyOrSingleTap);
    }
    let diffs: Vec<f64> = taps.delays_ps.windows(2).map(|w| w[1] - w[0]).collect();
    let mean_ps = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let max_relative_deviation = diffs
        .iter()
        .map(|d| (d - mean_ps).abs() / mean_ps)
        .fold(0.0, f64::max);
    if max_relative_deviation > 0.01 {
        return Err(FilterError::NonUniformSpacing {
            mean_ps,
            max_relative_deviation: 100.0 * max_relative_deviation,
        });
    }
    Ok(1000.0 / mean_ps)
}

/// Figure-of-merit numbers extracted from a sampled response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterMetrics {
    /// Mean spacing of the passband (0 dB) peaks, GHz.
    pub fsr_measured_ghz: f64,
    /// Main-lobe to highest-secondary-lobe ratio, dB.
    pub mslr_db: f64,
    /// Width of the first passband at −3 dB, GHz.
    pub bw3db_ghz: f64,
}

/// Grid index of every local maximum (strictly above the next sample,
/// at or above the previous — flat-top tolerant), endpoints included.
fn local_maxima(mag: &[f64]) -> Vec<usize> {
    let n = mag.len();
    let mut out = Vec::new();
    for i in 0..n {
        let up = i == 0 || mag[i] >= mag[i - 1];
        let down = i + 1 == n || mag[i] > mag[i + 1];
        if up && down {
            out.push(i);
        }
    }
    out
}

/// Linear interpolation of the frequency where the magnitude crosses
/// `level` between samples i and i+1.
fn cross(freq: &[f64], mag: &[f64], i: usize, level: f64) -> f64 {
    let (f0, f1) = (freq[i], freq[i + 1]);
    let (m0, m1) = (mag[i], mag[i + 1]);
    if m1 == m0 {
        return f1;
    }
    f0 + (f1 - f0) * (level - m0) / (m1 - m0)
}

/// Extracts (measured FSR, MSLR, −3 dB bandwidth) from a response.
///
/// Passband peaks are local maxima at or above −3 dB; sidelobes are
/// local maxima below it. Needs at least two passband peaks for the
/// FSR and at least one sidelobe for the MSLR.
///
/// Maxima sitting on the window edges are screened out: a response cut
/// mid-flank rises into the grid boundary and would otherwise read as
/// a spurious lobe. The one verifiable edge peak is DC — |H| is even
/// in f, so a maximum at f = 0 is genuine.
pub fn filter_metrics(resp: &FilterResponse) -> Result<FilterMetrics, FilterError> {
    let freq = resp.frequencies_hz();
    let mag = resp.magnitude_db();
    let last = mag.len() - 1;
    let maxima: Vec<usize> = local_maxima(mag)
        .into_iter()
        .filter(|&i| (i != 0 || freq[0] == 0.0) && i != last)
        .collect();
    let mains: Vec<usize> = maxima
        .iter()
        .copied()
        .filter(|&i| mag[i] >= MAIN_LOBE_THRESHOLD_DB)
        .collect();
    if mains.len() < 2 {
        return Err(FilterError::InsufficientPeaks {
            detail: format!(
                "{} passband peak(s) on the grid; the measured FSR needs at least 2 \
                 (widen the frequency span)",
                mains.len()
            ),
        });
    }
    let fsr_measured_ghz =
        (freq[*mains.last().unwrap()] - freq[mains[0]]) * 1e-9 / (mains.len() - 1) as f64;

    let side_peak = maxima
        .iter()
        .copied()
        .filter(|&i| mag[i] < MAIN_LOBE_THRESHOLD_DB)
        .map(|i| mag[i])
        .fold(f64::NEG_INFINITY, f64::max);
    if !side_peak.is_finite() {
        return Err(FilterError::InsufficientPeaks {
            detail: "no secondary lobe between passbands; the MSLR is undefined \
                     (two-tap responses have none)"
                .into(),
        });
    }
    let mslr_db = -side_peak;

    // first passband: walk from its peak to the −3 dB crossings
    let p = mains[0];
    let level = MAIN_LOBE_THRESHOLD_DB;
    let right = {
        let mut i = p;
        while i + 1 < mag.len() && mag[i + 1] >= level {
            i += 1;
        }
        if i + 1 == mag.len() {
            freq[i]
        } else {
            cross(freq, mag, i, level)
        }
    };
    let bw3db_ghz = if p == 0 || mag[..p].iter().all(|&m| m >= level) {
        // the lobe is cut by the grid start (typically the DC lobe):
        // use twice the visible half-width
        2.0 * (right - freq[p]) * 1e-9
    } else {
        let mut i = p;
        while i > 0 && mag[i - 1] >= level {
            i -= 1;
        }
        let left = cross(freq, mag, i - 1, level);
        (right - left) * 1e-9
    };

    Ok(FilterMetrics {
        fsr_measured_ghz,
        mslr_db,
        bw3db_ghz,
    })
}

/// Writes a response as CSV: header `frequency_ghz,magnitude_db`, one
/// row per grid point, 9 significant digits.
pub fn write_response_csv<W: Write>(resp: &FilterResponse, mut w: W) -> std::io::Result<()> {
    writeln!(w, "frequency_ghz,magnitude_db")?;
    for (f, m) in resp.frequencies_hz().iter().zip(resp.magnitude_db()) {
        writeln!(w, "{:.8e},{:.8e}", f * 1e-9, m)?;
    }
    Ok(())
}
