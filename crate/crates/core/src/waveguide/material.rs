//! Chromatic material model for silica-based fiber layers.

use serde::{Deserialize, Serialize};

use super::WaveguideError;

/// Wavelength validity range of the Sellmeier evaluation, meters.
///
/// The fused-silica fit is accurate well beyond the guided-wave design
/// band; the range below covers visible-reference checks (sodium D line)
/// through the 2 µm window while still rejecting nonsense input.
pub const WAVELENGTH_RANGE_M: (f64, f64) = (0.3e-6, 2.5e-6);

/// Largest relative index contrast the weak-guidance model tolerates.
pub const MAX_ABS_DELTA: f64 = 0.05;

/// Three-term Sellmeier material model with a multiplicative doping offset.
///
/// The base index follows
///
/// ```text
/// n²(λ) = 1 + Σᵢ Bᵢ λ² / (λ² − Cᵢ),    λ in µm, Cᵢ in µm²
/// ```
///
/// and a layer with relative index difference Δ is modeled as
/// `n(λ) = n_base(λ) · (1 + Δ)`: doping shifts the whole curve without
/// reshaping it, which keeps every layer's dispersion slaved to the host
/// glass while the profile geometry sets the waveguide contribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialModel {
    sellmeier_b: [f64; 3],
    sellmeier_c_um2: [f64; 3],
}

impl MaterialModel {
    /// Builds a model from raw Sellmeier coefficients (`c` in µm²).
    pub fn new(sellmeier_b: [f64; 3], sellmeier_c_um2: [f64; 3]) -> Self {
        Self {
            sellmeier_b,
            sellmeier_c_um2,
        }
    }

    /// Fused silica, Malitson's 1965 fit. The host glass for all profiles.
    pub fn fused_silica() -> Self {
        Self {
            sellmeier_b: [0.696_166_3, 0.407_942_6, 0.897_479_4],
            sellmeier_c_um2: [
                0.068_404_3 * 0.068_404_3,
                0.116_241_4 * 0.116_241_4,
                9.896_161 * 9.896_161,
            ],
        }
    }

    /// Oscillator strengths `B`.
    pub fn sellmeier_b(&self) -> [f64; 3] {
        self.sellmeier_b
    }

    /// Squared resonance wavelengths `C`, µm².
    pub fn sellmeier_c_um2(&self) -> [f64; 3] {
        self.sellmeier_c_um2
    }

    /// Base (undoped) refractive index at `wavelength` (meters).
    pub fn base_index(&self, wavelength: f64) -> Result<f64, WaveguideError> {
        let (lo, hi) = WAVELENGTH_RANGE_M;
        if !wavelength.is_finite() || wavelength < lo || wavelength > hi {
            return Err(WaveguideError::WavelengthOutOfRange {
                wavelength_nm: wavelength * 1e9,
                min_nm: lo * 1e9,
                max_nm: hi * 1e9,
            });
        }
        let lam2 = (wavelength * 1e6).powi(2); // µm²
        let mut n2 = 1.0;
        for (b, c) in self.sellmeier_b.iter().zip(&self.sellmeier_c_um2) {
            n2 += b * lam2 / (lam2 - c);
        }
        Ok(n2.sqrt())
    }

    /// Index of a layer with relative contrast `delta` at `wavelength`
    /// (meters): `n_base(λ) · (1 + delta)`.
    pub fn refractive_index(&self, delta: f64, wavelength: f64) -> Result<f64, WaveguideError> {
        debug_assert!(
            delta.abs() < MAX_ABS_DELTA,
            "layer contrast {delta} outside the weak-guidance regime"
        );
        Ok(self.base_index(wavelength)? * (1.0 + delta))
    }
}
