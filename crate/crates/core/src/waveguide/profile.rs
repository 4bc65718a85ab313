//! Radially layered step-index profiles.

use serde::{Deserialize, Serialize};

use super::material::MAX_ABS_DELTA;
use super::WaveguideError;

/// Radius of the host cladding (125 µm diameter); every profile must fit
/// well inside it so cores stay decoupled from the fiber edge.
pub const HOST_CLADDING_RADIUS_M: f64 = 62.5e-6;

/// One annular layer: constant relative index contrast `delta` out to
/// `outer_radius` (meters). Layers are listed from the axis outward; the
/// region beyond the last layer is the undoped cladding (`delta = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub outer_radius: f64,
    pub delta: f64,
}

/// A piecewise-constant radial index profile around one core.
///
/// The canonical trench-assisted shape is three layers: raised core
/// `[0, a1]`, undoped spacer `[a1, a1+a2]`, depressed trench
/// `[a1+a2, a1+a2+w]`; everything outside is cladding. Arbitrary layer
/// stacks are accepted as long as the geometry is sane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    layers: Vec<Layer>,
}

impl RadialProfile {
    /// Validates and wraps an explicit layer stack.
    pub fn new(layers: Vec<Layer>) -> Result<Self, WaveguideError> {
        if layers.is_empty() {
            return Err(WaveguideError::InvalidProfile(
                "profile needs at least one layer".into(),
            ));
        }
        let mut prev = 0.0;
        for (i, layer) in layers.iter().enumerate() {
            if !layer.outer_radius.is_finite() || layer.outer_radius <= prev {
                return Err(WaveguideError::InvalidProfile(format!(
                    "layer {i}: outer radius {:.3e} m must exceed inner radius {:.3e} m",
                    layer.outer_radius, prev
                )));
            }
            if !layer.delta.is_finite() || layer.delta.abs() >= MAX_ABS_DELTA {
                return Err(WaveguideError::InvalidProfile(format!(
                    "layer {i}: contrast {} outside |delta| < {MAX_ABS_DELTA}",
                    layer.delta
                )));
            }
            prev = layer.outer_radius;
        }
        if prev >= HOST_CLADDING_RADIUS_M {
            return Err(WaveguideError::InvalidProfile(format!(
                "profile radius {:.3e} m reaches the host cladding ({:.3e} m)",
                prev, HOST_CLADDING_RADIUS_M
            )));
        }
        Ok(Self { layers })
    }

    /// Plain two-region step profile: core of radius `a1`, contrast
    /// `delta1`, then cladding.
    pub fn step_index(a1: f64, delta1: f64) -> Result<Self, WaveguideError> {
        Self::new(vec![Layer {
            outer_radius: a1,
            delta: delta1,
        }])
    }

    /// Trench-assisted profile. Zero-width spacer (`a2 = 0`) or trench
    /// (`w = 0`) degenerate gracefully by dropping the empty layer, so
    /// `trench_assisted(a1, d1, a2, 0.0, d2)` equals the step profile.
    pub fn trench_assisted(
        a1: f64,
        delta1: f64,
        a2: f64,
        w: f64,
        delta2: f64,
    ) -> Result<Self, WaveguideError> {
        if a2 < 0.0 || w < 0.0 {
            return Err(WaveguideError::InvalidProfile(
                "spacer and trench widths must be non-negative".into(),
            ));
        }
        let mut layers = vec![Layer {
            outer_radius: a1,
            delta: delta1,
        }];
        if a2 > 0.0 {
            layers.push(Layer {
                outer_radius: a1 + a2,
                delta: 0.0,
            });
        }
        if w > 0.0 {
            layers.push(Layer {
                outer_radius: a1 + a2 + w,
                delta: -delta2.abs(),
            });
        }
        Self::new(layers)
    }

    /// Layers from the axis outward (cladding not included).
    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Outer radius of the last explicit layer, meters.
    pub fn total_radius(&self) -> f64 {
        self.layers.last().map(|l| l.outer_radius).unwrap_or(0.0)
    }

    /// Largest layer contrast; must be positive for a guided mode to exist.
    pub fn max_delta(&self) -> f64 {
        self.layers.iter().map(|l| l.delta).fold(f64::MIN, f64::max)
    }

    /// Contrast of the region containing radius `r` (cladding = 0).
    pub fn delta_at(&self, r: f64) -> f64 {
        for layer in &self.layers {
            if r <= layer.outer_radius {
                return layer.delta;
            }
        }
        0.0
    }
}
