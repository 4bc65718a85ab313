//! Design and simulation of multicore-fiber (MCF) true-time-delay lines
//! (TTDL) and the microwave-photonic FIR filters built on them.
//!
//! The crate is organized around the signal-processing chain:
//!
//! - [`waveguide`]: scalar LP01 mode solver for radially layered
//!   (trench-assisted) index profiles, with group delay, chromatic
//!   dispersion and dispersion slope obtained by numerical
//!   differentiation of `n_eff(λ)`.
//! - [`hetero`]: design of heterogeneous MCFs as group-index-variable
//!   delay lines (per-core dispersion targets with a common group delay
//!   at the anchor wavelength), tap-delay evaluation over a link, and
//!   the phase-matching bend-threshold radius estimate.
//! - [`fbg`]: multicavity devices made of uniform fiber Bragg gratings
//!   selectively inscribed in the cores of a homogeneous MCF, giving 2D
//!   (spatial x wavelength) tap delays.
//! - [`filter`]: incoherent FIR transfer functions from a tap set, free
//!   spectral range and filter quality metrics, CSV export.
//!
//! Geometry and wavelengths are SI (meters) throughout; derived
//! quantities use the conventional reporting units ps/km, ps/(km·nm)
//! and ps/(km·nm²), which are spelled out in field and function names.

pub mod fbg;
pub mod filter;
pub mod hetero;
pub mod special;
pub mod waveguide;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
