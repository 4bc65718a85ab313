//! Scalar LP01 mode solver for radially layered step profiles.
//!
//! Under weak guidance the transverse field of the fundamental mode
//! obeys the scalar Helmholtz equation; in a layer of constant index
//! `n_i` the azimuthally symmetric solution is a combination of
//! `J0(κr), Y0(κr)` where the layer is oscillatory (`n_i > n_eff`,
//! `κ = k0·√(n_i² − n_eff²)`) or `I0(κr), K0(κr)` where it is
//! evanescent (`κ = k0·√(n_eff² − n_i²)`). The solver propagates the
//! field value and radial derivative outward from the axis (keeping only
//! the regular basis function in the innermost layer), re-expanding at
//! each interface with exact 2x2 solves backed by the analytic
//! Wronskians `W{J0,Y0}(x) = 2/(πx)` and `W{I0,K0}(x) = −1/x`, and
//! closes the system against a purely decaying `K0(wr)` tail in the
//! outer cladding. The dispersion relation is the mismatch functional
//!
//! ```text
//! F(n_eff) = [ψ'(R)·K0(wR) + ψ(R)·w·K1(wR)] / k0
//! ```
//!
//! evaluated at the outermost interface `R`. Unlike a ratio-matching
//! formulation, `F` has no poles at field nodes, so a sign change always
//! brackets a genuine root. Roots are located by a top-down linear scan
//! in `n_eff` and polished by bisection to machine precision; the
//! largest root is LP01.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::material::MaterialModel;
use super::profile::RadialProfile;
use super::WaveguideError;
use crate::special;

/// Knobs for the root search. Defaults locate LP01 reliably for
/// telecom-band profiles; loosen `scan_resolution` only if you know the
/// characteristic function is coarse.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Step of the top-down linear scan in `n_eff`.
    pub scan_resolution: f64,
    /// Distance kept away from the bracket endpoints `n_clad` and
    /// `max(n_i)`, where the basis functions degenerate.
    pub bracket_margin: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            scan_resolution: 1e-5,
            bracket_margin: 1e-7,
        }
    }
}

/// Whether a layer hosts an oscillatory or evanescent radial solution at
/// the solved `n_eff`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialKind {
    /// `n_layer > n_eff`: basis `J0/Y0`.
    Oscillatory,
    /// `n_layer ≤ n_eff`: basis `I0/K0`.
    Evanescent,
}

/// Field expansion inside one radial region at the solved `n_eff`.
///
/// `ψ(r) = coeff_first·F0(κr) + coeff_second·G0(κr)` with
/// `(F0, G0) = (J0, Y0)` or `(I0, K0)` according to `kind`. The outer
/// cladding is the final entry (`outer_radius = None`, `K0` tail only).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldLayer {
    pub inner_radius: f64,
    pub outer_radius: Option<f64>,
    pub index: f64,
    pub kind: RadialKind,
    /// Transverse wavenumber κ, 1/m.
    pub transverse_k: f64,
    pub coeff_first: f64,
    pub coeff_second: f64,
}

/// A converged LP01 solution: effective index plus the piecewise field
/// expansion it implies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSolution {
    pub n_eff: f64,
    /// Vacuum wavelength the mode was solved at, meters.
    pub wavelength: f64,
    /// |F(n_eff)| at the accepted root (dimensionless).
    pub residual: f64,
    layers: Vec<FieldLayer>,
}

impl ModeSolution {
    /// Per-region field expansions, axis outward; last entry is the
    /// cladding tail.
    pub fn layers(&self) -> &[FieldLayer] {
        &self.layers
    }

    fn layer_at(&self, r: f64) -> &FieldLayer {
        for layer in &self.layers {
            match layer.outer_radius {
                Some(out) if r <= out => return layer,
                None => return layer,
                _ => {}
            }
        }
        self.layers.last().expect("solution has layers")
    }

    /// Transverse field ψ(r), normalized to ψ(0) = 1.
    pub fn field(&self, r: f64) -> f64 {
        self.layer_at(r.abs()).eval(r.abs()).0
    }

    /// Radial derivative dψ/dr at `r`.
    pub fn field_derivative(&self, r: f64) -> f64 {
        self.layer_at(r.abs()).eval(r.abs()).1
    }

    /// Worst relative continuity defect of (ψ, ψ') over all interfaces.
    ///
    /// Interior interfaces are continuous by construction (round-off
    /// level); the outermost derivative carries the root residual. A
    /// converged solution stays below 1e-10.
    pub fn max_interface_mismatch(&self) -> f64 {
        let mut worst = 0.0_f64;
        let k0 = 2.0 * PI / self.wavelength;
        for pair in self.layers.windows(2) {
            let r = pair[0].outer_radius.expect("interior layer has an edge");
            let (vl, vr) = (pair[0].eval(r), pair[1].eval(r));
            let val = (vl.0 - vr.0).abs() / vl.0.abs().max(vr.0.abs()).max(1e-300);
            // Scale the derivative defect like the values: ψ' ~ k0 ψ.
            let scale_d =
                vl.1.abs()
                    .max(vr.1.abs())
                    .max(k0 * vl.0.abs().max(vr.0.abs()));
            let der = (vl.1 - vr.1).abs() / scale_d.max(1e-300);
            worst = worst.max(val).max(der);
        }
        worst
    }
}

impl FieldLayer {
    /// (ψ, dψ/dr) at radius `r` from this layer's expansion. Zero
    /// coefficients short-circuit so the singular partner function
    /// (Y0/K0 at the axis) is never touched.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let k = self.transverse_k;
        let x = k * r;
        let (a, c) = (self.coeff_first, self.coeff_second);
        match self.kind {
            RadialKind::Oscillatory => {
                let mut v = 0.0;
                let mut d = 0.0;
                if a != 0.0 {
                    v += a * special::j0(x);
                    d -= k * a * special::j1(x);
                }
                if c != 0.0 {
                    v += c * special::y0(x);
                    d -= k * c * special::y1(x);
                }
                (v, d)
            }
            RadialKind::Evanescent => {
                let mut v = 0.0;
                let mut d = 0.0;
                if a != 0.0 {
                    v += a * special::i0(x);
                    d += k * a * special::i1(x);
                }
                if c != 0.0 {
                    v += c * special::k0(x);
                    d -= k * c * special::k1(x);
                }
                (v, d)
            }
        }
    }
}

/// Geometry + indices resolved at one wavelength.
struct SolveLayer {
    index: f64,
    inner: f64,
    /// `None` marks the unbounded outer cladding.
    outer: Option<f64>,
}

fn build_layers(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
) -> Result<Vec<SolveLayer>, WaveguideError> {
    let mut out = Vec::with_capacity(profile.layers().len() + 1);
    let mut inner = 0.0;
    for layer in profile.layers() {
        out.push(SolveLayer {
            index: material.refractive_index(layer.delta, wavelength)?,
            inner,
            outer: Some(layer.outer_radius),
        });
        inner = layer.outer_radius;
    }
    out.push(SolveLayer {
        index: material.base_index(wavelength)?,
        inner,
        outer: None,
    });
    Ok(out)
}

/// Transverse wavenumber and solution kind for one layer. A floor keeps
/// κ finite when a layer index degenerates with `n_eff` (the basis pair
/// would otherwise collapse); the floor perturbs `n_eff` sensitivity at
/// the 1e-18 level, far below solver tolerance.
fn transverse(k0: f64, n_layer: f64, n_eff: f64) -> (RadialKind, f64) {
    let d = n_layer * n_layer - n_eff * n_eff;
    let floor = 1e-9;
    if d > 0.0 {
        (RadialKind::Oscillatory, k0 * d.sqrt().max(floor))
    } else {
        (RadialKind::Evanescent, k0 * (-d).sqrt().max(floor))
    }
}

struct Basis {
    f: f64,
    g: f64,
    df: f64,
    dg: f64,
}

/// Both basis functions and radial derivatives at radius `r`.
fn basis(kind: RadialKind, k: f64, r: f64) -> Basis {
    let x = k * r;
    match kind {
        RadialKind::Oscillatory => Basis {
            f: special::j0(x),
            g: special::y0(x),
            df: -k * special::j1(x),
            dg: -k * special::y1(x),
        },
        RadialKind::Evanescent => Basis {
            f: special::i0(x),
            g: special::k0(x),
            df: k * special::i1(x),
            dg: -k * special::k1(x),
        },
    }
}

/// Analytic Wronskian `f·g' − f'·g` of the basis pair at inner radius
/// `r` — exact, so interface solves don't lose digits to cancellation.
fn wronskian(kind: RadialKind, r: f64) -> f64 {
    match kind {
        RadialKind::Oscillatory => 2.0 / (PI * r),
        RadialKind::Evanescent => -1.0 / r,
    }
}

/// Pole-free dispersion functional; see the module docs.
fn characteristic(layers: &[SolveLayer], k0: f64, n_eff: f64) -> f64 {
    let n = layers.len();
    // innermost layer: regular solution only (J0 or I0), unit amplitude
    let first = &layers[0];
    let r0 = first.outer.expect("profile keeps >= 1 bounded layer");
    let (kind, kap) = transverse(k0, first.index, n_eff);
    let b = basis(kind, kap, r0);
    let (mut psi, mut dpsi) = (b.f, b.df);

    for layer in &layers[1..n - 1] {
        let (kind, kap) = transverse(k0, layer.index, n_eff);
        let r_in = layer.inner;
        let r_out = layer.outer.expect("interior layer is bounded");
        let bi = basis(kind, kap, r_in);
        let det = wronskian(kind, r_in);
        let a = (psi * bi.dg - dpsi * bi.g) / det;
        let c = (dpsi * bi.f - psi * bi.df) / det;
        let bo = basis(kind, kap, r_out);
        psi = a * bo.f + c * bo.g;
        dpsi = a * bo.df + c * bo.dg;
        // rescale to dodge overflow in strongly evanescent stretches;
        // F only needs the sign and relative magnitude
        let s = psi.abs().max(dpsi.abs() / k0);
        if s.is_finite() && s > 0.0 {
            psi /= s;
            dpsi /= s;
        }
    }

    let outer = &layers[n - 1];
    let r_edge = outer.inner;
    // bracket guarantees n_eff > n_clad, so the tail is evanescent
    let (_, w) = transverse(k0, outer.index, n_eff);
    let x = w * r_edge;
    (dpsi / k0) * special::k0(x) + psi * (w / k0) * special::k1(x)
}

/// Coefficient extraction at the converged root (axis value 1).
fn extract_layers(layers: &[SolveLayer], k0: f64, n_eff: f64) -> Vec<FieldLayer> {
    let n = layers.len();
    let mut out = Vec::with_capacity(n);

    let first = &layers[0];
    let (kind, kap) = transverse(k0, first.index, n_eff);
    out.push(FieldLayer {
        inner_radius: 0.0,
        outer_radius: first.outer,
        index: first.index,
        kind,
        transverse_k: kap,
        coeff_first: 1.0,
        coeff_second: 0.0,
    });
    let r0 = first.outer.expect("bounded core");
    let b = basis(kind, kap, r0);
    let (mut psi, mut dpsi) = (b.f, b.df);

    for layer in &layers[1..n - 1] {
        let (kind, kap) = transverse(k0, layer.index, n_eff);
        let r_in = layer.inner;
        let r_out = layer.outer.expect("interior layer is bounded");
        let bi = basis(kind, kap, r_in);
        let det = wronskian(kind, r_in);
        let a = (psi * bi.dg - dpsi * bi.g) / det;
        let c = (dpsi * bi.f - psi * bi.df) / det;
        out.push(FieldLayer {
            inner_radius: r_in,
            outer_radius: Some(r_out),
            index: layer.index,
            kind,
            transverse_k: kap,
            coeff_first: a,
            coeff_second: c,
        });
        let bo = basis(kind, kap, r_out);
        psi = a * bo.f + c * bo.g;
        dpsi = a * bo.df + c * bo.dg;
    }

    let outer = &layers[n - 1];
    let r_edge = outer.inner;
    let (kind, w) = transverse(k0, outer.index, n_eff);
    // match the field value; the derivative defect is the root residual
    let tail = psi / special::k0(w * r_edge);
    out.push(FieldLayer {
        inner_radius: r_edge,
        outer_radius: None,
        index: outer.index,
        kind,
        transverse_k: w,
        coeff_first: 0.0,
        coeff_second: tail,
    });
    out
}

/// Solves for the LP01 mode with default options.
pub fn solve_lp01(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
) -> Result<ModeSolution, WaveguideError> {
    solve_lp01_with(profile, material, wavelength, &SolverOptions::default())
}

/// Solves for the LP01 mode: top-down scan over
/// `n_eff ∈ (n_clad + margin, max nᵢ − margin)`, bisection on the first
/// sign change. The first root from the top is the fundamental mode.
pub fn solve_lp01_with(
    profile: &RadialProfile,
    material: &MaterialModel,
    wavelength: f64,
    options: &SolverOptions,
) -> Result<ModeSolution, WaveguideError> {
    let layers = build_layers(profile, material, wavelength)?;
    let k0 = 2.0 * PI / wavelength;
    let n_clad = layers.last().expect("cladding present").index;
    let n_max = layers.iter().fold(f64::MIN, |m, l| m.max(l.index));

    let lo = n_clad + options.bracket_margin;
    let hi = n_max - options.bracket_margin;
    // negated form so NaN endpoints read as an empty bracket
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(hi > lo) {
        return Err(WaveguideError::NoGuidedMode {
            wavelength_nm: wavelength * 1e9,
            detail: format!(
                "search bracket empty: no layer index exceeds the cladding ({n_clad:.6}) \
                 by more than the bracket margin"
            ),
        });
    }

    let f = |ne: f64| characteristic(&layers, k0, ne);
    let steps = ((hi - lo) / options.scan_resolution).ceil().max(1.0) as usize;
    let mut x_prev = hi;
    let mut f_prev = f(hi);
    if !f_prev.is_finite() {
        return Err(WaveguideError::ConvergenceFailure {
            detail: format!("characteristic function non-finite at bracket top {hi:.9}"),
        });
    }
    for i in 1..=steps {
        let x = hi - (hi - lo) * (i as f64) / (steps as f64);
        let fx = f(x);
        if !fx.is_finite() {
            return Err(WaveguideError::ConvergenceFailure {
                detail: format!("characteristic function non-finite at n_eff = {x:.9}"),
            });
        }
        if f_prev == 0.0 {
            return finish(&layers, k0, wavelength, x_prev, f_prev.abs());
        }
        if f_prev.signum() != fx.signum() {
            let (root, residual) = bisect(&f, x, x_prev, fx, f_prev)?;
            return finish(&layers, k0, wavelength, root, residual);
        }
        x_prev = x;
        f_prev = fx;
    }
    Err(WaveguideError::NoGuidedMode {
        wavelength_nm: wavelength * 1e9,
        detail: format!(
            "no sign change of the characteristic function in \
             n_eff ∈ [{lo:.6}, {hi:.6}] at scan resolution {:.1e}",
            options.scan_resolution
        ),
    })
}

/// Bisection to machine precision on a bracketing interval.
fn bisect(
    f: &impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    _fb: f64,
) -> Result<(f64, f64), WaveguideError> {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // interval collapsed to adjacent floats
        }
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(WaveguideError::ConvergenceFailure {
                detail: format!("characteristic function non-finite during bisection at {mid:.12}"),
            });
        }
        if fm == 0.0 {
            return Ok((mid, 0.0));
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let root = 0.5 * (a + b);
    Ok((root, f(root).abs()))
}

fn finish(
    layers: &[SolveLayer],
    k0: f64,
    wavelength: f64,
    root: f64,
    residual: f64,
) -> Result<ModeSolution, WaveguideError> {
    if residual > 1e-10 {
        return Err(WaveguideError::ConvergenceFailure {
            detail: format!(
                "characteristic residual {residual:.3e} at n_eff = {root:.12} exceeds 1e-10"
            ),
        });
    }
    Ok(ModeSolution {
        n_eff: root,
        wavelength,
        residual,
        layers: extract_layers(layers, k0, root),
    })
}
