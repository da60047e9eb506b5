//! Local rotational flexibility of an edge crack.
//!
//! The crack is a massless rotational spring. Its compliance follows from
//! linear elastic fracture mechanics: the energy release rate of a bending
//! crack, `G = M²/(2b) · dC/dc`, equals `K²/E′` with the stress intensity
//! factor `K = σ √(πc) F(s)` and the outer-fibre bending stress
//! `σ = 6M/(b h²)`. Integrating over the crack length `c = s·h` gives
//!
//! ```text
//! C_θ = 72 π Φ(s) / (E′ b h²),   Φ(s) = ∫₀ˢ z F(z)² dz
//! ```

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::model::{CrackSpec, Material, PlaneState, ShapeFunction, MAX_DEPTH_RATIO};

/// Absolute tolerance of the adaptive quadrature behind [`compliance_integral`].
pub const QUADRATURE_TOL: f64 = 1e-13;

const MAX_BISECTION_DEPTH: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplianceResult {
    /// Rotation per unit bending moment, rad/(N·m).
    pub compliance: f64,
    /// Φ(s) = ∫₀ˢ z F(z)² dz.
    pub dimensionless_integral: f64,
    /// E′, Pa.
    pub effective_modulus: f64,
}

fn check_depth(s: f64) -> Result<()> {
    if (0.0..=MAX_DEPTH_RATIO).contains(&s) {
        Ok(())
    } else {
        Err(Error::DepthRatio(s))
    }
}

fn rizos(s: f64) -> f64 {
    1.93 + s * (-3.07 + s * (14.53 + s * (-25.11 + s * 25.8)))
}

fn tada(s: f64) -> f64 {
    let psi = FRAC_PI_2 * s;
    // tan(ψ)/ψ → 1 as ψ → 0
    let tan_ratio = if psi < 1e-8 { 1.0 } else { psi.tan() / psi };
    tan_ratio.sqrt() * (0.923 + 0.199 * (1.0 - psi.sin()).powi(4)) / psi.cos()
}

/// Stress intensity correction F(s) for relative crack depth `s`.
pub fn shape_factor(s: f64, variant: ShapeFunction) -> Result<f64> {
    check_depth(s)?;
    Ok(match variant {
        ShapeFunction::RizosPolynomial => rizos(s),
        ShapeFunction::TadaTrigonometric => tada(s),
    })
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol, MAX_BISECTION_DEPTH)
}

/// Φ(s) = ∫₀ˢ z F(z)² dz.
pub fn compliance_integral(s: f64, variant: ShapeFunction) -> Result<f64> {
    check_depth(s)?;
    let f = match variant {
        ShapeFunction::RizosPolynomial => rizos as fn(f64) -> f64,
        ShapeFunction::TadaTrigonometric => tada,
    };
    Ok(integrate(|z| z * f(z).powi(2), 0.0, s, QUADRATURE_TOL))
}

/// E′ = E for plane stress, E/(1 − ν²) for plane strain.
pub fn effective_modulus(material: &Material, plane_state: PlaneState) -> f64 {
    match plane_state {
        PlaneState::Stress => material.youngs_modulus,
        PlaneState::Strain => {
            material.youngs_modulus / (1.0 - material.poisson_ratio * material.poisson_ratio)
        }
    }
}

/// Rotational compliance of the crack described by `crack`, measured against
/// the ligament thickness `h_ref` of a section of width `width`.
pub fn rotational_compliance(
    material: &Material,
    width: f64,
    h_ref: f64,
    crack: &CrackSpec,
) -> Result<ComplianceResult> {
    let phi = compliance_integral(crack.depth_ratio, crack.shape_function)?;
    let e_eff = effective_modulus(material, crack.plane_state);
    Ok(ComplianceResult {
        compliance: 72.0 * PI * phi / (e_eff * width * h_ref * h_ref),
        dimensionless_integral: phi,
        effective_modulus: e_eff,
    })
}
