//! Natural frequencies as sign changes of the characteristic determinant.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::assembly::{assemble, determinant, moment_coefficients, segment_roots};
use crate::basis::{basis_eval, frequency_parameter, SegmentRoots};
use crate::error::{Error, Result};
use crate::lu::LuFactors;
use crate::model::{ArchModel, Joint, SolverConfig};

/// Null-vector residual above which a root is reported as spurious.
pub const NULL_RESIDUAL_LIMIT: f64 = 1e-6;

const INVERSE_ITERATIONS: usize = 4;

/// Frequency interval with a determinant sign change. `sign_lo == 0` marks
/// an exact zero at `omega_lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub sign_lo: i8,
    pub sign_hi: i8,
}

impl Bracket {
    pub fn is_exact(&self) -> bool {
        self.sign_lo == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeResult {
    /// rad/s.
    pub omega: f64,
    /// 1-based, ascending with `omega`.
    pub mode_index: usize,
    /// Per-segment frequency parameter (`c` of the segment quartic).
    pub k_values: Vec<f64>,
    pub omega_bar: f64,
    /// `|det|` at the root relative to the larger bracket endpoint.
    pub residual: f64,
}

/// Roots found in a window.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub modes: Vec<ModeResult>,
    pub requested: usize,
}

impl Spectrum {
    pub fn is_complete(&self) -> bool {
        self.modes.len() >= self.requested
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.omega).collect()
    }
}

fn grid(config: &SolverConfig) -> Vec<f64> {
    let n = config.scan_points;
    let step = (config.omega_max - config.omega_min) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                config.omega_max
            } else {
                config.omega_min + step * i as f64
            }
        })
        .collect()
}

/// Determinant signs on the uniform scan grid; each adjacent pair of
/// opposite signs becomes a bracket.
pub fn scan_brackets(model: &ArchModel, config: &SolverConfig) -> Vec<Bracket> {
    let omegas = grid(config);
    let signs: Vec<i8> = omegas
        .par_iter()
        .map(|&w| determinant(model, w).0)
        .collect();
    let mut out = Vec::new();
    for i in 0..omegas.len() {
        if signs[i] == 0 {
            let hi = omegas.get(i + 1).copied().unwrap_or(config.omega_max);
            out.push(Bracket {
                omega_lo: omegas[i],
                omega_hi: hi,
                sign_lo: 0,
                sign_hi: signs.get(i + 1).copied().unwrap_or(0),
            });
        } else if i + 1 < omegas.len() && signs[i] * signs[i + 1] == -1 {
            out.push(Bracket {
                omega_lo: omegas[i],
                omega_hi: omegas[i + 1],
                sign_lo: signs[i],
                sign_hi: signs[i + 1],
            });
        }
    }
    out
}

fn mode_result(model: &ArchModel, omega: f64, residual: f64) -> ModeResult {
    ModeResult {
        omega,
        mode_index: 0,
        k_values: (0..model.segment_count())
            .map(|j| frequency_parameter(model, j, omega).c_coef)
            .collect(),
        omega_bar: model.normalized_frequency(omega),
        residual,
    }
}

/// Bisects `bracket` on the determinant sign until its relative width is at most `tol_rel`.
pub fn refine_root(model: &ArchModel, bracket: &Bracket, tol_rel: f64) -> Result<ModeResult> {
    if bracket.is_exact() {
        return Ok(mode_result(model, bracket.omega_lo, 0.0));
    }
    if bracket.sign_lo * bracket.sign_hi != -1 || !(bracket.omega_lo < bracket.omega_hi) {
        return Err(Error::InvalidBracket {
            omega_lo: bracket.omega_lo,
            omega_hi: bracket.omega_hi,
        });
    }
    let (_, log_lo) = determinant(model, bracket.omega_lo);
    let (_, log_hi) = determinant(model, bracket.omega_hi);
    let (mut lo, mut hi) = (bracket.omega_lo, bracket.omega_hi);
    let sign_lo = bracket.sign_lo;
    while (hi - lo) / lo > tol_rel {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match determinant(model, mid).0 {
            0 => {
                lo = mid;
                hi = mid;
                break;
            }
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }
    let root = 0.5 * (lo + hi);
    let (_, log_mid) = determinant(model, root);
    let residual = (log_mid - log_lo.max(log_hi)).exp();
    Ok(mode_result(model, root, residual))
}

/// Scan and refine, ascending and truncated to `max_modes`.
pub fn natural_frequencies(model: &ArchModel, config: &SolverConfig) -> Result<Spectrum> {
    let brackets = scan_brackets(model, config);
    let found: Vec<ModeResult> = brackets
        .par_iter()
        .take(config.max_modes)
        .map(|b| refine_root(model, b, config.bisect_tol_rel))
        .collect::<Result<_>>()?;
    let mut modes = found;
    modes.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    for (i, m) in modes.iter_mut().enumerate() {
        m.mode_index = i + 1;
    }
    Ok(Spectrum {
        modes,
        requested: config.max_modes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSample {
    pub segment: usize,
    /// Global angular position, rad.
    pub phi: f64,
    pub x: f64,
}

/// Mode shape normalized to `max |x| = 1` with its first extremum positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeShape {
    pub omega: f64,
    pub samples: Vec<ShapeSample>,
    /// Normalized basis amplitudes, four per segment.
    pub amplitudes: Vec<[f64; 4]>,
    roots: Vec<SegmentRoots>,
    /// `‖A x‖∞/‖x‖∞` of the scaled matrix at `omega`.
    pub null_residual: f64,
}

impl ModeShape {
    /// `order`-th φ-derivative of the deflection at `local_phi` from the start of `segment`.
    pub fn eval(&self, segment: usize, local_phi: f64, order: usize) -> f64 {
        let b = basis_eval(self.roots[segment], local_phi, order);
        (0..4).map(|i| b[i] * self.amplitudes[segment][i]).sum()
    }

    /// `M = a_m X″ + d_m X` at `local_phi` in `segment`, in units of the normalized shape.
    pub fn moment(&self, model: &ArchModel, segment: usize, local_phi: f64) -> f64 {
        let m = moment_coefficients(model, segment, self.omega);
        m.a_m * self.eval(segment, local_phi, 2) + m.d_m * self.eval(segment, local_phi, 0)
    }

    /// Slope jump `X_R′ − X_L′` at interface `interface`.
    pub fn slope_jump(&self, model: &ArchModel, interface: usize) -> f64 {
        let span = model.geometry().span(interface);
        self.eval(interface + 1, 0.0, 1) - self.eval(interface, span, 1)
    }
}

fn first_extremum_sign(xs: &[f64]) -> f64 {
    let peak = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = 1e-6 * peak;
    for i in 1..xs.len().saturating_sub(1) {
        let (a, b, c) = (xs[i - 1], xs[i], xs[i + 1]);
        if b.abs() > floor && (b - a) * (c - b) <= 0.0 {
            return b.signum();
        }
    }
    xs.iter()
        .copied()
        .find(|x| x.abs() > floor)
        .map_or(1.0, f64::signum)
}

/// Null vector of the characteristic matrix at a converged root, sampled at
/// `samples_per_segment` evenly spaced points per segment (endpoints included).
pub fn mode_shape(model: &ArchModel, omega: f64, samples_per_segment: usize) -> Result<ModeShape> {
    let samples_per_segment = samples_per_segment.max(2);
    let cm = assemble(model, omega);
    let a = &cm.entries;
    let n = a.nrows();
    let lu = LuFactors::factor(a);
    let floor = f64::EPSILON * f64::EPSILON;
    let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.1 * i as f64);
    for _ in 0..INVERSE_ITERATIONS {
        v = lu.solve_regularized(&v, floor);
        let norm = v.amax();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::FullRank {
                omega,
                residual: f64::NAN,
            });
        }
        v.unscale_mut(norm);
    }
    let null_residual = (a * &v).amax() / v.amax();
    if !(null_residual <= NULL_RESIDUAL_LIMIT) {
        return Err(Error::FullRank {
            omega,
            residual: null_residual,
        });
    }

    let segments = model.segment_count();
    let roots: Vec<SegmentRoots> = (0..segments)
        .map(|j| segment_roots(model, j, omega))
        .collect();
    let geometry = model.geometry();
    let mut samples = Vec::with_capacity(segments * samples_per_segment);
    for j in 0..segments {
        let start = geometry.start_angle(j);
        let span = geometry.span(j);
        for k in 0..samples_per_segment {
            let local = span * k as f64 / (samples_per_segment - 1) as f64;
            let b = basis_eval(roots[j], local, 0);
            let x = (0..4).map(|i| b[i] * v[4 * j + i]).sum();
            samples.push(ShapeSample {
                segment: j,
                phi: start + local,
                x,
            });
        }
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.x).collect();
    let peak = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = first_extremum_sign(&xs) / peak;
    for s in &mut samples {
        s.x *= scale;
    }
    let amplitudes = (0..segments)
        .map(|j| std::array::from_fn(|i| v[4 * j + i] * scale))
        .collect();
    Ok(ModeShape {
        omega,
        samples,
        amplitudes,
        roots,
        null_residual,
    })
}

/// Expected slope jump `R·C_θ·M_L` for a spring interface, `None` for a hinge.
pub fn expected_slope_jump(model: &ArchModel, shape: &ModeShape, interface: usize) -> Option<f64> {
    match model.joint(interface) {
        Joint::Spring { compliance } => {
            let span = model.geometry().span(interface);
            Some(model.geometry().radius * compliance * shape.moment(model, interface, span))
        }
        Joint::Hinge => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::frequency_scale;
    use crate::model::{ArchGeometry, CrackSpec, Formulation, Material, ModelOptions};
    use std::f64::consts::PI;

    fn material() -> Material {
        Material {
            youngs_modulus: 7e11,
            poisson_ratio: 0.3,
            mass_density: 2300.0,
            nonlocal_eta: 1e-18,
        }
    }

    fn uniform() -> ArchModel {
        ArchModel::new(
            material(),
            ArchGeometry::uniform(30e-9, 1e-9, 1.0, 10e-9),
            vec![],
            ModelOptions::default(),
        )
        .unwrap()
    }

    /// ω_n from K_n = k²(k²−1)/(k²+1), k = nπ/β.
    fn closed_form(model: &ArchModel, n: usize) -> f64 {
        let k2 = (n as f64 * PI / model.geometry().central_angle).powi(2);
        let kn = k2 * (k2 - 1.0) / (k2 + 1.0);
        (kn / frequency_scale(model, 0).c_per_omega2).sqrt()
    }

    #[test]
    fn closed_form_first_root_value() {
        let w1 = closed_form(&uniform(), 1);
        assert!((w1 - 4.764e12).abs() < 1e-3 * 4.764e12, "{w1}");
    }

    #[test]
    fn single_bracket_around_first_root() {
        let m = uniform();
        let w1 = closed_form(&m, 1);
        let b = scan_brackets(&m, &SolverConfig::new(0.5 * w1, 1.5 * w1));
        assert_eq!(b.len(), 1);
        assert!(b[0].omega_lo < w1 && w1 < b[0].omega_hi);
        assert!(scan_brackets(&m, &SolverConfig::new(0.1 * w1, 0.9 * w1)).is_empty());
    }

    #[test]
    fn refinement_keeps_brackets() {
        let m = ArchModel::new(
            material(),
            ArchGeometry::stepped(30e-9, 1e-9, 1.0, &[0.4], &[10e-9, 20e-9]),
            vec![CrackSpec::new(0, 0.5)],
            ModelOptions::default(),
        )
        .unwrap();
        let mut cfg = SolverConfig::default_for(&m).unwrap();
        cfg.scan_points = 300;
        let coarse = scan_brackets(&m, &cfg);
        cfg.scan_points = 600;
        let fine = scan_brackets(&m, &cfg);
        assert!(!coarse.is_empty());
        for c in &coarse {
            assert!(fine
                .iter()
                .any(|f| f.omega_lo <= c.omega_hi && f.omega_hi >= c.omega_lo));
        }
    }

    #[test]
    fn first_root_matches_closed_form() {
        let m = uniform();
        let w1 = closed_form(&m, 1);
        let b = scan_brackets(&m, &SolverConfig::new(0.5 * w1, 1.5 * w1));
        let r = refine_root(&m, &b[0], 1e-13).unwrap();
        assert!((r.omega - w1).abs() < 1e-8 * w1);
        assert!(r.residual < 1e-6);
        assert!((r.k_values[0] - PI * PI * (PI * PI - 1.0) / (PI * PI + 1.0)).abs() < 1e-7);
    }

    #[test]
    fn nested_tolerances_agree() {
        let m = uniform();
        let w1 = closed_form(&m, 1);
        let b = scan_brackets(&m, &SolverConfig::new(0.5 * w1, 1.5 * w1))[0];
        let fine = refine_root(&m, &b, 1e-10).unwrap().omega;
        let coarse = refine_root(&m, &b, 1e-6).unwrap().omega;
        assert!((fine - coarse).abs() < 1e-6 * fine);
    }

    #[test]
    fn matching_signs_rejected() {
        let m = uniform();
        let b = Bracket {
            omega_lo: 1e12,
            omega_hi: 2e12,
            sign_lo: 1,
            sign_hi: 1,
        };
        assert!(matches!(
            refine_root(&m, &b, 1e-8),
            Err(Error::InvalidBracket { .. })
        ));
    }

    #[test]
    fn three_modes_match_closed_form() {
        let m = uniform();
        let spectrum = natural_frequencies(&m, &SolverConfig::default_for(&m).unwrap()).unwrap();
        assert!(spectrum.is_complete());
        for (n, mode) in spectrum.modes.iter().take(3).enumerate() {
            let exact = closed_form(&m, n + 1);
            assert_eq!(mode.mode_index, n + 1);
            assert!((mode.omega - exact).abs() < 1e-8 * exact);
        }
    }

    #[test]
    fn uniform_mode_shape_is_sine() {
        let m = uniform();
        for n in 1..=3 {
            let w = closed_form(&m, n);
            let shape = mode_shape(&m, w, 101).unwrap();
            for s in &shape.samples {
                let exact = (n as f64 * PI * s.phi).sin();
                assert!(
                    (s.x - exact).abs() < 1e-6,
                    "n={n} phi={} {} vs {exact}",
                    s.phi,
                    s.x
                );
            }
        }
    }

    #[test]
    fn zero_compliance_keeps_slope_continuous() {
        let m = ArchModel::new(
            material(),
            ArchGeometry::stepped(30e-9, 1e-9, 1.0, &[0.4], &[10e-9, 20e-9]),
            vec![CrackSpec::new(0, 0.0)],
            ModelOptions::with_formulation(Formulation::Consistent),
        )
        .unwrap();
        let spectrum = natural_frequencies(&m, &SolverConfig::default_for(&m).unwrap()).unwrap();
        let shape = mode_shape(&m, spectrum.modes[0].omega, 50).unwrap();
        assert!(shape.slope_jump(&m, 0).abs() < 1e-8);
    }

    #[test]
    fn width_invariance() {
        for f in [Formulation::Reduced, Formulation::Consistent] {
            let build = |b: f64| {
                ArchModel::new(
                    material(),
                    ArchGeometry::stepped(30e-9, b, 1.0, &[0.4], &[10e-9, 20e-9]),
                    vec![CrackSpec::new(0, 0.4)],
                    ModelOptions::with_formulation(f),
                )
                .unwrap()
            };
            let (a, b) = (build(1e-9), build(3.7e-9));
            let cfg = SolverConfig::default_for(&a).unwrap();
            let wa = natural_frequencies(&a, &cfg).unwrap().omegas();
            let wb = natural_frequencies(&b, &cfg).unwrap().omegas();
            assert_eq!(wa.len(), wb.len());
            for (x, y) in wa.iter().zip(&wb) {
                assert!((x - y).abs() <= 1e-10 * x, "{f:?}: {x} vs {y}");
            }
        }
    }
}
