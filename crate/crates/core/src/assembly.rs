//! Homogeneous boundary/interface system in the basis amplitudes.
//!
//! Columns are ordered segment by segment, four amplitudes each, matching
//! [`basis_eval`]. Each segment's basis is expanded about the segment start.
//! Rows: two simply supported conditions at φ = 0, four conditions per
//! interface, two at φ = β.

use nalgebra::DMatrix;

use crate::basis::{basis_eval, characteristic_roots, frequency_parameter, SegmentRoots};
use crate::error::{Error, Result};
use crate::model::{ArchModel, Joint};

pub use crate::lu::log_det_sign;

/// Bending moment `M = a_m X″ + d_m X` of one segment at a fixed frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCoefficients {
    pub a_m: f64,
    pub d_m: f64,
}

impl MomentCoefficients {
    fn moment_row(&self, b0: &[f64; 4], b2: &[f64; 4]) -> [f64; 4] {
        std::array::from_fn(|i| self.a_m * b2[i] + self.d_m * b0[i])
    }
}

pub fn moment_coefficients(model: &ArchModel, segment: usize, omega: f64) -> MomentCoefficients {
    MomentCoefficients {
        a_m: model.bending_stiffness(segment),
        d_m: model.moment_inertia_coefficient(segment) * omega * omega,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Start,
    End,
}

pub fn segment_roots(model: &ArchModel, segment: usize, omega: f64) -> SegmentRoots {
    characteristic_roots(frequency_parameter(model, segment, omega))
}

/// `X = 0` and `X″ = 0` at one end, against the first or last segment's block.
///
/// Since `M = a_m X″ + d_m X` with `a_m ≠ 0`, the second row is equivalent to `M = 0`.
pub fn boundary_rows(model: &ArchModel, omega: f64, end: End) -> [[f64; 4]; 2] {
    let (segment, phi) = match end {
        End::Start => (0, 0.0),
        End::End => {
            let last = model.segment_count() - 1;
            (last, model.geometry().span(last))
        }
    };
    let roots = segment_roots(model, segment, omega);
    [basis_eval(roots, phi, 0), basis_eval(roots, phi, 2)]
}

/// Four interface conditions at interface `interface`; each row holds the
/// left segment's four entries followed by the right segment's.
///
/// 1. `X_L = X_R`
/// 2. `X_R′ − X_L′ = R·C_θ·M_L` (spring) or `M_L = 0` (hinge)
/// 3. `M_L = M_R`
/// 4. `M_L′ = M_R′`
pub fn interface_rows(model: &ArchModel, omega: f64, interface: usize) -> Result<[[f64; 8]; 4]> {
    let count = model.geometry().interface_count();
    if interface >= count {
        return Err(Error::InterfaceIndex {
            index: interface,
            count,
        });
    }
    let (l, r) = (interface, interface + 1);
    let phi_l = model.geometry().span(l);
    let roots_l = segment_roots(model, l, omega);
    let roots_r = segment_roots(model, r, omega);
    let bl: [[f64; 4]; 4] = std::array::from_fn(|k| basis_eval(roots_l, phi_l, k));
    let br: [[f64; 4]; 4] = std::array::from_fn(|k| basis_eval(roots_r, 0.0, k));
    let ml = moment_coefficients(model, l, omega);
    let mr = moment_coefficients(model, r, omega);
    let moment_l = ml.moment_row(&bl[0], &bl[2]);
    let moment_r = mr.moment_row(&br[0], &br[2]);
    let shear_l = ml.moment_row(&bl[1], &bl[3]);
    let shear_r = mr.moment_row(&br[1], &br[3]);

    let mut rows = [[0.0; 8]; 4];
    for i in 0..4 {
        rows[0][i] = bl[0][i];
        rows[0][4 + i] = -br[0][i];
        rows[2][i] = moment_l[i];
        rows[2][4 + i] = -moment_r[i];
        rows[3][i] = shear_l[i];
        rows[3][4 + i] = -shear_r[i];
    }
    match model.joint(interface) {
        Joint::Spring { compliance } => {
            let rc = model.geometry().radius * compliance;
            for i in 0..4 {
                rows[1][i] = -bl[1][i] - rc * moment_l[i];
                rows[1][4 + i] = br[1][i];
            }
        }
        Joint::Hinge => {
            rows[1][..4].copy_from_slice(&moment_l);
            if ml.d_m != 0.0 && mr.d_m != 0.0 {
                // d_R·M_L − d_L·M_R − d_L·d_R·(X_L − X_R): with M_L = 0 and
                // continuity this keeps only the curvature terms, which a
                // dominant inertia part would otherwise swamp
                for i in 0..4 {
                    rows[2][i] = mr.d_m * ml.a_m * bl[2][i];
                    rows[2][4 + i] = -ml.d_m * mr.a_m * br[2][i];
                }
            }
        }
    }
    Ok(rows)
}

/// Row-scaled characteristic matrix.
#[derive(Debug, Clone)]
pub struct CharacteristicMatrix {
    pub entries: DMatrix<f64>,
    /// Positive factors each raw row was divided by.
    pub row_scales: Vec<f64>,
}

impl CharacteristicMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }
}

pub fn assemble(model: &ArchModel, omega: f64) -> CharacteristicMatrix {
    let n = 4 * model.segment_count();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut row = 0;
    for r in boundary_rows(model, omega, End::Start) {
        a.view_mut((row, 0), (1, 4)).copy_from_slice(&r);
        row += 1;
    }
    for i in 0..model.geometry().interface_count() {
        // index is in range by construction
        for r in interface_rows(model, omega, i).expect("interface index") {
            a.view_mut((row, 4 * i), (1, 8)).copy_from_slice(&r);
            row += 1;
        }
    }
    for r in boundary_rows(model, omega, End::End) {
        a.view_mut((row, n - 4), (1, 4)).copy_from_slice(&r);
        row += 1;
    }
    let mut row_scales = Vec::with_capacity(n);
    for i in 0..n {
        let scale = a.row(i).amax();
        let scale = if scale > 0.0 { scale } else { 1.0 };
        a.row_mut(i).unscale_mut(scale);
        row_scales.push(scale);
    }
    CharacteristicMatrix {
        entries: a,
        row_scales,
    }
}

/// Sign and log magnitude of the scaled characteristic determinant at `omega`.
pub fn determinant(model: &ArchModel, omega: f64) -> (i8, f64) {
    log_det_sign(&assemble(model, omega).entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArchGeometry, CrackSpec, Formulation, Material, ModelOptions};
    use std::f64::consts::PI;

    fn material(eta: f64) -> Material {
        Material {
            youngs_modulus: 7e11,
            poisson_ratio: 0.3,
            mass_density: 2300.0,
            nonlocal_eta: eta,
        }
    }

    fn uniform(f: Formulation) -> ArchModel {
        ArchModel::new(
            material(1e-18),
            ArchGeometry::uniform(30e-9, 1e-9, 1.0, 10e-9),
            vec![],
            ModelOptions::with_formulation(f),
        )
        .unwrap()
    }

    fn stepped(f: Formulation, cracks: Vec<CrackSpec>) -> ArchModel {
        ArchModel::new(
            material(1e-18),
            ArchGeometry::stepped(30e-9, 1e-9, 1.0, &[0.4], &[10e-9, 20e-9]),
            cracks,
            ModelOptions::with_formulation(f),
        )
        .unwrap()
    }

    #[test]
    fn local_limit_has_no_inertia_moment() {
        let m = ArchModel::new(
            material(0.0),
            ArchGeometry::uniform(30e-9, 1e-9, 1.0, 10e-9),
            vec![],
            ModelOptions::default(),
        )
        .unwrap();
        let c = moment_coefficients(&m, 0, 1e12);
        assert_eq!(c.d_m, 0.0);
        assert!((c.a_m + 7e11 * 1e-9 * 1e-24 / 12.0).abs() < 1e-35);
    }

    #[test]
    fn stiffness_ratio_follows_thickness_cubed() {
        let m = stepped(Formulation::Reduced, vec![]);
        let (a0, a1) = (
            moment_coefficients(&m, 0, 1e12),
            moment_coefficients(&m, 1, 1e12),
        );
        assert!((a0.a_m / a1.a_m - 0.125).abs() < 1e-14);
    }

    #[test]
    fn formulations_differ_by_radius_squared() {
        let r = moment_coefficients(&uniform(Formulation::Reduced), 0, 1e12);
        let c = moment_coefficients(&uniform(Formulation::Consistent), 0, 1e12);
        assert!((r.a_m / c.a_m - 9e-16).abs() < 1e-28);
        assert_eq!(r.d_m, c.d_m);
    }

    #[test]
    fn start_rows_at_origin() {
        let m = uniform(Formulation::Reduced);
        let omega = 3e12;
        let roots = segment_roots(&m, 0, omega);
        let rows = boundary_rows(&m, omega, End::Start);
        assert_eq!(rows[0], [1.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            rows[1],
            [roots.mu * roots.mu, 0.0, -roots.nu * roots.nu, 0.0]
        );
    }

    #[test]
    fn single_segment_determinant_closed_form() {
        // With C₁ = C₃ = 0 eliminated, det ∝ sinh(μβ)·sin(νβ)·(μ²+ν²)².
        let m = uniform(Formulation::Reduced);
        for omega in [1e12, 3e12, 6e12, 9e12] {
            let roots = segment_roots(&m, 0, omega);
            let raw = {
                let s = boundary_rows(&m, omega, End::Start);
                let e = boundary_rows(&m, omega, End::End);
                DMatrix::from_row_slice(4, 4, &[s[0], s[1], e[0], e[1]].concat())
            };
            let (mu, nu) = (roots.mu, roots.nu);
            let expected = -(mu * mu + nu * nu).powi(2) * (mu * 1.0).sinh() * (nu * 1.0).sin();
            let det = raw.determinant();
            assert!(
                (det - expected).abs() < 1e-10 * expected.abs().max(1e-300),
                "{det} {expected}"
            );
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(
            assemble(&uniform(Formulation::Reduced), 1e12).dimension(),
            4
        );
        assert_eq!(
            assemble(&stepped(Formulation::Reduced, vec![]), 1e12).dimension(),
            8
        );
    }

    #[test]
    fn rows_scaled_to_unit_max() {
        let m = stepped(Formulation::Consistent, vec![CrackSpec::new(0, 0.5)]);
        let cm = assemble(&m, 1e11);
        for i in 0..cm.dimension() {
            assert!((cm.entries.row(i).amax() - 1.0).abs() < 1e-15);
            assert!(cm.row_scales[i] > 0.0);
        }
    }

    #[test]
    fn scaling_preserves_sign() {
        let m = stepped(Formulation::Consistent, vec![CrackSpec::new(0, 0.5)]);
        for omega in [5e10, 1e11, 3e11, 7e11] {
            let raw = {
                let cm = assemble(&m, omega);
                let mut e = cm.entries.clone();
                for (i, s) in cm.row_scales.iter().enumerate() {
                    e.row_mut(i).scale_mut(*s);
                }
                e
            };
            assert_eq!(log_det_sign(&raw).0, determinant(&m, omega).0);
        }
    }

    #[test]
    fn interface_index_checked() {
        let m = stepped(Formulation::Reduced, vec![]);
        assert!(interface_rows(&m, 1e12, 0).is_ok());
        assert!(matches!(
            interface_rows(&m, 1e12, 1),
            Err(Error::InterfaceIndex { index: 1, count: 1 })
        ));
    }

    #[test]
    fn hinge_row_replaces_slope_row() {
        let m = stepped(Formulation::Consistent, vec![CrackSpec::hinge(0)]);
        let omega = 1e11;
        let rows = interface_rows(&m, omega, 0).unwrap();
        assert_eq!(rows[1][4..], [0.0; 4]);
        // remaining moment row pairs the two curvatures only
        let roots = segment_roots(&m, 0, omega);
        let b2 = basis_eval(roots, m.geometry().span(0), 2);
        let ratio = rows[2][0] / b2[0];
        for i in 0..4 {
            assert!(
                (rows[2][i] - ratio * b2[i]).abs() < 1e-12 * ratio.abs() * b2[i].abs().max(1.0)
            );
        }
    }

    #[test]
    fn no_zero_rows() {
        let m = stepped(Formulation::Reduced, vec![CrackSpec::new(0, 0.3)]);
        for omega in [1e9, 1e11, 1e13] {
            let cm = assemble(&m, omega);
            assert!(cm.entries.iter().all(|v| v.is_finite()));
            assert!(cm.row_scales.iter().all(|&s| s > 0.0));
        }
    }

    #[test]
    fn uniform_determinant_vanishes_at_closed_form_root() {
        let m = uniform(Formulation::Reduced);
        let k2 = PI * PI;
        let kn = k2 * (k2 - 1.0) / (k2 + 1.0);
        let c1 = crate::basis::frequency_scale(&m, 0).c_per_omega2;
        let omega = (kn / c1).sqrt();
        let below = determinant(&m, omega * (1.0 - 1e-6)).0;
        let above = determinant(&m, omega * (1.0 + 1e-6)).0;
        assert_eq!(below * above, -1);
    }
}
