//! Per-segment characteristic roots and the analytic solution basis.
//!
//! In every constant-thickness segment the amplitude `X(φ)` satisfies
//! `X⁗ + a X″ − c X = 0`. With `λ² ∈ {μ², −ν²}` the solution space is
//! spanned by `cosh μφ, sinh μφ, cos νφ, sin νφ`.

use crate::model::{ArchModel, Formulation};

/// Coefficients of `λ⁴ + a λ² − c = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticCoefficients {
    pub a_coef: f64,
    pub c_coef: f64,
}

/// `a = 1 + ω² a₁`, `c = ω² c₁` for one segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyScale {
    pub a_per_omega2: f64,
    pub c_per_omega2: f64,
}

impl FrequencyScale {
    pub fn at(&self, omega: f64) -> QuarticCoefficients {
        let w2 = omega * omega;
        QuarticCoefficients {
            a_coef: 1.0 + w2 * self.a_per_omega2,
            c_coef: w2 * self.c_per_omega2,
        }
    }
}

pub fn frequency_scale(model: &ArchModel, segment: usize) -> FrequencyScale {
    let m = model.material();
    let g = model.geometry();
    let h = g.thickness(segment);
    let r2 = g.radius * g.radius;
    match model.formulation() {
        Formulation::Reduced => {
            // K = ω²ηρ(bh)R²/(E b h³/12)
            let k = 12.0 * m.nonlocal_eta * m.mass_density * r2 / (m.youngs_modulus * h * h);
            FrequencyScale {
                a_per_omega2: k,
                c_per_omega2: k,
            }
        }
        Formulation::Consistent => {
            let omega2 = 12.0 * m.mass_density * r2 * r2 / (m.youngs_modulus * h * h);
            FrequencyScale {
                a_per_omega2: m.nonlocal_eta / r2 * omega2,
                c_per_omega2: omega2,
            }
        }
    }
}

/// Quartic coefficients of segment `segment` at angular frequency `omega`.
pub fn frequency_parameter(model: &ArchModel, segment: usize, omega: f64) -> QuarticCoefficients {
    frequency_scale(model, segment).at(omega)
}

/// Hyperbolic (`mu`) and trigonometric (`nu`) wavenumbers per radian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentRoots {
    pub mu: f64,
    pub nu: f64,
}

pub fn characteristic_roots(q: QuarticCoefficients) -> SegmentRoots {
    let disc = (q.a_coef * q.a_coef + 4.0 * q.c_coef).sqrt();
    let nu2 = 0.5 * (q.a_coef + disc);
    // μ² = (−a + disc)/2 rewritten without cancellation
    let mu2 = if nu2 > 0.0 { q.c_coef / nu2 } else { 0.0 };
    SegmentRoots {
        mu: mu2.sqrt(),
        nu: nu2.sqrt(),
    }
}

/// `order`-th derivative of `[cosh μφ, sinh μφ, cos νφ, sin νφ]` at `phi`.
///
/// `phi` is measured from the start of the segment. For `mu == 0` the
/// hyperbolic pair is replaced by its limit `[1, φ]`.
pub fn basis_eval(roots: SegmentRoots, phi: f64, order: usize) -> [f64; 4] {
    assert!(
        order <= 3,
        "basis derivatives are available up to third order"
    );
    let SegmentRoots { mu, nu } = roots;
    let (ch, sh) = if mu == 0.0 {
        match order {
            0 => (1.0, phi),
            1 => (0.0, 1.0),
            _ => (0.0, 0.0),
        }
    } else {
        let (c, s) = ((mu * phi).cosh(), (mu * phi).sinh());
        let p = mu.powi(order as i32);
        if order.is_multiple_of(2) {
            (p * c, p * s)
        } else {
            (p * s, p * c)
        }
    };
    let (c, s) = ((nu * phi).cos(), (nu * phi).sin());
    let p = nu.powi(order as i32);
    let (tc, ts) = match order {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    };
    [ch, sh, p * tc, p * ts]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArchGeometry, Material, ModelOptions};
    use proptest::prelude::*;

    fn model(formulation: Formulation) -> ArchModel {
        ArchModel::new(
            Material {
                youngs_modulus: 7e11,
                poisson_ratio: 0.3,
                mass_density: 2300.0,
                nonlocal_eta: 1e-18,
            },
            ArchGeometry::uniform(30e-9, 1e-9, 1.0, 10e-9),
            vec![],
            ModelOptions::with_formulation(formulation),
        )
        .unwrap()
    }

    fn pair(k: f64) -> QuarticCoefficients {
        QuarticCoefficients {
            a_coef: 1.0 + k,
            c_coef: k,
        }
    }

    #[test]
    fn zero_frequency() {
        for f in [Formulation::Reduced, Formulation::Consistent] {
            let q = frequency_parameter(&model(f), 0, 0.0);
            assert_eq!(q, pair(0.0));
        }
    }

    #[test]
    fn reduced_parameter_value() {
        let q = frequency_parameter(&model(Formulation::Reduced), 0, 1e9);
        assert!(
            (q.c_coef - 3.5486e-7).abs() < 1e-4 * 3.5486e-7,
            "{}",
            q.c_coef
        );
        assert_eq!(q.a_coef, 1.0 + q.c_coef);
    }

    #[test]
    fn consistent_parameter_value() {
        let k = frequency_parameter(&model(Formulation::Reduced), 0, 1e9).c_coef;
        let q = frequency_parameter(&model(Formulation::Consistent), 0, 1e9);
        assert!(
            (q.c_coef - 3.1937e-4).abs() < 1e-4 * 3.1937e-4,
            "{}",
            q.c_coef
        );
        assert!((q.c_coef - k * 900.0).abs() < 1e-12 * q.c_coef);
        assert!((q.a_coef - (1.0 + 1e-18 / 9e-16 * q.c_coef)).abs() < 1e-15);
    }

    #[test]
    fn roots_at_zero() {
        let r = characteristic_roots(pair(0.0));
        assert_eq!(r, SegmentRoots { mu: 0.0, nu: 1.0 });
    }

    #[test]
    fn roots_at_k3() {
        let r = characteristic_roots(pair(3.0));
        // μ² = (√28 − 4)/2, ν² = (√28 + 4)/2
        assert!((r.mu - 0.803586).abs() < 1e-6, "{}", r.mu);
        assert!((r.nu - 2.155401).abs() < 1e-6, "{}", r.nu);
        assert!((r.mu * r.mu * r.nu * r.nu - 3.0).abs() < 1e-12);
        // discriminant 1 + 6K + K²
        let d: f64 = 1.0 + 18.0 + 9.0;
        assert!((r.nu * r.nu - 0.5 * (4.0 + d.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn basis_at_origin() {
        let r = SegmentRoots { mu: 0.7, nu: 1.9 };
        assert_eq!(basis_eval(r, 0.0, 0), [1.0, 0.0, 1.0, 0.0]);
        let b2 = basis_eval(r, 0.0, 2);
        let expected = [0.7f64.powi(2), 0.0, -1.9f64.powi(2), 0.0];
        for (got, want) in b2.iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn first_derivative_example() {
        let r = SegmentRoots {
            mu: 0.80363,
            nu: 2.15542,
        };
        let expected = [
            r.mu * (r.mu / 2.0).sinh(),
            r.mu * (r.mu / 2.0).cosh(),
            -r.nu * (r.nu / 2.0).sin(),
            r.nu * (r.nu / 2.0).cos(),
        ];
        let got = basis_eval(r, 0.5, 1);
        let h = 1e-5;
        let plus = basis_eval(r, 0.5 + h, 0);
        let minus = basis_eval(r, 0.5 - h, 0);
        for i in 0..4 {
            assert!((got[i] - expected[i]).abs() < 1e-14);
            assert!((got[i] - (plus[i] - minus[i]) / (2.0 * h)).abs() < 1e-8);
        }
    }

    #[test]
    fn degenerate_basis() {
        let r = SegmentRoots { mu: 0.0, nu: 1.0 };
        assert_eq!(basis_eval(r, 0.3, 0)[..2], [1.0, 0.3]);
        assert_eq!(basis_eval(r, 0.3, 1)[..2], [0.0, 1.0]);
        assert_eq!(basis_eval(r, 0.3, 3)[..2], [0.0, 0.0]);
    }

    proptest! {
        #[test]
        fn vieta_identities(omega in 1e8f64..5e13, consistent in any::<bool>()) {
            let f = if consistent { Formulation::Consistent } else { Formulation::Reduced };
            let q = frequency_parameter(&model(f), 0, omega);
            let r = characteristic_roots(q);
            let diff = r.nu * r.nu - r.mu * r.mu;
            prop_assert!((diff - q.a_coef).abs() <= 1e-12 * q.a_coef.max(1.0));
            let prod = r.mu * r.mu * r.nu * r.nu;
            prop_assert!((prod - q.c_coef).abs() <= 1e-12 * q.c_coef);
        }

        #[test]
        fn reduced_root_bounds(k in 0.0f64..1e6) {
            let r = characteristic_roots(pair(k));
            prop_assert!(r.mu >= 0.0 && r.mu < 1.0);
            prop_assert!(r.nu >= 1.0);
        }

        #[test]
        fn basis_solves_quartic(k in 0.01f64..50.0, phi in 0.0f64..1.5) {
            let q = pair(k);
            let r = characteristic_roots(q);
            let h = 1e-3;
            // fourth derivative by central differences of the third
            let d3p = basis_eval(r, phi + h, 3);
            let d3m = basis_eval(r, phi - h, 3);
            let d3p2 = basis_eval(r, phi + 2.0 * h, 3);
            let d3m2 = basis_eval(r, phi - 2.0 * h, 3);
            let d2 = basis_eval(r, phi, 2);
            let d0 = basis_eval(r, phi, 0);
            for i in 0..4 {
                let d4 = (-d3p2[i] + 8.0 * d3p[i] - 8.0 * d3m[i] + d3m2[i]) / (12.0 * h);
                let scale = d4.abs().max((q.a_coef * d2[i]).abs()).max((q.c_coef * d0[i]).abs()).max(1.0);
                let resid = d4 + q.a_coef * d2[i] - q.c_coef * d0[i];
                prop_assert!(resid.abs() <= 1e-9 * scale, "resid {resid} scale {scale}");
            }
        }

        #[test]
        fn derivative_consistency(k in 0.01f64..50.0, phi in 0.05f64..1.5, order in 1usize..4) {
            let r = characteristic_roots(pair(k));
            let h = 1e-4;
            let got = basis_eval(r, phi, order);
            let p = basis_eval(r, phi + h, order - 1);
            let m = basis_eval(r, phi - h, order - 1);
            let p2 = basis_eval(r, phi + 2.0 * h, order - 1);
            let m2 = basis_eval(r, phi - 2.0 * h, order - 1);
            for i in 0..4 {
                let fd = (-p2[i] + 8.0 * p[i] - 8.0 * m[i] + m2[i]) / (12.0 * h);
                let scale = got[i].abs().max(r.nu.powi(order as i32));
                prop_assert!((fd - got[i]).abs() <= 1e-7 * scale);
            }
        }
    }
}
