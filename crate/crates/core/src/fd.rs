//! Finite-difference cross-check of the determinant method.
//!
//! Each segment gets its own uniform grid, including both interface nodes,
//! with one ghost node past each end. Second-order central differences of
//! `X⁗ + X″ = ω²(c₁ X − a₁ X″)` at interior nodes, plus the boundary and
//! interface conditions as extra rows, give a square pencil `A x = ω² B x`.
//! Condition rows carry the `ω²`-dependent part of the moment in `B`.
//!
//! The smallest eigenvalues are found by orthogonal (simultaneous) inverse
//! iteration on `(A − σB)⁻¹ B` with a dense LU of the shifted matrix and a
//! Rayleigh–Ritz step on the projected block each sweep.

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};

use crate::assembly::moment_coefficients;
use crate::basis::frequency_scale;
use crate::error::{Error, Result};
use crate::model::{ArchModel, Joint};

pub const MIN_INTERVALS: usize = 8;
pub const DEFAULT_MAX_ITERATIONS: usize = 5000;
/// Relative change between sweeps; the near-defective zero block of a hinge
/// leaves Ritz values jittering at a few 1e-9.
const RITZ_TOL: f64 = 1e-8;
const GUARD_VECTORS: usize = 8;
const SCHUR_ITERATIONS: usize = 500;
/// Shift of the inverse iteration, in pencil units.
const ORACLE_SHIFT: f64 = -1.0;
/// Absolute lower bound on reported eigenvalues, in pencil units.
const SPURIOUS_FLOOR: f64 = 1e-9;

/// Pencil `stiffness · x = (ω²/omega2_scale) · inertia · x`.
#[derive(Debug, Clone)]
pub struct DiscreteOperatorPair {
    pub stiffness: DMatrix<f64>,
    pub inertia: DMatrix<f64>,
    /// Eigenvalues of the pencil are `ω²/omega2_scale`.
    pub omega2_scale: f64,
    /// Intervals per segment.
    pub intervals: Vec<usize>,
}

impl DiscreteOperatorPair {
    pub fn dimension(&self) -> usize {
        self.stiffness.nrows()
    }
}

/// One linear equation `Σ a·x = λ Σ b·x` touching a few unknowns.
#[derive(Default)]
struct Row {
    terms: Vec<(usize, f64, f64)>,
}

impl Row {
    fn stiff(&mut self, stencil: &[(usize, f64)], scale: f64) -> &mut Self {
        self.terms
            .extend(stencil.iter().map(|&(c, w)| (c, scale * w, 0.0)));
        self
    }

    fn inert(&mut self, stencil: &[(usize, f64)], scale: f64) -> &mut Self {
        self.terms
            .extend(stencil.iter().map(|&(c, w)| (c, 0.0, scale * w)));
        self
    }
}

/// Weights for the `order`-th derivative at 0 from samples at `offsets` (unit spacing).
fn fd_weights(offsets: &[f64], order: usize) -> Vec<f64> {
    let n = offsets.len();
    let v = DMatrix::from_fn(n, n, |m, k| offsets[k].powi(m as i32));
    let mut rhs = DVector::zeros(n);
    rhs[order] = (1..=order).product::<usize>() as f64;
    let w: DVector<f64> = v.lu().solve(&rhs).expect("distinct stencil offsets");
    w.iter().copied().collect()
}

struct Grid {
    base: Vec<usize>,
    intervals: Vec<usize>,
    steps: Vec<f64>,
}

impl Grid {
    /// Column of node `i` (−1 ..= N+1) of segment `j`.
    fn col(&self, j: usize, i: isize) -> usize {
        (self.base[j] as isize + i + 1) as usize
    }

    fn stencil(&self, j: usize, node: isize, offsets: &[isize], order: usize) -> Vec<(usize, f64)> {
        let off: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
        let h = self.steps[j].powi(order as i32);
        fd_weights(&off, order)
            .into_iter()
            .zip(offsets)
            .map(|(w, &o)| (self.col(j, node + o), w / h))
            .collect()
    }

    /// Derivative of `order` at the start (`at_end = false`) or end node of segment `j`.
    fn end_stencil(&self, j: usize, at_end: bool, order: usize) -> Vec<(usize, f64)> {
        let n = self.intervals[j] as isize;
        let node = if at_end { n } else { 0 };
        let offsets: &[isize] = match (order, at_end) {
            (0, _) => &[0],
            (1, _) | (2, _) => &[-1, 0, 1],
            (_, true) => &[-3, -2, -1, 0, 1],
            (_, false) => &[-1, 0, 1, 2, 3],
        };
        self.stencil(j, node, offsets, order)
    }
}

/// Discretizes `model` with about `nodes_per_radian` grid intervals per radian in each segment.
pub fn discretize(model: &ArchModel, nodes_per_radian: usize) -> Result<DiscreteOperatorPair> {
    let geometry = model.geometry();
    let segments = model.segment_count();
    let mut base = Vec::with_capacity(segments);
    let mut intervals = Vec::with_capacity(segments);
    let mut steps = Vec::with_capacity(segments);
    let mut total = 0;
    for j in 0..segments {
        let span = geometry.span(j);
        let n = (span * nodes_per_radian as f64).round() as usize;
        if n < MIN_INTERVALS {
            return Err(Error::CoarseGrid {
                segment: j,
                intervals: n,
            });
        }
        base.push(total);
        intervals.push(n);
        steps.push(span / n as f64);
        total += n + 3;
    }
    let grid = Grid {
        base,
        intervals,
        steps,
    };

    let scales: Vec<_> = (0..segments).map(|j| frequency_scale(model, j)).collect();
    let c_max = scales.iter().map(|s| s.c_per_omega2).fold(0.0, f64::max);
    if !(c_max > 0.0) {
        return Err(Error::NoInertia);
    }
    let omega2_scale = 1.0 / c_max;

    let mut rows: Vec<Row> = Vec::with_capacity(total);
    for j in 0..segments {
        let (a1, c1) = (
            scales[j].a_per_omega2 * omega2_scale,
            scales[j].c_per_omega2 * omega2_scale,
        );
        for i in 1..grid.intervals[j] as isize {
            let d4 = grid.stencil(j, i, &[-2, -1, 0, 1, 2], 4);
            let d2 = grid.stencil(j, i, &[-1, 0, 1], 2);
            let mut row = Row::default();
            row.stiff(&d4, 1.0)
                .stiff(&d2, 1.0)
                .inert(&[(grid.col(j, i), 1.0)], c1)
                .inert(&d2, -a1);
            rows.push(row);
        }
    }

    // M = a_m X″ + λ d₁ X with λ in units of omega2_scale
    let moment = |j: usize| {
        let m = moment_coefficients(model, j, 1.0);
        (m.a_m, m.d_m * omega2_scale)
    };
    let last = segments - 1;
    for (j, at_end) in [(0, false), (last, true)] {
        rows.push({
            let mut r = Row::default();
            r.stiff(&grid.end_stencil(j, at_end, 0), 1.0);
            r
        });
        rows.push({
            let mut r = Row::default();
            r.stiff(&grid.end_stencil(j, at_end, 2), 1.0);
            r
        });
    }
    for i in 0..geometry.interface_count() {
        let (l, r) = (i, i + 1);
        let s = |j: usize, order: usize| grid.end_stencil(j, j == l, order);
        let (al, dl) = moment(l);
        let (ar, dr) = moment(r);

        let mut continuity = Row::default();
        continuity.stiff(&s(l, 0), 1.0).stiff(&s(r, 0), -1.0);
        rows.push(continuity);

        let mut rotation = Row::default();
        match model.joint(i) {
            Joint::Spring { compliance } => {
                let rc = geometry.radius * compliance;
                rotation
                    .stiff(&s(r, 1), 1.0)
                    .stiff(&s(l, 1), -1.0)
                    .stiff(&s(l, 2), -rc * al)
                    .inert(&s(l, 0), rc * dl);
            }
            Joint::Hinge => {
                rotation.stiff(&s(l, 2), al).inert(&s(l, 0), -dl);
            }
        }
        rows.push(rotation);

        let mut bending = Row::default();
        if matches!(model.joint(i), Joint::Hinge) && dl != 0.0 && dr != 0.0 {
            // same combination as the determinant rows
            bending.stiff(&s(l, 2), dr * al).stiff(&s(r, 2), -dl * ar);
        } else {
            bending
                .stiff(&s(l, 2), al)
                .inert(&s(l, 0), -dl)
                .stiff(&s(r, 2), -ar)
                .inert(&s(r, 0), dr);
        }
        rows.push(bending);

        let mut shear = Row::default();
        shear
            .stiff(&s(l, 3), al)
            .inert(&s(l, 1), -dl)
            .stiff(&s(r, 3), -ar)
            .inert(&s(r, 1), dr);
        rows.push(shear);
    }
    debug_assert_eq!(rows.len(), total);

    let mut stiffness = DMatrix::<f64>::zeros(total, total);
    let mut inertia = DMatrix::<f64>::zeros(total, total);
    for (k, row) in rows.iter().enumerate() {
        for &(c, a, b) in &row.terms {
            stiffness[(k, c)] += a;
            inertia[(k, c)] += b;
        }
        let scale = stiffness.row(k).amax().max(inertia.row(k).amax());
        if scale > 0.0 {
            stiffness.row_mut(k).unscale_mut(scale);
            inertia.row_mut(k).unscale_mut(scale);
        }
    }
    Ok(DiscreteOperatorPair {
        stiffness,
        inertia,
        omega2_scale,
        intervals: grid.intervals,
    })
}

/// Smallest `count` generalized eigenvalues above `floor`, in pencil units.
pub fn pencil_eigenvalues(
    stiffness: &DMatrix<f64>,
    inertia: &DMatrix<f64>,
    count: usize,
    shift: f64,
    floor: f64,
    max_iterations: usize,
) -> Result<Vec<f64>> {
    let n = stiffness.nrows();
    let p = (count + GUARD_VECTORS).min(n);
    let shifted = stiffness - inertia * shift;
    let lu = shifted.lu();
    if lu.u().diagonal().iter().any(|d| *d == 0.0) {
        return Err(Error::Singular);
    }
    let apply = |q: &DMatrix<f64>| -> Result<DMatrix<f64>> {
        lu.solve(&(inertia * q)).ok_or(Error::Singular)
    };
    let start = DMatrix::from_fn(n, p, |i, k| {
        ((i + 1) as f64 * (k as f64 + 0.618)).sin() + 0.01 * (k == i % p) as u8 as f64
    });
    let mut q = start.qr().q();
    let mut previous: Vec<f64> = Vec::new();
    for _ in 0..max_iterations {
        let z = apply(&q)?;
        let h = q.transpose() * &z;
        let mut lambdas: Vec<f64> = ritz_values(h)
            .into_iter()
            .filter(|t| *t > 0.0)
            .map(|t| shift + 1.0 / t)
            .filter(|l| *l > floor)
            .collect();
        lambdas.sort_by(f64::total_cmp);
        lambdas.truncate(count);
        if lambdas.len() == count
            && previous.len() == count
            && lambdas
                .iter()
                .zip(&previous)
                .all(|(a, b)| (a - b).abs() <= RITZ_TOL * a.abs())
        {
            return Ok(lambdas);
        }
        previous = lambdas;
        q = z.qr().q();
    }
    Err(Error::NoConvergence(max_iterations))
}

/// Real eigenvalues of the small projected matrix, or its diagonal when the
/// Schur iteration stalls (e.g. on an exact multiple of the identity).
fn ritz_values(h: DMatrix<f64>) -> Vec<f64> {
    let diagonal: Vec<f64> = h.diagonal().iter().copied().collect();
    match Schur::try_new(h, f64::EPSILON, SCHUR_ITERATIONS) {
        Some(schur) => schur
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() <= 1e-8 * z.re.abs())
            .map(|z| z.re)
            .collect(),
        None => diagonal,
    }
}

/// Lowest `count` natural frequencies (rad/s) of the discretized model
/// at or above `omega_min`.
///
/// Moment rows whose `ω²` part dominates leave `A` nearly singular, and a
/// hinge admits a zero-frequency mechanism; both show up as eigenvalues at
/// the roundoff level. The negative shift keeps the factorization well
/// conditioned and the lower bound discards them, as the determinant scan does.
pub fn oracle_frequencies(
    pair: &DiscreteOperatorPair,
    count: usize,
    omega_min: f64,
) -> Result<Vec<f64>> {
    let floor = (omega_min * omega_min / pair.omega2_scale).max(SPURIOUS_FLOOR);
    let solve = |shift| {
        pencil_eigenvalues(
            &pair.stiffness,
            &pair.inertia,
            count,
            shift,
            floor,
            DEFAULT_MAX_ITERATIONS,
        )
    };
    let lambdas = match solve(ORACLE_SHIFT) {
        Err(Error::Singular) => solve(2.0 * ORACLE_SHIFT)?,
        other => other?,
    };
    Ok(lambdas
        .into_iter()
        .map(|l| (l * pair.omega2_scale).sqrt())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ArchGeometry, CrackSpec, Formulation, Material, ModelOptions};
    use crate::solver::natural_frequencies;
    use crate::SolverConfig;
    use std::f64::consts::PI;

    fn material() -> Material {
        Material {
            youngs_modulus: 7e11,
            poisson_ratio: 0.3,
            mass_density: 2300.0,
            nonlocal_eta: 1e-18,
        }
    }

    fn uniform(f: Formulation) -> ArchModel {
        ArchModel::new(
            material(),
            ArchGeometry::uniform(30e-9, 1e-9, 1.0, 10e-9),
            vec![],
            ModelOptions::with_formulation(f),
        )
        .unwrap()
    }

    fn closed_form(model: &ArchModel, n: usize) -> f64 {
        let k2 = (n as f64 * PI / model.geometry().central_angle).powi(2);
        let s = frequency_scale(model, 0);
        ((k2 * k2 - k2) / (s.c_per_omega2 + k2 * s.a_per_omega2)).sqrt()
    }

    #[test]
    fn weights_reproduce_classic_stencils() {
        let w = fd_weights(&[-2.0, -1.0, 0.0, 1.0, 2.0], 4);
        for (a, b) in w.iter().zip([1.0, -4.0, 6.0, -4.0, 1.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        let w = fd_weights(&[-1.0, 0.0, 1.0], 1);
        assert!((w[0] + 0.5).abs() < 1e-14 && w[1].abs() < 1e-14 && (w[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn identity_pencil() {
        let a = DMatrix::<f64>::identity(12, 12);
        let l = pencil_eigenvalues(&a, &a, 3, 0.0, 0.0, 50).unwrap();
        assert!(l.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn pencil_scaling_invariant() {
        let pair = discretize(&uniform(Formulation::Reduced), 100).unwrap();
        let scaled = DiscreteOperatorPair {
            stiffness: &pair.stiffness * 10.0,
            inertia: &pair.inertia * 10.0,
            ..pair.clone()
        };
        let a = oracle_frequencies(&pair, 3, 0.0).unwrap();
        let b = oracle_frequencies(&scaled, 3, 0.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-8 * x, "{a:?} {b:?}");
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(matches!(
            discretize(&uniform(Formulation::Reduced), 5),
            Err(Error::CoarseGrid {
                segment: 0,
                intervals: 5
            })
        ));
    }

    #[test]
    fn uniform_first_mode_at_200() {
        for f in [Formulation::Reduced, Formulation::Consistent] {
            let m = uniform(f);
            let w = oracle_frequencies(&discretize(&m, 200).unwrap(), 1, 0.0).unwrap();
            let exact = closed_form(&m, 1);
            assert!(
                (w[0] - exact).abs() < 1e-3 * exact,
                "{f:?}: {} vs {exact}",
                w[0]
            );
        }
    }

    #[test]
    fn second_order_convergence() {
        let m = uniform(Formulation::Reduced);
        let exact = closed_form(&m, 1);
        let err =
            |n| (oracle_frequencies(&discretize(&m, n).unwrap(), 1, 0.0).unwrap()[0] - exact).abs();
        let ratio = err(100) / err(200);
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn stepped_matches_determinant() {
        for f in [Formulation::Reduced, Formulation::Consistent] {
            for cracks in [
                vec![],
                vec![CrackSpec::new(0, 0.5)],
                vec![CrackSpec::hinge(0)],
            ] {
                let m = ArchModel::new(
                    material(),
                    ArchGeometry::stepped(30e-9, 1e-9, 1.0, &[0.4], &[10e-9, 20e-9]),
                    cracks.clone(),
                    ModelOptions::with_formulation(f),
                )
                .unwrap();
                let config = SolverConfig::default_for(&m).unwrap();
                let det = natural_frequencies(&m, &config).unwrap().omegas();
                let pair = discretize(&m, 400).unwrap();
                let fd = oracle_frequencies(&pair, 3, config.omega_min).unwrap();
                assert!(det.len() >= 2);
                for (d, o) in det.iter().zip(&fd) {
                    assert!((d - o).abs() < 1e-3 * d, "{f:?} {cracks:?}: {d} vs {o}");
                }
            }
        }
    }
}
