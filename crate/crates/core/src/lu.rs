//! Dense LU factorization with partial pivoting.

use nalgebra::{DMatrix, DVector};

/// Pivots below this magnitude make the determinant sign 0.
pub const PIVOT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DMatrix<f64>,
    perm: Vec<usize>,
    parity: i8,
}

impl LuFactors {
    pub fn factor(matrix: &DMatrix<f64>) -> Self {
        assert!(matrix.is_square(), "LU requires a square matrix");
        let n = matrix.nrows();
        let mut lu = matrix.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = 1i8;
        for k in 0..n {
            let (p, _) = (k..n).fold((k, -1.0), |best, i| {
                let v = lu[(i, k)].abs();
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            });
            if p != k {
                lu.swap_rows(p, k);
                perm.swap(p, k);
                parity = -parity;
            }
            let pivot = lu[(k, k)];
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= factor * lu[(k, j)];
                    }
                }
            }
        }
        Self { lu, perm, parity }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Sign of the determinant and the natural log of its magnitude.
    pub fn log_det_sign(&self) -> (i8, f64) {
        let mut sign = self.parity;
        let mut log_mag = 0.0;
        for k in 0..self.dim() {
            let d = self.lu[(k, k)];
            if d.abs() < PIVOT_FLOOR {
                return (0, f64::NEG_INFINITY);
            }
            if d < 0.0 {
                sign = -sign;
            }
            log_mag += d.abs().ln();
        }
        (sign, log_mag)
    }

    /// Smallest pivot magnitude.
    pub fn min_pivot(&self) -> f64 {
        (0..self.dim())
            .map(|k| self.lu[(k, k)].abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves `A x = b`, replacing zero pivots by `floor` so the solve stays finite.
    pub fn solve_regularized(&self, b: &DVector<f64>, floor: f64) -> DVector<f64> {
        let n = self.dim();
        let mut x = DVector::from_fn(n, |i, _| b[self.perm[i]]);
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            let d = self.lu[(i, i)];
            let d = if d.abs() < floor {
                if d < 0.0 {
                    -floor
                } else {
                    floor
                }
            } else {
                d
            };
            x[i] = s / d;
        }
        x
    }
}

/// `(sign, ln|det|)` of a square matrix; sign is 0 when a pivot underflows.
pub fn log_det_sign(matrix: &DMatrix<f64>) -> (i8, f64) {
    LuFactors::factor(matrix).log_det_sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        assert_eq!(log_det_sign(&DMatrix::identity(4, 4)), (1, 0.0));
    }

    #[test]
    fn row_swapped_identity() {
        let mut m = DMatrix::<f64>::identity(4, 4);
        m.swap_rows(0, 2);
        assert_eq!(log_det_sign(&m), (-1, 0.0));
    }

    #[test]
    fn singular() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(log_det_sign(&m).0, 0);
    }

    #[test]
    fn matches_nalgebra_determinant() {
        let m = DMatrix::from_fn(6, 6, |i, j| {
            ((i * 7 + j * 3) % 5) as f64 - 1.7 + (i == j) as u8 as f64
        });
        let (s, l) = log_det_sign(&m);
        let d = m.clone().determinant();
        assert_eq!(s as f64, d.signum());
        assert!((l - d.abs().ln()).abs() < 1e-12);
    }

    #[test]
    fn solve_roundtrip() {
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0]);
        let b = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let x = LuFactors::factor(&m).solve_regularized(&b, 0.0);
        assert!((&m * x - b).norm() < 1e-14);
    }
}
