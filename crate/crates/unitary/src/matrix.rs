//! Dense complex matrices, the operator norm and the unitary polar factor.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Tolerances, UnitaryError};

/// A square complex matrix. Serialized as rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct UMatrix {
    m: DMatrix<Complex64>,
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for UMatrix {
    type Error = UnitaryError;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> Result<Self, Self::Error> {
        let n = rows.len();
        if n == 0 {
            return Err(UnitaryError::Empty);
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(UnitaryError::DimensionMismatch(n, r.len()));
        }
        let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(UnitaryError::NonFinite);
        }
        Ok(UMatrix { m })
    }
}

impl From<UMatrix> for Vec<Vec<[f64; 2]>> {
    fn from(u: UMatrix) -> Self {
        let n = u.dim();
        (0..n).map(|i| (0..n).map(|j| [u.m[(i, j)].re, u.m[(i, j)].im]).collect()).collect()
    }
}

impl UMatrix {
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self, UnitaryError> {
        if m.nrows() != m.ncols() {
            return Err(UnitaryError::DimensionMismatch(m.nrows(), m.ncols()));
        }
        if m.nrows() == 0 {
            return Err(UnitaryError::Empty);
        }
        Ok(UMatrix { m })
    }

    pub fn identity(n: usize) -> Self {
        UMatrix { m: DMatrix::identity(n, n) }
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        UMatrix {
            m: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)),
        }
    }

    /// Real rotation by `theta` in the plane of coordinates `i`, `j`.
    pub fn rotation(n: usize, i: usize, j: usize, theta: f64) -> Self {
        let mut m = DMatrix::identity(n, n);
        let (s, c) = theta.sin_cos();
        m[(i, i)] = Complex64::new(c, 0.0);
        m[(j, j)] = Complex64::new(c, 0.0);
        m[(i, j)] = Complex64::new(-s, 0.0);
        m[(j, i)] = Complex64::new(s, 0.0);
        UMatrix { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        UMatrix { m: self.m.adjoint() }
    }

    pub fn inverse(&self) -> Result<Self, UnitaryError> {
        self.m.clone().try_inverse().map(|m| UMatrix { m }).ok_or(UnitaryError::Singular)
    }

    pub fn mul(&self, other: &UMatrix) -> Result<Self, UnitaryError> {
        self.same_dim(other)?;
        Ok(UMatrix { m: &self.m * &other.m })
    }

    pub fn sub(&self, other: &UMatrix) -> Result<Self, UnitaryError> {
        self.same_dim(other)?;
        Ok(UMatrix { m: &self.m - &other.m })
    }

    /// `u·self·u⁻¹`.
    pub fn conjugate_by(&self, u: &UMatrix) -> Result<Self, UnitaryError> {
        u.mul(self)?.mul(&u.inverse()?)
    }

    /// Operator-norm distance.
    pub fn distance(&self, other: &UMatrix) -> Result<f64, UnitaryError> {
        op_norm(&self.sub(other)?)
    }

    /// `‖A*A − I‖_op`.
    pub fn unitarity_defect(&self) -> Result<f64, UnitaryError> {
        op_norm(&self.adjoint().mul(self)?.sub(&UMatrix::identity(self.dim()))?)
    }

    pub fn is_unitary(&self, tol: f64) -> Result<bool, UnitaryError> {
        Ok(self.unitarity_defect()? <= tol)
    }

    fn same_dim(&self, other: &UMatrix) -> Result<(), UnitaryError> {
        if self.dim() != other.dim() {
            return Err(UnitaryError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

const NORM_TOL: f64 = 1e-10;
const NORM_ROUNDS: usize = 64;

/// Largest singular value: power iteration on `A*A`, accelerated by repeated
/// squaring and started from the largest column of the current power.
pub fn op_norm(a: &UMatrix) -> Result<f64, UnitaryError> {
    let b = a.m.adjoint() * &a.m;
    let scale = b.norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut p = &b / Complex64::new(scale, 0.0);
    for _ in 0..NORM_ROUNDS {
        let col = (0..p.ncols())
            .max_by(|&x, &y| p.column(x).norm().total_cmp(&p.column(y).norm()))
            .expect("nonempty");
        let v = p.column(col).into_owned();
        let v = &v / Complex64::new(v.norm(), 0.0);
        let bv = &b * &v;
        let lambda = v.dotc(&bv).re;
        let residual = (&bv - &v * Complex64::new(lambda, 0.0)).norm();
        if residual <= NORM_TOL * lambda.abs().max(f64::MIN_POSITIVE) {
            return Ok(lambda.max(0.0).sqrt());
        }
        let sq = &p * &p;
        let n = sq.norm();
        if n == 0.0 || !n.is_finite() {
            break;
        }
        p = sq / Complex64::new(n, 0.0);
    }
    Err(UnitaryError::NoConvergence(NORM_ROUNDS))
}

/// Unitary factor of the polar decomposition by the Newton iteration
/// `X ← (X + X⁻*)/2`.
pub fn polar_unitary(a: &UMatrix, tol: &Tolerances) -> Result<UMatrix, UnitaryError> {
    let mut x = a.m.clone();
    let half = Complex64::new(0.5, 0.0);
    for _ in 0..tol.max_iterations {
        let inv = x.clone().try_inverse().ok_or(UnitaryError::Singular)?;
        let next = (&x + inv.adjoint()) * half;
        let step = (&next - &x).norm();
        x = next;
        if step <= tol.iteration {
            let u = UMatrix { m: x };
            let dev = a.distance(&UMatrix::identity(a.dim()))?;
            let moved = u.distance(&UMatrix::identity(a.dim()))?;
            if moved > 2.0 * dev + tol.assertion {
                return Err(UnitaryError::BoundViolated {
                    measured: moved,
                    bound: 2.0 * dev,
                });
            }
            return Ok(u);
        }
    }
    Err(UnitaryError::NoConvergence(tol.max_iterations))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        assert!((op_norm(&UMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-12);
        let d = UMatrix::diagonal(&[Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((op_norm(&d).unwrap() - 3.0).abs() < 1e-12);
        for theta in [0.01, 0.5, 2.0, 3.1] {
            let r = UMatrix::rotation(2, 0, 1, theta).sub(&UMatrix::identity(2)).unwrap();
            assert!((op_norm(&r).unwrap() - 2.0 * (theta / 2.0).sin().abs()).abs() < 1e-8);
        }
        let z = UMatrix::from_matrix(DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(op_norm(&z).unwrap(), 0.0);
    }

    #[test]
    fn polar_of_positive_is_identity() {
        let tol = Tolerances::default();
        let a = UMatrix::diagonal(&[Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0)]);
        assert!(polar_unitary(&a, &tol).unwrap().distance(&UMatrix::identity(2)).unwrap() < 1e-12);
        let z = UMatrix::from_matrix(DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(polar_unitary(&z, &tol), Err(UnitaryError::Singular));
    }

    #[test]
    fn json_shape() {
        let u = UMatrix::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]);
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, "[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.0,-1.0]]]");
        assert_eq!(serde_json::from_str::<UMatrix>(&s).unwrap(), u);
        assert!(serde_json::from_str::<UMatrix>("[[[1.0,0.0]],[]]").is_err());
    }
}
