//! Unitary representations of finite groups and the averaging conjugator.

use stabilis_core::group::FiniteGroup;

use crate::matrix::{op_norm, polar_unitary, UMatrix};
use crate::{Tolerances, UnitaryError};

/// A unitary representation, one matrix per group element.
#[derive(Debug, Clone, PartialEq)]
pub struct URep {
    group: FiniteGroup,
    images: Vec<UMatrix>,
}

impl URep {
    /// Checks unitarity and multiplicativity within `tol.assertion`.
    pub fn new(group: &FiniteGroup, images: Vec<UMatrix>, tol: &Tolerances) -> Result<Self, UnitaryError> {
        if images.len() != group.order() {
            return Err(UnitaryError::LengthMismatch(group.order(), images.len()));
        }
        let n = images[0].dim();
        if let Some(m) = images.iter().find(|m| m.dim() != n) {
            return Err(UnitaryError::DimensionMismatch(n, m.dim()));
        }
        for m in &images {
            let d = m.unitarity_defect()?;
            if d > tol.assertion {
                return Err(UnitaryError::NotUnitary(d));
            }
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                let d = images[a].mul(&images[b])?.distance(&images[group.mul(a, b)])?;
                if d > tol.assertion {
                    return Err(UnitaryError::NotMultiplicative(d));
                }
            }
        }
        Ok(URep {
            group: group.clone(),
            images,
        })
    }

    /// Extends generator images along the group's words.
    pub fn from_generator_images(group: &FiniteGroup, gens: &[UMatrix], tol: &Tolerances) -> Result<Self, UnitaryError> {
        if gens.len() != group.generators().len() {
            return Err(UnitaryError::LengthMismatch(group.generators().len(), gens.len()));
        }
        let n = match gens.first() {
            Some(g) => g.dim(),
            None => return Err(UnitaryError::Empty),
        };
        let images = (0..group.order())
            .map(|g| {
                group
                    .word(g)
                    .iter()
                    .try_fold(UMatrix::identity(n), |acc, &i| acc.mul(&gens[i]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(group, images, tol)
    }

    /// The trivial representation on `ℂⁿ`.
    pub fn trivial(group: &FiniteGroup, n: usize) -> Self {
        URep {
            group: group.clone(),
            images: vec![UMatrix::identity(n); group.order()],
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.images[0].dim()
    }

    pub fn images(&self) -> &[UMatrix] {
        &self.images
    }

    pub fn image(&self, g: usize) -> &UMatrix {
        &self.images[g]
    }

    /// `h ↦ self(embed[h])` as a representation of `sub`.
    pub fn pull_back(&self, sub: &FiniteGroup, embed: &[usize]) -> Result<URep, UnitaryError> {
        if embed.len() != sub.order() {
            return Err(UnitaryError::LengthMismatch(sub.order(), embed.len()));
        }
        Ok(URep {
            group: sub.clone(),
            images: embed.iter().map(|&g| self.images[g].clone()).collect(),
        })
    }

    /// `g ↦ u·self(g)·u⁻¹`.
    pub fn conjugate_by(&self, u: &UMatrix) -> Result<URep, UnitaryError> {
        let inv = u.inverse()?;
        Ok(URep {
            group: self.group.clone(),
            images: self
                .images
                .iter()
                .map(|m| u.mul(m)?.mul(&inv))
                .collect::<Result<Vec<_>, _>>()?,
        })
    }

    fn check_pair(&self, other: &URep) -> Result<(), UnitaryError> {
        if self.group != other.group {
            return Err(UnitaryError::GroupMismatch);
        }
        if self.dim() != other.dim() {
            return Err(UnitaryError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }
}

/// `max_h ‖φ₁(h) − φ₂(h)‖_op`.
pub fn rep_distance(phi1: &URep, phi2: &URep) -> Result<f64, UnitaryError> {
    phi1.check_pair(phi2)?;
    phi1.images
        .iter()
        .zip(&phi2.images)
        .try_fold(0.0f64, |acc, (a, b)| Ok(acc.max(a.distance(b)?)))
}

/// `a = (1/|H|) Σ φ₁(h)·φ₂(h)⁻¹`, so that `φ₁(h)·a·φ₂(h)⁻¹ = a`.
pub fn average_intertwiner(phi1: &URep, phi2: &URep) -> Result<UMatrix, UnitaryError> {
    phi1.check_pair(phi2)?;
    let n = phi1.dim();
    let mut sum = nalgebra::DMatrix::zeros(n, n);
    for (a, b) in phi1.images.iter().zip(&phi2.images) {
        sum += a.matrix() * b.matrix().adjoint();
    }
    UMatrix::from_matrix(sum / num_complex::Complex64::new(phi1.images.len() as f64, 0.0))
}

/// `max_h ‖φ₁(h)·a·φ₂(h)⁻¹ − a‖_op`.
pub fn intertwining_defect(phi1: &URep, phi2: &URep, a: &UMatrix) -> Result<f64, UnitaryError> {
    phi1.check_pair(phi2)?;
    phi1.images.iter().zip(&phi2.images).try_fold(0.0f64, |acc, (x, y)| {
        Ok(acc.max(op_norm(&x.mul(a)?.mul(&y.adjoint())?.sub(a)?)?))
    })
}

/// A unitary `u` with `φ₂^u = φ₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpConjugator {
    pub u: UMatrix,
    /// `‖u − I‖_op`.
    pub deviation: f64,
    /// `max_h ‖u·φ₂(h)·u⁻¹ − φ₁(h)‖_op`.
    pub residual: f64,
    /// `d_H(φ₁, φ₂)`.
    pub input_distance: f64,
}

/// Polar factor of the averaged intertwiner. Requires `d_H(φ₁,φ₂) ≤ δ < 1`
/// and checks `‖u − I‖ ≤ 2δ` and the residual against `tol.assertion`.
pub fn op_conjugate_close(phi1: &URep, phi2: &URep, delta: f64, tol: &Tolerances) -> Result<OpConjugator, UnitaryError> {
    if !(delta < 1.0) {
        return Err(UnitaryError::DefectTooLarge(delta));
    }
    let d = rep_distance(phi1, phi2)?;
    if d > delta + tol.assertion {
        return Err(UnitaryError::DefectTooLarge(d));
    }
    let a = average_intertwiner(phi1, phi2)?;
    let u = polar_unitary(&a, tol)?;
    let deviation = u.distance(&UMatrix::identity(u.dim()))?;
    if deviation > 2.0 * delta + tol.assertion {
        return Err(UnitaryError::BoundViolated {
            measured: deviation,
            bound: 2.0 * delta,
        });
    }
    let residual = rep_distance(&phi2.conjugate_by(&u)?, phi1)?;
    if residual > tol.assertion {
        return Err(UnitaryError::Residual(residual));
    }
    Ok(OpConjugator {
        u,
        deviation,
        residual,
        input_distance: d,
    })
}
