//! Operator-norm amalgam and HNN constructions over finite subgroups.

use stabilis_core::amalgam::{AmalgamSpec, HnnSpec};

use crate::matrix::UMatrix;
use crate::rep::{op_conjugate_close, rep_distance, OpConjugator, URep};
use crate::{Tolerances, UnitaryError};

#[derive(Debug, Clone, PartialEq)]
pub struct OpAmalgam {
    pub psi1: URep,
    pub psi2: URep,
    /// `max_h ‖φ₁(i₁h) − φ₂(i₂h)‖_op`.
    pub delta: f64,
    /// Largest change of any group element's image.
    pub distance: f64,
    /// `max_h ‖ψ₁(i₁h) − ψ₂(i₂h)‖_op`.
    pub residual: f64,
    pub conjugator: OpConjugator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpHnn {
    pub psi_g: URep,
    pub psi_t: UMatrix,
    /// `max_h ‖φ(i₁h) − T·φ(i₂h)·T⁻¹‖_op`.
    pub delta: f64,
    /// `‖ψ(t) − T‖_op`.
    pub distance: f64,
    /// `max_h ‖ψ(i₁h) − ψ(t)·ψ(i₂h)·ψ(t)⁻¹‖_op`.
    pub residual: f64,
    pub conjugator: OpConjugator,
}

/// `ψ₁ = φ₁`, `ψ₂ = φ₂^u` with `u` conjugating `i₂*φ₂` onto `i₁*φ₁`.
pub fn op_stabilize_amalgam(spec: &AmalgamSpec, phi1: &URep, phi2: &URep, tol: &Tolerances) -> Result<OpAmalgam, UnitaryError> {
    if phi1.group() != spec.i1.amb() || phi2.group() != spec.i2.amb() {
        return Err(UnitaryError::GroupMismatch);
    }
    let h = spec.h();
    let r1 = phi1.pull_back(h, spec.i1.embed())?;
    let r2 = phi2.pull_back(h, spec.i2.embed())?;
    let delta = rep_distance(&r1, &r2)?;
    let conjugator = op_conjugate_close(&r1, &r2, delta, tol)?;
    let psi2 = phi2.conjugate_by(&conjugator.u)?;
    let distance = rep_distance(phi2, &psi2)?;
    if distance > 4.0 * delta + tol.assertion {
        return Err(UnitaryError::BoundViolated {
            measured: distance,
            bound: 4.0 * delta,
        });
    }
    let residual = rep_distance(&r1, &psi2.pull_back(h, spec.i2.embed())?)?;
    if residual > tol.assertion {
        return Err(UnitaryError::Residual(residual));
    }
    Ok(OpAmalgam {
        psi1: phi1.clone(),
        psi2,
        delta,
        distance,
        residual,
        conjugator,
    })
}

/// `ψ_G = φ`, `ψ(t) = u·T` with `u` conjugating `(i₂*φ)^T` onto `i₁*φ`.
pub fn op_stabilize_hnn(spec: &HnnSpec, phi: &URep, t: &UMatrix, tol: &Tolerances) -> Result<OpHnn, UnitaryError> {
    if phi.group() != spec.g() {
        return Err(UnitaryError::GroupMismatch);
    }
    if t.dim() != phi.dim() {
        return Err(UnitaryError::DimensionMismatch(phi.dim(), t.dim()));
    }
    let h = spec.i1.sub();
    let r1 = phi.pull_back(h, spec.i1.embed())?;
    let r2t = phi.pull_back(h, spec.i2.embed())?.conjugate_by(t)?;
    let delta = rep_distance(&r1, &r2t)?;
    let conjugator = op_conjugate_close(&r1, &r2t, delta, tol)?;
    let psi_t = conjugator.u.mul(t)?;
    let distance = psi_t.distance(t)?;
    if distance > 2.0 * delta + tol.assertion {
        return Err(UnitaryError::BoundViolated {
            measured: distance,
            bound: 2.0 * delta,
        });
    }
    let residual = rep_distance(&r1, &phi.pull_back(h, spec.i2.embed())?.conjugate_by(&psi_t)?)?;
    if residual > tol.assertion {
        return Err(UnitaryError::Residual(residual));
    }
    Ok(OpHnn {
        psi_g: phi.clone(),
        psi_t,
        delta,
        distance,
        residual,
        conjugator,
    })
}
