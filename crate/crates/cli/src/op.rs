//! Operator-norm scenarios: unitary generator images for the factors.

use serde::{Deserialize, Serialize};
use stabilis_core::amalgam::PipelineSpec;
use stabilis_unitary::{op_stabilize_amalgam, op_stabilize_hnn, Tolerances, UMatrix, URep};

use crate::input::SpecInput;
use crate::{CliError, SCHEMA};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpScenario {
    pub spec: SpecInput,
    /// Generator images of the first factor (or of `G` for HNN specs).
    pub phi1: Vec<UMatrix>,
    #[serde(default)]
    pub phi2: Option<Vec<UMatrix>>,
    /// Stable letter image; identity when absent.
    #[serde(default)]
    pub t: Option<UMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpReport {
    pub schema: &'static str,
    pub delta: f64,
    pub distance: f64,
    pub residual: f64,
    pub conjugator: UMatrix,
    /// Generator images of the output; the stable letter last for HNN specs.
    pub output: Vec<Vec<UMatrix>>,
}

fn generator_images(r: &URep) -> Vec<UMatrix> {
    r.group().generators().iter().map(|&s| r.image(s).clone()).collect()
}

pub fn cmd_op(s: &OpScenario, tol: &Tolerances) -> Result<OpReport, CliError> {
    match s.spec.build()? {
        PipelineSpec::Amalgam(spec) => {
            let phi1 = URep::from_generator_images(spec.i1.amb(), &s.phi1, tol)?;
            let phi2 = match &s.phi2 {
                Some(m) => URep::from_generator_images(spec.i2.amb(), m, tol)?,
                None => return Err(CliError::Parse("phi2 is required for amalgams".into())),
            };
            let out = op_stabilize_amalgam(&spec, &phi1, &phi2, tol)?;
            Ok(OpReport {
                schema: SCHEMA,
                delta: out.delta,
                distance: out.distance,
                residual: out.residual,
                conjugator: out.conjugator.u.clone(),
                output: vec![generator_images(&out.psi1), generator_images(&out.psi2)],
            })
        }
        PipelineSpec::Hnn(spec) => {
            let phi = URep::from_generator_images(spec.g(), &s.phi1, tol)?;
            let t = s.t.clone().unwrap_or_else(|| UMatrix::identity(phi.dim()));
            let out = op_stabilize_hnn(&spec, &phi, &t, tol)?;
            Ok(OpReport {
                schema: SCHEMA,
                delta: out.delta,
                distance: out.distance,
                residual: out.residual,
                conjugator: out.conjugator.u.clone(),
                output: vec![generator_images(&out.psi_g), vec![out.psi_t]],
            })
        }
    }
}
