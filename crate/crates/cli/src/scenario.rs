//! Scenarios: a pipeline spec, input actions, an optional seeded
//! perturbation, and the mode to run.

use serde::{Deserialize, Serialize};
use stabilis_core::amalgam::{stabilize, Mode, PipelineInput, PipelineSpec, StabilizationResult};
use stabilis_core::cone::SearchBudget;
use stabilis_core::Perm;

use crate::input::{perm, ActionInput, SpecInput};
use crate::perturb::{perturb_action, perturb_perm, PerturbInfo, Perturbation};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub spec: SpecInput,
    pub mode: Mode,
    /// First factor's action, or `G`'s action for HNN specs.
    pub phi1: ActionInput,
    /// Second factor's action; defaults to `phi1` when both factors agree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi2: Option<ActionInput>,
    /// Stable letter image; defaults to the identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<usize>>,
    /// Applied to `phi2` (amalgams, then repaired) or to `tau` (HNN).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb: Option<Perturbation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

/// A scenario resolved into core objects.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub spec: PipelineSpec,
    pub input: PipelineInput,
    pub perturbation: Option<PerturbInfo>,
}

impl Scenario {
    pub fn with_perturbation(&self, k: usize, seed: u64) -> Scenario {
        Scenario {
            perturb: Some(Perturbation { k, seed }),
            ..self.clone()
        }
    }

    pub fn with_mode(&self, mode: Mode) -> Scenario {
        Scenario { mode, ..self.clone() }
    }

    pub fn search_budget(&self) -> SearchBudget {
        match self.budget {
            Some(n) => SearchBudget::nodes(n),
            None => SearchBudget::default(),
        }
    }

    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let spec = self.spec.build()?;
        match &spec {
            PipelineSpec::Amalgam(s) => {
                let phi1 = self.phi1.build(s.i1.amb())?;
                let base2 = match &self.phi2 {
                    Some(a) => a.build(s.i2.amb())?,
                    None if s.i1.amb() == s.i2.amb() => phi1.clone(),
                    None => return Err(CliError::Parse("phi2 is required when the factors differ".into())),
                };
                let (phi2, info) = match &self.perturb {
                    Some(p) => {
                        let (a, info) = perturb_action(&base2, p)?;
                        (a, Some(info))
                    }
                    None => (base2, None),
                };
                Ok(Prepared {
                    input: PipelineInput::Amalgam { phi1, phi2 },
                    spec,
                    perturbation: info,
                })
            }
            PipelineSpec::Hnn(s) => {
                if self.phi2.is_some() {
                    return Err(CliError::Parse("HNN scenarios take phi1 and tau only".into()));
                }
                let phi = self.phi1.build(s.g())?;
                let tau = match &self.tau {
                    Some(t) => perm(phi.degree(), t)?,
                    None => Perm::identity(phi.degree()),
                };
                let (tau, info) = match &self.perturb {
                    Some(p) => {
                        let t = perturb_perm(&tau, p.k, &mut p.rng());
                        let info = PerturbInfo {
                            k: p.k,
                            seed: p.seed,
                            almost_defect: stabilis_core::Rational64::from_integer(0),
                            repair_distance: stabilis_core::Rational64::from_integer(0),
                        };
                        (t, Some(info))
                    }
                    None => (tau, None),
                };
                Ok(Prepared {
                    input: PipelineInput::Hnn { phi, tau },
                    spec,
                    perturbation: info,
                })
            }
        }
    }

    pub fn run(&self) -> Result<(Prepared, StabilizationResult), CliError> {
        let prepared = self.prepare()?;
        let result = stabilize(&prepared.spec, &prepared.input, self.mode, &self.search_budget())?;
        Ok((prepared, result))
    }
}
