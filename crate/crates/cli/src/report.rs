//! Machine-readable run reports, and their independent re-verification.

use serde::{Deserialize, Serialize};
use stabilis_core::amalgam::{
    defect_e0, defect_hnn, prefix_distance, verify_amalgam, verify_hnn, Mode, PipelineInput, PipelineSpec, Route,
    StabilizationResult, Stabilized,
};
use stabilis_core::cone::FlexRoute;
use stabilis_core::group::GroupAction;
use stabilis_core::Rational64;

use crate::input::{perm, ActionInput};
use crate::perturb::PerturbInfo;
use crate::scenario::{Prepared, Scenario};
use crate::{CliError, SCHEMA};

/// Rationals as `"p/q"` strings (`"p"` for integers).
pub mod rat {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use stabilis_core::Rational64;

    pub fn format(r: &Rational64) -> String {
        if *r.denom() == 1 {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    pub fn parse(s: &str) -> Result<Rational64, String> {
        let bad = || format!("not a rational: {s:?}");
        match s.split_once('/') {
            Some((n, d)) => {
                let (n, d) = (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?);
                if d == 0 {
                    return Err(bad());
                }
                Ok(Rational64::new(n, d))
            }
            None => Ok(Rational64::from_integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        parse(&String::deserialize(d)?).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(r: &Option<Rational64>, s: S) -> Result<S::Ok, S::Error> {
            r.as_ref().map(super::format).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational64>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| super::parse(&s).map_err(D::Error::custom))
                .transpose()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionsEcho {
    Amalgam { phi1: ActionInput, phi2: ActionInput },
    Hnn { phi: ActionInput, tau: Vec<usize> },
}

impl ActionsEcho {
    pub fn of_input(input: &PipelineInput) -> Self {
        match input {
            PipelineInput::Amalgam { phi1, phi2 } => ActionsEcho::Amalgam {
                phi1: ActionInput::from_action(phi1),
                phi2: ActionInput::from_action(phi2),
            },
            PipelineInput::Hnn { phi, tau } => ActionsEcho::Hnn {
                phi: ActionInput::from_action(phi),
                tau: tau.images().to_vec(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultSummary {
    pub mode: Mode,
    pub route: Route,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flex_route: Option<FlexRoute>,
    pub input_degree: usize,
    pub output_degree: usize,
    #[serde(with = "rat")]
    pub size_ratio: Rational64,
    #[serde(with = "rat")]
    pub input_defect: Rational64,
    #[serde(with = "rat")]
    pub output_distance: Rational64,
    pub verified: bool,
    pub padding: usize,
    pub formal_type: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_point: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_prime: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    /// Fraction of points moved by the final conjugator.
    #[serde(with = "rat")]
    pub conjugator_support: Rational64,
    /// Number of relators checked exactly.
    pub relations_checked: usize,
}

/// Measured constants: `distance / defect` and `(size_ratio − 1) / defect`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(with = "rat::option")]
    pub distance_per_defect: Option<Rational64>,
    #[serde(with = "rat::option")]
    pub growth_per_defect: Option<Rational64>,
}

impl Constants {
    pub fn of(defect: Rational64, distance: Rational64, size_ratio: Rational64) -> Self {
        if defect == Rational64::from_integer(0) {
            return Constants {
                distance_per_defect: None,
                growth_per_defect: None,
            };
        }
        Constants {
            distance_per_defect: Some(distance / defect),
            growth_per_defect: Some((size_ratio - 1) / defect),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbInfo>,
    pub input: ActionsEcho,
    pub result: ResultSummary,
    pub output: ActionsEcho,
    pub certificates: Certificates,
    pub constants: Constants,
}

impl Report {
    pub fn new(scenario: &Scenario, prepared: &Prepared, r: &StabilizationResult) -> Self {
        let input = ActionsEcho::of_input(&prepared.input);
        let output = match &r.output {
            Stabilized::Amalgam { psi1, psi2 } => ActionsEcho::Amalgam {
                phi1: ActionInput::from_action(psi1),
                phi2: ActionInput::from_action(psi2),
            },
            Stabilized::Hnn { psi_g, psi_t } => ActionsEcho::Hnn {
                phi: ActionInput::from_action(psi_g),
                tau: psi_t.images().to_vec(),
            },
        };
        let relations_checked = match &prepared.spec {
            PipelineSpec::Amalgam(s) => s.e0().len(),
            PipelineSpec::Hnn(s) => s.e0().len(),
        };
        Report {
            schema: SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: scenario.clone(),
            perturbation: prepared.perturbation.clone(),
            input,
            result: ResultSummary {
                mode: r.mode,
                route: r.trace.route,
                flex_route: r.trace.flex_route,
                input_degree: r.input_degree,
                output_degree: r.output_degree,
                size_ratio: r.size_ratio,
                input_defect: r.input_defect,
                output_distance: r.output_distance,
                verified: r.verified,
                padding: r.trace.padding,
                formal_type: r.trace.formal_type.clone(),
                kernel_point: r.trace.kernel_point.clone(),
                xi_prime: r.trace.xi_prime.clone(),
                eta: r.trace.eta.clone(),
            },
            output,
            certificates: Certificates {
                conjugator_support: r.trace.conjugator_support,
                relations_checked,
            },
            constants: Constants::of(r.input_defect, r.output_distance, r.size_ratio),
        }
    }

    /// Runs `scenario` and reports.
    pub fn run(scenario: &Scenario) -> Result<Report, CliError> {
        let (prepared, result) = scenario.run()?;
        Ok(Report::new(scenario, &prepared, &result))
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Re-checks the report from its own contents: the scenario reproduces
    /// the recorded input, the output actions are genuine, every relator
    /// holds exactly, and the recorded measurements are recomputed.
    pub fn verify(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Verification(m));
        if self.schema != SCHEMA {
            return fail(format!("schema {:?}", self.schema));
        }
        let prepared = self.scenario.prepare()?;
        if ActionsEcho::of_input(&prepared.input) != self.input {
            return fail("scenario does not reproduce the recorded input".into());
        }
        let n = self.result.input_degree;
        let (defect, distance, out_n, ok) = match (&prepared.spec, &prepared.input, &self.output) {
            (
                PipelineSpec::Amalgam(s),
                PipelineInput::Amalgam { phi1, phi2 },
                ActionsEcho::Amalgam { phi1: o1, phi2: o2 },
            ) => {
                let psi1 = genuine(o1, s.i1.amb())?;
                let psi2 = genuine(o2, s.i2.amb())?;
                let v = verify_amalgam(s, &psi1, &psi2);
                if let Some(h) = v.witness {
                    return fail(format!("relator for h = {h} fails"));
                }
                let d = prefix_distance(phi1.images(), psi1.images(), n).max(prefix_distance(phi2.images(), psi2.images(), n));
                (defect_e0(s, phi1, phi2)?, d, psi1.degree(), v.ok)
            }
            (PipelineSpec::Hnn(s), PipelineInput::Hnn { phi, tau }, ActionsEcho::Hnn { phi: og, tau: ot }) => {
                let psi_g = genuine(og, s.g())?;
                let psi_t = perm(psi_g.degree(), ot)?;
                let v = verify_hnn(s, &psi_g, &psi_t);
                if let Some(h) = v.witness {
                    return fail(format!("relator for h = {h} fails"));
                }
                let d = prefix_distance(phi.images(), psi_g.images(), n)
                    .max(prefix_distance(std::slice::from_ref(tau), std::slice::from_ref(&psi_t), n));
                (defect_hnn(s, phi, tau)?, d, psi_g.degree(), v.ok)
            }
            _ => return fail("output kind does not match the spec".into()),
        };
        if !ok || !self.result.verified {
            return fail("relations do not hold".into());
        }
        if defect != self.result.input_defect {
            return fail(format!("input defect {} recorded as {}", rat::format(&defect), rat::format(&self.result.input_defect)));
        }
        if distance != self.result.output_distance {
            return fail(format!(
                "output distance {} recorded as {}",
                rat::format(&distance),
                rat::format(&self.result.output_distance)
            ));
        }
        if out_n != self.result.output_degree || Rational64::new(out_n as i64, n.max(1) as i64) != self.result.size_ratio {
            return fail("output size does not match".into());
        }
        if self.result.mode == Mode::Strict && out_n != n {
            return fail("strict output changed the point set".into());
        }
        Ok(())
    }
}

fn genuine(a: &ActionInput, g: &stabilis_core::FiniteGroup) -> Result<GroupAction, CliError> {
    a.build(g).map_err(|e| CliError::Verification(format!("output is not an action: {e}")))
}
