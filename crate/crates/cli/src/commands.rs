//! The subcommands, as functions from parsed input to serializable output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use stabilis_core::amalgam::Mode;
use stabilis_core::burnside::{compute_restriction_data, extension_property, positive_witness, Inclusion};
use stabilis_core::cone::{semigroup_conductor, IntCone, Membership, SearchBudget};
use stabilis_core::group::{coset_action, FiniteGroup, Subgroup};
use stabilis_core::Rational64;

use crate::input::{inclusion, subgroup_inclusion, GroupInput};
use crate::perturb::PerturbInfo;
use crate::report::{rat, ActionsEcho, Report};
use crate::scenario::Scenario;
use crate::{CliError, SCHEMA};

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub order: usize,
    pub index: usize,
    pub conjugates: usize,
    pub normal: bool,
    /// Elements of the representative, as permutations.
    pub representative: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub schema: &'static str,
    pub order: usize,
    pub abelian: bool,
    pub generators: Vec<Vec<usize>>,
    pub classes: Vec<ClassRow>,
    /// `marks[i][j]`: points of `G/S_i` fixed by `S_j`.
    pub marks: Vec<Vec<usize>>,
}

fn element_images(g: &FiniteGroup, x: usize) -> Vec<usize> {
    g.perms().map(|p| p[x].images().to_vec()).unwrap_or_default()
}

pub fn cmd_group(input: &GroupInput) -> Result<GroupReport, CliError> {
    let g = input.build()?;
    let classes = g.subgroup_classes()?;
    let actions = classes
        .iter()
        .map(|c| coset_action(&g, &Subgroup::new(&g, c.rep.clone())?))
        .collect::<Result<Vec<_>, _>>()?;
    let marks = actions
        .iter()
        .map(|a| {
            classes
                .iter()
                .map(|c| (0..a.degree()).filter(|&x| c.rep.iter().all(|&s| a.image(s).apply(x) == x)).count())
                .collect()
        })
        .collect();
    Ok(GroupReport {
        schema: SCHEMA,
        order: g.order(),
        abelian: g.is_abelian(),
        generators: g.generators().iter().map(|&s| element_images(&g, s)).collect(),
        classes: classes
            .iter()
            .map(|c| ClassRow {
                order: c.order,
                index: c.index,
                conjugates: c.members.len(),
                normal: c.members.len() == 1,
                representative: c.rep.iter().map(|&x| element_images(&g, x)).collect(),
            })
            .collect(),
        marks,
    })
}

/// An inclusion: a subgroup by generators, or an abstract `H` with the
/// images of its generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InclusionInput {
    Embedding { h: GroupInput, g: GroupInput, images: Vec<Vec<usize>> },
    Subgroup { g: GroupInput, h_generators: Vec<Vec<usize>> },
}

impl InclusionInput {
    pub fn build(&self) -> Result<Inclusion, CliError> {
        match self {
            InclusionInput::Embedding { h, g, images } => inclusion(&h.build()?, &g.build()?, images),
            InclusionInput::Subgroup { g, h_generators } => subgroup_inclusion(&g.build()?, h_generators),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RestrictReport {
    pub schema: &'static str,
    pub sub_order: usize,
    pub amb_order: usize,
    pub normal: bool,
    /// `i*([G/S])` for each type of `G`.
    pub images: Vec<Vec<i64>>,
    pub cone_generators: Vec<Vec<i64>>,
    pub aleph: Vec<Vec<i64>>,
    pub extension_property: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<usize>,
    /// Preimages of the basis types of `H`, as far as they exist.
    pub expressions: Vec<Vec<i64>>,
    pub positive_witness: Vec<i64>,
}

pub fn cmd_restrict(input: &InclusionInput, budget: &SearchBudget) -> Result<RestrictReport, CliError> {
    let inc = input.build()?;
    let rd = compute_restriction_data(&inc)?;
    let ext = extension_property(&rd, budget)?;
    Ok(RestrictReport {
        schema: SCHEMA,
        sub_order: inc.sub().order(),
        amb_order: inc.amb().order(),
        normal: rd.normal,
        images: rd.images.clone(),
        cone_generators: rd.cone_generators.clone(),
        aleph: rd.aleph.clone(),
        extension_property: ext.holds,
        obstruction: ext.obstruction,
        expressions: ext.expressions,
        positive_witness: positive_witness(&inc)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeInput {
    pub dim: usize,
    pub gens: Vec<Vec<i64>>,
    #[serde(default)]
    pub query: Option<Vec<i64>>,
    #[serde(default)]
    pub double: Option<[Vec<i64>; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DoubleReport {
    pub eta1: Vec<i64>,
    pub eta2: Vec<i64>,
    pub cert1: Vec<i64>,
    pub cert2: Vec<i64>,
    #[serde(with = "rat")]
    pub ratio: Rational64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeReport {
    pub schema: &'static str,
    pub rank: usize,
    pub relations: Vec<Vec<i64>>,
    pub w0: Vec<i64>,
    /// Frobenius number plus one, for cones in dimension 1 with positive
    /// generators.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conductor: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership: Option<Membership>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub double: Option<DoubleReport>,
}

pub fn cmd_cone(input: &ConeInput, budget: &SearchBudget) -> Result<ConeReport, CliError> {
    let cone = IntCone::new(input.dim, input.gens.clone(), None)?;
    let conductor = (input.dim == 1 && input.gens.iter().all(|g| g[0] > 0))
        .then(|| semigroup_conductor(&input.gens.iter().map(|g| g[0]).collect::<Vec<_>>()));
    let membership = input.query.as_ref().map(|q| cone.member(q, budget)).transpose()?;
    let double = match &input.double {
        Some([a, b]) => {
            let s = cone.double_solve(a, b, budget)?;
            Some(DoubleReport {
                eta1: s.eta1,
                eta2: s.eta2,
                cert1: s.cert1,
                cert2: s.cert2,
                ratio: s.ratio,
            })
        }
        None => None,
    };
    Ok(ConeReport {
        schema: SCHEMA,
        rank: cone.rank()?,
        relations: cone.relations()?,
        w0: cone.w0()?,
        conductor,
        membership,
        double,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbReport {
    pub schema: String,
    /// The input scenario with the perturbation recorded.
    pub scenario: Scenario,
    pub perturbation: PerturbInfo,
    pub input: ActionsEcho,
    /// Relation defect of the perturbed input.
    #[serde(with = "rat")]
    pub defect: Rational64,
}

pub fn cmd_perturb(scenario: &Scenario, k: usize, seed: u64) -> Result<PerturbReport, CliError> {
    use stabilis_core::amalgam::{defect_e0, defect_hnn, PipelineInput, PipelineSpec};
    let s = scenario.with_perturbation(k, seed);
    let p = s.prepare()?;
    let defect = match (&p.spec, &p.input) {
        (PipelineSpec::Amalgam(spec), PipelineInput::Amalgam { phi1, phi2 }) => defect_e0(spec, phi1, phi2)?,
        (PipelineSpec::Hnn(spec), PipelineInput::Hnn { phi, tau }) => defect_hnn(spec, phi, tau)?,
        _ => return Err(CliError::Parse("spec and input kinds differ".into())),
    };
    Ok(PerturbReport {
        schema: SCHEMA.to_string(),
        perturbation: p.perturbation.clone().expect("perturbation set"),
        input: ActionsEcho::of_input(&p.input),
        scenario: s,
        defect,
    })
}

/// Runs every scenario on the worker pool; reports come back in input order.
pub fn cmd_stabilize(scenarios: &[Scenario]) -> Vec<Result<Report, CliError>> {
    scenarios.par_iter().map(Report::run).collect()
}

pub fn cmd_verify(reports: &[Report]) -> Result<(), CliError> {
    for (i, r) in reports.iter().enumerate() {
        r.verify().map_err(|e| match e {
            CliError::Verification(m) => CliError::Verification(format!("report {i} ({}): {m}", r.scenario.name)),
            other => other,
        })?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub scenario: String,
    pub mode: Mode,
    pub k: usize,
    pub seed: u64,
    pub input_degree: usize,
    pub output_degree: usize,
    #[serde(with = "rat")]
    pub input_defect: Rational64,
    #[serde(with = "rat")]
    pub output_distance: Rational64,
    #[serde(with = "rat")]
    pub size_ratio: Rational64,
    pub verified: bool,
    pub route: stabilis_core::amalgam::Route,
}

/// Largest measured ratios over a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fitted {
    pub scenario: String,
    pub mode: Mode,
    pub rows: usize,
    pub all_verified: bool,
    /// `max distance / defect` over rows with positive defect.
    #[serde(with = "rat")]
    pub distance_constant: Rational64,
    /// `max (size_ratio − 1) / defect` over rows with positive defect.
    #[serde(with = "rat")]
    pub growth_constant: Rational64,
    /// Largest distance among rows with zero defect.
    #[serde(with = "rat")]
    pub zero_defect_distance: Rational64,
}

impl Fitted {
    pub fn of(rows: &[SweepRow]) -> Option<Fitted> {
        let first = rows.first()?;
        let zero = Rational64::from_integer(0);
        let mut f = Fitted {
            scenario: first.scenario.clone(),
            mode: first.mode,
            rows: rows.len(),
            all_verified: rows.iter().all(|r| r.verified),
            distance_constant: zero,
            growth_constant: zero,
            zero_defect_distance: zero,
        };
        for r in rows {
            if r.input_defect > zero {
                f.distance_constant = f.distance_constant.max(r.output_distance / r.input_defect);
                f.growth_constant = f.growth_constant.max((r.size_ratio - 1) / r.input_defect);
            } else {
                f.zero_defect_distance = f.zero_defect_distance.max(r.output_distance);
            }
        }
        Some(f)
    }
}

/// Runs `scenario` at perturbation sizes `0..=k_max` (default `|X|/8`) for
/// each seed in `seeds`.
pub fn cmd_sweep(scenario: &Scenario, k_max: Option<usize>, seeds: &[u64]) -> Result<(Vec<SweepRow>, Fitted), CliError> {
    let n = match scenario.prepare()?.input {
        stabilis_core::amalgam::PipelineInput::Amalgam { phi1, .. } => phi1.degree(),
        stabilis_core::amalgam::PipelineInput::Hnn { phi, .. } => phi.degree(),
    };
    let k_max = k_max.unwrap_or(n / 8);
    let jobs: Vec<(usize, u64)> = (0..=k_max).flat_map(|k| seeds.iter().map(move |&s| (k, s))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(k, seed)| {
            let s = scenario.with_perturbation(k, seed);
            let (_, r) = s.run()?;
            Ok(SweepRow {
                scenario: s.name.clone(),
                mode: s.mode,
                k,
                seed,
                input_degree: r.input_degree,
                output_degree: r.output_degree,
                input_defect: r.input_defect,
                output_distance: r.output_distance,
                size_ratio: r.size_ratio,
                verified: r.verified,
                route: r.trace.route,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let fitted = Fitted::of(&rows).ok_or_else(|| CliError::Parse("empty sweep".into()))?;
    Ok((rows, fitted))
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failed(e.to_string()))
}
