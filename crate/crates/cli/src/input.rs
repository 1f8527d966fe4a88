//! JSON input formats: groups, inclusions, actions, pipeline specs.

use serde::{Deserialize, Serialize};
use stabilis_core::amalgam::{AmalgamSpec, HnnSpec, PipelineSpec};
use stabilis_core::burnside::Inclusion;
use stabilis_core::group::named::{alternating4, cyclic, dihedral, direct_product, klein, quaternion, symmetric};
use stabilis_core::group::{realize, BurnsideVector, FiniteGroup, GroupAction};
use stabilis_core::Perm;

use crate::CliError;

/// A permutation group: a named group or explicit generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupInput {
    Named { named: String },
    Product { product: Vec<GroupInput> },
    Perms { degree: usize, generators: Vec<Vec<usize>> },
}

impl GroupInput {
    pub fn named(name: &str) -> Self {
        GroupInput::Named { named: name.to_string() }
    }

    pub fn build(&self) -> Result<FiniteGroup, CliError> {
        match self {
            GroupInput::Named { named } => named_group(named),
            GroupInput::Product { product } => {
                let mut it = product.iter();
                let first = it.next().ok_or_else(|| CliError::Parse("empty product".into()))?.build()?;
                it.try_fold(first, |acc, g| Ok(direct_product(&acc, &g.build()?)))
            }
            GroupInput::Perms { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| perm(*degree, g))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(FiniteGroup::from_perm_generators(*degree, &gens)?)
            }
        }
    }
}

fn named_group(name: &str) -> Result<FiniteGroup, CliError> {
    let bad = || CliError::Parse(format!("unknown group {name:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    match name {
        "klein" | "V4" => Ok(klein()),
        "Q8" => Ok(quaternion()),
        "A4" => Ok(alternating4()),
        _ => {
            let (head, tail) = name.split_at(1);
            match head {
                "Z" | "C" => Ok(cyclic(num(tail)?.max(1))),
                "D" if num(tail)? >= 3 => Ok(dihedral(num(tail)?)),
                "S" if (1..=5).contains(&num(tail)?) => Ok(symmetric(num(tail)?)),
                _ => Err(bad()),
            }
        }
    }
}

pub fn perm(degree: usize, images: &[usize]) -> Result<Perm, CliError> {
    if images.len() != degree {
        return Err(CliError::Parse(format!("permutation of length {} on {degree} points", images.len())));
    }
    Perm::from_images(images.to_vec()).map_err(|e| CliError::Parse(e.to_string()))
}

/// Element of a permutation group given by its images.
pub fn element_of(g: &FiniteGroup, images: &[usize]) -> Result<usize, CliError> {
    let perms = g.perms().ok_or_else(|| CliError::Parse("group without a permutation representation".into()))?;
    perms
        .iter()
        .position(|p| p.images() == images)
        .ok_or_else(|| CliError::Parse(format!("{images:?} is not an element of the group")))
}

/// Inclusion `H → G` from the images of `H`'s generators, as permutations in
/// `G`'s representation.
pub fn inclusion(h: &FiniteGroup, g: &FiniteGroup, gen_images: &[Vec<usize>]) -> Result<Inclusion, CliError> {
    if gen_images.len() != h.generators().len() {
        return Err(CliError::Parse(format!(
            "{} generator images for {} generators",
            gen_images.len(),
            h.generators().len()
        )));
    }
    let gens = gen_images.iter().map(|p| element_of(g, p)).collect::<Result<Vec<_>, _>>()?;
    let embed = (0..h.order())
        .map(|x| h.word(x).iter().fold(g.identity(), |acc, &i| g.mul(acc, gens[i])))
        .collect();
    Ok(Inclusion::new(h, g, embed)?)
}

/// Subgroup of `g` generated by the given elements, as an inclusion of an
/// abstract group.
pub fn subgroup_inclusion(g: &FiniteGroup, gens: &[Vec<usize>]) -> Result<Inclusion, CliError> {
    let idx = gens.iter().map(|p| element_of(g, p)).collect::<Result<Vec<_>, _>>()?;
    let sub = stabilis_core::Subgroup::new(g, g.closure(&idx))?;
    Ok(Inclusion::from_subgroup(g, &sub)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecInput {
    /// `G₁ ∗_H G₂`; `i1`/`i2` are the images of `H`'s generators.
    Amalgam {
        h: GroupInput,
        g1: GroupInput,
        g2: GroupInput,
        i1: Vec<Vec<usize>>,
        i2: Vec<Vec<usize>>,
    },
    /// `G ∗_H G` with both inclusions the subgroup generated by `h_generators`.
    Double { g: GroupInput, h_generators: Vec<Vec<usize>> },
    Hnn {
        h: GroupInput,
        g: GroupInput,
        i1: Vec<Vec<usize>>,
        i2: Vec<Vec<usize>>,
    },
    /// HNN extension with `i₁ = i₂` the subgroup generated by `h_generators`.
    HnnDouble { g: GroupInput, h_generators: Vec<Vec<usize>> },
}

impl SpecInput {
    pub fn build(&self) -> Result<PipelineSpec, CliError> {
        Ok(match self {
            SpecInput::Amalgam { h, g1, g2, i1, i2 } => {
                let h = h.build()?;
                let (g1, g2) = (g1.build()?, g2.build()?);
                PipelineSpec::Amalgam(AmalgamSpec::new(inclusion(&h, &g1, i1)?, inclusion(&h, &g2, i2)?)?)
            }
            SpecInput::Double { g, h_generators } => {
                let inc = subgroup_inclusion(&g.build()?, h_generators)?;
                PipelineSpec::Amalgam(AmalgamSpec::new(inc.clone(), inc)?)
            }
            SpecInput::Hnn { h, g, i1, i2 } => {
                let h = h.build()?;
                let g = g.build()?;
                PipelineSpec::Hnn(HnnSpec::new(inclusion(&h, &g, i1)?, inclusion(&h, &g, i2)?)?)
            }
            SpecInput::HnnDouble { g, h_generators } => {
                let inc = subgroup_inclusion(&g.build()?, h_generators)?;
                PipelineSpec::Hnn(HnnSpec::new(inc.clone(), inc)?)
            }
        })
    }

    pub fn is_hnn(&self) -> bool {
        matches!(self, SpecInput::Hnn { .. } | SpecInput::HnnDouble { .. })
    }
}

/// A genuine action: generator images, or a Burnside type realized in the
/// standard labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionInput {
    Generators { degree: usize, generators: Vec<Vec<usize>> },
    Type {
        #[serde(rename = "type")]
        coeffs: Vec<i64>,
    },
    /// Disjoint copies of the regular action.
    Regular { regular: usize },
}

impl ActionInput {
    pub fn build(&self, g: &FiniteGroup) -> Result<GroupAction, CliError> {
        match self {
            ActionInput::Generators { degree, generators } => {
                let gens = generators.iter().map(|p| perm(*degree, p)).collect::<Result<Vec<_>, _>>()?;
                Ok(GroupAction::from_generator_images(g, *degree, &gens)?)
            }
            ActionInput::Type { coeffs } => Ok(realize(&BurnsideVector::new(g, coeffs.clone())?)?),
            ActionInput::Regular { regular } => {
                let mut coeffs = vec![0i64; g.type_count()?];
                coeffs[g.free_type()] = *regular as i64;
                Ok(realize(&BurnsideVector::new(g, coeffs)?)?)
            }
        }
    }

    pub fn from_action(a: &GroupAction) -> Self {
        ActionInput::Generators {
            degree: a.degree(),
            generators: a.group().generators().iter().map(|&s| a.image(s).images().to_vec()).collect(),
        }
    }
}
