//! Repairing almost-actions of finite groups, and reshaping an action so
//! that its image under a decomposing map hits a prescribed target.

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::burnside::DecomposingMap;
use crate::cone::semigroup_conductor;
use crate::group::{action_distance, classify, extend_by_words, realize, BurnsideVector, FiniteGroup, GroupAction, GroupError};
use crate::perm::{hamming, Perm, PermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("target norm {target} differs from the degree {degree}")]
    NormMismatch { target: i64, degree: usize },
    #[error("target is not in the image of the decomposing map")]
    NotInImage,
    #[error("decomposing map does not match the group")]
    MapMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A map from a finite group to permutations of `{0, …, degree−1}`, given on
/// every element and not necessarily multiplicative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostAction {
    group: FiniteGroup,
    degree: usize,
    images: Vec<Perm>,
}

impl AlmostAction {
    pub fn new(group: &FiniteGroup, images: Vec<Perm>) -> Result<Self, OracleError> {
        if images.len() != group.order() {
            return Err(GroupError::LengthMismatch {
                got: images.len(),
                expected: group.order(),
            }
            .into());
        }
        let degree = images[0].degree();
        if let Some(p) = images.iter().find(|p| p.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, p.degree()).into());
        }
        Ok(AlmostAction {
            group: group.clone(),
            degree,
            images,
        })
    }

    /// Extends generator images along the group's words.
    pub fn from_generator_images(group: &FiniteGroup, degree: usize, gens: &[Perm]) -> Result<Self, OracleError> {
        Self::new(group, extend_by_words(group, degree, gens)?)
    }

    pub fn from_action(a: &GroupAction) -> Self {
        AlmostAction {
            group: a.group().clone(),
            degree: a.degree(),
            images: a.images().to_vec(),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    /// Points where `α(g)α(h)y = α(gh)y` for all pairs.
    fn good_points(&self) -> Vec<bool> {
        let n = self.group.order();
        let mut good = vec![true; self.degree];
        for (y, ok) in good.iter_mut().enumerate() {
            'pairs: for g in 0..n {
                for h in 0..n {
                    let lhs = self.images[g].apply(self.images[h].apply(y));
                    if lhs != self.images[self.group.mul(g, h)].apply(y) {
                        *ok = false;
                        break 'pairs;
                    }
                }
            }
        }
        good
    }

    /// `max_{g,h} hamming(α(g)∘α(h), α(gh))`.
    pub fn defect(&self) -> Rational64 {
        let n = self.group.order();
        let mut worst = Rational64::from_integer(0);
        if self.degree == 0 {
            return worst;
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                let bad = (0..self.degree)
                    .filter(|&y| self.images[g].apply(self.images[h].apply(y)) != self.images[gh].apply(y))
                    .count();
                worst = worst.max(Rational64::new(bad as i64, self.degree as i64));
            }
        }
        worst
    }

    /// Restriction of every image to a subset (see [`Perm::restrict`]).
    pub fn restrict(&self, subset: &[usize]) -> Result<AlmostAction, OracleError> {
        let images = self.images.iter().map(|p| p.restrict(subset)).collect::<Result<Vec<_>, _>>()?;
        if images.is_empty() {
            return Err(GroupError::LengthMismatch { got: 0, expected: 1 }.into());
        }
        Ok(AlmostAction {
            group: self.group.clone(),
            degree: subset.len(),
            images,
        })
    }
}

/// Filling of the points outside the repaired sub-action.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairStrategy {
    /// Fixed points.
    #[default]
    Identity,
    /// As many regular orbits as fit, in increasing point order; the rest fixed.
    FreeOrbits,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairReport {
    pub repaired: GroupAction,
    /// `max_g hamming(α(g), β(g))`.
    pub distance: Rational64,
    pub defect_in: Rational64,
    /// Fraction of points on which `α` is kept.
    pub good_fraction: Rational64,
}

impl RepairReport {
    /// `|G|³·defect`.
    pub fn bound(&self) -> Rational64 {
        let g = self.repaired.group().order() as i64;
        self.defect_in * g * g * g
    }
}

/// Keeps `α` on the largest set where it is already a genuine action, the
/// points `y` with `α(g)y` good for every `g`, and fills the rest.
pub fn repair(alpha: &AlmostAction) -> Result<RepairReport, OracleError> {
    repair_with(alpha, RepairStrategy::Identity)
}

pub fn repair_with(alpha: &AlmostAction, strategy: RepairStrategy) -> Result<RepairReport, OracleError> {
    let n = alpha.degree;
    let group = &alpha.group;
    let good = alpha.good_points();
    let kept: Vec<bool> = (0..n)
        .map(|y| good[y] && alpha.images.iter().all(|p| good[p.apply(y)]))
        .collect();
    let mut tables: Vec<Vec<usize>> = vec![(0..n).collect(); group.order()];
    for (g, table) in tables.iter_mut().enumerate() {
        for y in (0..n).filter(|&y| kept[y]) {
            table[y] = alpha.images[g].apply(y);
        }
    }
    if strategy == RepairStrategy::FreeOrbits {
        let rest: Vec<usize> = (0..n).filter(|&y| !kept[y]).collect();
        let size = group.order();
        for block in rest.chunks_exact(size) {
            // block[i] carries element i; g sends it to g·i
            for (g, table) in tables.iter_mut().enumerate() {
                for (i, &y) in block.iter().enumerate() {
                    table[y] = block[group.mul(g, i)];
                }
            }
        }
    }
    let images = tables.into_iter().map(Perm::from_images).collect::<Result<Vec<_>, _>>()?;
    let repaired = GroupAction::new(group, images)?;
    let mut distance = Rational64::from_integer(0);
    for (a, b) in alpha.images.iter().zip(repaired.images()) {
        distance = distance.max(hamming(a, b)?);
    }
    let kept_count = kept.iter().filter(|&&k| k).count() as i64;
    Ok(RepairReport {
        repaired,
        distance,
        defect_in: alpha.defect(),
        good_fraction: if n == 0 {
            Rational64::from_integer(1)
        } else {
            Rational64::new(kept_count, n as i64)
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReshapeReport {
    pub psi: GroupAction,
    /// `d_G(ψ, ψ′)`.
    pub distance: Rational64,
    /// Formal amount of each component cut out and repaired.
    pub zeta: Vec<i64>,
    /// Formal amount of each component kept after repair.
    pub kept: Vec<i64>,
    /// Formal amount of each component built from scratch.
    pub filled: Vec<i64>,
}

/// Moves `ψ` to an action `ψ′` on the same points with `p(ψ′#) = ξ`.
///
/// Per component `a`, `ζₐ = max(0, min(ξₐ, p(ψ#)ₐ) − cₐ)` with `cₐ` the
/// conductor of the component semigroup. A set `Yₐ` of `ζₐ·‖a‖` points is cut
/// from the orbits of `ψ` lying in component `a` (whole orbits first, then
/// the first points of the next orbit); `ψ|Yₐ` is repaired and its orbits in
/// component `a` are kept. The remainder `ξ − p(kept)` lies in the image
/// because each remaining coordinate is at least the conductor, and is
/// realized on the unused points in increasing order.
pub fn reshape(psi: &GroupAction, p: &DecomposingMap, xi: &[i64]) -> Result<ReshapeReport, OracleError> {
    let group = psi.group();
    let n = psi.degree();
    if p.type_map.len() != group.type_count()? || xi.len() != p.dim() {
        return Err(OracleError::MapMismatch);
    }
    let target_norm = p.norm(xi);
    if target_norm != n as i64 || xi.iter().any(|&c| c < 0) {
        return Err(OracleError::NormMismatch { target: target_norm, degree: n });
    }
    let pc = p.primitive_cone().map_err(|_| OracleError::MapMismatch)?;
    if !pc.contains(xi) {
        return Err(OracleError::NotInImage);
    }
    let current = p.apply(classify(psi)?.coeffs());
    if current == xi {
        return Ok(ReshapeReport {
            psi: psi.clone(),
            distance: Rational64::from_integer(0),
            zeta: xi.to_vec(),
            kept: xi.to_vec(),
            filled: vec![0; xi.len()],
        });
    }
    let typed = psi.typed_orbits()?;
    let mut blocks: Vec<(Vec<usize>, GroupAction)> = Vec::new();
    let mut zeta = vec![0i64; p.dim()];
    let mut kept = vec![0i64; p.dim()];
    for a in 0..p.dim() {
        let comp = &pc.components()[a];
        let conductor = semigroup_conductor(&comp.multipliers);
        zeta[a] = (xi[a].min(current[a]) - conductor).max(0);
        if zeta[a] == 0 {
            continue;
        }
        let size = (zeta[a] * p.weights[a]) as usize;
        let mut ya: Vec<usize> = Vec::with_capacity(size);
        for (t, orbit) in &typed {
            if p.type_map[*t].0 != a || ya.len() == size {
                continue;
            }
            let take = (size - ya.len()).min(orbit.len());
            ya.extend_from_slice(&orbit[..take]);
        }
        ya.sort_unstable();
        let restricted = AlmostAction::from_action(psi).restrict(&ya)?;
        let fixed = repair(&restricted)?.repaired;
        let mut keep_pos: Vec<usize> = Vec::new();
        for (t, orbit) in fixed.typed_orbits()? {
            if p.type_map[t].0 == a {
                keep_pos.extend(orbit);
                kept[a] += p.type_map[t].1;
            }
        }
        keep_pos.sort_unstable();
        let sub = fixed.restrict_invariant(&keep_pos)?;
        blocks.push((keep_pos.iter().map(|&i| ya[i]).collect(), sub));
    }
    let filled: Vec<i64> = xi.iter().zip(&kept).map(|(x, k)| x - k).collect();
    let fill_type = p.preimage(&filled).ok_or(OracleError::NotInImage)?;
    let fill = realize(&BurnsideVector::new(group, fill_type)?)?;
    let mut used = vec![false; n];
    for (pts, _) in &blocks {
        for &x in pts {
            used[x] = true;
        }
    }
    let free: Vec<usize> = (0..n).filter(|&x| !used[x]).collect();
    if free.len() != fill.degree() {
        return Err(OracleError::NormMismatch {
            target: target_norm,
            degree: n,
        });
    }
    blocks.push((free, fill));
    let out = GroupAction::assemble(group, n, &blocks)?;
    debug_assert_eq!(p.apply(classify(&out)?.coeffs()), xi);
    Ok(ReshapeReport {
        distance: action_distance(psi, &out)?,
        psi: out,
        zeta,
        kept,
        filled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::coset_action;
    use crate::group::named::{cyclic, symmetric};
    use crate::group::Subgroup;
    use crate::ratio;

    #[test]
    fn genuine_action_is_untouched() {
        let s3 = symmetric(3);
        let a = coset_action(&s3, &Subgroup::trivial(&s3)).unwrap();
        let r = repair(&AlmostAction::from_action(&a)).unwrap();
        assert_eq!(r.repaired, a);
        assert_eq!(r.distance, ratio(0, 1));
        assert_eq!(r.defect_in, ratio(0, 1));
    }

    #[test]
    fn corrupted_regular_z3() {
        let z3 = cyclic(3);
        let reg = coset_action(&z3, &Subgroup::trivial(&z3)).unwrap();
        let mut images = reg.images().to_vec();
        images[1] = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let alpha = AlmostAction::new(&z3, images).unwrap();
        let r = repair(&alpha).unwrap();
        assert!(r.defect_in > ratio(0, 1));
        assert!(r.distance <= r.bound());
        let free = repair_with(&alpha, RepairStrategy::FreeOrbits).unwrap();
        assert!(free.distance <= free.bound());
    }

    #[test]
    fn identity_images_have_no_defect() {
        let s3 = symmetric(3);
        let alpha = AlmostAction::new(&s3, vec![Perm::identity(5); 6]).unwrap();
        let r = repair(&alpha).unwrap();
        assert_eq!(r.defect_in, ratio(0, 1));
        assert_eq!(r.distance, ratio(0, 1));
    }

    #[test]
    fn reshape_z2_example() {
        let z2 = cyclic(2);
        let psi = GroupAction::from_generator_images(&z2, 4, &[Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()]).unwrap();
        let p = DecomposingMap::identity(&z2).unwrap();
        let out = reshape(&psi, &p, &[1, 2]).unwrap();
        assert_eq!(*out.psi.image(1), Perm::from_cycles(4, &[&[0, 1]]).unwrap());
        assert_eq!(out.distance, ratio(1, 2));
        let same = reshape(&psi, &p, &[2, 0]).unwrap();
        assert_eq!(same.psi, psi);
        assert!(reshape(&psi, &p, &[1, 1]).is_err());
    }
}
