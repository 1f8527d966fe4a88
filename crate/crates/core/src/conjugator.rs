//! Conjugating two actions of the same Burnside type by a permutation that
//! moves only points where the actions disagree.

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::group::{action_distance, classify, GroupAction, GroupError};
use crate::perm::{hamming, Perm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjugatorError {
    #[error("actions have different Burnside types")]
    NotIsomorphic,
    #[error("actions are of different groups")]
    GroupMismatch,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `t` with `t·φ₂(h)·t⁻¹ = φ₁(h)` for all `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyCertificate {
    pub t: Perm,
    /// `hamming(t, id)`.
    pub support_fraction: Rational64,
    /// `|H|·d_H(φ₁, φ₂)`.
    pub bound: Rational64,
    pub verified: bool,
}

fn check_pair(a: &GroupAction, b: &GroupAction) -> Result<(), ConjugatorError> {
    if a.group() != b.group() {
        return Err(ConjugatorError::GroupMismatch);
    }
    if a.degree() != b.degree() {
        return Err(ConjugatorError::DegreeMismatch(a.degree(), b.degree()));
    }
    Ok(())
}

/// Points where every element acts identically under both actions. The set
/// is invariant under both, and they coincide on it.
pub fn agreement_set(a: &GroupAction, b: &GroupAction) -> Result<Vec<usize>, ConjugatorError> {
    check_pair(a, b)?;
    let set: Vec<usize> = (0..a.degree())
        .filter(|&x| a.images().iter().zip(b.images()).all(|(p, q)| p.apply(x) == q.apply(x)))
        .collect();
    debug_assert!(set.iter().all(|&x| a.images().iter().all(|p| set.binary_search(&p.apply(x)).is_ok())));
    Ok(set)
}

/// An equivariant bijection `t` with `t·b(h)·t⁻¹ = a(h)` on the given
/// invariant point set (the same set for both actions); identity elsewhere.
fn match_on(a: &GroupAction, b: &GroupAction, points: &[usize]) -> Result<Perm, ConjugatorError> {
    let group = a.group();
    let n = a.degree();
    let mut in_set = vec![false; n];
    for &p in points {
        in_set[p] = true;
    }
    let typed = |act: &GroupAction| -> Result<Vec<(usize, Vec<usize>)>, ConjugatorError> {
        let mut v: Vec<(usize, Vec<usize>)> = act
            .typed_orbits()?
            .into_iter()
            .filter(|(_, o)| in_set[o[0]])
            .collect();
        v.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1[0].cmp(&y.1[0])));
        Ok(v)
    };
    let oa = typed(a)?;
    let ob = typed(b)?;
    if oa.len() != ob.len() || oa.iter().zip(&ob).any(|(x, y)| x.0 != y.0) {
        return Err(ConjugatorError::NotIsomorphic);
    }
    let mut img: Vec<usize> = (0..n).collect();
    for ((_, orb_a), (_, orb_b)) in oa.iter().zip(&ob) {
        let x = orb_a[0];
        let y = orb_b[0];
        let s1 = a.stabilizer(x);
        let s2 = b.stabilizer(y);
        let g = (0..group.order())
            .find(|&g| group.conjugate_set(g, &s2) == s1)
            .ok_or(ConjugatorError::NotIsomorphic)?;
        // Stab_b(b(g)y) = g·S₂·g⁻¹ = S₁, so b(h)·y′ ↦ a(h)·x is well defined.
        let y2 = b.image(g).apply(y);
        for h in 0..group.order() {
            img[b.image(h).apply(y2)] = a.image(h).apply(x);
        }
    }
    Ok(Perm::from_images(img).map_err(GroupError::from)?)
}

/// An equivariant bijection `t` with `b^t = a`, orbit by orbit.
pub fn hset_isomorphism(a: &GroupAction, b: &GroupAction) -> Result<Perm, ConjugatorError> {
    check_pair(a, b)?;
    if classify(a)? != classify(b)? {
        return Err(ConjugatorError::NotIsomorphic);
    }
    let all: Vec<usize> = (0..a.degree()).collect();
    let t = match_on(a, b, &all)?;
    debug_assert!(b.conjugate_by(&t).map(|c| &c == a).unwrap_or(false));
    Ok(t)
}

/// Conjugates `φ₂` onto `φ₁` by a permutation that is the identity on the
/// agreement set, so `hamming(t, id) ≤ |H|·d_H(φ₁, φ₂)`.
pub fn conjugate_close(phi1: &GroupAction, phi2: &GroupAction) -> Result<ConjugacyCertificate, ConjugatorError> {
    check_pair(phi1, phi2)?;
    if classify(phi1)? != classify(phi2)? {
        return Err(ConjugatorError::NotIsomorphic);
    }
    let agree = agreement_set(phi1, phi2)?;
    let mut in_agree = vec![false; phi1.degree()];
    for &x in &agree {
        in_agree[x] = true;
    }
    let rest: Vec<usize> = (0..phi1.degree()).filter(|&x| !in_agree[x]).collect();
    let t = match_on(phi1, phi2, &rest)?;
    let verified = phi2.conjugate_by(&t)? == *phi1;
    let d = action_distance(phi1, phi2)?;
    let support_fraction = hamming(&t, &Perm::identity(t.degree())).map_err(GroupError::from)?;
    Ok(ConjugacyCertificate {
        t,
        support_fraction,
        bound: d * phi1.group().order() as i64,
        verified,
    })
}
