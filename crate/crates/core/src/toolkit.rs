//! Metric inequalities for restrictions of permutations, with explicit
//! constants for the Hamming metric.
//!
//! Each function returns both sides of one inequality so that callers (and
//! property tests) can check `lhs ≤ rhs` exactly. `gap` below stands for
//! `|X| − |Y|`.

use num_rational::Rational64;
use serde::Serialize;

use crate::perm::{coproduct_all, hamming, subset_positions, GenMap, Perm, PermError, Word};

/// Constant in `d(a, a|_Y ⊔ 1) ≤ C·gap/|X|`. Two suffices; three is asserted.
pub const PADDING_CONSTANT: i64 = 3;
/// Constant in `d((a|_Y)|_Z, a|_Z) ≤ C·(|X| − |Z|)/|Z|`.
pub const NESTED_CONSTANT: i64 = 3;
/// Constant in `|d(a,b) − d(a|_Y, b|_Y)·|Y|/|X|| ≤ C·gap/|X|`.
///
/// Three is tight: on `X = {0,1,2}`, `Y = {0,1}`, `a = (0 2)`, `b = (1 2)`
/// the left side is 1 and the gap term is 1/3.
pub const RESTRICTED_DISTANCE_CONSTANT: i64 = 3;
/// Constant in `d(φ|_Y(r), 1_Y) ≤ C·|r|·gap/|Y|`. Two suffices; three is
/// asserted.
pub const RELATOR_CONSTANT: i64 = 3;

/// Both sides of one inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub lhs: Rational64,
    pub rhs: Rational64,
}

impl Bound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

fn rat(n: usize, d: usize) -> Rational64 {
    if d == 0 {
        Rational64::from_integer(0)
    } else {
        Rational64::new(n as i64, d as i64)
    }
}

fn check_subset(subset: &[usize], degree: usize) -> Result<(), PermError> {
    subset_positions(subset, degree)?;
    if subset.is_empty() {
        return Err(PermError::InvalidSubset("empty subset".into()));
    }
    Ok(())
}

/// `d(a|_Y ⊔ 1_{Y⊥}, a)` against `C·gap/|X|`.
pub fn padded_restriction(a: &Perm, subset: &[usize]) -> Result<Bound, PermError> {
    check_subset(subset, a.degree())?;
    let restricted = a.restrict(subset)?.embed(subset, a.degree())?;
    Ok(Bound {
        lhs: hamming(a, &restricted)?,
        rhs: rat(subset_gap(subset, a.degree()), a.degree()) * PADDING_CONSTANT,
    })
}

fn subset_gap(subset: &[usize], degree: usize) -> usize {
    degree - subset.len()
}

/// `#{y ∈ Y : a|_Y(y) ≠ a(y)}/|Y|` against `gap/|Y|`.
pub fn restriction_mismatch(a: &Perm, subset: &[usize]) -> Result<Bound, PermError> {
    check_subset(subset, a.degree())?;
    let r = a.restrict(subset)?;
    let moved = subset
        .iter()
        .enumerate()
        .filter(|&(i, &y)| subset[r.apply(i)] != a.apply(y))
        .count();
    Ok(Bound {
        lhs: rat(moved, subset.len()),
        rhs: rat(subset_gap(subset, a.degree()), subset.len()),
    })
}

/// For `Z ⊆ Y ⊆ X` (both as subsets of `X`): `d((a|_Y)|_Z, a|_Z)` against
/// `C·(|X| − |Z|)/|Z|`.
pub fn nested_restriction(a: &Perm, y: &[usize], z: &[usize]) -> Result<Bound, PermError> {
    check_subset(y, a.degree())?;
    check_subset(z, a.degree())?;
    let pos_y = subset_positions(y, a.degree())?;
    let z_in_y: Vec<usize> = z
        .iter()
        .map(|&p| match pos_y[p] {
            usize::MAX => Err(PermError::InvalidSubset(format!("{p} in Z but not in Y"))),
            i => Ok(i),
        })
        .collect::<Result<_, _>>()?;
    let twice = a.restrict(y)?.restrict(&z_in_y)?;
    let once = a.restrict(z)?;
    Ok(Bound {
        lhs: hamming(&twice, &once)?,
        rhs: rat(a.degree() - z.len(), z.len()) * NESTED_CONSTANT,
    })
}

/// `|d(a,b) − d(a|_Y, b|_Y)·|Y|/|X||` against `C·gap/|X|`.
pub fn restricted_distance(a: &Perm, b: &Perm, subset: &[usize]) -> Result<Bound, PermError> {
    check_subset(subset, a.degree())?;
    let whole = hamming(a, b)?;
    let part = hamming(&a.restrict(subset)?, &b.restrict(subset)?)? * rat(subset.len(), a.degree());
    let diff = whole - part;
    Ok(Bound {
        lhs: if diff < Rational64::from_integer(0) { -diff } else { diff },
        rhs: rat(subset_gap(subset, a.degree()), a.degree()) * RESTRICTED_DISTANCE_CONSTANT,
    })
}

/// `d(⊔a_i, ⊔b_i)` against `Σ d(a_i, b_i)·|X_i|/Σ|X_j|`; equality holds for
/// single permutations.
pub fn coproduct_distance(a: &[Perm], b: &[Perm]) -> Result<Bound, PermError> {
    if a.len() != b.len() {
        return Err(PermError::DegreeMismatch(a.len(), b.len()));
    }
    let total: usize = a.iter().map(Perm::degree).sum();
    let mut rhs = Rational64::from_integer(0);
    for (p, q) in a.iter().zip(b) {
        rhs += hamming(p, q)? * rat(p.degree(), total);
    }
    Ok(Bound {
        lhs: hamming(&coproduct_all(a), &coproduct_all(b))?,
        rhs,
    })
}

/// For a genuine action given on generators and a relation `r`:
/// `d(φ|_Y(r), 1_Y)` against `C·|r|·gap/|Y|`.
pub fn restricted_relator(gens: &GenMap, subset: &[usize], relation: &Word) -> Result<Bound, PermError> {
    let degree = gens.degree().unwrap_or(0);
    check_subset(subset, degree)?;
    let restricted = gens.restrict(subset)?;
    let p = restricted.evaluate(relation)?;
    Ok(Bound {
        lhs: hamming(&p, &Perm::identity(subset.len()))?,
        rhs: rat(subset_gap(subset, degree), subset.len()) * (RELATOR_CONSTANT * relation.len() as i64),
    })
}

/// Inputs for a full toolkit report; each optional block feeds one inequality.
#[derive(Debug, Clone, Default)]
pub struct ToolkitInputs {
    pub sums: Option<(Vec<Perm>, Vec<Perm>)>,
    pub padded_restriction: Option<(Perm, Vec<usize>)>,
    pub nested_restriction: Option<(Perm, Vec<usize>, Vec<usize>)>,
    pub restricted_distance: Option<(Perm, Perm, Vec<usize>)>,
    pub restricted_relator: Option<(GenMap, Vec<usize>, Word)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolkitEntry {
    pub inequality: &'static str,
    pub bound: Bound,
}

/// Evaluates every supplied block.
pub fn toolkit_report(inputs: &ToolkitInputs) -> Result<Vec<ToolkitEntry>, PermError> {
    let mut out = Vec::new();
    if let Some((a, b)) = &inputs.sums {
        out.push(ToolkitEntry { inequality: "coproduct_distance", bound: coproduct_distance(a, b)? });
    }
    if let Some((a, y)) = &inputs.padded_restriction {
        out.push(ToolkitEntry { inequality: "padded_restriction", bound: padded_restriction(a, y)? });
    }
    if let Some((a, y, z)) = &inputs.nested_restriction {
        out.push(ToolkitEntry { inequality: "nested_restriction", bound: nested_restriction(a, y, z)? });
    }
    if let Some((a, b, y)) = &inputs.restricted_distance {
        out.push(ToolkitEntry { inequality: "restricted_distance", bound: restricted_distance(a, b, y)? });
    }
    if let Some((g, y, r)) = &inputs.restricted_relator {
        out.push(ToolkitEntry { inequality: "restricted_relator", bound: restricted_relator(g, y, r)? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n).collect::<Vec<usize>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(v).unwrap())
    }

    fn subset_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
        proptest::collection::vec(any::<bool>(), n).prop_filter_map("nonempty", |mask| {
            let s: Vec<usize> = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i).collect();
            (!s.is_empty()).then_some(s)
        })
    }

    #[test]
    fn padded_restriction_examples() {
        let a = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let full = padded_restriction(&a, &[0, 1, 2, 3]).unwrap();
        assert_eq!(full.lhs, r(0, 1));
        let half = padded_restriction(&a, &[0, 1]).unwrap();
        // (0 1)⊔id₂ and (0 1 2 3) agree only at 0
        let embedded = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let brute = (0..4).filter(|&x| a.apply(x) != embedded.apply(x)).count() as i64;
        assert_eq!(brute, 3);
        assert_eq!(half.lhs, r(brute, 4));
        assert_eq!(half.rhs, r(3, 2));
        assert!(half.holds());
    }

    #[test]
    fn invariant_subset_gives_exact_nested_restrictioniction() {
        let a = Perm::from_cycles(6, &[&[0, 1, 2], &[3, 4]]).unwrap();
        let b = nested_restriction(&a, &[0, 1, 2, 5], &[0, 1, 2]).unwrap();
        assert_eq!(b.lhs, r(0, 1));
        let b = nested_restriction(&a, &[0, 1, 2], &[0, 1]).unwrap();
        assert_eq!(b.lhs, r(0, 1));
    }

    #[test]
    fn restricted_distance_needs_constant_three() {
        let a = Perm::from_cycles(3, &[&[0, 2]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let bound = restricted_distance(&a, &b, &[0, 1]).unwrap();
        assert_eq!(bound.lhs, r(1, 1));
        let gap = r(1, 3);
        assert!(bound.lhs > gap * 2);
        assert_eq!(bound.rhs, gap * 3);
        assert!(bound.holds());
    }

    #[test]
    fn restricted_relator_example() {
        let c = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let g = GenMap::new(vec!["c".into()], vec![c]).unwrap();
        let r4 = Word::from_letters([("c", 1); 4]);
        // c|_{0,1,2} is the 3-cycle, whose fourth power is itself
        let b = restricted_relator(&g, &[0, 1, 2], &r4).unwrap();
        assert_eq!(b.lhs, r(1, 1));
        assert_eq!(b.rhs, r(4, 1));
        let b = restricted_relator(&g, &[0, 1, 2, 3], &r4).unwrap();
        assert_eq!(b.lhs, r(0, 1));
    }

    #[test]
    fn report_collects_supplied_blocks() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let inputs = ToolkitInputs {
            padded_restriction: Some((a.clone(), vec![0, 2])),
            sums: Some((vec![a.clone()], vec![Perm::identity(3)])),
            ..Default::default()
        };
        let rep = toolkit_report(&inputs).unwrap();
        assert_eq!(rep.len(), 2);
        assert_eq!(rep[0].inequality, "coproduct_distance");
        assert!(rep.iter().all(|e| e.bound.holds()));
    }

    proptest! {
        #[test]
        fn hamming_is_bi_invariant((p, q, s) in (1usize..10).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n), perm_strategy(n)))) {
            let d = hamming(&p, &q).unwrap();
            prop_assert_eq!(hamming(&(&s * &p), &(&s * &q)).unwrap(), d);
            prop_assert_eq!(hamming(&(&p * &s), &(&q * &s)).unwrap(), d);
        }

        #[test]
        fn coproduct_scales_distance((a1, a2, b) in (1usize..8, 0usize..8).prop_flat_map(|(n1, n2)| (perm_strategy(n1), perm_strategy(n1), perm_strategy(n2)))) {
            let n1 = a1.degree() as i64;
            let total = n1 + b.degree() as i64;
            prop_assert_eq!(
                hamming(&a1.coproduct(&b), &a2.coproduct(&b)).unwrap(),
                hamming(&a1, &a2).unwrap() * Rational64::new(n1, total)
            );
            let bound = coproduct_distance(&[a1, b.clone()], &[a2, b]).unwrap();
            prop_assert_eq!(bound.lhs, bound.rhs);
        }

        #[test]
        fn restriction_bounds((a, b, y) in (1usize..12).prop_flat_map(|n| (perm_strategy(n), perm_strategy(n), subset_strategy(n)))) {
            prop_assert!(restriction_mismatch(&a, &y).unwrap().holds());
            prop_assert!(padded_restriction(&a, &y).unwrap().holds());
            prop_assert!(restricted_distance(&a, &b, &y).unwrap().holds());
            // the sharper constant two for the one-sided restriction bound
            let two = padded_restriction(&a, &y).unwrap();
            prop_assert!(two.lhs <= two.rhs * Rational64::new(2, 3));
        }

        #[test]
        fn nested_restrictioniction_bound((a, y, keep) in (1usize..12).prop_flat_map(|n| (perm_strategy(n), subset_strategy(n), proptest::collection::vec(any::<bool>(), n)))) {
            let z: Vec<usize> = y.iter().zip(&keep).filter(|(_, &k)| k).map(|(&p, _)| p).collect();
            prop_assume!(!z.is_empty());
            prop_assert!(nested_restriction(&a, &y, &z).unwrap().holds());
        }
    }
}
