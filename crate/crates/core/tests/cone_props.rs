use std::collections::HashSet;

use num_rational::Rational64;
use proptest::prelude::*;
use stabilis_core::cone::{relation_lattice_basis, IntCone, Membership, SearchBudget};

/// Independent oracle: all cone points inside the box `[0, bound]ᴺ` by
/// closure under adding generators (nonnegative generators only).
fn box_closure(gens: &[Vec<i64>], bound: i64) -> HashSet<Vec<i64>> {
    let dim = gens[0].len();
    let mut seen = HashSet::new();
    let mut stack = vec![vec![0i64; dim]];
    seen.insert(vec![0i64; dim]);
    while let Some(p) = stack.pop() {
        for g in gens {
            let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
            if q.iter().all(|&x| x <= bound) && seen.insert(q.clone()) {
                stack.push(q);
            }
        }
    }
    seen
}

fn nonneg_cone() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=3).prop_flat_map(|dim| prop::collection::vec(prop::collection::vec(0i64..=4, dim), 1..=4)).prop_filter_map(
        "nonzero distinct generators",
        |gens| {
            let mut out: Vec<Vec<i64>> = Vec::new();
            for g in gens {
                if g.iter().any(|&x| x != 0) && !out.contains(&g) {
                    out.push(g);
                }
            }
            (!out.is_empty()).then_some(out)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn relations_are_a_kernel_basis(gens in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..=5)) {
        let gens: Vec<Vec<i64>> = gens.into_iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
        prop_assume!(!gens.is_empty());
        let rel = relation_lattice_basis(&gens).unwrap();
        for r in &rel {
            for c in 0..3 {
                prop_assert_eq!(r.iter().zip(&gens).map(|(a, g)| a * g[c]).sum::<i64>(), 0);
            }
        }
        let cone = IntCone::new(3, {
            let mut d: Vec<Vec<i64>> = Vec::new();
            for g in &gens { if !d.contains(g) { d.push(g.clone()); } }
            d
        }, None).unwrap();
        prop_assert_eq!(cone.rank().unwrap() + cone.relations().unwrap().len(), cone.generators().len());
    }

    #[test]
    fn membership_matches_box_closure(gens in nonneg_cone()) {
        let dim = gens[0].len();
        let cone = IntCone::new(dim, gens.clone(), None).unwrap();
        let bound = 7;
        let reach = box_closure(&gens, bound);
        let budget = SearchBudget::default();
        let mut point = vec![0i64; dim];
        loop {
            let m = cone.member(&point, &budget).unwrap();
            prop_assert_eq!(m.is_member(), reach.contains(&point), "point {:?}", point);
            if let Membership::Member { coeffs, .. } = &m {
                prop_assert!(coeffs.iter().all(|&c| c >= 0));
                prop_assert_eq!(&cone.combine(coeffs).unwrap(), &point);
            }
            let mut i = 0;
            while i < dim && point[i] == bound { point[i] = 0; i += 1; }
            if i == dim { break; }
            point[i] += 1;
        }
    }

    #[test]
    fn dense_shift_is_inside(gens in nonneg_cone(), extra in prop::collection::vec(0i64..4, 4)) {
        let dim = gens[0].len();
        let cone = IntCone::new(dim, gens.clone(), None).unwrap();
        let w0 = cone.w0().unwrap();
        // w₀ plus a nonnegative integer combination is in K by the dense route.
        let mut point = w0.clone();
        for (g, &c) in gens.iter().zip(&extra) {
            for (p, x) in point.iter_mut().zip(g) { *p += c * x; }
        }
        let dense = cone.member_dense(&point).unwrap();
        prop_assert!(dense.is_some());
        prop_assert_eq!(cone.combine(&dense.unwrap()).unwrap(), point);
    }

    #[test]
    fn double_solve_balances(gens in nonneg_cone(), c1 in prop::collection::vec(0i64..3, 4), c2 in prop::collection::vec(0i64..3, 4)) {
        let dim = gens[0].len();
        let cone = IntCone::new(dim, gens.clone(), None).unwrap();
        let k = gens.len();
        let xi1 = cone.combine(&c1[..k]).unwrap();
        let xi2 = cone.combine(&c2[..k]).unwrap();
        let s = cone.double_solve(&xi1, &xi2, &SearchBudget::default()).unwrap();
        for c in 0..dim {
            prop_assert_eq!(xi1[c] + s.eta1[c], xi2[c] + s.eta2[c]);
        }
        prop_assert_eq!(cone.combine(&s.cert1).unwrap(), s.eta1.clone());
        prop_assert_eq!(cone.combine(&s.cert2).unwrap(), s.eta2.clone());
        // η₂ = ξ₁ − ξ₂ + η₁ is forced, so any solution with smaller ‖η₁‖ would
        // also be found by brute force over the box.
        let reach = box_closure(&gens, 12);
        for eta in &reach {
            if cone.norm(eta) < cone.norm(&s.eta1) {
                let eta2: Vec<i64> = (0..dim).map(|c| xi1[c] + eta[c] - xi2[c]).collect();
                prop_assert!(!reach.contains(&eta2) || eta2.iter().any(|&x| x < 0));
            }
        }
    }
}

#[test]
fn numerical_semigroup_against_brute_force() {
    let budget = SearchBudget::default();
    for gens in [vec![2, 3], vec![3, 5], vec![4, 6, 9], vec![5, 7, 11]] {
        let cone = IntCone::new(1, gens.iter().map(|&g| vec![g]).collect(), None).unwrap();
        let mut reach = vec![false; 120];
        reach[0] = true;
        for x in 1..120 {
            reach[x] = gens.iter().any(|&g| g as usize <= x && reach[x - g as usize]);
        }
        for (x, &r) in reach.iter().enumerate() {
            assert_eq!(cone.member(&[x as i64], &budget).unwrap().is_member(), r, "{gens:?} at {x}");
        }
        let w0 = cone.w0().unwrap()[0] as usize;
        assert!(reach[w0.min(119)..].iter().all(|&r| r));
    }
}

#[test]
fn weighted_norm() {
    let cone = IntCone::new(2, vec![vec![1, 0]], Some(vec![Rational64::from_integer(2), Rational64::new(1, 2)])).unwrap();
    assert_eq!(cone.norm(&[3, -4]), Rational64::from_integer(8));
}
