#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stabilis_core::burnside::Inclusion;
use stabilis_core::group::{realize, BurnsideVector, FiniteGroup, GroupAction, Subgroup};
use stabilis_core::Perm;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Perm::from_images(v).unwrap()
}

/// A permutation moving at most `k` points.
pub fn small_support_perm(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Perm {
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let chosen = &pts[..k.min(n)];
    let mut shuffled = chosen.to_vec();
    shuffled.shuffle(rng);
    let mut img: Vec<usize> = (0..n).collect();
    for (a, b) in chosen.iter().zip(&shuffled) {
        img[*a] = *b;
    }
    Perm::from_images(img).unwrap()
}

pub fn random_type(g: &FiniteGroup, max_degree: usize, rng: &mut ChaCha8Rng) -> BurnsideVector {
    let classes = g.subgroup_classes().unwrap();
    let mut coeffs = vec![0i64; classes.len()];
    let mut size = 0;
    let target = rng.gen_range(1..=max_degree);
    let mut guard = 0;
    while size < target && guard < 100 {
        guard += 1;
        let t = rng.gen_range(0..classes.len());
        if size + classes[t].index <= max_degree {
            coeffs[t] += 1;
            size += classes[t].index;
        }
    }
    BurnsideVector::new(g, coeffs).unwrap()
}

/// A random genuine action with relabeled points.
pub fn random_action(g: &FiniteGroup, max_degree: usize, rng: &mut ChaCha8Rng) -> GroupAction {
    let a = realize(&random_type(g, max_degree, rng)).unwrap();
    let p = random_perm(a.degree(), rng);
    a.conjugate_by(&p).unwrap()
}

pub fn sub_inclusion(g: &FiniteGroup, gens: &[usize]) -> Inclusion {
    Inclusion::from_subgroup(g, &Subgroup::new(g, g.closure(gens)).unwrap()).unwrap()
}

/// Every subgroup of `g` up to conjugacy, as inclusions.
pub fn all_inclusions(g: &FiniteGroup) -> Vec<Inclusion> {
    g.subgroup_classes()
        .unwrap()
        .iter()
        .map(|c| Inclusion::from_subgroup(g, &Subgroup::new(g, c.rep.clone()).unwrap()).unwrap())
        .collect()
}

