//! Small named groups, given by faithful permutation generators.

use super::FiniteGroup;
use crate::perm::Perm;

fn build(degree: usize, gens: Vec<Perm>) -> FiniteGroup {
    FiniteGroup::from_perm_generators(degree, &gens).expect("named group within the default cap")
}

fn cycle(degree: usize, points: &[usize]) -> Perm {
    Perm::from_cycles(degree, &[points]).expect("valid cycle")
}

/// `ℤ_n` generated by the `n`-cycle on `n` points.
pub fn cyclic(n: usize) -> FiniteGroup {
    if n <= 1 {
        return build(1, vec![]);
    }
    let pts: Vec<usize> = (0..n).collect();
    build(n, vec![cycle(n, &pts)])
}

/// Dihedral group of order `2n` acting on the vertices of an `n`-gon;
/// generators: rotation, then reflection `i ↦ −i`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let pts: Vec<usize> = (0..n).collect();
    let rot = cycle(n, &pts);
    let refl = Perm::from_images((0..n).map(|i| (n - i) % n).collect()).expect("reflection");
    build(n, vec![rot, refl])
}

/// `S_n` generated by the `n`-cycle and the transposition `(0 1)`.
pub fn symmetric(n: usize) -> FiniteGroup {
    if n <= 1 {
        return build(1, vec![]);
    }
    let pts: Vec<usize> = (0..n).collect();
    build(n, vec![cycle(n, &pts), cycle(n, &[0, 1])])
}

/// `A_4` generated by `(0 1 2)` and `(0 1)(2 3)`.
pub fn alternating4() -> FiniteGroup {
    let a = cycle(4, &[0, 1, 2]);
    let b = Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).expect("double transposition");
    build(4, vec![a, b])
}

/// Direct product of two permutation groups acting on disjoint point sets;
/// generators of the first factor come first.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let gp = g.perms().expect("permutation group");
    let hp = h.perms().expect("permutation group");
    let (n1, n2) = (gp[0].degree(), hp[0].degree());
    let mut gens: Vec<Perm> = g
        .generators()
        .iter()
        .map(|&x| gp[x].coproduct(&Perm::identity(n2)))
        .collect();
    gens.extend(h.generators().iter().map(|&y| Perm::identity(n1).coproduct(&hp[y])));
    build(n1 + n2, gens)
}

/// `ℤ₂ × ℤ₂` acting on four points as `(0 1)` and `(2 3)`.
pub fn klein() -> FiniteGroup {
    direct_product(&cyclic(2), &cyclic(2))
}

/// Quaternion group of order 8 in its regular representation.
pub fn quaternion() -> FiniteGroup {
    // Elements 0..8 encode ±1, ±i, ±j, ±k as 2·unit + sign.
    let unit_mul = |a: usize, b: usize| -> (usize, bool) {
        // Returns (unit, negated) for products of 1, i, j, k.
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 1) => (3, true),
            (2, 3) => (1, false),
            (3, 2) => (1, true),
            (3, 1) => (2, false),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mul = |x: usize, y: usize| -> usize {
        let (u, neg) = unit_mul(x / 2, y / 2);
        let sign = (x % 2) ^ (y % 2) ^ usize::from(neg);
        2 * u + sign
    };
    let left = |g: usize| Perm::from_images((0..8).map(|x| mul(g, x)).collect()).expect("regular");
    build(8, vec![left(2), left(4)])
}
