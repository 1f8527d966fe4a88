//! Seeded perturbation of genuine actions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use stabilis_core::group::GroupAction;
use stabilis_core::oracle::{repair, AlmostAction};
use stabilis_core::{Perm, Rational64};

use crate::report::rat;
use crate::CliError;

/// `k` random transpositions per generator, drawn from `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    pub k: usize,
    pub seed: u64,
}

impl Perturbation {
    pub fn rng(&self) -> ChaCha8Rng {
        rand::SeedableRng::seed_from_u64(self.seed)
    }
}

/// What the perturbation did before repair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbInfo {
    pub k: usize,
    pub seed: u64,
    /// Multiplicativity defect of the perturbed generator data.
    #[serde(with = "rat")]
    pub almost_defect: Rational64,
    /// Distance from the perturbed data to its repair.
    #[serde(with = "rat")]
    pub repair_distance: Rational64,
}

fn transposition(n: usize, rng: &mut ChaCha8Rng) -> Perm {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    Perm::transposition(n, a, b)
}

/// Composes `p` with `k` uniformly random transpositions, each on the left or
/// the right with equal probability.
pub fn perturb_perm(p: &Perm, k: usize, rng: &mut ChaCha8Rng) -> Perm {
    let n = p.degree();
    if n < 2 {
        return p.clone();
    }
    let mut out = p.clone();
    for _ in 0..k {
        let t = transposition(n, rng);
        out = if rng.gen_bool(0.5) { &t * &out } else { &out * &t };
    }
    out
}

/// Perturbs every generator image of `a`, then repairs the result into a
/// genuine action.
pub fn perturb_action(a: &GroupAction, p: &Perturbation) -> Result<(GroupAction, PerturbInfo), CliError> {
    let mut rng = p.rng();
    let gens: Vec<Perm> = a
        .group()
        .generators()
        .iter()
        .map(|&s| perturb_perm(a.image(s), p.k, &mut rng))
        .collect();
    let almost = AlmostAction::from_generator_images(a.group(), a.degree(), &gens)?;
    let report = repair(&almost)?;
    Ok((
        report.repaired,
        PerturbInfo {
            k: p.k,
            seed: p.seed,
            almost_defect: report.defect_in,
            repair_distance: report.distance,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use stabilis_core::group::named::symmetric;
    use stabilis_core::group::{coset_action, Subgroup};

    #[test]
    fn zero_rate_is_identity() {
        let g = symmetric(3);
        let a = coset_action(&g, &Subgroup::trivial(&g)).unwrap();
        let (b, info) = perturb_action(&a, &Perturbation { k: 0, seed: 3 }).unwrap();
        assert_eq!(a, b);
        assert_eq!(info.almost_defect, Rational64::from_integer(0));
    }

    #[test]
    fn seeded() {
        let p = Perm::identity(10);
        let a = perturb_perm(&p, 3, &mut Perturbation { k: 3, seed: 9 }.rng());
        let b = perturb_perm(&p, 3, &mut Perturbation { k: 3, seed: 9 }.rng());
        assert_eq!(a, b);
        assert!(a.support_size() <= 6);
    }
}
