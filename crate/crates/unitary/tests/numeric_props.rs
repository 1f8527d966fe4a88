mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use stabilis_core::amalgam::{AmalgamSpec, HnnSpec};
use stabilis_core::burnside::Inclusion;
use stabilis_core::conjugator::hset_isomorphism;
use stabilis_core::group::named::{cyclic, dihedral, klein, quaternion, symmetric};
use stabilis_core::group::{coset_action, FiniteGroup, GroupAction, Subgroup};
use stabilis_unitary::*;

fn small_groups() -> Vec<FiniteGroup> {
    vec![cyclic(2), cyclic(3), cyclic(5), klein(), symmetric(3), dihedral(4), quaternion()]
}

/// A unitary representation of dimension at most 8: a permutation
/// representation in a random basis.
fn random_rep(g: &FiniteGroup, r: &mut rand_chacha::ChaCha8Rng) -> URep {
    let mut action = coset_action(g, &Subgroup::trivial(g)).unwrap();
    let subs = g.subgroup_classes().unwrap();
    while action.degree() < 8 && r.gen_bool(0.5) {
        let cl = &subs[r.gen_range(0..subs.len())];
        if action.degree() + cl.index > 8 {
            break;
        }
        action = action.coproduct(&coset_action(g, &Subgroup::new(g, cl.rep.clone()).unwrap()).unwrap()).unwrap();
    }
    let base = random_unitary(action.degree(), 3.0, r);
    linearize(&action).conjugate_by(&base).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn op_norm_matches_svd(seed in any::<u64>(), n in 1usize..9) {
        let mut r = rng(seed);
        let m = nalgebra::DMatrix::from_fn(n, n, |_, _| Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)));
        let a = UMatrix::from_matrix(m).unwrap();
        let exact = svd_norm(&a);
        prop_assert!((op_norm(&a).unwrap() - exact).abs() <= 1e-9 * exact.max(1.0));
    }

    #[test]
    fn polar_matches_svd(seed in any::<u64>(), n in 1usize..9, eps in 0.0f64..0.9) {
        let mut r = rng(seed);
        let h = random_hermitian(n, &mut r);
        let scale = if h.norm() == 0.0 { 0.0 } else { eps / h.norm() };
        let a_m = nalgebra::DMatrix::<Complex64>::identity(n, n) + random_hermitian(n, &mut r) * Complex64::new(0.0, scale) + h * Complex64::new(scale, 0.0);
        let a = UMatrix::from_matrix(a_m.clone()).unwrap();
        let u = polar_unitary(&a, &Tolerances::default()).unwrap();
        let svd = a_m.svd(true, true);
        let oracle = UMatrix::from_matrix(svd.u.unwrap() * svd.v_t.unwrap()).unwrap();
        prop_assert!(u.distance(&oracle).unwrap() < 1e-10);
        prop_assert!(u.unitarity_defect().unwrap() < 1e-12);
        let dev = a.distance(&UMatrix::identity(n)).unwrap();
        prop_assert!(u.distance(&UMatrix::identity(n)).unwrap() <= 2.0 * dev + 1e-12);
    }

    #[test]
    fn conjugator_bound_and_residual(seed in any::<u64>(), angle in 0.0f64..0.1) {
        let mut r = rng(seed);
        let groups = small_groups();
        let g = &groups[r.gen_range(0..groups.len())];
        let phi1 = random_rep(g, &mut r);
        let rot = random_unitary(phi1.dim(), angle / 2.0, &mut r);
        let phi2 = phi1.conjugate_by(&rot).unwrap();
        let d = rep_distance(&phi1, &phi2).unwrap();
        prop_assume!(d < 1.0);
        let a = average_intertwiner(&phi1, &phi2).unwrap();
        prop_assert!(a.distance(&UMatrix::identity(a.dim())).unwrap() <= d + 1e-12);
        prop_assert!(intertwining_defect(&phi1, &phi2, &a).unwrap() <= 1e-12);
        let c = op_conjugate_close(&phi1, &phi2, d, &Tolerances::default()).unwrap();
        prop_assert!(c.deviation <= 2.0 * d + 1e-12);
        prop_assert!(c.residual <= 1e-8);
    }
}

#[test]
fn block_diagonal_conjugation_stays_block_diagonal() {
    let g = symmetric(3);
    let mut r = rng(11);
    let a = linearize(&coset_action(&g, &Subgroup::trivial(&g)).unwrap());
    let b = linearize(&GroupAction::trivial(&g, 2));
    let block = |x: &UMatrix, y: &UMatrix| {
        let (n, m) = (x.dim(), y.dim());
        let mut out = nalgebra::DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(x.matrix());
        out.view_mut((n, n), (m, m)).copy_from(y.matrix());
        UMatrix::from_matrix(out).unwrap()
    };
    let images: Vec<UMatrix> = a.images().iter().zip(b.images()).map(|(x, y)| block(x, y)).collect();
    let phi1 = URep::new(&g, images, &Tolerances::default()).unwrap();
    let rot = block(&random_unitary(6, 0.05, &mut r), &random_unitary(2, 0.05, &mut r));
    let phi2 = phi1.conjugate_by(&rot).unwrap();
    let d = rep_distance(&phi1, &phi2).unwrap();
    let u = op_conjugate_close(&phi1, &phi2, d, &Tolerances::default()).unwrap().u;
    for i in 0..6 {
        for j in 6..8 {
            assert!(u.matrix()[(i, j)].norm() < 1e-10);
            assert!(u.matrix()[(j, i)].norm() < 1e-10);
        }
    }
}

fn z2_into(g: &FiniteGroup, x: usize) -> Inclusion {
    let z2 = cyclic(2);
    let mut e = vec![0; 2];
    e[z2.identity()] = g.identity();
    e[1 - z2.identity()] = x;
    Inclusion::new(&z2, g, e).unwrap()
}

#[test]
fn two_dimensional_amalgam_example() {
    let tol = Tolerances::default();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let k = klein();
    let z4 = cyclic(4);
    let r4 = z4.generators()[0];
    let spec = AmalgamSpec::new(z2_into(&k, k.generators()[0]), z2_into(&z4, z4.mul(r4, r4))).unwrap();
    let phi1 = URep::from_generator_images(&k, &[UMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]), UMatrix::diagonal(&[c(-1.0, 0.0), c(1.0, 0.0)])], &tol).unwrap();
    let phi2 = URep::from_generator_images(&z4, &[UMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 1.0)])], &tol)
        .unwrap()
        .conjugate_by(&UMatrix::rotation(2, 0, 1, 0.01))
        .unwrap();
    let out = op_stabilize_amalgam(&spec, &phi1, &phi2, &tol).unwrap();
    assert!(out.residual <= 1e-8);
    assert!(out.distance <= 0.08);
    assert!(out.distance <= 4.0 * out.delta + 1e-12);
    assert_eq!(out.psi1, phi1);
    let exact = op_stabilize_amalgam(&spec, &phi1, &out.psi2, &tol).unwrap();
    assert!(exact.distance < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn double_amalgam_and_hnn(seed in any::<u64>(), angle in 0.0f64..0.1) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let groups = small_groups();
        let g = &groups[r.gen_range(0..groups.len())];
        let subs = g.subgroup_classes().unwrap();
        let cl = &subs[r.gen_range(0..subs.len())];
        let inc = Inclusion::from_subgroup(g, &Subgroup::new(g, cl.rep.clone()).unwrap()).unwrap();
        let phi1 = random_rep(g, &mut r);
        let phi2 = phi1.conjugate_by(&random_unitary(phi1.dim(), angle / 2.0, &mut r)).unwrap();
        let spec = AmalgamSpec::new(inc.clone(), inc.clone()).unwrap();
        let out = op_stabilize_amalgam(&spec, &phi1, &phi2, &tol).unwrap();
        prop_assert!(out.distance <= 4.0 * out.delta + 1e-12);
        prop_assert!(out.residual <= 1e-8);

        let hnn = HnnSpec::new(inc.clone(), inc).unwrap();
        let t = random_unitary(phi1.dim(), angle / 2.0, &mut r);
        let out = op_stabilize_hnn(&hnn, &phi1, &t, &tol).unwrap();
        prop_assert!(out.distance <= 2.0 * out.delta + 1e-12);
        prop_assert!(out.residual <= 1e-8);
    }
}

#[test]
fn klein_hnn_over_two_factors() {
    let tol = Tolerances::default();
    let k = klein();
    let spec = HnnSpec::new(z2_into(&k, k.generators()[0]), z2_into(&k, k.generators()[1])).unwrap();
    let reg = coset_action(&k, &Subgroup::trivial(&k)).unwrap();
    let a = spec.i1.restrict_action(&reg).unwrap();
    let b = spec.i2.restrict_action(&reg).unwrap();
    let t = hset_isomorphism(&a, &b).unwrap();
    let phi = linearize(&reg);
    let exact = perm_matrix(&t);
    let same = op_stabilize_hnn(&spec, &phi, &exact, &tol).unwrap();
    assert!(same.distance < 1e-12);
    let mut r = rng(5);
    let noisy = random_unitary(4, 0.05, &mut r).mul(&exact).unwrap();
    let out = op_stabilize_hnn(&spec, &phi, &noisy, &tol).unwrap();
    assert!(out.delta > 0.0);
    assert!(out.distance <= 2.0 * out.delta + 1e-12);
    assert!(out.residual <= 1e-8);
}
