#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stabilis_core::group::GroupAction;
use stabilis_core::Perm;
use stabilis_unitary::{Tolerances, UMatrix, URep};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// `e_x ↦ e_{p(x)}`.
pub fn perm_matrix(p: &Perm) -> UMatrix {
    let n = p.degree();
    let mut m = DMatrix::zeros(n, n);
    for x in 0..n {
        m[(p.apply(x), x)] = Complex64::new(1.0, 0.0);
    }
    UMatrix::from_matrix(m).unwrap()
}

pub fn linearize(a: &GroupAction) -> URep {
    URep::new(a.group(), a.images().iter().map(perm_matrix).collect(), &Tolerances::default()).unwrap()
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Cayley transform `(I − iA)(I + iA)⁻¹` of a Hermitian `A` with
/// `‖A‖_F = scale`.
pub fn random_unitary(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> UMatrix {
    let h = random_hermitian(n, rng);
    let norm = h.norm();
    let a = if norm == 0.0 { h } else { h * Complex64::new(scale / norm, 0.0) };
    let i = Complex64::new(0.0, 1.0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let num = &id - &a * i;
    let den = (&id + &a * i).try_inverse().unwrap();
    UMatrix::from_matrix(num * den).unwrap()
}

pub fn svd_norm(a: &UMatrix) -> f64 {
    a.matrix().clone().svd(false, false).singular_values.max()
}
