//! Integer row reduction of `[V | I]` over `ℤ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ConeError;

pub(super) struct Reduction {
    pub echelon: Vec<Vec<i64>>,
    pub pivots: Vec<usize>,
    pub transform: Vec<Vec<i64>>,
    pub relations: Vec<Vec<i64>>,
}

fn to_i64(rows: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>, ConeError> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or(ConeError::Overflow)).collect())
        .collect()
}

fn l1(v: &[i64]) -> i128 {
    v.iter().map(|&x| (x as i128).abs()).sum()
}

pub(super) fn reduce(gens: &[Vec<i64>]) -> Result<Reduction, ConeError> {
    let k = gens.len();
    let n = gens.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<BigInt>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut r: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
            r.extend((0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..n {
        if top == k {
            break;
        }
        loop {
            let best = (top..k)
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(top, best);
            let mut done = true;
            for r in top + 1..k {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[top][col]);
                let pivot_row = rows[top].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if top < k && !rows[top][col].is_zero() {
            if rows[top][col].is_negative() {
                for x in rows[top].iter_mut() {
                    *x = -&*x;
                }
            }
            for r in 0..top {
                let q = rows[r][col].div_floor(&rows[top][col]);
                if !q.is_zero() {
                    let pivot_row = rows[top].clone();
                    for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            pivots.push(col);
            top += 1;
        }
    }
    let echelon: Vec<Vec<BigInt>> = rows[..top].iter().map(|r| r[..n].to_vec()).collect();
    let transform: Vec<Vec<BigInt>> = rows[..top].iter().map(|r| r[n..].to_vec()).collect();
    let kernel: Vec<Vec<BigInt>> = rows[top..].iter().map(|r| r[n..].to_vec()).collect();
    Ok(Reduction {
        echelon: to_i64(&echelon)?,
        pivots,
        transform: to_i64(&transform)?,
        relations: shorten(to_i64(&kernel)?),
    })
}

/// Pairwise `ℓ¹` reduction of a lattice basis, then sign and order
/// normalization. Unimodular, so the span is unchanged.
fn shorten(mut basis: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                for s in [1i64, -1] {
                    let cand: Vec<i64> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + s * b).collect();
                    if l1(&cand) < l1(&basis[i]) {
                        basis[i] = cand;
                        changed = true;
                    }
                }
            }
        }
    }
    for b in basis.iter_mut() {
        if b.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            for x in b.iter_mut() {
                *x = -*x;
            }
        }
    }
    basis.sort_by(|a, b| l1(a).cmp(&l1(b)).then_with(|| a.cmp(b)));
    basis
}

/// Basis of `{λ ∈ ℤᵏ : Σ λᵢvᵢ = 0}`; the first nonzero entry of each vector
/// is positive.
pub fn relation_lattice_basis(gens: &[Vec<i64>]) -> Result<Vec<Vec<i64>>, ConeError> {
    Ok(reduce(gens)?.relations)
}
