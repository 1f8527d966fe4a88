//! Exact linear feasibility over `ℚ`: phase-one simplex with Bland's rule.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// A vertex of `{x ≥ 0 : Ax = b}`, or `None` when empty. `a` is row-major.
pub(super) fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // columns: x (n), artificial (m), rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = BigRational::one();
        row[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut obj = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..width {
            if j < n || j == width - 1 {
                obj[j] -= &row[j];
            }
        }
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) else { break };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let lr = &t[l][width - 1] / &t[l][enter];
                        if ratio < lr || (ratio == lr && basis[i] < basis[l]) {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
        }
        let leave = leave?;
        pivot(&mut t, &mut obj, leave, enter);
        basis[leave] = enter;
    }
    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], obj: &mut [BigRational], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for (x, y) in obj.iter_mut().zip(&prow) {
            *x -= &f * y;
        }
    }
}

/// Nonnegative `μ` with `Σ μᵢ gensᵢ = target`.
pub(super) fn nonneg_solution(gens: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let dim = target.len();
    let a: Vec<Vec<BigRational>> = (0..dim).map(|c| gens.iter().map(|g| q(g[c])).collect()).collect();
    let b: Vec<BigRational> = target.iter().map(|&x| q(x)).collect();
    feasible(&a, &b)
}

/// An integer functional `f` with `f(vᵢ) ≥ 1` for every generator, which
/// exists exactly when the cone is pointed.
pub(super) fn positive_functional(gens: &[Vec<i64>]) -> Option<Vec<i64>> {
    let dim = gens.first().map_or(0, Vec::len);
    let k = gens.len();
    if gens.iter().all(|g| g.iter().all(|&x| x >= 0)) {
        return Some(vec![1; dim]);
    }
    // variables f⁺ (dim), f⁻ (dim), slack (k): f·vᵢ − sᵢ = 1
    let a: Vec<Vec<BigRational>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row: Vec<BigRational> = g.iter().map(|&x| q(x)).collect();
            row.extend(g.iter().map(|&x| q(-x)));
            row.extend((0..k).map(|j| if i == j { q(-1) } else { q(0) }));
            row
        })
        .collect();
    let b = vec![q(1); k];
    let x = feasible(&a, &b)?;
    let f: Vec<BigRational> = (0..dim).map(|j| &x[j] - &x[dim + j]).collect();
    let lcm = f.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    f.iter()
        .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer().to_i64())
        .collect()
}

/// Solves `Σ αⱼ colsⱼ = b` for linearly independent columns.
pub(super) fn solve_columns(cols: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let r = cols.len();
    let m = b.len();
    let mut aug: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut prow = 0;
    let mut pivcols = Vec::new();
    for c in 0..r {
        let Some(p) = (prow..m).find(|&i| !aug[i][c].is_zero()) else { continue };
        aug.swap(prow, p);
        let pv = aug[prow][c].clone();
        for x in aug[prow].iter_mut() {
            *x /= &pv;
        }
        let pr = aug[prow].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != prow && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        pivcols.push(c);
        prow += 1;
    }
    if pivcols.len() < r || aug[prow..].iter().any(|row| !row[r].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); r];
    for (i, &c) in pivcols.iter().enumerate() {
        out[c] = aug[i][r].clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility() {
        let x = nonneg_solution(&[vec![1, 0], vec![1, 1]], &[3, 2]).unwrap();
        assert_eq!(x, vec![q(1), q(2)]);
        assert!(nonneg_solution(&[vec![1, 0], vec![1, 1]], &[-1, 0]).is_none());
        assert!(nonneg_solution(&[vec![1, 2]], &[1, 1]).is_none());
        assert!(nonneg_solution(&[vec![2], vec![-3]], &[-1]).is_some());
    }

    #[test]
    fn functional() {
        assert!(positive_functional(&[vec![1], vec![-1]]).is_none());
        let f = positive_functional(&[vec![1, -1], vec![2, 1]]).unwrap();
        assert!(f[0] - f[1] >= 1 && 2 * f[0] + f[1] >= 1);
    }
}
