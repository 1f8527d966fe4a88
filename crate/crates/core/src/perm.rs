//! Permutations of `{0, …, n−1}`, the normalized Hamming metric, coproducts,
//! restriction to subsets and word evaluation.
//!
//! A permutation is stored by its image table: `image[i]` is where point `i`
//! goes. Composition follows function composition, `(p * q)(x) = p(q(x))`, so
//! group actions are left actions: `φ(gh) = φ(g) * φ(h)`.

use std::fmt;
use std::ops::Mul;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exponent of the metric inequalities for permutations (`s = 1`).
///
/// The Hilbert–Schmidt variant would use `1/2`; only the permutation case is
/// implemented here, so every bound in this crate is linear in the gap.
pub const METRIC_EXPONENT: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image table is not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("unknown generator symbol `{0}`")]
    UnknownSymbol(String),
    #[error("generator map is malformed: {0}")]
    MalformedGenMap(String),
}

/// A bijection of `{0, …, degree−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    image: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = PermError;

    fn try_from(image: Vec<usize>) -> Result<Self, Self::Error> {
        Perm::from_images(image)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.image
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.image)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation, fixed points omitted; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let parts: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            image: (0..degree).collect(),
        }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self, PermError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || seen[y] {
                return Err(PermError::NotBijection(n));
            }
            seen[y] = true;
        }
        Ok(Perm { image })
    }

    /// Builds a permutation of `degree` points from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut image: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree || touched[x] {
                    return Err(PermError::NotBijection(degree));
                }
                touched[x] = true;
                image[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm::from_images(image)
    }

    /// The transposition `(a b)` on `degree` points; `a == b` gives the identity.
    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..degree).collect();
        image.swap(a, b);
        Perm { image }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Perm { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Perm {
            image: other.image.iter().map(|&y| self.image[y]).collect(),
        })
    }

    /// `t ∘ self ∘ t⁻¹`.
    pub fn conjugate_by(&self, t: &Perm) -> Perm {
        let mut image = vec![0; self.degree()];
        for x in 0..self.degree() {
            image[t.apply(x)] = t.apply(self.apply(x));
        }
        Perm { image }
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut result = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            result = &base * &result;
        }
        result
    }

    /// Number of points moved.
    pub fn support_size(&self) -> usize {
        self.image.iter().enumerate().filter(|(i, &y)| *i != y).count()
    }

    /// Non-trivial cycles, each starting at its smallest point, in increasing
    /// order of that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Acts as `self` on the first `n₁` points and as `other` shifted by `n₁`
    /// on the rest.
    pub fn coproduct(&self, other: &Perm) -> Perm {
        let shift = self.degree();
        let mut image = self.image.clone();
        image.extend(other.image.iter().map(|&y| y + shift));
        Perm { image }
    }

    /// Restriction to a subset `Y` (sorted, duplicate-free).
    ///
    /// The result permutes the positions `0..|Y|` of `Y` and agrees with `self`
    /// on every `y ∈ Y` with `self(y) ∈ Y`. The remaining sources are matched
    /// to the unused targets of `Y` in increasing order.
    pub fn restrict(&self, subset: &[usize]) -> Result<Perm, PermError> {
        let pos = subset_positions(subset, self.degree())?;
        let m = subset.len();
        let mut image = vec![usize::MAX; m];
        let mut hit = vec![false; m];
        for (i, &y) in subset.iter().enumerate() {
            let target = pos[self.image[y]];
            if target != usize::MAX {
                image[i] = target;
                hit[target] = true;
            }
        }
        let mut free = (0..m).filter(|&j| !hit[j]);
        for slot in image.iter_mut() {
            if *slot == usize::MAX {
                *slot = free.next().expect("partial injection has equal gaps");
            }
        }
        Ok(Perm { image })
    }

    /// Places a permutation of a subset's positions back into `degree` points,
    /// acting as the identity off the subset.
    pub fn embed(&self, subset: &[usize], degree: usize) -> Result<Perm, PermError> {
        if subset.len() != self.degree() {
            return Err(PermError::DegreeMismatch(subset.len(), self.degree()));
        }
        subset_positions(subset, degree)?;
        let mut image: Vec<usize> = (0..degree).collect();
        for (i, &y) in subset.iter().enumerate() {
            image[y] = subset[self.image[i]];
        }
        Ok(Perm { image })
    }

    /// Extends to `degree ≥ self.degree()` points by fixing the new ones.
    pub fn pad(&self, degree: usize) -> Perm {
        let mut image = self.image.clone();
        image.extend(self.degree()..degree.max(self.degree()));
        Perm { image }
    }
}

impl Mul for &Perm {
    type Output = Perm;

    /// Composition; panics on degree mismatch. Use [`Perm::compose`] for the
    /// checked version.
    fn mul(self, rhs: &Perm) -> Perm {
        self.compose(rhs).expect("degree mismatch in permutation product")
    }
}

/// Checks that `subset` is sorted, duplicate-free and inside `0..degree`, and
/// returns the inverse position table (`usize::MAX` off the subset).
pub fn subset_positions(subset: &[usize], degree: usize) -> Result<Vec<usize>, PermError> {
    let mut pos = vec![usize::MAX; degree];
    for (i, &y) in subset.iter().enumerate() {
        if y >= degree {
            return Err(PermError::InvalidSubset(format!("point {y} outside 0..{degree}")));
        }
        if i > 0 && subset[i - 1] >= y {
            return Err(PermError::InvalidSubset("not strictly increasing".into()));
        }
        pos[y] = i;
    }
    Ok(pos)
}

/// Sorted complement of a subset inside `0..degree`.
pub fn complement(subset: &[usize], degree: usize) -> Vec<usize> {
    let mut inside = vec![false; degree];
    for &y in subset {
        inside[y] = true;
    }
    (0..degree).filter(|&x| !inside[x]).collect()
}

/// `#{x : p(x) ≠ q(x)} / degree`. Degree zero gives zero.
pub fn hamming(p: &Perm, q: &Perm) -> Result<Rational64, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch(p.degree(), q.degree()));
    }
    if p.degree() == 0 {
        return Ok(Rational64::from_integer(0));
    }
    let moved = p
        .image
        .iter()
        .zip(&q.image)
        .filter(|(a, b)| a != b)
        .count();
    Ok(Rational64::new(moved as i64, p.degree() as i64))
}

/// Coproduct of any number of permutations, in order.
pub fn coproduct_all<'a>(parts: impl IntoIterator<Item = &'a Perm>) -> Perm {
    parts
        .into_iter()
        .fold(Perm::identity(0), |acc, p| acc.coproduct(p))
}

/// One letter of a free-group word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub symbol: String,
    /// `+1` or `−1`.
    pub exponent: i8,
}

/// A word in a free group, read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_letters<S: Into<String>>(letters: impl IntoIterator<Item = (S, i8)>) -> Self {
        Word {
            letters: letters
                .into_iter()
                .map(|(s, e)| Letter {
                    symbol: s.into(),
                    exponent: if e < 0 { -1 } else { 1 },
                })
                .collect(),
        }
    }

    /// `|r|`, the number of letters.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    symbol: l.symbol.clone(),
                    exponent: -l.exponent,
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }
}

/// A map from a free generating set to permutations of a common degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenMap {
    generator_names: Vec<String>,
    images: Vec<Perm>,
}

impl GenMap {
    pub fn new(generator_names: Vec<String>, images: Vec<Perm>) -> Result<Self, PermError> {
        if generator_names.len() != images.len() {
            return Err(PermError::MalformedGenMap(format!(
                "{} names for {} images",
                generator_names.len(),
                images.len()
            )));
        }
        if let Some(first) = images.first() {
            if let Some(bad) = images.iter().find(|p| p.degree() != first.degree()) {
                return Err(PermError::DegreeMismatch(first.degree(), bad.degree()));
            }
        }
        for (i, name) in generator_names.iter().enumerate() {
            if generator_names[..i].contains(name) {
                return Err(PermError::MalformedGenMap(format!("duplicate symbol `{name}`")));
            }
        }
        Ok(GenMap {
            generator_names,
            images,
        })
    }

    /// Common degree; `None` for an empty generating set.
    pub fn degree(&self) -> Option<usize> {
        self.images.first().map(Perm::degree)
    }

    pub fn names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn image(&self, symbol: &str) -> Option<&Perm> {
        self.generator_names
            .iter()
            .position(|s| s == symbol)
            .map(|i| &self.images[i])
    }

    /// Restricts every generator image to `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Result<GenMap, PermError> {
        let images = self
            .images
            .iter()
            .map(|p| p.restrict(subset))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GenMap {
            generator_names: self.generator_names.clone(),
            images,
        })
    }

    /// Product of the letters' images, left to right. The empty word evaluates
    /// to the identity of the common degree (degree 0 without generators).
    pub fn evaluate(&self, word: &Word) -> Result<Perm, PermError> {
        let mut acc = Perm::identity(self.degree().unwrap_or(0));
        for letter in &word.letters {
            let img = self
                .image(&letter.symbol)
                .ok_or_else(|| PermError::UnknownSymbol(letter.symbol.clone()))?;
            acc = if letter.exponent < 0 {
                &acc * &img.inverse()
            } else {
                &acc * img
            };
        }
        Ok(acc)
    }

    /// `max_r hamming(g(r), id)` over the relations; zero for an empty list.
    pub fn defect(&self, relations: &[Word]) -> Result<Rational64, PermError> {
        let mut worst = Rational64::from_integer(0);
        for r in relations {
            let p = self.evaluate(r)?;
            let d = hamming(&p, &Perm::identity(p.degree()))?;
            worst = worst.max(d);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn hamming_examples() {
        let id4 = Perm::identity(4);
        assert_eq!(hamming(&id4, &id4).unwrap(), r(0, 1));
        let swap = Perm::from_cycles(2, &[&[0, 1]]).unwrap();
        assert_eq!(hamming(&swap, &Perm::identity(2)).unwrap(), r(1, 1));
        let c3 = Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        assert_eq!(hamming(&c3, &id4).unwrap(), r(3, 4));
        assert!(hamming(&c3, &Perm::identity(3)).is_err());
    }

    #[test]
    fn coproduct_examples() {
        assert_eq!(
            Perm::identity(2).coproduct(&Perm::identity(3)),
            Perm::identity(5)
        );
        let s = Perm::from_cycles(2, &[&[0, 1]]).unwrap();
        assert_eq!(
            s.coproduct(&s),
            Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()
        );
    }

    #[test]
    fn restrict_examples() {
        let c4 = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        assert_eq!(
            c4.restrict(&[0, 1]).unwrap(),
            Perm::from_cycles(2, &[&[0, 1]]).unwrap()
        );
        assert_eq!(
            Perm::identity(5).restrict(&[1, 3, 4]).unwrap(),
            Perm::identity(3)
        );
        assert!(c4.restrict(&[1, 0]).is_err());
        assert!(c4.restrict(&[0, 7]).is_err());
    }

    #[test]
    fn restrict_keeps_matched_points() {
        // 0→3, 3→5 are inside Y = {0, 3, 5}; 5→1 leaves Y and must return to 0.
        let p = Perm::from_cycles(6, &[&[0, 3, 5, 1]]).unwrap();
        let y = [0, 3, 5];
        let q = p.restrict(&y).unwrap();
        assert_eq!(q.images(), &[1, 2, 0]);
        assert_eq!(q.embed(&y, 6).unwrap().images(), &[3, 1, 2, 5, 4, 0]);
    }

    #[test]
    fn word_evaluation() {
        let s = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let g = GenMap::new(vec!["s".into()], vec![s.clone()]).unwrap();
        assert_eq!(g.evaluate(&Word::new()).unwrap(), Perm::identity(3));
        let ss_inv = Word::from_letters([("s", 1), ("s", -1)]);
        assert_eq!(g.evaluate(&ss_inv).unwrap(), Perm::identity(3));
        let cube = Word::from_letters([("s", 1), ("s", 1), ("s", 1)]);
        assert_eq!(g.evaluate(&cube).unwrap(), Perm::identity(3));
        let sq = Word::from_letters([("s", 1), ("s", 1)]);
        assert_eq!(g.evaluate(&sq).unwrap(), s.inverse());
        assert_eq!(
            g.evaluate(&Word::from_letters([("u", 1)])),
            Err(PermError::UnknownSymbol("u".into()))
        );
    }

    #[test]
    fn evaluation_is_left_to_right() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        let g = GenMap::new(vec!["a".into(), "b".into()], vec![a.clone(), b.clone()]).unwrap();
        let ab = g.evaluate(&Word::from_letters([("a", 1), ("b", 1)])).unwrap();
        assert_eq!(ab, &a * &b);
        assert_eq!(ab.apply(1), a.apply(b.apply(1)));
    }

    #[test]
    fn defect_examples() {
        let s = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let g = GenMap::new(vec!["s".into()], vec![s]).unwrap();
        let sq = Word::from_letters([("s", 1), ("s", 1)]);
        assert_eq!(g.defect(&[sq]).unwrap(), r(0, 1));
        let single = Word::from_letters([("s", 1)]);
        assert_eq!(g.defect(&[single]).unwrap(), r(2, 3));
    }

    #[test]
    fn conjugation_and_powers() {
        let a = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let t = Perm::from_cycles(4, &[&[1, 2, 3]]).unwrap();
        assert_eq!(a.conjugate_by(&t), &(&t * &a) * &t.inverse());
        assert_eq!(a.conjugate_by(&t), Perm::from_cycles(4, &[&[0, 2]]).unwrap());
        assert_eq!(t.pow(3), Perm::identity(4));
        assert_eq!(t.pow(-1), t.inverse());
        assert_eq!(format!("{t}"), "(1 2 3)");
    }

    #[test]
    fn serde_rejects_non_bijections() {
        let ok: Perm = serde_json_like("[1,0,2]").unwrap();
        assert_eq!(ok, Perm::from_cycles(3, &[&[0, 1]]).unwrap());
        assert!(serde_json_like("[0,0]").is_err());
    }

    // Minimal JSON-array parsing without pulling serde_json into the core crate.
    fn serde_json_like(s: &str) -> Result<Perm, PermError> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let v: Vec<usize> = inner.split(',').map(|t| t.trim().parse().unwrap()).collect();
        Perm::try_from(v)
    }
}
