//! Integer cones: finitely generated subsemigroups of `ℤᴺ`.
//!
//! Provides the relation lattice of a generating set, the density vector
//! `w₀ = L·Σvᵢ` (every lattice point of `w₀ + ℝ≥0K` lies in `K`), exact
//! membership with certificates, matching `ξ₁ + η₁ = ξ₂ + η₂` inside a cone,
//! and the kernel projection / flexible adjustment for primitive cones.

mod lattice;
mod primitive;
mod simplex;

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

pub use lattice::relation_lattice_basis;
pub use primitive::{flex_adjust, project_ker, Component, FlexOutcome, FlexRoute, LinearMapZ, PrimitiveCone, Projection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("search cancelled")]
    Cancelled,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid cone: {0}")]
    InvalidCone(String),
    #[error("vector is not in the cone: {0}")]
    NotInCone(String),
    #[error("no feasible point within the search bounds")]
    Infeasible,
}

/// Cooperative cancellation flag shared between a caller and a search.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Limits for bounded searches.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub cancel: Option<CancelToken>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 5_000_000,
            cancel: None,
        }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            cancel: None,
        }
    }
}

pub(crate) struct Ticker<'a> {
    budget: &'a SearchBudget,
    used: u64,
}

impl<'a> Ticker<'a> {
    pub(crate) fn new(budget: &'a SearchBudget) -> Self {
        Ticker { budget, used: 0 }
    }

    pub(crate) fn tick(&mut self) -> Result<(), ConeError> {
        self.used += 1;
        if self.used > self.budget.max_nodes {
            return Err(ConeError::BudgetExceeded(self.budget.max_nodes));
        }
        if self.used % 4096 == 0 {
            if let Some(c) = &self.budget.cancel {
                if c.is_cancelled() {
                    return Err(ConeError::Cancelled);
                }
            }
        }
        Ok(())
    }
}

struct Analysis {
    /// Echelon basis of `ℤK` (rows), with pivot columns.
    echelon: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    /// `transform[r]` expresses `echelon[r]` over the generators.
    transform: Vec<Vec<i64>>,
    relations: Vec<Vec<i64>>,
    /// Integer functional positive on every generator, when the cone is pointed.
    positive_functional: Option<Vec<i64>>,
}

/// The cone generated by a finite set of nonzero vectors in `ℤᴺ`, with a
/// weighted `ℓ¹` norm.
#[derive(Clone)]
pub struct IntCone {
    dim: usize,
    generators: Vec<Vec<i64>>,
    weights: Vec<Rational64>,
    analysis: Arc<OnceLock<Result<Analysis, ConeError>>>,
}

impl std::fmt::Debug for IntCone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntCone")
            .field("dim", &self.dim)
            .field("generators", &self.generators)
            .field("weights", &self.weights)
            .finish()
    }
}

impl PartialEq for IntCone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.generators == other.generators && self.weights == other.weights
    }
}

/// Outcome of a membership query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// Nonnegative coefficients over the generators summing to the vector.
    Member { coeffs: Vec<i64>, route: MemberRoute },
    NonMember { reason: NonMemberReason },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberRoute {
    Zero,
    /// Shift by `w₀` and rounding along the relation lattice.
    Dense,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NonMemberReason {
    OutsideLattice,
    OutsideRealCone,
    Exhausted,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn coeffs(&self) -> Option<&[i64]> {
        match self {
            Membership::Member { coeffs, .. } => Some(coeffs),
            _ => None,
        }
    }
}

/// Solution of `ξ₁ + η₁ = ξ₂ + η₂` with `η₁, η₂ ∈ K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleSolution {
    pub eta1: Vec<i64>,
    pub eta2: Vec<i64>,
    /// Coefficients of `η₁`, `η₂` over the generators.
    pub cert1: Vec<i64>,
    pub cert2: Vec<i64>,
    /// `max ‖ηⱼ‖ / max(1, ‖ξ₁ − ξ₂‖)`.
    pub ratio: Rational64,
    /// Norm bound at which the solution was found.
    pub bound: Rational64,
}

fn to_big(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

pub(crate) fn checked_i64(x: i128) -> Result<i64, ConeError> {
    i64::try_from(x).map_err(|_| ConeError::Overflow)
}

impl IntCone {
    /// Unit weights when `weights` is `None`.
    pub fn new(
        dim: usize,
        generators: Vec<Vec<i64>>,
        weights: Option<Vec<Rational64>>,
    ) -> Result<Self, ConeError> {
        if generators.is_empty() {
            return Err(ConeError::InvalidCone("no generators".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.len() != dim {
                return Err(ConeError::DimensionMismatch {
                    expected: dim,
                    got: g.len(),
                });
            }
            if g.iter().all(|&x| x == 0) {
                return Err(ConeError::InvalidCone(format!("generator {i} is zero")));
            }
            if generators[..i].contains(g) {
                return Err(ConeError::InvalidCone(format!("generator {i} is repeated")));
            }
        }
        let weights = weights.unwrap_or_else(|| vec![Rational64::from_integer(1); dim]);
        if weights.len() != dim {
            return Err(ConeError::DimensionMismatch {
                expected: dim,
                got: weights.len(),
            });
        }
        if weights.iter().any(|w| *w <= Rational64::from_integer(0)) {
            return Err(ConeError::InvalidCone("weights must be positive".into()));
        }
        Ok(IntCone {
            dim,
            generators,
            weights,
            analysis: Arc::new(OnceLock::new()),
        })
    }

    /// Deduplicates and drops zero vectors before building the cone.
    pub fn from_vectors(
        dim: usize,
        vectors: &[Vec<i64>],
        weights: Option<Vec<Rational64>>,
    ) -> Result<Self, ConeError> {
        let mut gens: Vec<Vec<i64>> = Vec::new();
        for v in vectors {
            if v.iter().any(|&x| x != 0) && !gens.contains(v) {
                gens.push(v.clone());
            }
        }
        Self::new(dim, gens, weights)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn weights(&self) -> &[Rational64] {
        &self.weights
    }

    /// Weighted `ℓ¹` norm.
    pub fn norm(&self, v: &[i64]) -> Rational64 {
        v.iter()
            .zip(&self.weights)
            .map(|(&x, w)| *w * x.abs())
            .fold(Rational64::from_integer(0), |a, b| a + b)
    }

    pub fn is_nonneg(&self) -> bool {
        self.generators.iter().all(|g| g.iter().all(|&x| x >= 0))
    }

    fn analysis(&self) -> Result<&Analysis, ConeError> {
        self.analysis
            .get_or_init(|| {
                let red = lattice::reduce(&self.generators)?;
                let positive_functional = simplex::positive_functional(&self.generators);
                Ok(Analysis {
                    echelon: red.echelon,
                    pivots: red.pivots,
                    transform: red.transform,
                    relations: red.relations,
                    positive_functional,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Rank of `ℤK`.
    pub fn rank(&self) -> Result<usize, ConeError> {
        Ok(self.analysis()?.echelon.len())
    }

    /// Basis of the integer relations among the generators.
    pub fn relations(&self) -> Result<Vec<Vec<i64>>, ConeError> {
        Ok(self.analysis()?.relations.clone())
    }

    /// `L = Σ|λᵢʲ|` over the relation basis, or 1 without relations.
    pub fn density_multiplier(&self) -> Result<i64, ConeError> {
        let rel = &self.analysis()?.relations;
        if rel.is_empty() {
            return Ok(1);
        }
        let mut l: i128 = 0;
        for r in rel {
            for &x in r {
                l += (x as i128).abs();
            }
        }
        checked_i64(l)
    }

    /// The density vector `w₀ = L·Σvᵢ`.
    pub fn w0(&self) -> Result<Vec<i64>, ConeError> {
        let l = self.density_multiplier()? as i128;
        (0..self.dim)
            .map(|c| {
                let s: i128 = self.generators.iter().map(|g| g[c] as i128).sum();
                s.checked_mul(l).ok_or(ConeError::Overflow).and_then(checked_i64)
            })
            .collect()
    }

    /// Integer coefficients `k` with `Σ kᵢvᵢ = w`, if `w ∈ ℤK`.
    pub fn lattice_coeffs(&self, w: &[i64]) -> Result<Option<Vec<i64>>, ConeError> {
        self.check_dim(w)?;
        let an = self.analysis()?;
        let mut residual: Vec<i128> = w.iter().map(|&x| x as i128).collect();
        let mut k = vec![0i128; self.generators.len()];
        for (r, row) in an.echelon.iter().enumerate() {
            let p = an.pivots[r];
            let piv = row[p] as i128;
            if residual[p] % piv != 0 {
                return Ok(None);
            }
            let c = residual[p] / piv;
            if c != 0 {
                for (x, &y) in residual.iter_mut().zip(row) {
                    *x = x.checked_sub(c.checked_mul(y as i128).ok_or(ConeError::Overflow)?).ok_or(ConeError::Overflow)?;
                }
                for (x, &t) in k.iter_mut().zip(&an.transform[r]) {
                    *x = x.checked_add(c.checked_mul(t as i128).ok_or(ConeError::Overflow)?).ok_or(ConeError::Overflow)?;
                }
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return Ok(None);
        }
        Ok(Some(k.into_iter().map(checked_i64).collect::<Result<_, _>>()?))
    }

    /// Nonnegative real coefficients (a vertex solution) with `Σ μᵢvᵢ = w`.
    pub fn real_coeffs(&self, w: &[i64]) -> Result<Option<Vec<BigRational>>, ConeError> {
        self.check_dim(w)?;
        Ok(simplex::nonneg_solution(&self.generators, w))
    }

    pub fn in_real_cone(&self, w: &[i64]) -> Result<bool, ConeError> {
        Ok(self.real_coeffs(w)?.is_some())
    }

    fn check_dim(&self, w: &[i64]) -> Result<(), ConeError> {
        if w.len() != self.dim {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim,
                got: w.len(),
            });
        }
        Ok(())
    }

    /// `Σ cᵢvᵢ`.
    pub fn combine(&self, coeffs: &[i64]) -> Result<Vec<i64>, ConeError> {
        let mut out = vec![0i128; self.dim];
        for (c, g) in coeffs.iter().zip(&self.generators) {
            for (o, &x) in out.iter_mut().zip(g) {
                *o += (*c as i128) * (x as i128);
            }
        }
        out.into_iter().map(checked_i64).collect()
    }

    /// Membership through the density vector: succeeds when `w ∈ ℤK` and
    /// `w − w₀ ∈ ℝ≥0K`, by rounding the real coefficients along the relation
    /// lattice. Returns `None` when the preconditions fail.
    pub fn member_dense(&self, w: &[i64]) -> Result<Option<Vec<i64>>, ConeError> {
        let Some(k) = self.lattice_coeffs(w)? else {
            return Ok(None);
        };
        let w0 = self.w0()?;
        let shifted: Vec<i64> = w
            .iter()
            .zip(&w0)
            .map(|(&a, &b)| a.checked_sub(b).ok_or(ConeError::Overflow))
            .collect::<Result<_, _>>()?;
        let Some(mu) = self.real_coeffs(&shifted)? else {
            return Ok(None);
        };
        let l = BigRational::from_integer(BigInt::from(self.density_multiplier()?));
        // ν = L + μ represents w; ν − k lies in the real span of the relations.
        let nu: Vec<BigRational> = mu.iter().map(|m| m + &l).collect();
        let relations = &self.analysis()?.relations;
        let kb = to_big(&k);
        let diff: Vec<BigRational> = nu.iter().zip(&kb).map(|(a, b)| a - b).collect();
        let rounded: Vec<BigRational> = if relations.is_empty() {
            kb.clone()
        } else {
            // columns: relation vectors; unknowns α
            let cols: Vec<Vec<BigRational>> = relations.iter().map(|r| to_big(r)).collect();
            let alpha = simplex::solve_columns(&cols, &diff).ok_or_else(|| {
                ConeError::InvalidCone("relation basis does not span the real kernel".into())
            })?;
            let mut out = kb.clone();
            for (a, r) in alpha.iter().zip(relations) {
                let fl = a.floor();
                for (o, &x) in out.iter_mut().zip(r) {
                    *o += &fl * BigRational::from_integer(BigInt::from(x));
                }
            }
            out
        };
        let mut coeffs = Vec::with_capacity(rounded.len());
        for x in &rounded {
            if !x.is_integer() || x.is_negative() {
                return Ok(None);
            }
            coeffs.push(x.to_integer().to_i64().ok_or(ConeError::Overflow)?);
        }
        if self.combine(&coeffs)? != w {
            return Ok(None);
        }
        Ok(Some(coeffs))
    }

    /// Decides `w ∈ K` with a certificate. Non-membership is reported only
    /// after an exhaustive search; an exhausted budget is an error.
    pub fn member(&self, w: &[i64], budget: &SearchBudget) -> Result<Membership, ConeError> {
        self.check_dim(w)?;
        if w.iter().all(|&x| x == 0) {
            return Ok(Membership::Member {
                coeffs: vec![0; self.generators.len()],
                route: MemberRoute::Zero,
            });
        }
        if self.lattice_coeffs(w)?.is_none() {
            return Ok(Membership::NonMember {
                reason: NonMemberReason::OutsideLattice,
            });
        }
        if !self.in_real_cone(w)? {
            return Ok(Membership::NonMember {
                reason: NonMemberReason::OutsideRealCone,
            });
        }
        if let Some(coeffs) = self.member_dense(w)? {
            return Ok(Membership::Member {
                coeffs,
                route: MemberRoute::Dense,
            });
        }
        match self.search(w, budget)? {
            Some(coeffs) => Ok(Membership::Member {
                coeffs,
                route: MemberRoute::Search,
            }),
            None => Ok(Membership::NonMember {
                reason: NonMemberReason::Exhausted,
            }),
        }
    }

    /// Exhaustive depth-first search over coefficient vectors. Pointed cones
    /// admit a positive functional `f`, which bounds each coefficient by
    /// `f(residual)/f(vᵢ)`; otherwise the search is breadth-first by total
    /// coefficient and can only end by success or budget.
    fn search(&self, w: &[i64], budget: &SearchBudget) -> Result<Option<Vec<i64>>, ConeError> {
        let mut ticker = Ticker::new(budget);
        let an = self.analysis()?;
        match &an.positive_functional {
            Some(f) => {
                let fv: Vec<i128> = self.generators.iter().map(|g| dot(f, g)).collect();
                let mut failed: HashSet<(usize, Vec<i64>)> = HashSet::new();
                let mut coeffs = vec![0i64; self.generators.len()];
                let found = self.dfs(0, w.to_vec(), f, &fv, &mut coeffs, &mut failed, &mut ticker)?;
                Ok(found.then_some(coeffs))
            }
            None => {
                let mut frontier: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
                frontier.insert(vec![0; self.dim], vec![0; self.generators.len()]);
                let mut seen: HashSet<Vec<i64>> = frontier.keys().cloned().collect();
                loop {
                    let mut next = HashMap::new();
                    let mut keys: Vec<_> = frontier.keys().cloned().collect();
                    keys.sort();
                    for p in keys {
                        let c = &frontier[&p];
                        for (i, g) in self.generators.iter().enumerate() {
                            ticker.tick()?;
                            let q: Vec<i64> = p.iter().zip(g).map(|(a, b)| a + b).collect();
                            if seen.insert(q.clone()) {
                                let mut cq = c.clone();
                                cq[i] += 1;
                                if q == w {
                                    return Ok(Some(cq));
                                }
                                next.insert(q, cq);
                            }
                        }
                    }
                    frontier = next;
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        i: usize,
        residual: Vec<i64>,
        f: &[i64],
        fv: &[i128],
        coeffs: &mut Vec<i64>,
        failed: &mut HashSet<(usize, Vec<i64>)>,
        ticker: &mut Ticker<'_>,
    ) -> Result<bool, ConeError> {
        ticker.tick()?;
        if residual.iter().all(|&x| x == 0) {
            for c in coeffs[i..].iter_mut() {
                *c = 0;
            }
            return Ok(true);
        }
        if i == self.generators.len() {
            return Ok(false);
        }
        let fr = dot(f, &residual);
        if fr <= 0 || failed.contains(&(i, residual.clone())) {
            return Ok(false);
        }
        let g = &self.generators[i];
        let mut max = checked_i64(fr / fv[i])?;
        if self.is_nonneg() {
            if residual.iter().any(|&x| x < 0) {
                return Ok(false);
            }
            for (&r, &y) in residual.iter().zip(g) {
                if y > 0 {
                    max = max.min(r / y);
                }
            }
        }
        let mut r = residual.clone();
        for (x, &y) in r.iter_mut().zip(g) {
            *x -= max * y;
        }
        for c in (0..=max).rev() {
            coeffs[i] = c;
            if self.dfs(i + 1, r.clone(), f, fv, coeffs, failed, ticker)? {
                return Ok(true);
            }
            for (x, &y) in r.iter_mut().zip(g) {
                *x += y;
            }
        }
        coeffs[i] = 0;
        failed.insert((i, residual));
        Ok(false)
    }

    /// All elements `Σ cᵢvᵢ` with `Σ cᵢ‖vᵢ‖ ≤ bound`, for cones inside the
    /// nonnegative orthant, each with its lexicographically first certificate.
    pub fn enumerate_up_to(
        &self,
        bound: Rational64,
        budget: &SearchBudget,
    ) -> Result<HashMap<Vec<i64>, Vec<i64>>, ConeError> {
        if !self.is_nonneg() {
            return Err(ConeError::InvalidCone("enumeration needs a cone in the nonnegative orthant".into()));
        }
        let norms: Vec<Rational64> = self.generators.iter().map(|g| self.norm(g)).collect();
        let mut out = HashMap::new();
        let mut ticker = Ticker::new(budget);
        let mut coeffs = vec![0i64; self.generators.len()];
        let mut point = vec![0i64; self.dim];
        self.enum_rec(0, bound, &norms, &mut coeffs, &mut point, &mut out, &mut ticker)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn enum_rec(
        &self,
        i: usize,
        remaining: Rational64,
        norms: &[Rational64],
        coeffs: &mut Vec<i64>,
        point: &mut Vec<i64>,
        out: &mut HashMap<Vec<i64>, Vec<i64>>,
        ticker: &mut Ticker<'_>,
    ) -> Result<(), ConeError> {
        ticker.tick()?;
        if i == self.generators.len() {
            out.entry(point.clone()).or_insert_with(|| coeffs.clone());
            return Ok(());
        }
        let max = (remaining / norms[i]).floor().to_integer();
        for c in 0..=max {
            coeffs[i] = c;
            self.enum_rec(i + 1, remaining - norms[i] * c, norms, coeffs, point, out, ticker)?;
            for (p, &g) in point.iter_mut().zip(&self.generators[i]) {
                *p += g;
            }
        }
        for (p, &g) in point.iter_mut().zip(&self.generators[i]) {
            *p -= g * (max + 1);
        }
        coeffs[i] = 0;
        Ok(())
    }

    /// Finds `η₁, η₂ ∈ K` with `ξ₁ + η₁ = ξ₂ + η₂` and `‖η₁‖` minimal
    /// (then `η₁` lexicographically minimal), searching norm bounds
    /// `B·max(1, ‖ξ₁ − ξ₂‖)` for `B = 1, 2, 4, …`. Requires a cone inside
    /// the nonnegative orthant, where the norm is additive.
    pub fn double_solve(
        &self,
        xi1: &[i64],
        xi2: &[i64],
        budget: &SearchBudget,
    ) -> Result<DoubleSolution, ConeError> {
        self.check_dim(xi1)?;
        self.check_dim(xi2)?;
        if !self.is_nonneg() {
            return Err(ConeError::InvalidCone("matching needs a cone in the nonnegative orthant".into()));
        }
        for (name, xi) in [("ξ₁", xi1), ("ξ₂", xi2)] {
            if !self.member(xi, budget)?.is_member() {
                return Err(ConeError::NotInCone(name.into()));
            }
        }
        let zero = Rational64::from_integer(0);
        let one = Rational64::from_integer(1);
        let diff: Vec<i64> = xi1.iter().zip(xi2).map(|(a, b)| a - b).collect();
        let scale = self.norm(&diff).max(one);
        let shift = (self.norm(xi1) - self.norm(xi2)).max(zero);
        let mut b = Rational64::from_integer(1);
        let mut spent: u64 = 0;
        loop {
            let bound = b * scale;
            let left = SearchBudget {
                max_nodes: budget.max_nodes.saturating_sub(spent),
                cancel: budget.cancel.clone(),
            };
            if left.max_nodes == 0 {
                return Err(ConeError::BudgetExceeded(budget.max_nodes));
            }
            let pool = self.enumerate_up_to(bound + shift, &left).map_err(|e| match e {
                ConeError::BudgetExceeded(_) => ConeError::BudgetExceeded(budget.max_nodes),
                other => other,
            })?;
            spent += pool.len() as u64;
            let mut candidates: Vec<(&Vec<i64>, &Vec<i64>)> =
                pool.iter().filter(|(eta, _)| self.norm(eta) <= bound).collect();
            candidates.sort_by(|a, b| self.norm(a.0).cmp(&self.norm(b.0)).then_with(|| a.0.cmp(b.0)));
            for (eta1, cert1) in candidates {
                let eta2: Vec<i64> = (0..self.dim).map(|c| xi1[c] + eta1[c] - xi2[c]).collect();
                if let Some(cert2) = pool.get(&eta2) {
                    let n = self.norm(eta1).max(self.norm(&eta2));
                    return Ok(DoubleSolution {
                        eta1: eta1.clone(),
                        eta2,
                        cert1: cert1.clone(),
                        cert2: cert2.clone(),
                        ratio: n / scale,
                        bound,
                    });
                }
            }
            b *= 2;
        }
    }
}

fn dot(f: &[i64], v: &[i64]) -> i128 {
    f.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()
}

/// Membership in the numerical semigroup generated by positive integers.
pub fn semigroup_contains(gens: &[i64], value: i64) -> bool {
    if value < 0 {
        return false;
    }
    let v = value as usize;
    let mut reach = vec![false; v + 1];
    reach[0] = true;
    for x in 1..=v {
        reach[x] = gens.iter().any(|&g| g > 0 && (g as usize) <= x && reach[x - g as usize]);
    }
    reach[v]
}

/// Smallest `c` such that every multiple of `gcd(gens)` that is `≥ c` lies in
/// the semigroup.
pub fn semigroup_conductor(gens: &[i64]) -> i64 {
    let g = gens.iter().fold(0i64, |a, &b| num_integer::gcd(a, b));
    if g == 0 {
        return 0;
    }
    let reduced: Vec<i64> = gens.iter().map(|x| x / g).collect();
    let min = *reduced.iter().min().expect("nonempty");
    let limit = (min * reduced.iter().max().expect("nonempty") + 1) as usize;
    let mut reach = vec![false; limit + 1];
    reach[0] = true;
    let mut last_gap: i64 = -1;
    for x in 1..=limit {
        reach[x] = reduced.iter().any(|&r| (r as usize) <= x && reach[x - r as usize]);
        if !reach[x] {
            last_gap = x as i64;
        }
    }
    (last_gap + 1) * g
}
