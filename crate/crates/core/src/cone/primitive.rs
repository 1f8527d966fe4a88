//! Cones that split as a direct sum of one-dimensional components, written
//! in formal coordinates: coordinate `a` counts multiples of a direction `a`,
//! and the component is the numerical semigroup `K_a ⊆ ℤ≥0`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::{semigroup_conductor, semigroup_contains, ConeError, IntCone, SearchBudget, Ticker};

/// One direction of a primitive cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    /// Generators of `K_a`, sorted and distinct.
    pub multipliers: Vec<i64>,
    /// Norm of the direction vector.
    pub weight: Rational64,
}

impl Component {
    pub fn new(mut multipliers: Vec<i64>, weight: Rational64) -> Result<Self, ConeError> {
        multipliers.sort_unstable();
        multipliers.dedup();
        if multipliers.is_empty() || multipliers[0] <= 0 {
            return Err(ConeError::InvalidCone("component multipliers must be positive".into()));
        }
        if weight <= Rational64::from_integer(0) {
            return Err(ConeError::InvalidCone("component weight must be positive".into()));
        }
        Ok(Component { multipliers, weight })
    }

    /// `k_a`, the least multiplier; `k_a·ℤ≥0` is the component of `K̂`.
    pub fn k(&self) -> i64 {
        self.multipliers[0]
    }

    pub fn contains(&self, c: i64) -> bool {
        semigroup_contains(&self.multipliers, c)
    }

    pub fn conductor(&self) -> i64 {
        semigroup_conductor(&self.multipliers)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveCone {
    components: Vec<Component>,
    base: IntCone,
}

impl PrimitiveCone {
    pub fn new(components: Vec<Component>) -> Result<Self, ConeError> {
        let dim = components.len();
        if dim == 0 {
            return Err(ConeError::InvalidCone("no components".into()));
        }
        let mut gens = Vec::new();
        for (a, comp) in components.iter().enumerate() {
            for &m in &comp.multipliers {
                let mut v = vec![0; dim];
                v[a] = m;
                gens.push(v);
            }
        }
        let weights = components.iter().map(|c| c.weight).collect();
        let base = IntCone::new(dim, gens, Some(weights))?;
        Ok(PrimitiveCone { components, base })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// The cone itself, generated by `m·e_a` for every multiplier.
    pub fn base(&self) -> &IntCone {
        &self.base
    }

    pub fn norm(&self, v: &[i64]) -> Rational64 {
        self.base.norm(v)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim() && v.iter().zip(&self.components).all(|(&c, comp)| comp.contains(c))
    }

    /// Membership in `K̂ = ⊕ k_a ℤ≥0`.
    pub fn in_hat(&self, v: &[i64]) -> bool {
        v.len() == self.dim() && v.iter().zip(&self.components).all(|(&c, comp)| c >= 0 && c % comp.k() == 0)
    }
}

/// Integer matrix acting on formal coordinates, with weights for the norm on
/// the target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearMapZ {
    /// Row-major, `target_dim × source_dim`.
    pub matrix: Vec<Vec<i64>>,
    pub source_dim: usize,
    pub target_weights: Vec<Rational64>,
}

impl LinearMapZ {
    pub fn new(matrix: Vec<Vec<i64>>, source_dim: usize, target_weights: Option<Vec<Rational64>>) -> Result<Self, ConeError> {
        for row in &matrix {
            if row.len() != source_dim {
                return Err(ConeError::DimensionMismatch { expected: source_dim, got: row.len() });
            }
        }
        let target_weights = target_weights.unwrap_or_else(|| vec![Rational64::from_integer(1); matrix.len()]);
        if target_weights.len() != matrix.len() {
            return Err(ConeError::DimensionMismatch { expected: matrix.len(), got: target_weights.len() });
        }
        Ok(LinearMapZ { matrix, source_dim, target_weights })
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn target_norm(&self, w: &[i64]) -> Rational64 {
        w.iter()
            .zip(&self.target_weights)
            .map(|(&x, wt)| *wt * x.abs())
            .fold(Rational64::from_integer(0), |a, b| a + b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Projection {
    pub v: Vec<i64>,
    /// `‖ξ − v‖`.
    pub distance: Rational64,
    /// `‖ξ − v‖ / ‖d(ξ)‖`, absent when `d(ξ) = 0`.
    pub ratio: Option<Rational64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlexRoute {
    /// `d(ξ) = 0`; nothing to adjust.
    Unchanged,
    /// Correction found in `K̂`.
    Hat,
    /// No correction in `K̂` within the bounds; found in `K`.
    Cone,
    /// No correction found; `ξ′ = 0`.
    Zeroed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlexOutcome {
    pub xi_prime: Vec<i64>,
    pub eta: Vec<i64>,
    pub route: FlexRoute,
    pub projection: Option<Projection>,
    /// `max(‖ξ − ξ′‖, ‖η‖) / ‖d(ξ)‖`, absent when `d(ξ) = 0`.
    pub ratio: Option<Rational64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Allowed {
    Hat,
    Cone,
}

/// Minimizes `Σ w_a|c_a − center_a|` over `c` with allowed coordinates,
/// `d(c) = target` and `‖c‖ ≤ cap`. Ascending depth-first order with strict
/// improvement returns the lexicographically least optimum.
struct Bnb<'a> {
    pc: &'a PrimitiveCone,
    d: &'a LinearMapZ,
    target: Vec<i64>,
    center: Vec<i64>,
    values: Vec<Vec<i64>>,
    live_rows: Vec<Vec<bool>>,
    suffix_lb: Vec<Rational64>,
    best: Option<(Rational64, Vec<i64>)>,
    cur: Vec<i64>,
}

impl<'a> Bnb<'a> {
    fn new(pc: &'a PrimitiveCone, d: &'a LinearMapZ, target: Vec<i64>, center: Vec<i64>, cap: Rational64, allowed: Allowed) -> Self {
        let n = pc.dim();
        let values: Vec<Vec<i64>> = pc
            .components
            .iter()
            .map(|comp| {
                let top = (cap / comp.weight).floor().to_integer().max(0);
                match allowed {
                    Allowed::Hat => (0..=top / comp.k()).map(|j| j * comp.k()).collect(),
                    Allowed::Cone => (0..=top).filter(|&c| comp.contains(c)).collect(),
                }
            })
            .collect();
        let mut live_rows = vec![vec![false; d.target_dim()]; n + 1];
        for a in (0..n).rev() {
            for r in 0..d.target_dim() {
                live_rows[a][r] = live_rows[a + 1][r] || d.matrix[r][a] != 0;
            }
        }
        let mut suffix_lb = vec![Rational64::from_integer(0); n + 1];
        for a in (0..n).rev() {
            let m = values[a].iter().map(|&v| (v - center[a]).abs()).min().unwrap_or(0);
            suffix_lb[a] = suffix_lb[a + 1] + pc.components[a].weight * m;
        }
        Bnb { pc, d, target, center, values, live_rows, suffix_lb, best: None, cur: vec![0; n] }
    }

    fn run(&mut self, cap: Rational64, budget: &SearchBudget) -> Result<Option<Vec<i64>>, ConeError> {
        let mut ticker = Ticker::new(budget);
        let start = vec![0i64; self.d.target_dim()];
        let zero = Rational64::from_integer(0);
        self.rec(0, start, zero, zero, cap, &mut ticker)?;
        Ok(self.best.take().map(|b| b.1))
    }

    fn rec(
        &mut self,
        a: usize,
        dsum: Vec<i64>,
        cost: Rational64,
        norm: Rational64,
        cap: Rational64,
        ticker: &mut Ticker<'_>,
    ) -> Result<(), ConeError> {
        ticker.tick()?;
        for (r, (&s, &t)) in dsum.iter().zip(&self.target).enumerate() {
            if s != t && !self.live_rows[a][r] {
                return Ok(());
            }
        }
        if let Some((b, _)) = &self.best {
            if cost + self.suffix_lb[a] >= *b {
                return Ok(());
            }
        }
        if a == self.pc.dim() {
            self.best = Some((cost, self.cur.clone()));
            return Ok(());
        }
        let w = self.pc.components[a].weight;
        for idx in 0..self.values[a].len() {
            let v = self.values[a][idx];
            let n2 = norm + w * v;
            if n2 > cap {
                break;
            }
            self.cur[a] = v;
            let next: Vec<i64> = dsum.iter().enumerate().map(|(r, s)| s + self.d.matrix[r][a] * v).collect();
            let c2 = cost + w * (v - self.center[a]).abs();
            self.rec(a + 1, next, c2, n2, cap, ticker)?;
        }
        self.cur[a] = 0;
        Ok(())
    }
}

fn check(pc: &PrimitiveCone, d: &LinearMapZ, xi: &[i64]) -> Result<(), ConeError> {
    if d.source_dim != pc.dim() {
        return Err(ConeError::DimensionMismatch { expected: pc.dim(), got: d.source_dim });
    }
    if xi.len() != pc.dim() {
        return Err(ConeError::DimensionMismatch { expected: pc.dim(), got: xi.len() });
    }
    if !pc.contains(xi) {
        return Err(ConeError::NotInCone("ξ".into()));
    }
    Ok(())
}

/// The `v ∈ K̂ ∩ ker d` with `‖v‖ ≤ ‖ξ‖` closest to `ξ`. When `d(ξ) = 0`,
/// each coordinate is rounded down to a multiple of `k_a`.
pub fn project_ker(pc: &PrimitiveCone, d: &LinearMapZ, xi: &[i64], budget: &SearchBudget) -> Result<Projection, ConeError> {
    check(pc, d, xi)?;
    let dxi = d.apply(xi);
    let dnorm = d.target_norm(&dxi);
    let v: Vec<i64> = if dxi.iter().all(|&x| x == 0) {
        xi.iter().zip(&pc.components).map(|(&c, comp)| c - c.rem_euclid(comp.k())).collect()
    } else {
        let cap = pc.norm(xi);
        Bnb::new(pc, d, vec![0; d.target_dim()], xi.to_vec(), cap, Allowed::Hat)
            .run(cap, budget)?
            .ok_or(ConeError::Infeasible)?
    };
    let diff: Vec<i64> = xi.iter().zip(&v).map(|(a, b)| a - b).collect();
    let distance = pc.norm(&diff);
    let ratio = (dnorm != Rational64::from_integer(0)).then(|| distance / dnorm);
    Ok(Projection { v, distance, ratio })
}

/// Splits `ξ` into `ξ′` (coordinates where the kernel projection vanishes
/// are zeroed) and finds a least-norm `η` with `d(ξ′ + η) = 0`, preferring
/// `η ∈ K̂`.
pub fn flex_adjust(pc: &PrimitiveCone, d: &LinearMapZ, xi: &[i64], budget: &SearchBudget) -> Result<FlexOutcome, ConeError> {
    check(pc, d, xi)?;
    let dxi = d.apply(xi);
    if dxi.iter().all(|&x| x == 0) {
        return Ok(FlexOutcome {
            xi_prime: xi.to_vec(),
            eta: vec![0; xi.len()],
            route: FlexRoute::Unchanged,
            projection: None,
            ratio: None,
        });
    }
    let dnorm = d.target_norm(&dxi);
    let proj = project_ker(pc, d, xi, budget)?;
    let xi_prime: Vec<i64> = xi.iter().zip(&proj.v).map(|(&x, &v)| if v == 0 { 0 } else { x }).collect();
    let target: Vec<i64> = d.apply(&xi_prime).iter().map(|x| -x).collect();
    let zero_eta = vec![0i64; xi.len()];
    let one = Rational64::from_integer(1);
    let limit = (pc.norm(xi) + dnorm) * 8 + Rational64::from_integer(64);
    let mut found: Option<(Vec<i64>, FlexRoute)> = None;
    if target.iter().all(|&x| x == 0) {
        found = Some((zero_eta.clone(), FlexRoute::Hat));
    }
    for (allowed, route) in [(Allowed::Hat, FlexRoute::Hat), (Allowed::Cone, FlexRoute::Cone)] {
        if found.is_some() {
            break;
        }
        let mut cap = dnorm.max(one);
        while cap <= limit * 2 {
            let c = cap.min(limit);
            let sol = Bnb::new(pc, d, target.clone(), zero_eta.clone(), c, allowed).run(c, budget)?;
            if let Some(eta) = sol {
                found = Some((eta, route));
                break;
            }
            if c == limit {
                break;
            }
            cap *= 2;
        }
    }
    let (xi_prime, eta, route) = match found {
        Some((eta, route)) => (xi_prime, eta, route),
        None => (vec![0; xi.len()], zero_eta, FlexRoute::Zeroed),
    };
    let diff: Vec<i64> = xi.iter().zip(&xi_prime).map(|(a, b)| a - b).collect();
    let ratio = Some(pc.norm(&diff).max(pc.norm(&eta)) / dnorm);
    Ok(FlexOutcome { xi_prime, eta, route, projection: Some(proj), ratio })
}
