//! Restriction `i*: Λ⁺(G) → Λ⁺(H)` along an inclusion of finite groups, the
//! restriction cone and its directions, decomposing maps into primitive
//! cones, and the extension/alteration properties of a pair.

use std::sync::{Arc, OnceLock};

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::cone::{Component, ConeError, IntCone, LinearMapZ, PrimitiveCone, SearchBudget};
use crate::conjugator::{conjugate_close, ConjugatorError};
use crate::group::{
    action_distance, classify, realize, select_orbits, type_action, BurnsideVector, FiniteGroup, GroupAction,
    GroupError, Subgroup,
};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BurnsideError {
    #[error("not an injective homomorphism: {0}")]
    NotInclusion(String),
    #[error("extension property fails at subgroup type {0}")]
    NoExtensionProperty(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("norm mismatch: {0} vs {1}")]
    NormMismatch(i64, i64),
    #[error("target is not in the image: {0}")]
    NotInImage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Conjugator(#[from] ConjugatorError),
}

struct InclusionInner {
    sub: FiniteGroup,
    amb: FiniteGroup,
    embed: Vec<usize>,
    image: Vec<usize>,
    type_images: OnceLock<Result<Vec<Vec<i64>>, GroupError>>,
}

/// An injective homomorphism `i: H → G`, given on element indices.
#[derive(Clone)]
pub struct Inclusion {
    inner: Arc<InclusionInner>,
}

impl std::fmt::Debug for Inclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Inclusion").field("embed", &self.inner.embed).finish()
    }
}

impl PartialEq for Inclusion {
    fn eq(&self, other: &Self) -> bool {
        self.inner.sub == other.inner.sub && self.inner.amb == other.inner.amb && self.inner.embed == other.inner.embed
    }
}

impl Inclusion {
    /// Checks injectivity and `embed[a·b] = embed[a]·embed[b]`.
    pub fn new(sub: &FiniteGroup, amb: &FiniteGroup, embed: Vec<usize>) -> Result<Self, BurnsideError> {
        if embed.len() != sub.order() {
            return Err(BurnsideError::NotInclusion(format!(
                "{} images for a group of order {}",
                embed.len(),
                sub.order()
            )));
        }
        if let Some(&g) = embed.iter().find(|&&g| g >= amb.order()) {
            return Err(BurnsideError::NotInclusion(format!("element {g} out of range")));
        }
        let mut image = embed.clone();
        image.sort_unstable();
        image.dedup();
        if image.len() != embed.len() {
            return Err(BurnsideError::NotInclusion("not injective".into()));
        }
        for a in 0..sub.order() {
            for b in 0..sub.order() {
                if embed[sub.mul(a, b)] != amb.mul(embed[a], embed[b]) {
                    return Err(BurnsideError::NotInclusion(format!("fails on the pair ({a}, {b})")));
                }
            }
        }
        Ok(Inclusion {
            inner: Arc::new(InclusionInner {
                sub: sub.clone(),
                amb: amb.clone(),
                embed,
                image,
                type_images: OnceLock::new(),
            }),
        })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Self::new(g, g, (0..g.order()).collect()).expect("identity is an inclusion")
    }

    /// The subgroup as a group in its own right (elements renumbered in
    /// increasing order) with its inclusion into `amb`.
    pub fn from_subgroup(amb: &FiniteGroup, sub: &Subgroup) -> Result<Self, BurnsideError> {
        let els = sub.elements();
        let pos = |g: usize| els.binary_search(&g).expect("closed under multiplication");
        let table: Vec<Vec<usize>> = els.iter().map(|&a| els.iter().map(|&b| pos(amb.mul(a, b))).collect()).collect();
        let h = FiniteGroup::from_mult_table(table)?;
        Self::new(&h, amb, els.to_vec())
    }

    pub fn sub(&self) -> &FiniteGroup {
        &self.inner.sub
    }

    pub fn amb(&self) -> &FiniteGroup {
        &self.inner.amb
    }

    pub fn embed(&self) -> &[usize] {
        &self.inner.embed
    }

    /// `i(H)` as sorted element indices of `G`.
    pub fn image(&self) -> &[usize] {
        &self.inner.image
    }

    pub fn is_normal(&self) -> bool {
        self.amb().is_normal(self.image())
    }

    /// `i*(φ)`: the action `h ↦ φ(i(h))`.
    pub fn restrict_action(&self, phi: &GroupAction) -> Result<GroupAction, BurnsideError> {
        if phi.group() != self.amb() {
            return Err(GroupError::GroupMismatch.into());
        }
        Ok(GroupAction::new(self.sub(), self.restrict_images(phi.images()))?)
    }

    /// `h ↦ images[i(h)]` for per-element image lists of `G`.
    pub fn restrict_images(&self, images: &[Perm]) -> Vec<Perm> {
        self.embed().iter().map(|&g| images[g].clone()).collect()
    }

    /// `i*([G/S_τ])` for every type `τ` of `G`, in `Λ(H)` coordinates.
    pub fn type_images(&self) -> Result<&[Vec<i64>], BurnsideError> {
        self.inner
            .type_images
            .get_or_init(|| {
                let n = self.amb().type_count()?;
                (0..n)
                    .map(|t| {
                        let a = type_action(self.amb(), t)?;
                        let r = GroupAction::new(self.sub(), self.restrict_images(a.images()))?;
                        Ok(classify(&r)?.into_coeffs())
                    })
                    .collect()
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(|e| e.clone().into())
    }

    /// Linear extension of restriction to `Λ(G)`.
    pub fn restrict_vector(&self, v: &BurnsideVector) -> Result<BurnsideVector, BurnsideError> {
        if v.group() != self.amb() {
            return Err(GroupError::GroupMismatch.into());
        }
        let imgs = self.type_images()?;
        let mut out = vec![0i64; self.sub().type_count()?];
        for (c, img) in v.coeffs().iter().zip(imgs) {
            for (o, x) in out.iter_mut().zip(img) {
                *o += c * x;
            }
        }
        Ok(BurnsideVector::new(self.sub(), out)?)
    }

    /// Class in `G` of the image of a subgroup of `H` (given by `H`-indices).
    pub fn amb_class_of(&self, h_elements: &[usize]) -> Result<usize, BurnsideError> {
        let mut els: Vec<usize> = h_elements.iter().map(|&h| self.embed()[h]).collect();
        els.sort_unstable();
        Ok(self.amb().class_of(&els)?)
    }

    /// Types of `H` met by the `G`-conjugates of the subgroup `σ`, when
    /// `i(H) ⊴ G`; sorted.
    pub fn conjugation_orbit(&self, sigma: usize) -> Result<Vec<usize>, BurnsideError> {
        let rep = self.sub().subgroup_classes()?[sigma].rep.clone();
        let mut back = vec![usize::MAX; self.amb().order()];
        for (h, &g) in self.embed().iter().enumerate() {
            back[g] = h;
        }
        let mut out = Vec::new();
        for g in 0..self.amb().order() {
            let mut conj: Vec<usize> = Vec::with_capacity(rep.len());
            for &s in &rep {
                let x = back[self.amb().conj(g, self.embed()[s])];
                if x == usize::MAX {
                    return Err(BurnsideError::NotInclusion("image is not normal".into()));
                }
                conj.push(x);
            }
            conj.sort_unstable();
            out.push(self.sub().class_of(&conj)?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |a, &b| num_integer::gcd(a, b))
}

/// The restriction cone `K = i*(Λ⁺(G))` and its direction set.
#[derive(Debug, Clone)]
pub struct RestrictionData {
    pub inclusion: Inclusion,
    /// `i*([G/S_τ])` per type `τ` of `G`.
    pub images: Vec<Vec<i64>>,
    /// Distinct images, in order of first appearance.
    pub cone_generators: Vec<Vec<i64>>,
    /// For each cone generator, the first type of `G` producing it.
    pub generator_source: Vec<usize>,
    /// Distinct gcd-normalized directions of the images.
    pub aleph: Vec<Vec<i64>>,
    /// `i*([G/S_τ]) = k·aleph[a]` recorded as `(a, k)`.
    pub type_direction: Vec<(usize, i64)>,
    pub normal: bool,
}

pub fn compute_restriction_data(inc: &Inclusion) -> Result<RestrictionData, BurnsideError> {
    let images = inc.type_images()?.to_vec();
    let mut cone_generators: Vec<Vec<i64>> = Vec::new();
    let mut generator_source = Vec::new();
    let mut aleph: Vec<Vec<i64>> = Vec::new();
    let mut type_direction = Vec::new();
    for (t, img) in images.iter().enumerate() {
        if !cone_generators.contains(img) {
            cone_generators.push(img.clone());
            generator_source.push(t);
        }
        let k = gcd_all(img);
        let dir: Vec<i64> = img.iter().map(|x| x / k).collect();
        let a = match aleph.iter().position(|d| *d == dir) {
            Some(a) => a,
            None => {
                aleph.push(dir);
                aleph.len() - 1
            }
        };
        type_direction.push((a, k));
    }
    Ok(RestrictionData {
        normal: inc.is_normal(),
        inclusion: inc.clone(),
        images,
        cone_generators,
        generator_source,
        aleph,
        type_direction,
    })
}

fn sub_weights(h: &FiniteGroup) -> Result<Vec<Rational64>, BurnsideError> {
    Ok(h.subgroup_classes()?
        .iter()
        .map(|c| Rational64::from_integer(c.index as i64))
        .collect())
}

fn h_norm(h: &FiniteGroup, v: &[i64]) -> Result<i64, BurnsideError> {
    Ok(BurnsideVector::new(h, v.to_vec())?.norm())
}

impl RestrictionData {
    /// `K` as an integer cone in `Λ(H)` with the set-size norm.
    pub fn cone(&self) -> Result<IntCone, BurnsideError> {
        let h = self.inclusion.sub();
        Ok(IntCone::new(h.type_count()?, self.cone_generators.clone(), Some(sub_weights(h)?))?)
    }

    /// Lifts coefficients over the cone generators to `Λ⁺(G)`.
    pub fn lift(&self, coeffs: &[i64]) -> Result<BurnsideVector, BurnsideError> {
        let g = self.inclusion.amb();
        let mut out = vec![0i64; g.type_count()?];
        for (c, &t) in coeffs.iter().zip(&self.generator_source) {
            out[t] += c;
        }
        Ok(BurnsideVector::new(g, out)?)
    }

    /// A `G`-vector in `Λ⁺(G)` restricting to `target`, via cone membership.
    pub fn preimage(&self, target: &[i64], budget: &SearchBudget) -> Result<Option<BurnsideVector>, BurnsideError> {
        match self.cone()?.member(target, budget)?.coeffs() {
            Some(c) => Ok(Some(self.lift(c)?)),
            None => Ok(None),
        }
    }
}

/// Result of the extension-property check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionCertificate {
    pub holds: bool,
    /// For each type `σ` of `H` in order, a `G`-vector restricting to `[H/S_σ]`.
    pub expressions: Vec<Vec<i64>>,
    /// First type of `H` not in the cone.
    pub obstruction: Option<usize>,
}

/// `i*(Λ⁺(G)) = Λ⁺(H)`, decided basis vector by basis vector.
pub fn extension_property(rd: &RestrictionData, budget: &SearchBudget) -> Result<ExtensionCertificate, BurnsideError> {
    let n = rd.inclusion.sub().type_count()?;
    let mut expressions = Vec::new();
    for s in 0..n {
        let mut e = vec![0i64; n];
        e[s] = 1;
        match rd.preimage(&e, budget)? {
            Some(v) => expressions.push(v.into_coeffs()),
            None => {
                return Ok(ExtensionCertificate {
                    holds: false,
                    expressions,
                    obstruction: Some(s),
                })
            }
        }
    }
    Ok(ExtensionCertificate {
        holds: true,
        expressions,
        obstruction: None,
    })
}

/// Output of [`alteration_repair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alteration {
    pub psi: GroupAction,
    /// `d_G(ψ, φ)`.
    pub distance: Rational64,
    /// `d_H(ψ₀, i*(φ))`.
    pub input_distance: Rational64,
    /// Types of `G` removed before extending.
    pub removed: BurnsideVector,
}

/// Modifies `φ` so that its restriction to `H` becomes exactly `ψ₀`.
///
/// Orbits of `φ` are removed greedily (largest orbits first) until what is
/// left restricts below `min(i*(φ#), ψ₀#)`; the deficit is refilled with a
/// `G`-set whose restriction is the missing part, and the result is
/// conjugated so that its restriction equals `ψ₀`.
pub fn alteration_repair(
    rd: &RestrictionData,
    phi: &GroupAction,
    psi0: &GroupAction,
    budget: &SearchBudget,
) -> Result<Alteration, BurnsideError> {
    let inc = &rd.inclusion;
    if phi.degree() != psi0.degree() {
        return Err(BurnsideError::DegreeMismatch(phi.degree(), psi0.degree()));
    }
    if psi0.group() != inc.sub() || phi.group() != inc.amb() {
        return Err(GroupError::GroupMismatch.into());
    }
    let g = inc.amb();
    let phi_type = classify(phi)?;
    let restricted = inc.restrict_vector(&phi_type)?;
    let psi0_type = classify(psi0)?;
    let xi = restricted.min_vec(&psi0_type)?;
    let need = restricted.sub(&xi)?;
    // ζ′ ≤ φ# with i*(ζ′) ≥ i*(φ#) − ξ.
    let classes = g.subgroup_classes()?;
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| classes[b].index.cmp(&classes[a].index).then(a.cmp(&b)));
    let mut zeta = vec![0i64; classes.len()];
    let mut covered = vec![0i64; need.coeffs().len()];
    loop {
        let deficit: Vec<i64> = need.coeffs().iter().zip(&covered).map(|(a, b)| a - b).collect();
        if deficit.iter().all(|&x| x <= 0) {
            break;
        }
        let pick = order.iter().copied().find(|&t| {
            zeta[t] < phi_type.coeffs()[t] && rd.images[t].iter().zip(&deficit).any(|(&i, &d)| i > 0 && d > 0)
        });
        let Some(t) = pick else {
            return Err(BurnsideError::NotInImage("greedy cover exhausted".into()));
        };
        zeta[t] += 1;
        for (c, x) in covered.iter_mut().zip(&rd.images[t]) {
            *c += x;
        }
    }
    let removed = BurnsideVector::new(g, zeta)?;
    let keep_type = phi_type.sub(&removed)?;
    let keep = select_orbits(phi, &keep_type)?;
    let kept = phi.restrict_invariant(&keep)?;
    let kept_h = inc.restrict_vector(&keep_type)?;
    let target = psi0_type.sub(&kept_h)?;
    let fill = rd
        .preimage(target.coeffs(), budget)?
        .ok_or_else(|| BurnsideError::NoExtensionProperty(target.coeffs().iter().position(|&c| c != 0).unwrap_or(0)))?;
    let alpha = realize(&fill)?;
    let mut in_keep = vec![false; phi.degree()];
    for &x in &keep {
        in_keep[x] = true;
    }
    let rest: Vec<usize> = (0..phi.degree()).filter(|&x| !in_keep[x]).collect();
    if rest.len() != alpha.degree() {
        return Err(BurnsideError::DegreeMismatch(rest.len(), alpha.degree()));
    }
    let beta = GroupAction::assemble(g, phi.degree(), &[(keep, kept), (rest, alpha)])?;
    let cert = conjugate_close(psi0, &inc.restrict_action(&beta)?)?;
    let psi = beta.conjugate_by(&cert.t)?;
    debug_assert_eq!(inc.restrict_action(&psi)?, *psi0);
    Ok(Alteration {
        distance: action_distance(&psi, phi)?,
        input_distance: action_distance(psi0, &inc.restrict_action(phi)?)?,
        psi,
        removed,
    })
}

/// `Σ i*([G/i(H₀)])` over the subgroup classes `H₀` of `H`: a cone element
/// with every coordinate positive.
pub fn positive_witness(inc: &Inclusion) -> Result<Vec<i64>, BurnsideError> {
    let imgs = inc.type_images()?;
    let mut out = vec![0i64; inc.sub().type_count()?];
    for cl in inc.sub().subgroup_classes()? {
        let t = inc.amb_class_of(&cl.rep)?;
        for (o, x) in out.iter_mut().zip(&imgs[t]) {
            *o += x;
        }
    }
    debug_assert!(out.iter().all(|&x| x > 0));
    Ok(out)
}

/// Forward comparison: `(‖φ₁# − φ₂#‖, |H|·d_H(φ₁,φ₂)·|X|)`.
pub fn distance_vs_norm(phi1: &GroupAction, phi2: &GroupAction) -> Result<(i64, Rational64), BurnsideError> {
    if phi1.degree() != phi2.degree() {
        return Err(BurnsideError::DegreeMismatch(phi1.degree(), phi2.degree()));
    }
    let lhs = classify(phi1)?.sub(&classify(phi2)?)?.norm();
    let d = action_distance(phi1, phi2)?;
    Ok((lhs, d * (phi1.group().order() * phi1.degree()) as i64))
}

/// Converse comparison: an action `φ₂` with `φ₂# = ξ` that keeps the orbits
/// of `φ₁` of type `min(φ₁#, ξ)` and rebuilds the rest on the remaining
/// points in increasing order. Returns `φ₂`, `d_H(φ₁,φ₂)·|X|` and
/// `‖φ₁# − ξ‖/2`; the first is at most the second.
pub fn distance_vs_norm_converse(
    phi1: &GroupAction,
    xi: &BurnsideVector,
) -> Result<(GroupAction, Rational64, Rational64), BurnsideError> {
    let n = phi1.degree() as i64;
    if xi.norm() != n {
        return Err(BurnsideError::NormMismatch(xi.norm(), n));
    }
    if !xi.is_nonneg() {
        return Err(GroupError::NegativeCoefficient(xi.coeffs().iter().position(|&c| c < 0).unwrap_or(0)).into());
    }
    let t1 = classify(phi1)?;
    let common = t1.min_vec(xi)?;
    let keep = select_orbits(phi1, &common)?;
    let kept = phi1.restrict_invariant(&keep)?;
    let mut in_keep = vec![false; phi1.degree()];
    for &x in &keep {
        in_keep[x] = true;
    }
    let rest: Vec<usize> = (0..phi1.degree()).filter(|&x| !in_keep[x]).collect();
    let fill = realize(&xi.sub(&common)?)?;
    let phi2 = GroupAction::assemble(phi1.group(), phi1.degree(), &[(keep, kept), (rest, fill)])?;
    let d = action_distance(phi1, &phi2)? * n;
    let rhs = Rational64::new(t1.sub(xi)?.norm(), 2);
    Ok((phi2, d, rhs))
}

/// A norm-preserving homomorphism `p: Λ(G) → ℤᴬ` sending each transitive
/// type to a positive multiple of one formal coordinate. Coordinate `a`
/// stands for `directions[a]` in a target lattice and has norm `weights[a]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecomposingMap {
    pub directions: Vec<Vec<i64>>,
    pub weights: Vec<i64>,
    /// Type `τ` of `G` maps to `mult·e_comp`, stored as `(comp, mult)`.
    pub type_map: Vec<(usize, i64)>,
    /// `[G : S_τ]` per type.
    pub type_norms: Vec<i64>,
}

impl DecomposingMap {
    /// Each type is its own coordinate, with direction in `Λ(G)`.
    pub fn identity(g: &FiniteGroup) -> Result<Self, BurnsideError> {
        let classes = g.subgroup_classes()?;
        let n = classes.len();
        let norms: Vec<i64> = classes.iter().map(|c| c.index as i64).collect();
        Ok(DecomposingMap {
            directions: (0..n).map(|t| (0..n).map(|j| i64::from(j == t)).collect()).collect(),
            weights: norms.clone(),
            type_map: (0..n).map(|t| (t, 1)).collect(),
            type_norms: norms,
        })
    }

    /// One coordinate per direction of the restriction cone, in `Λ(H)`.
    pub fn from_restriction(rd: &RestrictionData) -> Result<Self, BurnsideError> {
        let h = rd.inclusion.sub();
        let weights = rd.aleph.iter().map(|a| h_norm(h, a)).collect::<Result<Vec<_>, _>>()?;
        Ok(DecomposingMap {
            directions: rd.aleph.clone(),
            weights,
            type_map: rd.type_direction.clone(),
            type_norms: type_norms(rd.inclusion.amb())?,
        })
    }

    /// For two inclusions `i₁, i₂: H → G`: one coordinate per pair of
    /// directions `(a₁, a₂)` occurring together, weight `L = lcm(‖a₁‖, ‖a₂‖)`.
    /// Returns the map and `d` with `d∘p = i₁* − i₂*`, where coordinate
    /// `(a₁, a₂)` goes to `l₁a₁ − l₂a₂`, `lⱼ = L/‖aⱼ‖`.
    pub fn hnn(rd1: &RestrictionData, rd2: &RestrictionData) -> Result<(Self, LinearMapZ), BurnsideError> {
        let h = rd1.inclusion.sub();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut type_map = Vec::new();
        let norms = type_norms(rd1.inclusion.amb())?;
        let mut dirs = Vec::new();
        let mut weights = Vec::new();
        let mut ls = Vec::new();
        for (t, (&(a1, _), &(a2, _))) in rd1.type_direction.iter().zip(&rd2.type_direction).enumerate() {
            let c = match pairs.iter().position(|&p| p == (a1, a2)) {
                Some(c) => c,
                None => {
                    let n1 = h_norm(h, &rd1.aleph[a1])?;
                    let n2 = h_norm(h, &rd2.aleph[a2])?;
                    let l = num_integer::lcm(n1, n2);
                    let (l1, l2) = (l / n1, l / n2);
                    pairs.push((a1, a2));
                    dirs.push(
                        rd1.aleph[a1]
                            .iter()
                            .zip(&rd2.aleph[a2])
                            .map(|(x, y)| l1 * x - l2 * y)
                            .collect::<Vec<i64>>(),
                    );
                    weights.push(l);
                    ls.push(l);
                    pairs.len() - 1
                }
            };
            type_map.push((c, norms[t] / ls[c]));
        }
        let m = DecomposingMap {
            directions: dirs.clone(),
            weights,
            type_map,
            type_norms: norms,
        };
        let d = direction_map(&dirs, h)?;
        Ok((m, d))
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// `p(v)` in formal coordinates.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.dim()];
        for (&c, &(a, k)) in v.iter().zip(&self.type_map) {
            out[a] += c * k;
        }
        out
    }

    /// Formal norm `Σ wₐ|cₐ|`.
    pub fn norm(&self, v: &[i64]) -> i64 {
        v.iter().zip(&self.weights).map(|(c, w)| c.abs() * w).sum()
    }

    /// `p(Λ⁺(G))`: component `a` is generated by the multipliers of the
    /// types mapping to it.
    pub fn primitive_cone(&self) -> Result<PrimitiveCone, ConeError> {
        let comps = (0..self.dim())
            .map(|a| {
                let mults: Vec<i64> = self.type_map.iter().filter(|(c, _)| *c == a).map(|&(_, k)| k).collect();
                Component::new(mults, Rational64::from_integer(self.weights[a]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        PrimitiveCone::new(comps)
    }

    /// Types mapping into component `a`, in increasing order.
    pub fn types_of(&self, a: usize) -> Vec<usize> {
        (0..self.type_map.len()).filter(|&t| self.type_map[t].0 == a).collect()
    }

    /// A nonnegative `v` with `p(v) = target`, built per component by a
    /// deterministic change-making over the multipliers (larger types
    /// preferred).
    pub fn preimage(&self, target: &[i64]) -> Option<Vec<i64>> {
        let mut out = vec![0i64; self.type_map.len()];
        for (a, &value) in target.iter().enumerate() {
            if value < 0 {
                return None;
            }
            let mut types = self.types_of(a);
            types.sort_by(|&x, &y| self.type_map[y].1.cmp(&self.type_map[x].1).then(x.cmp(&y)));
            let v = value as usize;
            // last[x] = type used to reach x
            let mut last: Vec<Option<usize>> = vec![None; v + 1];
            let mut reach = vec![false; v + 1];
            reach[0] = true;
            for x in 1..=v {
                for &t in &types {
                    let k = self.type_map[t].1 as usize;
                    if k <= x && reach[x - k] {
                        reach[x] = true;
                        last[x] = Some(t);
                        break;
                    }
                }
            }
            if !reach[v] {
                return None;
            }
            let mut x = v;
            while x > 0 {
                let t = last[x].expect("reachable");
                out[t] += 1;
                x -= self.type_map[t].1 as usize;
            }
        }
        Some(out)
    }
}

fn type_norms(g: &FiniteGroup) -> Result<Vec<i64>, BurnsideError> {
    Ok(g.subgroup_classes()?.iter().map(|c| c.index as i64).collect())
}

fn direction_map(columns: &[Vec<i64>], h: &FiniteGroup) -> Result<LinearMapZ, BurnsideError> {
    let rows = h.type_count()?;
    let matrix = (0..rows).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    Ok(LinearMapZ::new(matrix, columns.len(), Some(sub_weights(h)?))?)
}

/// For inclusions `i₁: H → G₁`, `i₂: H → G₂`: the formal coordinates of both
/// sides side by side and `d(a₁, a₂) = a₁ − a₂` into `Λ(H)`.
pub fn amalgam_difference_map(p1: &DecomposingMap, p2: &DecomposingMap, h: &FiniteGroup) -> Result<LinearMapZ, BurnsideError> {
    let mut cols: Vec<Vec<i64>> = p1.directions.clone();
    cols.extend(p2.directions.iter().map(|d| d.iter().map(|x| -x).collect::<Vec<i64>>()));
    direction_map(&cols, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named::{alternating4, cyclic, dihedral, klein, symmetric};
    use crate::ratio;

    fn sub_inclusion(g: &FiniteGroup, gens: &[usize]) -> Inclusion {
        Inclusion::from_subgroup(g, &Subgroup::new(g, g.closure(gens)).unwrap()).unwrap()
    }

    fn z4_z2() -> Inclusion {
        let z4 = cyclic(4);
        let r = z4.generators()[0];
        sub_inclusion(&z4, &[z4.mul(r, r)])
    }

    #[test]
    fn rejects_non_homomorphism() {
        let z2 = cyclic(2);
        let z4 = cyclic(4);
        assert!(Inclusion::new(&z2, &z4, vec![0, z4.generators()[0]]).is_err());
        assert!(Inclusion::new(&z2, &z4, vec![0, 0]).is_err());
    }

    #[test]
    fn z4_over_z2_restriction() {
        let inc = z4_z2();
        assert_eq!(inc.type_images().unwrap(), &[vec![2, 0], vec![0, 2], vec![0, 1]]);
        let rd = compute_restriction_data(&inc).unwrap();
        assert_eq!(rd.cone_generators.len(), 3);
        assert_eq!(rd.aleph, vec![vec![1, 0], vec![0, 1]]);
        assert!(rd.normal);
        let ext = extension_property(&rd, &SearchBudget::default()).unwrap();
        assert!(!ext.holds);
        assert_eq!(ext.obstruction, Some(0));
        assert_eq!(positive_witness(&inc).unwrap(), vec![2, 2]);
    }

    #[test]
    fn klein_over_factor_has_extension_property() {
        let k = klein();
        let inc = sub_inclusion(&k, &[k.generators()[0]]);
        let rd = compute_restriction_data(&inc).unwrap();
        let ext = extension_property(&rd, &SearchBudget::default()).unwrap();
        assert!(ext.holds);
        for (s, e) in ext.expressions.iter().enumerate() {
            let v = inc.restrict_vector(&BurnsideVector::new(&k, e.clone()).unwrap()).unwrap();
            let mut unit = vec![0; 2];
            unit[s] = 1;
            assert_eq!(v.coeffs(), unit.as_slice());
        }
    }

    #[test]
    fn identity_inclusion() {
        let s3 = symmetric(3);
        let inc = Inclusion::identity(&s3);
        let rd = compute_restriction_data(&inc).unwrap();
        for (t, img) in rd.images.iter().enumerate() {
            assert_eq!(img.iter().sum::<i64>(), 1);
            assert_eq!(img[t], 1);
        }
        assert!(extension_property(&rd, &SearchBudget::default()).unwrap().holds);
    }

    #[test]
    fn normal_generators_are_orbit_sum_multiples() {
        let s3 = symmetric(3);
        let r = s3.generators()[0];
        let inc = sub_inclusion(&s3, &[r]);
        let rd = compute_restriction_data(&inc).unwrap();
        assert!(rd.normal);
        for img in &rd.images {
            let support: Vec<usize> = (0..img.len()).filter(|&s| img[s] != 0).collect();
            let orbit = inc.conjugation_orbit(support[0]).unwrap();
            assert_eq!(support, orbit);
            let k = img[support[0]];
            assert!(support.iter().all(|&s| img[s] == k));
        }
    }

    #[test]
    fn restriction_preserves_norm() {
        for (g, gens) in [(dihedral(4), 1usize), (alternating4(), 1), (symmetric(4), 1)] {
            let inc = sub_inclusion(&g, &[g.generators()[gens]]);
            let h = inc.sub().clone();
            for (t, img) in inc.type_images().unwrap().iter().enumerate() {
                let gn = g.subgroup_classes().unwrap()[t].index as i64;
                assert_eq!(h_norm(&h, img).unwrap(), gn);
            }
        }
    }

    #[test]
    fn alteration_on_klein() {
        let k = klein();
        let inc = sub_inclusion(&k, &[k.generators()[0]]);
        let rd = compute_restriction_data(&inc).unwrap();
        let reg = crate::group::coset_action(&k, &Subgroup::trivial(&k)).unwrap();
        let z2 = inc.sub().clone();
        let restricted = inc.restrict_action(&reg).unwrap();
        // Same type as the restriction, acting on other points.
        let g = restricted.image(1).clone();
        let moved: Vec<usize> = g.cycles().into_iter().flatten().collect();
        assert_eq!(moved.len(), 4);
        let psi0 = GroupAction::from_generator_images(
            &z2,
            4,
            &[Perm::from_cycles(4, &[&[moved[0], moved[2]], &[moved[1], moved[3]]]).unwrap()],
        )
        .unwrap();
        let out = alteration_repair(&rd, &reg, &psi0, &SearchBudget::default()).unwrap();
        assert_eq!(inc.restrict_action(&out.psi).unwrap(), psi0);
        let same = alteration_repair(&rd, &reg, &restricted, &SearchBudget::default()).unwrap();
        assert_eq!(same.psi, reg);
        assert_eq!(same.distance, ratio(0, 1));
    }

    #[test]
    fn alteration_changes_type() {
        let k = klein();
        let inc = sub_inclusion(&k, &[k.generators()[0]]);
        let rd = compute_restriction_data(&inc).unwrap();
        let reg = crate::group::coset_action(&k, &Subgroup::trivial(&k)).unwrap();
        let z2 = inc.sub().clone();
        let psi0 = GroupAction::from_generator_images(&z2, 4, &[Perm::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        let out = alteration_repair(&rd, &reg, &psi0, &SearchBudget::default()).unwrap();
        assert_eq!(inc.restrict_action(&out.psi).unwrap(), psi0);
    }

    #[test]
    fn distance_examples() {
        let z2 = cyclic(2);
        let a = GroupAction::from_generator_images(&z2, 4, &[Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()]).unwrap();
        let b = GroupAction::from_generator_images(&z2, 4, &[Perm::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        assert_eq!(distance_vs_norm(&a, &b).unwrap(), (4, ratio(4, 1)));
        assert_eq!(distance_vs_norm(&a, &a).unwrap(), (0, ratio(0, 1)));
        let xi = classify(&a).unwrap();
        let (same, d, _) = distance_vs_norm_converse(&a, &xi).unwrap();
        assert_eq!(same, a);
        assert_eq!(d, ratio(0, 1));
        let target = classify(&b).unwrap();
        let (c, d, rhs) = distance_vs_norm_converse(&a, &target).unwrap();
        assert_eq!(classify(&c).unwrap(), target);
        assert!(d <= rhs);
    }

    #[test]
    fn decomposing_maps() {
        let inc = z4_z2();
        let rd = compute_restriction_data(&inc).unwrap();
        let p = DecomposingMap::from_restriction(&rd).unwrap();
        assert_eq!(p.type_map, vec![(0, 2), (1, 2), (1, 1)]);
        assert_eq!(p.weights, vec![2, 1]);
        let pc = p.primitive_cone().unwrap();
        assert_eq!(pc.components()[0].multipliers, vec![2]);
        assert_eq!(pc.components()[1].multipliers, vec![1, 2]);
        for v in [vec![1, 0, 0], vec![0, 3, 1], vec![2, 1, 5]] {
            let f = p.apply(&v);
            let norm_g: i64 = v.iter().zip(&p.type_norms).map(|(a, b)| a * b).sum();
            assert_eq!(p.norm(&f), norm_g);
            let back = p.preimage(&f).unwrap();
            assert_eq!(p.apply(&back), f);
        }
        let id = DecomposingMap::identity(&cyclic(2)).unwrap();
        assert_eq!(id.apply(&[1, 2]), vec![1, 2]);
    }

    #[test]
    fn hnn_map_composes_to_restriction_difference() {
        let k = klein();
        let a = sub_inclusion(&k, &[k.generators()[0]]);
        let z2 = a.sub().clone();
        let b = Inclusion::new(&z2, &k, vec![0, k.generators()[1]]).unwrap();
        let rd1 = compute_restriction_data(&a).unwrap();
        let rd2 = compute_restriction_data(&b).unwrap();
        let (p, d) = DecomposingMap::hnn(&rd1, &rd2).unwrap();
        for t in 0..k.type_count().unwrap() {
            let mut e = vec![0; k.type_count().unwrap()];
            e[t] = 1;
            let lhs = d.apply(&p.apply(&e));
            let rhs: Vec<i64> = rd1.images[t].iter().zip(&rd2.images[t]).map(|(x, y)| x - y).collect();
            assert_eq!(lhs, rhs);
        }
    }
}
