//! Stabilization pipelines for amalgamated free products `G₁ ∗_H G₂` and HNN
//! extensions `G ∗_H` over finite `H`.
//!
//! An almost-action of `G₁ ∗ G₂` is a pair of genuine actions on the same
//! points whose restrictions to `H` nearly agree; an almost-action of the HNN
//! extension is an action of `G` together with a permutation `τ` for the
//! stable letter. Every pipeline returns actions satisfying the defining
//! relations exactly.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::burnside::{
    amalgam_difference_map, compute_restriction_data, BurnsideError, DecomposingMap, Inclusion, RestrictionData,
};
use crate::cone::{flex_adjust, project_ker, ConeError, FlexRoute, PrimitiveCone, SearchBudget};
use crate::conjugator::{conjugate_close, ConjugatorError};
use crate::group::{action_distance, classify, realize, BurnsideVector, FiniteGroup, GroupAction, GroupError};
use crate::oracle::{reshape, OracleError};
use crate::perm::{Perm, PermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error("strict mode needs normal images of H: {0}")]
    NotNormal(String),
    #[error("inclusions have different domains")]
    SpecMismatch,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("no type obstruction expected here: {0}")]
    TypeObstruction(String),
    #[error(transparent)]
    Burnside(#[from] BurnsideError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Conjugator(#[from] ConjugatorError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// `G₁ ∗_H G₂` with `E₀ = {i₁(h)·i₂(h)⁻¹}`.
#[derive(Debug, Clone)]
pub struct AmalgamSpec {
    pub i1: Inclusion,
    pub i2: Inclusion,
}

/// `G ∗_H` with stable letter `t` and `E₀ = {i₁(h)⁻¹·t·i₂(h)·t⁻¹}`.
#[derive(Debug, Clone)]
pub struct HnnSpec {
    pub i1: Inclusion,
    pub i2: Inclusion,
}

/// A relator of `E₀`, recorded by the element of `H` it comes from and its
/// images on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Relator {
    pub h: usize,
    pub left: usize,
    pub right: usize,
}

impl AmalgamSpec {
    pub fn new(i1: Inclusion, i2: Inclusion) -> Result<Self, AmalgamError> {
        if i1.sub() != i2.sub() {
            return Err(AmalgamError::SpecMismatch);
        }
        Ok(AmalgamSpec { i1, i2 })
    }

    pub fn h(&self) -> &FiniteGroup {
        self.i1.sub()
    }

    /// `i₁(h)·i₂(h)⁻¹` for every `h ∈ H`.
    pub fn e0(&self) -> Vec<Relator> {
        (0..self.h().order())
            .map(|h| Relator {
                h,
                left: self.i1.embed()[h],
                right: self.i2.embed()[h],
            })
            .collect()
    }

    /// Both factors and both inclusions coincide.
    pub fn is_double(&self) -> bool {
        self.i1 == self.i2
    }
}

impl HnnSpec {
    pub fn new(i1: Inclusion, i2: Inclusion) -> Result<Self, AmalgamError> {
        if i1.sub() != i2.sub() || i1.amb() != i2.amb() {
            return Err(AmalgamError::SpecMismatch);
        }
        Ok(HnnSpec { i1, i2 })
    }

    pub fn g(&self) -> &FiniteGroup {
        self.i1.amb()
    }

    pub fn e0(&self) -> Vec<Relator> {
        (0..self.i1.sub().order())
            .map(|h| Relator {
                h,
                left: self.i1.embed()[h],
                right: self.i2.embed()[h],
            })
            .collect()
    }

    pub fn is_double(&self) -> bool {
        self.i1 == self.i2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Strict,
    Flexible,
}

/// How the type discrepancy was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Restriction types already matched; only conjugation.
    Conjugation,
    /// Kernel projection and reshaping on the same points.
    Reshape,
    /// Matching inside the common restriction cone.
    DoubleSolve,
    /// Cut and pad through the primitive cone.
    Flex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineTrace {
    pub route: Route,
    /// Formal coordinates of the input types.
    pub formal_type: Vec<i64>,
    pub kernel_point: Option<Vec<i64>>,
    pub xi_prime: Option<Vec<i64>>,
    pub eta: Option<Vec<i64>>,
    pub flex_route: Option<FlexRoute>,
    /// Trivial-type points appended on each side.
    pub padding: usize,
    /// `hamming(t, id)` of the final conjugator.
    pub conjugator_support: Rational64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stabilized {
    Amalgam { psi1: GroupAction, psi2: GroupAction },
    Hnn { psi_g: GroupAction, psi_t: Perm },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationResult {
    pub output: Stabilized,
    pub input_degree: usize,
    pub output_degree: usize,
    /// `|Y| / |X|`.
    pub size_ratio: Rational64,
    pub input_defect: Rational64,
    /// Largest fraction of `X` on which an input and output generator image
    /// differ (all group elements, and the stable letter).
    pub output_distance: Rational64,
    pub mode: Mode,
    pub verified: bool,
    pub trace: PipelineTrace,
}

/// Outcome of [`verify_amalgam`] / [`verify_hnn`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    /// An element of `H` whose relator fails.
    pub witness: Option<usize>,
}

/// `max_h hamming(φ₁(i₁h), φ₂(i₂h))`.
pub fn defect_e0(spec: &AmalgamSpec, phi1: &GroupAction, phi2: &GroupAction) -> Result<Rational64, AmalgamError> {
    if phi1.degree() != phi2.degree() {
        return Err(AmalgamError::DegreeMismatch(phi1.degree(), phi2.degree()));
    }
    Ok(action_distance(&spec.i1.restrict_action(phi1)?, &spec.i2.restrict_action(phi2)?)?)
}

/// `max_h hamming(φ(i₁h), τ·φ(i₂h)·τ⁻¹)`.
pub fn defect_hnn(spec: &HnnSpec, phi: &GroupAction, tau: &Perm) -> Result<Rational64, AmalgamError> {
    let a = spec.i1.restrict_action(phi)?;
    let b = spec.i2.restrict_action(phi)?.conjugate_by(tau)?;
    Ok(action_distance(&a, &b)?)
}

pub fn verify_amalgam(spec: &AmalgamSpec, psi1: &GroupAction, psi2: &GroupAction) -> Verification {
    if psi1.degree() != psi2.degree() || psi1.group() != spec.i1.amb() || psi2.group() != spec.i2.amb() {
        return Verification { ok: false, witness: None };
    }
    for r in spec.e0() {
        if psi1.image(r.left) != psi2.image(r.right) {
            return Verification { ok: false, witness: Some(r.h) };
        }
    }
    Verification { ok: true, witness: None }
}

pub fn verify_hnn(spec: &HnnSpec, psi_g: &GroupAction, psi_t: &Perm) -> Verification {
    if psi_g.group() != spec.g() || psi_t.degree() != psi_g.degree() {
        return Verification { ok: false, witness: None };
    }
    for r in spec.e0() {
        if *psi_g.image(r.left) != psi_g.image(r.right).conjugate_by(psi_t) {
            return Verification { ok: false, witness: Some(r.h) };
        }
    }
    Verification { ok: true, witness: None }
}

/// Dispatches to the relator check matching the result's shape.
pub fn verify(result: &StabilizationResult, spec: &PipelineSpec) -> Verification {
    match (&result.output, spec) {
        (Stabilized::Amalgam { psi1, psi2 }, PipelineSpec::Amalgam(s)) => verify_amalgam(s, psi1, psi2),
        (Stabilized::Hnn { psi_g, psi_t }, PipelineSpec::Hnn(s)) => verify_hnn(s, psi_g, psi_t),
        _ => Verification { ok: false, witness: None },
    }
}

#[derive(Debug, Clone)]
pub enum PipelineSpec {
    Amalgam(AmalgamSpec),
    Hnn(HnnSpec),
}

/// Input actions matching a [`PipelineSpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineInput {
    Amalgam { phi1: GroupAction, phi2: GroupAction },
    Hnn { phi: GroupAction, tau: Perm },
}

/// Runs the pipeline for `mode`. Strict HNN over a double spec uses the
/// conjugation-only construction.
pub fn stabilize(
    spec: &PipelineSpec,
    input: &PipelineInput,
    mode: Mode,
    budget: &SearchBudget,
) -> Result<StabilizationResult, AmalgamError> {
    match (spec, input, mode) {
        (PipelineSpec::Amalgam(s), PipelineInput::Amalgam { phi1, phi2 }, Mode::Strict) => {
            stabilize_amalgam_strict(s, phi1, phi2, budget)
        }
        (PipelineSpec::Amalgam(s), PipelineInput::Amalgam { phi1, phi2 }, Mode::Flexible) => {
            stabilize_amalgam_flexible(s, phi1, phi2, budget)
        }
        (PipelineSpec::Hnn(s), PipelineInput::Hnn { phi, tau }, Mode::Strict) if s.is_double() => {
            stabilize_hnn_double(s, phi, tau)
        }
        (PipelineSpec::Hnn(s), PipelineInput::Hnn { phi, tau }, Mode::Strict) => stabilize_hnn_strict(s, phi, tau, budget),
        (PipelineSpec::Hnn(s), PipelineInput::Hnn { phi, tau }, Mode::Flexible) => {
            stabilize_hnn_flexible(s, phi, tau, budget)
        }
        _ => Err(AmalgamError::SpecMismatch),
    }
}

/// Fraction of `x < n` with `a(x) ≠ b(x)`, maximized over paired images.
pub fn prefix_distance(a: &[Perm], b: &[Perm], n: usize) -> Rational64 {
    if n == 0 {
        return Rational64::from_integer(0);
    }
    a.iter()
        .zip(b)
        .map(|(p, q)| Rational64::new((0..n).filter(|&x| p.apply(x) != q.apply(x)).count() as i64, n as i64))
        .max()
        .unwrap_or_else(|| Rational64::from_integer(0))
}

fn ratio_of(m: usize, n: usize) -> Rational64 {
    if n == 0 {
        Rational64::from_integer(1)
    } else {
        Rational64::new(m as i64, n as i64)
    }
}

fn require_normal(inc: &Inclusion, name: &str) -> Result<(), AmalgamError> {
    if inc.is_normal() {
        Ok(())
    } else {
        Err(AmalgamError::NotNormal(format!("{name} is not normal")))
    }
}

fn join_cones(a: &PrimitiveCone, b: &PrimitiveCone) -> Result<PrimitiveCone, ConeError> {
    let mut comps = a.components().to_vec();
    comps.extend_from_slice(b.components());
    PrimitiveCone::new(comps)
}

struct SideMaps {
    p1: DecomposingMap,
    p2: DecomposingMap,
}

fn side_maps(rd1: &RestrictionData, rd2: &RestrictionData) -> Result<SideMaps, AmalgamError> {
    Ok(SideMaps {
        p1: DecomposingMap::from_restriction(rd1)?,
        p2: DecomposingMap::from_restriction(rd2)?,
    })
}

/// Places `kept` (an invariant part of `φ` on `points`, original labels) and
/// a realization of `extra` plus `pad` trivial points on the remaining labels
/// of `{0, …, total−1}` in increasing order.
fn build_on(
    group: &FiniteGroup,
    phi: &GroupAction,
    points: &[usize],
    extra: &BurnsideVector,
    pad: usize,
    total: usize,
) -> Result<GroupAction, AmalgamError> {
    let kept = phi.restrict_invariant(points)?;
    let mut extra = extra.clone();
    if pad > 0 {
        extra = extra.add(&BurnsideVector::basis(group, group.trivial_type()?, pad as i64)?)?;
    }
    let fill = realize(&extra)?;
    let mut used = vec![false; total];
    for &x in points {
        used[x] = true;
    }
    let rest: Vec<usize> = (0..total).filter(|&x| !used[x]).collect();
    if rest.len() != fill.degree() {
        return Err(AmalgamError::DegreeMismatch(rest.len(), fill.degree()));
    }
    Ok(GroupAction::assemble(group, total, &[(points.to_vec(), kept), (rest, fill)])?)
}

/// Points of the orbits of `φ` whose type maps into a component kept by `ξ′`.
fn kept_points(phi: &GroupAction, p: &DecomposingMap, xi_prime: &[i64]) -> Result<Vec<usize>, AmalgamError> {
    let mut pts = Vec::new();
    for (t, orbit) in phi.typed_orbits()? {
        if xi_prime[p.type_map[t].0] != 0 {
            pts.extend(orbit);
        }
    }
    pts.sort_unstable();
    Ok(pts)
}

fn finish_amalgam(
    spec: &AmalgamSpec,
    phi1: &GroupAction,
    phi2: &GroupAction,
    beta1: GroupAction,
    beta2: GroupAction,
    mode: Mode,
    mut trace: PipelineTrace,
) -> Result<StabilizationResult, AmalgamError> {
    let cert = conjugate_close(&spec.i1.restrict_action(&beta1)?, &spec.i2.restrict_action(&beta2)?)?;
    let psi2 = beta2.conjugate_by(&cert.t)?;
    trace.conjugator_support = cert.support_fraction;
    let n = phi1.degree();
    let out_n = beta1.degree();
    let output_distance = prefix_distance(phi1.images(), beta1.images(), n).max(prefix_distance(phi2.images(), psi2.images(), n));
    let verified = verify_amalgam(spec, &beta1, &psi2).ok;
    Ok(StabilizationResult {
        input_defect: defect_e0(spec, phi1, phi2)?,
        output: Stabilized::Amalgam { psi1: beta1, psi2 },
        input_degree: n,
        output_degree: out_n,
        size_ratio: ratio_of(out_n, n),
        output_distance,
        mode,
        verified,
        trace,
    })
}

fn check_amalgam_input(spec: &AmalgamSpec, phi1: &GroupAction, phi2: &GroupAction) -> Result<(), AmalgamError> {
    if phi1.degree() != phi2.degree() {
        return Err(AmalgamError::DegreeMismatch(phi1.degree(), phi2.degree()));
    }
    if phi1.group() != spec.i1.amb() || phi2.group() != spec.i2.amb() {
        return Err(GroupError::GroupMismatch.into());
    }
    Ok(())
}

fn empty_trace(route: Route, formal_type: Vec<i64>) -> PipelineTrace {
    PipelineTrace {
        route,
        formal_type,
        kernel_point: None,
        xi_prime: None,
        eta: None,
        flex_route: None,
        padding: 0,
        conjugator_support: Rational64::from_integer(0),
    }
}

/// Strict mode: both images of `H` normal; the output lives on the same
/// points. The formal type `ξ = (p₁φ₁#, p₂φ₂#)` is projected to the kernel
/// of `d(a₁, a₂) = a₁ − a₂`, topped up along the trivial direction, each side
/// is reshaped to its half of the projection, and the second side is
/// conjugated onto the first over `H`.
pub fn stabilize_amalgam_strict(
    spec: &AmalgamSpec,
    phi1: &GroupAction,
    phi2: &GroupAction,
    budget: &SearchBudget,
) -> Result<StabilizationResult, AmalgamError> {
    check_amalgam_input(spec, phi1, phi2)?;
    require_normal(&spec.i1, "i₁(H)")?;
    require_normal(&spec.i2, "i₂(H)")?;
    let rd1 = compute_restriction_data(&spec.i1)?;
    let rd2 = compute_restriction_data(&spec.i2)?;
    let SideMaps { p1, p2 } = side_maps(&rd1, &rd2)?;
    let d = amalgam_difference_map(&p1, &p2, spec.h())?;
    let mut xi = p1.apply(classify(phi1)?.coeffs());
    xi.extend(p2.apply(classify(phi2)?.coeffs()));
    if d.apply(&xi).iter().all(|&x| x == 0) {
        let trace = empty_trace(Route::Conjugation, xi);
        return finish_amalgam(spec, phi1, phi2, phi1.clone(), phi2.clone(), Mode::Strict, trace);
    }
    let pc = join_cones(&p1.primitive_cone()?, &p2.primitive_cone()?)?;
    let proj = project_ker(&pc, &d, &xi, budget)?;
    let mut v = proj.v.clone();
    let n = phi1.degree() as i64;
    let m1 = p1.dim();
    let side_norm = p1.norm(&v[..m1]);
    let top_up = n - side_norm;
    if top_up < 0 || p2.norm(&v[m1..]) != side_norm {
        return Err(AmalgamError::TypeObstruction("kernel point has unequal sides".into()));
    }
    let c1 = p1.type_map[spec.i1.amb().trivial_type()?].0;
    let c2 = p2.type_map[spec.i2.amb().trivial_type()?].0;
    v[c1] += top_up;
    v[m1 + c2] += top_up;
    let beta1 = reshape(phi1, &p1, &v[..m1])?.psi;
    let beta2 = reshape(phi2, &p2, &v[m1..])?.psi;
    let mut trace = empty_trace(Route::Reshape, xi);
    trace.kernel_point = Some(v);
    finish_amalgam(spec, phi1, phi2, beta1, beta2, Mode::Strict, trace)
}

/// Flexible mode: cut small parts of each action and add small new parts so
/// that the restriction types agree, then conjugate. The underlying set
/// grows from `X` to `Z ⊇ X`, with `X` a prefix of `Z`.
///
/// For doubles the new parts come from matching in the restriction cone;
/// otherwise from the flexible adjustment on the primitive cone.
pub fn stabilize_amalgam_flexible(
    spec: &AmalgamSpec,
    phi1: &GroupAction,
    phi2: &GroupAction,
    budget: &SearchBudget,
) -> Result<StabilizationResult, AmalgamError> {
    check_amalgam_input(spec, phi1, phi2)?;
    let n = phi1.degree();
    let g1 = spec.i1.amb();
    let g2 = spec.i2.amb();
    let rd1 = compute_restriction_data(&spec.i1)?;
    let t1 = classify(phi1)?;
    let t2 = classify(phi2)?;
    let all: Vec<usize> = (0..n).collect();
    let (x1, x2, a1, a2, trace) = if spec.is_double() {
        let cone = rd1.cone()?;
        let xi1 = spec.i1.restrict_vector(&t1)?;
        let xi2 = spec.i2.restrict_vector(&t2)?;
        let sol = cone.double_solve(xi1.coeffs(), xi2.coeffs(), budget)?;
        let mut trace = empty_trace(Route::DoubleSolve, [xi1.coeffs(), xi2.coeffs()].concat());
        trace.eta = Some([sol.eta1.clone(), sol.eta2.clone()].concat());
        (all.clone(), all, rd1.lift(&sol.cert1)?, rd1.lift(&sol.cert2)?, trace)
    } else {
        let rd2 = compute_restriction_data(&spec.i2)?;
        let SideMaps { p1, p2 } = side_maps(&rd1, &rd2)?;
        let d = amalgam_difference_map(&p1, &p2, spec.h())?;
        let pc = join_cones(&p1.primitive_cone()?, &p2.primitive_cone()?)?;
        let mut xi = p1.apply(t1.coeffs());
        xi.extend(p2.apply(t2.coeffs()));
        let flex = flex_adjust(&pc, &d, &xi, budget)?;
        let m1 = p1.dim();
        let x1 = kept_points(phi1, &p1, &flex.xi_prime[..m1])?;
        let x2 = kept_points(phi2, &p2, &flex.xi_prime[m1..])?;
        let e1 = p1.preimage(&flex.eta[..m1]).ok_or_else(|| AmalgamError::TypeObstruction("η₁ not realizable".into()))?;
        let e2 = p2.preimage(&flex.eta[m1..]).ok_or_else(|| AmalgamError::TypeObstruction("η₂ not realizable".into()))?;
        let mut trace = empty_trace(Route::Flex, xi);
        trace.kernel_point = flex.projection.as_ref().map(|p| p.v.clone());
        trace.xi_prime = Some(flex.xi_prime.clone());
        trace.eta = Some(flex.eta.clone());
        trace.flex_route = Some(flex.route);
        (x1, x2, BurnsideVector::new(g1, e1)?, BurnsideVector::new(g2, e2)?, trace)
    };
    let s1 = x1.len() + a1.norm() as usize;
    let s2 = x2.len() + a2.norm() as usize;
    if s1 != s2 {
        return Err(AmalgamError::TypeObstruction(format!("sides of size {s1} and {s2}")));
    }
    let total = s1.max(n);
    let pad = total - s1;
    let beta1 = build_on(g1, phi1, &x1, &a1, pad, total)?;
    let beta2 = build_on(g2, phi2, &x2, &a2, pad, total)?;
    let mut trace = trace;
    trace.padding = pad;
    finish_amalgam(spec, phi1, phi2, beta1, beta2, Mode::Flexible, trace)
}

fn finish_hnn(
    spec: &HnnSpec,
    phi: &GroupAction,
    tau: &Perm,
    psi_g: GroupAction,
    tau_prime: Perm,
    mode: Mode,
    mut trace: PipelineTrace,
) -> Result<StabilizationResult, AmalgamError> {
    let a = spec.i1.restrict_action(&psi_g)?;
    let b = spec.i2.restrict_action(&psi_g)?.conjugate_by(&tau_prime)?;
    let cert = conjugate_close(&a, &b)?;
    let psi_t = &cert.t * &tau_prime;
    trace.conjugator_support = cert.support_fraction;
    let n = phi.degree();
    let out_n = psi_g.degree();
    let output_distance = prefix_distance(phi.images(), psi_g.images(), n)
        .max(prefix_distance(std::slice::from_ref(tau), std::slice::from_ref(&psi_t), n));
    let verified = verify_hnn(spec, &psi_g, &psi_t).ok;
    Ok(StabilizationResult {
        input_defect: defect_hnn(spec, phi, tau)?,
        output: Stabilized::Hnn { psi_g, psi_t },
        input_degree: n,
        output_degree: out_n,
        size_ratio: ratio_of(out_n, n),
        output_distance,
        mode,
        verified,
        trace,
    })
}

fn check_hnn_input(spec: &HnnSpec, phi: &GroupAction, tau: &Perm) -> Result<(), AmalgamError> {
    if phi.group() != spec.g() {
        return Err(GroupError::GroupMismatch.into());
    }
    if tau.degree() != phi.degree() {
        return Err(AmalgamError::DegreeMismatch(phi.degree(), tau.degree()));
    }
    Ok(())
}

/// `i₁ = i₂`: keep `φ` and correct the stable letter to `u·τ`, where `u`
/// conjugates `(i*φ)^τ` onto `i*φ`.
pub fn stabilize_hnn_double(spec: &HnnSpec, phi: &GroupAction, tau: &Perm) -> Result<StabilizationResult, AmalgamError> {
    check_hnn_input(spec, phi, tau)?;
    if !spec.is_double() {
        return Err(AmalgamError::SpecMismatch);
    }
    let trace = empty_trace(Route::Conjugation, classify(phi)?.into_coeffs());
    finish_hnn(spec, phi, tau, phi.clone(), tau.clone(), Mode::Strict, trace)
}

fn hnn_maps(spec: &HnnSpec) -> Result<(DecomposingMap, crate::cone::LinearMapZ), AmalgamError> {
    let rd1 = compute_restriction_data(&spec.i1)?;
    let rd2 = compute_restriction_data(&spec.i2)?;
    Ok(DecomposingMap::hnn(&rd1, &rd2)?)
}

/// Strict HNN: both images normal. Reshape `φ` on the same points so that
/// `i₁*φ′` and `i₂*φ′` have equal types, then `ψ(t) = u·τ`.
pub fn stabilize_hnn_strict(
    spec: &HnnSpec,
    phi: &GroupAction,
    tau: &Perm,
    budget: &SearchBudget,
) -> Result<StabilizationResult, AmalgamError> {
    check_hnn_input(spec, phi, tau)?;
    require_normal(&spec.i1, "i₁(H)")?;
    require_normal(&spec.i2, "i₂(H)")?;
    let (p, d) = hnn_maps(spec)?;
    let xi = p.apply(classify(phi)?.coeffs());
    if d.apply(&xi).iter().all(|&x| x == 0) {
        let trace = empty_trace(Route::Conjugation, xi);
        return finish_hnn(spec, phi, tau, phi.clone(), tau.clone(), Mode::Strict, trace);
    }
    let pc = p.primitive_cone()?;
    let proj = project_ker(&pc, &d, &xi, budget)?;
    let mut v = proj.v;
    let top_up = phi.degree() as i64 - p.norm(&v);
    let c = p.type_map[spec.g().trivial_type()?].0;
    if top_up < 0 || p.weights[c] != 1 {
        return Err(AmalgamError::TypeObstruction("cannot top up along the trivial direction".into()));
    }
    v[c] += top_up;
    let reshaped = reshape(phi, &p, &v)?.psi;
    let mut trace = empty_trace(Route::Reshape, xi);
    trace.kernel_point = Some(v);
    finish_hnn(spec, phi, tau, reshaped, tau.clone(), Mode::Strict, trace)
}

/// Flexible HNN: keep the orbits of `φ` in the components retained by the
/// flexible adjustment (`Y`), add the correction and trivial padding on new
/// points, and set `ψ(t) = u·((τ|_Y) ⊔ 1)`.
pub fn stabilize_hnn_flexible(
    spec: &HnnSpec,
    phi: &GroupAction,
    tau: &Perm,
    budget: &SearchBudget,
) -> Result<StabilizationResult, AmalgamError> {
    check_hnn_input(spec, phi, tau)?;
    let g = spec.g();
    let n = phi.degree();
    let (p, d) = hnn_maps(spec)?;
    let xi = p.apply(classify(phi)?.coeffs());
    let pc = p.primitive_cone()?;
    let flex = flex_adjust(&pc, &d, &xi, budget)?;
    let y = kept_points(phi, &p, &flex.xi_prime)?;
    let eta = p
        .preimage(&flex.eta)
        .ok_or_else(|| AmalgamError::TypeObstruction("η not realizable".into()))?;
    let extra = BurnsideVector::new(g, eta)?;
    let s = y.len() + extra.norm() as usize;
    let total = s.max(n);
    let pad = total - s;
    let psi_g = build_on(g, phi, &y, &extra, pad, total)?;
    let tau_prime = if y.len() == n && total == n {
        tau.clone()
    } else {
        tau.restrict(&y)?.embed(&y, total)?
    };
    let mut trace = empty_trace(Route::Flex, xi);
    trace.kernel_point = flex.projection.as_ref().map(|p| p.v.clone());
    trace.xi_prime = Some(flex.xi_prime.clone());
    trace.eta = Some(flex.eta.clone());
    trace.flex_route = Some(flex.route);
    trace.padding = pad;
    finish_hnn(spec, phi, tau, psi_g, tau_prime, Mode::Flexible, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named::{cyclic, klein, symmetric};
    use crate::group::{coset_action, Subgroup};
    use crate::ratio;

    fn sub_inclusion(g: &FiniteGroup, gens: &[usize]) -> Inclusion {
        Inclusion::from_subgroup(g, &Subgroup::new(g, g.closure(gens)).unwrap()).unwrap()
    }

    fn s3_over_z3() -> AmalgamSpec {
        let s3 = symmetric(3);
        let inc = sub_inclusion(&s3, &[s3.generators()[0]]);
        AmalgamSpec::new(inc.clone(), inc).unwrap()
    }

    #[test]
    fn e0_defect_examples() {
        let spec = s3_over_z3();
        let s3 = spec.i1.amb().clone();
        let reg = coset_action(&s3, &Subgroup::trivial(&s3)).unwrap();
        assert_eq!(defect_e0(&spec, &reg, &reg).unwrap(), ratio(0, 1));
        let z2 = cyclic(2);
        let inc = Inclusion::identity(&z2);
        let spec = AmalgamSpec::new(inc.clone(), inc).unwrap();
        let a = GroupAction::from_generator_images(&z2, 4, &[Perm::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        let b = GroupAction::from_generator_images(&z2, 4, &[Perm::from_cycles(4, &[&[2, 3]]).unwrap()]).unwrap();
        assert_eq!(defect_e0(&spec, &a, &b).unwrap(), ratio(1, 1));
    }

    #[test]
    fn double_s3_flexible_and_strict() {
        let spec = s3_over_z3();
        let s3 = spec.i1.amb().clone();
        let reg = coset_action(&s3, &Subgroup::trivial(&s3)).unwrap();
        let t = Perm::from_cycles(6, &[&[0, 3]]).unwrap();
        let other = reg.conjugate_by(&t).unwrap();
        for res in [
            stabilize_amalgam_flexible(&spec, &reg, &other, &SearchBudget::default()).unwrap(),
            stabilize_amalgam_strict(&spec, &reg, &other, &SearchBudget::default()).unwrap(),
        ] {
            assert!(res.verified);
            assert_eq!(res.size_ratio, ratio(1, 1));
        }
        let same = stabilize_amalgam_flexible(&spec, &reg, &reg, &SearchBudget::default()).unwrap();
        assert_eq!(same.output_distance, ratio(0, 1));
    }

    #[test]
    fn strict_refuses_non_normal() {
        let s3 = symmetric(3);
        let inc = sub_inclusion(&s3, &[s3.generators()[1]]);
        let spec = AmalgamSpec::new(inc.clone(), inc).unwrap();
        let reg = coset_action(&s3, &Subgroup::trivial(&s3)).unwrap();
        assert!(matches!(
            stabilize_amalgam_strict(&spec, &reg, &reg, &SearchBudget::default()),
            Err(AmalgamError::NotNormal(_))
        ));
    }

    #[test]
    fn strict_double_z4_changes_types() {
        let z4 = cyclic(4);
        let r = z4.generators()[0];
        let inc = sub_inclusion(&z4, &[z4.mul(r, r)]);
        let spec = AmalgamSpec::new(inc.clone(), inc).unwrap();
        let c = |cycles: &[&[usize]]| Perm::from_cycles(8, cycles).unwrap();
        let phi1 = GroupAction::from_generator_images(&z4, 8, &[c(&[&[0, 1, 2, 3], &[4, 5, 6, 7]])]).unwrap();
        let phi2 = GroupAction::from_generator_images(&z4, 8, &[c(&[&[0, 1, 2, 3], &[4, 5], &[6, 7]])]).unwrap();
        let res = stabilize_amalgam_strict(&spec, &phi1, &phi2, &SearchBudget::default()).unwrap();
        assert!(res.verified);
        assert_eq!(res.output_degree, 8);
        assert_eq!(res.trace.route, Route::Reshape);
        let flex = stabilize_amalgam_flexible(&spec, &phi1, &phi2, &SearchBudget::default()).unwrap();
        assert!(flex.verified);
    }

    #[test]
    fn trivial_h_is_free_product() {
        let s3 = symmetric(3);
        let z4 = cyclic(4);
        let one = FiniteGroup::from_mult_table(vec![vec![0]]).unwrap();
        let spec = AmalgamSpec::new(
            Inclusion::new(&one, &s3, vec![0]).unwrap(),
            Inclusion::new(&one, &z4, vec![0]).unwrap(),
        )
        .unwrap();
        let a = coset_action(&s3, &Subgroup::trivial(&s3)).unwrap();
        let b = GroupAction::from_generator_images(&z4, 6, &[Perm::from_cycles(6, &[&[0, 1, 2, 3]]).unwrap()]).unwrap();
        let res = stabilize_amalgam_strict(&spec, &a, &b, &SearchBudget::default()).unwrap();
        assert_eq!(res.output_distance, ratio(0, 1));
        let res = stabilize_amalgam_flexible(&spec, &a, &b, &SearchBudget::default()).unwrap();
        assert_eq!(res.output_distance, ratio(0, 1));
        assert_eq!(res.size_ratio, ratio(1, 1));
    }

    fn klein_hnn() -> HnnSpec {
        let k = klein();
        let i1 = sub_inclusion(&k, &[k.generators()[0]]);
        let i2 = Inclusion::new(i1.sub(), &k, vec![0, k.generators()[1]]).unwrap();
        HnnSpec::new(i1, i2).unwrap()
    }

    #[test]
    fn hnn_klein_regular() {
        let spec = klein_hnn();
        let k = spec.g().clone();
        let reg = coset_action(&k, &Subgroup::trivial(&k)).unwrap();
        let id = Perm::identity(4);
        let res = stabilize_hnn_strict(&spec, &reg, &id, &SearchBudget::default()).unwrap();
        assert!(res.verified);
        let flex = stabilize_hnn_flexible(&spec, &reg, &id, &SearchBudget::default()).unwrap();
        assert!(flex.verified);
    }

    #[test]
    fn hnn_klein_forces_reshape() {
        let spec = klein_hnn();
        let k = spec.g().clone();
        // Orbit of type ⟨b⟩ then fixed points: restrictions differ in type.
        let sub = Subgroup::new(&k, k.closure(&[k.generators()[1]])).unwrap();
        let part = coset_action(&k, &sub).unwrap();
        let phi = part.coproduct(&GroupAction::trivial(&k, 2)).unwrap();
        let tau = Perm::identity(4);
        let res = stabilize_hnn_strict(&spec, &phi, &tau, &SearchBudget::default()).unwrap();
        assert!(res.verified);
        assert_eq!(res.trace.route, Route::Reshape);
        let flex = stabilize_hnn_flexible(&spec, &phi, &tau, &SearchBudget::default()).unwrap();
        assert!(flex.verified);
    }

    #[test]
    fn hnn_double_example() {
        let z2 = cyclic(2);
        let inc = Inclusion::identity(&z2);
        let spec = HnnSpec::new(inc.clone(), inc).unwrap();
        let phi = GroupAction::from_generator_images(&z2, 4, &[Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()]).unwrap();
        let tau = Perm::from_cycles(4, &[&[1, 2]]).unwrap();
        let res = stabilize_hnn_double(&spec, &phi, &tau).unwrap();
        assert!(res.verified);
        assert!(res.output_distance <= res.input_defect * 2);
        let commuting = Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
        let res = stabilize_hnn_double(&spec, &phi, &commuting).unwrap();
        assert_eq!(res.output_distance, ratio(0, 1));
    }

    #[test]
    fn verify_reports_witness() {
        let spec = s3_over_z3();
        let s3 = spec.i1.amb().clone();
        let reg = coset_action(&s3, &Subgroup::trivial(&s3)).unwrap();
        let t = Perm::from_cycles(6, &[&[0, 1]]).unwrap();
        let v = verify_amalgam(&spec, &reg, &reg.conjugate_by(&t).unwrap());
        assert!(!v.ok);
        assert!(v.witness.is_some());
    }
}
