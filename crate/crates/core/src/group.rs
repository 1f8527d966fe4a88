//! Finite groups as multiplication tables, their subgroup classes, actions on
//! finite sets and the Burnside semiring of isomorphism types of finite
//! G-sets.
//!
//! Element indices are positions in the multiplication table. Groups built
//! from permutation generators list their elements in breadth-first order
//! over words in the generators, identity first.

pub mod named;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::Rational64;
use thiserror::Error;

use crate::perm::{coproduct_all, hamming, subset_positions, Perm, PermError};

/// Default bound on group orders accepted by the enumeration routines.
pub const DEFAULT_ORDER_CAP: usize = 48;

/// Current group-order cap: `STABILIS_CAP` if set to a positive integer,
/// [`DEFAULT_ORDER_CAP`] otherwise.
pub fn order_cap() -> usize {
    std::env::var("STABILIS_CAP")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&c| c > 0)
        .unwrap_or(DEFAULT_ORDER_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order {order} exceeds the cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a group action: {0}")]
    InvalidAction(String),
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("coefficient of type {0} is negative")]
    NegativeCoefficient(usize),
    #[error("vector has {got} coordinates, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// One conjugacy class of subgroups, i.e. one transitive type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupClass {
    /// Lexicographically smallest member (sorted element indices).
    pub rep: Vec<usize>,
    /// All conjugates, sorted.
    pub members: Vec<Vec<usize>>,
    pub order: usize,
    /// `[G : S]`, the size of the transitive G-set `G/S`.
    pub index: usize,
}

struct GroupInner {
    order: usize,
    mult: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    /// `words[g]` lists generator positions whose left-to-right product is `g`.
    words: Vec<Vec<usize>>,
    element_names: Option<Vec<String>>,
    perms: Option<Vec<Perm>>,
    classes: OnceLock<Vec<SubgroupClass>>,
    class_lookup: OnceLock<HashMap<Vec<usize>, usize>>,
}

/// A finite group given by its multiplication table. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("generators", &self.inner.generators)
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.mult == other.inner.mult
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a Cayley table `table[a][b] = a·b`.
    ///
    /// Associativity is checked when the order is within [`order_cap`]. The
    /// generating set defaults to all non-identity elements.
    pub fn from_mult_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {a} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::InvalidTable(format!("entry {bad} out of range")));
            }
            mult.extend_from_slice(row);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e * n + x] == x && mult[x * n + e] == x))
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mult[a * n + b] == identity && mult[b * n + a] == identity) {
                Some(b) => inverse[a] = b,
                None => return Err(GroupError::InvalidTable(format!("element {a} has no inverse"))),
            }
        }
        if n <= order_cap() {
            for a in 0..n {
                for b in 0..n {
                    let ab = mult[a * n + b];
                    for c in 0..n {
                        if mult[ab * n + c] != mult[a * n + mult[b * n + c]] {
                            return Err(GroupError::InvalidTable(format!(
                                "not associative at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        let generators: Vec<usize> = (0..n).filter(|&g| g != identity).collect();
        Self::assemble(mult, identity, inverse, generators, None, None)
    }

    /// Closure of a list of permutations of `degree` points.
    ///
    /// Elements are discovered breadth-first by right multiplication with the
    /// generators, so element 0 is the identity and generator images appear in
    /// order of first discovery.
    pub fn from_perm_generators(degree: usize, gens: &[Perm]) -> Result<Self, GroupError> {
        if let Some(bad) = gens.iter().find(|p| p.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, bad.degree()).into());
        }
        let cap = order_cap();
        let mut elements = vec![Perm::identity(degree)];
        let mut index: HashMap<Perm, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = &elements[x] * g;
                if !index.contains_key(&y) {
                    if elements.len() == cap {
                        return Err(GroupError::CapExceeded {
                            order: cap + 1,
                            cap,
                        });
                    }
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let n = elements.len();
        let mut mult = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                mult.push(index[&(a * b)]);
            }
        }
        let inverse = elements.iter().map(|p| index[&p.inverse()]).collect();
        let generators = gens.iter().map(|p| index[p]).collect();
        Self::assemble(mult, 0, inverse, generators, None, Some(elements))
    }

    fn assemble(
        mult: Vec<usize>,
        identity: usize,
        inverse: Vec<usize>,
        generators: Vec<usize>,
        element_names: Option<Vec<String>>,
        perms: Option<Vec<Perm>>,
    ) -> Result<Self, GroupError> {
        let n = inverse.len();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[identity] = Some(Vec::new());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in generators.iter().enumerate() {
                let y = mult[x * n + g];
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(gi);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        if words.iter().any(Option::is_none) {
            return Err(GroupError::InvalidTable("generators do not generate the group".into()));
        }
        Ok(FiniteGroup {
            inner: Arc::new(GroupInner {
                order: n,
                mult,
                identity,
                inverse,
                generators,
                words: words.into_iter().map(Option::unwrap).collect(),
                element_names,
                perms,
                classes: OnceLock::new(),
                class_lookup: OnceLock::new(),
            }),
        })
    }

    /// Same group with a different generating set.
    pub fn with_generators(&self, generators: Vec<usize>) -> Result<Self, GroupError> {
        if let Some(&g) = generators.iter().find(|&&g| g >= self.order()) {
            return Err(GroupError::InvalidTable(format!("generator {g} out of range")));
        }
        Self::assemble(
            self.inner.mult.clone(),
            self.inner.identity,
            self.inner.inverse.clone(),
            generators,
            self.inner.element_names.clone(),
            self.inner.perms.clone(),
        )
    }

    /// Attaches display labels to the elements.
    pub fn with_names(&self, names: Vec<String>) -> Result<Self, GroupError> {
        if names.len() != self.order() {
            return Err(GroupError::LengthMismatch {
                got: names.len(),
                expected: self.order(),
            });
        }
        Self::assemble(
            self.inner.mult.clone(),
            self.inner.identity,
            self.inner.inverse.clone(),
            self.inner.generators.clone(),
            Some(names),
            self.inner.perms.clone(),
        )
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inner.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.inner.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.inner.mult[a * self.inner.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inner.inverse[a]
    }

    /// `g·a·g⁻¹`.
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn generators(&self) -> &[usize] {
        &self.inner.generators
    }

    /// Word in generator positions evaluating to `g`.
    pub fn word(&self, g: usize) -> &[usize] {
        &self.inner.words[g]
    }

    pub fn element_name(&self, g: usize) -> String {
        match &self.inner.element_names {
            Some(names) => names[g].clone(),
            None => format!("g{g}"),
        }
    }

    /// Defining permutations, for groups built from permutation generators.
    pub fn perms(&self) -> Option<&[Perm]> {
        self.inner.perms.as_deref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.inner
            .mult
            .chunks(self.order())
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity() {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[self.identity()] = true;
        let mut list = vec![self.identity()];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    /// `g·S·g⁻¹` as a sorted element list.
    pub fn conjugate_set(&self, g: usize, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().map(|&s| self.conj(g, s)).collect();
        out.sort_unstable();
        out
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        (0..self.order()).all(|g| self.conjugate_set(g, set) == set)
    }

    fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut cyclic: Vec<(usize, Vec<usize>)> = Vec::new();
        for g in 0..n {
            let c = self.closure(&[g]);
            if !seen.contains_key(&c) {
                seen.insert(c.clone(), vec![g]);
                cyclic.push((g, c));
            }
        }
        let mut frontier: Vec<Vec<usize>> = cyclic.iter().map(|(_, c)| c.clone()).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                let gens = seen[s].clone();
                for (g, c) in &cyclic {
                    if is_subset(c, s) {
                        continue;
                    }
                    let mut jg = gens.clone();
                    jg.push(*g);
                    let j = self.closure(&jg);
                    if !seen.contains_key(&j) {
                        seen.insert(j.clone(), jg);
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Vec<usize>> = seen.into_keys().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    /// All subgroups grouped into conjugacy classes, ordered by
    /// `(order, smallest member)`.
    pub fn subgroup_classes(&self) -> Result<&[SubgroupClass], GroupError> {
        let cap = order_cap();
        if self.order() > cap {
            return Err(GroupError::CapExceeded {
                order: self.order(),
                cap,
            });
        }
        Ok(self.inner.classes.get_or_init(|| {
            let subgroups = self.all_subgroups();
            let mut assigned: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut classes = Vec::new();
            for s in &subgroups {
                if assigned.contains_key(s) {
                    continue;
                }
                let mut members: Vec<Vec<usize>> =
                    (0..self.order()).map(|g| self.conjugate_set(g, s)).collect();
                members.sort();
                members.dedup();
                for m in &members {
                    assigned.insert(m.clone(), classes.len());
                }
                classes.push(SubgroupClass {
                    rep: s.clone(),
                    order: s.len(),
                    index: self.order() / s.len(),
                    members,
                });
            }
            classes
        }))
    }

    /// Number of transitive types, the rank of the Burnside ring.
    pub fn type_count(&self) -> Result<usize, GroupError> {
        Ok(self.subgroup_classes()?.len())
    }

    /// Class index of a subgroup given by its sorted elements.
    pub fn class_of(&self, elements: &[usize]) -> Result<usize, GroupError> {
        let classes = self.subgroup_classes()?;
        let lookup = self.inner.class_lookup.get_or_init(|| {
            let mut map = HashMap::new();
            for (i, c) in classes.iter().enumerate() {
                for m in &c.members {
                    map.insert(m.clone(), i);
                }
            }
            map
        });
        lookup
            .get(elements)
            .copied()
            .ok_or_else(|| GroupError::NotSubgroup(format!("{elements:?}")))
    }

    /// Index of the trivial type `[G/G]`, always the last class.
    pub fn trivial_type(&self) -> Result<usize, GroupError> {
        Ok(self.type_count()? - 1)
    }

    /// Index of the free type `[G/1]`, always the first class.
    pub fn free_type(&self) -> usize {
        0
    }

    pub fn same(&self, other: &FiniteGroup) -> bool {
        self == other
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

/// A subgroup of a finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &FiniteGroup, mut elements: Vec<usize>) -> Result<Self, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        let n = parent.order();
        if elements.iter().any(|&x| x >= n) {
            return Err(GroupError::NotSubgroup("element out of range".into()));
        }
        if elements.binary_search(&parent.identity()).is_err() {
            return Err(GroupError::NotSubgroup("missing identity".into()));
        }
        for &a in &elements {
            if elements.binary_search(&parent.inv(a)).is_err() {
                return Err(GroupError::NotSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &elements {
                if elements.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(GroupError::NotSubgroup(format!("{a}·{b} missing")));
                }
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            elements,
        })
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            elements: (0..parent.order()).collect(),
        }
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            elements: vec![parent.identity()],
        }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }
}

/// A homomorphism from a finite group into the symmetric group of
/// `{0, …, degree−1}`, stored on every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: FiniteGroup,
    degree: usize,
    images: Vec<Perm>,
}

impl GroupAction {
    /// Checks `images[e] = id` and `images[gh] = images[g]∘images[h]`.
    pub fn new(group: &FiniteGroup, images: Vec<Perm>) -> Result<Self, GroupError> {
        if images.len() != group.order() {
            return Err(GroupError::LengthMismatch {
                got: images.len(),
                expected: group.order(),
            });
        }
        let degree = images[0].degree();
        if let Some(bad) = images.iter().find(|p| p.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, bad.degree()).into());
        }
        if !images[group.identity()].is_identity() {
            return Err(GroupError::InvalidAction("identity acts nontrivially".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                let ab = group.mul(a, b);
                let ok = (0..degree).all(|x| images[ab].apply(x) == images[a].apply(images[b].apply(x)));
                if !ok {
                    return Err(GroupError::InvalidAction(format!(
                        "image of {}·{} is not the product of images",
                        group.element_name(a),
                        group.element_name(b)
                    )));
                }
            }
        }
        Ok(GroupAction {
            group: group.clone(),
            degree,
            images,
        })
    }

    /// Extends generator images to all elements along the group's words and
    /// checks the result.
    pub fn from_generator_images(
        group: &FiniteGroup,
        degree: usize,
        gen_images: &[Perm],
    ) -> Result<Self, GroupError> {
        let images = extend_by_words(group, degree, gen_images)?;
        Self::new(group, images)
    }

    /// Every element acts as the identity.
    pub fn trivial(group: &FiniteGroup, degree: usize) -> Self {
        GroupAction {
            group: group.clone(),
            degree,
            images: vec![Perm::identity(degree); group.order()],
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn image(&self, g: usize) -> &Perm {
        &self.images[g]
    }

    /// Orbits, each sorted, in increasing order of their smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        let movers: Vec<&Perm> = self.group.generators().iter().map(|&g| &self.images[g]).collect();
        for start in 0..self.degree {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for p in &movers {
                    let y = p.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order())
            .filter(|&g| self.images[g].apply(x) == x)
            .collect()
    }

    /// Type index of the orbit through `x`.
    pub fn orbit_type(&self, x: usize) -> Result<usize, GroupError> {
        self.group.class_of(&self.stabilizer(x))
    }

    /// Orbits paired with their type index.
    pub fn typed_orbits(&self) -> Result<Vec<(usize, Vec<usize>)>, GroupError> {
        self.orbits()
            .into_iter()
            .map(|o| Ok((self.orbit_type(o[0])?, o)))
            .collect()
    }

    /// Restriction to an invariant subset; points are renumbered by position.
    pub fn restrict_invariant(&self, subset: &[usize]) -> Result<GroupAction, GroupError> {
        let pos = subset_positions(subset, self.degree)?;
        let mut images = Vec::with_capacity(self.group.order());
        for p in &self.images {
            let mut img = Vec::with_capacity(subset.len());
            for &y in subset {
                let t = pos[p.apply(y)];
                if t == usize::MAX {
                    return Err(GroupError::InvalidAction(format!("subset not invariant at {y}")));
                }
                img.push(t);
            }
            images.push(Perm::from_images(img)?);
        }
        Ok(GroupAction {
            group: self.group.clone(),
            degree: subset.len(),
            images,
        })
    }

    /// `a ⊔ b` on `a.degree + b.degree` points.
    pub fn coproduct(&self, other: &GroupAction) -> Result<GroupAction, GroupError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch);
        }
        Ok(GroupAction {
            group: self.group.clone(),
            degree: self.degree + other.degree,
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(p, q)| p.coproduct(q))
                .collect(),
        })
    }

    /// Builds an action on `degree` points from actions on disjoint blocks;
    /// `blocks[i].0` lists the points (sorted) carrying `blocks[i].1`.
    /// Uncovered points are fixed.
    pub fn assemble(
        group: &FiniteGroup,
        degree: usize,
        blocks: &[(Vec<usize>, GroupAction)],
    ) -> Result<GroupAction, GroupError> {
        let mut tables: Vec<Vec<usize>> = vec![(0..degree).collect(); group.order()];
        let mut used = vec![false; degree];
        for (points, action) in blocks {
            if action.group != *group {
                return Err(GroupError::GroupMismatch);
            }
            if points.len() != action.degree {
                return Err(PermError::DegreeMismatch(points.len(), action.degree).into());
            }
            for &p in points {
                if p >= degree || used[p] {
                    return Err(PermError::InvalidSubset(format!("block point {p}")).into());
                }
                used[p] = true;
            }
            for (g, table) in tables.iter_mut().enumerate() {
                for (i, &p) in points.iter().enumerate() {
                    table[p] = points[action.images[g].apply(i)];
                }
            }
        }
        let images = tables
            .into_iter()
            .map(Perm::from_images)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupAction {
            group: group.clone(),
            degree,
            images,
        })
    }

    /// `g ↦ t·a(g)·t⁻¹`.
    pub fn conjugate_by(&self, t: &Perm) -> Result<GroupAction, GroupError> {
        if t.degree() != self.degree {
            return Err(PermError::DegreeMismatch(self.degree, t.degree()).into());
        }
        Ok(GroupAction {
            group: self.group.clone(),
            degree: self.degree,
            images: self.images.iter().map(|p| p.conjugate_by(t)).collect(),
        })
    }

    /// Extends by fixed points to `degree ≥ self.degree`.
    pub fn pad(&self, degree: usize) -> GroupAction {
        GroupAction {
            group: self.group.clone(),
            degree: degree.max(self.degree),
            images: self.images.iter().map(|p| p.pad(degree)).collect(),
        }
    }
}

/// `max_g hamming(a(g), b(g))` over all group elements.
pub fn action_distance(a: &GroupAction, b: &GroupAction) -> Result<Rational64, GroupError> {
    if a.group != b.group {
        return Err(GroupError::GroupMismatch);
    }
    images_distance(a.images(), b.images())
}

/// `max_i hamming(a[i], b[i])`.
pub fn images_distance(a: &[Perm], b: &[Perm]) -> Result<Rational64, GroupError> {
    let mut worst = Rational64::from_integer(0);
    for (p, q) in a.iter().zip(b) {
        worst = worst.max(hamming(p, q)?);
    }
    Ok(worst)
}

/// Images of all elements obtained by evaluating each element's word in the
/// given generator images.
pub fn extend_by_words(
    group: &FiniteGroup,
    degree: usize,
    gen_images: &[Perm],
) -> Result<Vec<Perm>, GroupError> {
    if gen_images.len() != group.generators().len() {
        return Err(GroupError::LengthMismatch {
            got: gen_images.len(),
            expected: group.generators().len(),
        });
    }
    if let Some(bad) = gen_images.iter().find(|p| p.degree() != degree) {
        return Err(PermError::DegreeMismatch(degree, bad.degree()).into());
    }
    Ok((0..group.order())
        .map(|g| {
            group
                .word(g)
                .iter()
                .fold(Perm::identity(degree), |acc, &i| &acc * &gen_images[i])
        })
        .collect())
}

/// Left multiplication on the left cosets `G/S`, cosets ordered by their
/// smallest element.
pub fn coset_action(group: &FiniteGroup, sub: &Subgroup) -> Result<GroupAction, GroupError> {
    if sub.parent() != group {
        return Err(GroupError::GroupMismatch);
    }
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for g in 0..n {
        if coset_of[g] != usize::MAX {
            continue;
        }
        for &s in sub.elements() {
            coset_of[group.mul(g, s)] = reps.len();
        }
        reps.push(g);
    }
    let images = (0..n)
        .map(|h| Perm::from_images(reps.iter().map(|&r| coset_of[group.mul(h, r)]).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GroupAction {
        group: group.clone(),
        degree: reps.len(),
        images,
    })
}

/// Coset action of the representative of a transitive type.
pub fn type_action(group: &FiniteGroup, type_index: usize) -> Result<GroupAction, GroupError> {
    let rep = group.subgroup_classes()?[type_index].rep.clone();
    coset_action(group, &Subgroup::new(group, rep)?)
}

/// An element of the Burnside ring `Λ(G)`: integer coefficients over the
/// transitive types in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurnsideVector {
    group: FiniteGroup,
    coeffs: Vec<i64>,
}

impl BurnsideVector {
    pub fn new(group: &FiniteGroup, coeffs: Vec<i64>) -> Result<Self, GroupError> {
        let expected = group.type_count()?;
        if coeffs.len() != expected {
            return Err(GroupError::LengthMismatch {
                got: coeffs.len(),
                expected,
            });
        }
        Ok(BurnsideVector {
            group: group.clone(),
            coeffs,
        })
    }

    pub fn zero(group: &FiniteGroup) -> Result<Self, GroupError> {
        Self::new(group, vec![0; group.type_count()?])
    }

    /// `k·[G/S_τ]`.
    pub fn basis(group: &FiniteGroup, type_index: usize, k: i64) -> Result<Self, GroupError> {
        let mut v = Self::zero(group)?;
        if type_index >= v.coeffs.len() {
            return Err(GroupError::LengthMismatch {
                got: type_index,
                expected: v.coeffs.len(),
            });
        }
        v.coeffs[type_index] = k;
        Ok(v)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<i64> {
        self.coeffs
    }

    pub fn is_nonneg(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// `Σ |λ_τ|·[G:S_τ]`, the size of the underlying set for `Λ⁺` elements.
    pub fn norm(&self) -> i64 {
        let classes = self.group.subgroup_classes().expect("types computed at construction");
        self.coeffs
            .iter()
            .zip(classes)
            .map(|(c, cl)| c.abs() * cl.index as i64)
            .sum()
    }

    fn zip_with(
        &self,
        other: &BurnsideVector,
        f: impl Fn(i64, i64) -> i64,
    ) -> Result<BurnsideVector, GroupError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch);
        }
        Ok(BurnsideVector {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &BurnsideVector) -> Result<BurnsideVector, GroupError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &BurnsideVector) -> Result<BurnsideVector, GroupError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn min_vec(&self, other: &BurnsideVector) -> Result<BurnsideVector, GroupError> {
        self.zip_with(other, i64::min)
    }

    pub fn max_vec(&self, other: &BurnsideVector) -> Result<BurnsideVector, GroupError> {
        self.zip_with(other, i64::max)
    }

    pub fn scale(&self, k: i64) -> BurnsideVector {
        BurnsideVector {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Coordinatewise `≤`.
    pub fn leq(&self, other: &BurnsideVector) -> Result<bool, GroupError> {
        if self.group != other.group {
            return Err(GroupError::GroupMismatch);
        }
        Ok(self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b))
    }
}

impl fmt::Display for BurnsideVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| format!("{c}[τ{i}]"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Burnside type of an action: one unit per orbit, at its stabilizer's class.
pub fn classify(action: &GroupAction) -> Result<BurnsideVector, GroupError> {
    let mut v = BurnsideVector::zero(action.group())?;
    for (t, _) in action.typed_orbits()? {
        v.coeffs[t] += 1;
    }
    Ok(v)
}

/// Coproduct of coset actions, types in canonical order, each repeated by its
/// coefficient.
pub fn realize(v: &BurnsideVector) -> Result<GroupAction, GroupError> {
    if let Some(i) = v.coeffs.iter().position(|&c| c < 0) {
        return Err(GroupError::NegativeCoefficient(i));
    }
    let group = v.group();
    let mut parts: Vec<GroupAction> = Vec::new();
    for (t, &c) in v.coeffs.iter().enumerate() {
        if c > 0 {
            let a = type_action(group, t)?;
            parts.extend(std::iter::repeat(a).take(c as usize));
        }
    }
    let degree = parts.iter().map(|a| a.degree).sum();
    let images = (0..group.order())
        .map(|g| coproduct_all(parts.iter().map(|a| &a.images[g])))
        .collect();
    Ok(GroupAction {
        group: group.clone(),
        degree,
        images,
    })
}

/// Greedy choice of whole orbits whose types add up to `target ≤ classify(a)`:
/// for each type, the orbits with the smallest minimal points. Returns the
/// chosen points, sorted.
pub fn select_orbits(action: &GroupAction, target: &BurnsideVector) -> Result<Vec<usize>, GroupError> {
    let mut remaining = target.coeffs.clone();
    let mut chosen = Vec::new();
    for (t, orbit) in action.typed_orbits()? {
        if remaining[t] > 0 {
            remaining[t] -= 1;
            chosen.extend(orbit);
        }
    }
    if let Some(t) = remaining.iter().position(|&c| c > 0) {
        return Err(GroupError::InvalidAction(format!(
            "action has too few orbits of type {t}"
        )));
    }
    chosen.sort_unstable();
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn closure_orders() {
        let swap = Perm::from_cycles(2, &[&[0, 1]]).unwrap();
        assert_eq!(FiniteGroup::from_perm_generators(2, &[swap]).unwrap().order(), 2);
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::from_perm_generators(3, &[]).unwrap().order(), 1);
        let e = FiniteGroup::from_perm_generators(0, &[]).unwrap();
        assert_eq!(e.order(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let c = Perm::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        let t = Perm::from_cycles(5, &[&[0, 1]]).unwrap();
        assert!(matches!(
            FiniteGroup::from_perm_generators(5, &[c, t]),
            Err(GroupError::CapExceeded { .. })
        ));
    }

    #[test]
    fn subgroup_class_counts() {
        assert_eq!(cyclic(2).type_count().unwrap(), 2);
        assert_eq!(symmetric(3).type_count().unwrap(), 4);
        assert_eq!(cyclic(4).type_count().unwrap(), 3);
        assert_eq!(klein().type_count().unwrap(), 5);
        assert_eq!(dihedral(4).type_count().unwrap(), 8);
        let orders: Vec<usize> = symmetric(3)
            .subgroup_classes()
            .unwrap()
            .iter()
            .map(|c| c.order)
            .collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
    }

    #[test]
    fn mult_table_roundtrip() {
        let g = symmetric(3);
        let h = FiniteGroup::from_mult_table(g.table()).unwrap();
        assert_eq!(g, h);
        assert!(FiniteGroup::from_mult_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn coset_actions() {
        let z4 = cyclic(4);
        let whole = coset_action(&z4, &Subgroup::whole(&z4)).unwrap();
        assert_eq!(whole.degree(), 1);
        let reg = coset_action(&z4, &Subgroup::trivial(&z4)).unwrap();
        assert_eq!(reg.degree(), 4);
        let z2 = Subgroup::new(&z4, z4.closure(&[z4.mul(z4.generators()[0], z4.generators()[0])])).unwrap();
        let a = coset_action(&z4, &z2).unwrap();
        assert_eq!(a.degree(), 2);
        assert_eq!(*a.image(z4.generators()[0]), Perm::from_cycles(2, &[&[0, 1]]).unwrap());
    }

    #[test]
    fn classify_examples() {
        let z2 = cyclic(2);
        let triv = GroupAction::trivial(&z2, 3);
        assert_eq!(classify(&triv).unwrap().coeffs(), &[0, 3]);
        let two_free =
            GroupAction::from_generator_images(&z2, 4, &[Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap()])
                .unwrap();
        assert_eq!(classify(&two_free).unwrap().coeffs(), &[2, 0]);
        let s3 = symmetric(3);
        let reg = coset_action(&s3, &Subgroup::trivial(&s3)).unwrap();
        assert_eq!(classify(&reg).unwrap().coeffs(), &[1, 0, 0, 0]);
    }

    #[test]
    fn realize_examples() {
        let z2 = cyclic(2);
        let zero = BurnsideVector::zero(&z2).unwrap();
        assert_eq!(realize(&zero).unwrap().degree(), 0);
        let v = BurnsideVector::new(&z2, vec![2, 0]).unwrap();
        let a = realize(&v).unwrap();
        assert_eq!(*a.image(1), Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap());
        let s3 = symmetric(3);
        let w = BurnsideVector::new(&s3, vec![0, 0, 1, 1]).unwrap();
        let b = realize(&w).unwrap();
        assert_eq!(b.degree(), 3);
        assert_eq!(classify(&b).unwrap(), w);
        assert!(realize(&BurnsideVector::new(&z2, vec![-1, 0]).unwrap()).is_err());
    }

    #[test]
    fn norms_and_order() {
        let z2 = cyclic(2);
        let free = BurnsideVector::basis(&z2, 0, 1).unwrap();
        assert_eq!(free.norm(), 2);
        let v = BurnsideVector::new(&z2, vec![2, 1]).unwrap();
        assert_eq!(v.norm(), 5);
        assert_eq!(v.min_vec(&v).unwrap(), v);
        assert!(free.leq(&v).unwrap());
        assert!(!v.leq(&free).unwrap());
        assert_eq!(v.sub(&free).unwrap().coeffs(), &[1, 1]);
        assert_eq!(
            free.add(&BurnsideVector::zero(&cyclic(3)).unwrap()),
            Err(GroupError::GroupMismatch)
        );
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let z3 = cyclic(3);
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        assert!(GroupAction::from_generator_images(&z3, 3, &[t]).is_err());
    }

    #[test]
    fn select_orbits_prefers_small_points() {
        let z2 = cyclic(2);
        let a = GroupAction::from_generator_images(&z2, 5, &[Perm::from_cycles(5, &[&[1, 2], &[3, 4]]).unwrap()])
            .unwrap();
        let target = BurnsideVector::new(&z2, vec![1, 1]).unwrap();
        assert_eq!(select_orbits(&a, &target).unwrap(), vec![0, 1, 2]);
    }
}
