//! Finite groups stored extensionally as Cayley tables.
//!
//! Elements are identified by their index `0..n`. Labels are cosmetic and
//! never take part in equality. Every constructor either verifies the group
//! axioms exactly or builds a table that satisfies them by construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest group order accepted by the exhaustive subgroup and
/// decomposition searches.
pub const SEARCH_LIMIT: usize = 256;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group must have at least one element")]
    Empty,
    #[error("cayley table has {len} entries, expected {expected}")]
    BadTableSize { len: usize, expected: usize },
    #[error("cayley entry {value} at ({row}, {col}) is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("{got} labels given for a group of order {order}")]
    LabelCount { got: usize, order: usize },
    #[error("no element acts as a two-sided identity")]
    NoIdentity,
    #[error("{0} is not a permutation of the elements")]
    NotInvertible(Line),
    #[error("associativity fails for ({x}, {y}, {z})")]
    NotAssociative { x: usize, y: usize, z: usize },
    #[error("group of order {order} exceeds the search limit {limit}")]
    SizeGuardExceeded { order: usize, limit: usize },
    #[error("members do not form a subgroup: {0}")]
    NotASubgroup(String),
    #[error("invalid direct-product decomposition: {0}")]
    InvalidDecomposition(String),
}

/// A row or column of a Cayley table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Column(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {i}"),
            Line::Column(j) => write!(f, "column {j}"),
        }
    }
}

struct GroupData {
    order: usize,
    cayley: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
}

/// A validated finite group. Cloning is cheap; the table is shared.
#[derive(Clone)]
pub struct FiniteGroup {
    data: Arc<GroupData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("identity", &self.identity())
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data.cayley == other.data.cayley
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a table known to satisfy the axioms, with the
    /// identity at `identity`.
    pub(crate) fn from_trusted(
        order: usize,
        cayley: Vec<usize>,
        identity: usize,
        labels: Vec<String>,
    ) -> Self {
        debug_assert_eq!(cayley.len(), order * order);
        let mut inverses = vec![usize::MAX; order];
        for (x, inv) in inverses.iter_mut().enumerate() {
            let row = &cayley[x * order..(x + 1) * order];
            *inv = row
                .iter()
                .position(|&v| v == identity)
                .expect("row contains identity");
        }
        FiniteGroup {
            data: Arc::new(GroupData {
                order,
                cayley,
                identity,
                inverses,
                labels,
            }),
        }
    }

    pub fn order(&self) -> usize {
        self.data.order
    }

    pub fn identity(&self) -> usize {
        self.data.identity
    }

    /// `a ∘ b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.data.cayley[a * self.data.order + b]
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.data.inverses[a]
    }

    pub fn row(&self, a: usize) -> &[usize] {
        let n = self.data.order;
        &self.data.cayley[a * n..(a + 1) * n]
    }

    /// Row-major `n·n` table.
    pub fn cayley(&self) -> &[usize] {
        &self.data.cayley
    }

    pub fn label(&self, a: usize) -> &str {
        &self.data.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.data.labels
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.order()
    }

    /// Smallest `k ≥ 1` with `a^k = e`.
    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `a^k` for `k ≥ 0`.
    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|x| (x + 1..n).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, lcm)
    }

    /// Members of the subgroup generated by `generators`, sorted.
    pub fn closure(&self, generators: &[usize]) -> Vec<usize> {
        let mut seen = ElementSet::new(self.order());
        seen.insert(self.identity());
        let mut queue = vec![self.identity()];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &s in generators {
                let y = self.mul(x, s);
                if seen.insert(y) {
                    queue.push(y);
                }
            }
        }
        seen.to_vec()
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = BTreeSet::new();
            for g in 0..n {
                let y = self.mul(self.mul(g, x), self.inverse(g));
                members.insert(y);
            }
            for &m in &members {
                class_of[m] = id;
            }
            classes.push(members.into_iter().collect());
        }
        classes
    }

    /// Greedy generating set: repeatedly adds the smallest element not yet
    /// generated.
    pub fn generators(&self) -> Vec<usize> {
        greedy_generators(self, &self.elements().collect::<Vec<_>>())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn greedy_generators(group: &FiniteGroup, members: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = ElementSet::new(group.order());
    span.insert(group.identity());
    for &m in members {
        if !span.contains(m) {
            gens.push(m);
            span = ElementSet::from_slice(group.order(), &group.closure(&gens));
        }
    }
    gens
}

/// Fixed-capacity bit set over element indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub(crate) fn new(n: usize) -> Self {
        ElementSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub(crate) fn from_slice(n: usize, items: &[usize]) -> Self {
        let mut s = Self::new(n);
        for &i in items {
            s.insert(i);
        }
        s
    }

    pub(crate) fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub(crate) fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1u64 << b) != 0)
                .map(move |b| wi * 64 + b)
        })
    }

    pub(crate) fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Validates a row-major Cayley table. The identity is discovered from the
/// table. Empty `labels` yields default labels `g0, g1, …`.
pub fn validate_group(table: &[usize], labels: &[String]) -> Result<FiniteGroup, GroupError> {
    if table.is_empty() {
        return Err(GroupError::Empty);
    }
    let n = table.len().isqrt();
    validate_square(n, table, labels)
}

/// Like [`validate_group`] but with the order given, as read from a file.
pub fn validate_square(
    n: usize,
    table: &[usize],
    labels: &[String],
) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::Empty);
    }
    if table.len() != n * n {
        return Err(GroupError::BadTableSize {
            len: table.len(),
            expected: n * n,
        });
    }
    if !labels.is_empty() && labels.len() != n {
        return Err(GroupError::LabelCount {
            got: labels.len(),
            order: n,
        });
    }
    if let Some(pos) = table.iter().position(|&v| v >= n) {
        return Err(GroupError::EntryOutOfRange {
            row: pos / n,
            col: pos % n,
            value: table[pos],
            order: n,
        });
    }
    let at = |i: usize, j: usize| table[i * n + j];
    let mut seen = vec![false; n];
    for i in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for j in 0..n {
            if core::mem::replace(&mut seen[at(i, j)], true) {
                return Err(GroupError::NotInvertible(Line::Row(i)));
            }
        }
    }
    for j in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for i in 0..n {
            if core::mem::replace(&mut seen[at(i, j)], true) {
                return Err(GroupError::NotInvertible(Line::Column(j)));
            }
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
        .ok_or(GroupError::NoIdentity)?;

    for x in 0..n {
        for y in 0..n {
            let xy = at(x, y);
            for z in 0..n {
                if at(xy, z) != at(x, at(y, z)) {
                    return Err(GroupError::NotAssociative { x, y, z });
                }
            }
        }
    }
    let labels = if labels.is_empty() {
        (0..n).map(|i| format!("g{i}")).collect()
    } else {
        labels.to_vec()
    };
    Ok(FiniteGroup::from_trusted(
        n,
        table.to_vec(),
        identity,
        labels,
    ))
}

/// Cyclic group `C_n` as addition modulo `n`.
pub fn cyclic_group(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::Empty);
    }
    let cayley = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    let labels = (0..n).map(|i| format!("{i}")).collect();
    Ok(FiniteGroup::from_trusted(n, cayley, 0, labels))
}

/// External direct product on pairs `(g, h)`, indexed `g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (ng, nh) = (g.order(), h.order());
    let n = ng * nh;
    let mut cayley = Vec::with_capacity(n * n);
    for a in 0..n {
        let (a1, a2) = (a / nh, a % nh);
        for b in 0..n {
            let (b1, b2) = (b / nh, b % nh);
            cayley.push(g.mul(a1, b1) * nh + h.mul(a2, b2));
        }
    }
    let labels = (0..n)
        .map(|a| format!("({},{})", g.label(a / nh), h.label(a % nh)))
        .collect();
    FiniteGroup::from_trusted(n, cayley, g.identity() * nh + h.identity(), labels)
}

/// The two embedded copies `G×{e}` and `{e}×H` of a [`direct_product`].
pub fn product_factors(
    product: &FiniteGroup,
    g: &FiniteGroup,
    h: &FiniteGroup,
) -> Result<DirectProductDecomposition, GroupError> {
    let nh = h.order();
    let left = g.elements().map(|a| a * nh + h.identity()).collect();
    let right = h.elements().map(|b| g.identity() * nh + b).collect();
    DirectProductDecomposition::new(
        product,
        vec![
            Subgroup::new(product, left)?,
            Subgroup::new(product, right)?,
        ],
    )
}

/// Rotation group of the cube, as permutations of its eight vertices.
///
/// Vertex `v` has coordinates `(v & 1, (v >> 1) & 1, (v >> 2) & 1)`. The group
/// is the closure of the quarter turns about the z and x axes. Elements are
/// sorted lexicographically by their vertex permutation, so the identity is
/// element 0; `(p∘q)(v) = p(q(v))`.
pub fn cube_rotation_group() -> FiniteGroup {
    let vertex = |x: u8, y: u8, z: u8| (x | (y << 1) | (z << 2)) as usize;
    let coords = |v: usize| ((v & 1) as u8, ((v >> 1) & 1) as u8, ((v >> 2) & 1) as u8);
    let turn_z: Vec<u8> = (0..8)
        .map(|v| {
            let (x, y, z) = coords(v);
            vertex(1 - y, x, z) as u8
        })
        .collect();
    let turn_x: Vec<u8> = (0..8)
        .map(|v| {
            let (x, y, z) = coords(v);
            vertex(x, 1 - z, y) as u8
        })
        .collect();
    let compose = |p: &[u8], q: &[u8]| -> Vec<u8> { q.iter().map(|&v| p[v as usize]).collect() };

    let identity: Vec<u8> = (0..8).collect();
    let mut found = BTreeSet::new();
    found.insert(identity.clone());
    let mut queue = vec![identity];
    while let Some(p) = queue.pop() {
        for gen in [&turn_z, &turn_x] {
            let q = compose(&p, gen);
            if found.insert(q.clone()) {
                queue.push(q);
            }
        }
    }
    let perms: Vec<Vec<u8>> = found.into_iter().collect();
    let index: BTreeMap<&[u8], usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let n = perms.len();
    let mut cayley = Vec::with_capacity(n * n);
    for p in &perms {
        for q in &perms {
            cayley.push(index[compose(p, q).as_slice()]);
        }
    }
    let labels = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_trusted(n, cayley, 0, labels)
}

fn cycle_notation(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut v = start;
        let mut first = true;
        while !seen[v] {
            seen[v] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&format!("{v}"));
            first = false;
            v = p[v] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A subgroup given by its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
}

impl Subgroup {
    /// Checks identity, closure and inverses.
    pub fn new(parent: &FiniteGroup, mut members: Vec<usize>) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        if let Some(&m) = members.iter().find(|&&m| m >= parent.order()) {
            return Err(GroupError::NotASubgroup(format!(
                "element {m} out of range"
            )));
        }
        let set = ElementSet::from_slice(parent.order(), &members);
        if !set.contains(parent.identity()) {
            return Err(GroupError::NotASubgroup("identity missing".into()));
        }
        for &a in &members {
            if !set.contains(parent.inverse(a)) {
                return Err(GroupError::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if !set.contains(parent.mul(a, b)) {
                    return Err(GroupError::NotASubgroup(format!("{a}∘{b} not a member")));
                }
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            members,
        })
    }

    pub fn generated(parent: &FiniteGroup, generators: &[usize]) -> Self {
        Subgroup {
            parent: parent.clone(),
            members: parent.closure(generators),
        }
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            members: parent.elements().collect(),
        }
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            members: vec![parent.identity()],
        }
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Position of `g` in the member list.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }

    pub fn is_normal(&self) -> bool {
        let p = &self.parent;
        p.elements().all(|g| {
            self.members
                .iter()
                .all(|&h| self.contains(p.mul(p.mul(g, h), p.inverse(g))))
        })
    }

    /// Greedy generating set drawn from the members in increasing order.
    pub fn generators(&self) -> Vec<usize> {
        greedy_generators(&self.parent, &self.members)
    }

    /// The subgroup as a standalone group; element `i` is `members()[i]`.
    pub fn as_group(&self) -> FiniteGroup {
        let k = self.order();
        let mut cayley = Vec::with_capacity(k * k);
        for &a in &self.members {
            for &b in &self.members {
                cayley.push(self.position(self.parent.mul(a, b)).expect("closed"));
            }
        }
        let identity = self
            .position(self.parent.identity())
            .expect("contains identity");
        let labels = self
            .members
            .iter()
            .map(|&m| String::from(self.parent.label(m)))
            .collect();
        FiniteGroup::from_trusted(k, cayley, identity, labels)
    }
}

fn check_search_limit(g: &FiniteGroup) -> Result<(), GroupError> {
    if g.order() > SEARCH_LIMIT {
        return Err(GroupError::SizeGuardExceeded {
            order: g.order(),
            limit: SEARCH_LIMIT,
        });
    }
    Ok(())
}

/// Every subgroup, sorted by order and then by member list.
///
/// Each subgroup is reached from a smaller one by adjoining one element, so
/// closing every known subgroup with every outside element is complete.
pub fn all_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>, GroupError> {
    check_search_limit(g)?;
    let n = g.order();
    let trivial = ElementSet::from_slice(n, &[g.identity()]);
    let mut found: BTreeMap<ElementSet, Vec<usize>> = BTreeMap::new();
    found.insert(trivial.clone(), Vec::new());
    let mut queue = vec![(trivial, Vec::new())];
    while let Some((set, gens)) = queue.pop() {
        for x in 0..n {
            if set.contains(x) {
                continue;
            }
            let mut next_gens: Vec<usize> = gens.clone();
            next_gens.push(x);
            let closure = ElementSet::from_slice(n, &g.closure(&next_gens));
            if !found.contains_key(&closure) {
                found.insert(closure.clone(), next_gens.clone());
                queue.push((closure, next_gens));
            }
        }
    }
    let mut subgroups: Vec<Subgroup> = found
        .into_keys()
        .map(|set| Subgroup {
            parent: g.clone(),
            members: set.to_vec(),
        })
        .collect();
    subgroups.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members.cmp(&b.members))
    });
    Ok(subgroups)
}

/// An internal direct product `G = G₁ × … × G_k` of commuting subgroups.
#[derive(Clone, Debug)]
pub struct DirectProductDecomposition {
    parent: FiniteGroup,
    factors: Vec<Subgroup>,
    // element → positions of its components within each factor's member list
    coords: Vec<usize>,
}

impl DirectProductDecomposition {
    /// Verifies trivial pairwise intersections, elementwise commutation, and
    /// that `(g₁,…,g_k) ↦ g₁∘…∘g_k` is a bijective homomorphism onto the
    /// parent.
    pub fn new(parent: &FiniteGroup, factors: Vec<Subgroup>) -> Result<Self, GroupError> {
        let bad = |msg: String| Err(GroupError::InvalidDecomposition(msg));
        if factors.is_empty() {
            return bad("no factors".into());
        }
        for (i, f) in factors.iter().enumerate() {
            if f.parent() != parent {
                return bad(format!("factor {i} belongs to a different group"));
            }
        }
        let k = factors.len();
        for i in 0..k {
            for j in i + 1..k {
                if let Some(&m) = factors[i]
                    .members()
                    .iter()
                    .find(|&&m| m != parent.identity() && factors[j].contains(m))
                {
                    return bad(format!("factors {i} and {j} share element {m}"));
                }
                for &a in factors[i].members() {
                    for &b in factors[j].members() {
                        if parent.mul(a, b) != parent.mul(b, a) {
                            return bad(format!(
                                "element {a} of factor {i} does not commute with {b} of factor {j}"
                            ));
                        }
                    }
                }
            }
        }
        let total: usize = factors.iter().map(Subgroup::order).product();
        if total != parent.order() {
            return bad(format!(
                "factor orders multiply to {total}, group has order {}",
                parent.order()
            ));
        }
        let n = parent.order();
        let mut coords = vec![usize::MAX; n * k];
        let mut tuple = vec![0usize; k];
        loop {
            let g = tuple
                .iter()
                .zip(&factors)
                .fold(parent.identity(), |acc, (&p, f)| {
                    parent.mul(acc, f.members()[p])
                });
            if coords[g * k] != usize::MAX {
                return bad(format!("element {g} has two factorizations"));
            }
            coords[g * k..(g + 1) * k].copy_from_slice(&tuple);
            if !advance(&mut tuple, &factors) {
                break;
            }
        }
        let decomposition = DirectProductDecomposition {
            parent: parent.clone(),
            factors,
            coords,
        };
        for a in 0..n {
            for b in 0..n {
                let ab = parent.mul(a, b);
                for i in 0..k {
                    let f = &decomposition.factors[i];
                    let x = f.members()[decomposition.coordinates(a)[i]];
                    let y = f.members()[decomposition.coordinates(b)[i]];
                    if f.members()[decomposition.coordinates(ab)[i]] != parent.mul(x, y) {
                        return bad(format!("factor map is not a homomorphism at ({a}, {b})"));
                    }
                }
            }
        }
        Ok(decomposition)
    }

    /// The one-factor decomposition `G = G`.
    pub fn trivial(parent: &FiniteGroup) -> Self {
        Self::new(parent, vec![Subgroup::whole(parent)]).expect("whole group is a factor")
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn factors(&self) -> &[Subgroup] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    /// Positions of `g`'s components inside each factor's member list.
    pub fn coordinates(&self, g: usize) -> &[usize] {
        let k = self.arity();
        &self.coords[g * k..(g + 1) * k]
    }

    /// `g₁∘…∘g_k` for the given member positions.
    pub fn compose(&self, positions: &[usize]) -> usize {
        positions
            .iter()
            .zip(&self.factors)
            .fold(self.parent.identity(), |acc, (&p, f)| {
                self.parent.mul(acc, f.members()[p])
            })
    }

    /// Index of the factor containing `g`, if `g` lies in exactly one
    /// factor and is not the identity.
    pub fn factor_of(&self, g: usize) -> Option<usize> {
        if g == self.parent.identity() {
            return None;
        }
        self.factors.iter().position(|f| f.contains(g))
    }

    /// Subgroup generated by every factor except `i`.
    pub fn complement(&self, i: usize) -> Subgroup {
        let gens: Vec<usize> = self
            .factors
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, f)| f.generators())
            .collect();
        Subgroup::generated(&self.parent, &gens)
    }

    /// Generators of each factor, in factor order.
    pub fn factor_generators(&self) -> Vec<Vec<usize>> {
        self.factors.iter().map(Subgroup::generators).collect()
    }

    pub fn factor_orders(&self) -> Vec<usize> {
        self.factors.iter().map(Subgroup::order).collect()
    }
}

fn advance(tuple: &mut [usize], factors: &[Subgroup]) -> bool {
    for i in (0..tuple.len()).rev() {
        tuple[i] += 1;
        if tuple[i] < factors[i].order() {
            return true;
        }
        tuple[i] = 0;
    }
    false
}

/// Every decomposition of `g` into between 2 and `max_factors` nontrivial
/// factors, deduplicated up to factor order. Factors within a decomposition
/// are sorted by member list; decompositions by arity, then factor lists.
/// An empty result means `g` is directly indecomposable.
pub fn find_direct_decompositions(
    g: &FiniteGroup,
    max_factors: usize,
) -> Result<Vec<DirectProductDecomposition>, GroupError> {
    check_search_limit(g)?;
    let n = g.order();
    let mut candidates: Vec<Subgroup> = all_subgroups(g)?
        .into_iter()
        .filter(|s| s.order() > 1 && s.order() < n && s.is_normal())
        .collect();
    candidates.sort_by(|a, b| a.members.cmp(&b.members));

    let mut found = Vec::new();
    let mut chosen = Vec::new();
    let mut span = ElementSet::from_slice(n, &[g.identity()]);
    search_factors(
        g,
        &candidates,
        0,
        max_factors,
        &mut chosen,
        &mut span,
        &mut found,
    );

    let mut decompositions = Vec::with_capacity(found.len());
    for idx in found {
        let factors = idx.iter().map(|&i| candidates[i].clone()).collect();
        decompositions.push(DirectProductDecomposition::new(g, factors)?);
    }
    decompositions.sort_by(|a, b| {
        a.arity().cmp(&b.arity()).then_with(|| {
            let ka = a.factors.iter().map(|f| &f.members);
            let kb = b.factors.iter().map(|f| &f.members);
            ka.cmp(kb)
        })
    });
    Ok(decompositions)
}

fn search_factors(
    g: &FiniteGroup,
    candidates: &[Subgroup],
    start: usize,
    max_factors: usize,
    chosen: &mut Vec<usize>,
    span: &mut ElementSet,
    found: &mut Vec<Vec<usize>>,
) {
    let n = g.order();
    let size = span.len();
    if size == n {
        if chosen.len() >= 2 {
            found.push(chosen.clone());
        }
        return;
    }
    if chosen.len() == max_factors {
        return;
    }
    for c in start..candidates.len() {
        let cand = &candidates[c];
        if !n.is_multiple_of(size * cand.order()) {
            continue;
        }
        if cand
            .members()
            .iter()
            .any(|&m| m != g.identity() && span.contains(m))
        {
            continue;
        }
        let commutes = chosen.iter().all(|&j| {
            candidates[j]
                .members()
                .iter()
                .all(|&a| cand.members().iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
        });
        if !commutes {
            continue;
        }
        let mut next = ElementSet::new(n);
        for p in span.iter() {
            for &m in cand.members() {
                next.insert(g.mul(p, m));
            }
        }
        let saved = core::mem::replace(span, next);
        chosen.push(c);
        search_factors(g, candidates, c + 1, max_factors, chosen, span, found);
        chosen.pop();
        *span = saved;
    }
}
