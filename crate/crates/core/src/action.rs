//! Group actions on finite sets and the disentangled-action test.

use alloc::vec;
use alloc::vec::Vec;

use crate::group::{direct_product, product_factors, DirectProductDecomposition, FiniteGroup};

/// Largest set accepted by [`search_product_structure`].
pub const POINT_LIMIT: usize = 4096;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("action table has {len} entries, expected {expected}")]
    BadTableSize { len: usize, expected: usize },
    #[error("image {value} of point {point} under element {element} is outside the set")]
    PointOutOfRange {
        element: usize,
        point: usize,
        value: usize,
    },
    #[error("identity moves point {0}")]
    IdentityAxiomViolated(usize),
    #[error("({g}∘{h})·{x} differs from {g}·({h}·{x})")]
    CompatibilityViolated { g: usize, h: usize, x: usize },
    #[error("decomposition has {decomposition} factors but the product structure has {structure}")]
    ArityMismatch {
        decomposition: usize,
        structure: usize,
    },
    #[error("decomposition is for a different group than the action")]
    GroupMismatch,
    #[error("set of {size} points exceeds the search limit {limit}")]
    SizeGuardExceeded { size: usize, limit: usize },
    #[error("invalid product structure: {0}")]
    InvalidStructure(&'static str),
}

/// A validated action `G × X → X`, stored as an `n × m` table.
#[derive(Clone, Debug)]
pub struct FiniteAction {
    group: FiniteGroup,
    set_size: usize,
    table: Vec<usize>,
}

impl FiniteAction {
    pub(crate) fn from_trusted(group: FiniteGroup, set_size: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), group.order() * set_size);
        FiniteAction {
            group,
            set_size,
            table,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    /// `g·x`.
    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.table[g * self.set_size + x]
    }

    /// Row-major `n·m` table.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// The identity and compatibility axioms, checked exhaustively.
    pub fn check_axioms(&self) -> Result<(), ActionError> {
        let g = &self.group;
        let m = self.set_size;
        if let Some(x) = (0..m).find(|&x| self.apply(g.identity(), x) != x) {
            return Err(ActionError::IdentityAxiomViolated(x));
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for x in 0..m {
                    if self.apply(ab, x) != self.apply(a, self.apply(b, x)) {
                        return Err(ActionError::CompatibilityViolated { g: a, h: b, x });
                    }
                }
            }
        }
        Ok(())
    }

    /// Points fixed by `g`.
    pub fn fixed_points(&self, g: usize) -> Vec<usize> {
        (0..self.set_size)
            .filter(|&x| self.apply(g, x) == x)
            .collect()
    }

    /// Only the identity fixes any point.
    pub fn is_free(&self) -> bool {
        self.group
            .elements()
            .filter(|&g| g != self.group.identity())
            .all(|g| (0..self.set_size).all(|x| self.apply(g, x) != x))
    }

    pub fn is_transitive(&self) -> bool {
        orbits(self).len() <= 1
    }

    /// The same action viewed as an action of the subgroup generated by
    /// `elements` (restricts only which elements are used).
    fn orbits_under(&self, elements: &[usize]) -> Vec<Vec<usize>> {
        let m = self.set_size;
        let mut orbit_of = vec![usize::MAX; m];
        let mut out = Vec::new();
        for start in 0..m {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            orbit_of[start] = id;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                head += 1;
                for &g in elements {
                    let y = self.apply(g, x);
                    if orbit_of[y] == usize::MAX {
                        orbit_of[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Checks both action axioms for a row-major `n × m` table.
pub fn validate_action(
    group: &FiniteGroup,
    set_size: usize,
    table: &[usize],
) -> Result<FiniteAction, ActionError> {
    let expected = group.order() * set_size;
    if table.len() != expected {
        return Err(ActionError::BadTableSize {
            len: table.len(),
            expected,
        });
    }
    if let Some(pos) = table.iter().position(|&v| v >= set_size) {
        return Err(ActionError::PointOutOfRange {
            element: pos / set_size,
            point: pos % set_size,
            value: table[pos],
        });
    }
    let action = FiniteAction::from_trusted(group.clone(), set_size, table.to_vec());
    action.check_axioms()?;
    Ok(action)
}

/// Every element fixes every point.
pub fn trivial_action(group: &FiniteGroup, set_size: usize) -> FiniteAction {
    let table = group.elements().flat_map(|_| 0..set_size).collect();
    FiniteAction::from_trusted(group.clone(), set_size, table)
}

/// A group acting on itself by left multiplication.
pub fn regular_action(group: &FiniteGroup) -> FiniteAction {
    FiniteAction::from_trusted(group.clone(), group.order(), group.cayley().to_vec())
}

/// Orbits in order of their smallest member, each sorted.
pub fn orbits(action: &FiniteAction) -> Vec<Vec<usize>> {
    let all: Vec<usize> = action.group.elements().collect();
    action.orbits_under(&all)
}

/// Identification of a set `X` with `X₁ × … × X_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductStructure {
    factor_sizes: Vec<usize>,
    // point → coordinates, k per point
    coords: Vec<usize>,
    // lexicographic tuple index → point
    points: Vec<usize>,
}

impl ProductStructure {
    /// The canonical lexicographic coder: point `x` has mixed-radix digits
    /// `(x₁, …, x_k)` with `x_k` varying fastest.
    pub fn lexicographic(factor_sizes: Vec<usize>) -> Self {
        let total: usize = factor_sizes.iter().product();
        let k = factor_sizes.len();
        let mut coords = vec![0; total * k];
        for x in 0..total {
            let mut rest = x;
            for i in (0..k).rev() {
                coords[x * k + i] = rest % factor_sizes[i];
                rest /= factor_sizes[i];
            }
        }
        ProductStructure {
            factor_sizes,
            coords,
            points: (0..total).collect(),
        }
    }

    /// A coder from explicit per-point coordinates; must be a bijection onto
    /// the product of `factor_sizes`.
    pub fn from_coordinates(
        factor_sizes: Vec<usize>,
        coordinates: &[Vec<usize>],
    ) -> Result<Self, ActionError> {
        let total: usize = factor_sizes.iter().product();
        let k = factor_sizes.len();
        if coordinates.len() != total {
            return Err(ActionError::InvalidStructure(
                "point count differs from product size",
            ));
        }
        let mut points = vec![usize::MAX; total];
        let mut coords = Vec::with_capacity(total * k);
        for (x, c) in coordinates.iter().enumerate() {
            if c.len() != k || c.iter().zip(&factor_sizes).any(|(&v, &s)| v >= s) {
                return Err(ActionError::InvalidStructure("coordinate out of range"));
            }
            let idx = c
                .iter()
                .zip(&factor_sizes)
                .fold(0, |acc, (&v, &s)| acc * s + v);
            if points[idx] != usize::MAX {
                return Err(ActionError::InvalidStructure("coder is not injective"));
            }
            points[idx] = x;
            coords.extend_from_slice(c);
        }
        Ok(ProductStructure {
            factor_sizes,
            coords,
            points,
        })
    }

    pub fn factor_sizes(&self) -> &[usize] {
        &self.factor_sizes
    }

    pub fn arity(&self) -> usize {
        self.factor_sizes.len()
    }

    pub fn set_size(&self) -> usize {
        self.points.len()
    }

    pub fn coordinates(&self, x: usize) -> &[usize] {
        let k = self.arity();
        &self.coords[x * k..(x + 1) * k]
    }

    /// Inverse of [`Self::coordinates`].
    pub fn point(&self, coordinates: &[usize]) -> usize {
        let idx = coordinates
            .iter()
            .zip(&self.factor_sizes)
            .fold(0, |acc, (&v, &s)| acc * s + v);
        self.points[idx]
    }
}

/// Componentwise action of `G₁ × G₂` on `X₁ × X₂`, with the product group's
/// two-factor decomposition and the lexicographic coder.
pub fn product_action(
    first: &FiniteAction,
    second: &FiniteAction,
) -> (FiniteAction, DirectProductDecomposition, ProductStructure) {
    let (g1, g2) = (&first.group, &second.group);
    let group = direct_product(g1, g2);
    let (m1, m2) = (first.set_size, second.set_size);
    let n2 = g2.order();
    let mut table = Vec::with_capacity(group.order() * m1 * m2);
    for g in group.elements() {
        let (a, b) = (g / n2, g % n2);
        for x in 0..m1 * m2 {
            let (x1, x2) = (x / m2, x % m2);
            table.push(first.apply(a, x1) * m2 + second.apply(b, x2));
        }
    }
    let decomposition = product_factors(&group, g1, g2).expect("embedded factors decompose");
    let action = FiniteAction::from_trusted(group, m1 * m2, table);
    (
        action,
        decomposition,
        ProductStructure::lexicographic(vec![m1, m2]),
    )
}

/// A point where an element of one factor moved a foreign coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActionWitness {
    pub element: usize,
    pub factor: usize,
    pub point: usize,
    pub coordinate: usize,
}

/// Outcome of [`is_disentangled_action`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActionVerdict {
    pub disentangled: bool,
    pub witness: Option<ActionWitness>,
}

/// Whether every element of factor `G_i` changes only coordinate `i` of every
/// point under the coder. A false verdict carries the first violation.
pub fn is_disentangled_action(
    action: &FiniteAction,
    decomposition: &DirectProductDecomposition,
    structure: &ProductStructure,
) -> Result<ActionVerdict, ActionError> {
    if decomposition.parent() != action.group() {
        return Err(ActionError::GroupMismatch);
    }
    if decomposition.arity() != structure.arity() {
        return Err(ActionError::ArityMismatch {
            decomposition: decomposition.arity(),
            structure: structure.arity(),
        });
    }
    if structure.set_size() != action.set_size() {
        return Err(ActionError::InvalidStructure(
            "structure covers a different set",
        ));
    }
    for (i, factor) in decomposition.factors().iter().enumerate() {
        for &g in factor.members() {
            for x in 0..action.set_size() {
                let before = structure.coordinates(x);
                let after = structure.coordinates(action.apply(g, x));
                if let Some(j) = (0..structure.arity()).find(|&j| j != i && before[j] != after[j]) {
                    return Ok(ActionVerdict {
                        disentangled: false,
                        witness: Some(ActionWitness {
                            element: g,
                            factor: i,
                            point: x,
                            coordinate: j,
                        }),
                    });
                }
            }
        }
    }
    Ok(ActionVerdict {
        disentangled: true,
        witness: None,
    })
}

/// Builds a disentangling coder from orbit coordinates: coordinate `i` of `x`
/// is the index of `x`'s orbit under the complement of factor `i`. Returns
/// `None` when that map is not a bijection. Complete for free and transitive
/// actions.
pub fn search_product_structure(
    action: &FiniteAction,
    decomposition: &DirectProductDecomposition,
) -> Result<Option<ProductStructure>, ActionError> {
    if decomposition.parent() != action.group() {
        return Err(ActionError::GroupMismatch);
    }
    let m = action.set_size();
    if m > POINT_LIMIT {
        return Err(ActionError::SizeGuardExceeded {
            size: m,
            limit: POINT_LIMIT,
        });
    }
    let k = decomposition.arity();
    let mut sizes = Vec::with_capacity(k);
    let mut coordinates = vec![vec![0usize; k]; m];
    #[allow(clippy::needless_range_loop)]
    for i in 0..k {
        let complement = decomposition.complement(i);
        let parts = action.orbits_under(complement.members());
        for (id, orbit) in parts.iter().enumerate() {
            for &x in orbit {
                coordinates[x][i] = id;
            }
        }
        sizes.push(parts.len());
    }
    let structure = match ProductStructure::from_coordinates(sizes, &coordinates) {
        Ok(s) => s,
        Err(_) => return Ok(None),
    };
    let verdict = is_disentangled_action(action, decomposition, &structure)?;
    Ok(verdict.disentangled.then_some(structure))
}
