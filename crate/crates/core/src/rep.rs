//! Linear representations of finite groups over ℝ or ℂ.
//!
//! Matrices are stored over ℂ regardless of field; a real representation is
//! one whose matrices have zero imaginary part, and every subspace reported
//! for it has a real basis.
//!
//! Subspace computations work in a unitary frame: the averaged Gram matrix
//! `M = (1/|G|) Σ ρ(g)ᴴρ(g)` is positive definite, and `M^{1/2} ρ(g) M^{-1/2}`
//! is unitary. Fixed-space projectors are then orthogonal, so intersections
//! and complements are well defined, and verdicts do not depend on the basis
//! the representation was written in.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::group::{DirectProductDecomposition, FiniteGroup, Subgroup};
use crate::linalg::{
    complexify, concat_columns, eigenspace_above, frobenius, intersect, max_imag, modulus,
    orthonormality_defect, projector_range, range_basis, realify_basis, sqrt_and_inverse, CMatrix,
    RMatrix, C64,
};

pub const DEFAULT_TOL_REP: f64 = 1e-9;
pub const DEFAULT_TOL_LIN: f64 = 1e-8;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum RepError {
    #[error("{got} matrices given for a group of order {expected}")]
    WrongCount { got: usize, expected: usize },
    #[error("matrix for element {element} is {rows}×{cols}, expected {dim}×{dim}")]
    BadShape {
        element: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("matrix for element {element} has a non-finite entry")]
    NonFinite { element: usize },
    #[error("real representation has imaginary part {imag} at element {element}")]
    NotReal { element: usize, imag: f64 },
    #[error("identity is not mapped to the identity matrix (residual {residual})")]
    IdentityNotMapped { residual: f64 },
    #[error("ρ({g}∘{h}) differs from ρ({g})ρ({h}) by {residual}")]
    HomomorphismViolated { g: usize, h: usize, residual: f64 },
    #[error("representations are over different groups")]
    GroupMismatch,
    #[error("representations are over different fields")]
    FieldMismatch,
    #[error("subgroup belongs to a different group")]
    NotASubgroup,
    #[error("isotypic decomposition requires an abelian group")]
    NonAbelianUnsupported,
    #[error("decomposition is for a different group than the representation")]
    DecompositionMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// A validated homomorphism `ρ: G → GL(V)`.
#[derive(Clone, Debug)]
pub struct LinearRepresentation {
    group: FiniteGroup,
    field: Field,
    dim: usize,
    matrices: Vec<CMatrix>,
    homomorphism_residual: f64,
}

impl LinearRepresentation {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// Real parts of every matrix.
    pub fn real_matrices(&self) -> Vec<RMatrix> {
        self.matrices.iter().map(|m| m.map(|z| z.re)).collect()
    }

    /// Largest `‖ρ(gh) − ρ(g)ρ(h)‖_F` seen during validation.
    pub fn homomorphism_residual(&self) -> f64 {
        self.homomorphism_residual
    }

    /// `ρ` as a representation over ℂ.
    pub fn complexified(&self) -> Self {
        LinearRepresentation {
            field: Field::Complex,
            ..self.clone()
        }
    }
}

/// Checks shape, identity and the homomorphism law on every pair.
///
/// Invertibility needs no separate check: `ρ(g)ρ(g⁻¹) ≈ ρ(e) ≈ I` is one of
/// the pairs tested.
pub fn validate_representation(
    group: &FiniteGroup,
    field: Field,
    matrices: Vec<CMatrix>,
    tol_rep: f64,
) -> Result<LinearRepresentation, RepError> {
    let n = group.order();
    if matrices.len() != n {
        return Err(RepError::WrongCount {
            got: matrices.len(),
            expected: n,
        });
    }
    let dim = matrices[0].nrows();
    for (element, m) in matrices.iter().enumerate() {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(RepError::BadShape {
                element,
                rows: m.nrows(),
                cols: m.ncols(),
                dim,
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(RepError::NonFinite { element });
        }
        if field == Field::Real {
            let imag = max_imag(m);
            if imag > 0.0 {
                return Err(RepError::NotReal { element, imag });
            }
        }
    }
    let eye = CMatrix::identity(dim, dim);
    let residual = frobenius(&(&matrices[group.identity()] - &eye));
    if residual > tol_rep {
        return Err(RepError::IdentityNotMapped { residual });
    }
    let norms: Vec<f64> = matrices.iter().map(frobenius).collect();
    let mut product = CMatrix::zeros(dim, dim);
    let mut worst = residual;
    for g in 0..n {
        for h in 0..n {
            matrices[g].mul_to(&matrices[h], &mut product);
            product -= &matrices[group.mul(g, h)];
            let r = frobenius(&product);
            worst = worst.max(r);
            if r > tol_rep * (norms[g] * norms[h]).max(1.0) {
                return Err(RepError::HomomorphismViolated { g, h, residual: r });
            }
        }
    }
    Ok(LinearRepresentation {
        group: group.clone(),
        field,
        dim,
        matrices,
        homomorphism_residual: worst,
    })
}

/// Validates real matrices as a real representation.
pub fn validate_real_representation(
    group: &FiniteGroup,
    matrices: &[RMatrix],
    tol_rep: f64,
) -> Result<LinearRepresentation, RepError> {
    validate_representation(
        group,
        Field::Real,
        matrices.iter().map(complexify).collect(),
        tol_rep,
    )
}

fn assemble(group: &FiniteGroup, field: Field, matrices: Vec<CMatrix>) -> LinearRepresentation {
    validate_representation(group, field, matrices, f64::INFINITY)
        .expect("shape-consistent matrices")
}

/// Every element maps to the `dim × dim` identity.
pub fn trivial_representation(group: &FiniteGroup, dim: usize) -> LinearRepresentation {
    let eye = CMatrix::identity(dim, dim);
    LinearRepresentation {
        group: group.clone(),
        field: Field::Real,
        dim,
        matrices: vec![eye; group.order()],
        homomorphism_residual: 0.0,
    }
}

/// Permutation matrices of left multiplication: `ρ(g) e_h = e_{g∘h}`.
pub fn regular_representation(group: &FiniteGroup) -> LinearRepresentation {
    let n = group.order();
    let matrices = group
        .elements()
        .map(|g| {
            let mut m = CMatrix::zeros(n, n);
            for h in 0..n {
                m[(group.mul(g, h), h)] = C64::new(1.0, 0.0);
            }
            m
        })
        .collect();
    LinearRepresentation {
        group: group.clone(),
        field: Field::Real,
        dim: n,
        matrices,
        homomorphism_residual: 0.0,
    }
}

fn compatible(a: &LinearRepresentation, b: &LinearRepresentation) -> Result<(), RepError> {
    if a.group != b.group {
        return Err(RepError::GroupMismatch);
    }
    if a.field != b.field {
        return Err(RepError::FieldMismatch);
    }
    Ok(())
}

/// `ρ₁ ⊕ ρ₂`: block-diagonal matrices `[A 0; 0 B]`.
pub fn direct_sum(
    a: &LinearRepresentation,
    b: &LinearRepresentation,
) -> Result<LinearRepresentation, RepError> {
    compatible(a, b)?;
    let (da, db) = (a.dim, b.dim);
    let matrices = a
        .matrices
        .iter()
        .zip(&b.matrices)
        .map(|(ma, mb)| {
            let mut m = CMatrix::zeros(da + db, da + db);
            m.view_mut((0, 0), (da, da)).copy_from(ma);
            m.view_mut((da, da), (db, db)).copy_from(mb);
            m
        })
        .collect();
    Ok(assemble(&a.group, a.field, matrices))
}

/// `ρ₁ ⊗ ρ₂`: Kronecker products in the lexicographic basis `e_i ⊗ f_j`.
pub fn tensor_product(
    a: &LinearRepresentation,
    b: &LinearRepresentation,
) -> Result<LinearRepresentation, RepError> {
    compatible(a, b)?;
    let matrices = a
        .matrices
        .iter()
        .zip(&b.matrices)
        .map(|(ma, mb)| ma.kronecker(mb))
        .collect();
    Ok(assemble(&a.group, a.field, matrices))
}

/// `ρ` restricted to `H`, as a representation of `H.as_group()`.
pub fn restrict(
    rep: &LinearRepresentation,
    subgroup: &Subgroup,
) -> Result<LinearRepresentation, RepError> {
    if subgroup.parent() != &rep.group {
        return Err(RepError::NotASubgroup);
    }
    let matrices = subgroup
        .members()
        .iter()
        .map(|&h| rep.matrices[h].clone())
        .collect();
    Ok(LinearRepresentation {
        group: subgroup.as_group(),
        field: rep.field,
        dim: rep.dim,
        matrices,
        homomorphism_residual: rep.homomorphism_residual,
    })
}

/// `g ↦ Q ρ(g) Q⁻¹`.
pub fn conjugate(
    rep: &LinearRepresentation,
    basis_change: &CMatrix,
    tol_rep: f64,
) -> Option<Result<LinearRepresentation, RepError>> {
    let inverse = basis_change.clone().try_inverse()?;
    let matrices = rep
        .matrices
        .iter()
        .map(|m| basis_change * m * &inverse)
        .collect();
    let field = if max_imag(basis_change) == 0.0 {
        rep.field
    } else {
        Field::Complex
    };
    Some(validate_representation(
        &rep.group, field, matrices, tol_rep,
    ))
}

/// Traces `χ(g) = tr ρ(g)`.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub values: Vec<C64>,
    /// Largest spread of `χ` within a conjugacy class.
    pub class_defect: f64,
}

pub fn character(rep: &LinearRepresentation) -> CharacterTable {
    let values: Vec<C64> = rep.matrices.iter().map(|m| m.trace()).collect();
    let mut class_defect: f64 = 0.0;
    for class in rep.group.conjugacy_classes() {
        let first = values[class[0]];
        for &g in &class {
            class_defect = class_defect.max(modulus(values[g] - first));
        }
    }
    CharacterTable {
        values,
        class_defect,
    }
}

/// `(1/|H|) Σ_{h∈H} ρ(h)`, the projector onto vectors fixed by `H`.
pub fn fixed_subspace_projector(
    rep: &LinearRepresentation,
    subgroup: &Subgroup,
) -> Result<CMatrix, RepError> {
    if subgroup.parent() != &rep.group {
        return Err(RepError::NotASubgroup);
    }
    Ok(average(
        subgroup.members().iter().map(|&h| &rep.matrices[h]),
        rep.dim,
    ))
}

fn average<'a>(mats: impl Iterator<Item = &'a CMatrix>, dim: usize) -> CMatrix {
    let mut sum = CMatrix::zeros(dim, dim);
    let mut count = 0usize;
    for m in mats {
        sum += m;
        count += 1;
    }
    sum / C64::new(count as f64, 0.0)
}

/// A one-dimensional character of an abelian group, stored exactly:
/// `χ(g) = exp(2πi·k_g / m)` with `m` the group exponent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    modulus: usize,
    exponents: Vec<usize>,
}

impl Character {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn exponent(&self, g: usize) -> usize {
        self.exponents[g]
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    pub fn value(&self, g: usize) -> C64 {
        let angle = TAU * self.exponents[g] as f64 / self.modulus as f64;
        C64::new(libm::cos(angle), libm::sin(angle))
    }

    pub fn conj(&self) -> Self {
        Character {
            modulus: self.modulus,
            exponents: self
                .exponents
                .iter()
                .map(|&k| (self.modulus - k) % self.modulus)
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        Character {
            modulus: self.modulus,
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| (a + b) % self.modulus)
                .collect(),
        }
    }
}

/// All `|G|` characters of an abelian group, sorted.
///
/// Each character is fixed by its values on a generating set; assignments
/// are propagated along the Cayley graph and kept when consistent.
pub fn abelian_characters(group: &FiniteGroup) -> Result<Vec<Character>, RepError> {
    if !group.is_abelian() {
        return Err(RepError::NonAbelianUnsupported);
    }
    let m = group.exponent();
    let gens = group.generators();
    let steps: Vec<usize> = gens.iter().map(|&s| m / group.element_order(s)).collect();
    let orders: Vec<usize> = gens.iter().map(|&s| group.element_order(s)).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let ks: Vec<usize> = choice.iter().zip(&steps).map(|(c, s)| c * s).collect();
        if let Some(exponents) = propagate(group, &gens, &ks, m) {
            out.push(Character {
                modulus: m,
                exponents,
            });
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                out.sort();
                debug_assert_eq!(out.len(), group.order());
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < orders[i] {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn propagate(group: &FiniteGroup, gens: &[usize], ks: &[usize], m: usize) -> Option<Vec<usize>> {
    let mut value = vec![usize::MAX; group.order()];
    value[group.identity()] = 0;
    let mut queue = vec![group.identity()];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &k) in gens.iter().zip(ks) {
            let y = group.mul(x, s);
            let v = (value[x] + k) % m;
            if value[y] == usize::MAX {
                value[y] = v;
                queue.push(y);
            } else if value[y] != v {
                return None;
            }
        }
    }
    Some(value)
}

/// One isotypic component.
#[derive(Clone, Debug)]
pub struct IsotypicBlock {
    pub character: Character,
    /// Orthonormal basis, `dim × multiplicity`.
    pub basis: CMatrix,
}

impl IsotypicBlock {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }
}

/// Components `V_χ = range((1/|G|) Σ conj(χ(g)) ρ(g))` for every character
/// that occurs, in character order.
pub fn isotypic_decomposition(rep: &LinearRepresentation) -> Result<Vec<IsotypicBlock>, RepError> {
    let characters = abelian_characters(&rep.group)?;
    let n = rep.group.order() as f64;
    let mut blocks = Vec::new();
    for chi in characters {
        let mut p = CMatrix::zeros(rep.dim, rep.dim);
        for g in rep.group.elements() {
            p += &rep.matrices[g] * chi.value(g).conj();
        }
        p /= C64::new(n, 0.0);
        let basis = projector_range(&p);
        if basis.ncols() > 0 {
            blocks.push(IsotypicBlock {
                character: chi,
                basis,
            });
        }
    }
    Ok(blocks)
}

/// Real isotypic component for a conjugate pair `{χ, χ̄}` (one character when
/// it is real-valued).
#[derive(Clone, Debug)]
pub struct RealIsotypicBlock {
    pub character: Character,
    pub conjugate: Option<Character>,
    /// Real orthonormal basis.
    pub basis: CMatrix,
}

/// Complexifies a real representation, then merges each pair of conjugate
/// characters into one real block.
pub fn real_isotypic_decomposition(
    rep: &LinearRepresentation,
    tol_lin: f64,
) -> Result<Vec<RealIsotypicBlock>, RepError> {
    let blocks = isotypic_decomposition(rep)?;
    let mut used = vec![false; blocks.len()];
    let mut out = Vec::new();
    for i in 0..blocks.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let chi = &blocks[i].character;
        let bar = chi.conj();
        if bar == *chi {
            out.push(RealIsotypicBlock {
                character: chi.clone(),
                conjugate: None,
                basis: realify_basis(&blocks[i].basis, tol_lin),
            });
            continue;
        }
        let partner = (i + 1..blocks.len()).find(|&j| blocks[j].character == bar);
        let mut parts = vec![blocks[i].basis.clone()];
        if let Some(j) = partner {
            used[j] = true;
            parts.push(blocks[j].basis.clone());
        }
        let joined = concat_columns(&parts, rep.dim);
        out.push(RealIsotypicBlock {
            character: chi.clone(),
            conjugate: Some(bar),
            basis: realify_basis(&joined, tol_lin),
        });
    }
    Ok(out)
}

/// Largest `|χ_B(g₁∘g₂) − χ_B(g₁)·χ_B(g₂)|` over isotypic blocks `B` of a
/// representation of a two-factor product, where `χ_B(g)` is read off the
/// block matrix `Bᴴρ(g)B / dim B` and `g₁, g₂` range over the two factors.
pub fn character_factorization_defect(
    rep: &LinearRepresentation,
    decomposition: &DirectProductDecomposition,
) -> Result<f64, RepError> {
    if decomposition.parent() != &rep.group {
        return Err(RepError::DecompositionMismatch);
    }
    let blocks = isotypic_decomposition(rep)?;
    let g = &rep.group;
    let mut worst: f64 = 0.0;
    for block in &blocks {
        let k = C64::new(block.multiplicity() as f64, 0.0);
        let read = |x: usize| (block.basis.adjoint() * &rep.matrices[x] * &block.basis).trace() / k;
        let factors = decomposition.factors();
        for &a in factors[0].members() {
            for f in factors.iter().skip(1) {
                for &b in f.members() {
                    let defect = modulus(read(g.mul(a, b)) - read(a) * read(b));
                    worst = worst.max(defect);
                }
            }
        }
    }
    Ok(worst)
}

/// Which part of a direct-product decomposition a subspace belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assignment {
    /// Fixed by the whole group.
    Trivial,
    Factor(usize),
}

#[derive(Clone, Debug)]
pub struct SubspaceBlock {
    pub assignment: Assignment,
    /// Orthonormal basis, `dim × block_dim`.
    pub basis: CMatrix,
}

#[derive(Clone, Debug, Default)]
pub struct SubspaceDecomposition {
    pub blocks: Vec<SubspaceBlock>,
}

impl SubspaceDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.basis.ncols()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    /// Dimension of the non-trivial block assigned to each factor.
    pub fn factor_dims(&self, arity: usize) -> Vec<usize> {
        let mut out = vec![0; arity];
        for b in &self.blocks {
            if let Assignment::Factor(i) = b.assignment {
                out[i] += b.basis.ncols();
            }
        }
        out
    }

    pub fn trivial_dim(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.assignment == Assignment::Trivial)
            .map(|b| b.basis.ncols())
            .sum()
    }
}

/// Outcome of [`is_disentangled_representation`].
#[derive(Clone, Debug)]
pub struct RepresentationVerdict {
    pub disentangled: bool,
    pub decomposition: SubspaceDecomposition,
    /// `dim Z₀ + Σ dim Zᵢ`; the verdict needs this to equal the dimension.
    pub covered_dim: usize,
    pub dim: usize,
    /// `‖BᴴB − I‖_F` of the concatenated blocks in the unitary frame.
    pub orthonormality_defect: f64,
    /// Largest failure of a block to be invariant, or of a foreign factor to
    /// act trivially on it, in the original frame.
    pub invariance_residual: f64,
}

impl RepresentationVerdict {
    pub fn dimension_deficit(&self) -> isize {
        self.dim as isize - self.covered_dim as isize
    }
}

/// Decides whether `ρ` splits as `Z₀ ⊕ Z₁ ⊕ … ⊕ Z_k` with `Z₀` fixed by the
/// whole group and each `Zᵢ` fixed by every factor other than `G_i`.
///
/// `Z₀` is the fixed space of `G`; `Zᵢ` is the range of the product of the
/// fixed-space projectors of the other factors, intersected with `Z₀^⊥`.
pub fn is_disentangled_representation(
    rep: &LinearRepresentation,
    decomposition: &DirectProductDecomposition,
    tol_lin: f64,
) -> Result<RepresentationVerdict, RepError> {
    if decomposition.parent() != &rep.group {
        return Err(RepError::DecompositionMismatch);
    }
    let d = rep.dim;
    let n = rep.group.order();
    let gram = average(
        rep.matrices
            .iter()
            .map(|m| m.adjoint() * m)
            .collect::<Vec<_>>()
            .iter(),
        d,
    );
    let (root, root_inv) = sqrt_and_inverse(&gram);
    let unitary: Vec<CMatrix> = rep.matrices.iter().map(|m| &root * m * &root_inv).collect();

    let factor_projectors: Vec<CMatrix> = decomposition
        .factors()
        .iter()
        .map(|f| average(f.members().iter().map(|&h| &unitary[h]), d))
        .collect();
    let whole = average(unitary.iter(), d);
    let eye = CMatrix::identity(d, d);
    let trivial = orthogonal_range(&whole);
    let nontrivial = orthogonal_range(&(&eye - &whole));

    let mut blocks = vec![(Assignment::Trivial, trivial)];
    for i in 0..decomposition.arity() {
        let mut product = eye.clone();
        for (j, p) in factor_projectors.iter().enumerate() {
            if j != i {
                product *= p;
            }
        }
        let fixed_by_others = orthogonal_range(&product);
        let zi = intersect(&[fixed_by_others, nontrivial.clone()], d, tol_lin);
        blocks.push((Assignment::Factor(i), zi));
    }
    if rep.field == Field::Real {
        for (_, b) in blocks.iter_mut() {
            *b = realify_basis(b, tol_lin);
        }
    }
    let concatenated = concat_columns(
        &blocks.iter().map(|(_, b)| b.clone()).collect::<Vec<_>>(),
        d,
    );
    let covered_dim = concatenated.ncols();
    let defect = orthonormality_defect(&concatenated);
    let disentangled = covered_dim == d && defect <= tol_lin * d.max(1) as f64;

    let mut decomposition_out = SubspaceDecomposition::default();
    let mut invariance_residual: f64 = 0.0;
    for (assignment, b) in blocks {
        if b.ncols() == 0 {
            continue;
        }
        let mut basis = range_basis(&(&root_inv * &b), tol_lin);
        if rep.field == Field::Real {
            basis = realify_basis(&basis, tol_lin);
        }
        let proj = &basis * basis.adjoint();
        let outside = &eye - &proj;
        for g in 0..n {
            let m = &rep.matrices[g];
            let scale = frobenius(m).max(1.0);
            invariance_residual =
                invariance_residual.max(frobenius(&(&outside * m * &proj)) / scale);
            let acts_trivially = match assignment {
                Assignment::Trivial => true,
                Assignment::Factor(i) => decomposition.factor_of(g).is_some_and(|j| j != i),
            };
            if acts_trivially {
                invariance_residual =
                    invariance_residual.max(frobenius(&((m - &eye) * &proj)) / scale);
            }
        }
        decomposition_out
            .blocks
            .push(SubspaceBlock { assignment, basis });
    }
    Ok(RepresentationVerdict {
        disentangled,
        decomposition: decomposition_out,
        covered_dim,
        dim: d,
        orthonormality_defect: defect,
        invariance_residual,
    })
}

/// Range of an orthogonal projector.
fn orthogonal_range(p: &CMatrix) -> CMatrix {
    let herm = (p + p.adjoint()) * C64::new(0.5, 0.0);
    eigenspace_above(&herm, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic_group, direct_product, product_factors, Subgroup};

    fn rotation_rep(n: usize) -> LinearRepresentation {
        let g = cyclic_group(n).unwrap();
        let mats = (0..n)
            .map(|k| {
                let a = TAU * k as f64 / n as f64;
                RMatrix::from_row_slice(
                    2,
                    2,
                    &[libm::cos(a), -libm::sin(a), libm::sin(a), libm::cos(a)],
                )
            })
            .collect::<Vec<_>>();
        validate_real_representation(&g, &mats, DEFAULT_TOL_REP).unwrap()
    }

    #[test]
    fn trivial_and_regular_validate() {
        let g = cyclic_group(3).unwrap();
        let t = trivial_representation(&g, 2);
        validate_representation(&g, Field::Real, t.matrices().to_vec(), DEFAULT_TOL_REP).unwrap();
        let r = regular_representation(&g);
        validate_representation(&g, Field::Real, r.matrices().to_vec(), DEFAULT_TOL_REP).unwrap();
    }

    #[test]
    fn perturbed_entry_is_detected() {
        let g = cyclic_group(3).unwrap();
        let mut mats = regular_representation(&g).matrices().to_vec();
        mats[1][(0, 0)] += C64::new(0.1, 0.0);
        match validate_representation(&g, Field::Real, mats, DEFAULT_TOL_REP) {
            Err(RepError::HomomorphismViolated { residual, .. }) => {
                assert!(residual > 0.05 && residual < 0.5, "{residual}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identity_must_map_to_identity() {
        let g = cyclic_group(2).unwrap();
        let mats = vec![CMatrix::zeros(1, 1), CMatrix::zeros(1, 1)];
        assert!(matches!(
            validate_representation(&g, Field::Real, mats, DEFAULT_TOL_REP),
            Err(RepError::IdentityNotMapped { .. })
        ));
    }

    #[test]
    fn imaginary_entries_rejected_for_real_field() {
        let g = cyclic_group(2).unwrap();
        let mats = vec![
            CMatrix::identity(1, 1),
            CMatrix::from_element(1, 1, C64::new(0.0, 1.0)),
        ];
        assert!(matches!(
            validate_representation(&g, Field::Real, mats, DEFAULT_TOL_REP),
            Err(RepError::NotReal { .. })
        ));
    }

    #[test]
    fn sum_is_block_diagonal() {
        let r = rotation_rep(5);
        let t = trivial_representation(r.group(), 3);
        let s = direct_sum(&r, &t).unwrap();
        assert_eq!(s.dim(), 5);
        for m in s.matrices() {
            for i in 0..2 {
                for j in 2..5 {
                    assert_eq!(m[(i, j)], C64::new(0.0, 0.0));
                    assert_eq!(m[(j, i)], C64::new(0.0, 0.0));
                }
            }
        }
        let (cs, cr, ct) = (character(&s), character(&r), character(&t));
        for g in 0..5 {
            assert!(modulus(cs.values[g] - cr.values[g] - ct.values[g]) < 1e-12);
        }
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let a = rotation_rep(3);
        let b = rotation_rep(4);
        assert_eq!(direct_sum(&a, &b).unwrap_err(), RepError::GroupMismatch);
        let c = a.complexified();
        assert_eq!(tensor_product(&a, &c).unwrap_err(), RepError::FieldMismatch);
    }

    #[test]
    fn tensor_with_one_dim_trivial_is_unchanged() {
        let r = rotation_rep(4);
        let t = trivial_representation(r.group(), 1);
        let p = tensor_product(&t, &r).unwrap();
        for g in 0..4 {
            assert_eq!(p.matrix(g), r.matrix(g));
        }
        assert_eq!(tensor_product(&r, &rotation_rep(4)).unwrap().dim(), 4);
    }

    #[test]
    fn regular_character() {
        for n in 1..8 {
            let g = cyclic_group(n).unwrap();
            let chi = character(&regular_representation(&g));
            assert_eq!(chi.values[0], C64::new(n as f64, 0.0));
            for k in 1..n {
                assert_eq!(chi.values[k], C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn rotation_projector_vanishes() {
        for n in 2..9 {
            let r = rotation_rep(n);
            let p = fixed_subspace_projector(&r, &Subgroup::whole(r.group())).unwrap();
            assert!(frobenius(&p) < 1e-12, "n = {n}");
        }
        let t = trivial_representation(&cyclic_group(4).unwrap(), 3);
        let p = fixed_subspace_projector(&t, &Subgroup::whole(t.group())).unwrap();
        assert_eq!(p, CMatrix::identity(3, 3));
    }

    #[test]
    fn projector_rejects_foreign_subgroup() {
        let r = rotation_rep(4);
        let other = cyclic_group(6).unwrap();
        assert_eq!(
            fixed_subspace_projector(&r, &Subgroup::whole(&other)).unwrap_err(),
            RepError::NotASubgroup
        );
    }

    #[test]
    fn characters_of_small_abelian_groups() {
        for n in 1..9 {
            let chars = abelian_characters(&cyclic_group(n).unwrap()).unwrap();
            assert_eq!(chars.len(), n);
        }
        let c2 = cyclic_group(2).unwrap();
        let c4 = cyclic_group(4).unwrap();
        let p = direct_product(&c2, &c4);
        let chars = abelian_characters(&p).unwrap();
        assert_eq!(chars.len(), 8);
        for chi in &chars {
            for a in p.elements() {
                for b in p.elements() {
                    let lhs = chi.exponent(p.mul(a, b));
                    assert_eq!(lhs, (chi.exponent(a) + chi.exponent(b)) % chi.modulus());
                }
            }
        }
    }

    #[test]
    fn isotypic_of_regular_c5() {
        let g = cyclic_group(5).unwrap();
        let blocks = isotypic_decomposition(&regular_representation(&g)).unwrap();
        assert_eq!(blocks.len(), 5);
        for (k, b) in blocks.iter().enumerate() {
            assert_eq!(b.multiplicity(), 1);
            assert_eq!(b.character.exponent(1), k);
        }
    }

    #[test]
    fn isotypic_of_trivial_c3() {
        let t = trivial_representation(&cyclic_group(3).unwrap(), 2);
        let blocks = isotypic_decomposition(&t).unwrap();
        assert_eq!(blocks.len(), 1);
        assert!(blocks[0].character.is_trivial());
        assert_eq!(blocks[0].multiplicity(), 2);
    }

    #[test]
    fn real_isotypic_pairs_rotation_characters() {
        let r = rotation_rep(5);
        let blocks = real_isotypic_decomposition(&r, DEFAULT_TOL_LIN).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].basis.ncols(), 2);
        assert_eq!(max_imag(&blocks[0].basis), 0.0);
    }

    #[test]
    fn isotypic_rejects_nonabelian() {
        let cube = crate::group::cube_rotation_group();
        let t = trivial_representation(&cube, 1);
        assert_eq!(
            isotypic_decomposition(&t).unwrap_err(),
            RepError::NonAbelianUnsupported
        );
    }

    #[test]
    fn trivial_rep_is_disentangled_with_trivial_block() {
        let c2 = cyclic_group(2).unwrap();
        let c3 = cyclic_group(3).unwrap();
        let p = direct_product(&c2, &c3);
        let d = product_factors(&p, &c2, &c3).unwrap();
        let t = trivial_representation(&p, 3);
        let v = is_disentangled_representation(&t, &d, DEFAULT_TOL_LIN).unwrap();
        assert!(v.disentangled);
        assert_eq!(v.decomposition.trivial_dim(), 3);
        assert_eq!(v.decomposition.factor_dims(2), vec![0, 0]);
    }

    #[test]
    fn decomposition_for_other_group_is_rejected() {
        let r = rotation_rep(6);
        let c2 = cyclic_group(2).unwrap();
        let c3 = cyclic_group(3).unwrap();
        let p = direct_product(&c2, &c3);
        let d = product_factors(&p, &c2, &c3).unwrap();
        assert_eq!(
            is_disentangled_representation(&r, &d, DEFAULT_TOL_LIN).unwrap_err(),
            RepError::DecompositionMismatch
        );
    }
}
