//! Certification of a representation table `f: W → Z` against a group action
//! on `W` and a direct-product decomposition of the group.
//!
//! Every check only looks at `f(W)`; nothing is said about the action on the
//! rest of `Z`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::action::FiniteAction;
use crate::group::DirectProductDecomposition;
use crate::linalg::{complexify, frobenius_real, psd_pseudo_inverse, RMatrix};
use crate::rep::{
    is_disentangled_representation, validate_representation, Field, LinearRepresentation, RepError,
    RepresentationVerdict, SubspaceDecomposition, DEFAULT_TOL_LIN, DEFAULT_TOL_REP,
};

/// Eigenvalues of the data Gram matrix below this fraction of the largest are
/// treated as zero when fitting.
const FIT_RANK_TOL: f64 = 1e-12;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CertifyError {
    #[error("representation table is empty")]
    Empty,
    #[error("row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("table has {table} rows but the action moves {set} points")]
    SizeMismatch { table: usize, set: usize },
    #[error("states {w1} and {w2} share a vector but element {g} separates them")]
    IllDefined { w1: usize, w2: usize, g: usize },
    #[error("latent vectors span rank {rank} of {dim} dimensions")]
    RankDeficient { rank: usize, dim: usize },
    #[error("z-action has {got} matrices of the wrong count or shape")]
    BadZAction { got: usize },
    #[error("decomposition is for a different group than the action")]
    DecompositionMismatch,
    #[error("reference table does not match the representation table")]
    ReferenceMismatch,
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// One latent vector per world state.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationTable {
    dim: usize,
    values: Vec<f64>,
}

impl RepresentationTable {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, CertifyError> {
        let dim = rows.first().ok_or(CertifyError::Empty)?.len();
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(CertifyError::Ragged {
                    row,
                    got: r.len(),
                    expected: dim,
                });
            }
            values.extend(r);
        }
        Self::from_flat(dim, values)
    }

    /// Row-major values, `dim` per state.
    pub fn from_flat(dim: usize, values: Vec<f64>) -> Result<Self, CertifyError> {
        if values.is_empty() || dim == 0 {
            return Err(CertifyError::Empty);
        }
        if !values.len().is_multiple_of(dim) {
            return Err(CertifyError::Ragged {
                row: values.len() / dim,
                got: values.len() % dim,
                expected: dim,
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CertifyError::NonFinite {
                row: i / dim,
                col: i % dim,
            });
        }
        Ok(RepresentationTable { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn row(&self, w: usize) -> &[f64] {
        &self.values[w * self.dim..(w + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest Euclidean norm of a row.
    pub fn scale(&self) -> f64 {
        self.rows().map(norm).fold(0.0, f64::max)
    }

    /// `d × |W|` matrix whose columns are the latent vectors.
    pub fn data_matrix(&self) -> RMatrix {
        RMatrix::from_column_slice(self.dim, self.len(), &self.values)
    }

    /// New latent coordinate `k` is old coordinate `order[k]`.
    pub fn permute_dims(&self, order: &[usize]) -> Self {
        let values = self
            .rows()
            .flat_map(|r| order.iter().map(move |&k| r[k]))
            .collect();
        RepresentationTable {
            dim: order.len(),
            values,
        }
    }

    pub fn scale_dims(&self, scales: &[f64]) -> Self {
        let values = self
            .rows()
            .flat_map(|r| r.iter().zip(scales).map(|(v, s)| v * s))
            .collect();
        RepresentationTable {
            dim: self.dim,
            values,
        }
    }

    /// `w ↦ M·f(w)`.
    pub fn transform(&self, m: &RMatrix) -> Self {
        let out = m * self.data_matrix();
        RepresentationTable {
            dim: m.nrows(),
            values: out.as_slice().to_vec(),
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative to the table scale: vector coincidence and equivariance.
    pub tol_eq: f64,
    /// Relative leak allowed in the coordinate sensitivity test.
    pub tol_nl: f64,
    pub tol_lin: f64,
    pub tol_rep: f64,
}

impl Tolerances {
    /// For tables built from closed-form expressions.
    pub fn analytic() -> Self {
        Tolerances {
            tol_eq: 1e-9,
            tol_nl: 1e-3,
            tol_lin: DEFAULT_TOL_LIN,
            tol_rep: DEFAULT_TOL_REP,
        }
    }

    /// For tables produced by a trained model.
    pub fn imported() -> Self {
        Tolerances {
            tol_eq: 1e-6,
            ..Self::analytic()
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::analytic()
    }
}

/// States `w1 ~ w2` with `g·w1 ≁ g·w2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IllDefinedWitness {
    pub w1: usize,
    pub w2: usize,
    pub g: usize,
}

/// States grouped by coinciding latent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct WellDefinedness {
    /// Image-point index of each state, numbered by smallest member.
    pub class_of: Vec<usize>,
    /// Smallest state in each class.
    pub representatives: Vec<usize>,
    pub witness: Option<IllDefinedWitness>,
}

impl WellDefinedness {
    pub fn well_defined(&self) -> bool {
        self.witness.is_none()
    }

    pub fn is_injective(&self) -> bool {
        self.representatives.len() == self.class_of.len()
    }

    /// Classes holding more than one state.
    pub fn collisions(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.representatives.len()];
        for (w, &c) in self.class_of.iter().enumerate() {
            classes[c].push(w);
        }
        classes.retain(|c| c.len() > 1);
        classes
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn check_size(f: &RepresentationTable, a: &FiniteAction) -> Result<(), CertifyError> {
    if f.len() != a.set_size() {
        return Err(CertifyError::SizeMismatch {
            table: f.len(),
            set: a.set_size(),
        });
    }
    Ok(())
}

/// Merges states whose vectors lie within `tol_eq · scale` and checks that
/// every group element respects the merge.
pub fn check_well_defined(
    f: &RepresentationTable,
    a: &FiniteAction,
    tol_eq: f64,
) -> Result<WellDefinedness, CertifyError> {
    check_size(f, a)?;
    let m = f.len();
    let threshold = tol_eq * f.scale();
    let mut parent: Vec<usize> = (0..m).collect();
    for w1 in 0..m {
        for w2 in w1 + 1..m {
            if distance(f.row(w1), f.row(w2)) <= threshold {
                let (r1, r2) = (find(&mut parent, w1), find(&mut parent, w2));
                if r1 != r2 {
                    parent[r1.max(r2)] = r1.min(r2);
                }
            }
        }
    }
    let mut class_of = vec![usize::MAX; m];
    let mut representatives = Vec::new();
    for w in 0..m {
        let root = find(&mut parent, w);
        if class_of[root] == usize::MAX {
            class_of[root] = representatives.len();
            representatives.push(w);
        }
        class_of[w] = class_of[root];
    }
    let mut witness = None;
    'outer: for g in a.group().elements() {
        let mut image = vec![usize::MAX; representatives.len()];
        for w in 0..m {
            let c = class_of[w];
            let target = class_of[a.apply(g, w)];
            if image[c] == usize::MAX {
                image[c] = target;
            } else if image[c] != target {
                witness = Some(IllDefinedWitness {
                    w1: representatives[c],
                    w2: w,
                    g,
                });
                break 'outer;
            }
        }
    }
    Ok(WellDefinedness {
        class_of,
        representatives,
        witness,
    })
}

/// The action `g·z = f(g·f⁻¹(z))` on the distinct points of `f(W)`.
#[derive(Clone, Debug)]
pub struct InducedAction {
    pub classes: WellDefinedness,
    pub action: FiniteAction,
}

pub fn induce_action_on_image(
    f: &RepresentationTable,
    a: &FiniteAction,
    tol_eq: f64,
) -> Result<InducedAction, CertifyError> {
    let classes = check_well_defined(f, a, tol_eq)?;
    if let Some(IllDefinedWitness { w1, w2, g }) = classes.witness {
        return Err(CertifyError::IllDefined { w1, w2, g });
    }
    let k = classes.representatives.len();
    let mut table = Vec::with_capacity(a.group().order() * k);
    for g in a.group().elements() {
        for &w in &classes.representatives {
            table.push(classes.class_of[a.apply(g, w)]);
        }
    }
    let action = FiniteAction::from_trusted(a.group().clone(), k, table);
    Ok(InducedAction { classes, action })
}

/// How the group is taken to act on `Z`.
#[derive(Clone, Copy, Debug)]
pub enum ZAction<'a> {
    /// One `d × d` matrix per group element.
    Matrices(&'a [RMatrix]),
    Induced(&'a InducedAction),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Equivariance {
    /// `max ‖g·f(w) − f(g·w)‖` over all `g`, `w`.
    pub residual: f64,
    /// `residual` divided by the table scale.
    pub relative: f64,
    pub passed: bool,
}

pub fn verify_equivariance(
    f: &RepresentationTable,
    a: &FiniteAction,
    z: ZAction<'_>,
    tol_eq: f64,
) -> Result<Equivariance, CertifyError> {
    check_size(f, a)?;
    let d = f.dim();
    let mut residual: f64 = 0.0;
    match z {
        ZAction::Matrices(ms) => {
            if ms.len() != a.group().order() || ms.iter().any(|m| m.shape() != (d, d)) {
                return Err(CertifyError::BadZAction { got: ms.len() });
            }
            let x = f.data_matrix();
            for g in a.group().elements() {
                let moved = &ms[g] * &x;
                for w in 0..f.len() {
                    let target = f.row(a.apply(g, w));
                    residual = residual.max(distance(moved.column(w).as_slice(), target));
                }
            }
        }
        ZAction::Induced(induced) => {
            let reps = &induced.classes.representatives;
            for g in a.group().elements() {
                for w in 0..f.len() {
                    let z = induced.action.apply(g, induced.classes.class_of[w]);
                    residual = residual.max(distance(f.row(reps[z]), f.row(a.apply(g, w))));
                }
            }
        }
    }
    let scale = f.scale();
    let relative = if scale > 0.0 {
        residual / scale
    } else {
        residual
    };
    Ok(Equivariance {
        residual,
        relative,
        passed: relative <= tol_eq,
    })
}

/// Whether the linear action was estimated from the table or given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearSource {
    Fitted,
    Supplied,
}

#[derive(Clone, Debug)]
pub struct FittedLinearAction {
    pub source: LinearSource,
    pub generators: Vec<usize>,
    pub generator_matrices: Vec<RMatrix>,
    /// The matrices for every element, composed from the generators.
    pub representation: LinearRepresentation,
    /// Rank of the data the fit saw.
    pub data_rank: usize,
    /// Largest Frobenius defect over generator powers, cross-factor
    /// commutators and `A_{gh} − A_g A_h` for every pair.
    pub homomorphism_residual: f64,
    pub equivariance: Equivariance,
}

impl FittedLinearAction {
    pub fn equivariance_residual(&self) -> f64 {
        self.equivariance.relative
    }

    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.equivariance.relative <= tol.tol_eq && self.homomorphism_residual <= tol.tol_eq
    }
}

/// Least-squares `A_s` with `A_s f(w) ≈ f(s·w)` for each generator `s`.
///
/// Directions outside the span of the data are left fixed, so a rank-deficient
/// fit is still an action; [`fit_linear_action`] refuses that case.
fn fit_generators(
    f: &RepresentationTable,
    a: &FiniteAction,
    generators: &[usize],
) -> (Vec<RMatrix>, usize) {
    let d = f.dim();
    let x = f.data_matrix();
    let gram = &x * x.transpose();
    let (gram_inv, rank) = psd_pseudo_inverse(&gram, FIT_RANK_TOL);
    let outside = RMatrix::identity(d, d) - &gram * &gram_inv;
    let mats = generators
        .iter()
        .map(|&s| {
            let mut y = RMatrix::zeros(d, f.len());
            for w in 0..f.len() {
                y.column_mut(w).copy_from_slice(f.row(a.apply(s, w)));
            }
            &y * x.transpose() * &gram_inv + &outside
        })
        .collect();
    (mats, rank)
}

/// Composes generator matrices into one matrix per element along a
/// breadth-first walk of the Cayley graph.
fn compose_over_group(
    a: &FiniteAction,
    generators: &[usize],
    mats: &[RMatrix],
    d: usize,
) -> Vec<RMatrix> {
    let group = a.group();
    let mut out: Vec<Option<RMatrix>> = vec![None; group.order()];
    out[group.identity()] = Some(RMatrix::identity(d, d));
    let mut queue = vec![group.identity()];
    let mut head = 0;
    while head < queue.len() {
        let e = queue[head];
        head += 1;
        for (s, m) in generators.iter().zip(mats) {
            let next = group.mul(*s, e);
            if out[next].is_none() {
                out[next] = Some(m * out[e].as_ref().expect("visited"));
                queue.push(next);
            }
        }
    }
    out.into_iter()
        .map(|m| m.expect("generators generate the group"))
        .collect()
}

fn homomorphism_defect(
    decomposition: &DirectProductDecomposition,
    generators: &[usize],
    mats: &[RMatrix],
    rep: &LinearRepresentation,
) -> f64 {
    let group = decomposition.parent();
    let d = rep.dim();
    let eye = RMatrix::identity(d, d);
    let mut worst = rep.homomorphism_residual();
    for (s, m) in generators.iter().zip(mats) {
        let mut p = eye.clone();
        for _ in 0..group.element_order(*s) {
            p = m * p;
        }
        worst = worst.max(frobenius_real(&(p - &eye)));
    }
    for (i, (s, ms)) in generators.iter().zip(mats).enumerate() {
        for (t, mt) in generators.iter().zip(mats).skip(i + 1) {
            if decomposition.factor_of(*s) != decomposition.factor_of(*t) {
                worst = worst.max(frobenius_real(&(ms * mt - mt * ms)));
            }
        }
    }
    worst
}

#[allow(clippy::too_many_arguments)]
fn finish_linear(
    f: &RepresentationTable,
    a: &FiniteAction,
    decomposition: &DirectProductDecomposition,
    source: LinearSource,
    generators: Vec<usize>,
    generator_matrices: Vec<RMatrix>,
    elements: Vec<RMatrix>,
    data_rank: usize,
    tol: &Tolerances,
) -> Result<FittedLinearAction, CertifyError> {
    let equivariance = verify_equivariance(f, a, ZAction::Matrices(&elements), tol.tol_eq)?;
    let representation = validate_representation(
        a.group(),
        Field::Real,
        elements.iter().map(complexify).collect(),
        f64::INFINITY,
    )?;
    let homomorphism_residual = homomorphism_defect(
        decomposition,
        &generators,
        &generator_matrices,
        &representation,
    );
    Ok(FittedLinearAction {
        source,
        generators,
        generator_matrices,
        representation,
        data_rank,
        homomorphism_residual,
        equivariance,
    })
}

fn check_decomposition(
    a: &FiniteAction,
    decomposition: &DirectProductDecomposition,
) -> Result<(), CertifyError> {
    if decomposition.parent() != a.group() {
        return Err(CertifyError::DecompositionMismatch);
    }
    Ok(())
}

fn fit_inner(
    f: &RepresentationTable,
    a: &FiniteAction,
    decomposition: &DirectProductDecomposition,
    tol: &Tolerances,
    allow_deficient: bool,
) -> Result<FittedLinearAction, CertifyError> {
    check_size(f, a)?;
    check_decomposition(a, decomposition)?;
    let generators: Vec<usize> = decomposition.factor_generators().concat();
    let (mats, rank) = fit_generators(f, a, &generators);
    if rank < f.dim() && !allow_deficient {
        return Err(CertifyError::RankDeficient { rank, dim: f.dim() });
    }
    let elements = compose_over_group(a, &generators, &mats, f.dim());
    finish_linear(
        f,
        a,
        decomposition,
        LinearSource::Fitted,
        generators,
        mats,
        elements,
        rank,
        tol,
    )
}

/// Fits one matrix per generator of each factor by least squares and composes
/// them into a candidate representation.
pub fn fit_linear_action(
    f: &RepresentationTable,
    a: &FiniteAction,
    decomposition: &DirectProductDecomposition,
    tol: &Tolerances,
) -> Result<FittedLinearAction, CertifyError> {
    fit_inner(f, a, decomposition, tol, false)
}

/// Wraps a known representation on `Z` in the same report structure.
pub fn supplied_linear_action(
    f: &RepresentationTable,
    a: &FiniteAction,
    decomposition: &DirectProductDecomposition,
    rep: &LinearRepresentation,
    tol: &Tolerances,
) -> Result<FittedLinearAction, CertifyError> {
    check_size(f, a)?;
    check_decomposition(a, decomposition)?;
    if rep.group() != a.group() {
        return Err(RepError::GroupMismatch.into());
    }
    if rep.dim() != f.dim() {
        return Err(CertifyError::BadZAction { got: rep.dim() });
    }
    let elements = rep.real_matrices();
    let generators: Vec<usize> = decomposition.factor_generators().concat();
    let mats = generators.iter().map(|&s| elements[s].clone()).collect();
    let rank = psd_pseudo_inverse(
        &(f.data_matrix() * f.data_matrix().transpose()),
        FIT_RANK_TOL,
    )
    .1;
    finish_linear(
        f,
        a,
        decomposition,
        LinearSource::Supplied,
        generators,
        mats,
        elements,
        rank,
        tol,
    )
}

/// Per-dimension sensitivity to each factor and the induced assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateCertificate {
    /// `sensitivity[i][k]`: largest change of coordinate `k` under one
    /// generator of factor `i`.
    pub sensitivity: Vec<Vec<f64>>,
    /// Factor owning each coordinate; `None` for coordinates that never move.
    pub assignment: Vec<Option<usize>>,
    /// Largest off-factor sensitivity relative to the owning factor's.
    pub worst_leak: f64,
    pub disentangled: bool,
}

pub fn coordinate_certificate(
    f: &RepresentationTable,
    a: &FiniteAction,
    decomposition: &DirectProductDecomposition,
    tol: &Tolerances,
) -> Result<CoordinateCertificate, CertifyError> {
    check_size(f, a)?;
    check_decomposition(a, decomposition)?;
    let d = f.dim();
    let generators = decomposition.factor_generators();
    let mut sensitivity = vec![vec![0.0f64; d]; generators.len()];
    for (i, gens) in generators.iter().enumerate() {
        for &s in gens {
            for w in 0..f.len() {
                let (from, to) = (f.row(w), f.row(a.apply(s, w)));
                for k in 0..d {
                    sensitivity[i][k] = sensitivity[i][k].max((to[k] - from[k]).abs());
                }
            }
        }
    }
    let constant_floor = tol.tol_eq * f.scale();
    let mut assignment = vec![None; d];
    let mut worst_leak: f64 = 0.0;
    for k in 0..d {
        let (lo, hi) = f
            .rows()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r[k]), hi.max(r[k]))
            });
        let spread = hi - lo;
        let column: Vec<f64> = sensitivity.iter().map(|s| s[k]).collect();
        let Some((owner, &top)) = column.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1))
        else {
            continue;
        };
        if spread <= constant_floor || top <= tol.tol_nl * spread {
            continue;
        }
        assignment[k] = Some(owner);
        for (i, &s) in column.iter().enumerate() {
            if i != owner {
                worst_leak = worst_leak.max(s / top);
            }
        }
    }
    Ok(CoordinateCertificate {
        sensitivity,
        assignment,
        worst_leak,
        disentangled: worst_leak <= tol.tol_nl,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    /// `1 − second/largest` sensitivity per coordinate; `None` when dropped.
    pub modularity: Vec<Option<f64>>,
    /// Coordinates assigned to each factor.
    pub compactness: Vec<usize>,
    /// R² of the best affine decoder onto the reference table.
    pub explicitness: Option<f64>,
}

impl Metrics {
    pub fn dropped(&self) -> Vec<usize> {
        self.modularity
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_none())
            .map(|(k, _)| k)
            .collect()
    }

    pub fn min_modularity(&self) -> Option<f64> {
        self.modularity.iter().flatten().copied().reduce(f64::min)
    }
}

pub fn metrics(
    f: &RepresentationTable,
    coordinates: &CoordinateCertificate,
    reference: Option<&RepresentationTable>,
) -> Result<Metrics, CertifyError> {
    let modularity = coordinates
        .assignment
        .iter()
        .enumerate()
        .map(|(k, owner)| {
            owner.map(|_| {
                let mut column: Vec<f64> = coordinates.sensitivity.iter().map(|s| s[k]).collect();
                column.sort_by(|x, y| y.total_cmp(x));
                let second = column.get(1).copied().unwrap_or(0.0);
                1.0 - second / column[0]
            })
        })
        .collect();
    let mut compactness = vec![0; coordinates.sensitivity.len()];
    for owner in coordinates.assignment.iter().flatten() {
        compactness[*owner] += 1;
    }
    let explicitness = reference.map(|r| explicitness(f, r)).transpose()?;
    Ok(Metrics {
        modularity,
        compactness,
        explicitness,
    })
}

/// Coefficient of determination of the least-squares affine map from `f` to
/// `reference`, clamped to `[0, 1]`.
pub fn explicitness(
    f: &RepresentationTable,
    reference: &RepresentationTable,
) -> Result<f64, CertifyError> {
    if f.len() != reference.len() {
        return Err(CertifyError::ReferenceMismatch);
    }
    let (m, d) = (f.len(), f.dim());
    let mut x = RMatrix::from_element(d + 1, m, 1.0);
    x.rows_mut(0, d).copy_from(&f.data_matrix());
    let y = reference.data_matrix();
    let (gram_inv, _) = psd_pseudo_inverse(&(&x * x.transpose()), FIT_RANK_TOL);
    let predicted = &y * x.transpose() * gram_inv * &x;
    let residual: f64 = (predicted - &y).iter().map(|v| v * v).sum();
    let mut total = 0.0;
    for row in y.row_iter() {
        let mean = row.sum() / m as f64;
        total += row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    }
    if total <= 0.0 {
        return Ok(0.0);
    }
    Ok((1.0 - residual / total).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CertifyOptions<'a> {
    pub tolerances: Tolerances,
    /// Known action on `Z`; skips the least-squares fit.
    pub linear_action: Option<&'a LinearRepresentation>,
    /// Ground-truth table for explicitness.
    pub reference: Option<&'a RepresentationTable>,
}

#[derive(Clone, Debug)]
pub enum LinearOutcome {
    Fitted(FittedLinearAction),
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct CertificationReport {
    pub well_defined: bool,
    pub collisions: Vec<Vec<usize>>,
    pub ill_defined_witness: Option<IllDefinedWitness>,
    /// Equivariance of the induced action on `f(W)`; absent when ill-defined.
    pub equivariance_residual: Option<f64>,
    pub linear: LinearOutcome,
    /// Present when the linear action passed its tolerances.
    pub linear_verdict: Option<RepresentationVerdict>,
    pub coordinates: CoordinateCertificate,
    pub verdict_disentangled: bool,
    pub verdict_linear_disentangled: bool,
    pub metrics: Metrics,
    pub tolerances: Tolerances,
}

impl CertificationReport {
    pub fn linear_fit(&self) -> Option<&FittedLinearAction> {
        match &self.linear {
            LinearOutcome::Fitted(fit) => Some(fit),
            LinearOutcome::Failed(_) => None,
        }
    }

    pub fn subspaces(&self) -> Option<&SubspaceDecomposition> {
        self.linear_verdict.as_ref().map(|v| &v.decomposition)
    }
}

pub fn certify(
    f: &RepresentationTable,
    a: &FiniteAction,
    decomposition: &DirectProductDecomposition,
    options: &CertifyOptions<'_>,
) -> Result<CertificationReport, CertifyError> {
    let tol = options.tolerances;
    check_size(f, a)?;
    check_decomposition(a, decomposition)?;
    if let Some(r) = options.reference {
        if r.len() != f.len() {
            return Err(CertifyError::ReferenceMismatch);
        }
    }
    let classes = check_well_defined(f, a, tol.tol_eq)?;
    let well_defined = classes.well_defined();
    let equivariance_residual = if well_defined {
        let induced = induce_action_on_image(f, a, tol.tol_eq)?;
        Some(verify_equivariance(f, a, ZAction::Induced(&induced), tol.tol_eq)?.relative)
    } else {
        None
    };

    let linear = match options.linear_action {
        Some(rep) => supplied_linear_action(f, a, decomposition, rep, &tol),
        None => fit_inner(f, a, decomposition, &tol, true),
    };
    let linear = match linear {
        Ok(fit) => LinearOutcome::Fitted(fit),
        Err(e @ (CertifyError::Rep(_) | CertifyError::BadZAction { .. })) => return Err(e),
        Err(e) => LinearOutcome::Failed(alloc::format!("{e}")),
    };
    let linear_verdict = match &linear {
        LinearOutcome::Fitted(fit) if well_defined && fit.passes(&tol) => Some(
            is_disentangled_representation(&fit.representation, decomposition, tol.tol_lin)?,
        ),
        _ => None,
    };

    let coordinates = coordinate_certificate(f, a, decomposition, &tol)?;
    let (verdict_disentangled, verdict_linear_disentangled) = match &linear_verdict {
        Some(v) => (v.disentangled, v.disentangled),
        None => (well_defined && coordinates.disentangled, false),
    };
    let metrics = metrics(f, &coordinates, options.reference)?;
    Ok(CertificationReport {
        well_defined,
        collisions: classes.collisions(),
        ill_defined_witness: classes.witness,
        equivariance_residual,
        linear,
        linear_verdict,
        coordinates,
        verdict_disentangled,
        verdict_linear_disentangled,
        metrics,
        tolerances: tol,
    })
}
