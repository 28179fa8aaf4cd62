//! Dense helpers shared by the representation and certification code.

use alloc::vec::Vec;
use nalgebra::{Complex, DMatrix, SymmetricEigen};

pub type RMatrix = DMatrix<f64>;
pub type CMatrix = DMatrix<Complex<f64>>;
pub type C64 = Complex<f64>;

const MIN_REL_RANK_TOL: f64 = 1e-6;

pub fn frobenius(m: &CMatrix) -> f64 {
    libm::sqrt(m.iter().map(|z| z.norm_sqr()).sum::<f64>())
}

pub fn frobenius_real(m: &RMatrix) -> f64 {
    libm::sqrt(m.iter().map(|x| x * x).sum::<f64>())
}

pub fn modulus(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

pub fn complexify(m: &RMatrix) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Largest absolute imaginary part.
pub fn max_imag(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

pub fn real_part(m: &CMatrix) -> RMatrix {
    m.map(|z| z.re)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues in decreasing order.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let d = m.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(d, d);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Orthonormal basis of the column space of `m`; directions whose singular
/// value falls below `rel_tol` times the largest are discarded. The relative
/// cutoff never drops below `1e-6`, since the Gram eigenvalues it compares
/// carry rounding error near `ε·σ_max²`.
pub fn range_basis(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let gram = m * m.adjoint();
    let (values, vectors) = hermitian_eigen(&gram);
    let top = values.first().copied().unwrap_or(0.0).max(0.0);
    if top <= f64::MIN_POSITIVE {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let rel = rel_tol.max(MIN_REL_RANK_TOL);
    let cutoff = rel * rel * top;
    let rank = values.iter().take_while(|&&v| v > cutoff).count();
    vectors.columns(0, rank).into_owned()
}

/// Range of an idempotent matrix. Nonzero singular values of an idempotent
/// are at least one, so directions with singular value below one half are
/// rounding noise.
pub fn projector_range(p: &CMatrix) -> CMatrix {
    let gram = p * p.adjoint();
    eigenspace_above(&gram, 0.25)
}

/// Eigenvectors of a Hermitian matrix whose eigenvalue is at least
/// `threshold`.
pub fn eigenspace_above(m: &CMatrix, threshold: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let k = values.iter().take_while(|&&v| v >= threshold).count();
    vectors.columns(0, k).into_owned()
}

pub fn orthogonal_projector(basis: &CMatrix) -> CMatrix {
    basis * basis.adjoint()
}

/// Intersection of subspaces given by orthonormal bases: the eigenvalue-one
/// eigenspace of the mean of their orthogonal projectors.
pub fn intersect(bases: &[CMatrix], dim: usize, tol: f64) -> CMatrix {
    if bases.is_empty() {
        return CMatrix::identity(dim, dim);
    }
    let mut mean = CMatrix::zeros(dim, dim);
    for b in bases {
        mean += orthogonal_projector(b);
    }
    mean /= C64::new(bases.len() as f64, 0.0);
    eigenspace_above(&mean, 1.0 - tol)
}

/// Real orthonormal basis of a conjugation-closed subspace given by a complex
/// basis: the span of the real and imaginary parts of its columns.
pub fn realify_basis(basis: &CMatrix, rel_tol: f64) -> CMatrix {
    let (d, k) = basis.shape();
    let mut stacked = RMatrix::zeros(d, 2 * k);
    for j in 0..k {
        for i in 0..d {
            stacked[(i, j)] = basis[(i, j)].re;
            stacked[(i, k + j)] = basis[(i, j)].im;
        }
    }
    complexify(&range_basis_real(&stacked, rel_tol))
}

/// Real counterpart of [`range_basis`].
pub fn range_basis_real(m: &RMatrix, rel_tol: f64) -> RMatrix {
    let gram = m * m.transpose();
    let (values, vectors) = symmetric_eigen_real(&gram);
    let top = values.first().copied().unwrap_or(0.0).max(0.0);
    if top <= f64::MIN_POSITIVE {
        return RMatrix::zeros(m.nrows(), 0);
    }
    let rel = rel_tol.max(MIN_REL_RANK_TOL);
    let cutoff = rel * rel * top;
    let rank = values.iter().take_while(|&&v| v > cutoff).count();
    vectors.columns(0, rank).into_owned()
}

/// `‖BᴴB − I‖_F` for a column-concatenated basis.
pub fn orthonormality_defect(basis: &CMatrix) -> f64 {
    let k = basis.ncols();
    frobenius(&(basis.adjoint() * basis - CMatrix::identity(k, k)))
}

/// Hermitian positive-definite square root and its inverse.
pub fn sqrt_and_inverse(m: &CMatrix) -> (CMatrix, CMatrix) {
    let (values, vectors) = hermitian_eigen(m);
    let d = m.nrows();
    let mut root = CMatrix::zeros(d, d);
    let mut inv = CMatrix::zeros(d, d);
    for (i, &v) in values.iter().enumerate() {
        let v = v.max(f64::MIN_POSITIVE);
        let col = vectors.column(i);
        let outer = col * col.adjoint();
        root += &outer * C64::new(libm::sqrt(v), 0.0);
        inv += &outer * C64::new(1.0 / libm::sqrt(v), 0.0);
    }
    (root, inv)
}

pub fn concat_columns(blocks: &[CMatrix], rows: usize) -> CMatrix {
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, total);
    let mut at = 0;
    for b in blocks {
        out.columns_mut(at, b.ncols()).copy_from(b);
        at += b.ncols();
    }
    out
}

/// Column-major Kronecker product with lexicographic basis `e_i ⊗ f_j`.
pub fn kronecker(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigen-decomposition of a real symmetric matrix, decreasing eigenvalues.
pub fn symmetric_eigen_real(m: &RMatrix) -> (Vec<f64>, RMatrix) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let d = m.nrows();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = RMatrix::zeros(d, d);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Moore–Penrose pseudo-inverse of a real symmetric positive semidefinite
/// matrix, with the rank it used.
pub fn psd_pseudo_inverse(m: &RMatrix, rel_tol: f64) -> (RMatrix, usize) {
    let (values, vectors) = symmetric_eigen_real(m);
    let d = m.nrows();
    let top = values.first().copied().unwrap_or(0.0);
    let mut inv = RMatrix::zeros(d, d);
    let mut rank = 0;
    if top <= 0.0 {
        return (inv, 0);
    }
    for (i, &v) in values.iter().enumerate() {
        if v > rel_tol * top {
            rank += 1;
            let col = vectors.column(i);
            inv += (col * col.transpose()) / v;
        }
    }
    (inv, rank)
}
