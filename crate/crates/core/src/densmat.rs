//! Dense complex matrices and the bipartite state functionals built on them:
//! partial trace, partial transpose, realignment, trace norm, purity,
//! von Neumann entropy and the Schmidt decomposition of pure states.
//!
//! Composite indices are A-major: basis state `|i⟩_A ⊗ |k⟩_B` of an `m ⊗ n`
//! system sits at row `i·n + k`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entrywise deviation from Hermiticity accepted on input.
pub const HERM_TOL: f64 = 1e-10;
/// Accepted deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted for a positive semidefinite input.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this contribute nothing to entropies (`0·log 0 = 0`).
pub const EIG_FLOOR: f64 = 1e-12;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = Complex64::new(1.0, 0.0);
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out[(i, i)] = Complex64::new(d, 0.0);
        }
        out
    }

    /// The projector `|ψ⟩⟨ψ|` (no normalization applied).
    pub fn outer(psi: &[Complex64]) -> Self {
        Self::from_fn(psi.len(), psi.len(), |i, j| psi[i] * psi[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M_ij − conj(M_ji)|`; infinite for non-square input.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Which tensor factor an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A validated density matrix on `C^m ⊗ C^n`: Hermitian, unit trace and
/// positive semidefinite within [`HERM_TOL`], [`TRACE_TOL`] and [`PSD_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteDensityMatrix {
    dim_a: usize,
    dim_b: usize,
    mat: ComplexMatrix,
}

impl BipartiteDensityMatrix {
    pub fn new(mat: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        check_dims(&mat, dim_a, dim_b)?;
        let herm = mat.hermiticity_deviation();
        if herm > HERM_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let eig = hermitian_eigenvalues(&mat)?;
        let min = eig.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { dim_a, dim_b, mat })
    }

    /// Builds `|ψ⟩⟨ψ|` from a normalized amplitude vector.
    pub fn from_pure(psi: &[Complex64], dim_a: usize, dim_b: usize) -> Result<Self> {
        check_normalized(psi)?;
        Self::new(ComplexMatrix::outer(psi), dim_a, dim_b)
    }

    pub(crate) fn from_parts_unchecked(mat: ComplexMatrix, dim_a: usize, dim_b: usize) -> Self {
        debug_assert_eq!(mat.rows(), dim_a * dim_b);
        Self { dim_a, dim_b, mat }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// `min(dim_a, dim_b)`, the `m` of an `m ⊗ n` system with `m ≤ n`.
    pub fn min_dim(&self) -> usize {
        self.dim_a.min(self.dim_b)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// The same state with the roles of A and B exchanged.
    pub fn swap_subsystems(&self) -> Self {
        let (m, n) = (self.dim_a, self.dim_b);
        let perm = |idx: usize| (idx % n) * m + idx / n;
        let mut out = ComplexMatrix::zeros(m * n, m * n);
        for r in 0..m * n {
            for c in 0..m * n {
                out[(perm(r), perm(c))] = self.mat[(r, c)];
            }
        }
        Self {
            dim_a: n,
            dim_b: m,
            mat: out,
        }
    }

    /// Returns the state relabelled so that `dim_a ≤ dim_b`, together with
    /// whether a swap took place.
    pub fn oriented(&self) -> (Self, bool) {
        if self.dim_a > self.dim_b {
            (self.swap_subsystems(), true)
        } else {
            (self.clone(), false)
        }
    }

    pub fn partial_trace(&self, traced_out: Subsystem) -> ComplexMatrix {
        partial_trace(&self.mat, self.dim_a, self.dim_b, traced_out)
            .expect("dimensions validated on construction")
    }

    /// Reduced state of subsystem A (`Tr_B ρ`).
    pub fn reduced_a(&self) -> ComplexMatrix {
        self.partial_trace(Subsystem::B)
    }

    /// Reduced state of subsystem B (`Tr_A ρ`).
    pub fn reduced_b(&self) -> ComplexMatrix {
        self.partial_trace(Subsystem::A)
    }

    pub fn partial_transpose_a(&self) -> ComplexMatrix {
        partial_transpose_a(&self.mat, self.dim_a, self.dim_b)
            .expect("dimensions validated on construction")
    }

    pub fn realign(&self) -> ComplexMatrix {
        realign(&self.mat, self.dim_a, self.dim_b).expect("dimensions validated on construction")
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        purity(&self.mat).expect("density matrices are square")
    }
}

fn check_dims(mat: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<()> {
    if dim_a == 0 || dim_b == 0 {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions must be positive, got {dim_a}x{dim_b}"
        )));
    }
    let d = dim_a * dim_b;
    if mat.rows() != d || mat.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "declared {dim_a}x{dim_b} needs a {d}x{d} matrix, got {}x{}",
            mat.rows(),
            mat.cols()
        )));
    }
    Ok(())
}

fn check_normalized(psi: &[Complex64]) -> Result<()> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(norm));
    }
    Ok(())
}

/// Traces out `traced_out`, returning `ρ_A` (`m×m`) when B is traced out and
/// `ρ_B` (`n×n`) when A is.
pub fn partial_trace(
    mat: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    traced_out: Subsystem,
) -> Result<ComplexMatrix> {
    check_dims(mat, dim_a, dim_b)?;
    let n = dim_b;
    Ok(match traced_out {
        Subsystem::B => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..n).map(|k| mat[(i * n + k, j * n + k)]).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(dim_b, dim_b, |k, l| {
            (0..dim_a).map(|i| mat[(i * n + k, i * n + l)]).sum()
        }),
    })
}

/// Transposes the A indices: entry `(i·n+k, j·n+l)` of the result is entry
/// `(j·n+k, i·n+l)` of the input.
pub fn partial_transpose_a(
    mat: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
) -> Result<ComplexMatrix> {
    check_dims(mat, dim_a, dim_b)?;
    let n = dim_b;
    let d = dim_a * dim_b;
    Ok(ComplexMatrix::from_fn(d, d, |r, c| {
        let (i, k) = (r / n, r % n);
        let (j, l) = (c / n, c % n);
        mat[(j * n + k, i * n + l)]
    }))
}

/// Realignment `R(ρ)`: the `m²×n²` matrix with entry `(i·m+j, k·n+l)` equal
/// to `ρ_{(ik),(jl)}`.
pub fn realign(mat: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    check_dims(mat, dim_a, dim_b)?;
    let (m, n) = (dim_a, dim_b);
    Ok(ComplexMatrix::from_fn(m * m, n * n, |r, c| {
        let (i, j) = (r / m, r % m);
        let (k, l) = (c / n, c % n);
        mat[(i * n + k, j * n + l)]
    }))
}

/// Singular values, descending.
pub fn singular_values(mat: &ComplexMatrix) -> Result<Vec<f64>> {
    if mat.rows() == 0 || mat.cols() == 0 {
        return Ok(Vec::new());
    }
    let svd = SVD::try_new(mat.to_nalgebra(), false, false, EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Sum of singular values.
pub fn trace_norm(mat: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(mat)?.iter().sum())
}

/// `Tr(M²) = Σ_ij M_ij M_ji`, real part.
pub fn purity(mat: &ComplexMatrix) -> Result<f64> {
    if !mat.is_square() {
        return Err(Error::NotSquare(mat.rows(), mat.cols()));
    }
    let n = mat.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += mat[(i, j)] * mat[(j, i)];
        }
    }
    Ok(acc.re)
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues descending.
/// Column `k` of `vectors` is the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * self.values[k])
                .sum()
        })
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

fn hermitian_part(mat: &ComplexMatrix) -> Result<DMatrix<Complex64>> {
    if !mat.is_square() {
        return Err(Error::NotSquare(mat.rows(), mat.cols()));
    }
    let dev = mat.hermiticity_deviation();
    if dev > HERM_TOL * mat.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    let m = mat.to_nalgebra();
    Ok((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
}

pub fn hermitian_eigh(mat: &ComplexMatrix) -> Result<HermitianEigen> {
    let h = hermitian_part(mat)?;
    let n = h.nrows();
    if n == 0 {
        return Ok(HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(h, EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = ComplexMatrix::from_nalgebra(&eig.eigenvectors);
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Real spectrum of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(mat: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = hermitian_part(mat)?;
    if h.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut vals: Vec<f64> = SymmetricEigen::try_new(h, EIG_EPS, EIG_MAX_ITER)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?
        .eigenvalues
        .iter()
        .copied()
        .collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// `−Σ λ log λ` in nats over the spectrum of a reduced state.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let vals = hermitian_eigenvalues(rho)?;
    if let Some(&min) = vals.last() {
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
    }
    Ok(vals
        .iter()
        .filter(|&&l| l > EIG_FLOOR)
        .map(|&l| -l * l.ln())
        .sum())
}

/// Schmidt coefficients `μ_1 ≥ μ_2 ≥ … ≥ 0`, `Σ μ_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector(Vec<f64>);

impl SchmidtVector {
    pub const NORM_TOL: f64 = 1e-12;

    /// Validates and sorts `coeffs` into descending order.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidSchmidt("empty coefficient list".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidSchmidt(format!(
                "coefficient {bad} is not a finite nonnegative number"
            )));
        }
        let sum: f64 = coeffs.iter().sum();
        if (sum - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::InvalidSchmidt(format!("coefficients sum to {sum}")));
        }
        coeffs.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(coeffs))
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ μ_i²`, the purity of either reduced state.
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|m| m * m).sum()
    }

    /// Shannon entropy `H(μ) = −Σ μ_i log μ_i` in nats.
    pub fn entropy(&self) -> f64 {
        self.0
            .iter()
            .filter(|&&m| m > 0.0)
            .map(|&m| -m * m.ln())
            .sum()
    }
}

/// Schmidt coefficients of a normalized pure state of `C^m ⊗ C^n`, as the
/// spectrum of `ρ_A`, padded or truncated to exactly `dim_a` entries.
pub fn schmidt_coefficients(
    psi: &[Complex64],
    dim_a: usize,
    dim_b: usize,
) -> Result<SchmidtVector> {
    if psi.len() != dim_a * dim_b {
        return Err(Error::DimensionMismatch(format!(
            "amplitude vector of length {} for a {dim_a}x{dim_b} system",
            psi.len()
        )));
    }
    check_normalized(psi)?;
    let n = dim_b;
    let rho_a = ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
        (0..n).map(|k| psi[i * n + k] * psi[j * n + k].conj()).sum()
    });
    let mut vals: Vec<f64> = hermitian_eigenvalues(&rho_a)?
        .into_iter()
        .map(|l| l.max(0.0))
        .collect();
    vals.resize(dim_a, 0.0);
    let sum: f64 = vals.iter().sum();
    for v in &mut vals {
        *v /= sum;
    }
    SchmidtVector::new(vals)
}

/// Pure-state concurrence `√(2(1 − Σ μ_i²))`.
pub fn pure_concurrence(mu: &SchmidtVector) -> f64 {
    (2.0 * (1.0 - mu.purity())).max(0.0).sqrt()
}
