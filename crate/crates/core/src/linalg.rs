//! Complex linear algebra for 2- and 3-dimensional Hilbert spaces.
//!
//! Everything here is a small `Copy` value type: matrices and vectors carry their
//! dimension (2 or 3) next to a fixed-size backing array. Mixing dimensions is an
//! error for the checked operations ([`ComplexMatrix::matmul`], [`ComplexMatrix::apply`],
//! [`inner`]) and a panic for the operator overloads.
//!
//! [`eig_hermitian`] diagonalizes a Hermitian matrix: the 2×2 case in closed form,
//! the 3×3 case with cyclic complex Jacobi rotations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance used by [`eig_hermitian`] to accept a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this (relative to `max(1, ‖A‖)`).
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 100;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 3 => Ok(()),
        _ => Err(Error::InvalidInput(format!(
            "dimension must be 2 or 3, got {dim}"
        ))),
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// Square complex matrix of dimension 2 or 3, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 9],
}

impl ComplexMatrix {
    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn new(dim: usize, entries: &[C64]) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[3 * i + j] = entries[dim * i + j];
            }
        }
        Ok(m)
    }

    pub fn from_rows2(rows: [[C64; 2]; 2]) -> Self {
        let mut m = Self::zeros(2);
        for (i, row) in rows.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                m.data[3 * i + j] = z;
            }
        }
        m
    }

    pub fn from_rows3(rows: [[C64; 3]; 3]) -> Self {
        let mut m = Self::zeros(3);
        for (i, row) in rows.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                m.data[3 * i + j] = z;
            }
        }
        m
    }

    /// # Panics
    /// If `dim` is not 2 or 3.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3, got {dim}");
        Self {
            dim,
            data: [ZERO; 9],
        }
    }

    /// # Panics
    /// If `dim` is not 2 or 3.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[4 * i] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[C64]) -> Result<Self> {
        check_dim(values.len())?;
        let mut m = Self::zeros(values.len());
        for (i, &z) in values.iter().enumerate() {
            m.data[4 * i] = z;
        }
        Ok(m)
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Result<Self> {
        same_dim(u.dim, v.dim)?;
        let mut m = Self::zeros(u.dim);
        for i in 0..u.dim {
            for j in 0..u.dim {
                m.data[3 * i + j] = u.data[i] * v.data[j].conj();
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(row, col)`.
    ///
    /// # Panics
    /// If either index is out of range.
    pub fn get(&self, row: usize, col: usize) -> C64 {
        assert!(
            row < self.dim && col < self.dim,
            "index ({row}, {col}) out of range"
        );
        self.data[3 * row + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        assert!(
            row < self.dim && col < self.dim,
            "index ({row}, {col}) out of range"
        );
        self.data[3 * row + col] = value;
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.data[3 * i + k] * other.data[3 * k + j];
                }
                out.data[3 * i + j] = acc;
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[3 * j + i] = self.data[3 * i + j].conj();
            }
        }
        out
    }

    /// Matrix-vector product `M|v⟩`.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        same_dim(self.dim, v.dim)?;
        let mut out = ComplexVector::zeros(self.dim);
        for i in 0..self.dim {
            let mut acc = ZERO;
            for k in 0..self.dim {
                acc += self.data[3 * i + k] * v.data[k];
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    /// `⟨u|M|v⟩`.
    pub fn expectation(&self, u: &ComplexVector, v: &ComplexVector) -> Result<C64> {
        inner(u, &self.apply(v)?)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[4 * i]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_dim(self.dim, other.dim)?;
        Ok(self
            .entries()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest `|m_jk - conj(m_kj)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Largest entrywise deviation of `U·U†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = *self * self.dagger();
        prod.max_abs_diff(&Self::identity(self.dim))
            .expect("same dimension")
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Row-major iterator over the `dim * dim` entries.
    pub fn entries(&self) -> impl Iterator<Item = C64> + '_ {
        let n = self.dim;
        (0..n).flat_map(move |i| (0..n).map(move |j| self.data[3 * i + j]))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = *self;
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o = f(*o, *b);
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<C64>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect();
        f.debug_struct("ComplexMatrix")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

impl Add for ComplexMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

/// Matrix product; panics on dimension mismatch (use [`ComplexMatrix::matmul`] for a checked version).
impl Mul for ComplexMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.matmul(&rhs)
            .expect("dimension mismatch in matrix product")
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Mul<C64> for ComplexMatrix {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<ComplexVector> for ComplexMatrix {
    type Output = ComplexVector;
    fn mul(self, rhs: ComplexVector) -> ComplexVector {
        self.apply(&rhs)
            .expect("dimension mismatch in matrix-vector product")
    }
}

/// Complex column vector of dimension 2 or 3.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexVector {
    dim: usize,
    data: [C64; 3],
}

impl ComplexVector {
    pub fn new(entries: &[C64]) -> Result<Self> {
        check_dim(entries.len())?;
        let mut v = Self::zeros(entries.len());
        v.data[..entries.len()].copy_from_slice(entries);
        Ok(v)
    }

    pub fn from_array2(entries: [C64; 2]) -> Self {
        Self {
            dim: 2,
            data: [entries[0], entries[1], ZERO],
        }
    }

    pub fn from_array3(entries: [C64; 3]) -> Self {
        Self {
            dim: 3,
            data: entries,
        }
    }

    /// # Panics
    /// If `dim` is not 2 or 3.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3, got {dim}");
        Self {
            dim,
            data: [ZERO; 3],
        }
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        assert!(index < dim, "basis index {index} out of range");
        v.data[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, index: usize) -> C64 {
        assert!(index < self.dim, "index {index} out of range");
        self.data[index]
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data[..self.dim]
    }

    pub fn norm(&self) -> f64 {
        self.as_slice()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = *self;
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o = f(*o, *b);
        }
        out
    }

    /// Multiplies by a global phase so that the largest-modulus component is real and
    /// positive. Among components within a relative `1e-10` of the maximum the first wins.
    pub fn phase_normalized(&self) -> Self {
        let max = self.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return *self;
        }
        let idx = self
            .as_slice()
            .iter()
            .position(|z| z.norm() >= max * (1.0 - 1e-10))
            .unwrap_or(0);
        let pivot = self.data[idx];
        let mut out = self.scale(pivot.conj() / pivot.norm());
        out.data[idx] = C64::new(out.data[idx].norm(), 0.0);
        out
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ComplexVector")
            .field(&self.as_slice())
            .finish()
    }
}

impl Add for ComplexVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a + b)
    }
}

impl Sub for ComplexVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(&rhs, |a, b| a - b)
    }
}

impl Mul<C64> for ComplexVector {
    type Output = Self;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for ComplexVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

/// Free-function form of [`ComplexMatrix::matmul`].
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)
}

/// Free-function form of [`ComplexMatrix::dagger`].
pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.dagger()
}

/// Free-function form of [`ComplexMatrix::apply`].
pub fn apply(m: &ComplexMatrix, v: &ComplexVector) -> Result<ComplexVector> {
    m.apply(v)
}

/// Inner product `⟨u|v⟩`, antilinear in `u`.
pub fn inner(u: &ComplexVector, v: &ComplexVector) -> Result<C64> {
    same_dim(u.dim, v.dim)?;
    Ok(u.as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Real spectrum and orthonormal eigenvectors of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending and `eigenvectors[n]` belongs to `eigenvalues[n]`.
/// Each eigenvector is phase-normalized (see [`ComplexVector::phase_normalized`]).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<ComplexVector>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ r_n |ψ_n⟩⟨ψ_n|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for (r, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out = out + ComplexMatrix::outer(v, v).expect("same dimension") * *r;
        }
        out
    }

    /// Unitary whose columns are the eigenvectors.
    pub fn basis_matrix(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for (j, v) in self.eigenvectors.iter().enumerate() {
            for i in 0..self.dim() {
                out.set(i, j, v.get(i));
            }
        }
        out
    }

    fn sorted(mut pairs: Vec<(f64, ComplexVector)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (eigenvalues, eigenvectors) = pairs
            .into_iter()
            .map(|(r, v)| (r, v.phase_normalized()))
            .unzip();
        Self {
            eigenvalues,
            eigenvectors,
        }
    }
}

/// Eigendecomposition of a Hermitian 2×2 or 3×3 matrix.
///
/// Fails with [`Error::NotHermitian`] when `|m_jk - conj(m_kj)|` exceeds
/// `1e-10 · max(1, max|m_jk|)`.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenSystem> {
    let scale = m.entries().map(|z| z.norm()).fold(1.0, f64::max);
    let deviation = m.hermitian_deviation();
    if deviation.is_nan() || deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }
    let pairs = match m.dim() {
        2 => eig2(m),
        _ => jacobi3(m)?,
    };
    Ok(EigenSystem::sorted(pairs))
}

fn eig2(m: &ComplexMatrix) -> Vec<(f64, ComplexVector)> {
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    // average the two off-diagonal entries so slight non-Hermiticity is symmetrized
    let b = 0.5 * (m.get(0, 1) + m.get(1, 0).conj());
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    if b.norm() == 0.0 || radius == 0.0 {
        return vec![
            (a, ComplexVector::basis(2, 0)),
            (d, ComplexVector::basis(2, 1)),
        ];
    }
    [mean - radius, mean + radius]
        .into_iter()
        .map(|lambda| {
            let first = ComplexVector::from_array2([b, C64::new(lambda - a, 0.0)]);
            let second = ComplexVector::from_array2([C64::new(lambda - d, 0.0), b.conj()]);
            let v = if first.norm() >= second.norm() {
                first
            } else {
                second
            };
            (lambda, v.normalized().expect("nonzero eigenvector"))
        })
        .collect()
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi for complex Hermitian matrices.
///
/// Each rotation first removes the phase of `a_pq` with `diag(1, e^{-iα})` and then
/// applies the real symmetric rotation that zeroes the now-real off-diagonal entry.
fn jacobi3(m: &ComplexMatrix) -> Result<Vec<(f64, ComplexVector)>> {
    let n = m.dim();
    let mut a = *m;
    for i in 0..n {
        a.set(i, i, C64::new(a.get(i, i).re, 0.0));
        for j in (i + 1)..n {
            let sym = 0.5 * (a.get(i, j) + a.get(j, i).conj());
            a.set(i, j, sym);
            a.set(j, i, sym.conj());
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let tol = JACOBI_TOL * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off_diagonal_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let zeta = (a.get(q, q).re - a.get(p, p).re) / (2.0 * r);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut rot = ComplexMatrix::identity(n);
                rot.set(p, p, C64::new(c, 0.0));
                rot.set(p, q, C64::new(s, 0.0));
                rot.set(q, p, phase.conj() * -s);
                rot.set(q, q, phase.conj() * c);

                a = rot.dagger() * a * rot;
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                for i in 0..n {
                    a.set(i, i, C64::new(a.get(i, i).re, 0.0));
                }
                v = v * rot;
            }
        }
    }

    Ok((0..n)
        .map(|k| {
            let col: Vec<C64> = (0..n).map(|i| v.get(i, k)).collect();
            (
                a.get(k, k).re,
                ComplexVector::new(&col).expect("valid dimension"),
            )
        })
        .collect())
}
