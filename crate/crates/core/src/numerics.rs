//! Small dense complex linear algebra.
//!
//! Everything here works on square matrices of dimension at most
//! [`MAX_DIM`]. The Hermitian eigensolver is a cyclic complex Jacobi
//! iteration, which at these sizes is both simple and accurate to a few
//! ulps in every eigenvalue relative to the matrix norm.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 8;

/// Relative tolerance for treating a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues below `-PSD_TOL` make a matrix "not PSD"; those in
/// `[-PSD_TOL, 0)` are clipped to zero.
pub const PSD_TOL: f64 = 1e-10;

/// Eigenvalues at or below this fraction of the largest one are numerical
/// zeros when taking square roots.
pub const SUPPORT_FLOOR: f64 = 1e-14;

const MAX_SWEEPS: usize = 64;

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(*d, 0.0);
        }
        m
    }

    /// Build from row slices; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Outer product `|v><w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        assert_eq!(v.len(), w.len(), "outer product of unequal lengths");
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * w[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "hadamard product of unequal dims");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_mn |A_mn - conj(A_nm)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.check_hermitian().is_ok()
    }

    pub(crate) fn check_hermitian(&self) -> Result<()> {
        let tolerance = HERMITIAN_TOL * self.max_abs();
        let deviation = self.hermiticity_deviation();
        if deviation > tolerance {
            Err(Error::NotHermitian {
                deviation,
                tolerance,
            })
        } else {
            Ok(())
        }
    }

    fn check_dim(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            Err(Error::UnsupportedDimension(self.dim))
        } else {
            Ok(())
        }
    }

    /// `(A + A^dagger) / 2`, exact Hermitian part.
    pub fn hermitian_part(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            m[(i, i)] = C64::new(self[(i, i)].re, 0.0);
            for j in i + 1..self.dim {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    /// `U^dagger A U` for unitary `U`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(&u.adjoint() * self) * u
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product of unequal dims");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum of unequal dims");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference of unequal dims");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.4e}{:+.4e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigendecomposition `A = V diag(values) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let diag = ComplexMatrix::from_real_diagonal(&self.values);
        &(&self.vectors * &diag) * &self.vectors.adjoint()
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    a.check_dim()?;
    a.check_hermitian()?;
    Ok(jacobi(a.hermitian_part()))
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(a).map(|e| e.values)
}

fn off_diagonal_norm_sqr(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

// Cyclic Jacobi. Each step first rotates the phase of a_pq away with a
// diagonal unitary, then applies a real Givens rotation to the 2x2 block.
fn jacobi(mut a: ComplexMatrix) -> HermitianEigen {
    let n = a.dim;
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();
    let threshold = (f64::EPSILON * total).powi(2) * 1e-4;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // U = D R with D = diag(.., conj(phase) at q, ..).
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;

                // A <- A U (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                // A <- U^dagger A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u_pp + vkq * u_qp;
                    v[(k, q)] = vkp * u_pq + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, col)] = v[(k, src)];
        }
    }
    HermitianEigen { values, vectors }
}

fn check_psd(values: &[f64]) -> Result<()> {
    match values.last() {
        Some(&min) if min < -PSD_TOL => Err(Error::NotPsd {
            min_eigenvalue: min,
        }),
        _ => Ok(()),
    }
}

/// Clip an eigenvalue list of a PSD matrix: negatives and numerical zeros
/// become exactly zero.
fn clip_spectrum(values: &[f64]) -> Vec<f64> {
    let top = values.first().copied().unwrap_or(0.0).max(0.0);
    let floor = SUPPORT_FLOOR * top;
    values
        .iter()
        .map(|&x| if x <= floor { 0.0 } else { x })
        .collect()
}

/// Principal square root of a Hermitian positive-semidefinite matrix.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(a)?;
    check_psd(&eig.values)?;
    let roots: Vec<f64> = clip_spectrum(&eig.values)
        .into_iter()
        .map(f64::sqrt)
        .collect();
    let diag = ComplexMatrix::from_real_diagonal(&roots);
    let b = &(&eig.vectors * &diag) * &eig.vectors.adjoint();
    Ok(b.hermitian_part())
}

/// Square roots of the eigenvalues of `rho * rho_tilde`, descending.
///
/// Both inputs must be Hermitian PSD. The product is similar to the
/// Hermitian congruence `sqrt(rho) rho_tilde sqrt(rho)`, which is what gets
/// diagonalised. It is assembled in the eigenbasis of `rho`, restricted to
/// the support of `rho`, so that the null space contributes exact zeros
/// rather than square roots of rounding noise.
pub fn product_spectrum_sqrt(rho: &ComplexMatrix, rho_tilde: &ComplexMatrix) -> Result<Vec<f64>> {
    if rho.dim() != rho_tilde.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: rho_tilde.dim(),
        });
    }
    rho_tilde.check_hermitian()?;
    let n = rho.dim();
    let eig = hermitian_eigen(rho)?;
    check_psd(&eig.values)?;
    let weights = clip_spectrum(&eig.values);
    let support: Vec<usize> = (0..n).filter(|&i| weights[i] > 0.0).collect();

    let mut out = vec![0.0; n];
    if support.is_empty() {
        return Ok(out);
    }

    // Columns of rho_tilde * V for the support vectors.
    let cols: Vec<Vec<C64>> = support.iter().map(|&i| eig.vectors.column(i)).collect();
    let r = support.len();
    let mut k = ComplexMatrix::zeros(r);
    for a in 0..r {
        for b in a..r {
            let mut s = C64::new(0.0, 0.0);
            for row in 0..n {
                let mut tv = C64::new(0.0, 0.0);
                for col in 0..n {
                    tv += rho_tilde[(row, col)] * cols[b][col];
                }
                s += cols[a][row].conj() * tv;
            }
            let w = (weights[support[a]] * weights[support[b]]).sqrt();
            k[(a, b)] = s * w;
            k[(b, a)] = (s * w).conj();
        }
    }
    let mu = jacobi(k.hermitian_part()).values;
    for (slot, m) in out.iter_mut().zip(mu) {
        *slot = m.max(0.0).sqrt();
    }
    out.sort_by(|x, y| y.total_cmp(x));
    Ok(out)
}
