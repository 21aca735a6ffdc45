//! Dense complex linear algebra for small matrices (n up to a few dozen).

use std::f64::consts::PI;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::HERMITIAN_TOL;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-13;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
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

    /// Builds a matrix from a row-major entry list.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch(data.len(), rows * cols));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::SizeMismatch(row.len(), cols));
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Real symmetric convenience constructor used heavily in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
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

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::SizeMismatch(
                self.rows * self.cols,
                other.rows * other.cols,
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |a_ij - b_ij|`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖A − A†‖_max`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Result<Complex64> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap_or(k);
            if a[(pivot, k)].norm() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if pivot != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(pivot, j)];
                    a[(pivot, j)] = tmp;
                }
                det = -det;
            }
            let p = a[(k, k)];
            det *= p;
            for i in k + 1..n {
                let factor = a[(i, k)] / p;
                for j in k..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= factor * v;
                }
            }
        }
        Ok(det)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_hermitian(&self) -> Result<()> {
        self.require_square()?;
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_TOL * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(())
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
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            self.eigenvalues
                .iter()
                .enumerate()
                .map(|(k, &l)| v[(i, k)] * l * v[(j, k)].conj())
                .sum()
        })
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized as `(A + A†)/2` before rotating. Sweeps stop once
/// the off-diagonal Frobenius norm drops below `1e-13·‖A‖_F`.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    a.require_hermitian()?;
    let n = a.rows();
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    let threshold = JACOBI_REL_TOL * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

// Zeroes m[p][q] with the unitary J: J_pp = J_qq = c, J_pq = s·e^{iα},
// J_qp = −s·e^{−iα}, where m[p][q] = |m_pq|·e^{iα}. Applies m ← J†mJ, v ← vJ.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let jpq = phase * s;
    let jqp = -phase.conj() * s;

    let n = m.rows();
    // m ← m J (columns p, q)
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * c;
    }
    // m ← J† m (rows p, q)
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c + mqk * jqp.conj();
        m[(q, k)] = mpk * jpq.conj() + mqk * c;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * c;
    }
}

/// Outcome of a PSD test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdVerdict {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

/// Effective absolute threshold for a relative tolerance.
pub fn scaled_tol(eigenvalues: &[f64], tol: f64) -> f64 {
    let largest = eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
    tol * largest.max(1.0)
}

/// PSD iff the smallest eigenvalue is at least `−tol` (scaled by the largest
/// eigenvalue magnitude when that exceeds one).
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<PsdVerdict> {
    let eig = hermitian_eig(a)?;
    Ok(psd_verdict(&eig.eigenvalues, tol))
}

pub(crate) fn psd_verdict(eigenvalues: &[f64], tol: f64) -> PsdVerdict {
    let min_eigenvalue = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    PsdVerdict {
        psd: min_eigenvalue >= -scaled_tol(eigenvalues, tol),
        min_eigenvalue,
    }
}

/// Factor a PSD matrix as `B†B` with one row of `B` per eigenvalue above `tol`.
///
/// The columns of `B` are vectors whose Gram matrix is `a`.
pub fn psd_factor(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let verdict = psd_verdict(&eig.eigenvalues, tol);
    if !verdict.psd {
        return Err(Error::NotPsd(verdict.min_eigenvalue));
    }
    let cut = scaled_tol(&eig.eigenvalues, tol);
    let kept: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k] > cut)
        .rev()
        .collect();
    let n = a.cols();
    let v = &eig.eigenvectors;
    Ok(ComplexMatrix::from_fn(kept.len(), n, |r, j| {
        let k = kept[r];
        v[(j, k)].conj() * eig.eigenvalues[k].sqrt()
    }))
}

/// Unnormalized discrete Fourier matrix, entry `(j, k) = exp(2πi·jk/n)`.
pub fn fourier_matrix(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |j, k| root_of_unity(n, (j * k) as i64))
}

/// `exp(2πi·k/n)`, with the exponent reduced mod n first for accuracy.
pub fn root_of_unity(n: usize, k: i64) -> Complex64 {
    let r = k.rem_euclid(n as i64);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}
