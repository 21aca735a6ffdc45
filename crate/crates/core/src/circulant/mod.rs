//! Circulant Gram matrices `G_z = Σ z_j C_nʲ`.
//!
//! With `ξ = e^{2πi/n}` the eigenvalues of `G_z` are the DFT values
//! `λ_k = Σ_j z_j ξ^{kj}`, so positive semidefiniteness is the linear
//! condition `F z ≥ 0`. [`in_zn`] decides which `z₁` admit a completion
//! `z₂, …, z_{n−2}` satisfying it by solving a small linear program, without
//! reference to the polygon description in [`crate::regions`].

mod simplex;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{root_of_unity, ComplexMatrix};
use crate::{BOUNDARY_BAND, DEFAULT_TOL, HERMITIAN_TOL};

use simplex::LpOutcome;

/// First row `z = (z₀, …, z_{n−1})` of a Hermitian circulant with `z₀ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpec {
    z: Vec<Complex64>,
}

impl CirculantSpec {
    /// Validates `z₀ = 1` and `z_j = conj(z_{n−j})` to `1e-10`.
    pub fn new(z: Vec<Complex64>) -> Result<Self> {
        let n = z.len();
        if n < 2 {
            return Err(Error::BadN(n));
        }
        let head_dev = (z[0] - Complex64::new(1.0, 0.0)).norm();
        if head_dev > HERMITIAN_TOL {
            return Err(Error::Invalid(format!(
                "z0 must be 1 (deviation {head_dev:e})"
            )));
        }
        let dev = (1..n)
            .map(|j| (z[j] - z[n - j].conj()).norm())
            .fold(0.0, f64::max);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotConjugateSymmetric(dev));
        }
        Ok(Self { z })
    }

    /// Builds the spec from `z₁, …, z_{⌊n/2⌋}`, filling the rest by conjugate
    /// symmetry. For even `n` the middle entry must be real.
    pub fn from_half(n: usize, half: &[Complex64]) -> Result<Self> {
        if n < 2 || half.len() != n / 2 {
            return Err(Error::BadN(n));
        }
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        z[0] = Complex64::new(1.0, 0.0);
        for (j, &v) in half.iter().enumerate() {
            z[j + 1] = v;
            z[n - j - 1] = v.conj();
        }
        Self::new(z)
    }

    /// The all-ones spec (`G_z` = all-ones matrix).
    pub fn ones(n: usize) -> Self {
        Self {
            z: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// `z = (1, 0, …, 0)`, the identity.
    pub fn identity(n: usize) -> Self {
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        z[0] = Complex64::new(1.0, 0.0);
        Self { z }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[Complex64] {
        &self.z
    }

    pub fn z1(&self) -> Complex64 {
        self.z[1]
    }

    /// The spec `(z_j ξʲ)_j`; its eigenvalue list is the original shifted by one.
    pub fn rotated(&self) -> Self {
        let n = self.n();
        let z = self
            .z
            .iter()
            .enumerate()
            .map(|(j, &v)| v * root_of_unity(n, j as i64))
            .collect();
        Self { z }
    }

    /// `p·self + (1−p)·other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        Self::new(
            self.z
                .iter()
                .zip(&other.z)
                .map(|(a, b)| a * p + b * (1.0 - p))
                .collect(),
        )
    }
}

/// Dense `G_z` with entry `(i, j) = z_{(j − i) mod n}`.
pub fn to_matrix(s: &CirculantSpec) -> ComplexMatrix {
    let n = s.n();
    ComplexMatrix::from_fn(n, n, |i, j| s.z[(j + n - i) % n])
}

/// `λ_k = Σ_j z_j ξ^{kj}` for `k = 0, …, n−1`, in that order (not sorted).
pub fn eigenvalues(s: &CirculantSpec) -> Result<Vec<f64>> {
    let n = s.n();
    (0..n)
        .map(|k| {
            let lambda: Complex64 =
                s.z.iter()
                    .enumerate()
                    .map(|(j, &zj)| zj * root_of_unity(n, (k * j) as i64))
                    .sum();
            if lambda.im.abs() > HERMITIAN_TOL * n as f64 {
                return Err(Error::NotConjugateSymmetric(lambda.im.abs()));
            }
            Ok(lambda.re)
        })
        .collect()
}

/// Result of the circulant feasibility search for a fixed `z₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub member: bool,
    /// Largest achievable minimum eigenvalue over all completions.
    pub max_min_eigenvalue: f64,
    /// Set when the optimum lies within the boundary band of zero.
    pub boundary: bool,
    /// The optimizing completion; present when `member`.
    pub spec: Option<CirculantSpec>,
}

/// Decides whether `z₁` extends to a PSD circulant Gram matrix.
///
/// The eigenvalues are affine in the free coordinates `Re/Im z_j`
/// (`2 ≤ j < n/2`, plus the real `z_{n/2}` for even `n`), so maximizing the
/// smallest one is a linear program, solved exactly by simplex.
pub fn in_zn(z1: Complex64, n: usize) -> Result<Feasibility> {
    if n < 3 {
        return Err(Error::BadN(n));
    }
    let free = free_coordinates(n);
    let base: Vec<f64> = (0..n)
        .map(|k| 1.0 + 2.0 * (z1 * root_of_unity(n, k as i64)).re)
        .collect();
    // gradient of λ_k with respect to each free coordinate
    let grad: Vec<Vec<f64>> = (0..n)
        .map(|k| free.iter().map(|c| c.coefficient(n, k)).collect())
        .collect();

    // max t s.t. t − Σ grad·p ≤ base; t = t0 + u with u ≥ 0, p = p⁺ − p⁻.
    let t0 = base.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let m = free.len();
    let a: Vec<Vec<f64>> = grad
        .iter()
        .map(|g| {
            let mut row = Vec::with_capacity(1 + 2 * m);
            row.push(1.0);
            row.extend(g.iter().map(|v| -v));
            row.extend(g.iter().copied());
            row
        })
        .collect();
    let b: Vec<f64> = base.iter().map(|v| v - t0).collect();
    let mut c = vec![0.0; 1 + 2 * m];
    c[0] = 1.0;

    let x = match simplex::maximize(&a, &b, &c) {
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Unbounded => {
            return Err(Error::Tolerance(
                "circulant feasibility LP reported unbounded".into(),
            ))
        }
    };
    let params: Vec<f64> = (0..m).map(|i| x[1 + i] - x[1 + m + i]).collect();
    let spec = assemble(n, z1, &free, &params)?;
    let lambda = eigenvalues(&spec)?;
    let achieved = lambda.iter().copied().fold(f64::INFINITY, f64::min);
    let member = achieved >= -DEFAULT_TOL;
    Ok(Feasibility {
        member,
        max_min_eigenvalue: achieved,
        boundary: achieved.abs() <= BOUNDARY_BAND,
        spec: member.then_some(spec),
    })
}

#[derive(Debug, Clone, Copy)]
enum FreeCoordinate {
    Re(usize),
    Im(usize),
    Middle(usize),
}

impl FreeCoordinate {
    fn coefficient(self, n: usize, k: usize) -> f64 {
        let angle = |j: usize| 2.0 * PI * ((k * j) % n) as f64 / n as f64;
        match self {
            FreeCoordinate::Re(j) => 2.0 * angle(j).cos(),
            FreeCoordinate::Im(j) => -2.0 * angle(j).sin(),
            FreeCoordinate::Middle(j) => angle(j).cos(),
        }
    }
}

fn free_coordinates(n: usize) -> Vec<FreeCoordinate> {
    let mut out = Vec::new();
    for j in 2..=(n - 1) / 2 {
        out.push(FreeCoordinate::Re(j));
        out.push(FreeCoordinate::Im(j));
    }
    if n.is_multiple_of(2) && n >= 4 {
        out.push(FreeCoordinate::Middle(n / 2));
    }
    out
}

fn assemble(
    n: usize,
    z1: Complex64,
    free: &[FreeCoordinate],
    params: &[f64],
) -> Result<CirculantSpec> {
    let mut half = vec![Complex64::new(0.0, 0.0); n / 2];
    half[0] = z1;
    for (c, &v) in free.iter().zip(params) {
        match *c {
            FreeCoordinate::Re(j) => half[j - 1].re = v,
            FreeCoordinate::Im(j) => half[j - 1].im = v,
            FreeCoordinate::Middle(j) => half[j - 1] = Complex64::new(v, 0.0),
        }
    }
    CirculantSpec::from_half(n, &half)
}

/// Nonnegative certificate `a = F⁻¹b` for the edge through `1` and `ξ`.
///
/// `b₀ = 2cos(π/n)`, `b₁ = conj(b_{n−1}) = −cos(π/n) + i·sin(π/n)`, other
/// entries zero, and `a_k = (2/n)(cos(π/n) − cos((2k+1)π/n))`. For any
/// feasible spec, `aᵀλ = 2cos(π/n) − 2(x·cos(π/n) + y·sin(π/n)) ≥ 0` where
/// `z₁ = x + iy`.
pub fn edge_witness(n: usize) -> Result<(Vec<f64>, Vec<Complex64>)> {
    if n < 3 {
        return Err(Error::BadN(n));
    }
    let nf = n as f64;
    let (s, c) = (PI / nf).sin_cos();
    let a = (0..n)
        .map(|k| {
            if k == 0 || k == n - 1 {
                0.0
            } else {
                2.0 / nf * (c - ((2 * k + 1) as f64 * PI / nf).cos())
            }
        })
        .collect();
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    b[0] = Complex64::new(2.0 * c, 0.0);
    b[1] = Complex64::new(-c, s);
    b[n - 1] = b[1].conj();
    Ok((a, b))
}

/// Number of eigenvalues above `tol`; errors if `G_z` is not PSD.
pub fn boundary_rank(s: &CirculantSpec, tol: f64) -> Result<usize> {
    let lambda = eigenvalues(s)?;
    let min = lambda.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tol {
        return Err(Error::NotPsd(min));
    }
    Ok(lambda.iter().filter(|&&l| l > tol).count())
}
