//! Gram matrices of state tuples and their circulant relatives.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::circulant::CirculantSpec;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, psd_factor, psd_verdict, ComplexMatrix};
use crate::states::{cyc, overlap_unchecked, PureState, StateTuple};
use crate::{DEFAULT_TOL, HERMITIAN_TOL};

/// Hermitian, unit-diagonal, PSD matrix: the Gram matrix of some pure-state tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    m: ComplexMatrix,
}

impl GramMatrix {
    /// Validates Hermiticity and the unit diagonal to `1e-10` and PSD to `1e-9`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_hermitian_unit_diagonal(&m)?;
        let eig = hermitian_eig(&m)?;
        let verdict = psd_verdict(&eig.eigenvalues, DEFAULT_TOL);
        if !verdict.psd {
            return Err(Error::NotPsd(verdict.min_eigenvalue));
        }
        Ok(Self { m })
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Cyclic product `Π_j h_{j, j⊕1}`.
    pub fn bargmann(&self) -> Complex64 {
        cycle_product(&self.m)
    }
}

pub(crate) fn check_hermitian_unit_diagonal(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let diag = (0..m.rows())
        .map(|i| (m[(i, i)] - Complex64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    if diag > HERMITIAN_TOL {
        return Err(Error::NotUnitDiagonal(diag));
    }
    Ok(())
}

fn cycle_product(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    (1..=n).map(|j| m[(j - 1, cyc(j, 1, n) - 1)]).product()
}

/// `G_{ij} = ⟨ψ_i|ψ_j⟩`.
pub fn gram_of(t: &StateTuple) -> GramMatrix {
    let n = t.len();
    let s = t.states();
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            overlap_unchecked(&s[i], &s[j])
        }
    });
    GramMatrix { m }
}

/// Pure states whose Gram matrix is `g`, in dimension `max(rank g, 2)`.
pub fn realize(g: &GramMatrix) -> Result<StateTuple> {
    let b = psd_factor(&g.m, DEFAULT_TOL)?;
    let dim = b.rows().max(2);
    let states = (0..g.n())
        .map(|j| {
            let mut amps = b.column(j);
            amps.resize(dim, Complex64::new(0.0, 0.0));
            // columns have unit norm up to the dropped eigenvalue mass
            PureState::normalized(amps)
        })
        .collect::<Result<Vec<_>>>()?;
    StateTuple::new(states)
}

/// Entrywise product; the result is re-validated as a Gram matrix.
pub fn hadamard(g: &GramMatrix, h: &GramMatrix) -> Result<GramMatrix> {
    if g.n() != h.n() {
        return Err(Error::SizeMismatch(g.n(), h.n()));
    }
    GramMatrix::new(g.m.hadamard(&h.m)?)
}

/// The circulant `C_H` associated with a Hermitian unit-diagonal `h`.
///
/// Phase in `(−π, π]`, with phases within rounding of `−π` taken as `π` so
/// that negative reals carrying a stray `±0` imaginary part agree.
fn principal_phase(v: Complex64) -> f64 {
    let a = v.arg();
    if a < -PI + 1e-12 {
        PI
    } else {
        a
    }
}

/// `z_k` is the geometric mean of the moduli along the k-th cyclic diagonal
/// times `e^{iθ_k}`, with `θ_k` the arithmetic mean of the principal phases
/// (in `(−π, π]`) of the diagonal entries.
///
/// `z_k` is computed for `k ≤ n/2` and mirrored as `z_{n−k} = conj(z_k)`,
/// which is what the direct average gives except when an entry is a negative
/// real (its conjugate also has phase `π`). On the middle diagonal of even
/// `n` the entries come in conjugate pairs, so `θ` is `0` unless negative
/// reals are present; the value is projected to the real `±` geometric mean
/// signed by `cos θ`. A circulant input therefore returns its own spec, and
/// because `n·θ₁` is the phase sum itself, `z₁ⁿ` equals the cyclic product of
/// `h` with no branch correction.
pub fn associate_circulant(h: &ComplexMatrix) -> Result<CirculantSpec> {
    check_hermitian_unit_diagonal(h)?;
    let n = h.rows();
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let mut z = vec![Complex64::new(1.0, 0.0); n];
    for k in 1..=n / 2 {
        let diag: Vec<Complex64> = (0..n).map(|l| h[(l, (l + k) % n)]).collect();
        z[k] = if diag.iter().any(|v| v.norm() == 0.0) {
            Complex64::new(0.0, 0.0)
        } else {
            let modulus = (diag.iter().map(|v| v.norm().ln()).sum::<f64>() / n as f64).exp();
            let theta = diag.iter().map(|&v| principal_phase(v)).sum::<f64>() / n as f64;
            if 2 * k == n {
                Complex64::new(modulus.copysign(theta.cos()), 0.0)
            } else {
                Complex64::from_polar(modulus, theta)
            }
        };
        z[n - k] = z[k].conj();
    }
    let spec = CirculantSpec::new(z)?;
    let want = cycle_product(h);
    let got = spec.z1().powi(n as i32);
    if (got - want).norm() > 1e-10 * want.norm().max(1.0) {
        return Err(Error::Tolerance(format!(
            "associated circulant invariant {got} differs from {want}"
        )));
    }
    Ok(spec)
}

/// Hadamard product of the Gram matrices of all cyclic shifts of `t`.
///
/// The result is circulant with `z_k = Π_j ⟨ψ_j|ψ_{j⊕k}⟩`; in particular
/// `z₁` is the Bargmann invariant of `t`.
pub fn circulantize_shifts(t: &StateTuple) -> Result<CirculantSpec> {
    let n = t.len();
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let mut z = vec![Complex64::new(1.0, 0.0); n];
    for (k, zk) in z.iter_mut().enumerate().skip(1) {
        *zk = (1..=n)
            .map(|j| overlap_unchecked(t.get(j), t.get(cyc(j, k as i64, n))))
            .product();
    }
    // the mirrored entries are exact conjugates mathematically; pin them
    for k in 1..n {
        if k > n - k {
            z[k] = z[n - k].conj();
        } else if k == n - k {
            z[k] = Complex64::new(z[k].re, 0.0);
        }
    }
    CirculantSpec::new(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::{eigenvalues, to_matrix};
    use crate::states::bargmann;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ket0() -> PureState {
        PureState::basis(2, 0).unwrap()
    }
    fn plus() -> PureState {
        PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }
    fn y_plus() -> PureState {
        PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap()
    }
    fn mub_triple() -> StateTuple {
        StateTuple::new(vec![ket0(), plus(), y_plus()]).unwrap()
    }

    #[test]
    fn gram_examples() {
        let g = gram_of(&StateTuple::new(vec![ket0(), PureState::basis(2, 1).unwrap()]).unwrap());
        assert_eq!(g.matrix(), &ComplexMatrix::identity(2));

        let g = gram_of(&StateTuple::new(vec![ket0(), plus()]).unwrap());
        assert!((g.get(0, 1) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let g = gram_of(&mub_triple());
        assert!((g.get(0, 1) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((g.get(1, 2) - Complex64::from_polar(FRAC_1_SQRT_2, PI / 4.0)).norm() < 1e-15);
        assert!((g.get(0, 2) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((g.bargmann() - c(0.25, 0.25)).norm() < 1e-15);
    }

    #[test]
    fn gram_validation_errors() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(matches!(GramMatrix::new(m), Err(Error::NotPsd(_))));
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(GramMatrix::new(m), Err(Error::NotUnitDiagonal(_))));
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.1], &[0.0, 1.0]]).unwrap();
        assert!(matches!(GramMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn realize_examples() {
        let g = GramMatrix::new(ComplexMatrix::identity(3)).unwrap();
        let t = realize(&g).unwrap();
        assert_eq!(t.dim(), 3);
        assert!(gram_of(&t).matrix().max_abs_diff(g.matrix()) < 1e-8);

        let g =
            GramMatrix::new(ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.5, 1.0]]).unwrap())
                .unwrap();
        let t = realize(&g).unwrap();
        assert!((gram_of(&t).get(0, 1) - c(0.5, 0.0)).norm() < 1e-8);

        // rank-one input still yields qubits
        let g = GramMatrix::new(ComplexMatrix::from_fn(3, 3, |_, _| c(1.0, 0.0))).unwrap();
        let t = realize(&g).unwrap();
        assert_eq!(t.dim(), 2);
        assert!(gram_of(&t).matrix().max_abs_diff(g.matrix()) < 1e-8);
    }

    #[test]
    fn hadamard_examples() {
        let g = gram_of(&mub_triple());
        let ones = GramMatrix::new(ComplexMatrix::from_fn(3, 3, |_, _| c(1.0, 0.0))).unwrap();
        assert!(
            hadamard(&g, &ones)
                .unwrap()
                .matrix()
                .max_abs_diff(g.matrix())
                < 1e-15
        );

        let h = gram_of(&StateTuple::new(vec![ket0(), plus()]).unwrap());
        let sq = hadamard(&h, &h).unwrap();
        assert!((sq.get(0, 1) - c(0.5, 0.0)).norm() < 1e-15);

        let two = GramMatrix::new(ComplexMatrix::identity(2)).unwrap();
        assert!(matches!(hadamard(&g, &two), Err(Error::SizeMismatch(3, 2))));
    }

    #[test]
    fn associate_circulant_examples() {
        let s = associate_circulant(gram_of(&mub_triple()).matrix()).unwrap();
        let want = Complex64::from_polar(FRAC_1_SQRT_2, PI / 12.0);
        assert!((s.z1() - want).norm() < 1e-15);
        assert!((s.z1().powi(3) - c(0.25, 0.25)).norm() < 1e-15);

        // circulant input is a fixed point
        let spec = CirculantSpec::from_half(5, &[c(0.3, 0.2), c(-0.1, 0.15)]).unwrap();
        let back = associate_circulant(&to_matrix(&spec)).unwrap();
        for (a, b) in back.z().iter().zip(spec.z()) {
            assert!((a - b).norm() < 1e-14);
        }

        // negative-real and cut-straddling diagonals are fixed points too
        for half in [
            vec![c(0.0, 0.5), c(-0.3, 0.0)],
            vec![c(-0.4, 0.0), c(0.1, 0.0)],
            vec![c(-0.4, 1e-9), c(0.2, -0.1), c(-0.2, 0.0)],
        ] {
            let n = 2 * half.len();
            let spec = CirculantSpec::from_half(n, &half).unwrap();
            let back = associate_circulant(&to_matrix(&spec)).unwrap();
            for (a, b) in back.z().iter().zip(spec.z()) {
                assert!((a - b).norm() < 1e-14, "{a} vs {b}");
            }
        }

        let r = 0.4;
        let m = ComplexMatrix::from_real_rows(&[&[1.0, r, r], &[r, 1.0, r], &[r, r, 1.0]]).unwrap();
        assert!((associate_circulant(&m).unwrap().z1() - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn associate_circulant_negative_entries_stay_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[
            &[1.0, -0.5, 0.2, 0.1],
            &[-0.5, 1.0, 0.3, -0.6],
            &[0.2, 0.3, 1.0, 0.4],
            &[0.1, -0.6, 0.4, 1.0],
        ])
        .unwrap();
        let s = associate_circulant(&m).unwrap();
        assert_eq!(s.z()[2].im, 0.0);
        let prod = -0.5 * 0.3 * 0.4 * 0.1;
        assert!((s.z1().powi(4) - c(prod, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn associate_circulant_zero_entry() {
        let m =
            ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.5], &[0.0, 1.0, 0.5], &[0.5, 0.5, 1.0]])
                .unwrap();
        let s = associate_circulant(&m).unwrap();
        assert_eq!(s.z1(), c(0.0, 0.0));
    }

    #[test]
    fn shifts_examples() {
        let t = StateTuple::new(vec![plus(); 4]).unwrap();
        let s = circulantize_shifts(&t).unwrap();
        assert!(s.z().iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-15));

        let s = circulantize_shifts(&mub_triple()).unwrap();
        assert!((s.z1() - c(0.25, 0.25)).norm() < 1e-15);
        assert!((s.z()[2] - c(0.25, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn shifts_match_hadamard_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = StateTuple::haar(4, 2, &mut rng).unwrap();
        let spec = circulantize_shifts(&t).unwrap();
        let mut acc = gram_of(&t.cyclic_shift(1)).into_matrix();
        for k in 2..=4 {
            acc = acc.hadamard(gram_of(&t.cyclic_shift(k)).matrix()).unwrap();
        }
        assert!(acc.max_abs_diff(&to_matrix(&spec)) < 1e-10);
        assert!(eigenvalues(&spec).unwrap().iter().all(|&l| l >= -1e-9));
        assert_eq!(spec.z1(), bargmann(&t));
    }

    #[test]
    fn hadamard_is_tensor_gram() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = StateTuple::haar(4, 2, &mut rng).unwrap();
            let b = StateTuple::haar(4, 2, &mut rng).unwrap();
            let h = hadamard(&gram_of(&a), &gram_of(&b)).unwrap();
            let ab = crate::states::tensor_tuple(&a, &b).unwrap();
            assert!(h.matrix().max_abs_diff(gram_of(&ab).matrix()) < 1e-10);
        }
    }
}
