//! Pure states, state tuples and the cyclic overlap product.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::NORM_TOL;

/// Unit-norm complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that must already be normalized to within `1e-10`.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::Invalid(format!(
                "pure states need dimension >= 2, got {}",
                amps.len()
            )));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amps })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::new(amps.into_iter().map(|a| a / norm).collect())
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::normalized(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::Invalid(format!(
                "basis index {k} out of range for dim {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    /// `cos θ|0⟩ + sin θ|1⟩`.
    pub fn real_qubit(theta: f64) -> Self {
        Self {
            amps: vec![
                Complex64::new(theta.cos(), 0.0),
                Complex64::new(theta.sin(), 0.0),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let p = Complex64::from_polar(1.0, theta);
        Self {
            amps: self.amps.iter().map(|a| a * p).collect(),
        }
    }

    /// `U|ψ⟩` for a unitary `u`.
    pub fn apply(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.cols() != self.dim() || u.rows() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: u.cols(),
            });
        }
        Self::new(u.mul_vec(&self.amps))
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj())
    }

    pub fn is_real(&self) -> bool {
        self.amps.iter().all(|a| a.im == 0.0)
    }
}

/// Ordered list of pure states sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTuple {
    states: Vec<PureState>,
}

impl StateTuple {
    pub fn new(states: Vec<PureState>) -> Result<Self> {
        let first = states.first().ok_or(Error::BadN(0))?;
        let dim = first.dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { states })
    }

    /// `n` independent Haar-random states of dimension `dim`.
    pub fn haar<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Result<Self> {
        let states = (0..n)
            .map(|_| haar_state(dim, rng))
            .collect::<Result<Vec<_>>>()?;
        Self::new(states)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn into_states(self) -> Vec<PureState> {
        self.states
    }

    /// State at a 1-based index.
    pub fn get(&self, j: usize) -> &PureState {
        &self.states[j - 1]
    }

    /// The tuple started at 1-based index `k`: `(ψ_k, ψ_{k⊕1}, …)`.
    pub fn cyclic_shift(&self, k: usize) -> Self {
        let n = self.len();
        let states = (0..n)
            .map(|l| self.get(cyc(k, l as i64, n)).clone())
            .collect();
        Self { states }
    }

    /// Applies one unitary to every state.
    pub fn apply(&self, u: &ComplexMatrix) -> Result<Self> {
        let states = self
            .states
            .iter()
            .map(|s| s.apply(u))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { states })
    }
}

/// Cyclic index arithmetic on `1..=n`: `((j − 1 + k) mod n) + 1`.
pub fn cyc(j: usize, k: i64, n: usize) -> usize {
    assert!(n > 0 && (1..=n).contains(&j), "index {j} outside 1..={n}");
    ((j as i64 - 1 + k).rem_euclid(n as i64) + 1) as usize
}

/// `⟨a|b⟩`.
pub fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Bargmann invariant `Π_j ⟨ψ_j|ψ_{j⊕1}⟩`; one for a single state.
pub fn bargmann(t: &StateTuple) -> Complex64 {
    let n = t.len();
    if n == 1 {
        return Complex64::new(1.0, 0.0);
    }
    (1..=n)
        .map(|j| overlap_unchecked(t.get(j), t.get(cyc(j, 1, n))))
        .product()
}

pub(crate) fn overlap_unchecked(a: &PureState, b: &PureState) -> Complex64 {
    a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum()
}

/// `Tr[ψ₁ψ₂⋯ψₙ]` by multiplying projectors, independent of [`bargmann`].
pub fn bargmann_trace_oracle(t: &StateTuple) -> Complex64 {
    let mut acc = t.states[0].projector();
    for s in &t.states[1..] {
        acc = &acc * &s.projector();
    }
    acc.trace()
}

/// Haar-random pure state: a normalized vector of independent standard
/// complex Gaussians.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::Invalid(format!(
            "haar_state needs dim >= 2, got {dim}"
        )));
    }
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr > 1e-300 {
            return PureState::normalized(amps);
        }
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    let amps = a
        .amps
        .iter()
        .flat_map(|x| b.amps.iter().map(move |y| x * y))
        .collect();
    PureState { amps }
}

/// Tuple of pairwise tensor products `(ψ_j ⊗ φ_j)_j`.
pub fn tensor_tuple(a: &StateTuple, b: &StateTuple) -> Result<StateTuple> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    StateTuple::new(
        a.states
            .iter()
            .zip(&b.states)
            .map(|(x, y)| tensor(x, y))
            .collect(),
    )
}

/// Orthogonal qubit state with the fixed convention `(α, β) ↦ (−β̄, ᾱ)`.
pub fn qubit_orth(a: &PureState) -> Result<PureState> {
    if a.dim() != 2 {
        return Err(Error::NotQubit(a.dim()));
    }
    let (alpha, beta) = (a.amps[0], a.amps[1]);
    Ok(PureState {
        amps: vec![-beta.conj(), alpha.conj()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ket0() -> PureState {
        PureState::basis(2, 0).unwrap()
    }
    fn ket1() -> PureState {
        PureState::basis(2, 1).unwrap()
    }
    fn plus() -> PureState {
        PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }
    fn y_plus() -> PureState {
        PureState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]).unwrap()
    }

    #[test]
    fn cyc_examples() {
        assert_eq!(cyc(3, 1, 3), 1);
        assert_eq!(cyc(1, 0, 5), 1);
        assert_eq!(cyc(1, -1, 4), 4);
        assert_eq!(cyc(2, -7, 3), 1);
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(overlap(&ket0(), &ket0()).unwrap(), c(1.0, 0.0));
        assert_eq!(overlap(&ket0(), &ket1()).unwrap(), c(0.0, 0.0));
        let o = overlap(&plus(), &y_plus()).unwrap();
        assert!((o - c(0.5, 0.5)).norm() < 1e-15);
        let q = PureState::basis(3, 0).unwrap();
        assert!(matches!(
            overlap(&ket0(), &q),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn bargmann_examples_agree_with_trace() {
        let cases = [
            (vec![ket0(), ket0(), ket0()], c(1.0, 0.0)),
            (vec![ket0(), ket1(), ket0()], c(0.0, 0.0)),
            (vec![ket0(), plus(), y_plus()], c(0.25, 0.25)),
            (vec![ket0(), ket0()], c(1.0, 0.0)),
        ];
        for (states, want) in cases {
            let t = StateTuple::new(states).unwrap();
            assert!((bargmann(&t) - want).norm() < 1e-15);
            assert!((bargmann_trace_oracle(&t) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn single_state_invariant_is_one() {
        let t = StateTuple::new(vec![plus()]).unwrap();
        assert_eq!(bargmann(&t), c(1.0, 0.0));
    }

    #[test]
    fn tuple_rejects_mixed_dims() {
        let r = StateTuple::new(vec![ket0(), PureState::basis(3, 1).unwrap()]);
        assert!(matches!(
            r,
            Err(Error::DimMismatch {
                expected: 2,
                found: 3
            })
        ));
        assert!(matches!(StateTuple::new(vec![]), Err(Error::BadN(0))));
    }

    #[test]
    fn haar_is_normalized_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(42);
        let mut b = ChaCha8Rng::seed_from_u64(42);
        let s = haar_state(2, &mut a).unwrap();
        assert_eq!(s, haar_state(2, &mut b).unwrap());
        let norm: f64 = s.amps().iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_fidelity_means() {
        for (dim, want) in [(2, 0.5), (4, 0.25)] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let zero = PureState::basis(dim, 0).unwrap();
            let samples = 100_000;
            let mean: f64 = (0..samples)
                .map(|_| {
                    overlap(&haar_state(dim, &mut rng).unwrap(), &zero)
                        .unwrap()
                        .norm_sqr()
                })
                .sum::<f64>()
                / samples as f64;
            assert!((mean - want).abs() < 0.01, "dim {dim}: {mean}");
        }
    }

    #[test]
    fn tensor_examples() {
        let t = tensor(&ket0(), &ket0());
        assert_eq!(
            t.amps(),
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
        let t = tensor(&plus(), &ket1());
        let want = [0.0, FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2];
        for (got, w) in t.amps().iter().zip(want) {
            assert!((got - c(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_overlap_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s: Vec<PureState> = (0..4).map(|_| haar_state(2, &mut rng).unwrap()).collect();
            let lhs = overlap(&tensor(&s[0], &s[1]), &tensor(&s[2], &s[3])).unwrap();
            let rhs = overlap(&s[0], &s[2]).unwrap() * overlap(&s[1], &s[3]).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn qubit_orth_examples() {
        assert_eq!(
            qubit_orth(&ket0()).unwrap().amps(),
            &[c(-0.0, -0.0), c(1.0, -0.0)]
        );
        let o = qubit_orth(&plus()).unwrap();
        assert!((o.amps()[0] - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((o.amps()[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = haar_state(2, &mut rng).unwrap();
            assert!(overlap(&a, &qubit_orth(&a).unwrap()).unwrap().norm() < 1e-12);
        }
        assert!(matches!(
            qubit_orth(&PureState::basis(3, 0).unwrap()),
            Err(Error::NotQubit(3))
        ));
    }

    #[test]
    fn cyclic_shift_reorders() {
        let t = StateTuple::new(vec![ket0(), ket1(), plus()]).unwrap();
        let s = t.cyclic_shift(2);
        assert_eq!(s.states(), &[ket1(), plus(), ket0()]);
    }
}
