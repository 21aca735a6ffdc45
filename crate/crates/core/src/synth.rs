//! Explicit qubit tuples realizing a requested invariant.
//!
//! Boundary values come from the edge family
//! `|ψ_k⟩ = sin φ|0⟩ + ξᵏ cos φ|1⟩`, whose invariant is `(sin²φ + ξcos²φ)ⁿ`.
//! Interior values are reached by shrinking a boundary tuple toward zero
//! with [`scale_tuple`], which deforms the second state along a path to a
//! state orthogonal to the first.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::root_of_unity;
use crate::regions::{boundary_polar, disk_radius, edge_point, in_bn_circ, real_window};
use crate::roots::bisect;
use crate::states::{bargmann, overlap_unchecked, qubit_orth, PureState, StateTuple};

/// Residual bound every plan must meet.
pub const PLAN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Boundary,
    Scaled,
    RealAngles,
    DiskMinN,
}

/// Method-specific parameters of a plan.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aux {
    pub n: usize,
    /// Edge parameter `t = sin²φ` of the boundary tuple.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub varphi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    /// Mixing parameter of the deformed second state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_t: Option<f64>,
    /// Real-state angles `φ_j` of `cos φ_j|0⟩ + sin φ_j|1⟩`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationPlan {
    pub target: Complex64,
    pub tuple: StateTuple,
    /// Recomputed from `tuple`.
    pub achieved: Complex64,
    pub residual: f64,
    pub method: Method,
    pub aux: Aux,
}

impl RealizationPlan {
    fn finish(
        target: Complex64,
        tuple: StateTuple,
        method: Method,
        aux: Aux,
        tol: f64,
    ) -> Result<Self> {
        let achieved = bargmann(&tuple);
        let residual = (achieved - target).norm();
        if residual > tol {
            return Err(Error::Tolerance(format!(
                "realization residual {residual:e} exceeds {tol:e}"
            )));
        }
        Ok(Self {
            target,
            tuple,
            achieved,
            residual,
            method,
            aux,
        })
    }
}

fn require_n(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::BadN(n))
    } else {
        Ok(())
    }
}

/// The edge tuple `|ψ_k⟩ = sin φ|0⟩ + ξᵏ cos φ|1⟩`, `k = 0, …, n−1`.
pub fn boundary_tuple(n: usize, varphi: f64) -> Result<StateTuple> {
    require_n(n)?;
    let (s, c) = varphi.sin_cos();
    edge_tuple(n, s, c)
}

fn edge_tuple(n: usize, sin: f64, cos: f64) -> Result<StateTuple> {
    let states = (0..n)
        .map(|k| {
            PureState::new(vec![
                Complex64::new(sin, 0.0),
                root_of_unity(n, k as i64) * cos,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    StateTuple::new(states)
}

/// Boundary tuple whose invariant has phase `phi_target ∈ [0, 2π)`.
///
/// Bisects the edge parameter on `arg z₁(t) = phi_target / n`; the argument of
/// `z₁(t) = t + (1−t)ξ` decreases monotonically from `2π/n` to `0` on `[0, 1]`.
pub fn realize_boundary(n: usize, phi_target: f64) -> Result<RealizationPlan> {
    require_n(n)?;
    if !(0.0..2.0 * PI).contains(&phi_target) {
        return Err(Error::PhaseOutOfRange(phi_target));
    }
    let want = phi_target / n as f64;
    let t = if phi_target == 0.0 {
        1.0
    } else {
        bisect(
            |t| {
                let z1 = edge_point(n, t);
                z1.im.atan2(z1.re) - want
            },
            0.0,
            1.0,
            1e-16,
        )
    };
    let (sin, cos) = (t.sqrt(), (1.0 - t).sqrt());
    let tuple = edge_tuple(n, sin, cos)?;
    let target = Complex64::from_polar(boundary_polar(n, phi_target)?, phi_target);
    let aux = Aux {
        n,
        t: Some(t),
        varphi: Some(sin.asin()),
        ..Aux::default()
    };
    RealizationPlan::finish(target, tuple, Method::Boundary, aux, PLAN_TOL)
}

/// Output of [`scale_tuple`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scaled {
    pub tuple: StateTuple,
    /// Mixing parameter used for the second state; `None` when the input was
    /// returned unchanged (zero invariant, zero scale).
    pub p: Option<f64>,
}

/// Tuple whose invariant is `scale` times that of `input`.
///
/// With `c = ⟨ψ₁|ψ₂⟩⋯⟨ψₙ|ψ₁⟩ ≠ 0`: rephase `|ψ₁⟩` so `⟨ψ₁|ψ₂⟩⟨ψ₂|ψ₃⟩ = r > 0`,
/// take `|ψ₁⊥⟩` rephased so `⟨ψ₁⊥|ψ₃⟩⟨ψ₁|ψ₂⟩` is real, and replace `|ψ₂⟩` by
/// the normalized `p|ψ₁⊥⟩ + (1−p)|ψ₂⟩`. The factor
/// `f(p) = ⟨ψ₁|ψ(p)⟩⟨ψ(p)|ψ₃⟩` is real and continuous with `f(0) = r`,
/// `f(1) = 0`; bisection finds `f(p) = r·scale`.
pub fn scale_tuple(input: &StateTuple, scale: f64) -> Result<Scaled> {
    let n = input.len();
    require_n(n)?;
    if input.dim() != 2 {
        return Err(Error::NotQubit(input.dim()));
    }
    if !(0.0..=1.0).contains(&scale) {
        return Err(Error::Invalid(format!("scale {scale} outside [0, 1]")));
    }
    let s = input.states();
    let c = bargmann(input);
    if c == Complex64::new(0.0, 0.0) {
        return if scale == 0.0 {
            Ok(Scaled {
                tuple: input.clone(),
                p: None,
            })
        } else {
            Err(Error::ZeroInvariant)
        };
    }

    let pair = overlap_unchecked(&s[0], &s[1]) * overlap_unchecked(&s[1], &s[2]);
    let r = pair.norm();
    let psi1 = s[0].with_phase(pair.arg());
    let psi2 = &s[1];
    let psi3 = &s[2];

    let perp0 = qubit_orth(&psi1)?;
    let q = overlap_unchecked(&perp0, psi3) * overlap_unchecked(&psi1, psi2);
    let perp = if q == Complex64::new(0.0, 0.0) {
        perp0
    } else {
        perp0.with_phase(q.arg())
    };

    let mix = |p: f64| -> Result<PureState> {
        let amps = perp
            .amps()
            .iter()
            .zip(psi2.amps())
            .map(|(a, b)| a * p + b * (1.0 - p))
            .collect();
        PureState::normalized(amps)
    };
    let f = |p: f64| -> f64 {
        match mix(p) {
            Ok(m) => (overlap_unchecked(&psi1, &m) * overlap_unchecked(&m, psi3)).re,
            Err(_) => 0.0,
        }
    };

    let target = r * scale;
    let p = if scale == 1.0 {
        0.0
    } else if scale == 0.0 {
        1.0
    } else {
        bisect(|p| f(p) - target, 0.0, 1.0, 1e-17)
    };

    let mut states = Vec::with_capacity(n);
    states.push(psi1.clone());
    states.push(mix(p)?);
    states.extend(s[2..].iter().cloned());
    Ok(Scaled {
        tuple: StateTuple::new(states)?,
        p: Some(p),
    })
}

/// Qubit tuple with invariant `z`, for any `z` in the circulant set.
pub fn realize(z: Complex64, n: usize) -> Result<RealizationPlan> {
    require_n(n)?;
    if !in_bn_circ(z, n)?.member {
        return Err(Error::NotMember {
            re: z.re,
            im: z.im,
            n,
        });
    }
    let mut phi = z.arg().rem_euclid(2.0 * PI);
    if phi >= 2.0 * PI {
        phi = 0.0;
    }
    let edge = realize_boundary(n, phi)?;
    let mut scale = z.norm() / edge.achieved.norm();
    if scale > 1.0 {
        // membership passed, so this is rounding at the boundary
        scale = 1.0;
    }
    let scaled = scale_tuple(&edge.tuple, scale)?;
    let method = if scale == 1.0 {
        Method::Boundary
    } else {
        Method::Scaled
    };
    let aux = Aux {
        scale: Some(scale),
        p_t: scaled.p,
        ..edge.aux
    };
    RealizationPlan::finish(z, scaled.tuple, method, aux, PLAN_TOL)
}

/// Real qubit tuple with a real invariant `c ∈ [−cosⁿ(π/n), 1]`.
///
/// Uses angles `φ_j = (j−1)·α`, whose invariant `cos^{n−1}(α)·cos((n−1)α)`
/// decreases strictly from `1` to `−cosⁿ(π/n)` as `α` runs over `[0, π/n]`.
pub fn realize_real(c: f64, n: usize) -> Result<RealizationPlan> {
    let (lo, hi) = real_window(n)?;
    if !(lo - 1e-12..=hi + 1e-12).contains(&c) {
        return Err(Error::OutOfWindow { c, lo });
    }
    let nf = n as f64;
    let invariant = |a: f64| a.cos().powi(n as i32 - 1) * ((nf - 1.0) * a).cos();
    let alpha = if c >= hi {
        0.0
    } else if c <= lo + 4.0 * f64::EPSILON {
        // the invariant is flat at the endpoint; snap instead of bisecting
        PI / nf
    } else {
        bisect(|a| invariant(a) - c, 0.0, PI / nf, 1e-17)
    };
    let angles: Vec<f64> = (0..n).map(|j| j as f64 * alpha).collect();
    let tuple = StateTuple::new(angles.iter().map(|&a| PureState::real_qubit(a)).collect())?;
    debug_assert!(tuple.states().iter().all(PureState::is_real));
    let aux = Aux {
        n,
        angles: Some(angles),
        ..Aux::default()
    };
    RealizationPlan::finish(Complex64::new(c, 0.0), tuple, Method::RealAngles, aux, 1e-9)
}

/// Smallest `n ≥ 3` with `cosⁿ(π/n) > r`.
pub fn min_disk_n(r: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::OutsideClosure(r));
    }
    let mut n = 3;
    while disk_radius(n)? <= r {
        n += 1;
    }
    Ok(n)
}

/// Realizes any `z` in the open unit disk (or `z = 1`) with the shortest
/// tuple whose inscribed invariant disk contains it.
pub fn realize_in_disk(z: Complex64) -> Result<RealizationPlan> {
    if z == Complex64::new(1.0, 0.0) {
        let tuple = StateTuple::new(vec![PureState::basis(2, 0)?])?;
        let aux = Aux {
            n: 1,
            ..Aux::default()
        };
        return RealizationPlan::finish(z, tuple, Method::DiskMinN, aux, PLAN_TOL);
    }
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::OutsideClosure(r));
    }
    let n = min_disk_n(r)?;
    let plan = realize(z, n)?;
    Ok(RealizationPlan {
        method: Method::DiskMinN,
        ..plan
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::max_imaginarity;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn boundary_tuple_examples() {
        let t = boundary_tuple(5, PI / 2.0).unwrap();
        assert!((bargmann(&t) - c(1.0, 0.0)).norm() < 1e-15);
        let t = boundary_tuple(5, 0.0).unwrap();
        assert!((bargmann(&t) - c(1.0, 0.0)).norm() < 1e-12);
        let t = boundary_tuple(4, PI / 4.0).unwrap();
        assert!((bargmann(&t) - c(-0.25, 0.0)).norm() < 1e-15);
        assert!(matches!(boundary_tuple(2, 0.1), Err(Error::BadN(2))));
    }

    #[test]
    fn realize_boundary_examples() {
        let p = realize_boundary(4, 0.0).unwrap();
        assert_eq!(p.aux.t, Some(1.0));
        assert!((p.achieved - c(1.0, 0.0)).norm() < 1e-15);

        let p = realize_boundary(4, PI).unwrap();
        assert!((p.aux.t.unwrap() - 0.5).abs() < 1e-12);
        assert!((p.achieved - c(-0.25, 0.0)).norm() < 1e-12);

        let p = realize_boundary(3, PI).unwrap();
        assert!((p.achieved - c(-0.125, 0.0)).norm() < 1e-12);
        assert!((p.achieved.arg().rem_euclid(2.0 * PI) - PI).abs() < 1e-12);
    }

    #[test]
    fn scale_examples() {
        let base = boundary_tuple(4, PI / 4.0).unwrap();
        let same = scale_tuple(&base, 1.0).unwrap();
        assert_eq!(same.p, Some(0.0));
        assert!((bargmann(&same.tuple) - c(-0.25, 0.0)).norm() < 1e-15);

        let zero = scale_tuple(&base, 0.0).unwrap();
        assert_eq!(zero.p, Some(1.0));
        assert!(bargmann(&zero.tuple).norm() < 1e-15);

        let part = scale_tuple(&base, 0.4).unwrap();
        assert!((bargmann(&part.tuple) - c(-0.1, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn scale_errors() {
        let zero_tuple = StateTuple::new(vec![
            PureState::basis(2, 0).unwrap(),
            PureState::basis(2, 1).unwrap(),
            PureState::basis(2, 0).unwrap(),
        ])
        .unwrap();
        assert!(matches!(
            scale_tuple(&zero_tuple, 0.5),
            Err(Error::ZeroInvariant)
        ));
        assert_eq!(scale_tuple(&zero_tuple, 0.0).unwrap().tuple, zero_tuple);
        let qutrits = StateTuple::new(vec![PureState::basis(3, 0).unwrap(); 3]).unwrap();
        assert!(matches!(
            scale_tuple(&qutrits, 0.5),
            Err(Error::NotQubit(3))
        ));
    }

    #[test]
    fn scale_random_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let n = rng.random_range(3..=7);
            let t = StateTuple::haar(n, 2, &mut rng).unwrap();
            let s: f64 = rng.random();
            let out = scale_tuple(&t, s).unwrap();
            assert!((bargmann(&out.tuple) - bargmann(&t) * s).norm() < 1e-9);
        }
    }

    #[test]
    fn realize_examples() {
        let p = realize(c(1.0, 0.0), 5).unwrap();
        assert!(p.residual < 1e-12);
        let p = realize(c(0.25, 0.25), 3).unwrap();
        assert!(p.residual < 1e-8);
        assert_eq!(p.tuple.dim(), 2);
        let p = realize(c(-0.1, 0.0), 4).unwrap();
        assert!((p.aux.scale.unwrap() - 0.4).abs() < 1e-9);
        assert!(p.residual < 1e-8);
        let p = realize(c(0.0, 0.0), 6).unwrap();
        assert!(p.achieved.norm() < 1e-15);
        assert!(matches!(
            realize(c(0.0, 0.3), 3),
            Err(Error::NotMember { .. })
        ));
    }

    #[test]
    fn real_examples() {
        let p = realize_real(1.0, 5).unwrap();
        assert!(p.tuple.states().windows(2).all(|w| w[0] == w[1]));

        let p = realize_real(-0.25, 4).unwrap();
        let angles = p.aux.angles.clone().unwrap();
        for (a, w) in angles.iter().zip([0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0]) {
            assert!((a - w).abs() < 1e-15);
        }
        assert!(p.residual < 1e-9);

        let p = realize_real(-0.125, 3).unwrap();
        for (a, w) in p
            .aux
            .angles
            .unwrap()
            .iter()
            .zip([0.0, PI / 3.0, 2.0 * PI / 3.0])
        {
            assert!((a - w).abs() < 1e-15);
        }

        for &v in &[0.7, 0.0, -0.05, 0.999] {
            let p = realize_real(v, 5).unwrap();
            assert!(p.residual <= 1e-9);
            assert!(p.tuple.states().iter().all(PureState::is_real));
        }
        assert!(matches!(
            realize_real(-0.2, 3),
            Err(Error::OutOfWindow { .. })
        ));
        assert!(matches!(
            realize_real(1.1, 3),
            Err(Error::OutOfWindow { .. })
        ));
    }

    #[test]
    fn disk_examples() {
        let p = realize_in_disk(c(0.0, 0.0)).unwrap();
        assert_eq!(p.aux.n, 3);
        assert_eq!(p.method, Method::DiskMinN);
        let p = realize_in_disk(c(0.0, 0.2)).unwrap();
        assert_eq!(p.aux.n, 4);
        assert!(p.residual < 1e-8);
        assert_eq!(min_disk_n(0.9).unwrap(), 47);
        let p = realize_in_disk(c(1.0, 0.0)).unwrap();
        assert_eq!(p.aux.n, 1);
        assert!(matches!(
            realize_in_disk(c(0.0, 1.0)),
            Err(Error::OutsideClosure(_))
        ));
        assert!(matches!(
            realize_in_disk(c(1.1, 0.0)),
            Err(Error::OutsideClosure(_))
        ));
    }

    #[test]
    fn max_imaginarity_realized() {
        for n in 3..=8 {
            let m = max_imaginarity(n).unwrap();
            let t = boundary_tuple(n, m.t_star.sqrt().asin()).unwrap();
            assert!((bargmann(&t).im.abs() - m.i_n).abs() < 1e-12);
        }
    }
}
