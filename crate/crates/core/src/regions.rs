//! Closed-form geometry of the regular polygon `P_n` and its image under
//! `z ↦ zⁿ`, the set of Bargmann invariants reachable with circulant Gram
//! matrices.
//!
//! `P_n` is the filled regular n-gon centered at the origin with a vertex at
//! `1`. Its edge through `1` and `ξ = e^{2πi/n}` lies on the line
//! `x·cos(π/n) + y·sin(π/n) = cos(π/n)`; the other edges are rotations of it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::root_of_unity;
use crate::roots::grid_golden_max;
use crate::BOUNDARY_BAND;

const EDGE_SLACK: f64 = 1e-12;

/// Membership verdict with a signed margin (positive inside).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub margin: f64,
    pub boundary: bool,
}

impl Membership {
    fn from_margin(margin: f64, slack: f64) -> Self {
        Self {
            member: margin >= -slack,
            margin,
            boundary: margin.abs() <= BOUNDARY_BAND,
        }
    }
}

fn require_n(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::BadN(n))
    } else {
        Ok(())
    }
}

/// Half-plane test against all `n` edges of `P_n`.
///
/// `margin = cos(π/n) − max_k Re(z₁·e^{−i(2k+1)π/n})`.
pub fn in_polygon(z1: Complex64, n: usize) -> Result<Membership> {
    require_n(n)?;
    Ok(Membership::from_margin(polygon_margin(z1, n), EDGE_SLACK))
}

pub(crate) fn polygon_margin(z1: Complex64, n: usize) -> f64 {
    let nf = n as f64;
    let support = (0..n)
        .map(|k| (z1 * Complex64::from_polar(1.0, -((2 * k + 1) as f64) * PI / nf)).re)
        .fold(f64::NEG_INFINITY, f64::max);
    (PI / nf).cos() - support
}

/// Membership of an invariant value in `{z₁ⁿ : z₁ ∈ P_n}`.
///
/// Only the principal n-th root is tested: the other roots differ by powers
/// of `ξ`, and `P_n` is invariant under rotation by `ξ`.
pub fn in_bn_circ(z: Complex64, n: usize) -> Result<Membership> {
    require_n(n)?;
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Membership::from_margin((PI / n as f64).cos(), EDGE_SLACK));
    }
    Ok(Membership::from_margin(
        polygon_margin(principal_root(z, n), n),
        EDGE_SLACK,
    ))
}

/// `|z|^{1/n}·e^{i·arg(z)/n}` with `arg ∈ (−π, π]`.
pub fn principal_root(z: Complex64, n: usize) -> Complex64 {
    Complex64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
}

/// Three-state closed form `1 − 3|z|^{2/3} + 2|z|·cos(arg z) ≥ 0`; the margin
/// is the left-hand side.
pub fn b3_closed_form(z: Complex64) -> Membership {
    let r = z.norm();
    let value = 1.0 - 3.0 * r.powf(2.0 / 3.0) + 2.0 * r * z.arg().cos();
    Membership::from_margin(value, EDGE_SLACK)
}

/// Four-state boundary point `e^{iφ} / (sin(φ/4) + cos(φ/4))⁴`.
pub fn b4_boundary(phi: f64) -> Complex64 {
    let (s, c) = (phi / 4.0).sin_cos();
    Complex64::from_polar(1.0 / (s + c).powi(4), phi)
}

/// A point of the boundary curve, traced along the edge from `1` to `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub n: usize,
    pub t: f64,
    pub z1: Complex64,
    pub value: Complex64,
    pub r: f64,
    /// `arg(value)` in `[0, 2π)`, increasing as `t` runs from 1 to 0.
    pub phi: f64,
}

/// `z₁ = t + (1−t)ξ`, `value = z₁ⁿ`.
pub fn boundary_sample(n: usize, t: f64) -> Result<BoundarySample> {
    require_n(n)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::BadT(t));
    }
    let z1 = edge_point(n, t);
    let value = z1.powi(n as i32);
    let mut phi = n as f64 * z1.im.atan2(z1.re);
    if phi >= 2.0 * PI {
        phi -= 2.0 * PI;
    }
    Ok(BoundarySample {
        n,
        t,
        z1,
        value,
        r: value.norm(),
        phi,
    })
}

pub(crate) fn edge_point(n: usize, t: f64) -> Complex64 {
    Complex64::new(t, 0.0) + root_of_unity(n, 1) * (1.0 - t)
}

/// Boundary radius as a function of the invariant's phase.
///
/// Inverts the phase relation for `cos²φ` along the edge (written with
/// `sin/cos` of `phi/n` so it stays finite where the tangent diverges) and
/// evaluates `r² = (1 − 4 sin²(π/n)·sin²φ·cos²φ)ⁿ`.
pub fn boundary_polar(n: usize, phi: f64) -> Result<f64> {
    require_n(n)?;
    if !(0.0..2.0 * PI).contains(&phi) {
        return Err(Error::PhaseOutOfRange(phi));
    }
    let cos2 = edge_cos2_for_phase(n, phi);
    let sin2 = 1.0 - cos2;
    let nf = n as f64;
    let base = 1.0 - 4.0 * (PI / nf).sin().powi(2) * sin2 * cos2;
    Ok(base.powf(nf / 2.0))
}

pub(crate) fn edge_cos2_for_phase(n: usize, phi: f64) -> f64 {
    let nf = n as f64;
    let (sa, ca) = (phi / nf).sin_cos();
    let (s2, c2) = (2.0 * PI / nf).sin_cos();
    sa / (sa * (1.0 - c2) + ca * s2)
}

/// Largest `|Im z|` over the circulant invariant set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxImaginarity {
    pub n: usize,
    pub i_n: f64,
    /// Argument of the optimal `z₁` on the edge from `1` to `ξ`.
    pub theta_star: f64,
    /// Edge parameter `t = sin²φ` of the optimum.
    pub t_star: f64,
}

/// Closed form `I_n = cosⁿ(π/n)/cosⁿ(π/n − θ*)·sin(nθ*)`,
/// `θ* = (n−2)π / (2n(n−1))`.
pub fn max_imaginarity(n: usize) -> Result<MaxImaginarity> {
    require_n(n)?;
    let nf = n as f64;
    let theta = (nf - 2.0) * PI / (2.0 * nf * (nf - 1.0));
    let i_n = ((PI / nf).cos() / (PI / nf - theta).cos()).powi(n as i32) * (nf * theta).sin();
    let cos2 = theta.sin() / (2.0 * (PI / nf).sin() * (PI / nf - theta).cos());
    Ok(MaxImaginarity {
        n,
        i_n,
        theta_star: theta,
        t_star: 1.0 - cos2,
    })
}

/// Numerical maximum of `|Im z₁ⁿ|` along the edge: 512-point grid, then
/// golden-section refinement to `1e-12` in `t`. Returns `(max, t)`.
pub fn max_imaginarity_search(n: usize) -> Result<(f64, f64)> {
    require_n(n)?;
    let f = |t: f64| edge_point(n, t).powi(n as i32).im.abs();
    let (t, v) = grid_golden_max(f, 0.0, 1.0, 512, 1e-12);
    Ok((v, t))
}

/// Real invariants reachable: `[−cosⁿ(π/n), 1]`.
pub fn real_window(n: usize) -> Result<(f64, f64)> {
    Ok((-disk_radius(n)?, 1.0))
}

/// `cosⁿ(π/n)`: every `z` with `|z|` at most this is in the circulant set.
///
/// The disk of radius `cos(π/n)` is inscribed in `P_n` (the edge lines sit
/// at distance `cos(π/n)` from the origin), and its image under `z ↦ zⁿ` is
/// the disk of radius `cosⁿ(π/n)`.
pub fn disk_radius(n: usize) -> Result<f64> {
    require_n(n)?;
    Ok((PI / n as f64).cos().powi(n as i32))
}
