//! Bracketing root finding and 1-D maximization.

/// Bisection on a sign change of `f` over `[lo, hi]`.
///
/// `f(lo)` and `f(hi)` must not share a strict sign. Iterates until the
/// bracket is narrower than `tol` or stops shrinking in floating point, and
/// returns the midpoint of the final bracket (an exact endpoint root is
/// returned directly).
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    debug_assert!(f_lo.signum() != f_hi.signum(), "no sign change on bracket");
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return mid;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x_max, f(x_max))`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Grid scan followed by golden-section refinement around the best grid point.
pub fn grid_golden_max(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    grid: usize,
    tol: f64,
) -> (f64, f64) {
    let step = (b - a) / grid as f64;
    let best = (0..=grid)
        .map(|i| (i, f(a + step * i as f64)))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .map_or(0, |(i, _)| i);
    let lo = a + step * best.saturating_sub(1) as f64;
    let hi = (a + step * (best + 1) as f64).min(b);
    golden_section_max(f, lo, hi, tol)
}
