//! Adaptive Simpson quadrature.

/// Absolute tolerance on a unit-scale integrand.
pub const TOLERANCE: f64 = 1e-10;
/// Subintervals narrower than this are accepted as they are.
pub const INTERVAL_FLOOR: f64 = 1e-8;

const MAX_DEPTH: u32 = 60;

fn simpson(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width * (fa + 4.0 * fm + fb) / 6.0
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || b - a < INTERVAL_FLOOR || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
}

/// `int_a^b f` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if b < a {
        return -adaptive_simpson(f, b, a, tol);
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, b - a);
    refine(&f, a, b, fa, fm, fb, whole, tol, 0)
}

/// `int_a^b f` with the tolerance taken relative to a coarse estimate of the
/// integral, so tiny integrands keep their significant digits.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let n = 64;
    let h = (b - a) / n as f64;
    let coarse: f64 = (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * f(a + i as f64 * h).abs()
        })
        .sum::<f64>()
        * h
        / 3.0;
    let scale = if coarse > 0.0 && coarse.is_finite() {
        coarse
    } else {
        1.0
    };
    adaptive_simpson(f, a, b, TOLERANCE * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_and_trig() {
        assert!((adaptive_simpson(|x| x * x * x, 0.0, 2.0, TOLERANCE) - 4.0).abs() < 1e-12);
        let s = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, TOLERANCE);
        assert!((s - 2.0).abs() < 1e-9);
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, TOLERANCE), 0.0);
        assert!((adaptive_simpson(|x| x, 1.0, 0.0, TOLERANCE) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn relative_scaling_keeps_small_integrals_accurate() {
        let exact = 1e-30 / 7.0;
        let v = integrate(|x| 1e-30 * x.powi(6), 0.0, 1.0);
        assert!(((v - exact) / exact).abs() < 1e-9);
    }
}
