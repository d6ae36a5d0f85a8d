//! The radial weighted Hardy inequality
//! `int_0^1 r^{n+1} v'^2 dr >= (n^2/4) int_0^1 r^{n-1} v^2 dr`, `n = m - p > 0`,
//! tested on bumps `(r-a)^2 (b-r)^2` supported in `[a, b] ⊂ (0, 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::quadrature::integrate;
use crate::algebra::rational::{int, to_f64, Rational};
use crate::error::{Error, Result};

const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct HardyReport {
    pub trials: usize,
    pub passed: usize,
    /// `n^2 / 4`.
    pub bound: f64,
    /// Smallest Rayleigh quotient over non-degenerate bumps; `None` if all were degenerate.
    pub min_quotient: Option<f64>,
}

impl HardyReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.trials
    }
}

/// `int r^{n+1} v'^2 / int r^{n-1} v^2` for the bump on `[a, b]`; `None` when `a = b`.
pub fn bump_quotient(n: f64, a: f64, b: f64) -> Option<f64> {
    if a >= b {
        return None;
    }
    // r = b x removes the dependence on b; the quotient is scale invariant.
    let c = a / b;
    let v = |x: f64| ((x - c) * (1.0 - x)).powi(2);
    let dv = |x: f64| 2.0 * (x - c) * (1.0 - x) * (1.0 + c - 2.0 * x);
    let num = integrate(|x| x.powf(n + 1.0) * dv(x).powi(2), c, 1.0);
    let den = integrate(|x| x.powf(n - 1.0) * v(x).powi(2), c, 1.0);
    Some(num / den)
}

/// Checks the inequality on `trials` seeded random bumps.
pub fn radial_hardy_check(m: u32, p: &Rational, trials: usize, seed: u64) -> Result<HardyReport> {
    let gap = int(m as i64) - p;
    if gap <= int(0) {
        return Err(Error::domain("m ≤ p"));
    }
    let n = to_f64(&gap);
    let bound = n * n / 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let supports: Vec<(f64, f64)> = (0..trials)
        .map(|_| {
            let (x, y): (f64, f64) = (1.0 - rng.random::<f64>(), 1.0 - rng.random::<f64>());
            (x.min(y), x.max(y))
        })
        .collect();
    let quotients: Vec<Option<f64>> = supports
        .par_iter()
        .map(|&(a, b)| bump_quotient(n, a, b))
        .collect();
    let passed = quotients
        .iter()
        .filter(|q| q.is_none_or(|q| q >= bound - SLACK))
        .count();
    let min_quotient = quotients.iter().flatten().copied().reduce(f64::min);
    Ok(HardyReport {
        trials,
        passed,
        bound,
        min_quotient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    #[test]
    fn degenerate_support_passes() {
        assert_eq!(bump_quotient(5.0, 0.3, 0.3), None);
    }

    #[test]
    fn seeded_checks() {
        let r = radial_hardy_check(7, &int(2), 50, 7).unwrap();
        assert!(r.all_pass());
        assert!(r.min_quotient.unwrap() >= 25.0 / 4.0);
        let r = radial_hardy_check(10, &int(3), 50, 7).unwrap();
        assert!(r.all_pass());
        assert!(r.min_quotient.unwrap() >= 49.0 / 4.0);
        assert_eq!(r, radial_hardy_check(10, &int(3), 50, 7).unwrap());
    }

    #[test]
    fn rejects_p_at_or_above_m() {
        assert!(radial_hardy_check(3, &ratio(7, 2), 5, 1).is_err());
    }
}
