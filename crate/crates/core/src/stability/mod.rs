//! Stability polynomials `Q_k^l(m)` for the extrinsic k-energy, the Hardy
//! constants they are built from, and the resulting classification.
//!
//! For `m >= 2k + 1`, the sign of `Q_k^l(m)` decides: non-negative means the
//! generalized equator map minimizes the extrinsic k-energy, negative means
//! it is unstable. Below `2k + 1` the map is not in `W^{k,2}`.

pub mod appendix;
pub mod threshold;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::algebra::rational::{ratio, rising, Rational};
use crate::error::{Error, Result};

pub use appendix::{appendix_f, appendix_verify, AppendixReport, BivariatePoly, PositivityPath};
pub use threshold::{
    biharmonic_ell_threshold, harmonic_threshold_closed_form, table, threshold_m, upper_bound_m,
    ThresholdRecord,
};

pub const RULE_STABILITY: &str = "Theorem-stability";
pub const RULE_SOBOLEV: &str = "Sobolev-membership";
pub const RULE_DIAGONAL: &str = "Theorem-diagonal";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Minimizing,
    Unstable,
    #[serde(rename = "outside_sobolev")]
    OutsideSobolevRange,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Minimizing => "MINIMIZING",
            Regime::Unstable => "UNSTABLE",
            Regime::OutsideSobolevRange => "OUTSIDE_SOBOLEV",
        }
    }

    pub fn json_name(self) -> &'static str {
        match self {
            Regime::Minimizing => "minimizing",
            Regime::Unstable => "unstable",
            Regime::OutsideSobolevRange => "outside_sobolev",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classification outcome with the quantity that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub regime: Regime,
    /// The exact `Q` value (or ratio for the p-energy); absent outside the
    /// Sobolev range.
    pub witness: Option<Rational>,
    pub rule: &'static str,
}

fn z(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sharp constant `alpha_k(m)` of the order-k Hardy inequality on the ball.
pub fn hardy_constant(k: u32, m: u32) -> Rational {
    let m = m as i64;
    if k == 1 {
        return ratio((m - 2) * (m - 2), 4);
    }
    let s = (k / 2) as i64;
    let (mut acc, shift) = if k.is_multiple_of(2) {
        let mut acc = Rational::one();
        for i in 1..=s {
            acc *= z((m - 4 * i) * (m + 4 * i - 4)).pow(2);
        }
        (acc, 4 * s)
    } else {
        let mut acc = z(m - 2).pow(2);
        for i in 1..=s {
            acc *= z((m - 4 * i - 2) * (m + 4 * i - 2)).pow(2);
        }
        (acc, 4 * s + 2)
    };
    acc /= z(2).pow(shift as i32);
    acc
}

/// `B_k^l(m) = prod_{j=1}^k (2j+l-2)(2j-l-m)`, equal to `r^{2k} <Delta^k u, u>`.
pub fn b_product(k: u32, level: u32, m: u32) -> Rational {
    let (l, m) = (level as i64, m as i64);
    (1..=k as i64).fold(Rational::one(), |acc, j| {
        acc * z((2 * j + l - 2) * (2 * j - l - m))
    })
}

/// The stability polynomial `Q_k^l(m)`.
pub fn q_poly(k: u32, level: u32, m: u32) -> Rational {
    assert!(k >= 1, "order k must be positive");
    let alpha = hardy_constant(k, m);
    let b = b_product(k, level, m);
    if k.is_multiple_of(2) {
        alpha - b
    } else {
        alpha + b
    }
}

/// `Q_{2s}^l(m)` through the shifted product form
/// `prod (m/2 + 2(j-1) - 2s)^2 - prod (l+2j-2)(m+l-4s+2j-2)`.
pub fn q_poly_shifted_form(s: u32, level: u32, m: u32) -> Rational {
    let (s, l) = (s as i64, level as i64);
    let half_m = ratio(m as i64, 2);
    let m = m as i64;
    let mut square = Rational::one();
    let mut product = Rational::one();
    for j in 1..=2 * s {
        let base = &half_m + z(2 * (j - 1) - 2 * s);
        square *= &base * &base;
        product *= z((l + 2 * j - 2) * (m + l - 4 * s + 2 * j - 2));
    }
    square - product
}

/// `Q_{2s}^l(6s - 1 + 5l)` through rising factorials:
/// `2^{4s} [ ((5l-1)/4 + s/2)_{2s}^2 - (3l - 1/2 + s)_{2s} (l/2)_{2s} ]`.
pub fn q_at_con_bound(s: u32, level: u32) -> Rational {
    let (si, l) = (s as i64, level as i64);
    let n = 2 * s;
    let a = ratio(5 * l - 1, 4) + ratio(si, 2);
    let b = ratio(6 * l - 1, 2) + z(si);
    let c = ratio(l, 2);
    let ra = rising(&a, n);
    z(2).pow(4 * s as i32) * (&ra * &ra - rising(&b, n) * rising(&c, n))
}

/// Minimizing for `Q >= 0` (zero included), unstable for `Q < 0`.
pub fn regime_from_q(q: &Rational) -> Regime {
    if q.is_negative() {
        Regime::Unstable
    } else {
        Regime::Minimizing
    }
}

/// Classifies `u_*^(l)` on `B^m` as a critical point of the extrinsic k-energy.
pub fn classify_k(k: u32, level: u32, m: u32) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::domain("order k must be at least 1"));
    }
    if level == 0 || level > m {
        return Err(Error::domain(format!(
            "level l = {level} must satisfy 1 <= l <= m = {m}"
        )));
    }
    if m < 2 * k + 1 {
        return Ok(Verdict {
            regime: Regime::OutsideSobolevRange,
            witness: None,
            rule: RULE_SOBOLEV,
        });
    }
    let q = q_poly(k, level, m);
    Ok(Verdict {
        regime: regime_from_q(&q),
        witness: Some(q),
        rule: RULE_STABILITY,
    })
}

/// The case `l = m`, always unstable once `m >= 2k + 1`.
pub fn diagonal_verdict(k: u32, m: u32) -> Result<Verdict> {
    if k == 0 || m < 2 * k + 1 {
        return Err(Error::domain(format!(
            "diagonal case needs m >= 2k + 1, got k = {k}, m = {m}"
        )));
    }
    let mut v = classify_k(k, m, m)?;
    if v.regime != Regime::Unstable {
        return Err(Error::inconsistent(format!(
            "Q_{k}^{m}({m}) is non-negative on the diagonal"
        )));
    }
    v.rule = RULE_DIAGONAL;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn hardy_constants() {
        assert_eq!(hardy_constant(1, 7), ratio(25, 4));
        assert_eq!(hardy_constant(2, 10), int(225));
        assert_eq!(hardy_constant(3, 12), int(11025));
    }

    #[test]
    fn b_products() {
        assert_eq!(b_product(2, 1, 10), int(189));
        assert_eq!(b_product(2, 2, 4), int(64));
        for (l, m) in [(1, 3), (2, 7), (5, 5)] {
            assert_eq!(
                b_product(1, l, m),
                int(l as i64 * (2 - l as i64 - m as i64))
            );
        }
    }

    #[test]
    fn b_product_sign_above_two_k_minus_l() {
        for k in 1..=5u32 {
            for l in 1..=6u32 {
                for m in (2 * k).saturating_sub(l) + 1..40 {
                    let b = b_product(k, l, m);
                    assert_eq!(b.is_negative(), k % 2 == 1, "k={k} l={l} m={m}");
                }
            }
        }
    }

    #[test]
    fn q_values() {
        assert_eq!(q_poly(1, 1, 7), ratio(1, 4));
        assert_eq!(q_poly(2, 1, 10), int(36));
        assert_eq!(q_poly(2, 1, 9), ratio(-279, 16));
        assert_eq!(q_poly(2, 5, 5), ratio(25, 16) - int(1680));
    }

    #[test]
    fn shifted_form_examples() {
        assert_eq!(q_poly_shifted_form(1, 1, 10), int(36));
        assert_eq!(q_poly_shifted_form(1, 2, 9), q_poly(2, 2, 9));
        let v = q_poly_shifted_form(2, 1, 15);
        assert_eq!(v, q_poly(4, 1, 15));
        assert!(!v.is_negative());
    }

    #[test]
    fn con_bound_examples() {
        assert_eq!(q_at_con_bound(1, 1), int(36));
        let printed: i64 = [
            12006225i64,
            64479240,
            132331788,
            131725656,
            66283606,
            15832440,
            1765612,
            316584,
            58849,
        ]
        .iter()
        .sum();
        assert_eq!(q_at_con_bound(2, 1), q_poly(4, 1, 16));
        assert_eq!(q_at_con_bound(2, 1), ratio(printed, 256));
        let lemma = 25 + 204 * 2 + 334 * 4 - 36 * 8 + 49 * 16;
        assert_eq!(q_at_con_bound(1, 2), q_poly(2, 2, 15));
        assert_eq!(q_at_con_bound(1, 2), ratio(lemma, 16));
    }

    #[test]
    fn classification_examples() {
        let v = classify_k(1, 1, 7).unwrap();
        assert_eq!(v.regime, Regime::Minimizing);
        assert_eq!(v.witness, Some(ratio(1, 4)));
        assert_eq!(classify_k(2, 1, 9).unwrap().regime, Regime::Unstable);
        let v = classify_k(3, 2, 6).unwrap();
        assert_eq!(v.regime, Regime::OutsideSobolevRange);
        assert_eq!(v.witness, None);
        assert!(classify_k(1, 4, 3).is_err());
    }

    #[test]
    fn zero_q_is_minimizing() {
        assert_eq!(regime_from_q(&int(0)), Regime::Minimizing);
        assert_eq!(regime_from_q(&ratio(-1, 1000)), Regime::Unstable);
    }

    #[test]
    fn diagonal_examples() {
        for (k, m) in [(2, 5), (1, 3), (3, 7)] {
            let v = diagonal_verdict(k, m).unwrap();
            assert_eq!(v.regime, Regime::Unstable);
        }
        assert!(diagonal_verdict(2, 4).is_err());
    }
}
