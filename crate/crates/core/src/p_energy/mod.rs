//! Stability of the generalized equator map for the p-energy
//! `(1/p) int |du|^p`, with `m > p >= 2`.
//!
//! Everything hinges on the ratio `(m-p)^2 / (4 l (l+m-2))`: at least one
//! means minimizing, below one means unstable.

mod hardy;
pub mod quadrature;
mod witness;

use num_traits::{One, Signed};

use crate::algebra::rational::{int, to_f64, Rational};
use crate::error::{Error, Result};
use crate::stability::{Regime, Verdict};

pub use hardy::{bump_quotient, radial_hardy_check, HardyReport};
pub use witness::{
    instability_witness, oscillatory_form, radial_quadratic_form, vol_sphere, Witness,
};

pub const RULE_P_MINIMIZING: &str = "p-energy: unique energy minimizer";
pub const RULE_P_UNSTABLE: &str = "p-energy: unstable p-harmonic map";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PParams {
    level: u32,
    dim: u32,
    p: Rational,
}

impl PParams {
    /// Requires `m > p >= 2` and `1 <= l <= m`.
    pub fn new(level: u32, dim: u32, p: Rational) -> Result<Self> {
        if p < int(2) {
            return Err(Error::domain(format!("p >= 2 required, got p = {p}")));
        }
        if int(dim as i64) <= p {
            return Err(Error::domain("m ≤ p"));
        }
        if level == 0 || level > dim {
            return Err(Error::domain(format!(
                "level l = {level} must satisfy 1 <= l <= m = {dim}"
            )));
        }
        Ok(Self { level, dim, p })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn p_f64(&self) -> f64 {
        to_f64(&self.p)
    }

    /// `l (l + m - 2)`, the energy density of `u^(l)` times `r^2`.
    pub fn eigenvalue(&self) -> Rational {
        let (l, m) = (self.level as i64, self.dim as i64);
        int(l * (l + m - 2))
    }

    /// `m - p`.
    fn gap(&self) -> Rational {
        int(self.dim as i64) - &self.p
    }
}

/// `(m - p)^2 / (4 l (l + m - 2))`.
pub fn p_ratio(params: &PParams) -> Rational {
    let gap = params.gap();
    &gap * &gap / (int(4) * params.eigenvalue())
}

pub fn classify_p(params: &PParams) -> Verdict {
    let ratio = p_ratio(params);
    if ratio >= Rational::one() {
        Verdict {
            regime: Regime::Minimizing,
            witness: Some(ratio),
            rule: RULE_P_MINIMIZING,
        }
    } else {
        Verdict {
            regime: Regime::Unstable,
            witness: Some(ratio),
            rule: RULE_P_UNSTABLE,
        }
    }
}

/// `p + 2l + 2 sqrt(l (2l + p - 2))`; integer `m` at or above it is minimizing.
pub fn p_dimension_threshold(level: u32, p: f64) -> f64 {
    let l = level as f64;
    p + 2.0 * l + 2.0 * (l * (2.0 * l + p - 2.0)).sqrt()
}

/// `(2 - m + sqrt((m-2)^2 + (m-p)^2)) / 2`; levels above it are unstable.
pub fn p_ell_threshold(m: u32, p: f64) -> f64 {
    let m = m as f64;
    0.5 * (2.0 - m + ((m - 2.0).powi(2) + (m - p).powi(2)).sqrt())
}

/// The weaker level threshold `(2 - m + sqrt((m-2)^2 + 2(m-p)^2)) / 2`.
pub fn weak_ell_threshold(m: u32, p: f64) -> f64 {
    let m = m as f64;
    0.5 * (2.0 - m + ((m - 2.0).powi(2) + 2.0 * (m - p).powi(2)).sqrt())
}

/// `mu_0 = (m-p)^2/4 - l(l+m-2)`, exactly.
pub fn mu_exact(params: &PParams) -> Rational {
    let gap = params.gap();
    &gap * &gap / int(4) - params.eigenvalue()
}

/// `mu = (m-p)^2/4 - l(l+m-2) + epsilon`.
pub fn mu(params: &PParams, epsilon: f64) -> f64 {
    to_f64(&mu_exact(params)) + epsilon
}

/// `true` when the ratio is below one, i.e. `mu_0 < 0`.
pub fn admits_witness(params: &PParams) -> bool {
    mu_exact(params).is_negative()
}
