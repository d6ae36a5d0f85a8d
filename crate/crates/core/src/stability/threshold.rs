//! The transition dimension `m(k, l)`: the least `m >= 2k + 1` with
//! `Q_k^l(m) >= 0`. Found by a linear scan that stops at a proven upper
//! bound, then checked to stay non-negative all the way to that bound.

use num_integer::Roots;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::q_poly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThresholdRecord {
    pub k: u32,
    pub ell: u32,
    pub m_star: u32,
    #[serde(rename = "cap")]
    pub scan_cap: u32,
}

/// `2(l+1) + 2 sqrt(2) l`; its ceiling is `m(1, l)`.
pub fn harmonic_threshold_closed_form(level: u32) -> f64 {
    let l = level as f64;
    2.0 * (l + 1.0) + 2.0 * std::f64::consts::SQRT_2 * l
}

/// Upper bound `5 + 3(k-2) + 5l` on `m(k, l)`, valid for `k >= 2`.
pub fn upper_bound_m(k: u32, level: u32) -> Result<u32> {
    if k < 2 {
        return Err(Error::domain(
            "the explicit bound holds for k >= 2; k = 1 uses the closed form",
        ));
    }
    Ok(5 + 3 * (k - 2) + 5 * level)
}

/// Last dimension the scan visits.
fn scan_cap(k: u32, level: u32) -> Result<u32> {
    if k == 1 {
        // ceil(2(l+1) + sqrt(8 l^2)) + 1; 8 l^2 is never a perfect square.
        let l = level as u64;
        let root = (8 * l * l).sqrt();
        let ceil = if root * root == 8 * l * l {
            root
        } else {
            root + 1
        };
        Ok((2 * (l + 1) + ceil) as u32 + 1)
    } else {
        upper_bound_m(k, level)
    }
}

/// Scans `m = 2k+1, 2k+2, ...` for the first non-negative `Q_k^l(m)`.
pub fn threshold_m(k: u32, level: u32) -> Result<ThresholdRecord> {
    if k == 0 || level == 0 {
        return Err(Error::domain("k and l must be at least 1"));
    }
    let start = 2 * k + 1;
    let cap = scan_cap(k, level)?;
    let m_star = (start..=cap)
        .find(|&m| !q_poly(k, level, m).is_negative())
        .ok_or_else(|| {
            Error::inconsistent(format!(
                "Q_{k}^{level}(m) < 0 for all m in {start}..={cap}, past the proven bound"
            ))
        })?;
    if let Some(m) = (m_star..=cap).find(|&m| q_poly(k, level, m).is_negative()) {
        return Err(Error::inconsistent(format!(
            "Q_{k}^{level} changes sign again at m = {m} after m* = {m_star}"
        )));
    }
    if m_star <= start {
        return Err(Error::inconsistent(format!(
            "Q_{k}^{level}({start}) is non-negative at the Sobolev edge"
        )));
    }
    Ok(ThresholdRecord {
        k,
        ell: level,
        m_star,
        scan_cap: cap,
    })
}

/// `m(k, l)` for `1 <= k <= k_max`, `1 <= l <= l_max`, in row-major `(k, l)` order.
pub fn table(k_max: u32, l_max: u32) -> Result<Vec<ThresholdRecord>> {
    if k_max == 0 || l_max == 0 {
        return Err(Error::domain("table needs k_max >= 1 and l_max >= 1"));
    }
    let cells: Vec<(u32, u32)> = (1..=k_max)
        .flat_map(|k| (1..=l_max).map(move |l| (k, l)))
        .collect();
    cells.par_iter().map(|&(k, l)| threshold_m(k, l)).collect()
}

/// The level `L(m)` at which `Q_2^l(m)` changes sign as `l` grows:
/// `1 - m/2 + sqrt(20 - 8m + m^2 + (m-4) sqrt(m^2 + 16)) / 2`.
pub fn biharmonic_ell_threshold(m: u32) -> Result<f64> {
    if m < 5 {
        return Err(Error::domain(format!(
            "biharmonic threshold needs m >= 5, got {m}"
        )));
    }
    let m = m as f64;
    let inner = 20.0 - 8.0 * m + m * m + (m - 4.0) * (m * m + 16.0).sqrt();
    Ok(1.0 - m / 2.0 + 0.5 * inner.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_anchor_cells() {
        assert_eq!(threshold_m(1, 1).unwrap().m_star, 7);
        assert_eq!(threshold_m(2, 7).unwrap().m_star, 39);
        assert_eq!(threshold_m(4, 10).unwrap().m_star, 60);
    }

    #[test]
    fn small_tables() {
        let t: Vec<u32> = table(2, 1).unwrap().iter().map(|r| r.m_star).collect();
        assert_eq!(t, vec![7, 10]);
        let t: Vec<u32> = table(1, 2).unwrap().iter().map(|r| r.m_star).collect();
        assert_eq!(t, vec![7, 12]);
        assert!(table(0, 3).is_err());
    }

    #[test]
    fn harmonic_closed_form() {
        assert!((harmonic_threshold_closed_form(1) - 6.828427124746).abs() < 1e-9);
        assert_eq!(harmonic_threshold_closed_form(3).ceil() as u32, 17);
        assert_eq!(harmonic_threshold_closed_form(6).ceil() as u32, 31);
        assert!((harmonic_threshold_closed_form(6) - 30.970562748477).abs() < 1e-9);
    }

    #[test]
    fn k_one_cap_matches_float_formula() {
        for l in 1..=50 {
            let float = harmonic_threshold_closed_form(l).ceil() as u32 + 1;
            assert_eq!(scan_cap(1, l).unwrap(), float);
        }
    }

    #[test]
    fn upper_bounds() {
        assert_eq!(upper_bound_m(2, 1).unwrap(), 10);
        assert_eq!(upper_bound_m(4, 4).unwrap(), 31);
        assert_eq!(upper_bound_m(3, 10).unwrap(), 58);
        assert_eq!(threshold_m(3, 10).unwrap().m_star, 57);
        assert!(upper_bound_m(1, 3).is_err());
    }

    #[test]
    fn biharmonic_level_threshold() {
        let l10 = biharmonic_ell_threshold(10).unwrap();
        assert!((l10 - 1.114244).abs() < 1e-6, "{l10}");
        assert!(!q_poly(2, 1, 10).is_negative());
        assert!(q_poly(2, 2, 10).is_negative());
        assert!(biharmonic_ell_threshold(15).unwrap() >= 2.0);
        assert!(biharmonic_ell_threshold(4).is_err());
    }
}
