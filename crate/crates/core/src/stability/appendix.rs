//! The two-variable inequality `f1(l, s) > f2(l, s)` behind the induction
//! step of the upper bound on `m(k, l)`.
//!
//! `f1 - f2` is expanded exactly, compared coefficient by coefficient with
//! a reference integer expansion, and then certified positive on `l, s >= 1` by
//! substituting `l = 1 + a`, `s = 1 + b` and checking that no coefficient of
//! the shifted polynomial is negative.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::rational::{format_rational, int, ratio, Rational};

/// Sparse polynomial in `(l, s)`; keys are `(l exponent, s exponent)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0), c);
        p
    }

    /// `c0 + cl * l + cs * s`.
    pub fn linear(c0: Rational, cl: Rational, cs: Rational) -> Self {
        let mut p = Self::constant(c0);
        p.add_term((1, 0), cl);
        p.add_term((0, 1), cs);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, l_exp: u32, s_exp: u32) -> Rational {
        self.terms
            .get(&(l_exp, s_exp))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn degree_in_s(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn degree_in_l(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &other.terms {
                out.add_term((a + c, b + d), x * y);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, v)| (e, v * c)))
    }

    pub fn eval(&self, l: &Rational, s: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| {
                c * num_traits::pow(l.clone(), i as usize) * num_traits::pow(s.clone(), j as usize)
            })
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    /// The polynomial in `(a, b)` obtained by substituting `l = a + dl`, `s = b + ds`.
    pub fn shift(&self, dl: &Rational, ds: &Rational) -> Self {
        let lin_l = Self::linear(dl.clone(), Rational::one(), Rational::zero());
        let lin_s = Self::linear(ds.clone(), Rational::zero(), Rational::one());
        let powers = |base: &Self, n: u32| {
            let mut out = vec![Self::constant(Rational::one())];
            for _ in 0..n {
                let next = out.last().unwrap().mul(base);
                out.push(next);
            }
            out
        };
        let pl = powers(&lin_l, self.degree_in_l().unwrap_or(0));
        let ps = powers(&lin_s, self.degree_in_s().unwrap_or(0));
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out = out.add(&pl[i as usize].mul(&ps[j as usize]).scale(c));
        }
        out
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| format!("({}) l^{i} s^{j}", format_rational(c)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `f1` and `f2` as exact polynomials in `(l, s)`.
pub fn appendix_f() -> (BivariatePoly, BivariatePoly) {
    let lin = |c0: Rational, cl: Rational, cs: Rational| BivariatePoly::linear(c0, cl, cs);
    let one = BivariatePoly::constant(Rational::one());

    // (3l - 1/2 + s)(3l + 1/2 + s) prod_{i=0}^{4} (5l/4 - 1/4 + 5s/2 + i)^2
    let mut f1 = lin(ratio(-1, 2), int(3), int(1)).mul(&lin(ratio(1, 2), int(3), int(1)));
    for i in 0..5 {
        let factor = lin(ratio(-1, 4) + int(i), ratio(5, 4), ratio(5, 2));
        f1 = f1.mul(&factor).mul(&factor);
    }

    // (5l/4 - 1/4 + s/2)^2 prod_{j=0}^{3} (l/2 + 2s + j) prod_{i=0}^{5} (3l - 1/2 + 3s + i)
    let lead = lin(ratio(-1, 4), ratio(5, 4), ratio(1, 2));
    let mut f2 = one.mul(&lead).mul(&lead);
    for j in 0..4 {
        f2 = f2.mul(&lin(int(j), ratio(1, 2), int(2)));
    }
    for i in 0..6 {
        f2 = f2.mul(&lin(ratio(-1, 2) + int(i), int(3), int(3)));
    }
    (f1, f2)
}

/// Reference integer expansion of `2^22 (f1 - f2)`, as `(l exponent, s exponent, coefficient)`.
pub const PRINTED_EXPANSION: [(u32, u32, i64); 91] = [
    // s^0
    (0, 0, -12006225),
    (1, 0, 55583010),
    (2, 0, 644529087),
    (3, 0, -2421377136),
    (4, 0, -9700301278),
    (5, 0, 12487858156),
    (6, 0, 72563051494),
    (7, 0, 94882488616),
    (8, 0, 53978095723),
    (9, 0, 13617646594),
    (10, 0, 1475727899),
    (11, 0, 263739960),
    (12, 0, 52964100),
    // s^1
    (0, 1, 134390340),
    (1, 1, 1188352260),
    (2, 1, -9358205616),
    (3, 1, -53535104072),
    (4, 1, 82468999288),
    (5, 1, 670777476696),
    (6, 1, 1134928446416),
    (7, 1, 828852193984),
    (8, 1, 268985623908),
    (9, 1, 30497943172),
    (10, 1, 1148862144),
    (11, 1, 457581480),
    // s^2
    (0, 2, 1303670448),
    (1, 2, -10642384584),
    (2, 2, -120720353388),
    (3, 2, 144787874944),
    (4, 2, 2450530361488),
    (5, 2, 5729642548976),
    (6, 2, 5589520852728),
    (7, 2, 2486390322368),
    (8, 2, 437882283680),
    (9, 2, 15819743384),
    (10, 2, 894836116),
    // s^3
    (0, 3, -3642402384),
    (1, 3, -123101112848),
    (2, 3, -34749970048),
    (3, 3, 4173384480384),
    (4, 3, 14832331134048),
    (5, 3, 20133076297696),
    (6, 3, 12432504294400),
    (7, 3, 3334091269376),
    (8, 3, 291082689648),
    (9, 3, 3900335792),
    // s^4
    (0, 4, -51483158224),
    (1, 4, -255426616000),
    (2, 4, 3176624602464),
    (3, 4, 20482984437760),
    (4, 4, 41075732638336),
    (5, 4, 35735452614720),
    (6, 4, 13867113842720),
    (7, 4, 2075666251392),
    (8, 4, 77435615952),
    // s^5
    (0, 5, -146586812800),
    (1, 5, 731366779520),
    (2, 5, 14433759766528),
    (3, 5, 47762510732544),
    (4, 5, 60993939304064),
    (5, 5, 33813612386432),
    (6, 5, 7594848719616),
    (7, 5, 503719360512),
    // s^6
    (0, 6, -89987900416),
    (1, 6, 4379984983808),
    (2, 6, 30133300439680),
    (3, 6, 61633397659648),
    (4, 6, 50136650047232),
    (5, 6, 16282468373760),
    (6, 6, 1639823210112),
    // s^7
    (0, 7, 359804487168),
    (1, 7, 8997065145856),
    (2, 7, 35061994088448),
    (3, 7, 45067242383360),
    (4, 7, 21502764900864),
    (5, 7, 3144953498112),
    // s^8
    (0, 8, 941458015488),
    (1, 8, 9901678553600),
    (2, 8, 23377417362176),
    (3, 8, 17492946874368),
    (4, 8, 3757798036992),
    // s^9
    (0, 9, 1053226767360),
    (1, 9, 6202832655360),
    (2, 9, 8359807168512),
    (3, 9, 2801413404672),
    // s^10
    (0, 10, 640508858368),
    (1, 10, 2086916315136),
    (2, 10, 1244059272192),
    // s^11
    (0, 11, 206616457216),
    (1, 11, 293232914432),
    // s^12
    (0, 12, 27769409536),
];

/// Power of two relating the printed expansion to `f1 - f2`.
pub const PRINTED_SCALE_EXPONENT: u32 = 22;

pub fn printed_expansion() -> BivariatePoly {
    BivariatePoly::from_terms(
        PRINTED_EXPANSION
            .iter()
            .map(|&(i, j, c)| ((i, j), Rational::from_integer(BigInt::from(c)))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientMismatch {
    pub l_exp: u32,
    pub s_exp: u32,
    pub printed: Rational,
    pub computed: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositivityPath {
    /// Every coefficient of the shifted polynomial is non-negative and at
    /// least one is positive: a proof for all real `l, s >= 1`.
    Certificate {
        min_coefficient: Rational,
        positive_terms: usize,
    },
    /// Exact evaluation on a finite grid; evidence, not proof.
    GridEvidence {
        grid_max: u32,
        min_value: Rational,
    },
    Failed {
        l: u32,
        s: u32,
        value: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixReport {
    /// `Some(e)` when `2^e (f1 - f2)` equals the printed expansion.
    pub matched_scale_exponent: Option<u32>,
    pub printed_terms: usize,
    pub computed_terms: usize,
    /// Differences against `2^22 (f1 - f2)`; empty on a match.
    pub mismatches: Vec<CoefficientMismatch>,
    pub degree_in_s: u32,
    pub value_at_one_one: Rational,
    pub positivity: PositivityPath,
}

impl AppendixReport {
    pub fn coefficients_match(&self) -> bool {
        self.matched_scale_exponent.is_some()
    }

    pub fn positive(&self) -> bool {
        !matches!(self.positivity, PositivityPath::Failed { .. })
    }
}

fn mismatches(printed: &BivariatePoly, computed: &BivariatePoly) -> Vec<CoefficientMismatch> {
    let mut keys: Vec<(u32, u32)> = printed
        .terms
        .keys()
        .chain(computed.terms.keys())
        .copied()
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .filter_map(|(i, j)| {
            let (p, c) = (printed.coefficient(i, j), computed.coefficient(i, j));
            (p != c).then_some(CoefficientMismatch {
                l_exp: i,
                s_exp: j,
                printed: p,
                computed: c,
            })
        })
        .collect()
}

/// Certifies `p > 0` on `[1, inf)^2`, falling back to a grid scan.
pub fn positivity_on_unit_quadrant(p: &BivariatePoly, grid_max: u32) -> PositivityPath {
    let shifted = p.shift(&Rational::one(), &Rational::one());
    let min = shifted.terms().map(|(_, c)| c.clone()).min();
    if let Some(min) = min {
        if !min.is_negative() {
            return PositivityPath::Certificate {
                min_coefficient: min,
                positive_terms: shifted.len(),
            };
        }
    }
    let mut min_value: Option<Rational> = None;
    for l in 1..=grid_max {
        for s in 1..=grid_max {
            let v = p.eval(&int(l as i64), &int(s as i64));
            if !v.is_positive() {
                return PositivityPath::Failed { l, s, value: v };
            }
            if min_value.as_ref().is_none_or(|m| &v < m) {
                min_value = Some(v);
            }
        }
    }
    PositivityPath::GridEvidence {
        grid_max,
        min_value: min_value.unwrap_or_else(Rational::zero),
    }
}

pub fn appendix_verify() -> AppendixReport {
    let (f1, f2) = appendix_f();
    let diff = f1.sub(&f2);
    let scaled = diff.scale(&Rational::from_integer(
        BigInt::one() << PRINTED_SCALE_EXPONENT,
    ));
    let printed = printed_expansion();

    let matched_scale_exponent = if scaled == printed {
        Some(PRINTED_SCALE_EXPONENT)
    } else if diff == printed {
        Some(0)
    } else {
        None
    };
    let mismatches = if matched_scale_exponent.is_some() {
        Vec::new()
    } else {
        mismatches(&printed, &scaled)
    };

    AppendixReport {
        matched_scale_exponent,
        printed_terms: printed.len(),
        computed_terms: scaled.len(),
        mismatches,
        degree_in_s: diff.degree_in_s().unwrap_or(0),
        value_at_one_one: diff.eval(&int(1), &int(1)),
        positivity: positivity_on_unit_quadrant(&scaled, 100),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_vanishes_at_origin() {
        let (_, f2) = appendix_f();
        assert!(f2.eval(&int(0), &int(0)).is_zero());
    }

    #[test]
    fn difference_positive_at_one_one() {
        let (f1, f2) = appendix_f();
        assert!(f1.sub(&f2).eval(&int(1), &int(1)).is_positive());
    }

    #[test]
    fn degree_twelve_in_s() {
        let (f1, f2) = appendix_f();
        assert_eq!(f1.sub(&f2).degree_in_s(), Some(12));
    }

    #[test]
    fn extreme_printed_coefficients() {
        let (f1, f2) = appendix_f();
        let d = f1
            .sub(&f2)
            .scale(&Rational::from_integer(BigInt::one() << 22));
        assert_eq!(d.coefficient(0, 0), int(-12006225));
        assert_eq!(d.coefficient(0, 12), int(27769409536));
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = BivariatePoly::linear(int(2), int(-3), int(5)).mul(&BivariatePoly::linear(
            int(1),
            int(1),
            int(-1),
        ));
        let q = p.shift(&int(1), &int(1));
        for (a, b) in [(0, 0), (2, 3), (-1, 4)] {
            assert_eq!(q.eval(&int(a), &int(b)), p.eval(&int(a + 1), &int(b + 1)));
        }
    }

    #[test]
    fn negative_polynomial_fails_positivity() {
        let p = BivariatePoly::linear(int(-10), int(1), int(1));
        match positivity_on_unit_quadrant(&p, 5) {
            PositivityPath::Failed { l: 1, s: 1, value } => assert_eq!(value, int(-8)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_fallback_reports_evidence() {
        // (l - s)^2 + 1 is positive but has a negative shifted coefficient.
        let d = BivariatePoly::linear(int(0), int(1), int(-1));
        let p = d.mul(&d).add(&BivariatePoly::constant(int(1)));
        match positivity_on_unit_quadrant(&p, 4) {
            PositivityPath::GridEvidence {
                grid_max: 4,
                min_value,
            } => assert_eq!(min_value, int(1)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
