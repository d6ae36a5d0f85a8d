//! Sparse polynomials in `y_1, ..., y_m` over the rationals, with normal
//! forms modulo the sphere relation `y_1^2 + ... + y_m^2 = 1`.
//!
//! Monomials are dense exponent vectors ordered lexicographically with `y_1`
//! most significant. The sphere ideal is principal, so the single rewrite
//! `y_1^2 -> 1 - (y_2^2 + ... + y_m^2)` is confluent and every class has a
//! unique representative of degree at most one in `y_1`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::rational::{format_rational, Rational};
use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpherePoly {
    dim: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl SpherePoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    /// The coordinate `y_i` (zero-based `i`).
    pub fn var(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::AxisOutOfRange { axis: i, dim });
        }
        let mut e = vec![0; dim];
        e[i] = 1;
        let mut p = Self::zero(dim);
        p.add_term(e, Rational::one());
        Ok(p)
    }

    /// `y_1^2 + ... + y_m^2`, the generator of the sphere ideal plus one.
    pub fn norm_squared(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 2;
            p.add_term(e, Rational::one());
        }
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; zero coefficients are dropped
    /// and repeated exponents summed.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: e.len(),
                    right: dim,
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        merge(&mut self.terms, e, c);
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), -v.clone()))
                .collect(),
        }
    }

    /// Multiplication by the coordinate `y_i`.
    pub fn mul_var(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis: i,
                dim: self.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[i] += 1;
                    (e, c.clone())
                })
                .collect(),
        })
    }

    /// Formal partial derivative `d/dy_i` on the ambient space.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis: i,
                dim: self.dim,
            });
        }
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * Rational::from_integer(e[i].into()));
        }
        Ok(out)
    }

    /// `(E + shift) P` where `E = sum_i y_i d/dy_i` is the Euler operator,
    /// which scales each monomial by its total degree.
    pub fn euler_shifted(&self, shift: u32) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum::<u32>() + shift;
            out.add_term(e.clone(), c * Rational::from_integer(deg.into()));
        }
        out
    }

    pub fn euler(&self) -> Self {
        self.euler_shifted(0)
    }

    /// Normal form modulo `y_1^2 + ... + y_m^2 - 1`.
    pub fn sphere_reduce(&self) -> Self {
        let mut work = self.terms.clone();
        let mut done: BTreeMap<Exponent, Rational> = BTreeMap::new();
        // Keys are ordered lexicographically with the y_1 exponent first, so the
        // last entry carries the largest power of y_1. Each rewrite lowers the
        // y_1 power by two, hence the loop terminates.
        while let Some((e, c)) = work.pop_last() {
            if e[0] < 2 {
                // Every remaining key also has y_1 power < 2.
                for (k, v) in std::iter::once((e, c)).chain(std::mem::take(&mut work)) {
                    merge(&mut done, k, v);
                }
                break;
            }
            let mut base = e.clone();
            base[0] -= 2;
            for i in 1..self.dim {
                let mut t = base.clone();
                t[i] += 2;
                merge(&mut work, t, -c.clone());
            }
            merge(&mut work, base, c);
        }
        Self {
            dim: self.dim,
            terms: done,
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: point.len(),
                right: self.dim,
            });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn merge(map: &mut BTreeMap<Exponent, Rational>, e: Exponent, c: Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl fmt::Debug for SpherePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SpherePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", format_rational(c))?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*y{}", i + 1)?,
                    _ => write!(f, "*y{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
