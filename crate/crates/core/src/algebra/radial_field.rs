//! Functions of the form `P(y) r^(-d)` on `R^m \ {0}` with `y = x / r`.
//!
//! Differentiating such a function in `x` stays inside the family:
//! `d/dx_j [P r^(-d)] = [d_j P - y_j (E + d) P] r^(-(d+1))`, with `E` the
//! Euler operator. That closes the whole calculus on polynomials in `y`.

use std::fmt;

use num_traits::Zero;

use super::rational::Rational;
use super::sphere_poly::SpherePoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RadialField {
    numerator: SpherePoly,
    r_power: u32,
}

impl RadialField {
    /// Canonicalizes: the numerator is sphere-reduced and the zero function
    /// carries `r_power = 0`.
    pub fn new(numerator: SpherePoly, r_power: u32) -> Self {
        let numerator = numerator.sphere_reduce();
        let r_power = if numerator.is_zero() { 0 } else { r_power };
        Self { numerator, r_power }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            numerator: SpherePoly::zero(dim),
            r_power: 0,
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::new(SpherePoly::constant(dim, c), 0)
    }

    /// `y_i = x_i / r` (zero-based `i`).
    pub fn coordinate(dim: usize, i: usize) -> Result<Self> {
        Ok(Self::new(SpherePoly::var(dim, i)?, 0))
    }

    /// `r^(-d)`.
    pub fn inverse_r_power(dim: usize, d: u32) -> Self {
        Self::new(SpherePoly::one(dim), d)
    }

    pub fn numerator(&self) -> &SpherePoly {
        &self.numerator
    }

    pub fn r_power(&self) -> u32 {
        self.r_power
    }

    pub fn dim(&self) -> usize {
        self.numerator.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `Some(c)` if the field equals `c r^(-r_power)` for a rational `c`.
    pub fn radial_coefficient(&self) -> Option<Rational> {
        self.numerator.as_constant()
    }

    fn aligned_power(&self, other: &Self) -> Result<u32> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        match (self.is_zero(), other.is_zero()) {
            (true, _) => Ok(other.r_power),
            (_, true) => Ok(self.r_power),
            _ if self.r_power == other.r_power => Ok(self.r_power),
            _ => Err(Error::MixedRadialPower {
                left: self.r_power,
                right: other.r_power,
            }),
        }
    }

    /// Sum of two fields; both must carry the same power of `r` unless one is zero.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.aligned_power(other)?;
        Ok(Self::new(self.numerator.add(&other.numerator)?, d))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let d = self.aligned_power(other)?;
        Ok(Self::new(self.numerator.sub(&other.numerator)?, d))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let product = self.numerator.mul(&other.numerator)?;
        Ok(Self::new(product, self.r_power + other.r_power))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.numerator.scale(c), self.r_power)
    }

    pub fn neg(&self) -> Self {
        Self {
            numerator: self.numerator.neg(),
            r_power: self.r_power,
        }
    }

    /// Multiplication by `r`; requires `r_power >= 1` (or the zero field).
    pub fn mul_r(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.r_power == 0 {
            return Err(Error::NegativeRadialPower);
        }
        Ok(Self {
            numerator: self.numerator.clone(),
            r_power: self.r_power - 1,
        })
    }

    /// Multiplication by `y_j`.
    pub fn mul_coordinate(&self, j: usize) -> Result<Self> {
        Ok(Self::new(self.numerator.mul_var(j)?, self.r_power))
    }

    /// `d/dx_j` of the field (zero-based axis).
    pub fn radial_partial(&self, j: usize) -> Result<Self> {
        let dim = self.dim();
        if j >= dim {
            return Err(Error::AxisOutOfRange { axis: j, dim });
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let tangential = self.numerator.partial(j)?;
        let normal = self.numerator.euler_shifted(self.r_power).mul_var(j)?;
        Ok(Self::new(tangential.sub(&normal)?, self.r_power + 1))
    }

    /// Flat Laplacian `sum_j d^2/dx_j^2`.
    pub fn laplacian(&self) -> Result<Self> {
        let mut acc = Self::zero(self.dim());
        for j in 0..self.dim() {
            acc = acc.add(&self.radial_partial(j)?.radial_partial(j)?)?;
        }
        Ok(acc)
    }

    pub fn laplacian_power(&self, k: u32) -> Result<Self> {
        let mut f = self.clone();
        for _ in 0..k {
            f = f.laplacian()?;
        }
        Ok(f)
    }

    /// Whether the field is `c r^(-d)` with the given `c` and `d`.
    pub fn equals_radial(&self, c: &Rational, d: u32) -> bool {
        if c.is_zero() {
            return self.is_zero();
        }
        self.r_power == d && self.radial_coefficient().as_ref() == Some(c)
    }
}

/// Componentwise Euclidean pairing `sum_i a_i b_i`.
pub fn inner_product(a: &[RadialField], b: &[RadialField]) -> Result<RadialField> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let Some(dim) = a.first().map(RadialField::dim) else {
        return Err(Error::domain(
            "inner product of empty lists has no dimension",
        ));
    };
    // Accumulate numerators per r-power so only one reduction runs at the end.
    let mut acc: Option<(SpherePoly, u32)> = None;
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let d = x.r_power + y.r_power;
        let prod = x.numerator.mul(&y.numerator)?;
        acc = Some(match acc {
            None => (prod, d),
            Some((p, e)) if e == d => (p.add(&prod)?, d),
            Some((_, e)) => {
                return Err(Error::MixedRadialPower { left: e, right: d });
            }
        });
    }
    Ok(match acc {
        None => RadialField::zero(dim),
        Some((p, d)) => RadialField::new(p, d),
    })
}

impl fmt::Debug for RadialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RadialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r_power == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "[{}] / r^{}", self.numerator, self.r_power)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn y(m: usize, i: usize) -> RadialField {
        RadialField::coordinate(m, i).unwrap()
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let c = RadialField::constant(3, int(1));
        for j in 0..3 {
            assert!(c.radial_partial(j).unwrap().is_zero());
        }
    }

    #[test]
    fn derivative_of_first_coordinate() {
        // d(x1/r)/dx1 = (1 - y1^2)/r
        let f = y(3, 0).radial_partial(0).unwrap();
        let one = SpherePoly::one(3);
        let y1sq = SpherePoly::var(3, 0).unwrap().mul_var(0).unwrap();
        assert_eq!(f, RadialField::new(one.sub(&y1sq).unwrap(), 1));
    }

    #[test]
    fn derivative_of_inverse_r() {
        let f = RadialField::inverse_r_power(4, 1);
        for j in 0..4 {
            assert_eq!(
                f.radial_partial(j).unwrap(),
                y(4, j)
                    .neg()
                    .mul(&RadialField::inverse_r_power(4, 2))
                    .unwrap()
            );
        }
    }

    #[test]
    fn axis_out_of_range() {
        assert!(matches!(
            y(3, 0).radial_partial(3),
            Err(Error::AxisOutOfRange { axis: 3, dim: 3 })
        ));
    }

    #[test]
    fn laplacian_examples_in_dimension_five() {
        assert!(RadialField::constant(5, int(7))
            .laplacian()
            .unwrap()
            .is_zero());
        assert_eq!(
            y(5, 0).laplacian().unwrap(),
            y(5, 0)
                .scale(&int(-4))
                .mul(&RadialField::inverse_r_power(5, 2))
                .unwrap()
        );
        let inv_r = RadialField::inverse_r_power(5, 1).laplacian().unwrap();
        assert!(inv_r.equals_radial(&int(-2), 3));
    }

    #[test]
    fn inner_products() {
        let m = 4;
        let ys: Vec<_> = (0..m).map(|i| y(m, i)).collect();
        assert!(inner_product(&ys, &ys).unwrap().equals_radial(&int(1), 0));
        assert!(inner_product(&[y(m, 0)], &[RadialField::zero(m)])
            .unwrap()
            .is_zero());
        assert!(matches!(
            inner_product(&ys, &ys[..2]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn gradient_of_radial_projection_has_density_m_minus_one() {
        let m = 3;
        let mut grads = Vec::new();
        for i in 0..m {
            for j in 0..m {
                grads.push(y(m, i).radial_partial(j).unwrap());
            }
        }
        assert!(inner_product(&grads, &grads)
            .unwrap()
            .equals_radial(&int(2), 2));
    }

    #[test]
    fn mixed_powers_are_rejected() {
        let a = RadialField::inverse_r_power(3, 1);
        let b = RadialField::inverse_r_power(3, 2);
        assert!(matches!(a.add(&b), Err(Error::MixedRadialPower { .. })));
        assert_eq!(a.add(&RadialField::zero(3)).unwrap(), a);
    }

    #[test]
    fn zero_field_is_canonical() {
        let f = RadialField::new(
            SpherePoly::norm_squared(3)
                .sub(&SpherePoly::one(3))
                .unwrap(),
            5,
        );
        assert!(f.is_zero());
        assert_eq!(f.r_power(), 0);
        assert!(RadialField::zero(3).mul_r().unwrap().is_zero());
        assert!(RadialField::constant(3, int(1)).mul_r().is_err());
    }
}
