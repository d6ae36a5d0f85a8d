//! Symbolic construction of the generalized radial projection `u^(l)` and
//! exact verification of its identities.
//!
//! Components are stored without the normalizing constants `C_{j,m}`; the
//! tensor tracks only the exact product of their squares, `scale_sq`. Linear
//! identities are checked on the unscaled components, quadratic ones are
//! multiplied by `scale_sq`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{inner_product, RadialField, Rational};
use crate::error::{Error, Result};
use crate::stability::b_product;

/// Which coordinate multiplies the previous level in the recursion step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexConvention {
    /// `y_{i_l} u_{i_1..i_{l-1}}`, pairing the factor with the derivative axis.
    LastIndex,
    /// `y_{i_1} u_{i_1..i_{l-1}}`, the first index of the multi-index.
    FirstIndex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialTensor {
    level: u32,
    dim: usize,
    components: Vec<RadialField>,
    scale_sq: Rational,
    convention: Option<IndexConvention>,
}

impl RadialTensor {
    /// Wraps an arbitrary component family, e.g. to probe the verifiers.
    pub fn from_parts(
        level: u32,
        dim: usize,
        components: Vec<RadialField>,
        scale_sq: Rational,
    ) -> Result<Self> {
        let expected = component_count(level, dim)?;
        if components.len() != expected {
            return Err(Error::LengthMismatch {
                left: components.len(),
                right: expected,
            });
        }
        if let Some(bad) = components.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: bad.dim(),
                right: dim,
            });
        }
        if scale_sq <= Rational::zero() {
            return Err(Error::domain("scale_sq must be positive"));
        }
        Ok(Self {
            level,
            dim,
            components,
            scale_sq,
            convention: None,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[RadialField] {
        &self.components
    }

    pub fn scale_sq(&self) -> &Rational {
        &self.scale_sq
    }

    /// The recursion convention that produced the tensor, if it was built.
    pub fn convention(&self) -> Option<IndexConvention> {
        self.convention
    }

    /// Component at a zero-based multi-index `(i_1, ..., i_l)`.
    pub fn component(&self, index: &[usize]) -> Result<&RadialField> {
        if index.len() != self.level as usize {
            return Err(Error::LengthMismatch {
                left: index.len(),
                right: self.level as usize,
            });
        }
        let mut flat = 0;
        for &i in index {
            if i >= self.dim {
                return Err(Error::AxisOutOfRange {
                    axis: i,
                    dim: self.dim,
                });
            }
            flat = flat * self.dim + i;
        }
        Ok(&self.components[flat])
    }

    /// Multi-index of a flat position, most significant index first.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.level as usize];
        for slot in out.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
        out
    }

    pub fn with_component_zeroed(&self, flat: usize) -> Self {
        let mut t = self.clone();
        t.components[flat] = RadialField::zero(self.dim);
        t.convention = None;
        t
    }
}

/// The generalized equator map `(u^(l), 0)`; the trailing zero is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct EquatorMap {
    base: RadialTensor,
}

impl EquatorMap {
    pub fn new(base: RadialTensor) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &RadialTensor {
        &self.base
    }

    /// Number of ambient coordinates, `m^l + 1`.
    pub fn ambient_len(&self) -> usize {
        self.base.components.len() + 1
    }

    /// All ambient components including the zero coordinate.
    pub fn components(&self) -> Vec<RadialField> {
        let mut out = self.base.components.clone();
        out.push(RadialField::zero(self.base.dim));
        out
    }
}

fn component_count(level: u32, dim: usize) -> Result<usize> {
    dim.checked_pow(level)
        .ok_or_else(|| Error::domain(format!("{dim}^{level} components overflow")))
}

/// `prod_{j=2}^{l} (j+m-3)/(2j+m-4)`, the square of the normalizing constant.
pub fn scale_sq_product(level: u32, dim: usize) -> Rational {
    let m = dim as i64;
    (2..=level as i64).fold(Rational::one(), |acc, j| {
        acc * Rational::new((j + m - 3).into(), (2 * j + m - 4).into())
    })
}

/// Builds `u^(l)` on `R^m`, trying the last-index convention first and
/// falling back to the first-index one if the unit-norm check fails.
pub fn build_radial_map(level: u32, dim: usize) -> Result<RadialTensor> {
    if dim < 2 {
        return Err(Error::domain(format!(
            "dimension m = {dim} must be at least 2"
        )));
    }
    if level < 1 || level as usize > dim {
        return Err(Error::domain(format!(
            "level l = {level} must satisfy 1 <= l <= m = {dim}"
        )));
    }
    for convention in [IndexConvention::LastIndex, IndexConvention::FirstIndex] {
        let t = build_with_convention(level, dim, convention)?;
        if verify_unit_norm(&t) {
            return Ok(t);
        }
    }
    Err(Error::inconsistent(format!(
        "u^({level}) on R^{dim} fails the unit-norm check under both index conventions"
    )))
}

/// Runs the recursion with a fixed convention and no validation.
pub fn build_with_convention(
    level: u32,
    dim: usize,
    convention: IndexConvention,
) -> Result<RadialTensor> {
    if dim < 1 || level < 1 {
        return Err(Error::domain("level and dimension must be positive"));
    }
    component_count(level, dim)?;
    let mut components: Vec<RadialField> = (0..dim)
        .map(|i| RadialField::coordinate(dim, i))
        .collect::<Result<_>>()?;
    let coords = components.clone();

    for l in 2..=level {
        let shift = l as i64 + dim as i64 - 3;
        if shift == 0 {
            return Err(Error::domain("recursion constant 1/(l+m-3) is undefined"));
        }
        let damping = Rational::new((-1).into(), shift.into());
        let prev_level = l - 1;
        let next: Vec<RadialField> = (0..components.len() * dim)
            .into_par_iter()
            .map(|flat| {
                let old_flat = flat / dim;
                let axis = flat % dim;
                let old = &components[old_flat];
                let factor = match convention {
                    IndexConvention::LastIndex => axis,
                    IndexConvention::FirstIndex => old_flat / dim.pow(prev_level - 1),
                };
                let head = old.mul(&coords[factor])?;
                let tail = old.radial_partial(axis)?.mul_r()?.scale(&damping);
                head.add(&tail)
            })
            .collect::<Result<_>>()?;
        components = next;
    }

    Ok(RadialTensor {
        level,
        dim,
        components,
        scale_sq: scale_sq_product(level, dim),
        convention: Some(convention),
    })
}

/// Distinct components with their multiplicities, in first-seen order.
fn grouped(components: &[RadialField]) -> Vec<(&RadialField, usize)> {
    let mut slot: HashMap<&RadialField, usize> = HashMap::new();
    let mut out: Vec<(&RadialField, usize)> = Vec::new();
    for c in components {
        match slot.get(c) {
            Some(&i) => out[i].1 += 1,
            None => {
                slot.insert(c, out.len());
                out.push((c, 1));
            }
        }
    }
    out
}

/// `sum_c mult_c * f(c)`, a quadratic quantity summed over the tensor.
fn weighted_sum<F>(groups: &[(&RadialField, usize)], dim: usize, f: F) -> Result<RadialField>
where
    F: Fn(&RadialField) -> Result<RadialField> + Sync,
{
    let parts: Vec<RadialField> = groups
        .par_iter()
        .map(|(c, n)| Ok(f(c)?.scale(&Rational::from_integer((*n).into()))))
        .collect::<Result<_>>()?;
    parts
        .iter()
        .try_fold(RadialField::zero(dim), |acc, p| acc.add(p))
}

/// `scale_sq * sum |component|^2 == 1`.
pub fn verify_unit_norm(t: &RadialTensor) -> bool {
    let groups = grouped(&t.components);
    weighted_sum(&groups, t.dim, |c| c.mul(c))
        .map(|s| s.scale(&t.scale_sq).equals_radial(&Rational::one(), 0))
        .unwrap_or(false)
}

/// `sum_j y_j d_j f == 0` for every field in the list.
pub fn tangency_holds(components: &[RadialField]) -> bool {
    grouped(components).par_iter().all(|(c, _)| {
        let dim = c.dim();
        let mut acc = RadialField::zero(dim);
        for j in 0..dim {
            let term = c.radial_partial(j).and_then(|d| d.mul_coordinate(j));
            match term.and_then(|t| acc.add(&t)) {
                Ok(next) => acc = next,
                Err(_) => return false,
            }
        }
        acc.is_zero()
    })
}

pub fn verify_tangency(t: &RadialTensor) -> bool {
    tangency_holds(&t.components)
}

/// `scale_sq * sum_{c,j} (d_j c)^2 == l(l+m-2) / r^2`.
pub fn verify_energy_density(t: &RadialTensor) -> bool {
    let groups = grouped(&t.components);
    let density = weighted_sum(&groups, t.dim, |c| {
        let grads: Vec<RadialField> = (0..t.dim)
            .map(|j| c.radial_partial(j))
            .collect::<Result<_>>()?;
        inner_product(&grads, &grads)
    });
    let l = t.level as i64;
    let expected = Rational::from_integer((l * (l + t.dim as i64 - 2)).into());
    density
        .map(|s| s.scale(&t.scale_sq).equals_radial(&expected, 2))
        .unwrap_or(false)
}

/// Iterated Laplacians of the distinct components of a tensor, computed
/// once and shared by the order-k checks.
pub struct LaplacianTower<'a> {
    tensor: &'a RadialTensor,
    groups: Vec<(&'a RadialField, usize)>,
    /// `powers[k-1][g]` is `Delta^k` of group `g`.
    powers: Vec<Vec<RadialField>>,
}

impl<'a> LaplacianTower<'a> {
    pub fn new(tensor: &'a RadialTensor, max_order: u32) -> Result<Self> {
        let groups = grouped(&tensor.components);
        let mut powers: Vec<Vec<RadialField>> = Vec::new();
        for _ in 0..max_order {
            let prev: Vec<&RadialField> = match powers.last() {
                Some(p) => p.iter().collect(),
                None => groups.iter().map(|(c, _)| *c).collect(),
            };
            let next: Vec<RadialField> = prev
                .par_iter()
                .map(|f| f.laplacian())
                .collect::<Result<_>>()?;
            powers.push(next);
        }
        Ok(Self {
            tensor,
            groups,
            powers,
        })
    }

    pub fn max_order(&self) -> u32 {
        self.powers.len() as u32
    }

    fn order(&self, k: u32) -> Result<&[RadialField]> {
        if k == 0 || k > self.max_order() {
            return Err(Error::domain(format!(
                "order {k} outside 1..={}",
                self.max_order()
            )));
        }
        Ok(&self.powers[k as usize - 1])
    }

    /// `Delta^k c == B_k^l(m) c / r^{2k}` for every component.
    pub fn delta_power_holds(&self, k: u32) -> bool {
        let Ok(powers) = self.order(k) else {
            return false;
        };
        let b = b_product(k, self.tensor.level, self.tensor.dim as u32);
        self.groups
            .par_iter()
            .zip(powers.par_iter())
            .all(|((c, _), dk)| {
                let r_factor = RadialField::inverse_r_power(c.dim(), 2 * k);
                c.scale(&b)
                    .mul(&r_factor)
                    .is_ok_and(|predicted| dk == &predicted)
            })
    }

    /// `scale_sq * <Delta^k u, u> r^{2k}` if it is a constant.
    pub fn pairing_constant(&self, k: u32) -> Option<Rational> {
        let powers = self.order(k).ok()?;
        let pairing = self.pairing(powers).ok()?;
        let scaled = pairing.scale(&self.tensor.scale_sq);
        let c = scaled.radial_coefficient()?;
        (c.is_zero() || scaled.r_power() == 2 * k).then_some(c)
    }

    fn pairing(&self, powers: &[RadialField]) -> Result<RadialField> {
        let terms: Vec<RadialField> = self
            .groups
            .par_iter()
            .zip(powers.par_iter())
            .map(|((c, n), dk)| Ok(dk.mul(c)?.scale(&Rational::from_integer((*n).into()))))
            .collect::<Result<_>>()?;
        terms
            .iter()
            .try_fold(RadialField::zero(self.tensor.dim), |acc, p| acc.add(p))
    }

    /// `Delta^k u - scale_sq <Delta^k u, u> u == 0` componentwise, and the
    /// pairing equals `B_k^l(m) r^{-2k}`.
    pub fn k_harmonic_holds(&self, k: u32) -> bool {
        let Ok(powers) = self.order(k) else {
            return false;
        };
        let Ok(pairing) = self.pairing(powers) else {
            return false;
        };
        let pairing = pairing.scale(&self.tensor.scale_sq);
        let residual_vanishes =
            self.groups
                .par_iter()
                .zip(powers.par_iter())
                .all(|((c, _), dk)| {
                    pairing
                        .mul(c)
                        .and_then(|p| dk.sub(&p))
                        .map(|r| r.is_zero())
                        .unwrap_or(false)
                });
        let b = b_product(k, self.tensor.level, self.tensor.dim as u32);
        residual_vanishes && pairing.equals_radial(&b, 2 * k)
    }
}

pub fn verify_delta_power(t: &RadialTensor, k: u32) -> bool {
    k >= 1
        && LaplacianTower::new(t, k)
            .map(|tower| tower.delta_power_holds(k))
            .unwrap_or(false)
}

pub fn verify_k_harmonic(t: &RadialTensor, k: u32) -> bool {
    k >= 1
        && LaplacianTower::new(t, k)
            .map(|tower| tower.k_harmonic_holds(k))
            .unwrap_or(false)
}

/// Outcome of every symbolic identity for one tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub level: u32,
    pub dim: usize,
    pub convention: Option<IndexConvention>,
    pub unit_norm: bool,
    pub tangency: bool,
    pub energy_density: bool,
    /// `(k, delta_power, k_harmonic, pairing constant)` for `k = 1..=k_max`.
    pub orders: Vec<(u32, bool, bool, Option<Rational>)>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.unit_norm
            && self.tangency
            && self.energy_density
            && self.orders.iter().all(|(_, d, h, _)| *d && *h)
    }
}

pub fn verify_identities(t: &RadialTensor, k_max: u32) -> Result<IdentityReport> {
    let tower = LaplacianTower::new(t, k_max)?;
    let orders = (1..=k_max)
        .map(|k| {
            (
                k,
                tower.delta_power_holds(k),
                tower.k_harmonic_holds(k),
                tower.pairing_constant(k),
            )
        })
        .collect();
    Ok(IdentityReport {
        level: t.level,
        dim: t.dim,
        convention: t.convention,
        unit_norm: verify_unit_norm(t),
        tangency: verify_tangency(t),
        energy_density: verify_energy_density(t),
        orders,
    })
}

/// Numerator degree of a field, zero for the zero field.
pub fn numerator_degree(f: &RadialField) -> u32 {
    f.numerator().degree().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, ratio};
    use crate::algebra::SpherePoly;

    #[test]
    fn level_one_is_the_radial_projection() {
        let t = build_radial_map(1, 3).unwrap();
        assert_eq!(t.scale_sq(), &int(1));
        for i in 0..3 {
            assert_eq!(t.components()[i], RadialField::coordinate(3, i).unwrap());
        }
    }

    #[test]
    fn level_two_in_the_plane() {
        let t = build_radial_map(2, 2).unwrap();
        assert_eq!(t.scale_sq(), &ratio(1, 2));
        assert_eq!(t.convention(), Some(IndexConvention::LastIndex));
        let y1 = SpherePoly::var(2, 0).unwrap();
        let y2 = SpherePoly::var(2, 1).unwrap();
        let off = RadialField::new(y1.mul(&y2).unwrap().scale(&int(2)), 0);
        assert_eq!(t.component(&[0, 1]).unwrap(), &off);
        assert_eq!(t.component(&[1, 0]).unwrap(), &off);
        let diag = y1
            .mul(&y1)
            .unwrap()
            .scale(&int(2))
            .sub(&SpherePoly::one(2))
            .unwrap();
        assert_eq!(t.component(&[0, 0]).unwrap(), &RadialField::new(diag, 0));
        // 2 y2^2 - 1 = 1 - 2 y1^2 on the circle
        assert_eq!(
            t.component(&[1, 1]).unwrap(),
            &t.component(&[0, 0]).unwrap().neg()
        );
    }

    #[test]
    fn level_above_dimension_rejected() {
        assert!(matches!(build_radial_map(3, 2), Err(Error::Domain(_))));
        assert!(matches!(build_radial_map(1, 1), Err(Error::Domain(_))));
        assert!(matches!(build_radial_map(0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn first_index_convention_breaks_unit_norm() {
        let t = build_with_convention(2, 3, IndexConvention::FirstIndex).unwrap();
        assert!(!verify_unit_norm(&t));
        let t = build_with_convention(2, 3, IndexConvention::LastIndex).unwrap();
        assert!(verify_unit_norm(&t));
    }

    #[test]
    fn zeroed_component_fails_unit_norm() {
        let t = build_radial_map(2, 3).unwrap();
        assert!(verify_unit_norm(&t));
        assert!(!verify_unit_norm(&t.with_component_zeroed(4)));
    }

    #[test]
    fn inverse_r_is_not_tangential() {
        assert!(!tangency_holds(&[RadialField::inverse_r_power(3, 1)]));
        assert!(verify_tangency(&build_radial_map(1, 4).unwrap()));
        assert!(verify_tangency(&build_radial_map(2, 3).unwrap()));
    }

    #[test]
    fn energy_density_examples() {
        for (l, m) in [(1, 3), (2, 3), (2, 4)] {
            assert!(
                verify_energy_density(&build_radial_map(l, m).unwrap()),
                "l={l} m={m}"
            );
        }
        let t = build_radial_map(2, 3).unwrap();
        let wrong = RadialTensor::from_parts(2, 3, t.components().to_vec(), int(1)).unwrap();
        assert!(!verify_energy_density(&wrong));
    }

    #[test]
    fn delta_power_examples() {
        let t = build_radial_map(1, 5).unwrap();
        assert!(verify_delta_power(&t, 1));
        assert!(verify_delta_power(&t, 2));
        assert!(verify_delta_power(&build_radial_map(2, 4).unwrap(), 1));
    }

    #[test]
    fn k_harmonic_examples() {
        let t = build_radial_map(1, 5).unwrap();
        assert!(verify_k_harmonic(&t, 2));
        let tower = LaplacianTower::new(&t, 2).unwrap();
        assert_eq!(tower.pairing_constant(2), Some(int(24)));
        assert!(verify_k_harmonic(&build_radial_map(2, 4).unwrap(), 1));
        assert!(verify_k_harmonic(&build_radial_map(2, 5).unwrap(), 2));
    }

    #[test]
    fn from_parts_validates_shape() {
        let c = vec![RadialField::zero(3); 3];
        assert!(RadialTensor::from_parts(2, 3, c.clone(), int(1)).is_err());
        assert!(RadialTensor::from_parts(1, 3, c.clone(), int(0)).is_err());
        assert!(RadialTensor::from_parts(1, 3, c, int(1)).is_ok());
    }

    #[test]
    fn multi_index_round_trip() {
        let t = build_radial_map(3, 3).unwrap();
        for flat in 0..27 {
            let idx = t.multi_index(flat);
            assert_eq!(t.component(&idx).unwrap(), &t.components()[flat]);
        }
    }

    #[test]
    fn equator_map_pads_zero() {
        let e = EquatorMap::new(build_radial_map(2, 3).unwrap());
        assert_eq!(e.ambient_len(), 10);
        assert!(e.components().last().unwrap().is_zero());
    }
}
