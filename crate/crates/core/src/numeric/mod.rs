//! Floating-point evaluation of `u^(l)` and finite-difference checks of the
//! harmonic map equation and the energy density.
//!
//! `eval_map` runs the defining recursion on truncated Taylor jets instead
//! of symbolic polynomials, so it shares no code with the exact layer.

mod jet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::algebra::rational::to_f64;
use crate::algebra::RadialField;
use crate::error::{Error, Result};
use crate::radial_map::RadialTensor;
use jet::{binomial_series, JetSpace};

/// Central-difference step as a fraction of `|x|`.
pub const STEP_FACTOR: f64 = 1e-4;
const MIN_RADIUS: f64 = 1e-6;
const MAX_STEP_FACTOR: f64 = 1e-2;

/// A point of `R^m` away from the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
    norm: f64,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= MIN_RADIUS {
            return Err(Error::domain(format!(
                "point at distance {norm} from the origin; need r > {MIN_RADIUS}"
            )));
        }
        Ok(Self { coords, norm })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.coords.iter().map(|c| c * lambda).collect())
    }

    fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut coords = self.coords.clone();
        coords[axis] += h;
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        Self { coords, norm }
    }
}

fn check_params(level: u32, dim: usize, x: &Point) -> Result<()> {
    if dim < 2 || level < 1 || level as usize > dim {
        return Err(Error::domain(format!(
            "need m >= 2 and 1 <= l <= m, got l = {level}, m = {dim}"
        )));
    }
    if x.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: dim,
        });
    }
    Ok(())
}

/// `C_{l,m} = sqrt(prod_{j=2}^{l} (j+m-3)/(2j+m-4))`.
pub fn normalizing_constant(level: u32, dim: usize) -> f64 {
    let m = dim as f64;
    (2..=level)
        .map(|j| (j as f64 + m - 3.0) / (2.0 * j as f64 + m - 4.0))
        .product::<f64>()
        .sqrt()
}

/// The `m^l` components of `u^(l)(x)`, ordered as in the exact construction.
pub fn eval_map(level: u32, dim: usize, x: &Point) -> Result<Vec<f64>> {
    check_params(level, dim, x)?;
    let order = (level - 1) as usize;
    let space = JetSpace::new(dim, order);

    // |x + h|^2 = s0 (1 + u) with u vanishing at h = 0.
    let s0 = x.norm() * x.norm();
    let mut u = vec![0.0; space.len(order)];
    let shifted: Vec<Vec<f64>> = (0..dim)
        .map(|i| space.affine(x.coords()[i], Some(i), order))
        .collect();
    for xi in &shifted {
        for (a, b) in u.iter_mut().zip(space.mul(xi, xi)) {
            *a += b / s0;
        }
    }
    u[0] = 0.0;
    let r: Vec<f64> = space
        .compose(&binomial_series(0.5, order), &u)
        .iter()
        .map(|c| c * x.norm())
        .collect();
    let inv_r: Vec<f64> = space
        .compose(&binomial_series(-0.5, order), &u)
        .iter()
        .map(|c| c / x.norm())
        .collect();
    let y: Vec<Vec<f64>> = shifted.iter().map(|xi| space.mul(xi, &inv_r)).collect();

    let mut comps = y.clone();
    for l in 2..=level {
        let damping = 1.0 / (l as f64 + dim as f64 - 3.0);
        let next_len = space.len(order - (l - 1) as usize);
        comps = (0..comps.len() * dim)
            .into_par_iter()
            .map(|flat| {
                let (old, axis) = (&comps[flat / dim], flat % dim);
                let head = space.mul(old, &y[axis]);
                let tail = space.mul(&r, &space.partial(old, axis));
                (0..next_len).map(|k| head[k] - damping * tail[k]).collect()
            })
            .collect();
    }
    let c = normalizing_constant(level, dim);
    Ok(comps.iter().map(|jet| c * jet[0]).collect())
}

fn check_step(x: &Point, h: f64) -> Result<()> {
    if h.is_nan() || h <= 0.0 || h > MAX_STEP_FACTOR * x.norm() {
        return Err(Error::domain(format!(
            "step h = {h} too large relative to r = {}",
            x.norm()
        )));
    }
    Ok(())
}

/// Central second differences of `u^(l)` summed over the axes.
pub fn fd_laplacian(level: u32, dim: usize, x: &Point, h: f64) -> Result<Vec<f64>> {
    check_params(level, dim, x)?;
    check_step(x, h)?;
    let centre = eval_map(level, dim, x)?;
    let mut acc = vec![0.0; centre.len()];
    for axis in 0..dim {
        let plus = eval_map(level, dim, &x.shifted(axis, h))?;
        let minus = eval_map(level, dim, &x.shifted(axis, -h))?;
        for (k, a) in acc.iter_mut().enumerate() {
            *a += (plus[k] - 2.0 * centre[k] + minus[k]) / (h * h);
        }
    }
    Ok(acc)
}

/// `|grad u^(l)|^2` from central first differences.
pub fn fd_energy_density(level: u32, dim: usize, x: &Point, h: f64) -> Result<f64> {
    check_params(level, dim, x)?;
    check_step(x, h)?;
    let mut total = 0.0;
    for axis in 0..dim {
        let plus = eval_map(level, dim, &x.shifted(axis, h))?;
        let minus = eval_map(level, dim, &x.shifted(axis, -h))?;
        total += plus
            .iter()
            .zip(&minus)
            .map(|(p, q)| ((p - q) / (2.0 * h)).powi(2))
            .sum::<f64>();
    }
    Ok(total)
}

/// `P(x/r) r^(-d)` in floating point.
pub fn eval_field(f: &RadialField, x: &Point) -> Result<f64> {
    if f.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: x.dim(),
        });
    }
    let y: Vec<f64> = x.coords().iter().map(|c| c / x.norm()).collect();
    let p: f64 = f
        .numerator()
        .terms()
        .map(|(e, c)| {
            e.iter()
                .zip(&y)
                .fold(to_f64(c), |acc, (&k, yi)| acc * yi.powi(k as i32))
        })
        .sum();
    Ok(p * x.norm().powi(-(f.r_power() as i32)))
}

/// `count` points with uniform direction and radius uniform in `[0.5, 2]`.
pub fn random_shell_points(dim: usize, count: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let len = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
        let radius = rng.random_range(0.5..=2.0);
        if len > 1e-3 {
            out.push(
                Point::new(dir.iter().map(|c| c * radius / len).collect()).expect("radius >= 0.5"),
            );
        }
    }
    out
}

/// Worst deviations over a point set. Laplacian and energy errors are
/// relative; the norm deviation and symbolic gap are absolute.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericReport {
    pub level: u32,
    pub dim: usize,
    pub points: usize,
    pub norm_deviation: f64,
    pub laplacian_error: f64,
    pub energy_error: f64,
    /// `None` when no symbolic tensor was supplied.
    pub symbolic_gap: Option<f64>,
}

impl NumericReport {
    pub fn passes(&self, norm_tol: f64, fd_tol: f64, symbolic_tol: f64) -> bool {
        self.norm_deviation < norm_tol
            && self.laplacian_error < fd_tol
            && self.energy_error < fd_tol
            && self.symbolic_gap.is_none_or(|g| g < symbolic_tol)
    }
}

struct PointErrors {
    norm: f64,
    laplacian: f64,
    energy: f64,
    symbolic: f64,
}

fn point_errors(
    level: u32,
    dim: usize,
    t: Option<&RadialTensor>,
    x: &Point,
) -> Result<PointErrors> {
    let eigen = (level as f64) * (level as f64 + dim as f64 - 2.0);
    let r2 = x.norm() * x.norm();
    let h = STEP_FACTOR * x.norm();

    let u = eval_map(level, dim, x)?;
    let norm = (u.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs();

    let lap = fd_laplacian(level, dim, x, h)?;
    let (mut diff, mut size) = (0.0, 0.0);
    for (a, uk) in lap.iter().zip(&u) {
        let expected = -eigen / r2 * uk;
        diff += (a - expected).powi(2);
        size += expected * expected;
    }
    let laplacian = (diff / size).sqrt();

    let energy = ((fd_energy_density(level, dim, x, h)? - eigen / r2) / (eigen / r2)).abs();

    let mut symbolic: f64 = 0.0;
    if let Some(t) = t {
        let c = to_f64(t.scale_sq()).sqrt();
        for (f, uk) in t.components().iter().zip(&u) {
            symbolic = symbolic.max((c * eval_field(f, x)? - uk).abs());
        }
    }
    Ok(PointErrors {
        norm,
        laplacian,
        energy,
        symbolic,
    })
}

/// Checks `u^(l)` by finite differences at `count` seeded points and, when
/// `t` is given, compares its components with the jet evaluation.
pub fn oracle_report(
    level: u32,
    dim: usize,
    t: Option<&RadialTensor>,
    count: usize,
    seed: u64,
) -> Result<NumericReport> {
    if let Some(t) = t {
        if (t.level(), t.dim()) != (level, dim) {
            return Err(Error::domain("tensor does not match (l, m)"));
        }
    }
    let points = random_shell_points(dim, count, seed);
    let errors: Vec<PointErrors> = points
        .par_iter()
        .map(|x| point_errors(level, dim, t, x))
        .collect::<Result<_>>()?;
    let worst = |f: fn(&PointErrors) -> f64| errors.iter().map(f).fold(0.0, f64::max);
    Ok(NumericReport {
        level,
        dim,
        points: count,
        norm_deviation: worst(|e| e.norm),
        laplacian_error: worst(|e| e.laplacian),
        energy_error: worst(|e| e.energy),
        symbolic_gap: t.map(|_| worst(|e| e.symbolic)),
    })
}
