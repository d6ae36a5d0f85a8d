//! The explicit negative direction for the reduced second variation when the
//! ratio is below one, and the same quadratic form on other radial profiles.
//!
//! With `n = m - p`, `L = l(l+m-2)` and `v(r) = r^a sin(w ln r)`, `a = -n/2`,
//! the form is `vol(S^{m-1}) L^{(p-2)/2} int r^{n+1} (v'^2 - L v^2 / r^2) dr`.
//! Integrals over `[r0, 1]` are taken in `t = ln r`, where the power weights
//! cancel against `v` and the integrands stay bounded however small `r0` is.

use std::f64::consts::PI;

use super::quadrature::integrate;
use super::{mu, mu_exact, PParams};
use crate::algebra::rational::to_f64;
use crate::error::{Error, Result};

const SAMPLE_COUNT: usize = 201;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub mu: f64,
    pub epsilon: f64,
    pub r0: f64,
    /// `(r, v(r))` on `[r0, 1]`, evenly spaced in `ln r`.
    pub samples: Vec<(f64, f64)>,
    pub hessian_value: f64,
    /// `-epsilon vol L^{(p-2)/2} int v^2 r^{n-1} dr`, the value the form must equal.
    pub closed_form: f64,
}

impl Witness {
    pub fn relative_gap(&self) -> f64 {
        ((self.hessian_value - self.closed_form) / self.closed_form).abs()
    }
}

/// `|S^{m-1}| = 2 pi^{m/2} / Gamma(m/2)`.
pub fn vol_sphere(m: u32) -> f64 {
    // Gamma(m/2) by Gamma(x+1) = x Gamma(x) from Gamma(1/2) or Gamma(1).
    let (mut gamma, mut x) = if m.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    while x < m as f64 / 2.0 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(m as f64 / 2.0) / gamma
}

fn prefactor(params: &PParams) -> f64 {
    let l = to_f64(&params.eigenvalue());
    vol_sphere(params.dim()) * l.powf((params.p_f64() - 2.0) / 2.0)
}

fn half_gap(params: &PParams) -> f64 {
    (params.p_f64() - params.dim() as f64) / 2.0
}

/// The form on `v(r) = r^a sin(w ln r)` over `[exp(-pi/w), 1]`, with `a = (p-m)/2`.
pub fn oscillatory_form(params: &PParams, w: f64) -> f64 {
    let a = half_gap(params);
    let l = to_f64(&params.eigenvalue());
    let integrand = |t: f64| {
        let (s, c) = (w * t).sin_cos();
        (a * s + w * c).powi(2) - l * s * s
    };
    prefactor(params) * integrate(integrand, -PI / w, 0.0)
}

/// The form on an arbitrary profile `v` with derivative `dv`, over `[lo, hi] ⊂ (0, 1]`.
pub fn radial_quadratic_form<V, D>(params: &PParams, v: V, dv: D, lo: f64, hi: f64) -> f64
where
    V: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let n = params.dim() as f64 - params.p_f64();
    let l = to_f64(&params.eigenvalue());
    let integrand = |r: f64| r.powf(n + 1.0) * (dv(r).powi(2) - l * v(r).powi(2) / (r * r));
    prefactor(params) * integrate(integrand, lo, hi)
}

/// Negative direction with `epsilon = |mu_0| / 2` and `r0 = exp(-pi / sqrt(-mu))`.
pub fn instability_witness(params: &PParams) -> Result<Witness> {
    let mu0 = to_f64(&mu_exact(params));
    if mu0 >= 0.0 {
        return Err(Error::domain(
            "no witness exists: the ratio is at least 1, so the map is minimizing",
        ));
    }
    let epsilon = mu0.abs() / 2.0;
    let mu_value = mu(params, epsilon);
    let w = (-mu_value).sqrt();
    let t0 = -PI / w;
    let r0 = t0.exp();
    let a = half_gap(params);
    let l = to_f64(&params.eigenvalue());

    let samples = (0..SAMPLE_COUNT)
        .map(|i| {
            if i == 0 {
                return (r0, 0.0);
            }
            if i == SAMPLE_COUNT - 1 {
                return (1.0, 0.0);
            }
            let t = t0 * (1.0 - i as f64 / (SAMPLE_COUNT - 1) as f64);
            let r = t.exp();
            (r, (a * t).exp() * (w * t).sin())
        })
        .collect();

    let form = |t: f64| {
        let (s, c) = (w * t).sin_cos();
        (a * s + w * c).powi(2) - l * s * s
    };
    let weight = |t: f64| (w * t).sin().powi(2);
    let scale = prefactor(params);
    let hessian_value = scale * integrate(form, t0, 0.0);
    let closed_form = -epsilon * scale * integrate(weight, t0, 0.0);

    if hessian_value >= 0.0 {
        return Err(Error::inconsistent(format!(
            "witness form is non-negative: {hessian_value}"
        )));
    }
    Ok(Witness {
        mu: mu_value,
        epsilon,
        r0,
        samples,
        hessian_value,
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, ratio};

    #[test]
    fn sphere_volumes() {
        assert!((vol_sphere(2) - 2.0 * PI).abs() < 1e-12);
        assert!((vol_sphere(3) - 4.0 * PI).abs() < 1e-12);
        assert!((vol_sphere(4) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((vol_sphere(5) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn witness_in_dimension_five() {
        let w = instability_witness(&PParams::new(1, 5, int(2)).unwrap()).unwrap();
        assert!((w.epsilon - 7.0 / 8.0).abs() < 1e-15);
        assert!((w.mu + 7.0 / 8.0).abs() < 1e-15);
        assert!((w.r0 - (-PI / (7.0f64 / 8.0).sqrt()).exp()).abs() < 1e-15);
        assert!(w.hessian_value < 0.0);
        assert!(w.relative_gap() < 1e-6);
        assert_eq!(w.samples.first().unwrap().1, 0.0);
        assert_eq!(*w.samples.last().unwrap(), (1.0, 0.0));
    }

    #[test]
    fn witness_in_dimension_six() {
        let w = instability_witness(&PParams::new(1, 6, int(2)).unwrap()).unwrap();
        assert!((w.mu + 0.5).abs() < 1e-15);
        assert!((w.r0 - (-PI * 2f64.sqrt()).exp()).abs() < 1e-15);
        assert!(w.hessian_value < 0.0);
    }

    #[test]
    fn no_witness_when_minimizing() {
        assert!(instability_witness(&PParams::new(1, 7, int(2)).unwrap()).is_err());
    }

    #[test]
    fn oscillatory_profiles_on_the_stable_side() {
        let params = PParams::new(1, 9, ratio(5, 2)).unwrap();
        for w in [0.5, 1.0, 2.0] {
            assert!(oscillatory_form(&params, w) >= -1e-9);
        }
    }
}
