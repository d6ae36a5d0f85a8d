//! Reference values computed without the library: integer arithmetic for the
//! stability polynomials and analytic integrals for the p-energy witness.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Transition dimensions `m(k, l)`, rows `k = 1..4`, columns `l = 1..10`.
pub const TABLE_1: [[u32; 10]; 4] = [
    [7, 12, 17, 22, 27, 31, 36, 41, 46, 51],
    [10, 15, 20, 25, 30, 35, 39, 44, 49, 54],
    [12, 18, 23, 28, 33, 38, 43, 47, 52, 57],
    [15, 20, 25, 31, 36, 41, 46, 50, 55, 60],
];

/// `4^k Q_k^l(m)`, an integer.
pub fn q_scaled(k: u32, l: u32, m: u32) -> i128 {
    let (l, m) = (l as i128, m as i128);
    let s = (k / 2) as i128;
    let mut alpha: i128 = if k.is_multiple_of(2) {
        1
    } else {
        (m - 2) * (m - 2)
    };
    for i in 1..=s {
        let f = if k.is_multiple_of(2) {
            (m - 4 * i) * (m + 4 * i - 4)
        } else {
            (m - 4 * i - 2) * (m + 4 * i - 2)
        };
        alpha *= f * f;
    }
    let mut b: i128 = 1;
    for j in 1..=k as i128 {
        b *= 4 * (2 * j + l - 2) * (2 * j - l - m);
    }
    if k.is_multiple_of(2) {
        alpha - b
    } else {
        alpha + b
    }
}

/// Least `m >= 2k+1` with `Q_k^l(m) >= 0`, by unbounded scan.
pub fn threshold_scan(k: u32, l: u32) -> u32 {
    (2 * k + 1..).find(|&m| q_scaled(k, l, m) >= 0).unwrap()
}

/// `|S^n|` via `|S^n| = 2 pi |S^{n-2}| / (n - 1)`.
pub fn sphere_area(n: u32) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI * sphere_area(n - 2) / (n as f64 - 1.0),
    }
}

/// Second variation along the witness for `(l, m, p)`, from
/// `int_{-pi/w}^0 sin^2(w t) dt = pi / (2w)` and `int sin cos = 0`.
pub fn witness_hessian(l: u32, m: u32, p: f64) -> f64 {
    let big_l = (l * (l + m - 2)) as f64;
    let mu0 = (m as f64 - p).powi(2) / 4.0 - big_l;
    assert!(mu0 < 0.0);
    let eps = -mu0 / 2.0;
    let w = (eps).sqrt();
    -eps * sphere_area(m - 1) * big_l.powf((p - 2.0) / 2.0) * PI / (2.0 * w)
}
