//! Truncated multivariate Taylor expansions in `m` variables, stored densely
//! over monomials listed by increasing total degree. A jet of order `n` is a
//! prefix of the master list, so truncation is slicing.

use std::collections::HashMap;

pub(crate) struct JetSpace {
    dim: usize,
    /// `counts[n]` monomials have total degree `<= n`.
    counts: Vec<usize>,
    /// `(i, j, k)`: monomial `i` times monomial `j` is monomial `k`; sorted by `k`.
    products: Vec<(usize, usize, usize)>,
    /// Per axis, `(source, target, exponent)` for `d/dh_axis`.
    derivatives: Vec<Vec<(usize, usize, f64)>>,
}

impl JetSpace {
    pub(crate) fn new(dim: usize, order: usize) -> Self {
        let mut monomials: Vec<Vec<u32>> = vec![vec![0; dim]];
        let mut counts = vec![1];
        let mut frontier = vec![vec![0u32; dim]];
        for _ in 0..order {
            let mut next = Vec::new();
            for e in &frontier {
                // Raise only axes at or after the last nonzero one; each monomial appears once.
                let start = e.iter().rposition(|&k| k > 0).unwrap_or(0);
                for axis in start..dim {
                    let mut f = e.clone();
                    f[axis] += 1;
                    next.push(f);
                }
            }
            monomials.extend(next.iter().cloned());
            counts.push(monomials.len());
            frontier = next;
        }
        let index: HashMap<&[u32], usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_slice(), i))
            .collect();
        let degree = |e: &[u32]| e.iter().sum::<u32>() as usize;

        let mut products = Vec::new();
        for (i, a) in monomials.iter().enumerate() {
            for (j, b) in monomials.iter().enumerate() {
                if degree(a) + degree(b) <= order {
                    let c: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    products.push((i, j, index[c.as_slice()]));
                }
            }
        }
        products.sort_by_key(|&(_, _, k)| k);

        let derivatives = (0..dim)
            .map(|axis| {
                monomials
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e[axis] > 0)
                    .map(|(k, e)| {
                        let mut f = e.clone();
                        f[axis] -= 1;
                        (k, index[f.as_slice()], e[axis] as f64)
                    })
                    .collect()
            })
            .collect();

        Self {
            dim,
            counts,
            products,
            derivatives,
        }
    }

    pub(crate) fn len(&self, order: usize) -> usize {
        self.counts[order]
    }

    fn order_of(&self, jet: &[f64]) -> usize {
        self.counts
            .iter()
            .position(|&c| c == jet.len())
            .expect("jet length is a prefix count")
    }

    /// The affine jet `c + h_axis` (or the constant `c` when `axis` is `None`).
    pub(crate) fn affine(&self, c: f64, axis: Option<usize>, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.len(order)];
        out[0] = c;
        if let (Some(axis), true) = (axis, order >= 1) {
            out[1 + axis] = 1.0;
        }
        out
    }

    /// Product truncated to the lower of the two orders.
    pub(crate) fn mul(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = a.len().min(b.len());
        let mut out = vec![0.0; n];
        for &(i, j, k) in &self.products {
            if k >= n {
                break;
            }
            out[k] += a[i] * b[j];
        }
        out
    }

    /// `d/dh_axis`, one order lower.
    pub(crate) fn partial(&self, a: &[f64], axis: usize) -> Vec<f64> {
        let order = self.order_of(a);
        assert!(order >= 1 && axis < self.dim);
        let n = self.len(order - 1);
        let mut out = vec![0.0; n];
        for &(k, target, e) in &self.derivatives[axis] {
            if k < a.len() && target < n {
                out[target] += e * a[k];
            }
        }
        out
    }

    /// `sum_k c_k u^k` for a jet `u` with zero constant term, by Horner.
    pub(crate) fn compose(&self, series: &[f64], u: &[f64]) -> Vec<f64> {
        let mut acc = vec![0.0; u.len()];
        for &c in series.iter().rev() {
            acc = self.mul(&acc, u);
            acc[0] += c;
        }
        acc
    }
}

/// Coefficients of `(1 + u)^alpha` up to `u^n`.
pub(crate) fn binomial_series(alpha: f64, n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for k in 1..=n {
        let prev = out[k - 1];
        out.push(prev * (alpha - (k - 1) as f64) / k as f64);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts_are_binomial() {
        let s = JetSpace::new(3, 4);
        assert_eq!(
            (0..=4).map(|n| s.len(n)).collect::<Vec<_>>(),
            vec![1, 4, 10, 20, 35]
        );
    }

    #[test]
    fn square_then_differentiate() {
        let s = JetSpace::new(2, 3);
        let x = s.affine(2.0, Some(0), 3);
        let sq = s.mul(&x, &x);
        // (2 + h0)^2 = 4 + 4 h0 + h0^2; derivative 4 + 2 h0.
        let d = s.partial(&sq, 0);
        assert_eq!(d.len(), s.len(2));
        assert_eq!((d[0], d[1], d[2]), (4.0, 2.0, 0.0));
    }

    #[test]
    fn series_composition() {
        let s = JetSpace::new(1, 5);
        let u = s.affine(0.0, Some(0), 5);
        let v = s.compose(&binomial_series(0.5, 5), &u);
        let expected = binomial_series(0.5, 5);
        for (a, b) in v.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
