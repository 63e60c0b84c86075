//! Growth functions in the log domain.
//!
//! Closed forms are used wherever one is known; the Heisenberg group falls
//! back to memoized breadth-first shells.

use super::{heisenberg, GroupSpec};
use crate::error::Result;

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln |S(i)|` for `i = 0..=r`; empty spheres give `-inf`.
pub fn log_sphere_sizes(spec: &GroupSpec, r: u64, cap: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    let r_us = r as usize;
    let out = match spec {
        GroupSpec::Lattice { dim } => {
            let d = *dim as u64;
            (0..=r)
                .map(|n| {
                    if n == 0 {
                        return 0.0;
                    }
                    let count: f64 =
                        (1..=d.min(n)).map(|i| 2f64.powi(i as i32) * binomial(d, i) * binomial(n - 1, i - 1)).sum();
                    count.ln()
                })
                .collect()
        }
        GroupSpec::Free { rank } => {
            let k = *rank as f64;
            (0..=r).map(|n| if n == 0 { 0.0 } else { (2.0 * k).ln() + (n - 1) as f64 * (2.0 * k - 1.0).ln() }).collect()
        }
        GroupSpec::Cyclic { order } => {
            let ball = |n: u64| -> u64 { (2 * n as u128 + 1).min(*order as u128) as u64 };
            (0..=r)
                .map(|n| {
                    let s = if n == 0 { 1 } else { ball(n) - ball(n - 1) };
                    if s == 0 {
                        f64::NEG_INFINITY
                    } else {
                        (s as f64).ln()
                    }
                })
                .collect()
        }
        GroupSpec::Heisenberg => heisenberg::sphere_sizes(r, cap)?.into_iter().map(|s| (s as f64).ln()).collect(),
        GroupSpec::Product { factors } => {
            let mut acc = vec![f64::NEG_INFINITY; r_us + 1];
            acc[0] = 0.0;
            for f in factors {
                let sf = log_sphere_sizes(f, r, cap)?;
                let mut next = vec![f64::NEG_INFINITY; r_us + 1];
                for (n, slot) in next.iter_mut().enumerate() {
                    let terms: Vec<f64> = (0..=n).map(|i| acc[i] + sf[n - i]).collect();
                    *slot = log_sum_exp(&terms);
                }
                acc = next;
            }
            acc
        }
    };
    Ok(out)
}

/// `ln vol B(r)`.
pub fn log_ball_volume(spec: &GroupSpec, r: u64, cap: usize) -> Result<f64> {
    Ok(log_sum_exp(&log_sphere_sizes(spec, r, cap)?))
}
