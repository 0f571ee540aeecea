//! Truncated-product estimates of the abscissa of `prod_p (1 + a_p(s))`.
//!
//! At a point `s` the product is declared divergent when some local term is
//! infinite (a pole), or when the mass `sum ln(1 + a_p(s))` over the top
//! dyadic window `(X/2, X]` of the prime range, relative to the window
//! `(X/4, X/2]`, is at least the same ratio for the critical sequence
//! `a_p = 1/p` on the same primes. For `a_p` of order `p^{-sigma}` the window
//! ratio behaves like `2^{1 - sigma}` times the critical one, so the test
//! separates `sigma < 1` from `sigma > 1` independently of the density of
//! the prime set.

use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct BisectionConfig {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
}

impl Default for BisectionConfig {
    fn default() -> Self {
        Self { lo: -4.0, hi: 8.0, tol: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AbscissaEstimate {
    Value { value: f64 },
    /// Every local term vanishes: the product is identically 1.
    NegInfinity,
    Inconclusive { reason: String },
}

impl AbscissaEstimate {
    pub fn value(&self) -> Option<f64> {
        match self {
            AbscissaEstimate::Value { value } => Some(*value),
            _ => None,
        }
    }
}

struct Windows<'a> {
    low: &'a [u64],
    high: &'a [u64],
    critical: f64,
}

fn windows(primes: &[u64]) -> Option<Windows<'_>> {
    let x = *primes.last()?;
    let a = primes.partition_point(|&p| p <= x / 4);
    let b = primes.partition_point(|&p| p <= x / 2);
    let (low, high) = (&primes[a..b], &primes[b..]);
    if low.len() < 8 || high.len() < 8 {
        return None;
    }
    let mass = |ps: &[u64]| ps.iter().map(|&p| (1.0 / p as f64).ln_1p()).sum::<f64>();
    Some(Windows { low, high, critical: mass(high) / mass(low) })
}

/// Whether the product diverges at `s`. Masses that underflow to zero count
/// as convergent; identically zero terms are caught by the caller.
fn diverges<F: Fn(u64, f64) -> f64 + Sync>(primes: &[u64], w: &Windows<'_>, a: &F, s: f64) -> bool {
    let bad = primes.par_iter().any(|&p| {
        let v = a(p, s);
        !v.is_finite() || v < 0.0
    });
    if bad {
        return true;
    }
    let mass = |ps: &[u64]| ps.par_iter().map(|&p| a(p, s).ln_1p()).sum::<f64>();
    let (m_low, m_high) = (mass(w.low), mass(w.high));
    if m_low == 0.0 {
        return m_high > 0.0;
    }
    m_high / m_low >= w.critical
}

/// Bisects for the abscissa of `prod_{p in primes} (1 + a(p, s))`.
pub fn empirical_abscissa<F: Fn(u64, f64) -> f64 + Sync>(
    primes: &[u64],
    a: &F,
    cfg: &BisectionConfig,
) -> AbscissaEstimate {
    let Some(w) = windows(primes) else {
        return AbscissaEstimate::Inconclusive {
            reason: format!("{} primes are too few to form comparison windows", primes.len()),
        };
    };
    if primes.iter().all(|&p| a(p, cfg.hi) == 0.0 && a(p, cfg.lo) == 0.0) {
        return AbscissaEstimate::NegInfinity;
    }
    let (mut lo, mut hi) = (cfg.lo, cfg.hi);
    match (diverges(primes, &w, a, lo), diverges(primes, &w, a, hi)) {
        (true, false) => {}
        (d_lo, d_hi) => {
            return AbscissaEstimate::Inconclusive {
                reason: format!("no bracket on [{lo}, {hi}]: divergence {d_lo:?} / {d_hi:?}"),
            }
        }
    }
    while hi - lo > cfg.tol / 4.0 {
        let mid = 0.5 * (lo + hi);
        if diverges(primes, &w, a, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    AbscissaEstimate::Value { value: 0.5 * (lo + hi) }
}

/// `sum_{p in primes} ln(1 + a(p, s))`, the log of the truncated product.
pub fn log_truncated_product<F: Fn(u64, f64) -> f64 + Sync>(primes: &[u64], a: &F, s: f64) -> f64 {
    primes.par_iter().map(|&p| a(p, s).ln_1p()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::primes_up_to;

    #[test]
    fn riemann_zeta_like_products() {
        let primes = primes_up_to(300_000);
        let cfg = BisectionConfig::default();
        let est = empirical_abscissa(&primes, &|p, s| (p as f64).powf(-s), &cfg);
        assert!((est.value().unwrap() - 1.0).abs() < 0.05, "{est:?}");
        let est = empirical_abscissa(&primes, &|p, s| (p as f64).powf(1.0 - 2.0 * s), &cfg);
        assert!((est.value().unwrap() - 1.0).abs() < 0.05, "{est:?}");
        let est = empirical_abscissa(&primes, &|p, s| (p as f64).powf(2.0 - 3.0 * s), &cfg);
        assert!((est.value().unwrap() - 1.0).abs() < 0.05, "{est:?}");
    }

    #[test]
    fn degenerate_inputs() {
        let primes = primes_up_to(100_000);
        let cfg = BisectionConfig::default();
        assert_eq!(empirical_abscissa(&primes, &|_, _| 0.0, &cfg), AbscissaEstimate::NegInfinity);
        assert!(matches!(
            empirical_abscissa(&[2, 3, 5], &|p, s| (p as f64).powf(-s), &cfg),
            AbscissaEstimate::Inconclusive { .. }
        ));
        // abscissa outside the bracket
        assert!(matches!(
            empirical_abscissa(&primes, &|p, s| (p as f64).powf(20.0 - s), &cfg),
            AbscissaEstimate::Inconclusive { .. }
        ));
    }

    #[test]
    fn underflow_counts_as_convergence() {
        let primes = primes_up_to(1_000_000);
        // p^{-8s} underflows to zero at the top of the bracket
        let est = empirical_abscissa(&primes, &|p, s| (p as f64).powf(-8.0 * s), &BisectionConfig::default());
        assert!((est.value().unwrap() - 0.125).abs() < 0.05, "{est:?}");
    }
}
