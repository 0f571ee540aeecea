use num_traits::Zero;
use serde::Serialize;

use super::points::{count_points, AffineVarietySpec};
use crate::error::{Error, Result};
use crate::rational::{format_q, q, to_f64, Q};

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub p: u64,
    pub count: u64,
    /// `|N_p - mu p^d| / p^{d - 1/2}`.
    pub scaled: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LangWeilFit {
    pub d: u32,
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub mu: Q,
    pub c: f64,
    pub residuals: Vec<Residual>,
    /// `|N_p - mu p^d| < c p^{d - 1/2}` at every supplied prime.
    pub holds: bool,
}

const MAX_DENOMINATOR: i64 = 12;

fn scaled_residuals(counts: &[(u64, u64)], d: u32, mu: f64) -> Vec<f64> {
    counts
        .iter()
        .map(|&(p, n)| {
            let pd = (p as f64).powi(d as i32);
            (n as f64 - mu * pd).abs() / (pd / (p as f64).sqrt())
        })
        .collect()
}

/// The positive rational of smallest denominator (at most 12) within
/// `delta` of `x`, falling back to the nearest such rational.
fn simplest_rational(x: f64, delta: f64) -> Option<Q> {
    for den in 1..=MAX_DENOMINATOR {
        let num = ((x - delta) * den as f64).ceil().max(1.0) as i64;
        if (num as f64) <= (x + delta) * den as f64 {
            return Some(q(num, den));
        }
    }
    (1..=MAX_DENOMINATOR)
        .map(|den| q(((x * den as f64).round() as i64).max(1), den))
        .min_by(|a, b| {
            (to_f64(a) - x).abs().partial_cmp(&(to_f64(b) - x).abs()).unwrap()
        })
}

/// Fits `N_p ~ mu p^d` to point counts. `d` is the rounded least-squares
/// slope of `log N_p` against `log p`; `mu` is the simplest rational within
/// `p^{-1/2}` of the median of `N_p / p^d` (`p` the median prime); `c` is the
/// largest scaled residual, inflated slightly so the inequality is strict.
pub fn langweil_fit_counts(counts: &[(u64, u64)]) -> Result<LangWeilFit> {
    if counts.len() < 5 {
        return Err(Error::InvalidInput(format!("need at least 5 primes, got {}", counts.len())));
    }
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .filter(|&&(_, n)| n > 0)
        .map(|&(p, n)| ((p as f64).ln(), (n as f64).ln()))
        .collect();
    if pts.is_empty() {
        return Err(Error::Undefined("point counts vanish at every prime: degenerate fit".into()));
    }
    let d = if pts.len() < 2 {
        0
    } else {
        let k = pts.len() as f64;
        let mx = pts.iter().map(|x| x.0).sum::<f64>() / k;
        let my = pts.iter().map(|x| x.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
        slope.round().max(0.0) as u32
    };
    let mut ratios: Vec<f64> = counts
        .iter()
        .map(|&(p, n)| n as f64 / (p as f64).powi(d as i32))
        .collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = ratios[ratios.len() / 2];
    let mut primes: Vec<u64> = counts.iter().map(|&(p, _)| p).collect();
    primes.sort_unstable();
    let delta = 1.0 / (primes[primes.len() / 2] as f64).sqrt();
    let mu = simplest_rational(median, delta)
        .ok_or_else(|| Error::Undefined("no rational leading coefficient".into()))?;
    let scaled = scaled_residuals(counts, d, to_f64(&mu));
    let c = scaled.iter().copied().fold(0.0, f64::max) * (1.0 + 1e-6) + 1e-9;
    let holds = !mu.is_zero() && scaled.iter().all(|&r| r < c);
    let residuals = counts
        .iter()
        .zip(scaled)
        .map(|(&(p, count), scaled)| Residual { p, count, scaled })
        .collect();
    Ok(LangWeilFit { d, mu, c, residuals, holds })
}

pub fn langweil_fit(v: &AffineVarietySpec, primes: &[u64], budget: u64) -> Result<LangWeilFit> {
    let counts = primes
        .iter()
        .map(|&p| count_points(v, p, budget).map(|n| (p, n)))
        .collect::<Result<Vec<_>>>()?;
    langweil_fit_counts(&counts)
}

impl std::fmt::Display for LangWeilFit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "d={} mu={} c={:.4}", self.d, format_q(&self.mu), self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::super::points::tests::curve;
    use super::*;
    use crate::rational::qi;

    const PRIMES: [u64; 7] = [5, 7, 11, 13, 17, 19, 23];

    #[test]
    fn plane_and_curves() {
        let plane = AffineVarietySpec { n: 2, polynomials: vec![] };
        let fit = langweil_fit(&plane, &PRIMES, 1 << 20).unwrap();
        assert_eq!((fit.d, fit.mu.clone()), (2, qi(1)));
        assert!(fit.c < 1e-6 && fit.holds);

        let e = curve(vec![(1, vec![0, 2]), (-1, vec![3, 0]), (1, vec![1, 0])]);
        let fit = langweil_fit(&e, &PRIMES, 1 << 20).unwrap();
        assert_eq!((fit.d, fit.mu.clone()), (1, qi(1)));
        assert!(fit.holds);
        // Hasse: |N_p - p| <= 2 sqrt(p) + 1 for this affine model
        assert!(fit.c <= 3.0);

        let axes = curve(vec![(1, vec![1, 1])]);
        let fit = langweil_fit(&axes, &PRIMES, 1 << 20).unwrap();
        assert_eq!((fit.d, fit.mu.clone()), (1, qi(2)));
        assert!(fit.holds);
    }

    #[test]
    fn degenerate() {
        // x = 0 and 1 = 0: empty
        let empty = AffineVarietySpec {
            n: 1,
            polynomials: vec![
                super::super::points::IntPoly::new(vec![(1, vec![1])]),
                super::super::points::IntPoly::new(vec![(1, vec![])]),
            ],
        };
        assert!(matches!(langweil_fit(&empty, &PRIMES, 1 << 20), Err(Error::Undefined(_))));
        assert!(langweil_fit(&empty, &PRIMES[..3], 1 << 20).is_err());
    }
}
