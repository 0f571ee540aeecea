//! Seeded random corpora checking exp/log and Campbell-Hausdorff against
//! matrix arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::bch::bch;
use super::matrix::{exp_nilpotent, exp_truncated, log_truncated, log_unipotent, ModMatrix};
use crate::error::{Error, Result};
use crate::numtheory::{inv_mod, is_prime, mul_mod};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FuzzReport {
    pub n: usize,
    pub p: u64,
    pub k: u32,
    pub samples: usize,
    pub failures: usize,
}

fn check_config(n: usize, p: u64, k: u32) -> Result<u64> {
    if n == 0 || !is_prime(p) || k == 0 {
        return Err(Error::InvalidInput(format!("bad configuration n = {n}, p = {p}, k = {k}")));
    }
    p.checked_pow(k).ok_or_else(|| Error::InvalidInput("p^k overflows".into()))
}

pub fn random_strictly_upper<R: Rng>(rng: &mut R, n: usize, m: u64) -> ModMatrix {
    let mut a = ModMatrix::zero(n, m);
    for i in 0..n {
        for j in i + 1..n {
            a.a[i * n + j] = rng.gen_range(0..m);
        }
    }
    a
}

/// A random invertible matrix over `Z/p^k` with its inverse.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize, p: u64, m: u64) -> (ModMatrix, ModMatrix) {
    loop {
        let a = ModMatrix { n, m, a: (0..n * n).map(|_| rng.gen_range(0..m)).collect() };
        if let Some(inv) = inverse(&a, p) {
            return (a, inv);
        }
    }
}

/// Gauss-Jordan inverse over `Z/p^k`; `None` if singular modulo `p`.
fn inverse(a: &ModMatrix, p: u64) -> Option<ModMatrix> {
    let (n, m) = (a.n, a.m);
    let mut left = a.clone();
    let mut right = ModMatrix::identity(n, m);
    for col in 0..n {
        let piv = (col..n).find(|&r| !left.get(r, col).is_multiple_of(p))?;
        for c in 0..n {
            left.a.swap(col * n + c, piv * n + c);
            right.a.swap(col * n + c, piv * n + c);
        }
        let inv = inv_mod(left.get(col, col), m)?;
        for c in 0..n {
            left.a[col * n + c] = mul_mod(left.a[col * n + c], inv, m);
            right.a[col * n + c] = mul_mod(right.a[col * n + c], inv, m);
        }
        for r in 0..n {
            let f = left.get(r, col);
            if r != col && f != 0 {
                for c in 0..n {
                    let (l, rr) = (left.a[col * n + c], right.a[col * n + c]);
                    left.a[r * n + c] = (left.a[r * n + c] + m - mul_mod(f, l, m)) % m;
                    right.a[r * n + c] = (right.a[r * n + c] + m - mul_mod(f, rr, m)) % m;
                }
            }
        }
    }
    Some(right)
}

/// `log(exp A) = A` and `exp(log g) = g` on conjugates of strictly
/// upper-triangular matrices. Requires `p > 2n`.
pub fn exp_log_fuzz(n: usize, p: u64, k: u32, samples: usize, seed: u64) -> Result<FuzzReport> {
    let m = check_config(n, p, k)?;
    if p <= 2 * n as u64 {
        return Err(Error::Domain(format!("need p > 2n, got p = {p}, n = {n}")));
    }
    let failures = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<usize> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let (c, ci) = random_invertible(&mut rng, n, p, m);
            let a = ci.mul(&random_strictly_upper(&mut rng, n, m)).mul(&c);
            let g = exp_nilpotent(&a, p)?;
            let ok = log_unipotent(&g, p)? == a && exp_nilpotent(&log_unipotent(&g, p)?, p)? == g;
            Ok(usize::from(!ok))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(FuzzReport { n, p, k, samples, failures })
}

/// `bch(A, B) = log(exp A exp B)` on pairs in a conjugate of the strictly
/// upper-triangular algebra, truncated at its class `n - 1`. Needs only `n <= p`.
pub fn bch_fuzz(n: usize, p: u64, k: u32, samples: usize, seed: u64) -> Result<FuzzReport> {
    let m = check_config(n, p, k)?;
    if n as u64 > p {
        return Err(Error::Domain(format!("need n <= p, got p = {p}, n = {n}")));
    }
    let order = (n - 1).max(1);
    let failures = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<usize> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let (c, ci) = random_invertible(&mut rng, n, p, m);
            let a = ci.mul(&random_strictly_upper(&mut rng, n, m)).mul(&c);
            let b = ci.mul(&random_strictly_upper(&mut rng, n, m)).mul(&c);
            let lhs = bch(&a, &b, order, p)?;
            let rhs = log_truncated(&exp_truncated(&a, p)?.mul(&exp_truncated(&b, p)?), p)?;
            Ok(usize::from(lhs != rhs))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(FuzzReport { n, p, k, samples, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (a, ai) = random_invertible(&mut rng, 4, 5, 125);
        assert_eq!(a.mul(&ai), ModMatrix::identity(4, 125));
    }

    #[test]
    fn small_corpora() {
        assert_eq!(exp_log_fuzz(3, 7, 2, 100, 1).unwrap().failures, 0);
        assert_eq!(bch_fuzz(4, 7, 2, 100, 1).unwrap().failures, 0);
        assert!(matches!(exp_log_fuzz(4, 7, 1, 10, 1), Err(Error::Domain(_))));
    }
}
