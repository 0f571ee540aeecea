use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groupcore::{character_table, group_from_generators, FiniteGroup, Subgroup, DEFAULT_GROUP_CAP};
use crate::numtheory::is_prime;
use crate::rational::{format_q, qi, Q};

/// `G(Z/p^k)` as a matrix group, with the kernel of reduction mod `p`.
#[derive(Clone, Debug)]
pub struct CongruenceQuotient {
    pub group: FiniteGroup,
    pub kernel: Subgroup,
}

pub fn congruence_quotient(gens: &[Vec<i64>], n: usize, p: u64, k: u32, cap: usize) -> Result<CongruenceQuotient> {
    if !is_prime(p) || k == 0 {
        return Err(Error::InvalidInput(format!("need a prime p and k >= 1, got p = {p}, k = {k}")));
    }
    let m = p.checked_pow(k).ok_or_else(|| Error::InvalidInput("p^k overflows".into()))?;
    let group = group_from_generators(gens, n, m, cap)?;
    let data = group.matrices().ok_or_else(|| Error::Internal("matrix group without matrix data".into()))?;
    let kernel = (0..group.order() as u32)
        .filter(|&a| {
            data.matrix(a)
                .iter()
                .enumerate()
                .all(|(i, &x)| x as u64 % p == u64::from(i / n == i % n))
        })
        .collect();
    Ok(CongruenceQuotient { group, kernel: Subgroup::from_sorted(kernel) })
}

fn serialize_poly<S: Serializer>(c: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(format_q))
}

/// `multiplicity(p)` characters of degree `degree(p)`; coefficients are
/// rationals, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeFamily {
    #[serde(serialize_with = "serialize_poly")]
    pub multiplicity: Vec<Q>,
    #[serde(serialize_with = "serialize_poly")]
    pub degree: Vec<Q>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeFitReport {
    pub residue_class: (u64, u64),
    pub fit_primes: Vec<u64>,
    pub verify_primes: Vec<u64>,
    pub families: Vec<DegreeFamily>,
    pub verified: bool,
    /// Why the polynomial shape failed, if it did.
    pub refutation: Option<String>,
}

const DEGREE_CAP: usize = 3;

/// Lagrange interpolation through `(x_i, y_i)`.
fn interpolate(points: &[(u64, u64)]) -> Vec<Q> {
    let mut out = vec![Q::zero(); points.len()];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                let mut next = vec![Q::zero(); basis.len() + 1];
                for (d, c) in basis.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * qi(xj as i64);
                }
                basis = next;
                denom *= qi(xi as i64 - xj as i64);
            }
        }
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * qi(yi as i64) / &denom;
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn poly_value(c: &[Q], x: u64) -> Q {
    c.iter().rev().fold(Q::zero(), |acc, a| acc * qi(x as i64) + a)
}

/// Distinct character degrees of `G(F_p)` with multiplicities, ascending.
fn degree_profile(gens: &[Vec<i64>], n: usize, p: u64) -> Result<Vec<(u64, u64)>> {
    let g = group_from_generators(gens, n, p, DEFAULT_GROUP_CAP)?;
    let table = character_table(&g)?;
    table.zeta().integer_counts().ok_or_else(|| Error::Internal("character counts are not integers".into()))
}

/// Fits degree and multiplicity families of `zeta_{G(F_p)}` by interpolation
/// over `fit_primes` (families matched by rank of the degree), then checks
/// the prediction on `verify_primes`. A failed check is a refutation in the
/// report, not an error.
pub fn reductive_degree_fit(
    gens: &[Vec<i64>],
    n: usize,
    residue_class: (u64, u64),
    fit_primes: &[u64],
    verify_primes: &[u64],
) -> Result<DegreeFitReport> {
    let (a, modulus) = residue_class;
    if modulus == 0 || fit_primes.len() < 2 || fit_primes.len() > DEGREE_CAP + 1 || verify_primes.is_empty() {
        return Err(Error::InvalidInput("need a modulus, 2 to 4 fit primes and a held-out prime".into()));
    }
    for &p in fit_primes.iter().chain(verify_primes) {
        if !is_prime(p) || p % modulus != a % modulus {
            return Err(Error::InvalidInput(format!("{p} is not a prime congruent to {a} mod {modulus}")));
        }
    }
    let all: Vec<u64> = fit_primes.iter().chain(verify_primes).copied().collect();
    let profiles: Vec<Vec<(u64, u64)>> = all.par_iter().map(|&p| degree_profile(gens, n, p)).collect::<Result<_>>()?;
    let (fit, held) = profiles.split_at(fit_primes.len());
    let mut report = DegreeFitReport {
        residue_class,
        fit_primes: fit_primes.to_vec(),
        verify_primes: verify_primes.to_vec(),
        families: vec![],
        verified: false,
        refutation: None,
    };
    let len = fit[0].len();
    if let Some((p, prof)) = fit_primes.iter().zip(fit).find(|(_, f)| f.len() != len) {
        report.refutation = Some(format!("{} distinct degrees at p = {p}, {len} at p = {}", prof.len(), fit_primes[0]));
        return Ok(report);
    }
    for j in 0..len {
        let degs: Vec<(u64, u64)> = fit_primes.iter().zip(fit).map(|(&p, f)| (p, f[j].0)).collect();
        let mults: Vec<(u64, u64)> = fit_primes.iter().zip(fit).map(|(&p, f)| (p, f[j].1)).collect();
        report.families.push(DegreeFamily { multiplicity: interpolate(&mults), degree: interpolate(&degs) });
    }
    for (&p, actual) in verify_primes.iter().zip(held) {
        let mut predicted = Vec::new();
        for f in &report.families {
            let (d, m) = (poly_value(&f.degree, p), poly_value(&f.multiplicity, p));
            if !d.is_integer() || !m.is_integer() {
                report.refutation = Some(format!("non-integral prediction at p = {p}"));
                return Ok(report);
            }
            if !m.is_zero() {
                predicted.push((d.to_integer(), m.to_integer()));
            }
        }
        predicted.sort();
        let actual: Vec<_> = actual.iter().map(|&(d, m)| ((d as i64).into(), (m as i64).into())).collect();
        if predicted != actual {
            report.refutation = Some(format!("prediction at p = {p} differs from the character table"));
            return Ok(report);
        }
    }
    report.verified = true;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const SL2: [&[i64]; 2] = [&[1, 1, 0, 1], &[1, 0, 1, 1]];

    fn sl2() -> Vec<Vec<i64>> {
        SL2.iter().map(|g| g.to_vec()).collect()
    }

    #[test]
    fn sl2_quotients() {
        for (p, k, order, kernel) in [(3, 1, 24, 1), (3, 2, 648, 27), (5, 1, 120, 1)] {
            let cq = congruence_quotient(&sl2(), 2, p, k, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!((cq.group.order(), cq.kernel.order()), (order, kernel));
            assert!(cq.group.is_normal(&cq.kernel));
        }
        assert!(matches!(congruence_quotient(&sl2(), 2, 7, 2, 1000), Err(Error::SizeExceeded { .. })));
    }

    #[test]
    fn interpolation() {
        assert_eq!(interpolate(&[(5, 2), (13, 6)]), vec![q(-1, 2), q(1, 2)]);
        assert_eq!(interpolate(&[(1, 4), (2, 4), (3, 4)]), vec![qi(4)]);
    }

    #[test]
    fn sl2_families() {
        let r = reductive_degree_fit(&sl2(), 2, (1, 4), &[5, 13], &[17]).unwrap();
        assert!(r.verified, "{r:?}");
        let half_down = DegreeFamily { multiplicity: vec![qi(2)], degree: vec![q(-1, 2), q(1, 2)] };
        assert!(r.families.contains(&half_down));
        let top = DegreeFamily { multiplicity: vec![q(-3, 2), q(1, 2)], degree: vec![qi(1), qi(1)] };
        assert_eq!(r.families.last(), Some(&top));
        let r = reductive_degree_fit(&sl2(), 2, (3, 4), &[7, 11], &[19]).unwrap();
        assert!(r.verified, "{r:?}");
        // at p = 3 families collide, so the fit through 3 is refuted
        let r = reductive_degree_fit(&sl2(), 2, (3, 4), &[3, 7], &[11]).unwrap();
        assert!(!r.verified && r.refutation.is_some());
        let trivial = reductive_degree_fit(&[vec![1]], 1, (1, 2), &[3, 5], &[7]).unwrap();
        assert!(trivial.verified);
        assert_eq!(trivial.families, vec![DegreeFamily { multiplicity: vec![qi(1)], degree: vec![qi(1)] }]);
    }
}
