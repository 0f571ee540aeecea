use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::arith::artin::ArtinSetSpec;
use crate::error::{Error, Result};
use crate::rational::{q, to_f64, Q};

/// One summand `n^{-s} f(p^{-s}) / prod_j (1 - p^{-A_j s + B_j})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JaikinTerm {
    pub n: u64,
    /// Coefficients of `f`, constant term first.
    pub f: Vec<u64>,
    #[serde(default)]
    pub pairs: Vec<(u64, u64)>,
}

/// A local factor in the normal form `sum_i n_i^{-s} f_i(p^{-s}) / prod_j (1 - p^{-A s + B})`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct JaikinLocalFactor {
    pub terms: Vec<JaikinTerm>,
}

fn pole_check(a: u64, b: u64, s: &Q) -> Result<()> {
    let lhs = Q::from_integer(BigInt::from(a)) * s - Q::from_integer(BigInt::from(b));
    if lhs.is_positive() {
        Ok(())
    } else {
        Err(Error::Pole {
            a: a as i64,
            b: b as i64,
            s: to_f64(s),
        })
    }
}

impl JaikinLocalFactor {
    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if t.n == 0 {
                return Err(Error::InvalidInput("term with n = 0".into()));
            }
        }
        Ok(())
    }

    pub fn eval(&self, p: u64, s: &Q) -> Result<f64> {
        self.validate()?;
        let sf = to_f64(s);
        let pf = p as f64;
        let x = pf.powf(-sf);
        let mut total = 0.0;
        for t in &self.terms {
            for &(a, b) in &t.pairs {
                pole_check(a, b, s)?;
            }
            let fx = t.f.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64);
            let mut v = (t.n as f64).powf(-sf) * fx;
            for &(a, b) in &t.pairs {
                v /= 1.0 - pf.powf(-(a as f64) * sf + b as f64);
            }
            total += v;
        }
        Ok(total)
    }
}

pub fn jaikin_eval(factor: &JaikinLocalFactor, p: u64, s: &Q) -> Result<f64> {
    factor.eval(p, s)
}

/// One summand `p^{d - e s} prod_j p^{-A_j s + B_j} / (1 - p^{-A_j s + B_j})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTerm {
    pub d: u64,
    pub e: u64,
    #[serde(default)]
    pub pairs: Vec<(u64, u64)>,
}

/// The shape of `zeta_{G_p}(s) - 1` on an Artin set, up to equivalence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialLocalFamily {
    pub terms: Vec<MonomialTerm>,
}

impl MonomialTerm {
    /// Pairs with `A = B = 0` dropped; rejects `A = 0 < B` and `e + sum A = 0`.
    fn normalized_pairs(&self) -> Result<Vec<(u64, u64)>> {
        let mut out = Vec::new();
        for &(a, b) in &self.pairs {
            match (a, b) {
                (0, 0) => {}
                (0, b) => {
                    return Err(Error::InvalidFamily(format!(
                        "pair (A=0, B={b}) has no convergent geometric series"
                    )))
                }
                _ => out.push((a, b)),
            }
        }
        let weight: u64 = self.e + out.iter().map(|&(a, _)| a).sum::<u64>();
        if weight == 0 {
            return Err(Error::InvalidFamily(format!(
                "term d={} has e + sum A = 0",
                self.d
            )));
        }
        Ok(out)
    }
}

impl MonomialLocalFamily {
    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            t.normalized_pairs()?;
        }
        Ok(())
    }

    /// `a_p(s)`; infinite at or beyond a pole.
    pub fn local_term(&self, p: u64, s: f64) -> f64 {
        let pf = p as f64;
        let lp = pf.ln();
        let mut total = 0.0;
        for t in &self.terms {
            let mut v = ((t.d as f64) - (t.e as f64) * s) * lp;
            let mut denom = 1.0;
            for &(a, b) in &t.pairs {
                if a == 0 && b == 0 {
                    continue;
                }
                let x = -(a as f64) * s + b as f64;
                if x >= 0.0 {
                    return f64::INFINITY;
                }
                v += x * lp;
                denom *= -(x * lp).exp_m1();
            }
            total += v.exp() / denom;
        }
        total
    }

    /// `max_j B_j / A_j` over all terms, `None` without pairs.
    pub fn pole_abscissa(&self) -> Result<Option<Q>> {
        let mut best: Option<Q> = None;
        for t in &self.terms {
            for (a, b) in t.normalized_pairs()? {
                let r = q(b as i64, a as i64);
                if best.as_ref().is_none_or(|m| r > *m) {
                    best = Some(r);
                }
            }
        }
        Ok(best)
    }
}

/// Abscissa of `prod_{p in A} (1 + a_p(s))` over a set of primes of
/// positive density.
pub fn monomial_family_abscissa(family: &MonomialLocalFamily) -> Result<Option<Q>> {
    let mut best: Option<Q> = None;
    let mut bump = |r: Q| {
        if best.as_ref().is_none_or(|m| r > *m) {
            best = Some(r);
        }
    };
    for t in &family.terms {
        let pairs = t.normalized_pairs()?;
        let sum_b: u64 = pairs.iter().map(|&(_, b)| b).sum();
        let sum_a: u64 = pairs.iter().map(|&(a, _)| a).sum();
        bump(q((sum_b + t.d + 1) as i64, (t.e + sum_a) as i64));
        for (a, b) in pairs {
            bump(q(b as i64, a as i64));
        }
    }
    Ok(best)
}

/// Rank and number of positive roots of a root system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystem {
    pub rank: u64,
    pub positive_roots: u64,
}

impl RootSystem {
    /// Parses Cartan labels such as `A1`, `B2`, `G2`, `E8`.
    pub fn named(label: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown root system {label:?}"));
        let (kind, n) = label.split_at(1);
        let n: u64 = n.parse().map_err(|_| bad())?;
        let positive_roots = match (kind, n) {
            ("A", n) if n >= 1 => n * (n + 1) / 2,
            ("B" | "C", n) if n >= 2 => n * n,
            ("D", n) if n >= 4 => n * (n - 1),
            ("E", 6) => 36,
            ("E", 7) => 63,
            ("E", 8) => 120,
            ("F", 4) => 24,
            ("G", 2) => 6,
            _ => return Err(bad()),
        };
        Ok(Self { rank: n, positive_roots })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArchimedeanSpec {
    Named(String),
    Explicit(RootSystem),
}

impl ArchimedeanSpec {
    pub fn root_system(&self) -> Result<RootSystem> {
        match self {
            ArchimedeanSpec::Named(s) => RootSystem::named(s),
            ArchimedeanSpec::Explicit(r) => Ok(r.clone()),
        }
    }
}

/// `r / |Phi_+|`.
pub fn archimedean_abscissa(rank: u64, positive_roots: u64) -> Result<Q> {
    if positive_roots == 0 || rank == 0 {
        return Err(Error::InvalidInput("rank and positive root count must be positive".into()));
    }
    Ok(q(rank as i64, positive_roots as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPart {
    pub primes: ArtinSetSpec,
    pub family: MonomialLocalFamily,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerProductSpec {
    #[serde(default)]
    pub local_parts: Vec<LocalPart>,
    #[serde(default)]
    pub archimedean: Option<ArchimedeanSpec>,
}

impl EulerProductSpec {
    /// Empirical disjointness check of the Artin sets over primes up to `bound`.
    pub fn check_disjoint(&self, bound: u64) -> Result<()> {
        for p in crate::numtheory::primes_up_to(bound) {
            let mut owner: Option<usize> = None;
            for (i, part) in self.local_parts.iter().enumerate() {
                if part.primes.contains(p).unwrap_or(false) {
                    if let Some(j) = owner {
                        return Err(Error::InvalidInput(format!(
                            "prime {p} lies in the sets of parts {j} and {i}"
                        )));
                    }
                    owner = Some(i);
                }
            }
        }
        Ok(())
    }
}

/// Abscissa of the full Euler product; `None` means the product is
/// identically 1 (abscissa minus infinity).
pub fn euler_abscissa(spec: &EulerProductSpec) -> Result<Option<Q>> {
    let mut best: Option<Q> = None;
    let mut bump = |r: Option<Q>| {
        if let Some(r) = r {
            if best.as_ref().is_none_or(|m| r > *m) {
                best = Some(r);
            }
        }
    };
    if let Some(a) = &spec.archimedean {
        let rs = a.root_system()?;
        bump(Some(archimedean_abscissa(rs.rank, rs.positive_roots)?));
    }
    for part in &spec.local_parts {
        part.family.validate()?;
        match part.primes.explicit_finite_set() {
            Some(set) if set.is_empty() => {}
            Some(_) => bump(part.family.pole_abscissa()?),
            None => bump(monomial_family_abscissa(&part.family)?),
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn term(n: u64, f: Vec<u64>, pairs: Vec<(u64, u64)>) -> JaikinTerm {
        JaikinTerm { n, f, pairs }
    }

    #[test]
    fn jaikin_examples() {
        let geo = JaikinLocalFactor { terms: vec![term(1, vec![0, 1], vec![(1, 0)])] };
        assert!((jaikin_eval(&geo, 5, &qi(1)).unwrap() - 0.25).abs() < 1e-15);
        let one = JaikinLocalFactor { terms: vec![term(1, vec![1], vec![])] };
        assert_eq!(jaikin_eval(&one, 7, &q(3, 2)).unwrap(), 1.0);
        let pole = JaikinLocalFactor { terms: vec![term(1, vec![1], vec![(1, 1)])] };
        match jaikin_eval(&pole, 5, &qi(1)) {
            Err(Error::Pole { a: 1, b: 1, .. }) => {}
            other => panic!("expected pole, got {other:?}"),
        }
        let zero_pair = JaikinLocalFactor { terms: vec![term(1, vec![1], vec![(0, 0)])] };
        assert!(jaikin_eval(&zero_pair, 5, &qi(1)).is_err());
    }

    /// Expands each `1/(1 - p^{-As+B})` as a geometric series truncated
    /// after 40 terms and sums term by term.
    fn expanded(factor: &JaikinLocalFactor, p: u64, s: i64) -> f64 {
        let lp = (p as f64).ln();
        let mut total = 0.0;
        for t in &factor.terms {
            // exponents of p as (multiple of -s, constant)
            let mut series: Vec<(i64, i64, f64)> = t
                .f
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (i as i64, 0, c as f64))
                .collect();
            for &(a, b) in &t.pairs {
                let mut next = Vec::new();
                for &(m, c0, w) in &series {
                    for k in 0..40i64 {
                        next.push((m + k * a as i64, c0 + k * b as i64, w));
                    }
                }
                series = next;
            }
            let ns = (t.n as f64).powf(-(s as f64));
            let mut parts: Vec<f64> = series
                .iter()
                .map(|&(m, c0, w)| w * ((-(m * s) + c0) as f64 * lp).exp() * ns)
                .collect();
            parts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            total += parts.iter().sum::<f64>();
        }
        total
    }

    #[test]
    fn jaikin_matches_expansion() {
        let factor = JaikinLocalFactor {
            terms: vec![
                term(1, vec![1], vec![]),
                term(2, vec![0, 3, 1], vec![(2, 1)]),
                term(3, vec![0, 0, 2], vec![(3, 1), (2, 0)]),
            ],
        };
        for p in [2u64, 3, 5, 7, 11, 13] {
            for s in 1..=3i64 {
                let direct = jaikin_eval(&factor, p, &qi(s)).unwrap();
                let series = expanded(&factor, p, s);
                assert!(
                    ((direct - series) / direct).abs() < 1e-12,
                    "p={p} s={s}: {direct} vs {series}"
                );
            }
        }
    }

    fn fam(terms: Vec<(u64, u64, Vec<(u64, u64)>)>) -> MonomialLocalFamily {
        MonomialLocalFamily {
            terms: terms.into_iter().map(|(d, e, pairs)| MonomialTerm { d, e, pairs }).collect(),
        }
    }

    #[test]
    fn monomial_abscissa_examples() {
        assert_eq!(monomial_family_abscissa(&fam(vec![(1, 2, vec![])])).unwrap(), Some(qi(1)));
        assert_eq!(monomial_family_abscissa(&fam(vec![(0, 1, vec![(2, 1)])])).unwrap(), Some(q(2, 3)));
        assert_eq!(monomial_family_abscissa(&fam(vec![(0, 1, vec![])])).unwrap(), Some(qi(1)));
        // a pole dominating the growth term
        assert_eq!(monomial_family_abscissa(&fam(vec![(0, 1, vec![(1, 3)])])).unwrap(), Some(qi(3)));
        assert!(matches!(
            monomial_family_abscissa(&fam(vec![(0, 1, vec![(0, 2)])])),
            Err(Error::InvalidFamily(_))
        ));
        assert!(matches!(
            monomial_family_abscissa(&fam(vec![(3, 0, vec![])])),
            Err(Error::InvalidFamily(_))
        ));
        // (0,0) pairs are dropped as constants
        assert_eq!(monomial_family_abscissa(&fam(vec![(0, 1, vec![(0, 0)])])).unwrap(), Some(qi(1)));
        assert_eq!(monomial_family_abscissa(&fam(vec![])).unwrap(), None);
    }

    #[test]
    fn archimedean_values() {
        for (label, v) in [("A1", qi(1)), ("A2", q(2, 3)), ("B2", q(1, 2)), ("G2", q(1, 3))] {
            let r = RootSystem::named(label).unwrap();
            assert_eq!(archimedean_abscissa(r.rank, r.positive_roots).unwrap(), v);
        }
        assert!(RootSystem::named("Z9").is_err());
        assert!(archimedean_abscissa(1, 0).is_err());
    }

    #[test]
    fn euler_examples() {
        let only_a1 = EulerProductSpec {
            local_parts: vec![],
            archimedean: Some(ArchimedeanSpec::Named("A1".into())),
        };
        assert_eq!(euler_abscissa(&only_a1).unwrap(), Some(qi(1)));

        let split = ArtinSetSpec::irreducible(vec![1, 0, 1]);
        let other = ArtinSetSpec::irreducible(vec![1, 0, 1]).complement();
        let two = EulerProductSpec {
            local_parts: vec![
                LocalPart { primes: split.clone(), family: fam(vec![(0, 1, vec![(2, 1)])]) },
                LocalPart { primes: other, family: fam(vec![(1, 2, vec![])]) },
            ],
            archimedean: None,
        };
        assert_eq!(euler_abscissa(&two).unwrap(), Some(qi(1)));
        two.check_disjoint(1000).unwrap();

        let mixed = EulerProductSpec {
            local_parts: vec![LocalPart { primes: split, family: fam(vec![(0, 1, vec![(2, 1)])]) }],
            archimedean: Some(ArchimedeanSpec::Explicit(RootSystem { rank: 1, positive_roots: 1 })),
        };
        assert_eq!(euler_abscissa(&mixed).unwrap(), Some(qi(1)));

        // finite sets contribute only their poles
        let finite = EulerProductSpec {
            local_parts: vec![LocalPart {
                primes: ArtinSetSpec::finite(vec![2, 3]),
                family: fam(vec![(5, 1, vec![(2, 1)])]),
            }],
            archimedean: None,
        };
        assert_eq!(euler_abscissa(&finite).unwrap(), Some(q(1, 2)));
    }

    #[test]
    fn family_json() {
        let f = fam(vec![(0, 1, vec![(2, 1)])]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"terms":[{"d":0,"e":1,"pairs":[[2,1]]}]}"#);
        assert_eq!(serde_json::from_str::<MonomialLocalFamily>(&s).unwrap(), f);
    }

    proptest::proptest! {
        #[test]
        fn local_term_positive_beyond_poles(d in 0u64..3, e in 1u64..3, a in 1u64..3, b in 0u64..3, p in 2u64..50) {
            let f = fam(vec![(d, e, vec![(a, b)])]);
            let s = b as f64 / a as f64 + 0.25;
            let v = f.local_term(p, s);
            proptest::prop_assert!(v.is_finite() && v > 0.0);
        }
    }
}
