use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{primes_up_to, reduce_i64, FpPoly};

/// Boolean formula over prime sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ArtinFormula {
    All,
    /// Primes modulo which the integer polynomial (constant term first) is irreducible.
    Irreducible { poly: Vec<i64> },
    /// An explicit finite set.
    Primes { primes: Vec<u64> },
    Not { arg: Box<ArtinFormula> },
    And { args: Vec<ArtinFormula> },
    Or { args: Vec<ArtinFormula> },
}

/// A boolean combination of irreducibility conditions, adjusted by finite
/// include and exclude lists (which take precedence over the formula).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtinSetSpec {
    pub formula: ArtinFormula,
    #[serde(default)]
    pub include: Vec<u64>,
    #[serde(default)]
    pub exclude: Vec<u64>,
}

impl ArtinSetSpec {
    pub fn new(formula: ArtinFormula) -> Self {
        Self { formula, include: vec![], exclude: vec![] }
    }

    pub fn all() -> Self {
        Self::new(ArtinFormula::All)
    }

    pub fn irreducible(poly: Vec<i64>) -> Self {
        Self::new(ArtinFormula::Irreducible { poly })
    }

    pub fn finite(primes: Vec<u64>) -> Self {
        Self::new(ArtinFormula::Primes { primes })
    }

    /// The complementary set; include and exclude lists swap roles.
    pub fn complement(self) -> Self {
        Self {
            formula: ArtinFormula::Not { arg: Box::new(self.formula) },
            include: self.exclude,
            exclude: self.include,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn walk(f: &ArtinFormula) -> Result<()> {
            match f {
                ArtinFormula::All | ArtinFormula::Primes { .. } => Ok(()),
                ArtinFormula::Irreducible { poly } => {
                    let deg = poly.iter().rposition(|&c| c != 0);
                    if deg.unwrap_or(0) == 0 {
                        return Err(Error::InvalidInput(format!("constant polynomial {poly:?}")));
                    }
                    Ok(())
                }
                ArtinFormula::Not { arg } => walk(arg),
                ArtinFormula::And { args } | ArtinFormula::Or { args } => {
                    if args.is_empty() {
                        return Err(Error::InvalidInput("empty connective".into()));
                    }
                    args.iter().try_for_each(walk)
                }
            }
        }
        walk(&self.formula)
    }

    /// Membership of `p`. Primes dividing the leading coefficient of an
    /// atom (bad reduction) give a domain error unless listed explicitly.
    pub fn contains(&self, p: u64) -> Result<bool> {
        if self.exclude.contains(&p) {
            return Ok(false);
        }
        if self.include.contains(&p) {
            return Ok(true);
        }
        eval(&self.formula, p)
    }

    /// The underlying set when it is finite by construction.
    pub fn explicit_finite_set(&self) -> Option<Vec<u64>> {
        fn walk(f: &ArtinFormula) -> Option<Vec<u64>> {
            match f {
                ArtinFormula::Primes { primes } => Some(primes.clone()),
                ArtinFormula::And { args } => {
                    let finite: Vec<Vec<u64>> = args.iter().filter_map(walk).collect();
                    let first = finite.first()?;
                    Some(
                        first
                            .iter()
                            .copied()
                            .filter(|p| finite.iter().all(|s| s.contains(p)))
                            .collect(),
                    )
                }
                ArtinFormula::Or { args } => {
                    let mut all = Vec::new();
                    for a in args {
                        all.extend(walk(a)?);
                    }
                    Some(all)
                }
                _ => None,
            }
        }
        let mut set = walk(&self.formula)?;
        set.retain(|p| !self.exclude.contains(p));
        set.extend(self.include.iter().copied());
        set.sort_unstable();
        set.dedup();
        // members must still satisfy the full formula (e.g. And with an atom)
        set.retain(|&p| self.contains(p).unwrap_or(false));
        Some(set)
    }
}

fn eval(f: &ArtinFormula, p: u64) -> Result<bool> {
    Ok(match f {
        ArtinFormula::All => true,
        ArtinFormula::Primes { primes } => primes.contains(&p),
        ArtinFormula::Irreducible { poly } => {
            let lead = poly.iter().rev().find(|&&c| c != 0).copied().unwrap_or(0);
            if reduce_i64(lead, p) == 0 {
                return Err(Error::Domain(format!(
                    "prime {p} divides the leading coefficient of {poly:?}"
                )));
            }
            FpPoly::from_i64(p, poly).is_irreducible()
        }
        ArtinFormula::Not { arg } => !eval(arg, p)?,
        ArtinFormula::And { args } => {
            let mut all = true;
            for a in args {
                all &= eval(a, p)?;
            }
            all
        }
        ArtinFormula::Or { args } => {
            let mut any = false;
            for a in args {
                any |= eval(a, p)?;
            }
            any
        }
    })
}

pub fn artin_membership(spec: &ArtinSetSpec, p: u64) -> Result<bool> {
    spec.contains(p)
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub prime_bound: u64,
    pub primes: u64,
    pub members: u64,
    /// Bad-reduction primes, excluded from both counts.
    pub bad_primes: Vec<u64>,
    pub density: f64,
}

/// Natural density of the set among primes up to `bound`.
pub fn artin_density(spec: &ArtinSetSpec, bound: u64) -> Result<DensityReport> {
    spec.validate()?;
    let primes = primes_up_to(bound);
    let results: Vec<(u64, Result<bool>)> =
        primes.par_iter().map(|&p| (p, spec.contains(p))).collect();
    let mut members = 0u64;
    let mut total = 0u64;
    let mut bad_primes = Vec::new();
    for (p, r) in results {
        match r {
            Ok(m) => {
                total += 1;
                members += m as u64;
            }
            Err(Error::Domain(_)) => bad_primes.push(p),
            Err(e) => return Err(e),
        }
    }
    let density = if total == 0 { 0.0 } else { members as f64 / total as f64 };
    Ok(DensityReport { prime_bound: bound, primes: total, members, bad_primes, density })
}
