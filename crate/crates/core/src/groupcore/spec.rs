use serde::{Deserialize, Serialize};

use super::catalog::named;
use super::group::{group_from_generators, group_from_permutations, FiniteGroup};
use crate::error::{Error, Result};

/// A group as it appears in a JSON input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    /// A catalog name such as `"S3"`.
    Named(String),
    /// Row-major `n x n` generators over `Z/modulus`.
    Matrices { n: usize, modulus: u64, gens: Vec<Vec<i64>> },
    /// Images of `0..degree` under each generator.
    Permutations(Vec<Vec<u32>>),
    /// A full multiplication table.
    Table(Vec<Vec<u32>>),
}

impl GroupSpec {
    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        let g = match self {
            GroupSpec::Named(name) => named(name)?,
            GroupSpec::Matrices { n, modulus, gens } => group_from_generators(gens, *n, *modulus, cap)?,
            GroupSpec::Permutations(gens) => group_from_permutations(gens, cap)?,
            GroupSpec::Table(t) => {
                if t.len() > cap {
                    return Err(Error::SizeExceeded { what: "group".into(), cap: cap as u64 });
                }
                FiniteGroup::from_table(t.clone())?
            }
        };
        if g.order() > cap {
            return Err(Error::SizeExceeded { what: "group".into(), cap: cap as u64 });
        }
        Ok(g)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_form() {
        let s3 = GroupSpec::from_json(r#"{"named": "S3"}"#).unwrap().build(100).unwrap();
        assert_eq!(s3.order(), 6);
        let m = GroupSpec::from_json(r#"{"matrices": {"n": 2, "modulus": 3, "gens": [[1,1,0,1],[1,0,1,1]]}}"#).unwrap();
        assert_eq!(m.build(1000).unwrap().order(), 24);
        let p = GroupSpec::from_json(r#"{"permutations": [[1,2,0]]}"#).unwrap();
        assert_eq!(p.build(10).unwrap().order(), 3);
        let t = GroupSpec::from_json(r#"{"table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(t.build(10).unwrap().order(), 2);
        assert!(matches!(m.build(10), Err(Error::SizeExceeded { .. })));
    }
}
