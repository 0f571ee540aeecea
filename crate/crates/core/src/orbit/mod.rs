//! The Kirillov orbit method for the Lazard groups of nilpotent Lie rings.

mod kirillov;
mod restriction;

pub use kirillov::{compare_with_table, kirillov_character, kirillov_matrix, TableComparison};
pub use restriction::{restriction_census, restriction_test, RestrictionCensus, Subring};

use serde::Serialize;

use crate::dirichlet::DirichletPoly;
use crate::error::{Error, Result};
use crate::groupcore::DEFAULT_GROUP_CAP;
use crate::liering::{ModMatrix, NilpotentLieRing};
use crate::numtheory::{isqrt, mul_mod};

/// A functional `theta: L -> Z/p^k`, stored by its values on the basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DualCharacter {
    pub theta: Vec<u64>,
}

impl DualCharacter {
    pub fn new(ring: &NilpotentLieRing, theta: Vec<u64>) -> Result<Self> {
        if theta.len() != ring.rank || theta.iter().any(|&x| x >= ring.modulus()) {
            return Err(Error::InvalidInput(format!(
                "functional {theta:?} does not live on a rank-{} ring over Z/{}",
                ring.rank,
                ring.modulus()
            )));
        }
        Ok(Self { theta })
    }

    /// `theta(x)` in `Z/p^k`.
    pub fn eval(&self, ring: &NilpotentLieRing, x: &[u64]) -> u64 {
        pair(&self.theta, x, ring.modulus())
    }
}

pub(crate) fn pair(theta: &[u64], x: &[u64], m: u64) -> u64 {
    theta.iter().zip(x).fold(0, |acc, (&t, &v)| (acc + mul_mod(t, v, m)) % m)
}

/// The transpose action `theta -> theta o M` of a coordinate matrix.
fn pull_back(theta: &[u64], a: &ModMatrix) -> Vec<u64> {
    let (r, m) = (a.n, a.m);
    (0..r).map(|j| (0..r).fold(0, |acc, i| (acc + mul_mod(theta[i], a.a[i * r + j], m)) % m)).collect()
}

pub(crate) fn check_envelope(ring: &NilpotentLieRing) -> Result<()> {
    if ring.nilpotency_class as u64 >= ring.p {
        return Err(Error::Domain(format!("class {} is not below p = {}", ring.nilpotency_class, ring.p)));
    }
    if let Some(b) = &ring.matrix_basis {
        if ring.p <= 2 * b[0].n as u64 {
            return Err(Error::Domain(format!("need p > 2n for the realization of size {}", b[0].n)));
        }
    }
    Ok(())
}

/// `(Ad*(g) theta)(X) = theta(g^{-1} X g)` for `g = exp(y)`, a left action.
pub fn coadjoint_action(ring: &NilpotentLieRing, y: &[u64], theta: &DualCharacter) -> Result<DualCharacter> {
    check_envelope(ring)?;
    if y.len() != ring.rank || theta.theta.len() != ring.rank {
        return Err(Error::InvalidInput("element or functional has the wrong rank".into()));
    }
    let ad = ring.adjoint_exp(&ring.neg(y));
    Ok(DualCharacter { theta: pull_back(&theta.theta, &ad) })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoadjointOrbit {
    /// Members as sorted mixed-radix codes, as in the Lazard encoding.
    pub members: Vec<u32>,
    pub size: usize,
    /// `sqrt(size)`, the dimension of the attached irreducible.
    pub dim: u64,
}

pub(crate) fn encode(theta: &[u64], m: u64) -> u32 {
    theta.iter().rev().fold(0u64, |acc, &c| acc * m + c) as u32
}

pub(crate) fn decode(mut a: u32, rank: usize, m: u64) -> Vec<u64> {
    (0..rank)
        .map(|_| {
            let c = a as u64 % m;
            a = (a as u64 / m) as u32;
            c
        })
        .collect()
}

impl CoadjointOrbit {
    pub fn representative(&self, ring: &NilpotentLieRing) -> DualCharacter {
        DualCharacter { theta: decode(self.members[0], ring.rank, ring.modulus()) }
    }

    pub fn contains(&self, ring: &NilpotentLieRing, theta: &DualCharacter) -> bool {
        self.members.binary_search(&encode(&theta.theta, ring.modulus())).is_ok()
    }
}

/// All orbits of `exp(L)` on the dual, by breadth-first search under the
/// generators `exp(e_i)`. Orbits are listed by minimal member.
pub fn coadjoint_orbits(ring: &NilpotentLieRing) -> Result<Vec<CoadjointOrbit>> {
    check_envelope(ring)?;
    let total = ring
        .order()
        .filter(|&o| o <= DEFAULT_GROUP_CAP as u64)
        .ok_or_else(|| Error::SizeExceeded { what: "dual of the Lie ring".into(), cap: DEFAULT_GROUP_CAP as u64 })?
        as usize;
    let (r, m) = (ring.rank, ring.modulus());
    let actions: Vec<ModMatrix> = (0..r)
        .map(|i| ring.adjoint_exp(&ring.neg(&ring.basis_vector(i))))
        .filter(|a| *a != ModMatrix::identity(r, m))
        .collect();
    let mut orbit_of = vec![u32::MAX; total];
    let mut orbits = Vec::new();
    for seed in 0..total {
        if orbit_of[seed] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        orbit_of[seed] = id;
        let mut members = vec![seed as u32];
        let mut i = 0;
        while i < members.len() {
            let theta = decode(members[i], r, m);
            for a in &actions {
                let next = encode(&pull_back(&theta, a), m);
                if orbit_of[next as usize] == u32::MAX {
                    orbit_of[next as usize] = id;
                    members.push(next);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        let size = members.len();
        let dim = isqrt(size as u64);
        let is_even_power = dim * dim == size as u64 && (dim == 1 || crate::numtheory::prime_power(dim).is_some_and(|(b, _)| b == ring.p));
        if !is_even_power {
            return Err(Error::Internal(format!("orbit of size {size} is not an even power of p = {}", ring.p)));
        }
        orbits.push(CoadjointOrbit { members, size, dim });
    }
    Ok(orbits)
}

/// `sum_O (|O|^{1/2})^{-s}`.
pub fn orbit_zeta(ring: &NilpotentLieRing) -> Result<DirichletPoly> {
    Ok(zeta_of_orbits(&coadjoint_orbits(ring)?))
}

pub fn zeta_of_orbits(orbits: &[CoadjointOrbit]) -> DirichletPoly {
    let mut counts = std::collections::BTreeMap::new();
    for o in orbits {
        *counts.entry(o.dim).or_insert(0u64) += 1;
    }
    DirichletPoly::from_counts(counts)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CensusEntry {
    pub size: usize,
    pub dim: u64,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitCensus {
    pub orbits: Vec<CensusEntry>,
}

/// Orbit counts grouped by size.
pub fn orbit_census(orbits: &[CoadjointOrbit]) -> OrbitCensus {
    let mut by_size = std::collections::BTreeMap::new();
    for o in orbits {
        *by_size.entry((o.size, o.dim)).or_insert(0usize) += 1;
    }
    OrbitCensus { orbits: by_size.into_iter().map(|((size, dim), count)| CensusEntry { size, dim, count }).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liering::exp_truncated;

    #[test]
    fn action_examples() {
        let h = NilpotentLieRing::heisenberg(5, 1).unwrap();
        let z = DualCharacter::new(&h, vec![0, 0, 1]).unwrap();
        assert_eq!(coadjoint_action(&h, &[0, 0, 0], &z).unwrap(), z);
        let central = DualCharacter::new(&h, vec![2, 3, 0]).unwrap();
        assert_eq!(coadjoint_action(&h, &[1, 4, 2], &central).unwrap(), central);
        let moved = coadjoint_action(&h, &[1, 0, 0], &z).unwrap();
        // oracle: theta(g^{-1} V g) with 3x3 matrices
        let e = |i, j| ModMatrix::unit(3, 5, i, j);
        let g = exp_truncated(&e(0, 1), 5).unwrap();
        let gi = exp_truncated(&e(0, 1).scale(4), 5).unwrap();
        let basis = [e(0, 1), e(1, 2), e(0, 2)];
        let expect: Vec<u64> = basis.iter().map(|v| gi.mul(v).mul(&g).get(0, 2)).collect();
        assert_eq!(moved.theta, expect);
        assert_eq!(moved.theta, vec![0, 4, 1]);
    }

    #[test]
    fn action_is_a_left_action() {
        let h = NilpotentLieRing::strictly_upper(4, 5, 1).unwrap();
        let (_, law) = crate::liering::group_from_liering(&h).unwrap();
        let theta = DualCharacter::new(&h, vec![1, 2, 3, 4, 0, 1]).unwrap();
        let x = vec![1, 0, 2, 0, 3, 1];
        let y = vec![0, 4, 1, 2, 0, 3];
        let xy = law.mul_coords(&x, &y);
        let lhs = coadjoint_action(&h, &xy, &theta).unwrap();
        let rhs = coadjoint_action(&h, &x, &coadjoint_action(&h, &y, &theta).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn orbit_examples() {
        let a = NilpotentLieRing::abelian(3, 1, 3).unwrap();
        let orbits = coadjoint_orbits(&a).unwrap();
        assert_eq!(orbits.len(), 27);
        assert_eq!(orbit_zeta(&a).unwrap(), DirichletPoly::from_counts([(1, 27)]));
        let h = NilpotentLieRing::heisenberg(3, 1).unwrap();
        let census = orbit_census(&coadjoint_orbits(&h).unwrap());
        assert_eq!(census.orbits, vec![CensusEntry { size: 1, dim: 1, count: 9 }, CensusEntry { size: 9, dim: 3, count: 2 }]);
        assert_eq!(orbit_zeta(&h).unwrap(), DirichletPoly::from_counts([(1, 9), (3, 2)]));
        let h7 = NilpotentLieRing::heisenberg(7, 1).unwrap();
        assert_eq!(orbit_zeta(&h7).unwrap(), DirichletPoly::from_counts([(1, 49), (7, 6)]));
        let json = serde_json::to_string(&census).unwrap();
        assert!(json.starts_with("{\"orbits\":[{\"size\":1,\"dim\":1,\"count\":9}"));
    }
}
