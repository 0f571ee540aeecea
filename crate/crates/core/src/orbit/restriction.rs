use std::collections::HashMap;

use serde::Serialize;

use super::kirillov::kirillov_matrix;
use super::{check_envelope, coadjoint_orbits, decode, encode, pair, DualCharacter};
use crate::error::{Error, Result};
use crate::groupcore::CycField;
use crate::liering::NilpotentLieRing;
use crate::numtheory::mul_mod;

/// A Lie subring of a host ring, free on the given vectors.
#[derive(Clone, Debug)]
pub struct Subring {
    pub gens: Vec<Vec<u64>>,
    /// Host coordinates of every element, indexed by the code of its
    /// coordinates in `gens`.
    elements: Vec<Vec<u64>>,
    coords: HashMap<Vec<u64>, Vec<u64>>,
    pub ring: NilpotentLieRing,
}

impl Subring {
    pub fn new(host: &NilpotentLieRing, gens: Vec<Vec<u64>>) -> Result<Self> {
        let m = host.modulus();
        let r = gens.len();
        if gens.iter().any(|g| g.len() != host.rank) {
            return Err(Error::InvalidInput("subring generator has the wrong rank".into()));
        }
        let size = m.checked_pow(r as u32).filter(|&s| s <= 1 << 20).ok_or_else(|| Error::SizeExceeded {
            what: "subring".into(),
            cap: 1 << 20,
        })?;
        let mut elements = Vec::with_capacity(size as usize);
        let mut coords = HashMap::new();
        for code in 0..size as u32 {
            let c = decode(code, r, m);
            let mut v = vec![0u64; host.rank];
            for (g, &a) in gens.iter().zip(&c) {
                for (x, &y) in v.iter_mut().zip(g) {
                    *x = (*x + mul_mod(a, y, m)) % m;
                }
            }
            if coords.insert(v.clone(), c).is_some() {
                return Err(Error::InvalidInput("subring generators are not free".into()));
            }
            elements.push(v);
        }
        let mut structure = vec![Vec::new(); r * r];
        for i in 0..r {
            for j in 0..r {
                let b = host.bracket(&gens[i], &gens[j]);
                let c = coords
                    .get(&b)
                    .ok_or_else(|| Error::InvalidInput(format!("[g{i}, g{j}] leaves the span: not a subring")))?;
                structure[i * r + j] = c.iter().enumerate().filter(|&(_, &x)| x != 0).map(|(l, &x)| (l, x as i64)).collect();
            }
        }
        let ring = NilpotentLieRing::new(host.p, host.k, r, &structure, None)?;
        Ok(Self { gens, elements, coords, ring })
    }

    /// Restriction of a host functional, as values on the generators.
    pub fn restrict(&self, theta: &[u64], m: u64) -> Vec<u64> {
        self.gens.iter().map(|g| pair(theta, g, m)).collect()
    }

    /// Coordinates in the generators of a host vector in the subring.
    pub fn coordinates(&self, v: &[u64]) -> Option<&Vec<u64>> {
        self.coords.get(v)
    }
}

/// Whether some `Ad*(g) theta`, `g in exp(L)`, restricts to `tau` on the subring.
pub fn restriction_test(big: &NilpotentLieRing, sub: &Subring, theta: &DualCharacter, tau: &DualCharacter) -> Result<bool> {
    check_envelope(big)?;
    let m = big.modulus();
    if theta.theta.len() != big.rank || tau.theta.len() != sub.gens.len() {
        return Err(Error::InvalidInput("functional has the wrong rank".into()));
    }
    let orbits = coadjoint_orbits(big)?;
    let orbit = orbits.iter().find(|o| o.contains(big, theta)).expect("orbits partition the dual");
    Ok(orbit.members.iter().any(|&c| sub.restrict(&decode(c, big.rank, m), m) == tau.theta))
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionCensus {
    pub pairs: usize,
    pub contained: usize,
    pub agreements: usize,
}

impl RestrictionCensus {
    pub fn holds(&self) -> bool {
        self.pairs == self.agreements
    }
}

/// Every pair `(theta, tau)`: the orbit criterion against the inner product
/// `<Res chi_theta, chi_tau>` of Kirillov characters on the subgroup.
pub fn restriction_census(big: &NilpotentLieRing, sub: &Subring) -> Result<RestrictionCensus> {
    let m = big.modulus();
    let big_orbits = coadjoint_orbits(big)?;
    let small_orbits = coadjoint_orbits(&sub.ring)?;
    let field = CycField::new(m as u32);
    let small_elems: Vec<Vec<u64>> = sub.elements.iter().map(|v| sub.coords[v].clone()).collect();
    let big_chars = kirillov_matrix(big, &big_orbits, &sub.elements)?;
    let small_chars = kirillov_matrix(&sub.ring, &small_orbits, &small_elems)?;
    let h = sub.elements.len() as i64;
    let mut inner = vec![vec![0i64; small_orbits.len()]; big_orbits.len()];
    for (a, row) in big_chars.iter().enumerate() {
        for (b, col) in small_chars.iter().enumerate() {
            let mut acc = field.zero();
            for (x, y) in row.iter().zip(col) {
                acc = field.add(&acc, &field.mul(x, &field.conj(y)));
            }
            let v = acc.as_integer().filter(|v| v % h == 0).ok_or_else(|| Error::Internal("inner product is not an integer".into()))?;
            inner[a][b] = v / h;
        }
    }
    let small_orbit_of = |tau: &[u64]| small_orbits.iter().position(|o| o.members.binary_search(&encode(tau, m)).is_ok()).unwrap();
    let mut census = RestrictionCensus { pairs: 0, contained: 0, agreements: 0 };
    for (a, o) in big_orbits.iter().enumerate() {
        let restrictions: std::collections::HashSet<Vec<u64>> =
            o.members.iter().map(|&c| sub.restrict(&decode(c, big.rank, m), m)).collect();
        for code in 0..small_elems.len() as u32 {
            let tau = decode(code, sub.gens.len(), m);
            let by_orbit = restrictions.contains(&tau);
            let by_chars = inner[a][small_orbit_of(&tau)] > 0;
            // one pair per member theta of the orbit
            census.pairs += o.size;
            census.contained += o.size * usize::from(by_orbit);
            census.agreements += o.size * usize::from(by_orbit == by_chars);
        }
    }
    Ok(census)
}
