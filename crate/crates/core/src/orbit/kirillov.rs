use std::time::Instant;

use serde::Serialize;

use super::{coadjoint_orbits, decode, pair, zeta_of_orbits, CoadjointOrbit};
use crate::dirichlet::DirichletPoly;
use crate::error::{Error, Result};
use crate::groupcore::{character_table, Cyc, CycField};
use crate::liering::{group_from_liering, NilpotentLieRing};

/// `|O|^{-1/2} sum_{phi in O} zeta^{phi(log g)}` in `Q(zeta_{p^k})`, where `g`
/// is given by its coordinates `log g`.
pub fn kirillov_character(ring: &NilpotentLieRing, orbit: &CoadjointOrbit, g: &[u64]) -> Result<Cyc> {
    let field = CycField::new(ring.modulus() as u32);
    kirillov_value(ring, &field, orbit, g)
}

fn kirillov_value(ring: &NilpotentLieRing, field: &CycField, orbit: &CoadjointOrbit, g: &[u64]) -> Result<Cyc> {
    let m = ring.modulus();
    if g.len() != ring.rank {
        return Err(Error::InvalidInput("element has the wrong rank".into()));
    }
    let mut counts = vec![0i64; m as usize];
    for &code in &orbit.members {
        counts[pair(&decode(code, ring.rank, m), g, m) as usize] += 1;
    }
    let sum = field.from_root_counts(&counts, 1);
    let d = orbit.dim as i64;
    if sum.0.iter().any(|c| c % d != 0) {
        return Err(Error::Internal(format!("orbit sum is not divisible by sqrt|O| = {d}")));
    }
    Ok(Cyc(sum.0.iter().map(|c| c / d).collect()))
}

/// Kirillov characters (rows, one per orbit) evaluated at the given elements.
pub fn kirillov_matrix(ring: &NilpotentLieRing, orbits: &[CoadjointOrbit], elements: &[Vec<u64>]) -> Result<Vec<Vec<Cyc>>> {
    let field = CycField::new(ring.modulus() as u32);
    orbits.iter().map(|o| elements.iter().map(|g| kirillov_value(ring, &field, o, g)).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TableComparison {
    pub group_order: usize,
    pub orbits: usize,
    pub classes: usize,
    pub orbit_zeta: DirichletPoly,
    pub group_zeta: DirichletPoly,
    pub zeta_match: bool,
    /// The Kirillov matrix equals the character table up to row order, with
    /// columns indexed by the same classes.
    pub table_match: bool,
    pub seconds: f64,
}

impl TableComparison {
    pub fn holds(&self) -> bool {
        self.zeta_match && self.table_match && self.orbits == self.classes
    }
}

/// Orbit method against brute force: zeta functions and full character tables.
pub fn compare_with_table(ring: &NilpotentLieRing) -> Result<TableComparison> {
    let start = Instant::now();
    let orbits = coadjoint_orbits(ring)?;
    let (g, law) = group_from_liering(ring)?;
    let table = character_table(&g)?;
    table.verify()?;
    let reps: Vec<Vec<u64>> = (0..table.classes.len()).map(|c| law.decode(table.classes.rep(c))).collect();
    let local = CycField::new(ring.modulus() as u32);
    let mut kir: Vec<Vec<Cyc>> = Vec::new();
    if table.field.order() % local.order() != 0 {
        return Err(Error::Internal("table field does not contain the p^k-th roots of unity".into()));
    }
    for row in kirillov_matrix(ring, &orbits, &reps)? {
        kir.push(row.iter().map(|x| table.field.embed(&local, x)).collect());
    }
    let mut dixon = table.chars.clone();
    kir.sort();
    dixon.sort();
    let orbit_zeta = zeta_of_orbits(&orbits);
    let group_zeta = table.zeta();
    Ok(TableComparison {
        group_order: g.order(),
        orbits: orbits.len(),
        classes: table.classes.len(),
        zeta_match: orbit_zeta == group_zeta,
        orbit_zeta,
        group_zeta,
        table_match: kir == dixon,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::DualCharacter;
    use super::*;

    #[test]
    fn values() {
        let h = NilpotentLieRing::heisenberg(5, 1).unwrap();
        let orbits = coadjoint_orbits(&h).unwrap();
        let f = CycField::new(5);
        for o in &orbits {
            assert_eq!(kirillov_character(&h, o, &[0, 0, 0]).unwrap(), f.int(o.dim as i64));
        }
        // a linear character is zeta^{theta(log g)}
        let lin = orbits.iter().find(|o| o.contains(&h, &DualCharacter { theta: vec![2, 1, 0] })).unwrap();
        assert_eq!(lin.size, 1);
        assert_eq!(kirillov_character(&h, lin, &[1, 1, 4]).unwrap(), f.root(3));
        // big orbit through theta = Z^*, at central g = exp(Z)
        let big = orbits.iter().find(|o| o.contains(&h, &DualCharacter { theta: vec![0, 0, 1] })).unwrap();
        assert_eq!(big.size, 25);
        assert_eq!(kirillov_character(&h, big, &[0, 0, 1]).unwrap(), f.scale(&f.root(1), 5));
        assert!(kirillov_character(&h, big, &[1, 0, 0]).unwrap().is_zero());
    }

    #[test]
    fn small_suite_matches_tables() {
        for ring in [
            NilpotentLieRing::heisenberg(3, 1).unwrap(),
            NilpotentLieRing::heisenberg(5, 1).unwrap(),
            NilpotentLieRing::heisenberg(3, 2).unwrap(),
            NilpotentLieRing::sl2_congruence(5, 2).unwrap(),
            NilpotentLieRing::strictly_upper(4, 5, 1).unwrap(),
        ] {
            let c = compare_with_table(&ring).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }
}
