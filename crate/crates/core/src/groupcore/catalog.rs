//! Bundled generators for small groups used as a test corpus.

use super::group::{group_from_generators, group_from_permutations, FiniteGroup, DEFAULT_GROUP_CAP};
use crate::error::{Error, Result};

/// Names of the bundled groups, with their orders.
pub const CATALOG: &[(&str, usize)] = &[
    ("C1", 1),
    ("C2", 2),
    ("C3", 3),
    ("C4", 4),
    ("V4", 4),
    ("C5", 5),
    ("C6", 6),
    ("S3", 6),
    ("C7", 7),
    ("C8", 8),
    ("C4xC2", 8),
    ("C2^3", 8),
    ("D8", 8),
    ("Q8", 8),
    ("C9", 9),
    ("C3xC3", 9),
    ("D10", 10),
    ("D12", 12),
    ("Dic12", 12),
    ("A4", 12),
    ("D16", 16),
    ("F20", 20),
    ("F21", 21),
    ("S4", 24),
    ("SL2(3)", 24),
    ("A4xC2", 24),
    ("Heis27", 27),
    ("S3xS3", 36),
    ("GL2(3)", 48),
    ("SL2(Z/4)", 48),
    ("A5", 60),
    ("S5", 120),
    ("SL2(5)", 120),
    ("Heis125", 125),
    ("PSL(2,7)", 168),
];

/// Permutation of `0..n` from disjoint cycles.
fn perm(n: u32, cycles: &[&[u32]]) -> Vec<u32> {
    let mut p: Vec<u32> = (0..n).collect();
    for c in cycles {
        for (i, &x) in c.iter().enumerate() {
            p[x as usize] = c[(i + 1) % c.len()];
        }
    }
    p
}

fn cyclic(n: u32) -> Vec<Vec<u32>> {
    vec![perm(n, &[&(0..n).collect::<Vec<_>>()])]
}

fn dihedral(n: u32) -> Vec<Vec<u32>> {
    // rotation, then the reflection i -> -i
    let rot = perm(n, &[&(0..n).collect::<Vec<_>>()]);
    let refl: Vec<u32> = (0..n).map(|i| (n - i) % n).collect();
    vec![rot, refl]
}

fn affine(p: u32, a: u32) -> Vec<Vec<u32>> {
    let shift: Vec<u32> = (0..p).map(|x| (x + 1) % p).collect();
    let scale: Vec<u32> = (0..p).map(|x| x * a % p).collect();
    vec![shift, scale]
}

fn perms(gens: Vec<Vec<u32>>) -> Result<FiniteGroup> {
    group_from_permutations(&gens, DEFAULT_GROUP_CAP)
}

fn mats(gens: &[&[i64]], n: usize, m: u64) -> Result<FiniteGroup> {
    let gens: Vec<Vec<i64>> = gens.iter().map(|g| g.to_vec()).collect();
    group_from_generators(&gens, n, m, DEFAULT_GROUP_CAP)
}

const SL2_GENS: [&[i64]; 2] = [&[1, 1, 0, 1], &[1, 0, 1, 1]];
const HEIS_GENS: [&[i64]; 2] = [&[1, 1, 0, 0, 1, 0, 0, 0, 1], &[1, 0, 0, 0, 1, 1, 0, 0, 1]];

/// A bundled group by name.
pub fn named(name: &str) -> Result<FiniteGroup> {
    match name {
        "C1" => perms(vec![vec![0]]),
        "C2" => perms(cyclic(2)),
        "C3" => perms(cyclic(3)),
        "C4" => perms(cyclic(4)),
        "C5" => perms(cyclic(5)),
        "C6" => perms(cyclic(6)),
        "C7" => perms(cyclic(7)),
        "C8" => perms(cyclic(8)),
        "C9" => perms(cyclic(9)),
        "V4" => perms(vec![perm(4, &[&[0, 1], &[2, 3]]), perm(4, &[&[0, 2], &[1, 3]])]),
        "C4xC2" => perms(vec![perm(6, &[&[0, 1, 2, 3]]), perm(6, &[&[4, 5]])]),
        "C2^3" => perms(vec![perm(6, &[&[0, 1]]), perm(6, &[&[2, 3]]), perm(6, &[&[4, 5]])]),
        "C3xC3" => perms(vec![perm(6, &[&[0, 1, 2]]), perm(6, &[&[3, 4, 5]])]),
        "S3" => perms(vec![perm(3, &[&[0, 1, 2]]), perm(3, &[&[0, 1]])]),
        "D8" => perms(dihedral(4)),
        "D10" => perms(dihedral(5)),
        "D12" => perms(dihedral(6)),
        "D16" => perms(dihedral(8)),
        "Q8" => mats(&[&[0, 2, 1, 0], &[1, 1, 1, 2]], 2, 3),
        // <diag(z, z^{-1}), [[0,-1],[1,0]]> with z of order 6 mod 7
        "Dic12" => mats(&[&[3, 0, 0, 5], &[0, 6, 1, 0]], 2, 7),
        "A4" => perms(vec![perm(4, &[&[0, 1, 2]]), perm(4, &[&[0, 1], &[2, 3]])]),
        "A4xC2" => perms(vec![perm(6, &[&[0, 1, 2]]), perm(6, &[&[0, 1], &[2, 3]]), perm(6, &[&[4, 5]])]),
        "S4" => perms(vec![perm(4, &[&[0, 1, 2, 3]]), perm(4, &[&[0, 1]])]),
        "F20" => perms(affine(5, 2)),
        "F21" => perms(affine(7, 2)),
        "SL2(3)" => mats(&SL2_GENS, 2, 3),
        "SL2(Z/4)" => mats(&SL2_GENS, 2, 4),
        "SL2(5)" => mats(&SL2_GENS, 2, 5),
        "GL2(3)" => mats(&[SL2_GENS[0], SL2_GENS[1], &[2, 0, 0, 1]], 2, 3),
        "Heis27" => mats(&HEIS_GENS, 3, 3),
        "Heis125" => mats(&HEIS_GENS, 3, 5),
        "S3xS3" => perms(vec![
            perm(6, &[&[0, 1, 2]]),
            perm(6, &[&[0, 1]]),
            perm(6, &[&[3, 4, 5]]),
            perm(6, &[&[3, 4]]),
        ]),
        "A5" => perms(vec![perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1, 2]])]),
        "S5" => perms(vec![perm(5, &[&[0, 1, 2, 3, 4]]), perm(5, &[&[0, 1]])]),
        // GL(3, 2): a transvection and a cyclic permutation matrix
        "PSL(2,7)" => mats(&[&[1, 1, 0, 0, 1, 0, 0, 0, 1], &[0, 0, 1, 1, 0, 0, 0, 1, 0]], 3, 2),
        _ => Err(Error::InvalidInput(format!("unknown catalog group {name:?}"))),
    }
}

/// Every bundled group.
pub fn catalog() -> Result<Vec<(&'static str, FiniteGroup)>> {
    CATALOG.iter().map(|&(name, _)| named(name).map(|g| (name, g))).collect()
}

#[cfg(test)]
mod tests {
    use super::super::chartable::character_table;
    use super::*;

    #[test]
    fn orders_and_tables() {
        for (name, order) in CATALOG {
            let g = named(name).unwrap();
            assert_eq!(g.order(), *order, "{name}");
            let t = character_table(&g).unwrap();
            t.verify_exact().unwrap();
            assert_eq!(t.degrees.iter().map(|d| d * d).sum::<u64>(), *order as u64);
        }
    }

    #[test]
    fn known_zetas() {
        use crate::dirichlet::DirichletPoly;
        let z = |n| character_table(&named(n).unwrap()).unwrap().zeta();
        assert_eq!(z("C1"), DirichletPoly::from_counts([(1, 1)]));
        assert_eq!(z("Heis27"), DirichletPoly::from_counts([(1, 9), (3, 2)]));
        assert_eq!(z("A5"), DirichletPoly::from_counts([(1, 1), (3, 2), (4, 1), (5, 1)]));
        assert_eq!(z("PSL(2,7)"), DirichletPoly::from_counts([(1, 1), (3, 2), (6, 1), (7, 1), (8, 1)]));
        assert_eq!(z("Q8"), z("D8"));
        assert_eq!(z("SL2(5)"), DirichletPoly::from_counts([(1, 1), (2, 2), (3, 2), (4, 2), (5, 1), (6, 1)]));
    }
}
