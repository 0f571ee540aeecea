use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use super::chartable::{character_table, CharacterTable};
use super::cyclotomic::Cyc;
use super::group::{FiniteGroup, Subgroup};
use crate::dirichlet::DirichletPoly;
use crate::error::{Error, Result};
use crate::numtheory::prime_power;
use crate::rational::{pow_int, q, qi, Q};

/// A subgroup of an ambient group with its extracted group and character table.
#[derive(Clone, Debug)]
pub struct SubgroupChars {
    pub sub: Subgroup,
    pub group: FiniteGroup,
    pub table: CharacterTable,
    index: HashMap<Vec<Cyc>, usize>,
}

impl SubgroupChars {
    pub fn new(ambient: &FiniteGroup, sub: Subgroup) -> Result<Self> {
        let group = ambient.extract(&sub);
        let table = character_table(&group)?;
        let index = table.chars.iter().enumerate().map(|(i, row)| (row.clone(), i)).collect();
        Ok(Self { sub, group, table, index })
    }

    /// The conjugate `tau^h : k -> tau(h^{-1} k h)` for an ambient element
    /// `h` normalizing this subgroup.
    pub fn act(&self, ambient: &FiniteGroup, h: u32, tau: usize) -> usize {
        let row = &self.table.chars[tau];
        let hi = ambient.inv(h);
        let image: Vec<Cyc> = (0..row.len())
            .map(|c| row[self.class_of_ambient(ambient.conj(self.rep_ambient(c), hi))].clone())
            .collect();
        self.index[&image]
    }

    /// Elements of `acting` (which normalizes this subgroup) fixing `tau`.
    pub fn stabilizer(&self, ambient: &FiniteGroup, acting: &Subgroup, tau: usize) -> Subgroup {
        let row = &self.table.chars[tau];
        let reps: Vec<u32> = (0..row.len()).map(|c| self.rep_ambient(c)).collect();
        let elems = acting
            .elements()
            .iter()
            .copied()
            .filter(|&h| {
                reps.iter()
                    .enumerate()
                    .all(|(c, &x)| row[self.class_of_ambient(ambient.conj(x, h))] == row[c])
            })
            .collect();
        Subgroup::from_sorted(elems)
    }

    /// The orbit of `tau` under the group generated by `gens`, sorted.
    pub fn orbit(&self, ambient: &FiniteGroup, gens: &[u32], tau: usize) -> Vec<usize> {
        let mut seen = vec![false; self.table.len()];
        seen[tau] = true;
        let mut out = vec![tau];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let t = self.act(ambient, g, out[i]);
                if !seen[t] {
                    seen[t] = true;
                    out.push(t);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Orbit representatives (minimal index) and orbit sizes of `taus`
    /// under the group generated by `gens`.
    pub fn orbit_reps(&self, ambient: &FiniteGroup, gens: &[u32], taus: &[usize]) -> Vec<(usize, usize)> {
        let mut done = vec![false; self.table.len()];
        let mut reps = Vec::new();
        let mut sorted = taus.to_vec();
        sorted.sort_unstable();
        for t in sorted {
            if done[t] {
                continue;
            }
            let orbit = self.orbit(ambient, gens, t);
            for &u in &orbit {
                done[u] = true;
            }
            reps.push((t, orbit.len()));
        }
        reps
    }

    pub fn order(&self) -> usize {
        self.sub.order()
    }

    /// Class (in this subgroup's table) of an ambient element of the subgroup.
    pub fn class_of_ambient(&self, x: u32) -> usize {
        self.table.class_of(self.sub.position(x).expect("element of subgroup"))
    }

    /// Ambient representative of a class.
    pub fn rep_ambient(&self, c: usize) -> u32 {
        self.sub.elements()[self.table.classes.rep(c) as usize]
    }
}

/// A normal pair `K <| H` inside an ambient group, with restriction
/// multiplicities `<Res chi, tau>_K` for `chi in Irr(H)`, `tau in Irr(K)`.
#[derive(Clone, Debug)]
pub struct NormalPair {
    pub ambient: FiniteGroup,
    pub h: SubgroupChars,
    pub k: SubgroupChars,
    pub mult: Vec<Vec<u64>>,
}

impl NormalPair {
    pub fn new(ambient: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Result<Self> {
        let hc = SubgroupChars::new(ambient, h.clone())?;
        let kc = SubgroupChars::new(ambient, k.clone())?;
        Self::from_parts(ambient, hc, kc)
    }

    pub fn from_parts(ambient: &FiniteGroup, h: SubgroupChars, k: SubgroupChars) -> Result<Self> {
        if !k.sub.is_subset(&h.sub) {
            return Err(Error::InvalidInput("K is not contained in H".into()));
        }
        let normal = k.sub.elements().iter().all(|&x| {
            h.sub.elements().iter().all(|&g| k.sub.contains(ambient.conj(x, g)))
        });
        if !normal {
            return Err(Error::InvalidInput("K is not normal in H".into()));
        }
        let mult = restriction_multiplicities(&h, &k)?;
        Ok(Self { ambient: ambient.clone(), h, k, mult })
    }

    /// Indices of `Irr(H | tau)`.
    pub fn irr_over(&self, tau: usize) -> Vec<usize> {
        (0..self.h.table.len()).filter(|&chi| self.mult[chi][tau] > 0).collect()
    }

    /// `sum_{rho in Irr(H|tau)} (dim rho / dim tau)^{-s}`.
    pub fn relative_zeta(&self, tau: usize) -> Result<DirichletPoly> {
        let dt = self.k.table.degrees[tau];
        let mut out = DirichletPoly::zero();
        for chi in self.irr_over(tau) {
            let d = self.h.table.degrees[chi];
            if !d.is_multiple_of(dt) {
                return Err(Error::Internal(format!("dim tau = {dt} does not divide dim rho = {d}")));
            }
            out.add_term(d / dt, qi(1))?;
        }
        Ok(out)
    }

    pub fn act(&self, h: u32, tau: usize) -> usize {
        self.k.act(&self.ambient, h, tau)
    }

    /// `Stab_H(tau)` as a subgroup of the ambient group.
    pub fn stabilizer(&self, tau: usize) -> Subgroup {
        self.k.stabilizer(&self.ambient, &self.h.sub, tau)
    }

    /// The `H`-orbit of `tau`, sorted.
    pub fn orbit(&self, tau: usize) -> Vec<usize> {
        self.k.orbit(&self.ambient, &self.ambient.subgroup_gens(&self.h.sub), tau)
    }

    pub fn index_of(&self, sub: &Subgroup) -> u64 {
        (self.h.order() / sub.order()) as u64
    }
}

pub(crate) fn restriction_multiplicities(h: &SubgroupChars, k: &SubgroupChars) -> Result<Vec<Vec<u64>>> {
    let fh = &h.table.field;
    let fk = &k.table.field;
    let rk = k.table.len();
    let fused: Vec<usize> = (0..rk).map(|c| h.class_of_ambient(k.rep_ambient(c))).collect();
    let sizes: Vec<i64> = (0..rk).map(|c| k.table.classes.size(c) as i64).collect();
    let weighted: Vec<Vec<Cyc>> = k
        .table
        .chars
        .iter()
        .map(|row| {
            row.iter()
                .zip(&sizes)
                .map(|(v, &s)| fh.scale(&fh.embed(fk, &fk.conj(v)), s))
                .collect()
        })
        .collect();
    let order = k.order() as i64;
    let mut out = vec![vec![0u64; rk]; h.table.len()];
    for (chi, row) in h.table.chars.iter().enumerate() {
        for (tau, w) in weighted.iter().enumerate() {
            let mut acc = fh.zero();
            for c in 0..rk {
                acc = fh.add(&acc, &fh.mul(&row[fused[c]], &w[c]));
            }
            let v = acc
                .as_integer()
                .filter(|v| v % order == 0 && *v >= 0)
                .ok_or_else(|| Error::Internal("restriction multiplicity is not a natural number".into()))?;
            out[chi][tau] = (v / order) as u64;
        }
    }
    Ok(out)
}

/// `Irr(H | tau)` as indices into `character_table(H)`.
pub fn irr_over(h: &FiniteGroup, k: &Subgroup, tau: usize) -> Result<Vec<usize>> {
    let pair = NormalPair::new(h, &h.whole(), k)?;
    check_tau(&pair, tau)?;
    Ok(pair.irr_over(tau))
}

pub fn relative_zeta(h: &FiniteGroup, k: &Subgroup, tau: usize) -> Result<DirichletPoly> {
    let pair = NormalPair::new(h, &h.whole(), k)?;
    check_tau(&pair, tau)?;
    pair.relative_zeta(tau)
}

pub fn stabilizer_of_char(h: &FiniteGroup, k: &Subgroup, tau: usize) -> Result<Subgroup> {
    let pair = NormalPair::new(h, &h.whole(), k)?;
    check_tau(&pair, tau)?;
    Ok(pair.stabilizer(tau))
}

fn check_tau(pair: &NormalPair, tau: usize) -> Result<()> {
    if tau >= pair.k.table.len() {
        return Err(Error::InvalidInput(format!(
            "character index {tau} out of range ({} irreducibles)",
            pair.k.table.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordCheck {
    pub holds: bool,
    /// A character of `K` over which the accounting fails.
    pub witness: Option<usize>,
    pub lhs: DirichletPoly,
    pub rhs: DirichletPoly,
}

/// `zeta_H = sum_{tau in Irr K} [H : Stab tau]^{-1} (dim tau)^{-s} zeta_{H|tau}`,
/// compared as exact Dirichlet polynomials.
pub fn verify_clifford_sum(h: &FiniteGroup, k: &Subgroup) -> Result<CliffordCheck> {
    let pair = NormalPair::new(h, &h.whole(), k)?;
    verify_clifford_pair(&pair)
}

pub fn verify_clifford_pair(pair: &NormalPair) -> Result<CliffordCheck> {
    let lhs = pair.h.table.zeta();
    let mut rhs = DirichletPoly::zero();
    let mut orbit_len = vec![0usize; pair.k.table.len()];
    for tau in 0..pair.k.table.len() {
        let stab = pair.stabilizer(tau);
        let index = pair.index_of(&stab);
        orbit_len[tau] = index as usize;
        let rel = pair.relative_zeta(tau)?.shift(pair.k.table.degrees[tau]);
        rhs = rhs.add(&rel.scale(&q(1, index as i64)));
    }
    let mut witness = None;
    for chi in 0..pair.h.table.len() {
        let weight: Q = (0..pair.k.table.len())
            .filter(|&t| pair.mult[chi][t] > 0)
            .map(|t| q(1, orbit_len[t] as i64))
            .fold(Q::zero(), |a, b| a + b);
        if weight != qi(1) {
            witness = (0..pair.k.table.len()).find(|&t| pair.mult[chi][t] > 0);
            break;
        }
    }
    let holds = lhs == rhs && witness.is_none();
    Ok(CliffordCheck { holds, witness, lhs, rhs })
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexBoundsReport {
    pub holds: bool,
    pub index: u64,
    /// First `N` (or `s`) at which an inequality fails.
    pub failure: Option<String>,
}

/// Count and zeta inequalities comparing `zeta_{H|tau}` and `zeta_{L|tau}`
/// for `K <= H <= L`, `K <| L`. `N / [L:H]` is read as its floor.
pub fn verify_index_bounds(l: &FiniteGroup, h: &Subgroup, k: &Subgroup, tau: usize) -> Result<IndexBoundsReport> {
    if !k.is_subset(h) {
        return Err(Error::Precondition("K is not contained in H".into()));
    }
    if !l.is_normal(k) {
        return Err(Error::Precondition("K is not normal in L".into()));
    }
    let kc = SubgroupChars::new(l, k.clone())?;
    let lc = SubgroupChars::new(l, l.whole())?;
    let hc = SubgroupChars::new(l, h.clone())?;
    let lp = NormalPair::from_parts(l, lc, kc.clone())?;
    let hp = NormalPair::from_parts(l, hc, kc)?;
    check_tau(&lp, tau)?;
    index_bounds(&lp, &hp, tau)
}

pub fn index_bounds(lp: &NormalPair, hp: &NormalPair, tau: usize) -> Result<IndexBoundsReport> {
    let idx = (lp.h.order() / hp.h.order()) as u64;
    let zl = lp.relative_zeta(tau)?;
    let zh = hp.relative_zeta(tau)?;
    let counts = |z: &DirichletPoly, n: u64| -> Q {
        z.terms().filter(|(d, _)| *d <= n).fold(Q::zero(), |a, (_, c)| a + c)
    };
    let max = zl.max_dim().unwrap_or(0).max(zh.max_dim().unwrap_or(0));
    let iq = qi(idx as i64);
    let fail = |what: String| Ok(IndexBoundsReport { holds: false, index: idx, failure: Some(what) });
    for n in 1..=max {
        let rl = counts(&zl, n);
        let lower = counts(&zh, n / idx) / &iq;
        let upper = counts(&zh, n) * &iq;
        if !(lower <= rl && rl <= upper) {
            return fail(format!("N = {n}"));
        }
    }
    for s in 0..=2i64 {
        let vl = zl.eval_exact(s);
        let vh = zh.eval_exact(s);
        let lower = &vh * pow_int(idx, -1 - s);
        let upper = &vh * &iq;
        if !(lower <= vl && vl <= upper) {
            return fail(format!("s = {s}"));
        }
    }
    Ok(IndexBoundsReport { holds: true, index: idx, failure: None })
}

/// `O_p(G)`: the elements whose normal closure is a `p`-group.
pub fn max_normal_p_subgroup(g: &FiniteGroup, p: u64) -> Subgroup {
    let classes = super::group::Classes::compute(g);
    let is_p_power = |n: u64| n == 1 || prime_power(n).is_some_and(|(b, _)| b == p);
    let mut elems = Vec::new();
    for k in 0..classes.len() {
        if !is_p_power(classes.orders[k]) {
            continue;
        }
        if is_p_power(g.normal_closure(&[classes.rep(k)]).order() as u64) {
            elems.extend_from_slice(&classes.members[k]);
        }
    }
    elems.sort_unstable();
    Subgroup::from_sorted(elems)
}

/// All normal subgroups, by joining normal closures of classes.
pub fn normal_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let classes = super::group::Classes::compute(g);
    let mut found: Vec<Subgroup> = vec![g.trivial()];
    let minimal: Vec<Subgroup> = (0..classes.len()).map(|k| g.normal_closure(&[classes.rep(k)])).collect();
    let mut i = 0;
    found.extend(minimal.iter().cloned());
    found.sort();
    found.dedup();
    while i < found.len() {
        let cur = found[i].clone();
        for m in &minimal {
            if m.is_subset(&cur) {
                continue;
            }
            let mut gens = g.subgroup_gens(&cur);
            gens.extend(g.subgroup_gens(m));
            let join = g.subgroup_generated(&gens);
            if !found.contains(&join) {
                found.push(join);
            }
        }
        i += 1;
    }
    found.sort_by_key(|s| (s.order(), s.elements().to_vec()));
    found
}

#[derive(Clone, Debug, Serialize)]
pub struct Extendibility {
    pub extendible: bool,
    pub count_match: bool,
    /// `dim chi / dim rho` over `Irr(S | rho)`, sorted.
    pub relative_degrees: Vec<u64>,
    /// Degrees of `Irr(S / V)`, sorted.
    pub quotient_degrees: Vec<u64>,
}

/// Decides whether an `S`-fixed `rho in Irr(V)` extends to `S`, by
/// exhaustive restriction.
pub fn extendibility_check(s: &FiniteGroup, v: &Subgroup, rho: usize) -> Result<Extendibility> {
    let pair = NormalPair::new(s, &s.whole(), v)?;
    check_tau(&pair, rho)?;
    extendibility_of_pair(&pair, rho)
}

pub fn extendibility_of_pair(pair: &NormalPair, rho: usize) -> Result<Extendibility> {
    if pair.stabilizer(rho).order() != pair.h.order() {
        return Err(Error::Precondition("rho is not fixed by S".into()));
    }
    let dr = pair.k.table.degrees[rho];
    let over = pair.irr_over(rho);
    let extendible = over
        .iter()
        .any(|&chi| pair.h.table.degrees[chi] == dr && pair.mult[chi][rho] == 1);
    let mut relative_degrees: Vec<u64> = over.iter().map(|&chi| pair.h.table.degrees[chi] / dr).collect();
    relative_degrees.sort_unstable();
    // V lies in ker chi iff chi is constant chi(1) on the classes meeting V
    let v_classes: Vec<usize> = pair
        .k
        .sub
        .elements()
        .iter()
        .map(|&x| pair.h.class_of_ambient(x))
        .collect();
    let mut quotient_degrees: Vec<u64> = (0..pair.h.table.len())
        .filter(|&chi| {
            let ker = pair.h.table.kernel_classes(chi);
            v_classes.iter().all(|&c| ker[c])
        })
        .map(|chi| pair.h.table.degrees[chi])
        .collect();
    quotient_degrees.sort_unstable();
    let count_match = relative_degrees == quotient_degrees;
    Ok(Extendibility { extendible, count_match, relative_degrees, quotient_degrees })
}

#[cfg(test)]
mod tests {
    use super::super::catalog::named;
    use super::*;

    fn find_tau(pair: &NormalPair, pred: impl Fn(usize) -> bool) -> usize {
        (0..pair.k.table.len()).find(|&t| pred(t)).unwrap()
    }

    #[test]
    fn s3_over_c3() {
        let s3 = named("S3").unwrap();
        let c3 = max_normal_p_subgroup(&s3, 3);
        assert_eq!(c3.order(), 3);
        let pair = NormalPair::new(&s3, &s3.whole(), &c3).unwrap();
        let omega = find_tau(&pair, |t| pair.k.table.chars[t][1] != pair.k.table.field.int(1));
        let over = pair.irr_over(omega);
        assert_eq!(over.len(), 1);
        assert_eq!(pair.h.table.degrees[over[0]], 2);
        assert_eq!(pair.relative_zeta(omega).unwrap(), DirichletPoly::from_counts([(2, 1)]));
        assert_eq!(pair.stabilizer(omega), c3);
        assert_eq!(pair.relative_zeta(0).unwrap(), DirichletPoly::from_counts([(1, 2)]));
        let check = verify_clifford_pair(&pair).unwrap();
        assert!(check.holds);
        // rhs = 2 + 2 (1/2) 2^{-s}
        assert_eq!(check.rhs, DirichletPoly::from_counts([(1, 2), (2, 1)]));
    }

    #[test]
    fn s4_over_v4() {
        let s4 = named("S4").unwrap();
        let v4 = max_normal_p_subgroup(&s4, 2);
        assert_eq!(v4.order(), 4);
        let pair = NormalPair::new(&s4, &s4.whole(), &v4).unwrap();
        for tau in 1..4 {
            let over = pair.irr_over(tau);
            assert_eq!(over.iter().map(|&c| pair.h.table.degrees[c]).collect::<Vec<_>>(), vec![3, 3]);
            assert_eq!(pair.relative_zeta(tau).unwrap(), DirichletPoly::from_counts([(3, 2)]));
            assert_eq!(pair.stabilizer(tau).order(), 8);
        }
        assert!(verify_clifford_pair(&pair).unwrap().holds);
        assert_eq!(irr_over(&s4, &s4.whole(), 2).unwrap(), vec![2]);
    }

    #[test]
    fn stabilizers() {
        let d8 = named("D8").unwrap();
        let c4 = d8.subgroup_generated(&[d8.gens()[0]]);
        assert_eq!(c4.order(), 4);
        let pair = NormalPair::new(&d8, &d8.whole(), &c4).unwrap();
        let f = &pair.k.table.field;
        // the order-2 character takes the value -1 on a generator
        let tau = find_tau(&pair, |t| pair.k.table.chars[t].iter().all(|v| v.as_integer().is_some()) && t != 0);
        assert!(pair.k.table.chars[tau].contains(&f.int(-1)));
        assert_eq!(pair.stabilizer(tau).order(), 8);
        let ext = extendibility_of_pair(&pair, tau).unwrap();
        assert!(ext.extendible && ext.count_match);
        assert_eq!(ext.relative_degrees, vec![1, 1]);
        let c6 = named("C6").unwrap();
        let sub = c6.subgroup_generated(&[c6.pow(c6.gens()[0], 2)]);
        for t in 0..3 {
            assert_eq!(stabilizer_of_char(&c6, &sub, t).unwrap().order(), 6);
        }
    }

    #[test]
    fn sl2_3_over_q8() {
        let g = named("SL2(3)").unwrap();
        let q8 = max_normal_p_subgroup(&g, 2);
        assert_eq!(q8.order(), 8);
        let pair = NormalPair::new(&g, &g.whole(), &q8).unwrap();
        let rho = find_tau(&pair, |t| pair.k.table.degrees[t] == 2);
        let ext = extendibility_of_pair(&pair, rho).unwrap();
        // the three 2-dimensional characters of SL2(3) all restrict to it
        assert!(ext.extendible);
        assert!(ext.count_match);
        assert_eq!(ext.relative_degrees, vec![1, 1, 1]);
        let whole = extendibility_check(&g, &g.whole(), 3).unwrap();
        assert!(whole.extendible && whole.count_match);
    }

    #[test]
    fn o_p_and_normal_subgroups() {
        let s4 = named("S4").unwrap();
        assert_eq!(max_normal_p_subgroup(&s4, 3).order(), 1);
        assert_eq!(max_normal_p_subgroup(&s4, 5).order(), 1);
        let heis = named("Heis27").unwrap();
        assert_eq!(max_normal_p_subgroup(&heis, 3).order(), 27);
        let orders: Vec<usize> = normal_subgroups(&s4).iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 4, 12, 24]);
        let q8 = named("Q8").unwrap();
        assert_eq!(normal_subgroups(&q8).len(), 6);
    }

    #[test]
    fn index_bounds_examples() {
        let s4 = named("S4").unwrap();
        let v4 = max_normal_p_subgroup(&s4, 2);
        let a4 = normal_subgroups(&s4).into_iter().find(|s| s.order() == 12).unwrap();
        for tau in 0..4 {
            assert!(verify_index_bounds(&s4, &a4, &v4, tau).unwrap().holds);
            assert!(verify_index_bounds(&s4, &s4.whole(), &v4, tau).unwrap().holds);
        }
        let s3 = named("S3").unwrap();
        let c3 = max_normal_p_subgroup(&s3, 3);
        let r = verify_index_bounds(&s3, &c3, &s3.trivial(), 0).unwrap();
        assert!(r.holds);
        assert_eq!(r.index, 2);
        assert!(matches!(
            verify_index_bounds(&s3, &c3, &s3.subgroup_generated(&[s3.gens()[1]]), 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn not_normal_is_rejected() {
        let s3 = named("S3").unwrap();
        let c2 = s3.subgroup_generated(&[s3.gens()[1]]);
        assert!(matches!(irr_over(&s3, &c2, 0), Err(Error::InvalidInput(_))));
    }
}
