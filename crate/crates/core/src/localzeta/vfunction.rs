use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cone::{decompose_cone, Affine, Cone};
use super::sum::{cone_geometric_sum, ConeSumForm};
use super::{poly_at, Exact, Float, Point};
use crate::error::{Error, Result};
use crate::numtheory::is_prime;
use crate::rational::{to_f64, Q};

/// `ac(x_coord) mod p` lies in `residues mod p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCondition {
    pub coord: usize,
    pub residues: Vec<i64>,
}

/// `1_region(x) p^{-s phi(val x) + psi(val x)} count(p)^{-s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VPiece {
    /// Conditions on the valuation vector; `val >= 0` is implicit.
    pub region: Cone,
    #[serde(default)]
    pub residues: Vec<ResidueCondition>,
    pub phi: Affine,
    #[serde(default)]
    pub psi: Option<Affine>,
    /// Coefficients in `p`, constant term first.
    #[serde(default = "one_poly")]
    pub count_poly: Vec<i64>,
}

fn one_poly() -> Vec<i64> {
    vec![1]
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VFunctionDesc {
    pub n: usize,
    pub pieces: Vec<VPiece>,
}

impl VFunctionDesc {
    pub fn validate(&self) -> Result<()> {
        for (i, piece) in self.pieces.iter().enumerate() {
            let bad = |m: &str| Err(Error::InvalidInput(format!("piece {i}: {m}")));
            if piece.region.dim != self.n || piece.phi.coeffs.len() != self.n {
                return bad("dimension mismatch");
            }
            piece.region.validate()?;
            if piece.psi.as_ref().is_some_and(|a| a.coeffs.len() != self.n) {
                return bad("psi has the wrong dimension");
            }
            if piece.count_poly.is_empty() {
                return bad("empty count polynomial");
            }
            let coords: BTreeSet<usize> = piece.residues.iter().map(|r| r.coord).collect();
            if coords.len() != piece.residues.len() || coords.iter().any(|&c| c >= self.n) {
                return bad("residue conditions must name distinct coordinates");
            }
        }
        Ok(())
    }
}

/// The V-function `p^{n(-As + B + 1)}` on `val(x) = n >= 0`.
pub fn example_vfunction(a: i64, b: i64) -> VFunctionDesc {
    VFunctionDesc {
        n: 1,
        pieces: vec![VPiece {
            region: Cone::new(1),
            residues: vec![],
            phi: Affine::new(vec![a], 0),
            psi: Some(Affine::new(vec![b + 1], 0)),
            count_poly: one_poly(),
        }],
    }
}

/// `(p - 1)/p * 1/(1 - p^{-As+B})`, evaluated directly.
pub fn example_closed_form(a: i64, b: i64, p: u64, s: i64) -> Result<Q> {
    let x = crate::rational::pow_int(p, b - a * s);
    if x >= Q::one() {
        return Err(Error::Pole { a, b, s: s as f64 });
    }
    Ok(Q::new((p as i64 - 1).into(), (p as i64).into()) / (Q::one() - x))
}

struct Prepared<'a> {
    f: &'a VFunctionDesc,
    p: u64,
    /// Per piece: the region with `val >= 0` added, and the largest valuation
    /// each coordinate reaches (`None` if unbounded).
    regions: Vec<Cone>,
    depth: Vec<Vec<Option<i64>>>,
    residues: Vec<Vec<Option<BTreeSet<u64>>>>,
    counts: Vec<Q>,
}

impl<'a> Prepared<'a> {
    fn new(f: &'a VFunctionDesc, p: u64) -> Result<Self> {
        f.validate()?;
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let mut out = Prepared { f, p, regions: vec![], depth: vec![], residues: vec![], counts: vec![] };
        for piece in &f.pieces {
            let mut region = piece.region.clone();
            for i in 0..f.n {
                region = region.with_inequality((0..f.n).map(|j| i64::from(i == j)).collect(), 0);
            }
            let parts = decompose_cone(&region)?;
            out.depth.push(
                (0..f.n)
                    .map(|i| {
                        if parts.iter().any(|pc| pc.generators.iter().any(|g| g[i] > 0)) {
                            None
                        } else {
                            Some(parts.iter().map(|pc| pc.apex[i]).max().unwrap_or(-1))
                        }
                    })
                    .collect(),
            );
            out.regions.push(region);
            let mut res = vec![None; f.n];
            for r in &piece.residues {
                let set: BTreeSet<u64> = r.residues.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
                if set.contains(&0) || set.len() != r.residues.len() {
                    return Err(Error::Domain(format!("residue set {:?} is not distinct and nonzero mod {p}", r.residues)));
                }
                res[r.coord] = Some(set);
            }
            out.residues.push(res);
            let c = poly_at(&piece.count_poly, p);
            if c <= Q::zero() {
                return Err(Error::Domain(format!("count polynomial is not positive at p = {p}")));
            }
            out.counts.push(c);
        }
        Ok(out)
    }

    fn term<P: Point>(&self, pt: &P, i: usize, vals: &[i64]) -> P::V {
        let piece = &self.f.pieces[i];
        let phi = piece.phi.eval(vals);
        let psi = piece.psi.as_ref().map_or(0, |a| a.eval(vals));
        pt.mul(&pt.p_pow(psi, phi), &pt.neg_s_pow(&self.counts[i]))
    }

    /// Value on a pattern with every coordinate shallow.
    fn eval_pattern<P: Point>(&self, pt: &P, vals: &[i64], acs: &[u64]) -> Result<P::V> {
        let mut hit = None;
        for (i, region) in self.regions.iter().enumerate() {
            let ok = region.contains(vals)
                && self.residues[i].iter().zip(acs).all(|(r, a)| r.as_ref().is_none_or(|set| set.contains(a)));
            if ok {
                if let Some(j) = hit {
                    return Err(Error::InvalidInput(format!("pieces {j} and {i} overlap at valuations {vals:?}")));
                }
                hit = Some(i);
            }
        }
        Ok(hit.map_or_else(|| pt.zero(), |i| self.term(pt, i, vals)))
    }

    fn reaches(&self, coord: usize, level: i64) -> bool {
        self.depth.iter().any(|d| d[coord].is_none_or(|m| m >= level))
    }

    /// Integral, measure included, over the set where the coordinates in
    /// `deep` lie in `p^k Z_p` and the others have the given pattern.
    fn tail<P: Point>(&self, pt: &P, k: i64, vals: &[i64], acs: &[u64], deep: &[usize]) -> Result<P::V> {
        let n = self.f.n;
        let p = self.p;
        let shallow_measure: Q =
            (0..n).filter(|i| !deep.contains(i)).map(|i| crate::rational::pow_int(p, -vals[i] - 1)).product();
        let mut acc = pt.zero();
        for (i, piece) in self.f.pieces.iter().enumerate() {
            let res_ok = (0..n).filter(|c| !deep.contains(c)).all(|c| self.residues[i][c].as_ref().is_none_or(|s| s.contains(&acs[c])));
            if !res_ok {
                continue;
            }
            let restrict = |a: &Affine| -> Affine {
                let constant = a.constant + (0..n).filter(|c| !deep.contains(c)).map(|c| a.coeffs[c] * vals[c]).sum::<i64>();
                Affine::new(deep.iter().map(|&c| a.coeffs[c]).collect(), constant)
            };
            let mut sub = Cone::new(deep.len());
            for ineq in &self.regions[i].inequalities {
                let r = restrict(ineq);
                sub = sub.with_inequality(r.coeffs, r.constant);
            }
            for cong in &self.regions[i].congruences {
                let r = restrict(&cong.affine);
                sub = sub.with_congruence(r.coeffs, r.constant, cong.modulus);
            }
            for j in 0..deep.len() {
                sub = sub.with_inequality((0..deep.len()).map(|l| i64::from(l == j)).collect(), -k);
            }
            let phi = restrict(&piece.phi);
            let psi = piece.psi.as_ref().map_or_else(|| Affine::new(vec![0; deep.len()], 0), restrict);
            let mbar: Vec<i64> = psi.coeffs.iter().map(|c| c - 1).collect();
            // val = m with probability (1 - 1/p) p^{-m}; the ac factor is |S|/(p - 1)
            let mut c = shallow_measure.clone();
            for &d in deep {
                c *= match &self.residues[i][d] {
                    Some(set) => Q::new((set.len() as i64).into(), (p as i64).into()),
                    None => Q::new((p as i64 - 1).into(), (p as i64).into()),
                };
            }
            let form = cone_geometric_sum(&sub, &phi.coeffs, &mbar)?;
            let v = form.eval_at(pt)?;
            let scale = pt.mul(&pt.from_q(&c), &pt.mul(&pt.p_pow(psi.constant, phi.constant), &pt.neg_s_pow(&self.counts[i])));
            acc = pt.add(&acc, &pt.mul(&v, &scale));
        }
        Ok(acc)
    }

    fn integral<P: Point>(&self, pt: &P, k: u32) -> Result<P::V> {
        let n = self.f.n;
        let p = self.p;
        let kk = k as i64;
        // per coordinate: (valuation, angular component), or deep
        let states: Vec<Option<(i64, u64)>> =
            (0..kk).flat_map(|v| (1..p).map(move |a| Some((v, a)))).chain(std::iter::once(None)).collect();
        let total = states.len().checked_pow(n as u32).filter(|&t| t <= 1 << 24).ok_or_else(|| Error::SizeExceeded {
            what: "valuation patterns".into(),
            cap: 1 << 24,
        })?;
        let parts: Vec<P::V> = (0..total)
            .into_par_iter()
            .map(|mut code| -> Result<P::V> {
                let mut vals = vec![0i64; n];
                let mut acs = vec![0u64; n];
                let mut deep = Vec::new();
                for i in 0..n {
                    match states[code % states.len()] {
                        Some((v, a)) => {
                            vals[i] = v;
                            acs[i] = a;
                        }
                        None => deep.push(i),
                    }
                    code /= states.len();
                }
                if deep.is_empty() {
                    let measure: Q = vals.iter().map(|&v| crate::rational::pow_int(p, -v - 1)).product();
                    return Ok(pt.mul(&pt.from_q(&measure), &self.eval_pattern(pt, &vals, &acs)?));
                }
                if deep.iter().all(|&d| !self.reaches(d, kk)) {
                    return Ok(pt.zero());
                }
                self.tail(pt, kk, &vals, &acs, &deep)
            })
            .collect::<Result<_>>()?;
        Ok(parts.iter().fold(pt.zero(), |acc, v| pt.add(&acc, v)))
    }
}

fn pattern(x: &[i64], p: u64, k: u32) -> Result<(Vec<i64>, Vec<u64>, Vec<usize>)> {
    let m = (p as i128).checked_pow(k).ok_or_else(|| Error::InvalidInput("p^k overflows".into()))?;
    let mut vals = Vec::new();
    let mut acs = Vec::new();
    let mut deep = Vec::new();
    for (i, &xi) in x.iter().enumerate() {
        let mut r = (xi as i128).rem_euclid(m);
        if r == 0 {
            deep.push(i);
            vals.push(0);
            acs.push(0);
            continue;
        }
        let mut v = 0;
        while r % p as i128 == 0 {
            r /= p as i128;
            v += 1;
        }
        vals.push(v);
        acs.push((r % p as i128) as u64);
    }
    Ok((vals, acs, deep))
}

fn eval_with<P: Point>(f: &VFunctionDesc, x: &[i64], pt: &P, p: u64, k: u32) -> Result<P::V> {
    let prep = Prepared::new(f, p)?;
    if x.len() != f.n {
        return Err(Error::InvalidInput("point has the wrong dimension".into()));
    }
    let (vals, acs, deep) = pattern(x, p, k)?;
    if let Some(&coord) = deep.iter().find(|&&d| prep.reaches(d, k as i64)) {
        return Err(Error::InsufficientLevel { coord, level: k });
    }
    if !deep.is_empty() {
        return Ok(pt.zero());
    }
    prep.eval_pattern(pt, &vals, &acs)
}

/// `F_p(x, s)` for `x` read modulo `p^k`.
pub fn vfunction_eval(f: &VFunctionDesc, x: &[i64], s: &Q, p: u64, k: u32) -> Result<f64> {
    eval_with(f, x, &Float { p: p as f64, s: to_f64(s) }, p, k)
}

pub fn vfunction_eval_exact(f: &VFunctionDesc, x: &[i64], s: i64, p: u64, k: u32) -> Result<Q> {
    eval_with(f, x, &Exact { p, s }, p, k)
}

/// `int F_p(x, s) dx` over `Z_p^n`, summed over residues modulo `p^k`
/// grouped by valuation and angular component. Balls where a coordinate is
/// `0 mod p^k` are integrated in closed form, so the value does not depend on
/// `k` once `k` exceeds the depth of every bounded region.
pub fn vfunction_integral(f: &VFunctionDesc, p: u64, s: &Q, k: u32) -> Result<f64> {
    Prepared::new(f, p)?.integral(&Float { p: p as f64, s: to_f64(s) }, k)
}

pub fn vfunction_integral_exact(f: &VFunctionDesc, p: u64, s: i64, k: u32) -> Result<Q> {
    Prepared::new(f, p)?.integral(&Exact { p, s }, k)
}

/// `(poly(p) / p^{p_power}) * count(p)^{-s} * cone sum`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VJaikinTerm {
    pub prefactor: Vec<i64>,
    pub p_power: u32,
    pub count_poly: Vec<i64>,
    pub form: ConeSumForm,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VJaikinForm {
    pub terms: Vec<VJaikinTerm>,
}

impl VJaikinForm {
    fn eval_at<P: Point>(&self, pt: &P, p: u64) -> Result<P::V> {
        let mut acc = pt.zero();
        for t in &self.terms {
            let pre = poly_at(&t.prefactor, p) / crate::rational::pow_int(p, t.p_power as i64);
            let c = poly_at(&t.count_poly, p);
            if c <= Q::zero() {
                return Err(Error::Domain(format!("count polynomial is not positive at p = {p}")));
            }
            let v = pt.mul(&pt.mul(&pt.from_q(&pre), &pt.neg_s_pow(&c)), &t.form.eval_at(pt)?);
            acc = pt.add(&acc, &v);
        }
        Ok(acc)
    }

    pub fn eval(&self, p: u64, s: &Q) -> Result<f64> {
        self.eval_at(&Float { p: p as f64, s: to_f64(s) }, p)
    }

    pub fn eval_exact(&self, p: u64, s: i64) -> Result<Q> {
        self.eval_at(&Exact { p, s }, p)
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Closed form of the integral, one cone sum per piece. The measure of
/// `val(x_i) = g_i` is `(1 - 1/p) p^{-g_i}`, or `|S|/p * p^{-g_i}` under a
/// residue condition, so each piece sums `p^{-s phi + psi - |g|}`.
/// Residue sets are taken to stay distinct and nonzero modulo `p`.
pub fn vfunction_to_jaikin(f: &VFunctionDesc) -> Result<VJaikinForm> {
    f.validate()?;
    let mut terms = Vec::new();
    for piece in &f.pieces {
        let mut region = piece.region.clone();
        for i in 0..f.n {
            region = region.with_inequality((0..f.n).map(|j| i64::from(i == j)).collect(), 0);
        }
        let psi = piece.psi.clone().unwrap_or_else(|| Affine::new(vec![0; f.n], 0));
        let mbar: Vec<i64> = psi.coeffs.iter().map(|c| c - 1).collect();
        let form = cone_geometric_sum(&region, &piece.phi.coeffs, &mbar)?.scaled(&Q::one(), psi.constant, piece.phi.constant);
        let mut prefactor = vec![1i64];
        for i in 0..f.n {
            let factor = match piece.residues.iter().find(|r| r.coord == i) {
                Some(r) => vec![r.residues.len() as i64],
                None => vec![-1, 1],
            };
            prefactor = poly_mul(&prefactor, &factor);
        }
        terms.push(VJaikinTerm { prefactor, p_power: f.n as u32, count_poly: piece.count_poly.clone(), form });
    }
    Ok(VJaikinForm { terms })
}
