//! Invariant suites over the bundled test data, each reporting pass/fail
//! with witnesses.

use serde::Serialize;

use crate::arith::{artin_density, langweil_fit, AffineVarietySpec, ArtinSetSpec, IntPoly};
use crate::error::{Error, Result};
use crate::groupcore::{
    catalog, decomposition_tree, group_from_generators, max_normal_p_subgroup, normal_subgroups, relative_zeta,
    verify_clifford_sum, verify_index_bounds, zeta_via_tree, FiniteGroup, Subgroup, DEFAULT_GROUP_CAP,
};
use crate::liering::{bch_fuzz, exp_log_fuzz, NilpotentLieRing};
use crate::localzeta::{
    cone_geometric_sum, decompose_cone, direct_cone_sum, example_closed_form, example_vfunction, verify_decomposition,
    vfunction_integral, vfunction_integral_exact, vfunction_to_jaikin, Affine, Cone, ResidueCondition, VFunctionDesc,
    VPiece,
};
use crate::numtheory::{factorize, primes_up_to};
use crate::orbit::compare_with_table;
use crate::rational::{q, qi};

pub const SUITES: [&str; 7] = ["clifford", "orbit", "bch", "cones", "langweil", "artin", "trees"];

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self { suite: suite.into(), passed: true, checks: 0, failures: vec![] }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.failures.push(witness());
        }
    }

    fn error(&mut self, what: &str, e: Error) {
        self.check(false, || format!("{what}: {e}"));
    }
}

/// Runs a suite by name; unknown names are an invalid-input error.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "clifford" => clifford_suite(200),
        "orbit" => orbit_suite(&small_rings()?),
        "bch" => bch_suite(1000, seed),
        "cones" => cones_suite(),
        "langweil" => langweil_suite(200),
        "artin" => artin_suite(1_000_000),
        "trees" => trees_suite(),
        _ => Err(Error::InvalidInput(format!("unknown suite {name:?}; expected one of {SUITES:?}"))),
    }
}

fn small_groups(max_order: usize) -> Result<Vec<(&'static str, FiniteGroup)>> {
    Ok(catalog()?.into_iter().filter(|(_, g)| g.order() <= max_order).collect())
}

/// Clifford sums over every normal subgroup of every catalog group up to
/// `max_order`, and index bounds over `O_p(G) <= H <= G` with `H` normal.
pub fn clifford_suite(max_order: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("clifford");
    for (name, g) in small_groups(max_order)? {
        let normals = normal_subgroups(&g);
        for k in &normals {
            match verify_clifford_sum(&g, k) {
                Ok(c) => r.check(c.holds, || format!("{name}, |K| = {}: witness {:?}", k.order(), c.witness)),
                Err(e) => r.error(name, e),
            }
        }
        for (p, _) in factorize(g.order() as u64) {
            let k = max_normal_p_subgroup(&g, p);
            let taus = crate::groupcore::SubgroupChars::new(&g, k.clone())?.table.len();
            for h in normals.iter().filter(|h| k.is_subset(h)) {
                for tau in 0..taus {
                    match verify_index_bounds(&g, h, &k, tau) {
                        Ok(b) => r.check(b.holds, || format!("{name}, p = {p}, |H| = {}, tau = {tau}: {:?}", h.order(), b.failure)),
                        Err(e) => r.error(name, e),
                    }
                }
            }
        }
    }
    Ok(r)
}

pub fn small_rings() -> Result<Vec<(String, NilpotentLieRing)>> {
    Ok(vec![
        ("heisenberg F3".into(), NilpotentLieRing::heisenberg(3, 1)?),
        ("heisenberg F5".into(), NilpotentLieRing::heisenberg(5, 1)?),
        ("heisenberg Z/9".into(), NilpotentLieRing::heisenberg(3, 2)?),
        ("abelian rank 2 F5".into(), NilpotentLieRing::abelian(5, 1, 2)?),
        ("sl2 congruence F5 level 2".into(), NilpotentLieRing::sl2_congruence(5, 2)?),
    ])
}

/// Orbit zeta and Kirillov characters against brute-force tables.
pub fn orbit_suite(rings: &[(String, NilpotentLieRing)]) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("orbit");
    for (name, ring) in rings {
        match compare_with_table(ring) {
            Ok(c) => r.check(c.holds(), || {
                format!("{name}: zeta {} vs {}, table match {}", c.orbit_zeta, c.group_zeta, c.table_match)
            }),
            Err(e) => r.error(name, e),
        }
    }
    Ok(r)
}

/// BCH against matrix exp/log for `n <= 4`, `p in {7, 11}`, `k <= 2`, and the
/// exp/log round trip where `p > 2n`.
pub fn bch_suite(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("bch");
    for p in [7u64, 11] {
        for k in 1..=2 {
            for n in 2..=4 {
                let f = bch_fuzz(n, p, k, samples, seed)?;
                r.check(f.failures == 0, || format!("bch n = {n}, p = {p}, k = {k}: {} failures", f.failures));
                if p > 2 * n as u64 {
                    let f = exp_log_fuzz(n, p, k, samples, seed)?;
                    r.check(f.failures == 0, || format!("exp/log n = {n}, p = {p}, k = {k}: {} failures", f.failures));
                }
            }
        }
    }
    Ok(r)
}

/// Test cones with weights `(nbar, mbar)` for the geometric sums.
pub fn suite_cones() -> Vec<(&'static str, Cone, Vec<i64>, Vec<i64>)> {
    vec![
        ("Z>=1", Cone::orthant(&[1]), vec![2], vec![1]),
        ("Z^2>=1", Cone::orthant(&[1, 1]), vec![1, 1], vec![0, 0]),
        ("even difference", Cone::orthant(&[1, 1]).with_congruence(vec![1, -1], 0, 2), vec![1, 2], vec![0, 1]),
        ("g1 >= g2 >= 1", Cone::new(2).with_inequality(vec![1, -1], 0).with_inequality(vec![0, 1], -1), vec![1, 1], vec![0, 0]),
        (
            "half strip",
            Cone::orthant(&[0, 0]).with_inequality(vec![1, -1], 0).with_inequality(vec![-1, 1], 3),
            vec![2, 1],
            vec![1, 0],
        ),
        (
            "3d wedge mod 3",
            Cone::orthant(&[0, 0, 0]).with_inequality(vec![1, 1, -1], 0).with_congruence(vec![1, 2, 0], 1, 3),
            vec![1, 1, 1],
            vec![0, 0, 0],
        ),
        (
            "3d four rays",
            Cone::orthant(&[0, 0, 1])
                .with_inequality(vec![1, 1, -1], 0)
                .with_inequality(vec![-1, 1, 1], 0)
                .with_inequality(vec![1, -1, 1], 0),
            vec![1, 1, 2],
            vec![0, 1, 1],
        ),
    ]
}

/// Bounded V-functions for the level-stability and closed-form checks.
pub fn suite_vfunctions() -> Vec<(&'static str, VFunctionDesc)> {
    let box1 = VFunctionDesc {
        n: 1,
        pieces: vec![VPiece {
            region: Cone::new(1).with_inequality(vec![-1], 3),
            residues: vec![],
            phi: Affine::new(vec![2], 0),
            psi: None,
            count_poly: vec![1],
        }],
    };
    let two_cones = VFunctionDesc {
        n: 2,
        pieces: vec![
            VPiece {
                region: Cone::new(2).with_inequality(vec![1, -1], 0).with_inequality(vec![-1, 0], 2),
                residues: vec![ResidueCondition { coord: 0, residues: vec![1, 2] }],
                phi: Affine::new(vec![1, 2], 1),
                psi: None,
                count_poly: vec![1, 1],
            },
            VPiece {
                region: Cone::new(2)
                    .with_inequality(vec![-1, 1], -1)
                    .with_inequality(vec![0, -1], 2)
                    .with_congruence(vec![1, 0], 0, 2),
                residues: vec![],
                phi: Affine::new(vec![2, 0], 0),
                psi: Some(Affine::new(vec![1, 1], 0)),
                count_poly: vec![0, 1],
            },
        ],
    };
    let cube = VFunctionDesc {
        n: 3,
        pieces: vec![VPiece {
            region: Cone::new(3)
                .with_inequality(vec![-1, 0, 0], 1)
                .with_inequality(vec![0, -1, 0], 1)
                .with_inequality(vec![0, 0, -1], 2)
                .with_inequality(vec![1, 1, -1], 0),
            residues: vec![ResidueCondition { coord: 2, residues: vec![1] }],
            phi: Affine::new(vec![1, 1, 1], 0),
            psi: Some(Affine::new(vec![0, 1, 0], 1)),
            count_poly: vec![-1, 0, 1],
        }],
    };
    vec![("box", box1), ("two cones", two_cones), ("cube", cube)]
}

/// Cone decompositions, geometric sums, V-function integrals and the
/// geometric-series example.
pub fn cones_suite() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("cones");
    for (name, cone, nbar, mbar) in suite_cones() {
        let pieces = decompose_cone(&cone)?;
        let bound = if cone.dim == 3 { 30 } else { 50 };
        let check = verify_decomposition(&cone, &pieces, bound);
        r.check(check.holds(), || format!("{name}: {check:?}"));
        let form = cone_geometric_sum(&cone, &nbar, &mbar)?;
        let direct_bound = if cone.dim == 3 { 60 } else { 200 };
        for p in [3u64, 5, 7] {
            for s in [1.0, 1.5, 2.0] {
                let (a, b) = (form.eval(p, s)?, direct_cone_sum(&cone, &nbar, &mbar, p, s, direct_bound));
                r.check((a - b).abs() <= 1e-10 * b.abs(), || format!("{name} at p = {p}, s = {s}: {a} vs {b}"));
            }
        }
    }
    for (name, f) in suite_vfunctions() {
        let form = vfunction_to_jaikin(&f)?;
        for p in [5u64, 7] {
            for s in [1i64, 2] {
                let at = |k| vfunction_integral_exact(&f, p, s, k);
                let (a, b) = (at(3)?, at(4)?);
                let c = form.eval_exact(p, s)?;
                r.check(a == b && a == c, || format!("{name} at p = {p}, s = {s}: {a} / {b} / {c}"));
            }
            let s = q(3, 2);
            let (a, b) = (vfunction_integral(&f, p, &s, 3)?, form.eval(p, &s)?);
            r.check((a - b).abs() <= 1e-12 * b.abs().max(1e-300), || format!("{name} at p = {p}, s = 3/2: {a} vs {b}"));
        }
    }
    for (a, b) in [(2i64, 0i64), (1, 0), (3, 1)] {
        let f = example_vfunction(a, b);
        let form = vfunction_to_jaikin(&f)?;
        for p in [5u64, 7] {
            for s in [1i64, 2] {
                if a * s <= b {
                    continue;
                }
                let expect = example_closed_form(a, b, p, s)?;
                let via_form = form.eval_exact(p, s)?;
                let via_integral = vfunction_integral_exact(&f, p, s, 2)?;
                r.check(via_form == expect && via_integral == expect, || {
                    format!("example (A, B) = ({a}, {b}) at p = {p}, s = {s}: {via_form} / {via_integral} vs {expect}")
                });
            }
        }
    }
    r.check(example_closed_form(2, 0, 5, 1)? == q(5, 6), || "example value at (2, 0), p = 5, s = 1".into());
    Ok(r)
}

pub fn suite_curves() -> Vec<(&'static str, AffineVarietySpec)> {
    let curve = |terms: Vec<(i64, Vec<u32>)>| AffineVarietySpec { n: 2, polynomials: vec![IntPoly::new(terms)] };
    vec![
        ("y^2 = x^3 - x", curve(vec![(1, vec![0, 2]), (-1, vec![3, 0]), (1, vec![1, 0])])),
        ("y^2 = x^3 + 1", curve(vec![(1, vec![0, 2]), (-1, vec![3, 0]), (-1, vec![0, 0])])),
        ("x^2 + y^2 = 1", curve(vec![(1, vec![2, 0]), (1, vec![0, 2]), (-1, vec![0, 0])])),
        ("y = x^2", curve(vec![(1, vec![0, 1]), (-1, vec![2, 0])])),
        ("xy = 0", curve(vec![(1, vec![1, 1])])),
    ]
}

/// Lang-Weil fits over every prime up to `bound`.
pub fn langweil_suite(bound: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("langweil");
    let primes = primes_up_to(bound);
    for (name, v) in suite_curves() {
        let fit = langweil_fit(&v, &primes, 1 << 20)?;
        let mu = if name == "xy = 0" { qi(2) } else { qi(1) };
        r.check(fit.holds && fit.d == 1 && fit.mu == mu, || format!("{name}: {fit}, holds {}", fit.holds));
    }
    Ok(r)
}

/// Densities of `x^2 + 1` and `x^3 - 2` against their Chebotarev values.
pub fn artin_suite(bound: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("artin");
    for (poly, expect) in [(vec![1, 0, 1], 0.5), (vec![-2, 0, 0, 1], 1.0 / 3.0)] {
        let d = artin_density(&ArtinSetSpec::irreducible(poly.clone()), bound)?;
        r.check((d.density - expect).abs() <= 0.02, || format!("{poly:?}: density {} vs {expect}", d.density));
        let c = artin_density(&ArtinSetSpec::irreducible(poly.clone()).complement(), bound)?;
        let slack = 1.0 / c.primes.max(1) as f64;
        r.check((c.density - (1.0 - d.density)).abs() <= slack + 1e-12, || format!("{poly:?}: complement {}", c.density));
    }
    Ok(r)
}

/// The SL2 congruence kernel `ker(SL2(Z/9) -> SL2(F_3))`.
pub fn sl2_mod9_with_kernel() -> Result<(FiniteGroup, Subgroup)> {
    let sl = [vec![1, 1, 0, 1], vec![1, 0, 1, 1]];
    let g = group_from_generators(&sl, 2, 9, DEFAULT_GROUP_CAP)?;
    let cq = crate::arith::congruence_quotient(&sl, 2, 3, 2, DEFAULT_GROUP_CAP)?;
    Ok((g, cq.kernel))
}

/// Decomposition trees against relative zeta functions: catalog groups over
/// each nontrivial `O_p(G)`, and `SL2(Z/9)` over its congruence kernel.
pub fn trees_suite() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("trees");
    let mut cases: Vec<(String, FiniteGroup, Subgroup, u64)> = Vec::new();
    for (name, g) in catalog()? {
        for (p, _) in factorize(g.order() as u64) {
            let k = max_normal_p_subgroup(&g, p);
            if k.order() > 1 {
                cases.push((format!("{name}, p = {p}"), g.clone(), k, p));
            }
        }
    }
    let (g, k) = sl2_mod9_with_kernel()?;
    cases.push(("SL2(Z/9)".into(), g, k, 3));
    for (name, g, k, p) in cases {
        let taus = crate::groupcore::SubgroupChars::new(&g, k.clone())?.table.len();
        for rho in 0..taus {
            let tree = decomposition_tree(&g, &k, rho, p)?;
            let (a, b) = (zeta_via_tree(&tree)?, relative_zeta(&g, &k, rho)?);
            r.check(a == b, || format!("{name}, rho = {rho}: tree {a} vs {b}"));
        }
    }
    Ok(r)
}
