//! Acceptance criteria: one PASS/FAIL line each, nonzero exit on any failure.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use repzeta::dirichlet::{
    archimedean_abscissa, empirical_abscissa, monomial_family_abscissa, BisectionConfig, MonomialLocalFamily,
    MonomialTerm, RootSystem,
};
use repzeta::arith::reductive_degree_fit;
use repzeta::liering::NilpotentLieRing;
use repzeta::numtheory::primes_up_to;
use repzeta::orbit::compare_with_table;
use repzeta::rational::{format_q, q, to_f64};
use repzeta::suites::{artin_suite, bch_suite, clifford_suite, cones_suite, langweil_suite, trees_suite, SuiteReport};
use repzeta::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_suite(r: Result<SuiteReport>) -> Outcome {
    match r {
        Ok(r) => Outcome {
            passed: r.passed,
            detail: if r.passed {
                format!("{} checks", r.checks)
            } else {
                format!("{} of {} checks failed, first: {}", r.failures.len(), r.checks, r.failures[0])
            },
        },
        Err(e) => Outcome { passed: false, detail: format!("error: {e}") },
    }
}

fn within(limit: Duration, start: Instant, mut o: Outcome) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        o.passed = false;
        o.detail = format!("{}; {took:.1?} over the {limit:?} budget", o.detail);
    } else {
        o.detail = format!("{}; {took:.1?}", o.detail);
    }
    o
}

fn orbit_method() -> Outcome {
    let start = Instant::now();
    let rings: Vec<(&str, Result<NilpotentLieRing>)> = vec![
        ("heisenberg F5", NilpotentLieRing::heisenberg(5, 1)),
        ("heisenberg F7", NilpotentLieRing::heisenberg(7, 1)),
        ("heisenberg Z/25", NilpotentLieRing::heisenberg(5, 2)),
        ("strictly upper 4x4 F7", NilpotentLieRing::strictly_upper(4, 7, 1)),
        ("sl2 congruence F5 level 2", NilpotentLieRing::sl2_congruence(5, 2)),
    ];
    let mut bad = Vec::new();
    for (name, ring) in rings {
        match ring.and_then(|r| compare_with_table(&r)) {
            Ok(c) if c.holds() => {}
            Ok(c) => bad.push(format!("{name}: zeta {} table {}", c.zeta_match, c.table_match)),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    let o = Outcome { passed: bad.is_empty(), detail: if bad.is_empty() { "5 rings".into() } else { bad.join("; ") } };
    within(Duration::from_secs(300), start, o)
}

fn random_family(rng: &mut ChaCha8Rng) -> MonomialLocalFamily {
    let terms = (0..rng.gen_range(1..=2))
        .map(|_| {
            let pairs: Vec<(u64, u64)> =
                (0..rng.gen_range(0..=2)).map(|_| (rng.gen_range(1..=3), rng.gen_range(0..=2))).collect();
            let e = if pairs.is_empty() { rng.gen_range(1..=3) } else { rng.gen_range(0..=3) };
            MonomialTerm { d: rng.gen_range(0..=2), e, pairs }
        })
        .collect();
    MonomialLocalFamily { terms }
}

fn abscissa_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let primes = primes_up_to(1_000_000);
    let cfg = BisectionConfig::default();
    let mut bad = Vec::new();
    let count = 12;
    for _ in 0..count {
        let fam = random_family(&mut rng);
        let exact = match monomial_family_abscissa(&fam) {
            Ok(Some(x)) => to_f64(&x),
            other => {
                bad.push(format!("{fam:?}: {other:?}"));
                continue;
            }
        };
        let est = empirical_abscissa(&primes, &|p, s| fam.local_term(p, s), &cfg);
        match est.value() {
            Some(v) if (v - exact).abs() <= 0.05 => {}
            _ => bad.push(format!("{fam:?}: formula {exact:.4}, bisection {est:?}")),
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() { format!("{count} random families") } else { bad.join("; ") },
    }
}

fn archimedean() -> Outcome {
    let expect = [("A1", q(1, 1)), ("A2", q(2, 3)), ("B2", q(1, 2)), ("G2", q(1, 3))];
    let mut got = Vec::new();
    let mut passed = true;
    for (label, want) in expect {
        let v = RootSystem::named(label).and_then(|r| archimedean_abscissa(r.rank, r.positive_roots));
        match v {
            Ok(v) => {
                passed &= v == want;
                got.push(format!("{label} {}", format_q(&v)));
            }
            Err(e) => {
                passed = false;
                got.push(format!("{label} {e}"));
            }
        }
    }
    Outcome { passed, detail: got.join(", ") }
}

fn degree_fit() -> Outcome {
    let sl2 = [vec![1, 1, 0, 1], vec![1, 0, 1, 1]];
    let mut detail = Vec::new();
    let mut passed = true;
    for (class, fit, held) in [((1, 4), [5, 13], 17), ((3, 4), [7, 11], 19)] {
        match reductive_degree_fit(&sl2, 2, class, &fit, &[held]) {
            Ok(r) => {
                passed &= r.verified;
                detail.push(format!("{} mod {} fit on {fit:?} verified at {held}: {}", class.0, class.1, r.verified));
            }
            Err(e) => {
                passed = false;
                detail.push(format!("{class:?}: {e}"));
            }
        }
    }
    Outcome { passed, detail: detail.join("; ") }
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("orbit-method equivalence", Box::new(orbit_method)),
        ("clifford identities", Box::new(|| from_suite(clifford_suite(200)))),
        ("decomposition trees", Box::new(|| {
            let start = Instant::now();
            within(Duration::from_secs(600), start, from_suite(trees_suite()))
        })),
        ("bch fuzz", Box::new(|| from_suite(bch_suite(1000, 0)))),
        ("cone pipeline", Box::new(|| from_suite(cones_suite()))),
        ("abscissa formula vs bisection", Box::new(abscissa_formula)),
        ("archimedean abscissae", Box::new(archimedean)),
        ("artin densities", Box::new(|| {
            let start = Instant::now();
            within(Duration::from_secs(120), start, from_suite(artin_suite(1_000_000)))
        })),
        ("lang-weil fits", Box::new(|| from_suite(langweil_suite(200)))),
        ("reductive degree fit", Box::new(degree_fit)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.passed);
        println!("{} criterion {}: {name} ({})", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
