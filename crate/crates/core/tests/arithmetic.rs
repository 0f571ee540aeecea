use proptest::prelude::*;

use repzeta::arith::{artin_density, count_points, langweil_fit, AffineVarietySpec, ArtinSetSpec, IntPoly};
use repzeta::dirichlet::{monomial_family_abscissa, MonomialLocalFamily, MonomialTerm};
use repzeta::numtheory::primes_up_to;
use repzeta::rational::qi;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn density_and_complement_sum_to_one(c in 1i64..20, deg in 2usize..=3) {
        let mut poly = vec![0i64; deg + 1];
        poly[0] = c;
        poly[deg] = 1;
        let d = artin_density(&ArtinSetSpec::irreducible(poly.clone()), 20_000).unwrap();
        let e = artin_density(&ArtinSetSpec::irreducible(poly).complement(), 20_000).unwrap();
        prop_assert_eq!(d.members + e.members, d.primes);
    }

    #[test]
    fn hyperplanes_have_p_points(a in 1i64..5, b in -4i64..5, c in -4i64..5) {
        // a x + b y + c = 0 with a a unit mod every p > 5
        let line = AffineVarietySpec { n: 2, polynomials: vec![IntPoly::new(vec![(a, vec![1, 0]), (b, vec![0, 1]), (c, vec![0, 0])])] };
        for p in [7u64, 11, 13] {
            prop_assert_eq!(count_points(&line, p, 1 << 20).unwrap(), p);
        }
        let primes: Vec<u64> = primes_up_to(60).into_iter().filter(|&p| p > 5).collect();
        let fit = langweil_fit(&line, &primes, 1 << 20).unwrap();
        prop_assert_eq!((fit.d, fit.mu), (1, qi(1)));
        prop_assert!(fit.holds);
    }

    #[test]
    fn abscissa_dominates_each_term(terms in proptest::collection::vec((0u64..3, 1u64..4, proptest::collection::vec((1u64..4, 0u64..3), 0..3)), 1..4)) {
        let family = MonomialLocalFamily { terms: terms.into_iter().map(|(d, e, pairs)| MonomialTerm { d, e, pairs }).collect() };
        let whole = monomial_family_abscissa(&family).unwrap().unwrap();
        for t in &family.terms {
            let single = MonomialLocalFamily { terms: vec![t.clone()] };
            prop_assert!(monomial_family_abscissa(&single).unwrap().unwrap() <= whole);
        }
    }
}
