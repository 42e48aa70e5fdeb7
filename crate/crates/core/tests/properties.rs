use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use subgrowth_core::borel::{census, covolume_ratio, Budget, CensusOptions, NumberFieldInvariants};
use subgrowth_core::character::{CharacterEngine, NoCache};
use subgrowth_core::fuchsian::{FuchsianSignature, PiMultiple};
use subgrowth_core::hom::{hom_series, transitive_sieve};
use subgrowth_core::partition::{
    class_size, enumerate_partitions, factorial, hook_degree, partition_count, CycleType, RimHookCount,
};
use subgrowth_core::{Interval, RealContext};

fn signature() -> impl Strategy<Value = FuchsianSignature> {
    (any::<bool>(), 0u64..3, prop::collection::vec(2u64..40, 0..5), 0u64..3, 0u64..2).prop_filter_map(
        "non-oriented genus >= 1",
        |(oriented, genus, periods, cusps, boundary)| FuchsianSignature::new(oriented, genus, periods, cusps, boundary).ok(),
    )
}

fn rows(fields: &[NumberFieldInvariants], budget: &Budget) -> BTreeSet<(String, Vec<u64>, Vec<u64>)> {
    census(fields, budget, &CensusOptions::default(), &RealContext::default())
        .unwrap()
        .into_iter()
        .map(|c| (c.field.clone(), c.ram_norms(), c.s_norms()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partitions_are_canonical(n in 0usize..26) {
        let all = enumerate_partitions(n);
        prop_assert_eq!(BigUint::from(all.len()), partition_count(n));
        prop_assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
        for p in &all {
            prop_assert_eq!(p.n(), n);
            prop_assert!(p.parts().windows(2).all(|w| w[0] >= w[1]));
        }
        let classes: BigUint = all.iter().map(|p| class_size(&CycleType::new(p.clone()))).sum();
        prop_assert_eq!(classes, factorial(n));
        let degrees: BigUint = all.iter().map(|p| hook_degree(p).pow(2)).sum();
        prop_assert_eq!(degrees, factorial(n));
    }

    #[test]
    fn rim_hook_count_is_small(n in 1usize..31, pick in any::<prop::sample::Index>(), r in 1usize..31) {
        let all = enumerate_partitions(n);
        let lambda = &all[pick.index(all.len())];
        prop_assert!(RimHookCount::of(lambda, r).within_sqrt_2n(n));
    }

    #[test]
    fn mu_ignores_period_order(sig in signature(), seed in any::<u64>()) {
        let mut periods = sig.periods().to_vec();
        let len = periods.len();
        if len > 1 {
            periods.rotate_left((seed as usize) % len);
            periods.swap(0, len - 1);
        }
        let shuffled = FuchsianSignature::new(sig.oriented(), sig.genus(), periods, sig.cusps(), sig.boundary()).unwrap();
        prop_assert_eq!(shuffled.mu(), sig.mu());
        if sig.is_fuchsian() {
            let two = BigRational::from_integer(BigInt::from(2));
            prop_assert_eq!(sig.covolume().unwrap().coefficient().clone(), sig.mu() * two);
        } else {
            prop_assert!(sig.covolume().is_err());
        }
    }

    #[test]
    fn signature_text_round_trips(sig in signature()) {
        let text = sig.to_string();
        prop_assert_eq!(text.parse::<FuchsianSignature>().unwrap(), sig);
    }

    #[test]
    fn pi_multiple_text_round_trips(num in 1i64..500, den in 1i64..500) {
        let value = PiMultiple::from_ratio(num, den);
        prop_assert_eq!(value.to_string().parse::<PiMultiple>().unwrap(), value);
    }

    #[test]
    fn covolume_ratio_is_multiplicative(
        left in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 5, 7, 9, 11, 13]), 0..4),
        right in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 5, 7, 9, 11, 13]), 0..4),
        ml in 0usize..4,
        mr in 0usize..4,
    ) {
        let (ml, mr) = (ml.min(left.len()), mr.min(right.len()));
        let joined: Vec<u64> = left.iter().chain(&right).copied().collect();
        prop_assert_eq!(
            covolume_ratio(&joined, ml + mr).unwrap(),
            covolume_ratio(&left, ml).unwrap() * covolume_ratio(&right, mr).unwrap()
        );
        prop_assert!(covolume_ratio(&left, left.len() + 1).is_err());
    }

    #[test]
    fn census_grows_with_budget(a in 1i64..40, b in 1i64..40) {
        let fields = [NumberFieldInvariants::rationals(60), NumberFieldInvariants::q_sqrt5()];
        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        let lower = rows(&fields, &Budget::Pi(PiMultiple::from_ratio(small, 6)));
        let upper = rows(&fields, &Budget::Pi(PiMultiple::from_ratio(large, 6)));
        prop_assert!(lower.is_subset(&upper));
    }

    #[test]
    fn elementary_functions_enclose(num in 1i64..10_000, den in 1i64..1000) {
        let bits = 96;
        let x = Interval::from_ratio(num, den);
        let back = x.ln(bits).exp(bits);
        prop_assert!(back.contains(x.lo()));
        let root = x.sqrt(bits);
        prop_assert!(root.mul(&root).contains(x.lo()));
        prop_assert!(root.width() < BigRational::new(BigInt::one(), BigInt::from(1u64 << 60)));
    }

    #[test]
    fn sieve_is_integral_on_small_signatures(sig in signature()) {
        let engine = CharacterEngine::new(NoCache);
        let counts = transitive_sieve(&hom_series(&sig, 9, &engine).unwrap()).unwrap();
        prop_assert_eq!(counts.a(1), &BigUint::one());
        prop_assert!(counts.s.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(!counts.s(9).is_zero());
    }
}
