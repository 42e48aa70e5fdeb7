mod support;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use subgrowth_core::borel::{
    covolume_ratio, gamma_s_covolume, min_covolume, BracketValue, Covolume, NumberFieldInvariants, RamificationData,
    Zeta2,
};
use subgrowth_core::bounds::{degree_sum_trend, verify_degree_identities, verify_fl, Status};
use subgrowth_core::character::{
    class_char_product_report, degree_power_sum, fomin_lulov_entries, CharacterEngine, DegreeSum, NoCache,
};
use subgrowth_core::fuchsian::{siegel_scan, FuchsianSignature, PiMultiple};
use subgrowth_core::partition::{enumerate_partitions, hook_degree};
use subgrowth_core::RealContext;

use support::{standard_tableaux, young_character, SymmetricGroup};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Every oriented cocompact signature with `0 < mu <= threshold`, by plain
/// enumeration of nondecreasing period lists.
fn small_mu_signatures(max_genus: u64, max_periods: usize, max_period: u64, threshold: &BigRational) -> Vec<(u64, Vec<u64>)> {
    let mut out = Vec::new();
    fn extend(
        genus: u64,
        periods: &mut Vec<u64>,
        max_periods: usize,
        max_period: u64,
        threshold: &BigRational,
        out: &mut Vec<(u64, Vec<u64>)>,
    ) {
        let mut mu = BigRational::from_integer(BigInt::from(2 * genus as i64 - 2));
        for &m in periods.iter() {
            mu += BigRational::one() - ratio(1, m as i64);
        }
        if mu > BigRational::from_integer(0.into()) && &mu <= threshold {
            out.push((genus, periods.clone()));
        }
        if periods.len() == max_periods {
            return;
        }
        let from = periods.last().copied().unwrap_or(2);
        for m in from..=max_period {
            periods.push(m);
            extend(genus, periods, max_periods, max_period, threshold, out);
            periods.pop();
        }
    }
    for genus in 0..=max_genus {
        extend(genus, &mut Vec::new(), max_periods, max_period, threshold, &mut out);
    }
    out.sort();
    out
}

#[test]
fn siegel_scan_matches_enumeration() {
    let threshold = ratio(1, 6);
    let scan = siegel_scan(1, 4, 30, &threshold);
    let mut found: Vec<(u64, Vec<u64>)> = scan.hits.iter().map(|(s, _)| (s.genus(), s.periods().to_vec())).collect();
    found.sort();
    assert_eq!(found, small_mu_signatures(1, 4, 30, &threshold));
    assert_eq!(scan.minimum(), Some(&ratio(1, 42)));

    let t237 = FuchsianSignature::triangle(2, 3, 7);
    assert_eq!(t237.mu(), ratio(1, 42));
    assert_eq!(t237.covolume().unwrap(), PiMultiple::from_ratio(1, 21));
}

#[test]
fn zeta_of_q_sqrt5_matches_l_series() {
    let field = NumberFieldInvariants::q_sqrt5();
    let q = match &field.zeta2 {
        Zeta2::Exact(q) => q.to_f64().unwrap(),
        Zeta2::Interval(_) => panic!("exact form expected"),
    };
    // zeta_k(2) = zeta(2) L(2, chi_5) and zeta_k(2) = q pi^4 / sqrt 5.
    let pi = std::f64::consts::PI;
    let l_value = q * pi.powi(4) / 5f64.sqrt() / (pi * pi / 6.0);
    let chi = [0.0, 1.0, -1.0, -1.0, 1.0];
    let series: f64 = (1..2_000_000u64).map(|n| chi[(n % 5) as usize] / (n as f64 * n as f64)).sum();
    assert!((series - l_value).abs() < 1e-9, "{series} vs {l_value}");
}

#[test]
fn borel_examples() {
    let ctx = RealContext::default();
    let q = NumberFieldInvariants::rationals(100);
    let one = BracketValue::Exact(BigUint::one());
    let none = RamificationData::from_norms(&[]).unwrap();
    assert_eq!(min_covolume(&q, &none, &one, &ctx).unwrap().as_pi_multiple(), Some(PiMultiple::from_ratio(1, 3)));
    let two_three = RamificationData::from_norms(&[2, 3]).unwrap();
    let covolume = min_covolume(&q, &two_three, &one, &ctx).unwrap();
    assert_eq!(covolume, Covolume::exact(&PiMultiple::from_ratio(2, 3)));

    let grid: [(&[u64], usize); 10] = [
        (&[], 0),
        (&[5], 0),
        (&[5], 1),
        (&[2, 3], 0),
        (&[2, 3], 2),
        (&[4, 9], 1),
        (&[7, 11, 13], 0),
        (&[7, 11, 13], 3),
        (&[2, 2, 2, 2], 4),
        (&[25, 49], 1),
    ];
    for (norms, m) in grid {
        let product: u64 = norms.iter().map(|n| n + 1).product();
        let expected = ratio(product as i64, 1 << m);
        assert_eq!(covolume_ratio(norms, m).unwrap(), expected, "{norms:?}, m = {m}");
        let scaled = gamma_s_covolume(&PiMultiple::from_ratio(1, 3), norms, m).unwrap();
        assert_eq!(scaled.coefficient(), &(expected * ratio(1, 3)));
    }
}

#[test]
fn degrees_count_standard_tableaux() {
    for n in 1..=10 {
        let mut sum = BigRational::from_integer(0.into());
        for lambda in enumerate_partitions(n) {
            let count = standard_tableaux(lambda.parts()).len();
            assert_eq!(hook_degree(&lambda), BigUint::from(count), "{lambda}");
            sum += ratio(1, count as i64);
        }
        let exact = degree_power_sum(n, &BigRational::one(), &RealContext::default()).unwrap();
        assert_eq!(exact, DegreeSum::Exact(sum), "n = {n}");
    }
    let ctx = RealContext::default();
    assert_eq!(degree_power_sum(5, &BigRational::one(), &ctx).unwrap(), DegreeSum::Exact(ratio(46, 15)));
    assert_eq!(degree_power_sum(6, &BigRational::one(), &ctx).unwrap(), DegreeSum::Exact(ratio(473, 144)));
    assert!(verify_degree_identities(12).all_pass());
}

#[test]
fn degree_sum_window() {
    let report = degree_sum_trend(25, &BigRational::one(), &RealContext::default()).unwrap();
    assert!(report.all_pass(), "{:?}", report.failures().collect::<Vec<_>>());
    assert_eq!(report.points.len(), 25);
    let report = degree_sum_trend(8, &ratio(3, 2), &RealContext::default()).unwrap();
    assert!(report.points.iter().all(|p| p.status == Status::Report));
}

#[test]
fn fomin_lulov_against_explicit_characters() {
    let engine = CharacterEngine::new(NoCache);
    for (n, m) in [(4usize, 2usize), (6, 2), (6, 3), (6, 6), (5, 5)] {
        let a = n / m;
        let cycles = vec![m; a];
        let bound = (1..=a as u128).product::<u128>() * (m as u128).pow(a as u32);
        let fact: u128 = (1..=n as u128).product();
        let report = fomin_lulov_entries(n, m, &engine).unwrap();
        for lambda in enumerate_partitions(n) {
            let value = young_character(lambda.parts(), &cycles).unsigned_abs() as u128;
            let degree = young_character(lambda.parts(), &vec![1; n]) as u128;
            let holds = value.pow(m as u32) * fact <= bound.pow(m as u32) * degree;
            let entry = report.entries.iter().find(|e| e.lambda == lambda).unwrap();
            assert_eq!(entry.passed, holds, "{lambda} n={n} m={m}");
            assert!(holds);
        }
    }
    assert!(verify_fl(12, &engine).unwrap().all_pass());
}

#[test]
fn class_char_constant_small_cases() {
    let engine = CharacterEngine::new(NoCache);
    let ctx = RealContext::default();
    for (n, m) in [(4usize, 2usize), (6, 2), (6, 3)] {
        let group = SymmetricGroup::new(n);
        let shapes = enumerate_partitions(n);
        let mut best = 0f64;
        for (class, size) in shapes.iter().map(|c| {
            let size = (0..group.order()).filter(|&a| group.cycle_type(a) == c.parts()).count();
            (c, size)
        }) {
            if class.parts().iter().any(|&p| m % p != 0) {
                continue;
            }
            for lambda in &shapes {
                let value = young_character(lambda.parts(), class.parts()).abs() as f64;
                let degree = young_character(lambda.parts(), &vec![1; n]) as f64;
                let nf = n as f64;
                let rhs = nf.powf(nf * (1.0 - 1.0 / m as f64)) * degree.powf(1.0 / m as f64) * (2.0 * std::f64::consts::E).powf(nf);
                best = best.max(size as f64 * value / rhs);
            }
        }
        let report = class_char_product_report(n, m, &engine, &ctx).unwrap();
        let mid = report.b_hat.approx_f64();
        assert!((mid - best).abs() <= 1e-9 * best, "n={n} m={m}: {mid} vs {best}");
        if n == 6 {
            assert!(report.b_hat.hi() <= &BigRational::one());
        }
    }
}
