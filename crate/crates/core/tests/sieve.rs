use hz_core::numtheory::arith::primes_in;
use hz_core::realquad::make_field;
use hz_core::sieve::*;
use proptest::prelude::*;
use std::sync::OnceLock;

fn desk_report() -> &'static SieveReport {
    static R: OnceLock<SieveReport> = OnceLock::new();
    R.get_or_init(|| find_admissible(&SieveInstance::desk(), 3, 10_000, 30).unwrap())
}

/// Exhaustive count over all pairs (x, y) in F_p^2 plus the point at infinity.
fn ap_brute(e: &EllipticCurveData, p: u64) -> i64 {
    let pi = p as i64;
    let [a1, a2, a3, a4, a6] = e.a;
    let mut n = 1;
    for x in 0..pi {
        for y in 0..pi {
            let v = y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6;
            if v.rem_euclid(pi) == 0 {
                n += 1;
            }
        }
    }
    pi + 1 - n
}

#[test]
fn ap_matches_exhaustive_count() {
    for label in EllipticCurveData::labels() {
        let e = EllipticCurveData::by_label(label).unwrap();
        for p in primes_in(2, 200) {
            match ap_count(&e, p) {
                Ok(a) => {
                    assert_eq!(a, ap_brute(&e, p), "{label} at {p}");
                    assert!(a * a <= 4 * p as i64);
                }
                Err(SieveError::BadReduction(q)) => assert!(!e.has_good_reduction(q)),
                Err(other) => panic!("{other}"),
            }
        }
    }
}

#[test]
fn desk_sieve_is_nonempty_and_reverifies() {
    let inst = SieveInstance::desk();
    assert!(inst.resolvent_matches_field());
    let rep = desk_report();
    assert!(!rep.admissible.is_empty());
    for r in &rep.admissible {
        verify_witness(&inst, r).unwrap();
        assert_eq!(r.frobenius.cycle_type, vec![5]);
        assert!(r.frobenius.eigenvalues_distinct);
    }
    assert!(rep.stats.prefilter_exceptions.is_empty());
    assert_eq!(rep.stats.excluded, vec![11, 19, 151]);
}

#[test]
fn prefilter_implies_unit_condition_for_several_fields() {
    for d in [2, 3, 5, 6, 7, 10, 13, 14, 2869] {
        let f = make_field(d).unwrap();
        for p in primes_in(3, 10_000) {
            let fl = prefilter(&f, p);
            if fl.congruence_route {
                assert!(unit_condition(&f, p).unwrap().pass, "d = {d}, p = {p}");
            }
        }
    }
}

#[test]
fn five_cycle_frequency_is_near_one_fifth() {
    let f = [-1i64, -1, 0, 0, 0, 1];
    let ps: Vec<u64> = primes_in(3, 10_000).into_iter().filter(|&p| p != 19 && p != 151).collect();
    let hits = ps
        .iter()
        .filter(|&&p| hz_core::asai::frobenius_class_quintic(&f, p).unwrap().parts() == [5])
        .count() as f64;
    let n = ps.len() as f64;
    let sigma = (n * 0.2 * 0.8).sqrt();
    assert!((hits - 0.2 * n).abs() < 3.0 * sigma, "{hits} of {n}");
}

#[test]
fn monotone_in_the_upper_bound() {
    let inst = SieveInstance::desk();
    let small = find_admissible(&inst, 3, 3000, 30).unwrap();
    let big = desk_report();
    let bigp: Vec<u64> = big.admissible.iter().map(|r| r.p).collect();
    for r in &small.admissible {
        assert!(bigp.contains(&r.p));
    }
    assert!(find_admissible(&inst, 10, 10, 30).unwrap().admissible.is_empty());
}

#[test]
fn individual_verdicts() {
    let inst = SieveInstance::desk();
    assert_eq!(check_assumptions(&inst, 19, 30), Err(SieveError::ExcludedPrime(19)));
    assert_eq!(check_assumptions(&inst, 11, 30), Err(SieveError::ExcludedPrime(11)));
    // p = 5 with a five cycle can never be admissible; p = 2 is inert in L.
    let r = check_assumptions(&inst, 2, 30).unwrap();
    assert!(!r.split_narrow.pass && !r.admissible);
    // 47 needs the form cycle; its generator has large coordinates.
    let r = check_assumptions(&inst, 47, 30).unwrap();
    assert!(r.split_narrow.generator.is_some());
    let r = check_assumptions(&inst, 5, 30).unwrap();
    assert!(!r.admissible);
    if r.frobenius.cycle_type == [5] {
        assert!(!r.frobenius.pass);
    }
}

#[test]
fn output_is_deterministic() {
    let inst = SieveInstance::desk();
    let a = find_admissible(&inst, 3, 2000, 30).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| find_admissible(&inst, 3, 2000, 30).unwrap());
    assert_eq!(a.to_jsonl(), b.to_jsonl());
    assert_eq!(a.to_csv_summary(), b.to_csv_summary());
}

proptest! {
    #[test]
    fn unit_condition_matches_power_test(d in prop::sample::select(vec![2i64, 3, 5, 6, 7, 11, 13, 17, 19, 21]), idx in 0usize..300) {
        let f = make_field(d).unwrap();
        let p = primes_in(3, 5000)[idx];
        if let Ok(u) = unit_condition(&f, p) {
            // Odd order iff the unit is a 2^v-th power where 2^v || p - 1.
            let mut two = 1u64;
            while (p - 1) % (2 * two) == 0 {
                two *= 2;
            }
            let r = hz_core::realquad::residue_map(&f, p, hz_core::realquad::Place::First, 1).unwrap();
            let e = r.apply(&f.eps_plus).unwrap().r;
            let is_power = hz_core::numtheory::arith::pow_mod(e, (p - 1) / two, p) == 1;
            prop_assert_eq!(u.pass, is_power);
        }
    }
}
