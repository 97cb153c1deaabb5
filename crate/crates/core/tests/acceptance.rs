//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with
//! `cargo test -p lcmlat --test acceptance -- --nocapture --test-threads=1`
//! to see the lines in order.

use lcmlat::alpha::{bisect_root, construct_singular_instance, find_sign_change, h_eval};
use lcmlat::certified::Sign;
use lcmlat::corpus::{random_realization_of, random_set, CorpusSpec};
use lcmlat::enumeration::{classify_8, pipeline, Class8};
use lcmlat::intsets::{
    divisors_of, is_factor_closed, odd_singular_nine_set, odd_singular_nine_set_q, GcdClosedSet,
};
use lcmlat::matrices::{
    det_direct, is_singular_power_lcm, join_matrix, meet_matrix, psi, Analysis, ArithFn,
    SingularityVerdict,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use std::time::Instant;

fn pass(criterion: u32, detail: &str) {
    println!("[acceptance] criterion {criterion}: PASS — {detail}");
}

/// Criterion 1: the odd nine-element counterexample has Ψ(1020180525) = 0
/// exactly, with the nine integer summands over the common denominator.
#[test]
fn criterion_1_exact_counterexample() {
    let t0 = Instant::now();
    let s = odd_singular_nine_set();
    let analysis = Analysis::new(s);
    assert!(analysis.psi(1, 8).is_zero(), "Ψ at the maximum must vanish");
    let (summands, denominator) = analysis.psi_unit_summands(8);
    assert_eq!(denominator, BigInt::from(1020180525u64));
    let expected: Vec<BigInt> = [
        1i64,
        -253461,
        -725075,
        -3505775,
        -5231695,
        145740075,
        204036105,
        680120350,
        -1020180525,
    ]
    .iter()
    .map(|&x| BigInt::from(x))
    .collect();
    assert_eq!(summands, expected);
    assert!(summands.iter().sum::<BigInt>().is_zero());
    let dt = t0.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "must finish within a second");
    pass(1, &format!("nine summands over 1020180525 sum to zero ({dt:?})"));
}

/// Criterion 2: the eight-element pipeline counts 1078 → 84 → 10 and the
/// survivors carry the ten class tags with exactly one cube.
#[test]
fn criterion_2_enumeration_pipeline() {
    let t0 = Instant::now();
    let stats = pipeline(8).unwrap();
    assert_eq!(stats.meet_semilattices, 1078);
    assert_eq!(stats.after_cover_filter, 84);
    assert_eq!(stats.after_mobius_filter, 10);
    let mut tags: Vec<&str> = stats
        .tags
        .iter()
        .map(|t| t.expect("every survivor is classified").tag())
        .collect();
    tags.sort_unstable();
    assert_eq!(
        tags,
        vec!["8_A", "8_B", "8_C", "8_D", "8_E", "8_F", "8_G", "8_H", "8_I", "8_J"]
    );
    let cube_rep = stats
        .class_reps
        .iter()
        .zip(&stats.tags)
        .find(|(_, t)| **t == Some(Class8::J))
        .map(|(p, _)| p)
        .unwrap();
    assert_eq!(classify_8(cube_rep).unwrap(), Some(Class8::J));
    let dt = t0.elapsed();
    assert!(dt.as_secs() < 300, "pipeline must finish within five minutes");
    pass(2, &format!("1078 → 84 → 10 with tags 8_A..8_J ({dt:?})"));
}

/// Criterion 3: the diamond set {1,3,5,45} has its singular exponent at
/// 0.328594 within ±1e-5, and {1,3,5,15} shows no sign change in the
/// default range.
#[test]
fn criterion_3_diamond_root() {
    let t0 = Instant::now();
    let s = GcdClosedSet::from_u64s(&[1, 3, 5, 45]).unwrap();
    let range = (Float::with_val(64, 0.0009765625), Float::with_val(64, 64.0));
    let bracket = find_sign_change(&s, 3, range.clone(), 64, 256, 1 << 13)
        .unwrap()
        .expect("bracket for {1,3,5,45}");
    let tol = Float::with_val(64, 1e-6);
    let (alpha0, _) = bisect_root(&s, 3, &bracket, &tol, 256, 1 << 13).unwrap();
    let lo = alpha0.lo().to_f64();
    let hi = alpha0.hi().to_f64();
    assert!(hi - lo <= 1e-6);
    assert!(
        0.328594 - 1e-5 <= lo && hi <= 0.328594 + 1e-5,
        "certified interval [{lo}, {hi}] must sit within 1e-5 of 0.328594"
    );

    let s15 = GcdClosedSet::from_u64s(&[1, 3, 5, 15]).unwrap();
    let none = find_sign_change(&s15, 3, range, 64, 256, 1 << 13).unwrap();
    assert!(none.is_none(), "{{1,3,5,15}} admits no sign change");
    let dt = t0.elapsed();
    assert!(dt.as_secs() < 10, "root isolation must finish within ten seconds");
    pass(3, &format!("α₀ ∈ [{lo:.7}, {hi:.7}], no change for {{1,3,5,15}} ({dt:?})"));
}

/// Criterion 4: ∧-tree ⟺ no positive nontrivial Möbius value, exhaustively
/// over all meet semilattices with at most seven elements.
#[test]
fn criterion_4_tree_condition_equivalence() {
    let t0 = Instant::now();
    let mut checked = 0u32;
    let mut counts = Vec::new();
    for n in 1..=7 {
        let semis = lcmlat::enumeration::enumerate_meet_semilattices(n).unwrap();
        counts.push(semis.len());
        for p in &semis {
            assert_eq!(
                p.is_wedge_tree().unwrap(),
                !p.has_positive_nontrivial_mobius(),
                "equivalence fails at n={n}"
            );
            checked += 1;
        }
    }
    assert_eq!(counts, vec![1, 1, 2, 5, 15, 53, 222]);
    let dt = t0.elapsed();
    assert!(dt.as_secs() < 60, "sweep must finish within a minute");
    pass(4, &format!("{checked} semilattices checked, 222 classes at n=7 ({dt:?})"));
}

/// Criterion 5: every non-∧-tree meet semilattice with at most six elements
/// yields a certified singular exponent bracket of width ≤ 1e-6.
#[test]
fn criterion_5_constructive_singularity() {
    let t0 = Instant::now();
    let tol = Float::with_val(64, 1e-6);
    let mut built = 0u32;
    for n in 1..=6 {
        for p in lcmlat::enumeration::enumerate_meet_semilattices(n).unwrap() {
            if p.is_wedge_tree().unwrap() {
                continue;
            }
            let report = construct_singular_instance(&p, &tol, 64, 256)
                .unwrap_or_else(|e| panic!("construction failed at n={n}: {e}"));
            assert!(report.alpha0.width().to_f64() <= 1e-6);
            assert!(report.alpha0.lo().to_f64() > 0.0);
            // Bolzano certificate: certified opposite signs at the endpoints
            let hl = h_eval(&report.set, report.i, report.alpha0.lo(), 512).sign();
            let hh = h_eval(&report.set, report.i, report.alpha0.hi(), 512).sign();
            assert!(hl != Sign::Indeterminate && hh != Sign::Indeterminate && hl != hh);
            built += 1;
        }
    }
    assert_eq!(built, 40, "1 + 6 + 33 non-tree classes at n = 4, 5, 6");
    let dt = t0.elapsed();
    assert!(dt.as_secs() < 300, "constructions must finish within five minutes");
    pass(5, &format!("{built} singular instances certified to width 1e-6 ({dt:?})"));
}

/// Criterion 6: over 500 seeded random GCD-closed sets and α ∈ {1,2,3}, the
/// Ψ product equals the direct determinant exactly and the singularity
/// verdict matches the vanishing of both determinants.
#[test]
fn criterion_6_determinant_oracle_equivalence() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_CA5E);
    let spec = CorpusSpec::default();
    let mut singular_seen = 0u32;
    for _ in 0..500 {
        let s = random_set(&mut rng, &spec);
        let analysis = Analysis::new(s.clone());
        for alpha in 1u32..=3 {
            let product = analysis.det_product(alpha);
            let recip = meet_matrix(&s, &ArithFn::reciprocal_power(alpha as i64)).unwrap();
            let direct = det_direct(&recip);
            assert_eq!(product, direct, "set {:?} α={alpha}", s.elems());

            let join = join_matrix(&s, &ArithFn::power(alpha as i64)).unwrap();
            let join_det = det_direct(&join);
            let verdict = is_singular_power_lcm(
                &s,
                &BigRational::from_integer(BigInt::from(alpha)),
                64,
                1 << 12,
            );
            assert_eq!(verdict.is_singular(), join_det.is_zero());
            assert_eq!(verdict.is_singular(), direct.is_zero());
            if verdict.is_singular() {
                singular_seen += 1;
            }
        }
    }
    let dt = t0.elapsed();
    pass(
        6,
        &format!("500 sets × 3 exponents agree exactly, {singular_seen} singular cases ({dt:?})"),
    );
}

/// Criterion 7: Smith's determinant on {1..n} equals the totient product for
/// n ≤ 8, and factor-closed sets from the seeded corpus are nonsingular at
/// α = 1.
#[test]
fn criterion_7_smith_baseline() {
    let t0 = Instant::now();
    // independent totient oracle: count coprime residues directly
    let phi = |k: u64| (1..=k).filter(|&j| j.gcd(&k) == 1).count() as u64;
    let mut product = BigRational::one();
    for n in 1..=8u64 {
        product = product * BigRational::from_integer(BigInt::from(phi(n)));
        let s = GcdClosedSet::try_new((1..=n).map(BigInt::from).collect()).unwrap();
        let m = meet_matrix(&s, &ArithFn::power(1)).unwrap();
        assert_eq!(det_direct(&m), product, "Smith determinant at n={n}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xFAC7);
    let one = BigRational::one();
    let mut total_elems = 0usize;
    for _ in 0..60 {
        let mut elems: Vec<BigInt> = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let x = rng.gen_range(2u64..=720);
            elems.extend(divisors_of(&BigInt::from(x)));
        }
        elems.sort();
        elems.dedup();
        assert!(is_factor_closed(&elems));
        let s = GcdClosedSet::try_new(elems).expect("factor closed implies GCD closed");
        total_elems += s.len();
        let verdict = is_singular_power_lcm(&s, &one, 64, 1 << 12);
        assert_eq!(verdict, SingularityVerdict::Nonsingular, "set {:?}", s.elems());
        assert!(!Analysis::new(s).det_product(1).is_zero());
    }
    let dt = t0.elapsed();
    pass(
        7,
        &format!("totient products match for n ≤ 8; 60 factor-closed sets ({total_elems} elements) nonsingular ({dt:?})"),
    );
}

/// Criterion 8: scaling the two largest elements of the counterexample by
/// q = 11 pushes the singular exponent strictly above 1.
#[test]
fn criterion_8_q_modification() {
    let t0 = Instant::now();
    let s = odd_singular_nine_set_q(11).unwrap();
    // h(1) is certified positive (exact value 4408/19516497)
    let h1 = h_eval(&s, 8, &Float::with_val(64, 1), 256);
    assert_eq!(h1.sign(), Sign::Positive);
    assert_eq!(psi(&s, 1, 8), BigRational::new(BigInt::from(4408), BigInt::from(19516497)));

    let range = (Float::with_val(64, 1.0), Float::with_val(64, 64.0));
    let bracket = find_sign_change(&s, 8, range, 64, 256, 1 << 13)
        .unwrap()
        .expect("sign change above 1");
    let tol = Float::with_val(64, 1e-6);
    let (alpha0, _) = bisect_root(&s, 8, &bracket, &tol, 256, 1 << 13).unwrap();
    assert!(alpha0.width().to_f64() <= 1e-6);
    assert!(alpha0.lo() > &1, "α₀ must be strictly above 1");
    let root = 1.0001764238506882;
    assert!(alpha0.lo().to_f64() <= root && root <= alpha0.hi().to_f64());
    let dt = t0.elapsed();
    pass(
        8,
        &format!(
            "h(1) > 0 and α₀ ∈ [{:.9}, {:.9}] ({dt:?})",
            alpha0.lo().to_f64(),
            alpha0.hi().to_f64()
        ),
    );
}

/// Criterion 9: one hundred seeded odd realizations of the cube class have
/// strictly negative Ψ at the top for α = 1.
#[test]
fn criterion_9_odd_cube_negativity() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0DDC0BE);
    let p = Class8::J.representative();
    for k in 0..100 {
        let (_, s) = random_realization_of(&mut rng, &p, false, true);
        let v = psi(&s, 1, s.len() - 1);
        assert!(v.is_negative(), "realization {k} gave Ψ = {v}");
    }
    let dt = t0.elapsed();
    pass(9, &format!("100 odd cube realizations all negative at the top ({dt:?})"));
}
