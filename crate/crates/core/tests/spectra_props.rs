//! Spectrum invariants: fixed points, strict expansion, involutions,
//! reflection symmetry, and the exact ground truth for four projections.

use projsum_core::exactnum::{QuadraticReal, Rational};
use projsum_core::spectra::{
    complement_map, coxeter_inverse, coxeter_map, discrete_candidates, segment_endpoints,
    sigma4_lower, sigma4_upper, sigma_small_n, SegmentPosition, SigmaTag,
};
use rand::Rng;
use std::cmp::Ordering;
use std::collections::BTreeSet;

#[test]
fn interval_map_fixes_both_endpoints_up_to_64() {
    for n in 5u32..=64 {
        let seg = segment_endpoints(n).unwrap();
        assert_eq!(
            &coxeter_map(n, seg.alpha()).unwrap(),
            seg.alpha(),
            "alpha_{n}"
        );
        assert_eq!(&coxeter_map(n, seg.beta()).unwrap(), seg.beta(), "beta_{n}");
    }
}

#[test]
fn map_strictly_expands_inside_the_segment() {
    let mut rng = projsum_core::linalg::seeded_rng(0x5EC, &[2]);
    let mut tested = 0;
    while tested < 1000 {
        let n = rng.gen_range(5u32..=24);
        let seg = segment_endpoints(n).unwrap();
        // Random rational inside (α_n, β_n): sample between the integer
        // brackets and verify the position exactly.
        let num = rng.gen_range(1i64..(i64::from(n) * 64));
        let lambda = QuadraticReal::from(Rational::new(num, 64));
        if seg.position(&lambda) != SegmentPosition::Interior {
            continue;
        }
        tested += 1;
        let forward = coxeter_map(n, &lambda).unwrap();
        let backward = coxeter_inverse(n, &lambda).unwrap();
        assert_eq!(forward.cmp_exact(&lambda).unwrap(), Ordering::Greater);
        assert_eq!(backward.cmp_exact(&lambda).unwrap(), Ordering::Less);
        // and the map stays inside the open segment
        assert_eq!(seg.position(&forward), SegmentPosition::Interior);
        assert_eq!(seg.position(&backward), SegmentPosition::Interior);
    }
}

#[test]
fn complement_and_inverse_are_involutions() {
    let mut rng = projsum_core::linalg::seeded_rng(0x111, &[3]);
    for _ in 0..500 {
        let n = rng.gen_range(5u32..=20);
        let num = rng.gen_range(-(4 * i64::from(n))..(8 * i64::from(n)));
        let x = QuadraticReal::from(Rational::new(num, 16));
        assert_eq!(complement_map(n, &complement_map(n, &x)), x);
        if let Ok(y) = coxeter_map(n, &x) {
            if let Ok(back) = coxeter_inverse(n, &y) {
                assert_eq!(back, x, "inverse failed at n = {n}, x = {x}");
            }
        }
    }
}

#[test]
fn small_n_membership_is_reflection_symmetric() {
    for n in 1u32..=4 {
        for num in -8..=(8 * i64::from(n) + 8) {
            for den in 1i64..=6 {
                let lambda = Rational::new(num, den);
                let mirror = &Rational::from_int(i64::from(n)) - &lambda;
                assert_eq!(
                    sigma_small_n(n, &lambda).unwrap().tag,
                    sigma_small_n(n, &mirror).unwrap().tag,
                    "asymmetric at n = {n}, lambda = {lambda}"
                );
            }
        }
    }
}

#[test]
fn four_projection_ground_truth_at_depth_fifty() {
    // The orbit closure at depth 50 reproduces the certified list exactly:
    // integers plus both tails for every k ≤ 100.
    let candidates = discrete_candidates(4, 50).unwrap();
    let mut expected: BTreeSet<Rational> = BTreeSet::new();
    for i in [0i64, 1, 3, 4] {
        expected.insert(Rational::from_int(i));
    }
    for k in 1..=100u64 {
        expected.insert(sigma4_lower(k));
        expected.insert(sigma4_upper(k));
    }
    // The candidate set excludes the segment point 2 by construction.
    assert_eq!(candidates, expected);
    // Every candidate is certified by the closed-form membership test.
    for c in &candidates {
        assert_eq!(
            sigma_small_n(4, c).unwrap().tag,
            SigmaTag::InDiscreteCertified,
            "uncertified candidate {c}"
        );
    }
}

#[test]
fn candidate_generators_stay_outside_the_closed_segment() {
    for n in [5u32, 6, 9] {
        let seg = segment_endpoints(n).unwrap();
        for p in discrete_candidates(n, 12).unwrap() {
            let pos = seg.position(&QuadraticReal::from(p.clone()));
            assert!(
                !pos.is_inside_closed(),
                "candidate {p} lies inside the segment for n = {n}"
            );
            assert!(!p.is_negative() && p <= Rational::from_int(i64::from(n)));
        }
    }
}

#[test]
fn segment_position_handles_unreduced_radicands() {
    // The same value presented over different radicands gets the same
    // position verdict.
    let seg = segment_endpoints(9).unwrap(); // radicand 45
    let alpha_native: QuadraticReal = "(9 - 1*sqrt(45))/2".parse().unwrap();
    let alpha_unreduced: QuadraticReal = "(18 - 1*sqrt(180))/4".parse().unwrap();
    assert_eq!(seg.position(&alpha_native), SegmentPosition::LowerEndpoint);
    assert_eq!(
        seg.position(&alpha_unreduced),
        SegmentPosition::LowerEndpoint
    );
}
