//! Classification invariants: exact window inequalities, verdict
//! monotonicity, complement symmetry of dossiers, and UHF monotonicity.

use projsum_core::classify::{
    classify, exactness_window, uhf_sigma_contains, Answer, SupernaturalNumber,
};
use projsum_core::exactnum::{QuadraticReal, Rational};
use projsum_core::spectra::{segment_endpoints, SegmentPosition};
use std::cmp::Ordering;

#[test]
fn window_inequalities_hold_exactly_up_to_64() {
    for n in 11u32..=64 {
        let outer = segment_endpoints(n).unwrap();
        let inner = segment_endpoints(n - 6).unwrap();
        let three = Rational::from_int(3);
        let lo = inner.alpha().add_rational(&three);
        let hi = inner.beta().add_rational(&three);
        // α_{n−6}+3 and β_{n−6}+3 lie strictly inside (α_n, β_n); the
        // characteristic-sign position test needs no cross-field compare.
        assert_eq!(
            outer.position(&lo),
            SegmentPosition::Interior,
            "lower, n={n}"
        );
        assert_eq!(
            outer.position(&hi),
            SegmentPosition::Interior,
            "upper, n={n}"
        );
        // [5, n−5] ⊆ [α_{n−6}+3, β_{n−6}+3]
        assert_ne!(
            lo.cmp_rational(&Rational::from_int(5)),
            Ordering::Greater,
            "interval must reach down to 5 at n={n}"
        );
        assert_ne!(
            hi.cmp_rational(&Rational::from_int(i64::from(n) - 5)),
            Ordering::Less,
            "interval must reach up to n−5 at n={n}"
        );
    }
}

#[test]
fn non_exact_implies_non_nuclear_across_a_sweep() {
    for n in [7u32, 8, 9, 12, 15] {
        for num in 0..=(4 * i64::from(n)) {
            let lambda = QuadraticReal::from(Rational::new(num, 4));
            let d = classify(n, &lambda, 24).unwrap();
            if d.exact.answer == Answer::No {
                assert_eq!(
                    d.nuclear.answer,
                    Answer::No,
                    "monotonicity broken at n={n}, lambda={lambda}"
                );
            }
        }
    }
}

#[test]
fn dossiers_are_complement_symmetric() {
    // Spot grid mirroring the synthesis acceptance grid plus endpoints.
    let mut cases: Vec<(u32, QuadraticReal)> = vec![
        (3, QuadraticReal::from(Rational::new(3, 2))),
        (7, QuadraticReal::from(3)),
        (7, QuadraticReal::from(4)),
        (12, QuadraticReal::from(Rational::new(7, 6))),
    ];
    for k in 0i64..=10 {
        cases.push((4, QuadraticReal::from(Rational::new(2 * k + 2, k + 2))));
        cases.push((
            4,
            QuadraticReal::from(Rational::new(2 * (k + 2) + k + 2 - k, k + 2)),
        ));
    }
    for q in 1i64..=6 {
        for p in 0..=(5 * q) {
            cases.push((5, QuadraticReal::from(Rational::new(p, q))));
        }
    }
    let seg5 = segment_endpoints(5).unwrap();
    cases.push((5, seg5.alpha().clone()));
    cases.push((5, seg5.beta().clone()));
    for (n, lambda) in cases {
        let mirror = projsum_core::spectra::complement_map(n, &lambda);
        let d = classify(n, &lambda, 24).unwrap();
        let m = classify(n, &mirror, 24).unwrap();
        for ((name, v), (_, w)) in d.fields().iter().zip(m.fields().iter()) {
            assert_eq!(
                v.answer, w.answer,
                "field {name} differs between {lambda} and {mirror} (n={n})"
            );
        }
    }
}

#[test]
fn decided_verdicts_always_carry_citations() {
    let cases = [
        (7u32, QuadraticReal::from(3)),
        (4, QuadraticReal::from(Rational::new(4, 3))),
        (5, segment_endpoints(5).unwrap().alpha().clone()),
        (12, QuadraticReal::from(Rational::new(7, 6))),
        (3, QuadraticReal::from(0)),
    ];
    for (n, lambda) in cases {
        let d = classify(n, &lambda, 24).unwrap();
        for (name, v) in d.fields() {
            if v.answer != Answer::Unknown {
                assert!(
                    !v.citation.is_empty(),
                    "decided field {name} lacks a citation at n={n}, lambda={lambda}"
                );
            } else {
                assert!(
                    !v.detail.is_empty(),
                    "unknown field {name} lacks a reason at n={n}, lambda={lambda}"
                );
            }
        }
    }
}

#[test]
fn uhf_membership_is_monotone_in_the_invariant() {
    let nus: [(SupernaturalNumber, SupernaturalNumber); 2] = [
        ("2:1".parse().unwrap(), "2:3".parse().unwrap()),
        ("3:1".parse().unwrap(), "2:inf,3:inf".parse().unwrap()),
    ];
    for (small, large) in nus {
        for num in 0..=20i64 {
            for den in 1..=6i64 {
                let lambda = Rational::new(num, den);
                let a = uhf_sigma_contains(4, &lambda, &small, 24).unwrap();
                let b = uhf_sigma_contains(4, &lambda, &large, 24).unwrap();
                if a.answer == Answer::Yes {
                    assert_eq!(
                        b.answer,
                        Answer::Yes,
                        "monotonicity broken at lambda={lambda}"
                    );
                }
            }
        }
    }
}

#[test]
fn window_description_interval_matches_position_test() {
    let w = exactness_window(14, 24).unwrap();
    let (lo, hi) = w.interval.expect("interval for n > 10");
    let inner = segment_endpoints(8).unwrap();
    assert_eq!(lo, inner.alpha().add_rational(&Rational::from_int(3)));
    assert_eq!(hi, inner.beta().add_rational(&Rational::from_int(3)));
    // Candidate points, when present, are exterior tail points of the inner
    // spectrum shifted by three.
    for c in &w.candidate_points {
        let shifted = c - &Rational::from_int(3);
        assert!(!inner
            .position(&QuadraticReal::from(shifted))
            .is_inside_closed());
    }
}
