use proptest::prelude::*;

use super::*;
use crate::pairing::pair;

#[test]
fn extracted_autoreductions() {
    let fs = chain_autoreductions(&CandidateMap::identity(), 2).unwrap();
    assert_eq!(fs.len(), 3);
    assert_eq!(fs[0].apply(1).unwrap(), 1);
    assert_eq!(fs[0].apply(2).unwrap(), 3);

    let fs = chain_autoreductions(&CandidateMap::identity(), 1).unwrap();
    for y in 0..100 {
        assert_eq!(fs[0].apply(y).unwrap(), 2 * y);
        assert_eq!(fs[1].apply(y).unwrap(), 2 * y + 1);
    }
    assert!(chain_autoreductions(&CandidateMap::identity(), 0).is_err());
}

#[test]
fn pigeonhole_examples() {
    let out = pigeonhole_audit(&CandidateMap::identity(), 2, 5).unwrap();
    assert_eq!(
        out.result,
        AuditResult::Deviation {
            point: 5,
            value: 7,
            via: 0
        }
    );
    assert!(out.recheck(&CandidateMap::identity()).unwrap());

    // {3y, 3y+1, 3y+2} -> {2y, 2y+1, 2y}
    let h = CandidateMap::from_fn("fold", |x| {
        let (y, j) = (x / 3, x % 3);
        Ok(2 * y + if j == 1 { 1 } else { 0 })
    });
    for y in [0u64, 1, 17, 999] {
        let out = pigeonhole_audit(&h, 2, y).unwrap();
        assert_eq!(
            out.result,
            AuditResult::Collision {
                first: 3 * y,
                second: 3 * y + 2,
                value: 2 * y
            }
        );
        assert!(out.recheck(&h).unwrap());
    }

    let seeker = CandidateMap::adversarial_identity_seeker(3).unwrap();
    for y in 0..1000 {
        let out = pigeonhole_audit(&seeker, 3, y).unwrap();
        assert!(out.is_collision());
        assert!(out.recheck(&seeker).unwrap());
    }
}

#[test]
fn pyramid_examples() {
    let g = pyramid_autoreduction(&CandidateMap::projection(), 2).unwrap();
    match g.apply(5).unwrap() {
        PyramidStep::BoundRefuted { x, column } => {
            assert_eq!(x, 5);
            assert_eq!(column.len(), 6);
            assert!(column.iter().all(|&z| crate::pairing::left(z) == 5));
        }
        other => panic!("unexpected {other:?}"),
    }

    let bump = CandidateMap::from_fn("bump-first", |z| {
        let (x, y) = crate::pairing::unpair(z);
        Ok(if y == 0 { x + 1 } else { x })
    });
    let g = pyramid_autoreduction(&bump, 2).unwrap();
    assert_eq!(
        g.apply(5).unwrap(),
        PyramidStep::Moved {
            x: 5,
            via: 0,
            value: 6
        }
    );

    let g = pyramid_autoreduction(&CandidateMap::projection(), 1).unwrap();
    assert_eq!(g.apply(0).unwrap(), PyramidStep::Fixed { x: 0 });
    assert!(pyramid_autoreduction(&CandidateMap::identity(), 0).is_err());
}

#[test]
fn calibrated_examples() {
    let (s, t) = (OmegaSet::evens(), OmegaSet::odds());
    let out = calibrated_autoreduction(&CandidateMap::identity(), &s, &t, 3, 200).unwrap();
    assert_eq!(
        out.result,
        AuditResult::BudgetExhausted(SearchStats {
            evaluated: 200,
            distinct_projections: 1,
            max_multiplicity: 1
        })
    );

    let alternating = CandidateMap::from_fn("alternate", |z| {
        let (x, i) = crate::pairing::unpair(z);
        pair(if i % 2 == 0 { x } else { x - 1 }, i)
    });
    let out = calibrated_autoreduction(&alternating, &s, &t, 3, 200).unwrap();
    assert_eq!(
        out.result,
        AuditResult::Deviation {
            point: 3,
            value: 2,
            via: 1
        }
    );
    assert!(out.recheck(&alternating).unwrap());

    let out = calibrated_autoreduction(&alternating, &s, &t, 3, 0).unwrap();
    assert_eq!(
        out.result,
        AuditResult::BudgetExhausted(SearchStats::default())
    );

    assert!(matches!(
        calibrated_autoreduction(&alternating, &s, &t, 4, 10),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn bounded_autoreductions_examples() {
    let t = OmegaSet::odds();
    let (g0, g1) = bounded_calibrated_autoreductions(&CandidateMap::identity(), &t);
    for x in 0..200 {
        assert_eq!(g0.apply(x).unwrap(), x);
        assert_eq!(g1.apply(x).unwrap(), x);
    }

    let t2 = t.clone();
    let swap = CandidateMap::from_fn("swap-copies", move |z| {
        let (x, i) = crate::pairing::unpair(z);
        if i <= 1 && t2.member(x)? {
            pair(x, 1 - i)
        } else {
            Ok(z)
        }
    });
    let (g0, g1) = bounded_calibrated_autoreductions(&swap, &t);
    for x in 0..200 {
        assert_eq!(g0.apply(x).unwrap(), x);
        assert_eq!(g1.apply(x).unwrap(), x);
    }

    let wild = CandidateMap::constant(pair(40, 1).unwrap());
    let (_, g1) = bounded_calibrated_autoreductions(&wild, &t);
    for x in (0..200).step_by(2) {
        assert_eq!(g1.apply(x).unwrap(), x);
    }
}

#[test]
fn bounded_collision_examples() {
    let (s, t) = (OmegaSet::evens(), OmegaSet::odds());
    match bounded_collision_audit(&CandidateMap::identity(), &s, &t, 3) {
        Err(Error::RangeViolation { input, image, .. }) => {
            assert_eq!(input, pair(3, 1).unwrap());
            assert_eq!(image, pair(3, 1).unwrap());
        }
        other => panic!("unexpected {other:?}"),
    }

    let collapse = CandidateMap::collapse();
    let out = bounded_collision_audit(&collapse, &s, &t, 3).unwrap();
    assert_eq!(
        out.result,
        AuditResult::Collision {
            first: pair(3, 0).unwrap(),
            second: pair(3, 1).unwrap(),
            value: pair(3, 0).unwrap()
        }
    );
    assert!(out.recheck(&collapse).unwrap());

    let shift = CandidateMap::from_fn("shift", |z| pair(crate::pairing::left(z) + 1, 0));
    let out = bounded_collision_audit(&shift, &s, &t, 3).unwrap();
    assert_eq!(
        out.result,
        AuditResult::Deviation {
            point: 3,
            value: 4,
            via: 0
        }
    );
    assert!(out.recheck(&shift).unwrap());
    assert!(bounded_collision_audit(&shift, &s, &t, 2).is_err());
}

#[test]
fn column_image_examples() {
    let a = OmegaSet::seeded_random(3);
    let id = column_image_audit(&CandidateMap::identity(), &a, 5, 100).unwrap();
    assert_eq!((id.distinct, id.max_multiplicity), (100, 1));

    let constant = column_image_audit(&CandidateMap::constant(7), &a, 5, 100).unwrap();
    assert_eq!((constant.distinct, constant.max_multiplicity), (1, 100));

    let shuffled = column_image_audit(&CandidateMap::column_shuffle(11), &a, 5, 100).unwrap();
    assert_eq!(shuffled.projected_same_side, 100);
    assert_eq!(shuffled.projected_agreement(), 1.0);
    assert_eq!(shuffled.side, a.member(5).unwrap());
}

#[test]
fn eventual_identity_examples() {
    let r = eventual_identity_report(&CandidateMap::identity(), 10_000).unwrap();
    assert!(r.deviations.is_empty());
    assert_eq!(r.identity_tail_start, Some(0));

    let r = eventual_identity_report(&CandidateMap::affine(1, 1), 100).unwrap();
    assert_eq!(r.deviations.len(), 100);
    assert_eq!(r.identity_tail_start, None);

    let r = eventual_identity_report(&CandidateMap::table([(0, 5)]), 100).unwrap();
    assert_eq!(r.deviations, vec![0]);
    assert_eq!(r.identity_tail_start, Some(1));
}

#[test]
fn preservation_examples() {
    let a = OmegaSet::seeded_random(7);
    assert_eq!(
        preservation_rate(&CandidateMap::identity(), &a, 1000)
            .unwrap()
            .as_f64(),
        1.0
    );
    let evens = OmegaSet::evens();
    assert_eq!(
        preservation_rate(&CandidateMap::affine(1, 1), &evens, 1000)
            .unwrap()
            .agree,
        0
    );
    // Measured once for the fixed mixer.
    let rate = preservation_rate(&CandidateMap::affine(1, 1), &a, 10_000).unwrap();
    assert!((0.45..=0.55).contains(&rate.as_f64()));
    assert_eq!(rate.agree, PINNED_SHIFT_AGREEMENT);
}

const PINNED_SHIFT_AGREEMENT: u64 = 5031;

fn arb_candidate() -> impl Strategy<Value = CandidateMap> {
    prop_oneof![
        (-3i64..=3, 0i64..=5).prop_map(|(a, b)| CandidateMap::affine(a, b)),
        (0u64..50).prop_map(|seed| CandidateMap::seeded_injection(seed, 4000).unwrap()),
        (1u64..=5).prop_map(|k| CandidateMap::adversarial_identity_seeker(k).unwrap()),
        prop::collection::vec((0u64..200, 0u64..200), 0..40).prop_map(CandidateMap::table),
    ]
}

proptest! {
    #[test]
    fn pigeonhole_dichotomy_is_exhaustive(h in arb_candidate(), k in 1u64..=5, y in 0u64..600) {
        let out = pigeonhole_audit(&h, k, y).unwrap();
        prop_assert!(out.is_deviation() || out.is_collision());
        prop_assert!(out.recheck(&h).unwrap());
    }

    #[test]
    fn extraction_matches_formula(h in arb_candidate(), k in 1u64..=5) {
        let fs = chain_autoreductions(&h, k).unwrap();
        for (j, f) in fs.iter().enumerate() {
            let report = eventual_identity_report(f, 200).unwrap();
            for y in 0..200u64 {
                let direct = h.apply((k + 1) * y + j as u64).unwrap() / k;
                prop_assert_eq!(f.apply(y).unwrap(), direct);
                prop_assert_eq!(report.deviations.contains(&y), direct != y);
            }
        }
    }
}
