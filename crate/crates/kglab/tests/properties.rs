//! Randomized invariant tests for the exact engines.

use kglab::montecarlo::hit_count;
use kglab::qia::BallSequence;
use kglab::rational::{rat, tree_sum, zero, Rational};
use kglab::torus::{intersect_measure_1d, preimage_1d, Ball};
use kglab::transfer::series_classify;
use kglab::{Enclosure, LatticeMode};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (0i64..48, 1i64..48).prop_map(|(p, q)| rat(p % q.max(1), q.max(1)))
}

fn radius() -> impl Strategy<Value = Rational> {
    (1i64..24, 2i64..48).prop_map(|(p, q)| {
        let r = rat(p, q * 2);
        if r > rat(1, 2) {
            rat(1, 2)
        } else {
            r
        }
    })
}

fn arc() -> impl Strategy<Value = Ball> {
    (small_rat(), radius()).prop_map(|(c, r)| Ball::arc(c, r).unwrap())
}

fn nonzero_q() -> impl Strategy<Value = i64> {
    (1i64..30, any::<bool>()).prop_map(|(q, neg)| if neg { -q } else { q })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn preimage_preserves_measure(q in nonzero_q(), b in arc()) {
        let pre = preimage_1d(q, &b).unwrap();
        prop_assert_eq!(pre.length(), b.measure());
    }

    #[test]
    fn intersection_is_symmetric_and_bounded(
        q1 in nonzero_q(), q2 in nonzero_q(), b1 in arc(), b2 in arc()
    ) {
        let ab = intersect_measure_1d(q1, &b1, q2, &b2).unwrap();
        let ba = intersect_measure_1d(q2, &b2, q1, &b1).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert!(!ab.is_negative());
        prop_assert!(ab <= b1.measure().min(b2.measure()));
    }

    #[test]
    fn intersection_with_itself_is_the_set(q in nonzero_q(), b in arc()) {
        let m = intersect_measure_1d(q, &b, q, &b).unwrap();
        prop_assert_eq!(m, b.measure());
    }

    #[test]
    fn intersection_ignores_common_scaling(
        q1 in nonzero_q(), q2 in nonzero_q(), k in 1i64..6, b1 in arc(), b2 in arc()
    ) {
        let base = intersect_measure_1d(q1, &b1, q2, &b2).unwrap();
        let scaled = intersect_measure_1d(k * q1, &b1, k * q2, &b2).unwrap();
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn enclosure_rounding_only_widens(lo in small_rat(), w in small_rat(), bits in 8u32..64) {
        let e = Enclosure::new(lo.clone(), &lo + &w);
        let r = e.round_out(bits);
        prop_assert!(r.lo() <= e.lo());
        prop_assert!(r.hi() >= e.hi());
    }

    #[test]
    fn tree_sum_matches_sequential_sum(xs in prop::collection::vec(small_rat(), 0..24)) {
        let seq: Rational = xs.iter().fold(zero(), |a, b| a + b);
        prop_assert_eq!(tree_sum(xs), seq);
    }

    #[test]
    fn hit_count_is_monotone_in_radius(
        x in small_rat(), c_small in (1i64..8), q_max in 1u64..16
    ) {
        let tight = BallSequence::power(1, rat(1, 4 * c_small), rat(1, 1)).unwrap();
        let loose = BallSequence::power(1, rat(1, 4), rat(1, 1)).unwrap();
        let a = hit_count(&[x.clone()], &tight, 1, q_max, LatticeMode::Full).unwrap();
        let b = hit_count(&[x], &loose, 1, q_max, LatticeMode::Full).unwrap();
        prop_assert!(a <= b);
    }

    #[test]
    fn series_verdict_ignores_the_constant(
        c_num in 1i64..12, c_den in 1i64..12, tau_num in -4i64..8, n in 1u32..4
    ) {
        let tau = rat(tau_num, 2);
        let a = BallSequence::power(1, rat(c_num, c_num + c_den), tau.clone()).unwrap();
        let b = BallSequence::power(1, rat(1, 7), tau).unwrap();
        let va = series_classify(&a, n, 1).unwrap().verdict;
        let vb = series_classify(&b, n, 1).unwrap().verdict;
        prop_assert_eq!(va, vb);
    }

    #[test]
    fn measure_sum_brackets_are_ordered(q_max in 1u64..40) {
        let seq = BallSequence::power_log(
            1, rat(1, 3), rat(1, 2), rat(1, 3), vec![zero()]
        ).unwrap();
        let e = kglab::qia::measure_sum(&seq, 2, q_max, LatticeMode::Full);
        prop_assert!(e.lo() <= e.hi());
        prop_assert!(!e.lo().is_negative());
        prop_assert!(!e.width().is_negative());
    }

    #[test]
    fn zero_radius_sequences_hit_nothing(x in small_rat(), q_max in 1u64..12) {
        let seq = BallSequence::power(1, Rational::zero(), rat(1, 1)).unwrap();
        let hits = hit_count(&[x], &seq, 1, q_max, LatticeMode::Full).unwrap();
        prop_assert_eq!(hits, 0);
    }
}
