//! Property tests for the bit-level configuration type and the partition /
//! lumping operations.

use cube::{
    build_partition_from_set, hypothesis_h_with, is_compatible, lump, orbit,
    refine_partition_for_point, Partition, SpinConfig, SpinSet,
};
use proptest::prelude::*;

fn arb_config(n: usize) -> impl Strategy<Value = SpinConfig> {
    prop::collection::vec(prop::bool::ANY, n).prop_map(|bits| {
        let signs: Vec<i8> = bits.iter().map(|&b| if b { 1 } else { -1 }).collect();
        SpinConfig::from_signs(&signs).unwrap()
    })
}

fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
    // Random class label per coordinate, then drop empty classes.
    prop::collection::vec(0..4usize, n).prop_map(move |labels| {
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); 4];
        for (i, &l) in labels.iter().enumerate() {
            classes[l].push(i);
        }
        classes.retain(|c| !c.is_empty());
        Partition::new(n, classes).unwrap()
    })
}

proptest! {
    #[test]
    fn hamming_is_a_metric(
        a in arb_config(24),
        b in arb_config(24),
        c in arb_config(24),
    ) {
        prop_assert_eq!(a.hamming_dist(&b), b.hamming_dist(&a));
        prop_assert_eq!(a.hamming_dist(&a), 0);
        if a != b {
            prop_assert!(a.hamming_dist(&b) > 0);
        }
        prop_assert!(a.hamming_dist(&c) <= a.hamming_dist(&b) + b.hamming_dist(&c));
    }

    #[test]
    fn class_distances_sum_to_total(
        a in arb_config(16),
        b in arb_config(16),
        p in arb_partition(16),
    ) {
        let total: usize = (0..p.d())
            .map(|k| a.hamming_dist_in(&b, p.mask(k)))
            .sum();
        prop_assert_eq!(total, a.hamming_dist(&b));
    }

    #[test]
    fn orbit_has_exactly_two_to_the_d_members(
        xi in arb_config(12),
        p in arb_partition(12),
    ) {
        let orb = orbit(&p, &xi).unwrap();
        prop_assert_eq!(orb.len(), 1 << p.d());
        prop_assert_eq!(&orb[0], &xi);
        let as_set = SpinSet::from_configs(orb).unwrap();
        // No duplicates, and the whole orbit is compatible.
        prop_assert_eq!(as_set.len(), 1 << p.d());
        prop_assert!(is_compatible(&p, &xi, &as_set));
    }

    #[test]
    fn lump_counts_are_within_class_sizes(
        sigma in arb_config(16),
        xi in arb_config(16),
        p in arb_partition(16),
    ) {
        let counts = lump(&p, &xi, &sigma);
        prop_assert_eq!(counts.len(), p.d());
        for (k, &c) in counts.iter().enumerate() {
            prop_assert!(c <= p.size(k));
        }
        let total: usize = counts.iter().sum();
        prop_assert_eq!(total, sigma.hamming_dist(&xi));
    }

    #[test]
    fn built_partition_is_compatible_with_set_orbit(
        raw in prop::collection::vec(arb_config(16), 1..5),
        pick in prop::num::u64::ANY,
    ) {
        let a = SpinSet::from_configs(raw).unwrap();
        let p = build_partition_from_set(&a).unwrap();
        prop_assert!(p.d() <= 1 << a.len());
        // Compatible with every element of A taken as the reference...
        for xi in a.iter() {
            prop_assert!(is_compatible(&p, xi, &a));
        }
        // ...and with an arbitrary member of the flip orbit of the first one.
        let orb = orbit(&p, a.get(0)).unwrap();
        let xi = &orb[(pick as usize) % orb.len()];
        prop_assert!(is_compatible(&p, xi, &a));
    }

    #[test]
    fn refinement_adds_point_and_at_most_doubles(
        raw in prop::collection::vec(arb_config(12), 1..4),
        s in arb_config(12),
    ) {
        let a = SpinSet::from_configs(raw).unwrap();
        let p = build_partition_from_set(&a).unwrap();
        let xi = a.get(0).clone();
        let r = refine_partition_for_point(&p, &xi, &s).unwrap();
        prop_assert!(r.d() <= 2 * p.d());
        prop_assert!(r.d() >= p.d());
        let mut with_s: Vec<SpinConfig> = a.iter().cloned().collect();
        with_s.push(s);
        let extended = SpinSet::from_configs(with_s).unwrap();
        prop_assert!(is_compatible(&r, &xi, &extended));
    }

    #[test]
    fn separation_threshold_is_monotone(
        raw in prop::collection::vec(arb_config(10), 1..5),
        t in 0..6usize,
    ) {
        let a = SpinSet::from_configs(raw).unwrap();
        if hypothesis_h_with(&a, t + 1) {
            prop_assert!(hypothesis_h_with(&a, t));
        }
    }
}
