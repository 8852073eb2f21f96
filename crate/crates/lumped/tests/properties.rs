//! Property tests: reversibility, stochasticity, and exact distance
//! preservation when collapsing configurations that sit in a reference's
//! flip orbit.

use cube::{orbit, Partition, SpinConfig};
use lumped::{LumpedChain, LumpedPoint};
use proptest::prelude::*;

fn arb_sizes() -> impl Strategy<Value = Vec<usize>> {
    // Up to 3 classes of up to 4 coordinates: sums stay within the 12-bit
    // configuration vectors used below.
    prop::collection::vec(1..5usize, 1..4)
}

fn arb_config(n: usize) -> impl Strategy<Value = SpinConfig> {
    prop::collection::vec(prop::bool::ANY, n).prop_map(|bits| {
        let signs: Vec<i8> = bits.iter().map(|&b| if b { 1 } else { -1 }).collect();
        SpinConfig::from_signs(&signs).unwrap()
    })
}

proptest! {
    #[test]
    fn rates_form_a_stochastic_kernel(sizes in arb_sizes()) {
        let c = LumpedChain::from_sizes(&sizes).unwrap();
        for x in c.states() {
            let total: f64 = c.neighbors(&x).iter().map(|nb| nb.rate).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            if c.is_vertex(&x) {
                prop_assert_eq!(c.neighbors(&x).len(), c.d());
            }
        }
    }

    #[test]
    fn detailed_balance_random_chains(sizes in arb_sizes()) {
        let c = LumpedChain::from_sizes(&sizes).unwrap();
        for x in c.states() {
            for nb in c.neighbors(&x) {
                let back: f64 = c
                    .neighbors(&nb.point)
                    .iter()
                    .filter(|b| b.point == x)
                    .map(|b| b.rate)
                    .sum();
                let lhs = c.ln_measure(&x) + nb.rate.ln();
                let rhs = c.ln_measure(&nb.point) + back.ln();
                prop_assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn collapse_preserves_distance_from_orbit_points(
        sizes in arb_sizes(),
        xi_bits in prop::collection::vec(prop::bool::ANY, 12),
        sigma_bits in prop::collection::vec(prop::bool::ANY, 12),
        flip in prop::num::u64::ANY,
    ) {
        let n: usize = sizes.iter().sum();
        let p = Partition::from_sizes(&sizes).unwrap();
        let signs: Vec<i8> = xi_bits[..n].iter().map(|&b| if b { 1 } else { -1 }).collect();
        let xi = SpinConfig::from_signs(&signs).unwrap();
        let orb = orbit(&p, &xi).unwrap();
        let vertex_config = &orb[(flip as usize) % orb.len()];
        let signs: Vec<i8> = sigma_bits[..n].iter().map(|&b| if b { 1 } else { -1 }).collect();
        let sigma = SpinConfig::from_signs(&signs).unwrap();

        let c = LumpedChain::new(p);
        let img_v = c.image(&xi, vertex_config).unwrap();
        let img_s = c.image(&xi, &sigma).unwrap();
        prop_assert!(c.is_vertex(&img_v));
        prop_assert_eq!(
            c.graph_dist(&img_v, &img_s),
            vertex_config.hamming_dist(&sigma)
        );
    }

    #[test]
    fn sphere_sizes_partition_the_grid(sizes in arb_sizes()) {
        let c = LumpedChain::from_sizes(&sizes).unwrap();
        let n: usize = sizes.iter().sum();
        for x in c.states() {
            let total: u128 = (0..=n)
                .map(|m| c.sphere_size(&x, m).unwrap())
                .sum();
            prop_assert_eq!(total, c.state_count());
        }
    }

    #[test]
    fn multiplicity_counts_preimages(sizes in arb_sizes()) {
        // Directly count configurations collapsing to each grid point on a
        // small cube.
        let n: usize = sizes.iter().sum();
        prop_assume!(n <= 12);
        let p = Partition::from_sizes(&sizes).unwrap();
        let xi = SpinConfig::all_plus(n);
        let c = LumpedChain::new(p);
        let mut counts = std::collections::HashMap::<LumpedPoint, u64>::new();
        for bits in 0u64..(1 << n) {
            let signs: Vec<i8> = (0..n).map(|i| if bits >> i & 1 == 1 { 1 } else { -1 }).collect();
            let sigma = SpinConfig::from_signs(&signs).unwrap();
            *counts.entry(c.image(&xi, &sigma).unwrap()).or_default() += 1;
        }
        for x in c.states() {
            let expected = counts.get(&x).copied().unwrap_or(0);
            prop_assert_eq!(c.multiplicity(&x), lumped::BigUint::from(expected));
        }
    }
}
