//! Pinned examples for the configuration/partition layer. The derived values
//! are recomputed here by independent brute-force code paths (quadratic
//! column comparison, explicit orbit membership) and asserted against the
//! library implementations.

use cube::{
    build_partition_from_set, hypothesis_h, is_compatible, orbit, refine_partition_for_point,
    Partition, SpinConfig, SpinSet,
};

fn set(configs: &[&str]) -> SpinSet {
    SpinSet::from_configs(configs.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
}

/// Independent column-grouping oracle: quadratic scan comparing sign-
/// normalised columns, no hash maps, no shared code with the library.
fn column_grouping_oracle(a: &SpinSet) -> Vec<Vec<usize>> {
    let n = a.n();
    let m = a.len();
    let mut assigned = vec![false; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut class = vec![i];
        assigned[i] = true;
        for j in i + 1..n {
            if assigned[j] {
                continue;
            }
            // Columns i and j are grouped when they agree up to one global
            // sign: sigma^mu_i * sigma^mu_j is the same for every mu.
            let first = a.get(0).sign(i) * a.get(0).sign(j);
            let equal_up_to_sign =
                (0..m).all(|mu| a.get(mu).sign(i) * a.get(mu).sign(j) == first);
            if equal_up_to_sign {
                class.push(j);
                assigned[j] = true;
            }
        }
        classes.push(class);
    }
    classes
}

#[test]
fn orbit_of_trivial_partition_is_pm_xi() {
    let p = Partition::trivial(6);
    let xi: SpinConfig = "+-++--".parse().unwrap();
    let orb = orbit(&p, &xi).unwrap();
    assert_eq!(orb.len(), 2);
    assert!(orb.contains(&xi));
    assert!(orb.contains(&xi.negated()));
}

#[test]
fn orbit_of_two_classes_has_four_points() {
    let p: Partition = "3,3".parse().unwrap();
    let xi: SpinConfig = "++--+-".parse().unwrap();
    let orb = orbit(&p, &xi).unwrap();
    assert_eq!(orb.len(), 4);
    assert!(orb.contains(&xi));
}

#[test]
fn compatibility_examples() {
    let p: Partition = "2,2".parse().unwrap();
    let xi = SpinConfig::all_plus(4);
    // Whole orbit is compatible.
    let orb = SpinSet::from_configs(orbit(&p, &xi).unwrap()).unwrap();
    assert!(is_compatible(&p, &xi, &orb));
    // Partial disagreement inside a class breaks compatibility.
    let bad = set(&["+-++"]);
    assert!(!is_compatible(&p, &xi, &bad));
    // Singleton -xi with the trivial partition is compatible.
    let p1 = Partition::trivial(4);
    let neg = SpinSet::from_configs(vec![xi.negated()]).unwrap();
    assert!(is_compatible(&p1, &xi, &neg));
}

#[test]
fn partition_from_singleton_is_trivial() {
    let a = set(&["+-+-+-"]);
    let p = build_partition_from_set(&a).unwrap();
    assert_eq!(p.d(), 1);
    assert_eq!(p.sizes(), vec![6]);
}

#[test]
fn partition_from_antipodal_pair_matches_oracle_on_n6() {
    let xi: SpinConfig = "+--++-".parse().unwrap();
    let a = SpinSet::from_configs(vec![xi.clone(), xi.negated()]).unwrap();
    let p = build_partition_from_set(&a).unwrap();
    let oracle = column_grouping_oracle(&a);
    assert_eq!(p.classes(), &oracle[..]);
    assert_eq!(p.d(), 1);
}

#[test]
fn partition_from_two_configs_by_hand() {
    let a = set(&["++++", "++--"]);
    let p = build_partition_from_set(&a).unwrap();
    assert_eq!(p.classes(), &[vec![0, 1], vec![2, 3]]);
    assert_eq!(p.d(), 2);
    let oracle = column_grouping_oracle(&a);
    assert_eq!(p.classes(), &oracle[..]);
}

#[test]
fn partition_matches_oracle_on_random_sets() {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let n = rng.gen_range(2..=16);
        let m = rng.gen_range(1..=4);
        let configs: Vec<SpinConfig> = (0..m)
            .map(|_| {
                let signs: Vec<i8> =
                    (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
                SpinConfig::from_signs(&signs).unwrap()
            })
            .collect();
        let a = SpinSet::from_configs(configs).unwrap();
        let p = build_partition_from_set(&a).unwrap();
        let oracle = column_grouping_oracle(&a);
        assert_eq!(p.classes(), &oracle[..]);
        assert!(p.d() <= 1 << a.len());
        for xi in a.iter() {
            assert!(is_compatible(&p, xi, &a));
        }
    }
}

#[test]
fn refine_example_by_hand() {
    let p = Partition::trivial(4);
    let xi = SpinConfig::all_plus(4);
    let s: SpinConfig = "++--".parse().unwrap();
    let r = refine_partition_for_point(&p, &xi, &s).unwrap();
    assert_eq!(r.classes(), &[vec![0, 1], vec![2, 3]]);
}

#[test]
fn refine_no_split_when_already_compatible() {
    let p: Partition = "2,2".parse().unwrap();
    let xi = SpinConfig::all_plus(4);
    let s: SpinConfig = "++--".parse().unwrap();
    let r = refine_partition_for_point(&p, &xi, &s).unwrap();
    assert_eq!(r.d(), 2);
    assert_eq!(r.classes(), p.classes());
}

#[test]
fn separation_examples() {
    assert!(hypothesis_h(&set(&["++++++"])));
    assert!(!hypothesis_h(&set(&["++++++", "++++--"])));
    assert!(hypothesis_h(&set(&["++++++", "++----"])));
}
