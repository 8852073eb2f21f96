use crate::{CubeError, Partition, SpinConfig, SpinSet};
use std::collections::HashMap;

/// A partition together with a reference configuration xi. Lumping a
/// configuration records, per class, how many coordinates disagree with xi.
#[derive(Clone, Debug)]
pub struct LumpingMap {
    partition: Partition,
    xi: SpinConfig,
}

impl LumpingMap {
    pub fn new(partition: Partition, xi: SpinConfig) -> Result<Self, CubeError> {
        if partition.n() != xi.len() {
            return Err(CubeError::DimensionMismatch(format!(
                "partition over {} coordinates, reference over {}",
                partition.n(),
                xi.len()
            )));
        }
        Ok(LumpingMap { partition, xi })
    }

    /// Canonical reference: all coordinates +1.
    pub fn with_all_plus(partition: Partition) -> Self {
        let xi = SpinConfig::all_plus(partition.n());
        LumpingMap { partition, xi }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn xi(&self) -> &SpinConfig {
        &self.xi
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn d(&self) -> usize {
        self.partition.d()
    }

    /// Per-class disagreement counts of sigma against xi.
    pub fn lump(&self, sigma: &SpinConfig) -> Vec<usize> {
        lump(&self.partition, &self.xi, sigma)
    }

    /// Per-class magnetisations 1 - 2 n_k / |Lambda_k| in [-1, 1].
    pub fn magnetisation(&self, sigma: &SpinConfig) -> Vec<f64> {
        self.lump(sigma)
            .iter()
            .zip(self.partition.sizes())
            .map(|(&n_k, m_k)| 1.0 - 2.0 * n_k as f64 / m_k as f64)
            .collect()
    }
}

/// Per-class disagreement counts n_k = #{i in Lambda_k : sigma_i != xi_i}.
pub fn lump(p: &Partition, xi: &SpinConfig, sigma: &SpinConfig) -> Vec<usize> {
    assert_eq!(p.n(), sigma.len());
    (0..p.d())
        .map(|k| sigma.hamming_dist_in(xi, p.mask(k)))
        .collect()
}

/// Practical enumeration guard: 2^d configurations of N/8 bytes each.
const ORBIT_MAX_D: usize = 22;

/// The 2^d configurations obtained from xi by flipping all coordinates of any
/// union of classes. The result is ordered by flip subset (counting order),
/// so the first element is xi itself.
pub fn orbit(p: &Partition, xi: &SpinConfig) -> Result<Vec<SpinConfig>, CubeError> {
    if p.n() != xi.len() {
        return Err(CubeError::DimensionMismatch(format!(
            "partition over {} coordinates, reference over {}",
            p.n(),
            xi.len()
        )));
    }
    let d = p.d();
    if d > ORBIT_MAX_D {
        return Err(CubeError::OrbitTooLarge { d });
    }
    let words = xi.words().len();
    let mut out = Vec::with_capacity(1 << d);
    for subset in 0u64..(1 << d) {
        let mut mask = vec![0u64; words];
        for k in 0..d {
            if subset >> k & 1 == 1 {
                for (w, m) in mask.iter_mut().zip(p.mask(k)) {
                    *w |= m;
                }
            }
        }
        out.push(xi.flipped_by_mask(&mask));
    }
    Ok(out)
}

/// True iff every element of `a` lumps to a corner, i.e. agrees with xi or
/// with -xi on each whole class. Checked classwise without enumerating the
/// orbit.
pub fn is_compatible(p: &Partition, xi: &SpinConfig, a: &SpinSet) -> bool {
    if a.n() != p.n() || xi.len() != p.n() {
        return false;
    }
    a.iter().all(|sigma| {
        (0..p.d()).all(|k| {
            let dist = sigma.hamming_dist_in(xi, p.mask(k));
            dist == 0 || dist == p.size(k)
        })
    })
}

/// Group coordinates by their column vector over the set, identifying a
/// column with its global sign flip. The resulting partition has
/// d <= 2^{|A|-1} classes and every element of A agrees with +/- xi classwise
/// for xi = any element of A (so A is compatible with the result paired with
/// any member of its own flip orbit).
///
/// Classes are ordered by first occurrence, so the output is deterministic.
pub fn build_partition_from_set(a: &SpinSet) -> Result<Partition, CubeError> {
    if a.is_empty() {
        return Err(CubeError::EmptySet);
    }
    let n = a.n();
    let reference = a.get(0);
    let mut order: Vec<Vec<usize>> = Vec::new();
    let mut index: HashMap<Vec<i8>, usize> = HashMap::new();
    for i in 0..n {
        // Column of coordinate i, sign-normalised by the first element.
        let key: Vec<i8> = a
            .iter()
            .map(|sigma| sigma.sign(i) * reference.sign(i))
            .collect();
        match index.get(&key) {
            Some(&k) => order[k].push(i),
            None => {
                index.insert(key, order.len());
                order.push(vec![i]);
            }
        }
    }
    Partition::new(n, order)
}

/// Split every class of `p` into the parts where s_i * xi_i is +1 and -1,
/// keeping only nonempty parts. Preserves classwise sign-constancy of any
/// configuration that had it (so compatibility with xi is preserved) and
/// makes `s` itself compatible. The class count at most doubles.
pub fn refine_partition_for_point(
    p: &Partition,
    xi: &SpinConfig,
    s: &SpinConfig,
) -> Result<Partition, CubeError> {
    if p.n() != s.len() || p.n() != xi.len() {
        return Err(CubeError::DimensionMismatch(format!(
            "partition over {} coordinates, point over {}",
            p.n(),
            s.len()
        )));
    }
    let mut classes: Vec<Vec<usize>> = Vec::with_capacity(2 * p.d());
    for class in p.classes() {
        let (agree, disagree): (Vec<usize>, Vec<usize>) = class
            .iter()
            .partition(|&&i| s.sign(i) == xi.sign(i));
        if !agree.is_empty() {
            classes.push(agree);
        }
        if !disagree.is_empty() {
            classes.push(disagree);
        }
    }
    Partition::new(p.n(), classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(configs: &[&str]) -> SpinSet {
        SpinSet::from_configs(configs.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn lump_counts_disagreements() {
        let p: Partition = "2,2".parse().unwrap();
        let xi = SpinConfig::all_plus(4);
        let sigma: SpinConfig = "+-+-".parse().unwrap();
        assert_eq!(lump(&p, &xi, &sigma), vec![1, 1]);
        assert_eq!(lump(&p, &xi, &xi), vec![0, 0]);
        assert_eq!(lump(&p, &xi, &xi.negated()), vec![2, 2]);
    }

    #[test]
    fn orbit_size_and_membership() {
        let p: Partition = "2,2".parse().unwrap();
        let xi: SpinConfig = "+-+-".parse().unwrap();
        let orb = orbit(&p, &xi).unwrap();
        assert_eq!(orb.len(), 4);
        assert!(orb.contains(&xi));
        assert!(orb.contains(&xi.negated()));
        let as_set = SpinSet::from_configs(orb.clone()).unwrap();
        assert_eq!(as_set.len(), 4);
        assert!(is_compatible(&p, &xi, &as_set));
    }

    #[test]
    fn trivial_partition_orbit_is_pm_xi() {
        let p = Partition::trivial(5);
        let xi: SpinConfig = "++-+-".parse().unwrap();
        let orb = orbit(&p, &xi).unwrap();
        assert_eq!(orb.len(), 2);
        assert_eq!(orb[0], xi);
        assert_eq!(orb[1], xi.negated());
    }

    #[test]
    fn incompatible_when_partial_disagreement() {
        let p = Partition::trivial(4);
        let xi = SpinConfig::all_plus(4);
        let a = set(&["++-+"]);
        assert!(!is_compatible(&p, &xi, &a));
        let b = set(&["----"]);
        assert!(is_compatible(&p, &xi, &b));
    }

    #[test]
    fn partition_from_antipodal_pair_is_trivial() {
        let xi: SpinConfig = "+-+-+-".parse().unwrap();
        let a = SpinSet::from_configs(vec![xi.clone(), xi.negated()]).unwrap();
        let p = build_partition_from_set(&a).unwrap();
        assert_eq!(p.d(), 1);
        assert!(is_compatible(&p, a.get(0), &a));
    }

    #[test]
    fn partition_from_two_element_set() {
        let a = set(&["++++", "++--"]);
        let p = build_partition_from_set(&a).unwrap();
        assert_eq!(p.classes(), &[vec![0, 1], vec![2, 3]]);
        assert!(is_compatible(&p, a.get(0), &a));
    }

    #[test]
    fn singleton_gives_trivial_partition() {
        let a = set(&["+-+-"]);
        let p = build_partition_from_set(&a).unwrap();
        assert_eq!(p.d(), 1);
    }

    #[test]
    fn refine_splits_by_sign_pattern() {
        let p = Partition::trivial(4);
        let xi = SpinConfig::all_plus(4);
        let s: SpinConfig = "++--".parse().unwrap();
        let r = refine_partition_for_point(&p, &xi, &s).unwrap();
        assert_eq!(r.classes(), &[vec![0, 1], vec![2, 3]]);
        let single = SpinSet::from_configs(vec![s]).unwrap();
        assert!(is_compatible(&r, &xi, &single));
    }

    #[test]
    fn refine_keeps_compatible_point_unsplit() {
        let p: Partition = "2,2".parse().unwrap();
        let xi = SpinConfig::all_plus(4);
        let s: SpinConfig = "--++".parse().unwrap();
        let r = refine_partition_for_point(&p, &xi, &s).unwrap();
        assert_eq!(r.d(), p.d());
        assert_eq!(r.classes(), p.classes());
    }
}
