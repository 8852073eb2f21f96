use crate::{CubeError, SpinConfig};

/// Separation threshold used by the well-separation hypothesis.
pub const DEFAULT_H_THRESHOLD: usize = 3;

/// A finite set of hypercube configurations of a common dimension, stored in
/// canonical sorted order (by packed representation) without duplicates, so
/// iteration order and reports are deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinSet {
    n: usize,
    configs: Vec<SpinConfig>,
}

impl SpinSet {
    pub fn from_configs(mut configs: Vec<SpinConfig>) -> Result<Self, CubeError> {
        let n = match configs.first() {
            Some(c) => c.len(),
            None => return Err(CubeError::EmptySet),
        };
        if configs.iter().any(|c| c.len() != n) {
            return Err(CubeError::DimensionMismatch(
                "set elements must share one dimension".into(),
            ));
        }
        configs.sort_unstable();
        configs.dedup();
        Ok(SpinSet { n, configs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn get(&self, i: usize) -> &SpinConfig {
        &self.configs[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &SpinConfig> {
        self.configs.iter()
    }

    pub fn contains(&self, c: &SpinConfig) -> bool {
        self.configs.binary_search(c).is_ok()
    }

    /// Set with one element removed (by value). Errors if that would empty it.
    pub fn without(&self, c: &SpinConfig) -> Result<SpinSet, CubeError> {
        let configs: Vec<SpinConfig> =
            self.configs.iter().filter(|x| *x != c).cloned().collect();
        SpinSet::from_configs(configs)
    }
}

/// min over a in A of Dist(sigma, a); usize::MAX for an empty iterator never
/// occurs because SpinSet is nonempty.
pub fn dist_to_set(sigma: &SpinConfig, a: &SpinSet) -> usize {
    a.iter()
        .map(|x| sigma.hamming_dist(x))
        .min()
        .expect("SpinSet is nonempty")
}

/// Well-separation with explicit threshold: every element of A is at Hamming
/// distance strictly greater than `threshold` from the rest of A. Vacuously
/// true for |A| <= 1.
pub fn hypothesis_h_with(a: &SpinSet, threshold: usize) -> bool {
    if a.len() <= 1 {
        return true;
    }
    for (i, sigma) in a.iter().enumerate() {
        let min_other = a
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, x)| sigma.hamming_dist(x))
            .min()
            .expect("|A| >= 2");
        if min_other <= threshold {
            return false;
        }
    }
    true
}

/// Well-separation at the default threshold (pairwise distance > 3).
pub fn hypothesis_h(a: &SpinSet) -> bool {
    hypothesis_h_with(a, DEFAULT_H_THRESHOLD)
}
