use std::fmt;

/// A state of the collapsed chain: one disagreement count per class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LumpedPoint {
    counts: Vec<u32>,
}

impl LumpedPoint {
    pub fn new(counts: Vec<u32>) -> Self {
        assert!(!counts.is_empty(), "a point needs at least one class");
        LumpedPoint { counts }
    }

    pub fn d(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, k: usize) -> u32 {
        self.counts[k]
    }

    pub fn with_count(&self, k: usize, v: u32) -> Self {
        let mut c = self.counts.clone();
        c[k] = v;
        LumpedPoint::new(c)
    }

    /// Grid distance: sum over classes of |n_k - m_k|.
    pub fn graph_dist(&self, other: &LumpedPoint) -> usize {
        assert_eq!(self.d(), other.d(), "points from different grids");
        self.counts
            .iter()
            .zip(other.counts.iter())
            .map(|(&a, &b)| (a as i64 - b as i64).unsigned_abs() as usize)
            .sum()
    }

    /// Magnetisation coordinates 1 - 2 n_k / |Lambda_k| for given class sizes.
    pub fn magnetisation(&self, sizes: &[u32]) -> Vec<f64> {
        assert_eq!(self.d(), sizes.len());
        self.counts
            .iter()
            .zip(sizes.iter())
            .map(|(&n, &m)| 1.0 - 2.0 * n as f64 / m as f64)
            .collect()
    }
}

impl fmt::Display for LumpedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LumpedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LumpedPoint{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_distance_is_l1() {
        let a = LumpedPoint::new(vec![0, 3, 5]);
        let b = LumpedPoint::new(vec![2, 3, 1]);
        assert_eq!(a.graph_dist(&b), 6);
        assert_eq!(a.graph_dist(&a), 0);
    }

    #[test]
    fn magnetisation_endpoints() {
        let corner = LumpedPoint::new(vec![0, 4]);
        let m = corner.magnetisation(&[4, 4]);
        assert_eq!(m, vec![1.0, -1.0]);
    }

    #[test]
    fn display_form() {
        assert_eq!(LumpedPoint::new(vec![1, 2]).to_string(), "(1,2)");
    }
}
