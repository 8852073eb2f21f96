use crate::comb::ln_binomial;
use crate::{LumpedError, LumpedPoint};
use cube::{Partition, SpinConfig};
use num_bigint::BigUint;

/// One admissible move: the count of a single class changes by one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub class: usize,
    /// true: n_k -> n_k + 1 (one more disagreement with the reference).
    pub up: bool,
}

#[derive(Clone, Debug)]
pub struct Neighbor {
    pub point: LumpedPoint,
    pub rate: f64,
}

/// The collapsed chain induced by a coordinate partition: states are count
/// vectors (n_1, ..., n_d) with 0 <= n_k <= |Lambda_k|, one-step moves change
/// a single count by one, and the pushforward of the uniform measure is the
/// product of scaled binomials.
#[derive(Clone, Debug)]
pub struct LumpedChain {
    partition: Partition,
    sizes: Vec<u32>,
    n: u32,
    state_count: u128,
    origin: LumpedPoint,
    /// ln C(|Lambda_k|, j) per class, indexed [k][j].
    ln_binom: Vec<Vec<f64>>,
}

impl LumpedChain {
    pub fn new(partition: Partition) -> Self {
        let sizes: Vec<u32> = partition.sizes().iter().map(|&s| s as u32).collect();
        let n = partition.n() as u32;
        let state_count = sizes
            .iter()
            .fold(1u128, |acc, &m| acc * (m as u128 + 1));
        let origin = LumpedPoint::new(sizes.iter().map(|&m| m / 2).collect());
        let ln_binom = sizes
            .iter()
            .map(|&m| {
                (0..=m as usize)
                    .map(|j| ln_binomial(m as usize, j))
                    .collect()
            })
            .collect();
        LumpedChain {
            partition,
            sizes,
            n,
            state_count,
            origin,
            ln_binom,
        }
    }

    /// Consecutive-block partition with the given class sizes.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, LumpedError> {
        let p = Partition::from_sizes(sizes)
            .map_err(|e| LumpedError::DimensionMismatch(e.to_string()))?;
        Ok(LumpedChain::new(p))
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn state_count(&self) -> u128 {
        self.state_count
    }

    pub fn contains(&self, x: &LumpedPoint) -> bool {
        x.d() == self.d()
            && x.counts()
                .iter()
                .zip(self.sizes.iter())
                .all(|(&n, &m)| n <= m)
    }

    fn check_point(&self, x: &LumpedPoint) -> Result<(), LumpedError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(LumpedError::BadPoint(format!(
                "{x} outside grid with sizes {:?}",
                self.sizes
            )))
        }
    }

    /// Number of configurations collapsing to x: prod_k C(|Lambda_k|, n_k).
    pub fn multiplicity(&self, x: &LumpedPoint) -> BigUint {
        assert!(self.contains(x));
        let mut acc = BigUint::from(1u32);
        for (k, &n_k) in x.counts().iter().enumerate() {
            acc *= binomial_big(self.sizes[k] as usize, n_k as usize);
        }
        acc
    }

    /// ln of the multiplicity.
    pub fn ln_multiplicity(&self, x: &LumpedPoint) -> f64 {
        assert!(self.contains(x));
        x.counts()
            .iter()
            .enumerate()
            .map(|(k, &n_k)| self.ln_binom[k][n_k as usize])
            .sum()
    }

    /// ln of the reversible measure Q(x) = multiplicity(x) / 2^N.
    pub fn ln_measure(&self, x: &LumpedPoint) -> f64 {
        self.ln_multiplicity(x) - self.n as f64 * std::f64::consts::LN_2
    }

    /// Q(x); underflows to 0 for large N, use `ln_measure` at scale.
    pub fn measure(&self, x: &LumpedPoint) -> f64 {
        self.ln_measure(x).exp()
    }

    /// One-step rate of the move, as an exact integer ratio over N:
    /// (|Lambda_k| - n_k)/N upward, n_k/N downward. Zero when the move leaves
    /// the grid.
    pub fn rate(&self, x: &LumpedPoint, mv: Move) -> f64 {
        assert!(self.contains(x));
        let n_k = x.count(mv.class);
        let m_k = self.sizes[mv.class];
        let numer = if mv.up { m_k - n_k } else { n_k };
        numer as f64 / self.n as f64
    }

    /// Apply a move; None when it leaves the grid.
    pub fn step(&self, x: &LumpedPoint, mv: Move) -> Option<LumpedPoint> {
        let n_k = x.count(mv.class);
        let m_k = self.sizes[mv.class];
        if mv.up {
            (n_k < m_k).then(|| x.with_count(mv.class, n_k + 1))
        } else {
            (n_k > 0).then(|| x.with_count(mv.class, n_k - 1))
        }
    }

    /// All admissible neighbours with their positive rates; the rates sum to
    /// one. A vertex has exactly d neighbours.
    pub fn neighbors(&self, x: &LumpedPoint) -> Vec<Neighbor> {
        assert!(self.contains(x));
        let mut out = Vec::with_capacity(2 * self.d());
        for class in 0..self.d() {
            for up in [false, true] {
                let mv = Move { class, up };
                let rate = self.rate(x, mv);
                if rate > 0.0 {
                    let point = self.step(x, mv).expect("positive rate implies valid move");
                    out.push(Neighbor { point, rate });
                }
            }
        }
        out
    }

    /// L1 distance on the grid.
    pub fn graph_dist(&self, x: &LumpedPoint, y: &LumpedPoint) -> usize {
        x.graph_dist(y)
    }

    /// Count-maximising state; ties inside a class break downward (floor).
    pub fn origin(&self) -> &LumpedPoint {
        &self.origin
    }

    /// True when every count is 0 or the full class size (image of a
    /// configuration in the reference's flip orbit).
    pub fn is_vertex(&self, x: &LumpedPoint) -> bool {
        self.contains(x)
            && x.counts()
                .iter()
                .zip(self.sizes.iter())
                .all(|(&n, &m)| n == 0 || n == m)
    }

    /// The vertex whose k-th coordinate is 0 when signs[k] is +1 (agreement
    /// with the reference on the whole class) and |Lambda_k| otherwise.
    pub fn vertex_from_signs(&self, signs: &[i8]) -> Result<LumpedPoint, LumpedError> {
        if signs.len() != self.d() {
            return Err(LumpedError::DimensionMismatch(format!(
                "{} signs for {} classes",
                signs.len(),
                self.d()
            )));
        }
        let counts = signs
            .iter()
            .zip(self.sizes.iter())
            .map(|(&s, &m)| if s == 1 { 0 } else { m })
            .collect();
        Ok(LumpedPoint::new(counts))
    }

    /// All 2^d vertices (guarded: 2^d states are materialised).
    pub fn vertices(&self) -> Result<Vec<LumpedPoint>, LumpedError> {
        let d = self.d();
        if d > 20 {
            return Err(LumpedError::StateSpaceTooLarge {
                states: 1u128 << d,
                cap: 1 << 20,
            });
        }
        Ok((0u32..1 << d)
            .map(|bits| {
                LumpedPoint::new(
                    (0..d)
                        .map(|k| if bits >> k & 1 == 1 { self.sizes[k] } else { 0 })
                        .collect(),
                )
            })
            .collect())
    }

    /// Classwise mirror image (n_k -> |Lambda_k| - n_k).
    pub fn antipode(&self, x: &LumpedPoint) -> LumpedPoint {
        assert!(self.contains(x));
        LumpedPoint::new(
            x.counts()
                .iter()
                .zip(self.sizes.iter())
                .map(|(&n, &m)| m - n)
                .collect(),
        )
    }

    /// Exact size of the sphere of radius m around x; None if it exceeds
    /// u128. For a vertex this counts compositions of m into d parts bounded
    /// by the class sizes, independently of which vertex.
    pub fn sphere_size(&self, x: &LumpedPoint, m: usize) -> Option<u128> {
        assert!(self.contains(x));
        let mut dp: Vec<u128> = vec![0; m + 1];
        dp[0] = 1;
        for (k, &x_k) in x.counts().iter().enumerate() {
            let m_k = self.sizes[k];
            let mut next: Vec<u128> = vec![0; m + 1];
            for t in 0..=m {
                let ways: u128 = if t == 0 {
                    1
                } else {
                    let down = x_k as usize >= t;
                    let up = x_k as usize + t <= m_k as usize;
                    down as u128 + up as u128
                };
                if ways == 0 {
                    continue;
                }
                for prev in 0..=m - t {
                    if dp[prev] != 0 {
                        let add = dp[prev].checked_mul(ways)?;
                        next[prev + t] = next[prev + t].checked_add(add)?;
                    }
                }
            }
            dp = next;
        }
        Some(dp[m])
    }

    /// ln of the sphere size, computed by the same DP in log space; handles
    /// counts far beyond u128. Returns -inf for empty spheres.
    pub fn ln_sphere_size(&self, x: &LumpedPoint, m: usize) -> f64 {
        assert!(self.contains(x));
        let mut dp: Vec<f64> = vec![f64::NEG_INFINITY; m + 1];
        dp[0] = 0.0;
        for (k, &x_k) in x.counts().iter().enumerate() {
            let m_k = self.sizes[k];
            let mut next: Vec<f64> = vec![f64::NEG_INFINITY; m + 1];
            for t in 0..=m {
                let ways: f64 = if t == 0 {
                    1.0
                } else {
                    let down = x_k as usize >= t;
                    let up = x_k as usize + t <= m_k as usize;
                    (down as u32 + up as u32) as f64
                };
                if ways == 0.0 {
                    continue;
                }
                let ln_ways = ways.ln();
                for prev in 0..=m - t {
                    if dp[prev] > f64::NEG_INFINITY {
                        let cand = dp[prev] + ln_ways;
                        next[prev + t] = ln_add_exp(next[prev + t], cand);
                    }
                }
            }
            dp = next;
        }
        dp[m]
    }

    /// Large-deviation style potential -ln(multiplicity)/N + ln 2; zero-ish
    /// at the origin, ln 2 at vertices.
    pub fn potential_psi(&self, x: &LumpedPoint) -> f64 {
        std::f64::consts::LN_2 - self.ln_multiplicity(x) / self.n as f64
    }

    /// Probability that an n-step trajectory from a vertex x ends at z going
    /// only through admissible moves that realise the L1 displacement:
    /// n!/N^n * Q(z)/Q(x) for z on the radius-n sphere around x.
    pub fn n_step_vertex_prob(
        &self,
        x: &LumpedPoint,
        z: &LumpedPoint,
        n: usize,
    ) -> Result<f64, LumpedError> {
        self.check_point(x)?;
        self.check_point(z)?;
        if !self.is_vertex(x) {
            return Err(LumpedError::NotAVertex(x.to_string()));
        }
        let dist = self.graph_dist(x, z);
        if n == 0 {
            return if dist == 0 {
                Ok(1.0)
            } else {
                Err(LumpedError::BadStepCount(
                    "0 steps cannot move off the start".into(),
                ))
            };
        }
        if n != dist {
            return Err(LumpedError::BadStepCount(format!(
                "point {z} is at distance {dist} from {x}, not {n}"
            )));
        }
        if n > self.n as usize {
            return Err(LumpedError::BadStepCount(format!(
                "{n} exceeds the dimension {}",
                self.n
            )));
        }
        let ln = crate::comb::ln_factorial(n) - n as f64 * (self.n as f64).ln()
            + self.ln_measure(z)
            - self.ln_measure(x);
        Ok(ln.exp())
    }

    /// Fraction of coordinates living in classes smaller than 10 ln N, and
    /// whether that fraction is at most 1/2.
    pub fn log_regularity(&self) -> (bool, f64) {
        let cutoff = 10.0 * (self.n as f64).ln();
        let small: u32 = self
            .sizes
            .iter()
            .filter(|&&m| (m as f64) < cutoff)
            .sum();
        let rate = small as f64 / self.n as f64;
        (rate <= 0.5, rate)
    }

    pub fn is_log_regular(&self) -> bool {
        self.log_regularity().0
    }

    /// Mixed-radix linear index (row-major over classes). Requires the state
    /// count to fit in u64.
    pub fn index(&self, x: &LumpedPoint) -> u64 {
        assert!(self.contains(x));
        assert!(
            self.state_count <= u64::MAX as u128,
            "state space too large for linear indexing"
        );
        let mut idx: u64 = 0;
        for (k, &n_k) in x.counts().iter().enumerate() {
            idx = idx * (self.sizes[k] as u64 + 1) + n_k as u64;
        }
        idx
    }

    /// Inverse of `index`.
    pub fn point_at(&self, mut idx: u64) -> LumpedPoint {
        let mut counts = vec![0u32; self.d()];
        for k in (0..self.d()).rev() {
            let radix = self.sizes[k] as u64 + 1;
            counts[k] = (idx % radix) as u32;
            idx /= radix;
        }
        assert_eq!(idx, 0, "index out of range");
        LumpedPoint::new(counts)
    }

    /// Iterate every state in index order.
    pub fn states(&self) -> impl Iterator<Item = LumpedPoint> + '_ {
        assert!(
            self.state_count <= u64::MAX as u128,
            "state space too large to enumerate"
        );
        (0..self.state_count as u64).map(move |i| self.point_at(i))
    }

    /// Image of a hypercube configuration under the count map against xi.
    pub fn image(&self, xi: &SpinConfig, sigma: &SpinConfig) -> Result<LumpedPoint, LumpedError> {
        if xi.len() != self.partition.n() || sigma.len() != self.partition.n() {
            return Err(LumpedError::DimensionMismatch(format!(
                "configuration length {} vs partition over {}",
                sigma.len(),
                self.partition.n()
            )));
        }
        let counts = cube::lump(&self.partition, xi, sigma)
            .into_iter()
            .map(|c| c as u32)
            .collect();
        Ok(LumpedPoint::new(counts))
    }
}

fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn chain(sizes: &[usize]) -> LumpedChain {
        LumpedChain::from_sizes(sizes).unwrap()
    }

    #[test]
    fn multiplicity_example() {
        let c = chain(&[2, 2]);
        let x = LumpedPoint::new(vec![1, 1]);
        assert_eq!(c.multiplicity(&x), BigUint::from(4u32));
        assert_relative_eq!(c.ln_multiplicity(&x), 4.0f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(c.measure(&x), 0.25, max_relative = 1e-14);
    }

    #[test]
    fn multiplicities_sum_to_two_to_the_n() {
        let c = chain(&[3, 2, 4]);
        let total: BigUint = c.states().map(|x| c.multiplicity(&x)).sum();
        assert_eq!(total, BigUint::from(1u32) << 9);
    }

    #[test]
    fn vertex_rates_are_half_class_fraction() {
        // Sizes (2,2), N = 4, at the all-agree vertex both admissible moves
        // have rate (|Lambda_k| - 0)/N = 1/2.
        let c = chain(&[2, 2]);
        let x = LumpedPoint::new(vec![0, 0]);
        let nb = c.neighbors(&x);
        assert_eq!(nb.len(), 2);
        for n in &nb {
            assert_abs_diff_eq!(n.rate, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn rates_sum_to_one_everywhere() {
        let c = chain(&[3, 5, 2]);
        for x in c.states() {
            let total: f64 = c.neighbors(&x).iter().map(|n| n.rate).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn detailed_balance_exhaustive() {
        let c = chain(&[4, 3, 2]);
        for x in c.states() {
            for nb in c.neighbors(&x) {
                let forward = c.measure(&x) * nb.rate;
                let back_rate: f64 = c
                    .neighbors(&nb.point)
                    .iter()
                    .filter(|b| b.point == x)
                    .map(|b| b.rate)
                    .sum();
                let backward = c.measure(&nb.point) * back_rate;
                assert_relative_eq!(forward, backward, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn sphere_sizes_example_and_total() {
        let c = chain(&[2, 2]);
        let corner = LumpedPoint::new(vec![0, 0]);
        assert_eq!(c.sphere_size(&corner, 2), Some(3));
        let total: u128 = (0..=4).map(|m| c.sphere_size(&corner, m).unwrap()).sum();
        assert_eq!(total, c.state_count());
    }

    #[test]
    fn ln_sphere_matches_exact() {
        let c = chain(&[5, 3, 4]);
        let x = LumpedPoint::new(vec![2, 0, 3]);
        for m in 0..=12 {
            let exact = c.sphere_size(&x, m).unwrap();
            if exact == 0 {
                assert!(c.ln_sphere_size(&x, m).is_infinite());
            } else {
                assert_relative_eq!(
                    c.ln_sphere_size(&x, m).exp(),
                    exact as f64,
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn origin_maximises_measure() {
        let c = chain(&[4, 7]);
        let origin = c.origin().clone();
        let best = c
            .states()
            .max_by(|a, b| {
                c.ln_measure(a)
                    .partial_cmp(&c.ln_measure(b))
                    .unwrap()
                    .then(b.cmp(a))
            })
            .unwrap();
        assert_eq!(c.ln_measure(&origin), c.ln_measure(&best));
        assert_eq!(origin.counts(), &[2, 3]);
    }

    #[test]
    fn psi_at_vertex_is_ln_two() {
        let c = chain(&[3, 5]);
        let v = c.vertex_from_signs(&[1, -1]).unwrap();
        assert_relative_eq!(c.potential_psi(&v), std::f64::consts::LN_2);
        assert!(c.potential_psi(c.origin()) < c.potential_psi(&v));
    }

    #[test]
    fn single_step_prob_is_rate() {
        let c = chain(&[2, 2]);
        let x = LumpedPoint::new(vec![0, 0]);
        let z = LumpedPoint::new(vec![1, 0]);
        let p = c.n_step_vertex_prob(&x, &z, 1).unwrap();
        assert_relative_eq!(p, 0.5, max_relative = 1e-13);
        assert_relative_eq!(c.n_step_vertex_prob(&x, &x, 0).unwrap(), 1.0);
    }

    #[test]
    fn index_round_trip() {
        let c = chain(&[3, 2, 5]);
        for (i, x) in c.states().enumerate() {
            assert_eq!(c.index(&x), i as u64);
            assert_eq!(c.point_at(i as u64), x);
        }
    }

    #[test]
    fn log_regularity_examples() {
        let single = chain(&[100]);
        assert_eq!(single.log_regularity(), (true, 0.0));
        let singles = LumpedChain::new(Partition::singletons(100));
        let (ok, rate) = singles.log_regularity();
        assert!(!ok);
        assert_relative_eq!(rate, 1.0);
    }

    #[test]
    fn image_counts_disagreements() {
        let c = chain(&[2, 2]);
        let xi = SpinConfig::all_plus(4);
        let sigma: cube::SpinConfig = "+---".parse().unwrap();
        let img = c.image(&xi, &sigma).unwrap();
        assert_eq!(img.counts(), &[1, 2]);
    }
}
