use crate::BoundsError;
use lumped::{LumpedChain, LumpedPoint};

/// Which route produced the upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirichletBranch {
    /// All pairwise distances in J plus x exceed 3: two-parameter test
    /// function optimized exactly.
    Separated,
    /// Separation fails but x is itself a corner: coarse bound, kept to
    /// leading order (its quadratic remainder is unquantified).
    CornerFallback,
    /// x corner, target the grid origin: bound transported from the
    /// origin-to-corner problem by reversibility.
    ReversedToOrigin,
}

/// Upper bound on the escape probability from x to the corner family J,
/// with the measure-ratio coefficients that enter it.
#[derive(Clone, Debug)]
pub struct DirichletBound {
    pub value: f64,
    pub branch: DirichletBranch,
    /// Q(J)/Q(x).
    pub alpha: f64,
    /// Q(one-step sphere of x)/Q(x) - 1.
    pub beta: f64,
    /// Fraction of x's neighbors lying in J.
    pub delta: f64,
}

fn measure_ratio_sum(chain: &LumpedChain, points: &[LumpedPoint], x: &LumpedPoint) -> f64 {
    let ln_qx = chain.ln_measure(x);
    points
        .iter()
        .map(|p| (chain.ln_measure(p) - ln_qx).exp())
        .sum()
}

fn min_pairwise_separation(chain: &LumpedChain, family: &[&LumpedPoint]) -> usize {
    let mut best = usize::MAX;
    for (i, a) in family.iter().enumerate() {
        for b in family.iter().skip(i + 1) {
            best = best.min(chain.graph_dist(a, b));
        }
    }
    best
}

fn separated_bound(alpha: f64, beta: f64, n: f64) -> f64 {
    let a = alpha * (1.0 - 1.0 / n);
    a / (1.0 + a * (1.0 + 1.0 / beta))
}

/// Upper bound on P(escape from x reaches J before returning to x) for a
/// family J of corners (or the single origin point, handled by
/// reversibility). Chooses the sharp two-parameter bound when every pair in
/// J plus x is more than 3 apart, and the coarse corner bound otherwise.
pub fn dirichlet_upper_bound(
    chain: &LumpedChain,
    x: &LumpedPoint,
    j: &[LumpedPoint],
) -> Result<DirichletBound, BoundsError> {
    if j.is_empty() {
        return Err(BoundsError::BadParams("empty target family".into()));
    }
    if j.contains(x) {
        return Err(BoundsError::BadParams(
            "start point belongs to the target family".into(),
        ));
    }
    let origin = chain.origin();
    let targets_origin = j.len() == 1 && &j[0] == origin;
    if targets_origin {
        if !chain.is_vertex(x) {
            return Err(BoundsError::Precondition(
                "origin target is only bounded from a corner start".into(),
            ));
        }
        // Reversibility: Q(x) P(x -> 0 before return) = Q(0) P(0 -> x before
        // return), so transport the origin-start bound.
        let inner = dirichlet_upper_bound(chain, origin, &[x.clone()])?;
        let ratio = (chain.ln_measure(origin) - chain.ln_measure(x)).exp();
        return Ok(DirichletBound {
            value: (ratio * inner.value).min(1.0),
            branch: DirichletBranch::ReversedToOrigin,
            alpha: inner.alpha,
            beta: inner.beta,
            delta: inner.delta,
        });
    }
    if let Some(bad) = j.iter().find(|p| !chain.is_vertex(p)) {
        return Err(BoundsError::BadParams(format!(
            "target family member {bad} is neither a corner nor the bare origin"
        )));
    }

    let n = chain.n() as f64;
    let neighbors = chain.neighbors(x);
    let alpha = measure_ratio_sum(chain, j, x);
    let beta = neighbors
        .iter()
        .map(|nb| (chain.ln_measure(&nb.point) - chain.ln_measure(x)).exp())
        .sum::<f64>()
        - 1.0;
    let delta = neighbors
        .iter()
        .filter(|nb| j.contains(&nb.point))
        .count() as f64
        / n;

    let mut family: Vec<&LumpedPoint> = j.iter().collect();
    family.push(x);
    let separated = min_pairwise_separation(chain, &family) > 3;

    if separated {
        Ok(DirichletBound {
            value: separated_bound(alpha, beta, n),
            branch: DirichletBranch::Separated,
            alpha,
            beta,
            delta,
        })
    } else if chain.is_vertex(x) {
        // Leading order only: the dropped remainder is O(delta^2/alpha) and
        // delta/alpha <= 1/N for corner starts.
        let value = (alpha / (1.0 + alpha)) * (1.0 + 2.0 * delta / (1.0 + alpha));
        Ok(DirichletBound {
            value: value.min(1.0),
            branch: DirichletBranch::CornerFallback,
            alpha,
            beta,
            delta,
        })
    } else {
        Err(BoundsError::Precondition(
            "family not separated and start is not a corner: no bound applies".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn chain_1d(n: usize) -> LumpedChain {
        LumpedChain::from_sizes(&[n]).unwrap()
    }

    fn point(counts: &[u32]) -> LumpedPoint {
        LumpedPoint::new(counts.to_vec())
    }

    #[test]
    fn corner_start_coefficients() {
        // Corner x: every corner has the same measure so alpha = |J|, and
        // the one-step sphere mass is N times the corner mass so beta = N-1.
        let chain = LumpedChain::from_sizes(&[4, 4]).unwrap();
        let x = point(&[0, 0]);
        let j = vec![point(&[4, 4])];
        let b = dirichlet_upper_bound(&chain, &x, &j).unwrap();
        assert_relative_eq!(b.alpha, 1.0, max_relative = 1e-12);
        assert_relative_eq!(b.beta, 7.0, max_relative = 1e-12);
        assert_eq!(b.branch, DirichletBranch::Separated);
        // dist(x, J) = 8 > 3, so the separated branch with alpha = 1:
        // value = (7/8)/(1 + (7/8)(8/7)) = 7/16.
        assert_relative_eq!(b.value, 7.0 / 16.0, max_relative = 1e-12);
    }

    #[test]
    fn origin_start_small_alpha() {
        let chain = chain_1d(64);
        let x = point(&[32]);
        let j = vec![point(&[0])];
        let b = dirichlet_upper_bound(&chain, &x, &j).unwrap();
        assert_eq!(b.branch, DirichletBranch::Separated);
        // alpha = 1/C(64,32); bound collapses to alpha(1 - 1/N) (1 + tiny).
        let alpha = (-chain.ln_measure(&x) - 64.0 * std::f64::consts::LN_2).exp();
        assert_relative_eq!(b.alpha, alpha, max_relative = 1e-10);
        assert_relative_eq!(b.value, alpha * (63.0 / 64.0), max_relative = 1e-6);
    }

    #[test]
    fn corner_to_origin_by_reversibility() {
        let chain = chain_1d(64);
        let x = point(&[0]);
        let j = vec![point(&[32])];
        let b = dirichlet_upper_bound(&chain, &x, &j).unwrap();
        assert_eq!(b.branch, DirichletBranch::ReversedToOrigin);
        // Transport cancels the measure ratio: value ~ (1 - 1/N).
        assert!(b.value <= 1.0);
        assert!((b.value - 63.0 / 64.0).abs() < 1e-3, "value {}", b.value);
    }

    #[test]
    fn close_corners_use_fallback() {
        // Two corners at distance 2: separation fails, x is a corner.
        let chain = LumpedChain::from_sizes(&[1, 1, 6]).unwrap();
        let x = point(&[0, 0, 0]);
        let j = vec![point(&[1, 1, 0])];
        let b = dirichlet_upper_bound(&chain, &x, &j).unwrap();
        assert_eq!(b.branch, DirichletBranch::CornerFallback);
        assert_relative_eq!(b.alpha, 1.0, max_relative = 1e-12);
        // No shared neighbors between corners two apart on distinct axes.
        assert_relative_eq!(b.delta, 0.0);
        assert_relative_eq!(b.value, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_families() {
        let chain = chain_1d(8);
        let x = point(&[4]);
        assert!(dirichlet_upper_bound(&chain, &x, &[]).is_err());
        assert!(dirichlet_upper_bound(&chain, &x, &[point(&[4])]).is_err());
        // Interior target that is not the bare origin.
        assert!(dirichlet_upper_bound(&chain, &x, &[point(&[3])]).is_err());
        // Origin target from a non-corner start.
        assert!(dirichlet_upper_bound(&chain, &point(&[3]), &[point(&[4])]).is_err());
        // Well separated two-corner family from the middle is fine.
        let j = vec![point(&[0]), point(&[8])];
        assert!(dirichlet_upper_bound(&chain, &point(&[4]), &j).is_ok());
        let close = LumpedChain::from_sizes(&[2, 6]).unwrap();
        let jj = vec![point(&[0, 0]), point(&[2, 0])];
        assert!(dirichlet_upper_bound(&close, &point(&[1, 3]), &jj).is_err());
    }
}
