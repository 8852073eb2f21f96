use crate::ftable::FTable;
use crate::params::BoundParams;
use crate::BoundsError;
use cube::{is_compatible, Partition, SpinConfig, SpinSet};
use lumped::{LumpedChain, LumpedPoint};

fn ln_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.collect();
    let hi = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + terms.iter().map(|&t| (t - hi).exp()).sum::<f64>().ln()
}

/// Interaction functional of a family of grid points: the worst, over base
/// points, total decay weight of the rest of the family. Zero for at most
/// one point.
pub fn sparseness_u_lumped(chain: &LumpedChain, table: &FTable, points: &[LumpedPoint]) -> f64 {
    sparseness_u_lumped_ln(chain, table, points).exp()
}

/// Log-scale version (the value underflows f64 for large well-separated
/// families).
pub fn sparseness_u_lumped_ln(
    chain: &LumpedChain,
    table: &FTable,
    points: &[LumpedPoint],
) -> f64 {
    if points.len() <= 1 {
        return f64::NEG_INFINITY;
    }
    points
        .iter()
        .enumerate()
        .map(|(i, eta)| {
            ln_sum_exp(points.iter().enumerate().filter(|(j, _)| *j != i).map(
                |(_, other)| {
                    let dist = chain.graph_dist(eta, other);
                    assert!(dist >= 1, "duplicate points in sparseness family");
                    table.ln_f(dist)
                },
            ))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Hypercube-side entry point: requires A compatible with (p, xi), collapses
/// the set and evaluates the grid functional (distances agree exactly for
/// compatible sets).
pub fn sparseness_u(
    a: &SpinSet,
    p: &Partition,
    xi: &SpinConfig,
    params: &BoundParams,
) -> Result<f64, BoundsError> {
    params.validate()?;
    if !is_compatible(p, xi, a) {
        return Err(BoundsError::Precondition(
            "set is not compatible with the partition/reference pair".into(),
        ));
    }
    let chain = LumpedChain::new(p.clone());
    let table = FTable::new(&chain, params);
    let points: Vec<LumpedPoint> = a
        .iter()
        .map(|sigma| chain.image(xi, sigma).expect("dimensions checked"))
        .collect();
    Ok(sparseness_u_lumped(&chain, &table, &points))
}

/// Threshold form: the functional is at most eps.
pub fn is_sparse(
    a: &SpinSet,
    p: &Partition,
    xi: &SpinConfig,
    params: &BoundParams,
    eps: f64,
) -> Result<bool, BoundsError> {
    Ok(sparseness_u(a, p, xi, params)? <= eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn singleton_is_zero() {
        let xi: SpinConfig = "++++++".parse().unwrap();
        let a = SpinSet::from_configs(vec![xi.clone()]).unwrap();
        let p = Partition::trivial(6);
        let u = sparseness_u(&a, &p, &xi, &BoundParams::default()).unwrap();
        assert_eq!(u, 0.0);
    }

    #[test]
    fn antipodal_pair_is_f_of_n() {
        let n = 64usize;
        let xi = SpinConfig::all_plus(n);
        let a = SpinSet::from_configs(vec![xi.clone(), xi.negated()]).unwrap();
        let p = Partition::trivial(n);
        let params = BoundParams::default();
        let u = sparseness_u(&a, &p, &xi, &params).unwrap();
        let chain = LumpedChain::new(p);
        let table = FTable::new(&chain, &params);
        assert_relative_eq!(u, table.f(n), max_relative = 1e-12);
    }

    #[test]
    fn incompatible_set_rejected() {
        let xi = SpinConfig::all_plus(4);
        let sigma: SpinConfig = "++-+".parse().unwrap();
        let a = SpinSet::from_configs(vec![sigma]).unwrap();
        let p = Partition::trivial(4);
        assert!(sparseness_u(&a, &p, &xi, &BoundParams::default()).is_err());
    }

    #[test]
    fn equipartition_vertex_families_decay_geometrically() {
        // Even equipartition at N = 128, d = 2: any family of corners has
        // interaction at most rho^(N/d) for some rho < 1. Measured rho is
        // reported through the assertion message.
        let chain = LumpedChain::from_sizes(&[64, 64]).unwrap();
        let table = FTable::new(&chain, &BoundParams::default());
        let vertices = chain.vertices().unwrap();
        let n_over_d = chain.n() as f64 / chain.d() as f64;
        // Worst case is the full corner family; also try all pairs.
        let mut families: Vec<Vec<LumpedPoint>> = vec![vertices.clone()];
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                families.push(vec![vertices[i].clone(), vertices[j].clone()]);
            }
        }
        for family in &families {
            let ln_u = sparseness_u_lumped_ln(&chain, &table, family);
            let rho = (ln_u / n_over_d).exp();
            assert!(
                rho < 1.0,
                "family of {} corners: measured rho {rho}",
                family.len()
            );
        }
    }

    #[test]
    fn grid_version_maximises_over_base_points() {
        // Three collinear points on a single class: the middle one sees the
        // other two at distance 2 each; an end point sees distances 2 and 4.
        let chain = LumpedChain::from_sizes(&[16]).unwrap();
        let table = FTable::new(&chain, &BoundParams::default());
        let pts = vec![
            LumpedPoint::new(vec![0]),
            LumpedPoint::new(vec![2]),
            LumpedPoint::new(vec![4]),
        ];
        let u = sparseness_u_lumped(&chain, &table, &pts);
        let middle = 2.0 * table.f(2);
        let end = table.f(2) + table.f(4);
        assert_relative_eq!(u, middle.max(end), max_relative = 1e-12);
    }
}
