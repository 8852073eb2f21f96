//! Worst-case sphere profiles. For a vertex `x` of the lumped grid,
//! `phi_profile` records, for every graph-distance shell around `x`, the
//! largest probability of reaching `x` before the central state. These
//! profiles are the exact building blocks of the pairwise interaction
//! functionals that control how strongly a family of vertices competes for
//! the walk, and the decay table gives a closed-form ceiling for them.

use bounds::{sparseness_u_lumped, FTable};
use lumped::LumpedPoint;

use crate::potential::hit_field;
use crate::view::{ChainView, GridChain};
use crate::SolverError;

/// Shell-by-shell maxima of the probability of hitting the vertex `x`
/// before the central state, indexed by graph distance from `x`. Entry 0 is
/// the trivial value 1; entry `N` is the antipodal shell.
pub fn phi_profile(chain: &GridChain, x: &LumpedPoint) -> Result<Vec<f64>, SolverError> {
    let lumped = chain.chain();
    if !lumped.is_vertex(x) {
        return Err(SolverError::BadInstance(
            "sphere profile needs a vertex base point".into(),
        ));
    }
    let center = chain.state(lumped.origin());
    let base = chain.state(x);
    if base == center {
        return Err(SolverError::BadInstance(
            "base vertex coincides with the central state".into(),
        ));
    }
    let field = hit_field(chain, &[base], &[center])?;
    let mut profile = vec![0.0_f64; lumped.n() as usize + 1];
    for state in 0..chain.len() {
        let shell = lumped.graph_dist(x, &chain.point(state));
        let value = if state == center {
            // The pinned state keeps the strictly-positive-time convention:
            // one step out, then the absorbed field.
            let mut acc = 0.0;
            chain.for_each_neighbor(state, &mut |w, r| acc += r * field[w]);
            acc
        } else {
            field[state]
        };
        profile[shell] = profile[shell].max(value);
    }
    profile[0] = 1.0;
    Ok(profile)
}

/// Single shell value; `phi_profile` amortizes the solve when several radii
/// are needed.
pub fn phi_exact(chain: &GridChain, x: &LumpedPoint, n: usize) -> Result<f64, SolverError> {
    let top = chain.chain().n() as usize;
    if n < 1 || n > top {
        return Err(SolverError::BadInstance(format!(
            "shell radius {n} outside 1..={top}"
        )));
    }
    Ok(phi_profile(chain, x)?[n])
}

/// Exact interaction weight of `y` against the vertex family: the sum over
/// the other members of their sphere-profile value at the distance to `y`.
/// Zero when the family contains nothing besides `y`.
pub fn v_functional(
    chain: &GridChain,
    y: &LumpedPoint,
    family: &[LumpedPoint],
) -> Result<f64, SolverError> {
    let lumped = chain.chain();
    let mut total = 0.0;
    for z in family {
        let dist = lumped.graph_dist(y, z);
        if dist == 0 {
            continue;
        }
        total += phi_profile(chain, z)?[dist];
    }
    Ok(total)
}

/// Closed-form counterpart of [`v_functional`] with the decay table in
/// place of the exact profiles.
pub fn u_functional(
    table: &FTable,
    chain: &GridChain,
    y: &LumpedPoint,
    family: &[LumpedPoint],
) -> f64 {
    let lumped = chain.chain();
    family
        .iter()
        .map(|z| lumped.graph_dist(y, z))
        .filter(|&dist| dist > 0)
        .map(|dist| table.f(dist))
        .sum()
}

/// Worst interaction weight inside the family: the largest
/// [`v_functional`] value taken over its own members. Profiles are solved
/// once per member.
pub fn script_v(chain: &GridChain, family: &[LumpedPoint]) -> Result<f64, SolverError> {
    if family.len() <= 1 {
        return Ok(0.0);
    }
    let lumped = chain.chain();
    let profiles = family
        .iter()
        .map(|z| phi_profile(chain, z))
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst = 0.0_f64;
    for y in family {
        let mut total = 0.0;
        for (z, profile) in family.iter().zip(&profiles) {
            let dist = lumped.graph_dist(y, z);
            if dist > 0 {
                total += profile[dist];
            }
        }
        worst = worst.max(total);
    }
    Ok(worst)
}

/// Closed-form counterpart of [`script_v`]; delegates to the sparseness
/// functional so both callers share one definition.
pub fn script_u(table: &FTable, chain: &GridChain, family: &[LumpedPoint]) -> f64 {
    sparseness_u_lumped(chain.chain(), table, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{hit_prob, HitSpec};
    use approx::assert_relative_eq;
    use bounds::BoundParams;

    fn grid(sizes: &[usize]) -> GridChain {
        GridChain::from_sizes(sizes).unwrap()
    }

    fn corner(chain: &GridChain, signs: &[i8]) -> LumpedPoint {
        chain.chain().vertex_from_signs(signs).unwrap()
    }

    #[test]
    fn shell_maxima_are_nonincreasing_and_smallest_at_the_antipode() {
        for sizes in [&[12_usize][..], &[5, 7][..], &[4, 4, 4][..]] {
            let chain = grid(sizes);
            let x = corner(&chain, &vec![-1; sizes.len()]);
            let profile = phi_profile(&chain, &x).unwrap();
            let n = chain.chain().n() as usize;
            assert_eq!(profile.len(), n + 1);
            assert_eq!(profile[0], 1.0);
            for shell in 1..n {
                assert!(
                    profile[shell + 1] <= profile[shell] * (1.0 + 1e-12),
                    "profile rises from shell {shell} on {sizes:?}: {} -> {}",
                    profile[shell],
                    profile[shell + 1]
                );
            }
            let antipode = profile[n];
            if sizes.len() == 1 {
                // One class: the center separates the halves, so shells
                // beyond it are unreachable without touching it.
                assert_eq!(antipode, 0.0);
            } else {
                assert!(antipode > 0.0);
            }
            assert!(profile[1..].iter().all(|&v| v >= antipode));
        }
    }

    #[test]
    fn opposite_corners_share_one_profile_on_even_grids() {
        // Flipping each coordinate is an automorphism that fixes the center
        // when every side is even, so the two corner profiles coincide.
        let chain = grid(&[6, 8]);
        let a = phi_profile(&chain, &corner(&chain, &[-1, -1])).unwrap();
        let b = phi_profile(&chain, &corner(&chain, &[1, 1])).unwrap();
        for (&va, &vb) in a.iter().zip(&b) {
            assert_relative_eq!(va, vb, max_relative = 1e-11);
        }
    }

    #[test]
    fn profiles_reject_non_vertex_base_points() {
        let chain = grid(&[8]);
        let center = chain.chain().origin().clone();
        assert!(phi_profile(&chain, &center).is_err());
        let x = corner(&chain, &[-1]);
        assert!(phi_exact(&chain, &x, 0).is_err());
        assert!(phi_exact(&chain, &x, 9).is_err());
        assert_relative_eq!(phi_exact(&chain, &x, 8).unwrap(), phi_profile(&chain, &x).unwrap()[8]);
    }

    #[test]
    fn decay_table_dominates_the_profile_on_regular_geometries() {
        for sizes in [&[64_usize][..], &[64, 64][..], &[100, 28][..]] {
            let chain = grid(sizes);
            assert!(chain.chain().is_log_regular(), "{sizes:?} not log-regular");
            let table = FTable::new(chain.chain(), &BoundParams::default());
            let x = corner(&chain, &vec![-1; sizes.len()]);
            let profile = phi_profile(&chain, &x).unwrap();
            for shell in 1..=chain.chain().n() as usize {
                assert!(
                    profile[shell] <= table.f(shell),
                    "shell {shell} on {sizes:?}: {} > {}",
                    profile[shell],
                    table.f(shell)
                );
            }
        }
    }

    #[test]
    fn interaction_weight_bounds_the_competing_hit_probability() {
        // Reaching any member of the family before the center is at most the
        // sum of the single-member probabilities, each capped by its shell
        // maximum.
        let chain = grid(&[12]);
        let family = vec![corner(&chain, &[-1]), corner(&chain, &[1])];
        let targets: Vec<usize> = family.iter().map(|p| chain.state(p)).collect();
        let center = chain.state(chain.chain().origin());
        for start in [1_u64, 3, 5, 7, 11] {
            let y = chain.chain().point_at(start);
            let y_state = chain.state(&y);
            if targets.contains(&y_state) || y_state == center {
                continue;
            }
            let reach = hit_prob(
                &chain,
                &HitSpec {
                    start: y_state,
                    targets: &targets,
                    taboo: &[center],
                },
            )
            .unwrap();
            let weight = v_functional(&chain, &y, &family).unwrap();
            assert!(
                reach <= weight + 1e-12,
                "start {start}: reach {reach} exceeds weight {weight}"
            );
        }
    }

    #[test]
    fn exact_weights_stay_below_their_closed_form_ceiling() {
        let chain = grid(&[64]);
        let table = FTable::new(chain.chain(), &BoundParams::default());
        let family = vec![corner(&chain, &[-1]), corner(&chain, &[1])];
        for start in [0_u64, 10, 32, 55] {
            let y = chain.chain().point_at(start);
            let v = v_functional(&chain, &y, &family).unwrap();
            let u = u_functional(&table, &chain, &y, &family);
            assert!(v <= u, "start {start}: exact {v} exceeds ceiling {u}");
        }
        let sv = script_v(&chain, &family).unwrap();
        let su = script_u(&table, &chain, &family);
        assert!(sv <= su);
        // Opposite corners of a one-class geometry cannot interact at all:
        // every connecting path crosses the center.
        assert_eq!(sv, 0.0);
    }

    #[test]
    fn family_maxima_match_their_pointwise_definitions() {
        let chain = grid(&[10, 8]);
        let table = FTable::new(chain.chain(), &BoundParams::default());
        let family = vec![
            corner(&chain, &[-1, -1]),
            corner(&chain, &[1, -1]),
            corner(&chain, &[1, 1]),
        ];
        let sv = script_v(&chain, &family).unwrap();
        let best_v = family
            .iter()
            .map(|y| v_functional(&chain, y, &family).unwrap())
            .fold(0.0_f64, f64::max);
        assert_relative_eq!(sv, best_v, max_relative = 1e-12);
        assert!(sv > 0.0, "two classes leave room to pass around the center");
        let su = script_u(&table, &chain, &family);
        let best_u = family
            .iter()
            .map(|y| u_functional(&table, &chain, y, &family))
            .fold(0.0_f64, f64::max);
        assert_relative_eq!(su, best_u, max_relative = 1e-12);
        assert!(script_v(&chain, &family[..1]).is_ok());
        assert_eq!(script_v(&chain, &[]).unwrap(), 0.0);
    }
}
