use lumped::comb::ln_binomial;

/// Exact escape probability for the single-class chain of size M: starting
/// from the state with count j (reflected to the smaller side), the
/// probability of reaching the central state before returning to j.
/// Zero at the centre itself (degenerate escape).
///
/// Closed form: the inverse of sum_{n=0}^{L-1} [C(M,j)/C(M,j+n)] * M/(M-j-n)
/// with L the number of steps to the centre.
pub fn rho_1d_exact(m: usize, j: usize) -> f64 {
    assert!(j <= m, "count {j} out of range for class size {m}");
    // Mirror symmetry: counts j and M-j give the same escape probability.
    let j = j.min(m - j);
    let centre = m / 2;
    if j == centre {
        return 0.0;
    }
    let ln_cj = ln_binomial(m, j);
    let mut sum = 0.0;
    for n in 0..(centre - j) {
        let ln_ratio = ln_cj - ln_binomial(m, j + n);
        sum += ln_ratio.exp() * m as f64 / (m - j - n) as f64;
    }
    1.0 / sum
}

/// Measure ratio of the count-j state against the central state in a single
/// class of size M: C(M,j)/C(M, floor(M/2)).
pub fn q_ratio(m: usize, j: usize) -> f64 {
    assert!(j <= m);
    (ln_binomial(m, j) - ln_binomial(m, m / 2)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn smallest_cases_exact() {
        assert_relative_eq!(rho_1d_exact(2, 0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(rho_1d_exact(4, 0), 0.75, max_relative = 1e-14);
    }

    #[test]
    fn mirror_symmetry() {
        for m in [5usize, 8, 13] {
            for j in 0..=m {
                assert_relative_eq!(
                    rho_1d_exact(m, j),
                    rho_1d_exact(m, m - j),
                    max_relative = 1e-13
                );
            }
        }
    }

    #[test]
    fn degenerate_at_centre() {
        assert_eq!(rho_1d_exact(10, 5), 0.0);
        assert_eq!(rho_1d_exact(7, 3), 0.0);
    }

    #[test]
    fn close_to_one_minus_inverse_for_corners() {
        // From the corner the escape probability is 1 - 1/M + O(1/M^2).
        for m in [32usize, 64, 128] {
            let rho = rho_1d_exact(m, 0);
            let gap = (rho - (1.0 - 1.0 / m as f64)).abs();
            assert!(gap < 3.0 / (m as f64 * m as f64), "m={m} gap={gap}");
        }
    }

    #[test]
    fn q_ratio_endpoints() {
        assert_relative_eq!(q_ratio(4, 2), 1.0);
        assert_relative_eq!(q_ratio(4, 0), 1.0 / 6.0, max_relative = 1e-13);
    }
}
