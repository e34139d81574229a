//! Goodness-of-fit helpers for validating samplers against exact distributions.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson chi-square statistic for observed `counts` against expected
/// cell probabilities `probs` (which must sum to 1).
pub fn chi_square_statistic(counts: &[u64], probs: &[f64]) -> f64 {
    assert_eq!(counts.len(), probs.len());
    let total: u64 = counts.iter().sum();
    let n = total as f64;
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            assert!(p > 0.0, "expected probability must be positive");
            let e = n * p;
            let d = c as f64 - e;
            d * d / e
        })
        .sum()
}

/// Upper-tail p-value of the chi-square test with `k - 1` degrees of
/// freedom. A single cell has no freedom; the fit is then exact by
/// construction and the p-value is 1.
pub fn chi_square_pvalue(counts: &[u64], probs: &[f64]) -> f64 {
    let df = counts.len().saturating_sub(1);
    if df == 0 {
        return 1.0;
    }
    let stat = chi_square_statistic(counts, probs);
    let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(stat)
}

/// Sum of absolute differences between two distributions.
pub fn l1_distance(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}

/// Total variation distance, half the L1 distance.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    l1_distance(p, q) / 2.0
}

/// Normalizes counts to an empirical distribution.
pub fn empirical_probs(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    assert!(total > 0, "empty sample");
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn statistic_matches_hand_computation() {
        // N = 20, expected 10 per cell, deviations of 5: 25/10 + 25/10.
        let stat = chi_square_statistic(&[5, 15], &[0.5, 0.5]);
        assert!((stat - 5.0).abs() < 1e-12);
    }

    #[test]
    fn pvalue_of_exact_fit_is_one() {
        let p = chi_square_pvalue(&[250, 250, 250, 250], &[0.25; 4]);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pvalue_detects_heavy_bias() {
        let p = chi_square_pvalue(&[900, 100], &[0.5, 0.5]);
        assert!(p < 1e-9, "p = {p}");
    }

    #[test]
    fn pvalue_accepts_fair_draws() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let mut counts = [0u64; 6];
        for _ in 0..60_000 {
            counts[rng.gen_range(0..6)] += 1;
        }
        let p = chi_square_pvalue(&counts, &[1.0 / 6.0; 6]);
        assert!(p > 1e-3, "p = {p}");
    }

    #[test]
    fn single_cell_has_unit_pvalue() {
        assert_eq!(chi_square_pvalue(&[17], &[1.0]), 1.0);
    }

    #[test]
    fn total_variation_extremes() {
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]), 1.0);
        assert_eq!(total_variation(&[0.3, 0.7], &[0.3, 0.7]), 0.0);
        let tv = total_variation(&[0.5, 0.5], &[0.25, 0.75]);
        assert!((tv - 0.25).abs() < 1e-12);
    }

    #[test]
    fn empirical_probs_normalizes() {
        let probs = empirical_probs(&[1, 3]);
        assert_eq!(probs, vec![0.25, 0.75]);
    }
}
