//! Large-q behavior of the n = 3 lumped kernel.
//!
//! As q grows the kernel converges to a block matrix: within an insertion
//! class every entry tends to one over the class size, and everything else
//! tends to zero. The deviation at finite q decays like c/q; the report
//! fits c from the extremes and checks the whole range stays within a
//! factor of two of it.

use crate::green::IntPolynomial;
use crate::oracle::fixture::Gl3Fixture;
use crate::oracle::rational_to_f64;
use crate::perm::Permutation;
use crate::rsk::p_symbol;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// The limiting kernel: 1/|class| inside each insertion class, 0 outside.
/// Indexed like `words`.
pub fn limit_matrix(words: &[Permutation]) -> Vec<Vec<BigRational>> {
    let symbols: Vec<_> = words.iter().map(p_symbol).collect();
    words
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let size = symbols.iter().filter(|s| **s == symbols[i]).count();
            symbols
                .iter()
                .map(|s| {
                    if *s == symbols[i] {
                        BigRational::new(BigInt::from(1), BigInt::from(size))
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// The q -> infinity limit of a ratio of polynomials in q: zero when the
/// numerator has lower degree, the ratio of leading coefficients when the
/// degrees tie. Panics if the numerator degree exceeds the denominator's,
/// which cannot happen for probabilities.
fn rational_function_limit(num: &IntPolynomial, den: &IntPolynomial) -> BigRational {
    let dd = den.degree().expect("denominator is nonzero");
    match num.degree() {
        None => BigRational::zero(),
        Some(nd) if nd < dd => BigRational::zero(),
        Some(nd) if nd == dd => BigRational::new(
            num.leading_coeff().expect("nonzero").clone(),
            den.leading_coeff().expect("nonzero").clone(),
        ),
        _ => panic!("entry diverges as q grows"),
    }
}

/// Deviation data for one field size.
pub struct LimitDeviation {
    pub q: u64,
    /// max over entries of |P(w, z) - limit(w, z)|, exact
    pub max_deviation: BigRational,
    /// the same, scaled by q
    pub scaled: f64,
}

/// Scaling report across a range of field sizes.
pub struct LimitReport {
    pub deviations: Vec<LimitDeviation>,
    /// geometric mean of the extreme scaled deviations
    pub fitted_c: f64,
    /// every scaled deviation within a factor 2 of fitted_c
    pub within_factor_two: bool,
}

/// Evaluates the closed-form kernel at each q and measures convergence to
/// the limit matrix over every entry.
pub fn limit_report(q_values: &[u64]) -> LimitReport {
    report_with(q_values, false)
}

/// Like [`limit_report`] but restricted to entries between distinct
/// insertion classes, where the limit is zero; the statistic is then the
/// largest class-escaping transition mass.
pub fn off_class_report(q_values: &[u64]) -> LimitReport {
    report_with(q_values, true)
}

fn report_with(q_values: &[u64], off_class_only: bool) -> LimitReport {
    let fx = Gl3Fixture::load();
    let symbols: Vec<_> = fx.words.iter().map(p_symbol).collect();
    let limit = limit_matrix(&fx.words);
    let deviations: Vec<LimitDeviation> = q_values
        .iter()
        .map(|&q| {
            let matrix = fx.evaluate(q);
            let max_deviation = matrix
                .iter()
                .zip(&limit)
                .enumerate()
                .flat_map(|(w, (row, lrow))| {
                    let symbols = &symbols;
                    row.iter().zip(lrow).enumerate().filter_map(move |(z, (a, b))| {
                        if off_class_only && symbols[w] == symbols[z] {
                            None
                        } else {
                            Some((a - b).abs())
                        }
                    })
                })
                .max()
                .expect("matrix is nonempty");
            let scaled = rational_to_f64(&max_deviation) * q as f64;
            LimitDeviation { q, max_deviation, scaled }
        })
        .collect();
    let lo = deviations.iter().map(|d| d.scaled).fold(f64::INFINITY, f64::min);
    let hi = deviations.iter().map(|d| d.scaled).fold(0.0f64, f64::max);
    let fitted_c = (lo * hi).sqrt();
    let within_factor_two =
        deviations.iter().all(|d| d.scaled <= 2.0 * fitted_c && d.scaled >= fitted_c / 2.0);
    LimitReport { deviations, fitted_c, within_factor_two }
}

/// Symbolic check that every closed-form entry tends to the limit matrix.
pub fn fixture_limits_match() -> bool {
    let fx = Gl3Fixture::load();
    let limit = limit_matrix(&fx.words);
    fx.entries.iter().zip(&limit).all(|(row, lrow)| {
        row.iter()
            .zip(lrow)
            .all(|((num, den), l)| rational_function_limit(num, den) == *l)
    })
}
