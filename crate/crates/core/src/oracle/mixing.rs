//! Exact mixing diagnostics for lumped kernels: distance-to-uniform curves
//! and conductance over insertion tableau classes.
//!
//! Distance is reported in two normalizations. `tv_curve` is the plain sum
//! of absolute deviations sum_w |K^l(x, w) - 1/n!|, which is how the sharp
//! n = 3 bounds are stated; `tv_curve_halved` is the conventional total
//! variation, half of that.

use crate::error::Result;
use crate::oracle::LumpedKernel;
use crate::perm::Permutation;
use crate::rsk::p_symbol;
use crate::tableau::Tableau;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// sum_w |K^l(start, w) - 1/n!| for l = 1..=l_max, exactly.
pub fn tv_curve(
    lumped: &LumpedKernel,
    start: &Permutation,
    l_max: usize,
) -> Result<Vec<BigRational>> {
    let k = lumped.len();
    let x = lumped
        .index_of(start)
        .ok_or(crate::error::Error::StartMismatch)?;
    let pi = BigRational::new(BigInt::from(1), BigInt::from(k));
    let mut dist = vec![BigRational::zero(); k];
    dist[x] = BigRational::from_integer(1.into());
    let mut out = Vec::with_capacity(l_max);
    for _ in 0..l_max {
        let mut next = vec![BigRational::zero(); k];
        for (w, p) in dist.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for z in 0..k {
                if !lumped.matrix[w][z].is_zero() {
                    next[z] += p * &lumped.matrix[w][z];
                }
            }
        }
        dist = next;
        out.push(dist.iter().map(|p| (p - &pi).abs()).sum());
    }
    Ok(out)
}

/// Conventional total variation: half of [`tv_curve`].
pub fn tv_curve_halved(
    lumped: &LumpedKernel,
    start: &Permutation,
    l_max: usize,
) -> Result<Vec<BigRational>> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    Ok(tv_curve(lumped, start, l_max)?
        .into_iter()
        .map(|t| t * &half)
        .collect())
}

/// Conductance of each insertion class and the chain's bottleneck.
pub struct ConductanceReport {
    /// classes of words sharing an insertion tableau, each sorted
    pub cells: Vec<Vec<Permutation>>,
    /// Phi(S) = Q(S, S^c) / pi(S) per cell, same order as `cells`
    pub cell_conductance: Vec<BigRational>,
    /// minimum over cells with pi(S) <= 1/2
    pub bottleneck: BigRational,
}

impl ConductanceReport {
    /// Mixing-time lower bound (1 / 2 Phi) ln(1 / 2 eps).
    pub fn step_lower_bound(&self, eps: f64) -> f64 {
        let phi = self.bottleneck.to_f64().expect("conductance fits in f64");
        (1.0 / (2.0 * phi)) * (1.0 / (2.0 * eps)).ln()
    }
}

/// Partitions the state space into insertion classes and computes exact
/// conductance under the uniform stationary law.
pub fn conductance_report(lumped: &LumpedKernel) -> ConductanceReport {
    let k = lumped.len();
    let mut by_tableau: HashMap<Tableau, Vec<usize>> = HashMap::new();
    for (i, w) in lumped.words.iter().enumerate() {
        by_tableau.entry(p_symbol(w)).or_default().push(i);
    }
    // word indices are lexicographic, so sorting by first member orders the
    // cells by their smallest word
    let mut cells: Vec<Vec<usize>> = by_tableau.into_values().collect();
    cells.sort_by_key(|c| c[0]);

    let pi = BigRational::new(BigInt::from(1), BigInt::from(k));
    let mut cell_conductance = Vec::with_capacity(cells.len());
    for cell in &cells {
        let inside: Vec<bool> = {
            let mut mask = vec![false; k];
            for &i in cell {
                mask[i] = true;
            }
            mask
        };
        // Q(S, S^c) = sum_{w in S} pi(w) P(w, S^c)
        let mut flow = BigRational::zero();
        for &w in cell {
            for z in 0..k {
                if !inside[z] {
                    flow += &pi * &lumped.matrix[w][z];
                }
            }
        }
        let weight = &pi * BigRational::from_integer(BigInt::from(cell.len()));
        cell_conductance.push(flow / weight);
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let bottleneck = cells
        .iter()
        .zip(&cell_conductance)
        .filter(|(cell, _)| {
            &pi * BigRational::from_integer(BigInt::from(cell.len())) <= half
        })
        .map(|(_, phi)| phi.clone())
        .min()
        .expect("at least one cell has mass at most 1/2");

    ConductanceReport {
        cells: cells
            .into_iter()
            .map(|c| c.into_iter().map(|i| lumped.words[i].clone()).collect())
            .collect(),
        cell_conductance,
        bottleneck,
    }
}
