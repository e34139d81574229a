//! Closed-form lumped kernel for n = 3, shipped as data.
//!
//! Each entry of the 6 x 6 kernel on S_3 is a ratio of integer polynomials
//! in the field size q, stored in `data/gl3_transition.json`. Loading keeps
//! the entries symbolic so they can be evaluated exactly at any q and
//! compared entry for entry with the brute force kernel.

use crate::green::IntPolynomial;
use crate::oracle::LumpedKernel;
use crate::perm::Permutation;
use num_rational::BigRational;
use serde::Deserialize;
use std::collections::HashMap;

const RAW: &str = include_str!("../../data/gl3_transition.json");

#[derive(Deserialize)]
struct RawEntry {
    num: Vec<i64>,
    den: Vec<i64>,
}

#[derive(Deserialize)]
struct RawFixture {
    order: Vec<String>,
    entries: HashMap<String, HashMap<String, RawEntry>>,
}

/// The n = 3 kernel as rational functions of q.
pub struct Gl3Fixture {
    pub words: Vec<Permutation>,
    /// entries[i][j] = (numerator, denominator), indexed like `words`
    pub entries: Vec<Vec<(IntPolynomial, IntPolynomial)>>,
}

impl Gl3Fixture {
    pub fn load() -> Self {
        let raw: RawFixture = serde_json::from_str(RAW).expect("fixture parses");
        let words: Vec<Permutation> = raw
            .order
            .iter()
            .map(|s| Permutation::parse(s).expect("fixture words parse"))
            .collect();
        let entries = raw
            .order
            .iter()
            .map(|row| {
                let cols = &raw.entries[row];
                raw.order
                    .iter()
                    .map(|col| {
                        let e = &cols[col];
                        (
                            IntPolynomial::from_coeffs(&e.num),
                            IntPolynomial::from_coeffs(&e.den),
                        )
                    })
                    .collect()
            })
            .collect();
        Gl3Fixture { words, entries }
    }

    /// Exact kernel at a specific field size.
    pub fn evaluate(&self, q: u64) -> Vec<Vec<BigRational>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(num, den)| BigRational::new(num.eval_u64(q), den.eval_u64(q)))
                    .collect()
            })
            .collect()
    }

    /// Compares a brute force lumped kernel against the closed form,
    /// reindexing by word. Returns the first mismatch found.
    pub fn check(&self, lumped: &LumpedKernel) -> std::result::Result<(), String> {
        if lumped.len() != self.words.len() {
            return Err(format!(
                "kernel has {} states, fixture has {}",
                lumped.len(),
                self.words.len()
            ));
        }
        let expected = self.evaluate(lumped.q);
        for (i, wi) in self.words.iter().enumerate() {
            let x = lumped
                .index_of(wi)
                .ok_or_else(|| format!("kernel is missing word {wi}"))?;
            for (j, wj) in self.words.iter().enumerate() {
                let y = lumped.index_of(wj).expect("same word set");
                if lumped.matrix[x][y] != expected[i][j] {
                    return Err(format!(
                        "entry ({wi}, {wj}) at q = {}: kernel {} vs closed form {}",
                        lumped.q, lumped.matrix[x][y], expected[i][j]
                    ));
                }
            }
        }
        Ok(())
    }
}
