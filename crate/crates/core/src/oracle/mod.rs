//! Exact small-case reference computations.
//!
//! Everything here is brute force and exact: flags are enumerated outright,
//! fixed point sets are found by scanning, and the transition kernel is
//! assembled in arbitrary precision rational arithmetic straight from its
//! definition. The rest of the crate is tested against these values.
//!
//! One step of the process from flag F lands on F' with probability
//!
//! ```text
//! P(F, F') = (1/|stab(F)|) * sum over g in stab(F) meet stab(F')
//!            of 1/|Fix(g)|
//! ```
//!
//! equivalently: draw g uniformly from the stabilizer of F, then a uniform
//! flag fixed by g. Rows are built the second way and the first is what the
//! reversibility check exercises.

pub mod fixture;
pub mod limit;
pub mod mixing;
pub mod spectral;

use crate::error::{Error, Result};
use crate::exec;
use crate::field::PrimeField;
use crate::flag::{stabilizer_zero_positions, CanonicalFlag};
use crate::green::GreenTable;
use crate::jordan::jordan_type_of;
use crate::matrix::MatFq;
use crate::partitions::Partition;
use crate::perm::Permutation;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Hard cap on the number of flags the oracle will enumerate.
pub const ENUMERATION_LIMIT: u64 = 100_000;

/// Number of complete flags in F_q^n: the Poincare polynomial of S_n at q.
pub fn state_space_size(n: usize, q: u64) -> u128 {
    Permutation::all(n)
        .iter()
        .map(|w| (q as u128).pow(w.length() as u32))
        .sum()
}

/// All complete flags, grouped by Bruhat cell in lexicographic word order,
/// free entries counting up within each cell.
pub fn enumerate_flags(field: PrimeField, n: usize) -> Result<Vec<CanonicalFlag>> {
    let q = field.order();
    let total = state_space_size(n, q);
    if total > ENUMERATION_LIMIT as u128 {
        return Err(Error::StateSpaceTooLarge(total, ENUMERATION_LIMIT));
    }
    let mut out = Vec::with_capacity(total as usize);
    for w in Permutation::all(n) {
        let len = w.length();
        let mut values = vec![0u64; len];
        loop {
            out.push(CanonicalFlag::from_parts(field, w.clone(), values.clone())?);
            // base-q counter, first position fastest
            let mut carry = true;
            for v in values.iter_mut() {
                if !carry {
                    break;
                }
                *v += 1;
                if *v == q {
                    *v = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
    }
    debug_assert_eq!(out.len() as u128, total);
    Ok(out)
}

/// Indices into `flags` of the flags fixed by `a`.
///
/// `inverses[i]` must be the inverse of `flags[i].matrix()`; the fixed test
/// is then one conjugation and a triangularity scan per flag.
fn fixed_indices_with(a: &MatFq, flags: &[CanonicalFlag], inverses: &[MatFq]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, flag) in flags.iter().enumerate() {
        let conj = inverses[i].mul(a).mul(&flag.matrix());
        if is_upper_triangular(&conj) {
            out.push(i);
        }
    }
    out
}

fn is_upper_triangular(m: &MatFq) -> bool {
    for i in 1..m.rows() {
        for j in 0..i {
            if m.at(i, j) != 0 {
                return false;
            }
        }
    }
    true
}

/// Flags fixed by a unipotent matrix, by direct scan.
pub fn fixed_flags(a: &MatFq, flags: &[CanonicalFlag]) -> Vec<CanonicalFlag> {
    flags
        .iter()
        .filter(|f| f.is_fixed_by(a))
        .cloned()
        .collect()
}

/// |Fix(a)| by direct scan over an enumeration of all flags.
pub fn fixed_count(a: &MatFq, n: usize) -> Result<u64> {
    let flags = enumerate_flags(a.field(), n)?;
    Ok(flags.iter().filter(|f| f.is_fixed_by(a)).count() as u64)
}

/// Exact transition kernel on flags.
#[derive(Clone, Debug)]
pub struct FlagKernel {
    pub field: PrimeField,
    pub flags: Vec<CanonicalFlag>,
    pub matrix: Vec<Vec<BigRational>>,
}

/// Exact transition kernel lumped to Bruhat cells, indexed by word in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct LumpedKernel {
    pub q: u64,
    pub words: Vec<Permutation>,
    pub matrix: Vec<Vec<BigRational>>,
}

fn ratio_one_over(d: BigUint) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(d))
}

/// Builds the exact kernel; fixed point scans fan out in parallel when the
/// `parallel` feature is enabled.
pub fn exact_transition(field: PrimeField, n: usize) -> Result<FlagKernel> {
    exact_transition_impl(field, n, true)
}

/// Single-threaded variant regardless of features, for benchmarks.
pub fn exact_transition_sequential(field: PrimeField, n: usize) -> Result<FlagKernel> {
    exact_transition_impl(field, n, false)
}

fn exact_transition_impl(field: PrimeField, n: usize, parallel: bool) -> Result<FlagKernel> {
    let q = field.order();
    let flags = enumerate_flags(field, n)?;
    let count = flags.len();
    let inverses: Vec<MatFq> = flags
        .iter()
        .map(|f| f.matrix().inverse().expect("flag matrices are invertible"))
        .collect();

    // Phase 1: enumerate each flag's stabilizer structurally and dedup the
    // resulting unipotent elements across all flags.
    let mut distinct: Vec<MatFq> = Vec::new();
    let mut element_id: HashMap<MatFq, usize> = HashMap::new();
    let mut stabilizers: Vec<Vec<usize>> = Vec::with_capacity(count);
    for flag in &flags {
        let w = flag.word();
        let u = flag.bruhat_u();
        let uinv = u.inverse().expect("unipotent");
        let zeros = stabilizer_zero_positions(w);
        let mut free = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !zeros.contains(&(i, j)) {
                    free.push((i, j));
                }
            }
        }
        let mut ids = Vec::new();
        let mut values = vec![0u64; free.len()];
        loop {
            let mut s = MatFq::identity(field, n);
            for (&(i, j), &v) in free.iter().zip(&values) {
                s.set(i, j, v);
            }
            let a = u.mul(&s).mul(&uinv);
            let next = distinct.len();
            let id = *element_id.entry(a.clone()).or_insert_with(|| {
                distinct.push(a);
                next
            });
            ids.push(id);
            let mut carry = true;
            for v in values.iter_mut() {
                if !carry {
                    break;
                }
                *v += 1;
                if *v == q {
                    *v = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
        debug_assert_eq!(ids.len() as u128, (q as u128).pow((free.len()) as u32));
        stabilizers.push(ids);
    }

    // Phase 2: one fixed point scan per distinct element, cross-checked
    // against the Green polynomial count for its Jordan type.
    let mut green = GreenTable::new();
    let mut expected: HashMap<Partition, BigUint> = HashMap::new();
    for shape in Partition::all(n) {
        expected.insert(shape.clone(), green.eval(&shape, q));
    }
    let scan = |a: &MatFq| -> Vec<usize> {
        let fix = fixed_indices_with(a, &flags, &inverses);
        let ty = jordan_type_of(a).expect("stabilizer elements are unipotent");
        assert_eq!(
            BigUint::from(fix.len()),
            expected[&ty],
            "fixed point count disagrees with Green polynomial for type {ty}"
        );
        fix
    };
    let fix_sets: Vec<Vec<usize>> = if parallel {
        exec::auto_map(&distinct, scan)
    } else {
        exec::seq_map(&distinct, scan)
    };

    // Phase 3: assemble rows of the kernel.
    let mut matrix = vec![vec![BigRational::zero(); count]; count];
    for (x, ids) in stabilizers.iter().enumerate() {
        let stab_size = BigUint::from(ids.len());
        for &id in ids {
            let fix = &fix_sets[id];
            let weight =
                ratio_one_over(&stab_size * BigUint::from(fix.len()));
            for &y in fix {
                matrix[x][y] += &weight;
            }
        }
        let sum: BigRational = matrix[x].iter().sum();
        assert!(sum.is_one(), "row {x} sums to {sum}");
    }

    Ok(FlagKernel { field, flags, matrix })
}

impl FlagKernel {
    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn index_of(&self, flag: &CanonicalFlag) -> Option<usize> {
        self.flags.iter().position(|f| f == flag)
    }

    /// Stationary law: 1/(n! * orbit size), where the orbit of a flag in the
    /// cell of w has q^l(w) elements.
    pub fn stationary(&self) -> Vec<BigRational> {
        let n = self.flags.first().map_or(0, |f| f.n());
        let factorial: BigUint = (1..=n as u64).map(BigUint::from).product();
        self.flags
            .iter()
            .map(|f| {
                let orbit = BigUint::from(self.field.order()).pow(f.word().length() as u32);
                ratio_one_over(&factorial * orbit)
            })
            .collect()
    }

    /// Exact detailed balance with respect to [`FlagKernel::stationary`].
    pub fn is_reversible(&self) -> bool {
        let pi = self.stationary();
        for x in 0..self.len() {
            for y in 0..x {
                if &pi[x] * &self.matrix[x][y] != &pi[y] * &self.matrix[y][x] {
                    return false;
                }
            }
        }
        true
    }

    /// Collapses the kernel to Bruhat cells, verifying exact lumpability:
    /// every flag of a cell must produce the same collapsed row.
    pub fn lump(&self) -> Result<LumpedKernel> {
        let n = self.flags.first().map_or(0, |f| f.n());
        let words = Permutation::all(n);
        let word_index: HashMap<&Permutation, usize> =
            words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let cell_of: Vec<usize> = self
            .flags
            .iter()
            .map(|f| word_index[f.word()])
            .collect();
        let mut rows: Vec<Option<Vec<BigRational>>> = vec![None; words.len()];
        for (x, row) in self.matrix.iter().enumerate() {
            let mut lumped = vec![BigRational::zero(); words.len()];
            for (y, p) in row.iter().enumerate() {
                lumped[cell_of[y]] += p;
            }
            let cell = cell_of[x];
            match &rows[cell] {
                None => rows[cell] = Some(lumped),
                Some(existing) => {
                    if *existing != lumped {
                        return Err(Error::NotLumpable(words[cell].to_string()));
                    }
                }
            }
        }
        let matrix: Vec<Vec<BigRational>> = rows
            .into_iter()
            .map(|r| r.expect("every cell has at least one flag"))
            .collect();
        Ok(LumpedKernel { q: self.field.order(), words, matrix })
    }
}

impl LumpedKernel {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &Permutation) -> Option<usize> {
        self.words.iter().position(|v| v == w)
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.len();
        (0..k).all(|i| (0..i).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// Uniform row sums: (1/n!) sum_w P(w, z) = 1/n! for every z.
    pub fn uniform_is_stationary(&self) -> bool {
        let k = self.len();
        (0..k).all(|z| {
            let total: BigRational = (0..k).map(|w| self.matrix[w][z].clone()).sum();
            total.is_one()
        })
    }

    /// Distribution after `steps` steps from a point mass at `start`.
    pub fn power_row(&self, start: usize, steps: usize) -> Vec<BigRational> {
        let k = self.len();
        let mut dist = vec![BigRational::zero(); k];
        dist[start] = BigRational::one();
        for _ in 0..steps {
            let mut next = vec![BigRational::zero(); k];
            for (w, p) in dist.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                for z in 0..k {
                    if !self.matrix[w][z].is_zero() {
                        next[z] += p * &self.matrix[w][z];
                    }
                }
            }
            dist = next;
        }
        dist
    }

    /// Row as f64 probabilities, for statistical comparisons.
    pub fn row_f64(&self, row: usize) -> Vec<f64> {
        self.matrix[row].iter().map(rational_to_f64).collect()
    }
}

/// Lossy conversion for statistics; exact comparisons never go through this.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // split to keep precision for moderate sizes
    let nf: f64 = num.to_string().parse().expect("integer parses as f64");
    let df: f64 = den.to_string().parse().expect("integer parses as f64");
    nf / df
}

/// Convenience rational from a pair of machine integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Reduced "num/den" form, denominator always written (so "0/1", "1/1").
pub fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn state_space_sizes() {
        assert_eq!(state_space_size(1, 2), 1);
        assert_eq!(state_space_size(2, 2), 3);
        assert_eq!(state_space_size(3, 2), 21);
        assert_eq!(state_space_size(4, 2), 315);
        assert_eq!(state_space_size(3, 5), 186);
        assert_eq!(state_space_size(3, 7), 456);
        assert_eq!(state_space_size(4, 3), 2080);
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        for (n, q) in [(2usize, 2u64), (3, 2), (3, 3), (4, 2)] {
            let flags = enumerate_flags(field(q), n).unwrap();
            assert_eq!(flags.len() as u128, state_space_size(n, q));
            let mut set = std::collections::HashSet::new();
            for f in &flags {
                assert!(set.insert(f.clone()), "duplicate flag {f}");
            }
        }
    }

    #[test]
    fn enumeration_guard_trips() {
        // n=6, q=5 has far more than 10^5 flags
        assert!(matches!(
            enumerate_flags(field(5), 6),
            Err(Error::StateSpaceTooLarge(_, _))
        ));
    }

    #[test]
    fn fixed_counts_match_green_for_jordan_matrices() {
        use crate::jordan::jordan_matrix;
        let mut green = GreenTable::new();
        for (n, q) in [(2usize, 2u64), (3, 2), (3, 3), (4, 2), (4, 3)] {
            for shape in Partition::all(n) {
                let a = jordan_matrix(field(q), &shape);
                let count = fixed_count(&a, n).unwrap();
                assert_eq!(
                    BigUint::from(count),
                    green.eval(&shape, q),
                    "n={n} q={q} shape={shape}"
                );
            }
        }
    }

    #[test]
    fn identity_fixes_everything() {
        let flags = enumerate_flags(field(2), 3).unwrap();
        let fix = fixed_flags(&MatFq::identity(field(2), 3), &flags);
        assert_eq!(fix.len(), 21);
    }

    #[test]
    fn hand_computed_kernel_n2_q2() {
        let kernel = exact_transition(field(2), 2).unwrap();
        assert_eq!(kernel.len(), 3);
        // flags come out in cell order: e, then the two flags over 21
        assert!(kernel.flags[0].word().is_identity());
        assert_eq!(kernel.matrix[0], vec![ratio(2, 3), ratio(1, 6), ratio(1, 6)]);
        assert_eq!(kernel.matrix[1], vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert_eq!(kernel.matrix[2], vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        assert!(kernel.is_reversible());

        let lumped = kernel.lump().unwrap();
        assert_eq!(lumped.matrix[0], vec![ratio(2, 3), ratio(1, 3)]);
        assert_eq!(lumped.matrix[1], vec![ratio(1, 3), ratio(2, 3)]);
        assert!(lumped.is_symmetric());
        assert!(lumped.uniform_is_stationary());
    }

    #[test]
    fn trivial_kernel_n1() {
        let kernel = exact_transition(field(2), 1).unwrap();
        assert_eq!(kernel.len(), 1);
        assert!(kernel.matrix[0][0].is_one());
    }

    #[test]
    fn lumped_row_from_longest_word_is_mallows() {
        // from the w0 cell the first phase is forced to the identity, so the
        // step is uniform over all flags and cells get mass q^l(w)/|X|
        for (n, q) in [(3usize, 2u64), (4, 2)] {
            let kernel = exact_transition(field(q), n).unwrap();
            let lumped = kernel.lump().unwrap();
            let w0 = Permutation::longest(n);
            let row = &lumped.matrix[lumped.index_of(&w0).unwrap()];
            let total = BigInt::from(state_space_size(n, q) as i64);
            for (z, p) in lumped.words.iter().zip(row) {
                let expected = BigRational::new(
                    BigInt::from(q).pow(z.length() as u32),
                    total.clone(),
                );
                assert_eq!(*p, expected, "n={n} q={q} z={z}");
            }
        }
    }

    #[test]
    fn kernels_are_reversible_and_lumpable() {
        for (n, q) in [(2usize, 2u64), (2, 3), (3, 2), (3, 3)] {
            let kernel = exact_transition(field(q), n).unwrap();
            assert!(kernel.is_reversible(), "n={n} q={q}");
            let lumped = kernel.lump().unwrap();
            assert!(lumped.is_symmetric(), "n={n} q={q}");
            assert!(lumped.uniform_is_stationary(), "n={n} q={q}");
        }
    }

    #[test]
    fn parallel_and_sequential_kernels_agree() {
        let a = exact_transition(field(2), 3).unwrap();
        let b = exact_transition_sequential(field(2), 3).unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.flags, b.flags);
    }

    #[test]
    fn power_row_spreads_mass() {
        let kernel = exact_transition(field(2), 3).unwrap();
        let lumped = kernel.lump().unwrap();
        let start = lumped.index_of(&Permutation::parse("213").unwrap()).unwrap();
        let one_step = lumped.power_row(start, 1);
        assert_eq!(one_step, lumped.matrix[start]);
        let far = lumped.power_row(start, 200);
        for p in &far {
            let dev = (rational_to_f64(p) - 1.0 / 6.0).abs();
            assert!(dev < 1e-10);
        }
    }

    #[test]
    fn rational_to_f64_roundtrip() {
        assert_eq!(rational_to_f64(&ratio(1, 2)), 0.5);
        assert!((rational_to_f64(&ratio(26, 105)) - 26.0 / 105.0).abs() < 1e-15);
    }

    #[test]
    fn fraction_string_always_shows_denominator() {
        assert_eq!(fraction_string(&ratio(2, 3)), "2/3");
        assert_eq!(fraction_string(&ratio(4, 6)), "2/3");
        assert_eq!(fraction_string(&ratio(0, 5)), "0/1");
        assert_eq!(fraction_string(&ratio(7, 1)), "7/1");
        assert_eq!(fraction_string(&ratio(-1, 2)), "-1/2");
    }
}
