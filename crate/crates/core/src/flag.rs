//! Complete flags in F_q^n as canonical coset representatives.
//!
//! A flag is a chain V_1 < ... < V_n with dim V_k = k, identified with the
//! coset gB of the matrix g whose leading columns span the chain. The
//! canonical representative is the column echelon form where each column's
//! bottommost nonzero entry is a 1 (the pivot), pivot rows are distinct, and
//! every entry to the right of a pivot in its row is 0. The pivot row of
//! column j is w(j) for a permutation w, and the remaining unconstrained
//! entries number exactly length(w), so a flag is the pair (w, free entries).

use std::fmt;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::MatFq;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalFlag {
    field: PrimeField,
    w: Permutation,
    /// Values of the free entries, in the order of `free_positions(&w)`.
    free: Vec<u64>,
}

/// Free entry positions (row, col), 0-indexed, for the cell of w: in column j
/// those rows above the pivot w(j) that are pivot rows of later columns.
/// Ordered by column, then by row. There are exactly length(w) of them.
pub fn free_positions(w: &Permutation) -> Vec<(usize, usize)> {
    let n = w.n();
    let winv = w.inverse();
    let mut out = Vec::with_capacity(w.length());
    for j in 0..n {
        for r in 0..w.apply(j) {
            if winv.apply(r) > j {
                out.push((r, j));
            }
        }
    }
    out
}

impl CanonicalFlag {
    /// The base point of the cell of w: the flag of the permutation matrix.
    pub fn base_point(field: PrimeField, w: Permutation) -> Self {
        let len = w.length();
        CanonicalFlag { field, w, free: vec![0; len] }
    }

    /// Builds a flag from its word and free entry values (in position order).
    pub fn from_parts(field: PrimeField, w: Permutation, free: Vec<u64>) -> Result<Self> {
        if free.len() != w.length() {
            return Err(Error::DimensionMismatch(format!(
                "cell of {} has {} free entries, got {}",
                w,
                w.length(),
                free.len()
            )));
        }
        for &v in &free {
            field.check(v)?;
        }
        Ok(CanonicalFlag { field, w, free })
    }

    /// Canonicalizes the coset gB of an invertible matrix by column reduction:
    /// for each column, clear the pivot rows of earlier columns, then scale
    /// the bottommost nonzero entry to 1. Right multiplication by any upper
    /// triangular matrix leaves the result unchanged.
    pub fn from_matrix(g: &MatFq) -> Result<Self> {
        let f = g.field();
        let n = g.rows();
        if n != g.cols() {
            return Err(Error::DimensionMismatch("flag matrix must be square".into()));
        }
        let mut m = g.clone();
        let mut pivot_row = vec![usize::MAX; n];
        for j in 0..n {
            for i in 0..j {
                let pr = pivot_row[i];
                let c = m.at(pr, j);
                if c != 0 {
                    // col_j -= c * col_i; col_i is zero below its pivot row.
                    for r in 0..=pr {
                        let v = f.sub(m.at(r, j), f.mul(c, m.at(r, i)));
                        m.set(r, j, v);
                    }
                }
            }
            let Some(r) = (0..n).rev().find(|&r| m.at(r, j) != 0) else {
                return Err(Error::SingularMatrix);
            };
            let s = f.inv(m.at(r, j))?;
            for i in 0..n {
                m.set(i, j, f.mul(m.at(i, j), s));
            }
            pivot_row[j] = r;
        }
        let w = Permutation::from_images(pivot_row).map_err(|_| Error::SingularMatrix)?;
        let free = free_positions(&w).iter().map(|&(r, j)| m.at(r, j)).collect();
        Ok(CanonicalFlag { field: f, w, free })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    /// The Bruhat cell word: the permutation w with the flag in UwB.
    pub fn word(&self) -> &Permutation {
        &self.w
    }

    pub fn free_values(&self) -> &[u64] {
        &self.free
    }

    /// Free entries as ((row, col), value) pairs.
    pub fn free_entries(&self) -> Vec<((usize, usize), u64)> {
        free_positions(&self.w).into_iter().zip(self.free.iter().copied()).collect()
    }

    /// The canonical representative matrix.
    pub fn matrix(&self) -> MatFq {
        let n = self.n();
        let mut m = MatFq::zeros(self.field, n, n);
        for j in 0..n {
            m.set(self.w.apply(j), j, 1);
        }
        for (&(r, j), &v) in free_positions(&self.w).iter().zip(&self.free) {
            m.set(r, j, v);
        }
        m
    }

    /// Bruhat factorization: the unipotent upper triangular u with
    /// u * P_w = M(flag), so the flag is u w B. Column w(j) of u is column j
    /// of the canonical matrix.
    pub fn bruhat_u(&self) -> MatFq {
        let n = self.n();
        let m = self.matrix();
        let mut u = MatFq::zeros(self.field, n, n);
        for j in 0..n {
            let target = self.w.apply(j);
            for i in 0..n {
                u.set(i, target, m.at(i, j));
            }
        }
        debug_assert!(u.is_upper_unipotent());
        u
    }

    /// Applies an invertible matrix to the flag.
    pub fn apply(&self, g: &MatFq) -> Result<CanonicalFlag> {
        CanonicalFlag::from_matrix(&g.mul(&self.matrix()))
    }

    /// Whether g fixes this flag, i.e. g V_k = V_k for all k.
    pub fn is_fixed_by(&self, g: &MatFq) -> bool {
        match self.apply(g) {
            Ok(h) => h == *self,
            Err(_) => false,
        }
    }
}

/// Positions of U forced to vanish in the stabilizer of the w cell's base
/// point: g in U fixes the flag of P_w exactly when P_w^-1 g P_w is upper
/// triangular, which kills the entry (w(j), w(i)) for every inversion (i, j)
/// of w. These are the inversions of w^-1 read as matrix positions.
pub fn stabilizer_zero_positions(w: &Permutation) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = w
        .inversions()
        .iter()
        .map(|&(i, j)| (w.apply(j), w.apply(i)))
        .collect();
    out.sort_unstable();
    out
}

/// Membership test for the stabilizer of the flag u w B inside the unipotent
/// group U: g stabilizes exactly when u^-1 g u lies in U_w, the subgroup of U
/// vanishing at [`stabilizer_zero_positions`].
pub fn stabilizer_membership(u: &MatFq, w: &Permutation, g: &MatFq) -> bool {
    assert!(g.is_upper_unipotent(), "stabilizer membership is a test on U");
    let uinv = u.inverse().expect("unipotent matrices are invertible");
    let h = uinv.mul(g).mul(u);
    if !h.is_upper_unipotent() {
        return false;
    }
    w.inversions()
        .iter()
        .all(|&(i, j)| h.at(w.apply(j), w.apply(i)) == 0)
}

impl fmt::Display for CanonicalFlag {
    /// Word, then free entry values: `231[1,0]`. The bare word denotes the
    /// cell base point.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.free.is_empty() {
            return write!(f, "{}", self.w);
        }
        let vals: Vec<String> = self.free.iter().map(|v| v.to_string()).collect();
        write!(f, "{}[{}]", self.w, vals.join(","))
    }
}
