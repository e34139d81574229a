//! Dense matrices over a prime field, sized for small rank (n up to a few
//! dozen). Row-major storage; arithmetic panics on dimension or field
//! mismatches since those are caller bugs, while data-dependent failures
//! (singularity) are errors.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatFq {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl MatFq {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(MatFq { field, rows, cols, data })
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        MatFq { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1 % field.order());
        }
        m
    }

    /// The permutation matrix with a 1 in row w(j) of column j.
    pub fn permutation(field: PrimeField, w: &Permutation) -> Self {
        let n = w.n();
        let mut m = Self::zeros(field, n, n);
        for j in 0..n {
            m.set(w.apply(j), j, 1);
        }
        m
    }

    /// Uniformly random invertible matrix, by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let data: Vec<u64> = (0..n * n).map(|_| field.sample(rng)).collect();
            let m = MatFq { field, rows: n, cols: n, data };
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(v < self.field.order());
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn mul(&self, rhs: &MatFq) -> MatFq {
        assert_eq!(self.field, rhs.field, "mixed fields");
        assert_eq!(self.cols, rhs.rows, "inner dimensions");
        let f = self.field;
        let q = f.order() as u128;
        let mut out = MatFq::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                let a = a as u128;
                for j in 0..rhs.cols {
                    let cur = out.at(i, j) as u128;
                    let add = (a * rhs.at(k, j) as u128) % q;
                    out.set(i, j, ((cur + add) % q) as u64);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self.at(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &MatFq) -> MatFq {
        assert_eq!(self.field, rhs.field);
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect();
        MatFq { field: f, rows: self.rows, cols: self.cols, data }
    }

    /// self - I, the nilpotent part of a unipotent matrix.
    pub fn minus_identity(&self) -> MatFq {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let mut out = self.clone();
        for i in 0..self.rows {
            out.set(i, i, f.sub(self.at(i, i), 1 % f.order()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_upper_unipotent(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let one = 1 % self.field.order();
        for i in 0..self.rows {
            if self.at(i, i) != one {
                return false;
            }
            for j in 0..i {
                if self.at(i, j) != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// True when (self - I)^n = 0.
    pub fn is_unipotent(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let nil = self.minus_identity();
        let mut p = nil.clone();
        for _ in 1..self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.mul(&nil);
        }
        p.is_zero()
    }

    pub fn rank(&self) -> usize {
        let (_, pivots) = self.rref();
        pivots.len()
    }

    /// Reduced row echelon form together with the pivot columns. Pivot choice
    /// is the topmost available nonzero row, so the result is deterministic.
    pub fn rref(&self) -> (MatFq, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.at(i, c) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.at(r, j);
                m.set(r, j, m.at(pr, j));
                m.set(pr, j, tmp);
            }
            let s = f.inv(m.at(r, c)).expect("pivot nonzero");
            for j in 0..m.cols {
                m.set(r, j, f.mul(m.at(r, j), s));
            }
            for i in 0..m.rows {
                if i != r && m.at(i, c) != 0 {
                    let factor = m.at(i, c);
                    for j in 0..m.cols {
                        let v = f.sub(m.at(i, j), f.mul(factor, m.at(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right null space, one vector per free column of the RREF,
    /// ordered by free column index.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (pc, row) in pivot_set.iter().enumerate() {
                if let Some(row) = row {
                    v[pc] = f.neg(r.at(*row, free));
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<MatFq> {
        assert_eq!(self.rows, self.cols);
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = MatFq::identity(f, n);
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.at(i, c) != 0) else {
                return Err(Error::SingularMatrix);
            };
            for j in 0..n {
                let tmp = m.at(c, j);
                m.set(c, j, m.at(pr, j));
                m.set(pr, j, tmp);
                let tmp = inv.at(c, j);
                inv.set(c, j, inv.at(pr, j));
                inv.set(pr, j, tmp);
            }
            let s = f.inv(m.at(c, c))?;
            for j in 0..n {
                m.set(c, j, f.mul(m.at(c, j), s));
                inv.set(c, j, f.mul(inv.at(c, j), s));
            }
            for i in 0..n {
                if i != c && m.at(i, c) != 0 {
                    let factor = m.at(i, c);
                    for j in 0..n {
                        let v = f.sub(m.at(i, j), f.mul(factor, m.at(c, j)));
                        m.set(i, j, v);
                        let v = f.sub(inv.at(i, j), f.mul(factor, inv.at(c, j)));
                        inv.set(i, j, v);
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Matrix with the given columns.
    pub fn from_columns(field: PrimeField, cols: &[Vec<u64>]) -> Result<Self> {
        let rows = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                field.check(v)?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }
}

/// Incremental row space over F_q: rows kept in echelon form, used for
/// independence tests while assembling Jordan chains.
#[derive(Debug, Clone)]
pub(crate) struct RowSpace {
    field: PrimeField,
    ncols: usize,
    /// (pivot column, row vector with leading 1 at the pivot), sorted by pivot.
    rows: Vec<(usize, Vec<u64>)>,
}

impl RowSpace {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        RowSpace { field, ncols, rows: Vec::new() }
    }

    /// Reduces `v` against the current basis in place.
    fn reduce(&self, v: &mut [u64]) {
        let f = self.field;
        for (pc, row) in &self.rows {
            let c = v[*pc];
            if c != 0 {
                for j in 0..self.ncols {
                    v[j] = f.sub(v[j], f.mul(c, row[j]));
                }
            }
        }
    }

    /// Inserts `v` if independent of the span; returns whether it was new.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        assert_eq!(v.len(), self.ncols);
        let f = self.field;
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = f.inv(v[pc]).expect("nonzero leading entry");
        for x in v.iter_mut() {
            *x = f.mul(*x, s);
        }
        let pos = self.rows.partition_point(|(c, _)| *c < pc);
        self.rows.insert(pos, (pc, v));
        true
    }

    #[cfg(test)]
    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f2 = f(2);
        let m = MatFq::new(f2, 2, 2, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(MatFq::identity(f2, 4).rank(), 4);
        assert_eq!(MatFq::zeros(f2, 3, 3).rank(), 0);
        let f5 = f(5);
        // second row is 2x the first mod 5 (2*3 = 6 = 1), so rank drops
        let m = MatFq::new(f5, 2, 3, vec![1, 2, 3, 2, 4, 1]).unwrap();
        assert_eq!(m.rank(), 1);
        let m = MatFq::new(f5, 2, 3, vec![1, 2, 3, 2, 4, 2]).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn inverse_round_trip_and_singular_error() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for q in [2u64, 3, 5] {
            let fq = f(q);
            for n in 1..=5 {
                for _ in 0..50 {
                    let m = MatFq::random_invertible(fq, n, &mut rng);
                    let inv = m.inverse().unwrap();
                    assert_eq!(m.mul(&inv), MatFq::identity(fq, n));
                    assert_eq!(inv.mul(&m), MatFq::identity(fq, n));
                }
            }
        }
        let f2 = f(2);
        let sing = MatFq::new(f2, 2, 2, vec![1, 1, 1, 1]).unwrap();
        assert!(matches!(sing.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn nullspace_kills_matrix_and_has_right_dimension() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for q in [2u64, 3, 5] {
            let fq = f(q);
            for n in 1..=5 {
                for _ in 0..50 {
                    let data: Vec<u64> = (0..n * n).map(|_| fq.sample(&mut rng)).collect();
                    let m = MatFq::new(fq, n, n, data).unwrap();
                    let ns = m.nullspace();
                    assert_eq!(ns.len(), n - m.rank());
                    let mut space = RowSpace::new(fq, n);
                    for v in &ns {
                        assert!(m.mul_vec(v).iter().all(|&x| x == 0));
                        assert!(space.insert(v.clone()), "basis should be independent");
                    }
                }
            }
        }
    }

    #[test]
    fn unipotent_checks() {
        let f3 = f(3);
        assert!(MatFq::identity(f3, 3).is_upper_unipotent());
        let mut u = MatFq::identity(f3, 3);
        u.set(0, 2, 2);
        assert!(u.is_upper_unipotent());
        assert!(u.is_unipotent());
        let mut l = MatFq::identity(f3, 3);
        l.set(2, 0, 1);
        assert!(!l.is_upper_unipotent());
        assert!(l.is_unipotent());
        let d = MatFq::new(f3, 2, 2, vec![2, 0, 0, 1]).unwrap();
        assert!(!d.is_unipotent());
    }

    #[test]
    fn permutation_matrix_composes() {
        let f5 = f(5);
        for a in Permutation::all(4) {
            for b in [Permutation::parse("2143").unwrap(), Permutation::parse("3412").unwrap()] {
                let ma = MatFq::permutation(f5, &a);
                let mb = MatFq::permutation(f5, &b);
                assert_eq!(ma.mul(&mb), MatFq::permutation(f5, &a.compose(&b)));
            }
        }
    }

    #[test]
    fn row_space_tracks_rank() {
        let f2 = f(2);
        let mut s = RowSpace::new(f2, 3);
        assert!(s.insert(vec![1, 1, 0]));
        assert!(s.insert(vec![0, 1, 1]));
        assert!(!s.insert(vec![1, 0, 1]), "sum of the first two");
        assert!(s.contains(&[1, 0, 1]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.rank(), 2);
    }
}
