//! Young tableaux with strictly increasing rows and columns.
//!
//! Entries are positive integers. A tableau of size n is *standard* when its
//! entries are exactly 1..=n. Enumeration of standard tableaux of a fixed
//! shape proceeds by stripping the largest entry from an outer corner, so the
//! count always agrees with the hook length formula (tested, not assumed).

use crate::error::{Error, Result};
use crate::partitions::Partition;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    /// Validates row lengths (weakly decreasing), strictly increasing rows,
    /// and strictly increasing columns. Entries must be positive.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let fail = |why: &str| Err(Error::InvalidTableau(why.to_string()));
        for w in rows.windows(2) {
            if w[0].len() < w[1].len() {
                return fail("row lengths must weakly decrease");
            }
        }
        if rows.iter().any(|r| r.is_empty()) {
            return fail("rows must be nonempty");
        }
        for row in &rows {
            if row[0] == 0 || row.windows(2).any(|w| w[0] >= w[1]) {
                return fail("rows must strictly increase and entries be positive");
            }
        }
        for i in 1..rows.len() {
            for j in 0..rows[i].len() {
                if rows[i - 1][j] >= rows[i][j] {
                    return fail("columns must strictly increase");
                }
            }
        }
        Ok(Tableau { rows })
    }

    pub fn empty() -> Self {
        Tableau { rows: Vec::new() }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn shape(&self) -> Partition {
        if self.rows.is_empty() {
            return Partition::empty();
        }
        Partition::new(self.rows.iter().map(Vec::len).collect()).expect("rows form a partition")
    }

    /// True when the entries are exactly 1..=n.
    pub fn is_standard(&self) -> bool {
        let n = self.size();
        let mut seen = vec![false; n + 1];
        for row in &self.rows {
            for &e in row {
                if e > n || seen[e] {
                    return false;
                }
                seen[e] = true;
            }
        }
        true
    }

    /// Row and column of an entry, if present. Rows are sorted, so each row
    /// is a binary search.
    pub fn position_of(&self, entry: usize) -> Option<(usize, usize)> {
        for (i, row) in self.rows.iter().enumerate() {
            if let Ok(j) = row.binary_search(&entry) {
                return Some((i, j));
            }
        }
        None
    }

    /// All standard tableaux of the given shape, in a deterministic order.
    ///
    /// Recursion on the largest entry: it must sit in an outer corner, and
    /// deleting it leaves a standard tableau of the smaller shape.
    pub fn standard_of_shape(shape: &Partition) -> Vec<Tableau> {
        let n = shape.size();
        if n == 0 {
            return vec![Tableau::empty()];
        }
        let mut out = Vec::new();
        for smaller in shape.remove_box_set() {
            let corner_row = (0..shape.num_parts())
                .find(|&i| smaller.parts().get(i).copied().unwrap_or(0) < shape.parts()[i])
                .expect("shapes differ in one row");
            for t in Tableau::standard_of_shape(&smaller) {
                let mut rows = t.rows.clone();
                if corner_row == rows.len() {
                    rows.push(vec![n]);
                } else {
                    rows[corner_row].push(n);
                }
                out.push(Tableau { rows });
            }
        }
        out
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<usize>>) -> Self {
        Tableau { rows }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "(empty)");
        }
        let width = self
            .rows
            .iter()
            .flatten()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let line: Vec<String> = row.iter().map(|e| format!("{e:>width$}")).collect();
            write!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[&[usize]]) -> Tableau {
        Tableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn accepts_valid_tableaux() {
        t(&[&[1, 2], &[3]]);
        t(&[&[1, 3, 5], &[2, 4]]);
        t(&[&[1], &[2], &[3]]);
    }

    #[test]
    fn rejects_bad_shapes_and_orders() {
        assert!(Tableau::new(vec![vec![1], vec![2, 3]]).is_err());
        assert!(Tableau::new(vec![vec![2, 1]]).is_err());
        assert!(Tableau::new(vec![vec![1, 2], vec![1]]).is_err());
        assert!(Tableau::new(vec![vec![0, 1]]).is_err());
        assert!(Tableau::new(vec![vec![1, 1]]).is_err());
        assert!(Tableau::new(vec![vec![1], vec![]]).is_err());
    }

    #[test]
    fn shape_and_size() {
        let tab = t(&[&[1, 3, 5], &[2, 4]]);
        assert_eq!(tab.shape(), Partition::parse("3,2").unwrap());
        assert_eq!(tab.size(), 5);
        assert_eq!(Tableau::empty().shape(), Partition::empty());
    }

    #[test]
    fn standardness() {
        assert!(t(&[&[1, 2], &[3]]).is_standard());
        assert!(!t(&[&[1, 2], &[4]]).is_standard());
        assert!(!t(&[&[2, 3], &[4]]).is_standard());
        assert!(Tableau::empty().is_standard());
    }

    #[test]
    fn position_lookup() {
        let tab = t(&[&[1, 3], &[2]]);
        assert_eq!(tab.position_of(1), Some((0, 0)));
        assert_eq!(tab.position_of(3), Some((0, 1)));
        assert_eq!(tab.position_of(2), Some((1, 0)));
        assert_eq!(tab.position_of(4), None);
    }

    #[test]
    fn standard_enumeration_of_small_shapes() {
        let two_one = Tableau::standard_of_shape(&Partition::parse("2,1").unwrap());
        assert_eq!(two_one.len(), 2);
        assert!(two_one.contains(&t(&[&[1, 2], &[3]])));
        assert!(two_one.contains(&t(&[&[1, 3], &[2]])));

        let row = Tableau::standard_of_shape(&Partition::row(4));
        assert_eq!(row, vec![t(&[&[1, 2, 3, 4]])]);

        let col = Tableau::standard_of_shape(&Partition::column(3));
        assert_eq!(col, vec![t(&[&[1], &[2], &[3]])]);
    }

    #[test]
    fn standard_enumeration_matches_hook_counts() {
        for n in 0..=7 {
            for shape in Partition::all(n) {
                let tableaux = Tableau::standard_of_shape(&shape);
                assert_eq!(
                    num_bigint::BigUint::from(tableaux.len()),
                    shape.hook_count(),
                    "shape {shape}"
                );
                let mut dedup = tableaux.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), tableaux.len(), "duplicates for {shape}");
                for tab in &tableaux {
                    assert!(tab.is_standard());
                    assert_eq!(tab.shape(), shape);
                }
            }
        }
    }

    #[test]
    fn display_aligns_columns() {
        let tab = t(&[&[1, 3], &[2]]);
        assert_eq!(tab.to_string(), "1 3\n2");
    }
}
