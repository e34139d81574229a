//! Row insertion RSK for permutations, its inverse, and Knuth classes.
//!
//! `rsk` sends a permutation to a pair (P, Q) of standard tableaux of equal
//! shape: P by repeated row insertion of the one line word, Q by recording
//! where each insertion grows the shape. The map is a bijection, inverted by
//! unwinding insertions from the largest recording entry downward. The set of
//! permutations sharing a P symbol (a Knuth class) is recovered by pairing
//! that P with every standard tableau of its shape.

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tableau::Tableau;

/// Insertion and recording tableaux of a permutation.
pub fn rsk(w: &Permutation) -> (Tableau, Tableau) {
    let n = w.n();
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        let mut x = w.apply(k) + 1;
        let mut row = 0;
        loop {
            if row == p.len() {
                p.push(vec![x]);
                q.push(vec![k + 1]);
                break;
            }
            // first entry strictly larger than x gets bumped
            match p[row].iter().position(|&e| e > x) {
                None => {
                    p[row].push(x);
                    q[row].push(k + 1);
                    break;
                }
                Some(j) => {
                    std::mem::swap(&mut x, &mut p[row][j]);
                    row += 1;
                }
            }
        }
    }
    (
        Tableau::from_rows_unchecked(p),
        Tableau::from_rows_unchecked(q),
    )
}

/// Insertion tableau alone.
pub fn p_symbol(w: &Permutation) -> Tableau {
    rsk(w).0
}

/// Permutation mapping to the given tableau pair under `rsk`.
///
/// P and Q must be standard of the same shape; the recording tableau tells
/// which cell to unwind at each step, and reverse bumping walks the entry
/// back up to row zero.
pub fn rsk_inverse(p: &Tableau, q: &Tableau) -> Result<Permutation> {
    if p.shape() != q.shape() || !p.is_standard() || !q.is_standard() {
        return Err(Error::InvalidTableauPair(
            "tableaux must be standard of equal shape".to_string(),
        ));
    }
    let n = p.size();
    let mut rows: Vec<Vec<usize>> = p.rows().to_vec();
    let mut one_line = vec![0usize; n];
    for k in (1..=n).rev() {
        let (row, col) = q.position_of(k).expect("standard recording tableau");
        if col + 1 != rows[row].len() {
            return Err(Error::InvalidTableauPair(format!(
                "recording entry {k} is not at the end of its row"
            )));
        }
        let mut x = rows[row].pop().expect("nonempty row");
        if rows[row].is_empty() {
            rows.pop();
        }
        for upper in (0..row).rev() {
            // rightmost entry strictly smaller than x gets bumped back out
            let j = rows[upper]
                .iter()
                .rposition(|&e| e < x)
                .expect("reverse bump target");
            std::mem::swap(&mut x, &mut rows[upper][j]);
        }
        one_line[k - 1] = x;
    }
    Permutation::from_one_line(&one_line)
}

/// All permutations with the same insertion tableau as `w`, sorted.
pub fn p_class(w: &Permutation) -> Vec<Permutation> {
    let p = p_symbol(w);
    let mut class: Vec<Permutation> = Tableau::standard_of_shape(&p.shape())
        .iter()
        .map(|q| rsk_inverse(&p, q).expect("standard pair of equal shape"))
        .collect();
    class.sort();
    class
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::Partition;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn tab(rows: &[&[usize]]) -> Tableau {
        Tableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn identity_gives_single_row() {
        let (p, q) = rsk(&Permutation::identity(4));
        assert_eq!(p, tab(&[&[1, 2, 3, 4]]));
        assert_eq!(q, tab(&[&[1, 2, 3, 4]]));
    }

    #[test]
    fn reversal_gives_single_column() {
        let (p, q) = rsk(&Permutation::longest(4));
        assert_eq!(p, tab(&[&[1], &[2], &[3], &[4]]));
        assert_eq!(q, tab(&[&[1], &[2], &[3], &[4]]));
    }

    #[test]
    fn s3_insertion_tableaux() {
        assert_eq!(p_symbol(&perm("213")), tab(&[&[1, 3], &[2]]));
        assert_eq!(p_symbol(&perm("231")), tab(&[&[1, 3], &[2]]));
        assert_eq!(p_symbol(&perm("132")), tab(&[&[1, 2], &[3]]));
        assert_eq!(p_symbol(&perm("312")), tab(&[&[1, 2], &[3]]));
    }

    #[test]
    fn output_is_standard_of_equal_shape() {
        for w in Permutation::all(5) {
            let (p, q) = rsk(&w);
            assert!(p.is_standard(), "{w}");
            assert!(q.is_standard(), "{w}");
            assert_eq!(p.shape(), q.shape(), "{w}");
            assert_eq!(p.size(), 5);
        }
    }

    #[test]
    fn inverse_round_trips() {
        for n in 0..=6 {
            for w in Permutation::all(n) {
                let (p, q) = rsk(&w);
                assert_eq!(rsk_inverse(&p, &q).unwrap(), w);
            }
        }
    }

    #[test]
    fn inverse_permutation_swaps_tableaux() {
        for w in Permutation::all(6) {
            let (p, q) = rsk(&w);
            let (pi, qi) = rsk(&w.inverse());
            assert_eq!(pi, q, "{w}");
            assert_eq!(qi, p, "{w}");
        }
    }

    #[test]
    fn inverse_rejects_mismatched_pairs() {
        let p = tab(&[&[1, 2], &[3]]);
        let q = tab(&[&[1, 2, 3]]);
        assert!(rsk_inverse(&p, &q).is_err());
        let not_standard = tab(&[&[1, 4], &[2]]);
        assert!(rsk_inverse(&not_standard, &p).is_err());
    }

    #[test]
    fn class_of_3214_is_frozen() {
        let class = p_class(&perm("3214"));
        let expected: Vec<Permutation> =
            ["3214", "3241", "3421"].iter().map(|s| perm(s)).collect();
        assert_eq!(class, expected);
        assert_eq!(
            p_symbol(&perm("3214")).shape(),
            Partition::parse("2,1,1").unwrap()
        );
    }

    #[test]
    fn classes_partition_the_symmetric_group() {
        for n in 1..=5 {
            let mut seen = std::collections::BTreeSet::new();
            for w in Permutation::all(n) {
                let class = p_class(&w);
                assert!(class.contains(&w), "{w} missing from its own class");
                let shape = p_symbol(&w).shape();
                assert_eq!(
                    num_bigint::BigUint::from(class.len()),
                    shape.hook_count(),
                    "class size of {w}"
                );
                for v in &class {
                    assert_eq!(p_symbol(v), p_symbol(&w));
                }
                if class[0] == w {
                    for v in class {
                        assert!(seen.insert(v), "classes overlap");
                    }
                }
            }
            let total: usize = (1..=n).product();
            assert_eq!(seen.len(), total, "classes must cover S_{n}");
        }
    }

    #[test]
    fn shape_of_32145() {
        assert_eq!(
            p_symbol(&perm("32145")).shape(),
            Partition::parse("3,1,1").unwrap()
        );
    }
}
