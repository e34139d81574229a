//! Jordan normal form of unipotent matrices over a prime field.
//!
//! A unipotent matrix has all eigenvalues 1, so its Jordan form is determined
//! by the partition of block sizes. The type is read off rank profiles of the
//! nilpotent part N = a - I: the number of blocks of size at least k equals
//! rank N^{k-1} - rank N^k. A conjugating matrix is built from Jordan chains
//! chosen top down, longest chains first, with chain tops drawn from a
//! deterministic scan of each kernel's echelon basis, so the output depends
//! only on the input matrix.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::{MatFq, RowSpace};
use crate::partitions::Partition;

/// A unipotent matrix together with its Jordan form data: `conjugator` is an
/// invertible Q with Q^{-1} a Q equal to `jordan_matrix(type)`.
#[derive(Clone, Debug)]
pub struct JordanData {
    pub jordan_type: Partition,
    pub conjugator: MatFq,
}

/// Block diagonal unipotent matrix with upper Jordan blocks of the given
/// sizes, largest first.
pub fn jordan_matrix(field: PrimeField, shape: &Partition) -> MatFq {
    let n = shape.size();
    let mut m = MatFq::identity(field, n);
    let mut offset = 0;
    for &part in shape.parts() {
        for i in 0..part - 1 {
            m.set(offset + i, offset + i + 1, 1);
        }
        offset += part;
    }
    m
}

/// Partition of Jordan block sizes of a unipotent matrix.
pub fn jordan_type_of(a: &MatFq) -> Result<Partition> {
    let n = a.rows();
    if !a.is_unipotent() {
        return Err(Error::NotUnipotent);
    }
    let nil = a.minus_identity();
    // blocks_ge[k] = number of blocks of size >= k+1 = rank N^k - rank N^{k+1}
    let mut ranks = vec![n];
    let mut power = nil.clone();
    while ranks[ranks.len() - 1] > 0 {
        ranks.push(power.rank());
        power = power.mul(&nil);
    }
    let blocks_ge: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    Ok(Partition::new(blocks_ge)?.conjugate())
}

/// Jordan type plus a conjugator into the Jordan matrix of that type.
///
/// Chains are assembled from the top: for each block size k, chain tops are
/// vectors of ker N^k independent modulo ker N^{k-1} + N ker N^{k+1}, found by
/// scanning the echelon nullspace basis of N^k. Each chain contributes the
/// columns N^{k-1}v, ..., Nv, v, so column blocks match the Jordan blocks.
pub fn jordan_data(a: &MatFq) -> Result<JordanData> {
    let n = a.rows();
    let field = a.field();
    let shape = jordan_type_of(a)?;
    if n == 0 {
        return Ok(JordanData {
            jordan_type: shape,
            conjugator: MatFq::identity(field, 0),
        });
    }
    let nil = a.minus_identity();
    let largest = shape.parts()[0];

    // powers[k] = N^k for k = 0..=largest
    let mut powers = vec![MatFq::identity(field, n)];
    for k in 1..=largest {
        powers.push(powers[k - 1].mul(&nil));
    }
    let kernel_basis: Vec<Vec<Vec<u64>>> = powers.iter().map(MatFq::nullspace).collect();
    let conj = shape.conjugate();
    let blocks_ge = |k: usize| -> usize {
        if k == 0 || k > largest {
            0
        } else {
            conj.parts()[k - 1]
        }
    };

    let mut chains: Vec<Vec<Vec<u64>>> = Vec::new();
    for k in (1..=largest).rev() {
        let wanted = blocks_ge(k) - blocks_ge(k + 1);
        if wanted == 0 {
            continue;
        }
        // Span of ker N^{k-1} and N ker N^{k+1}; tops must leave this span.
        let mut occupied = RowSpace::new(field, n);
        for v in &kernel_basis[k - 1] {
            occupied.insert(v.clone());
        }
        if k < largest {
            for v in &kernel_basis[k + 1] {
                occupied.insert(nil.mul_vec(v));
            }
        }
        let mut found = 0;
        for cand in &kernel_basis[k] {
            if found == wanted {
                break;
            }
            if occupied.insert(cand.clone()) {
                let mut chain = vec![cand.clone()];
                for _ in 1..k {
                    let prev = chain.last().expect("nonempty chain");
                    chain.push(nil.mul_vec(prev));
                }
                chain.reverse();
                chains.push(chain);
                found += 1;
            }
        }
        assert_eq!(found, wanted, "kernel basis exhausted at height {k}");
    }

    let columns: Vec<Vec<u64>> = chains.into_iter().flatten().collect();
    let conjugator = MatFq::from_columns(field, &columns)?;
    let check = conjugator.inverse()?.mul(a).mul(&conjugator);
    assert_eq!(
        check,
        jordan_matrix(field, &shape),
        "chain construction must reproduce the Jordan matrix"
    );
    Ok(JordanData {
        jordan_type: shape,
        conjugator,
    })
}
