//! Green polynomials: the number of complete flags fixed by a unipotent
//! matrix of Jordan type lambda, as a polynomial in the field order q.
//!
//! The table is built by the box removal recurrence. Removing a box from row
//! r of lambda (where r is the lowest row of its equal run, m the run
//! multiplicity) contributes (q^r - q^{r-m})/(q - 1) times the count of the
//! smaller shape. The division is carried out as exact polynomial division;
//! a nonzero remainder would indicate a broken recurrence, not a rounding
//! concern, so it panics.

use crate::partitions::Partition;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

/// Dense integer polynomial in q, coefficients stored in ascending degree
/// order with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPolynomial::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = IntPolynomial { coeffs: vec![c] };
        p.normalize();
        p
    }

    pub fn monomial(coeff: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = coeff;
        let mut p = IntPolynomial { coeffs };
        p.normalize();
        p
    }

    /// Ascending coefficients, e.g. `[1, 2]` for 2q + 1.
    pub fn from_coeffs<I: Into<BigInt> + Clone>(coeffs: &[I]) -> Self {
        let mut p = IntPolynomial {
            coeffs: coeffs.iter().cloned().map(Into::into).collect(),
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        let mut p = IntPolynomial { coeffs };
        p.normalize();
        p
    }

    pub fn sub(&self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[i] -= c;
        }
        let mut p = IntPolynomial { coeffs };
        p.normalize();
        p
    }

    pub fn mul(&self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = IntPolynomial { coeffs };
        p.normalize();
        p
    }

    /// Exact quotient, or None when the division leaves a remainder or hits
    /// a coefficient the divisor's leading coefficient does not divide.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        let dd = divisor.degree().expect("nonzero divisor");
        let nd = self.degree().expect("nonzero dividend");
        if nd < dd {
            return None;
        }
        let lead = divisor.leading_coeff().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            if !(&top % lead).is_zero() {
                return None;
            }
            let c = &top / lead;
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut p = IntPolynomial { coeffs: quot };
        p.normalize();
        Some(p)
    }

    pub fn eval_u64(&self, q: u64) -> BigInt {
        let x = BigInt::from(q);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && deg > 0;
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            match deg {
                0 => {}
                1 => write!(f, "{}q", if unit_coeff { "" } else { "*" })?,
                _ => write!(f, "{}q^{deg}", if unit_coeff { "" } else { "*" })?,
            }
        }
        Ok(())
    }
}

/// Weight of one branch of the recurrence: the number of fixed lines
/// contributed by a box removal with index r and multiplicity m, equal to
/// (q^r - q^{r-m})/(q - 1).
pub fn eigenline_polynomial(r: usize, m: usize) -> IntPolynomial {
    assert!(m >= 1 && m <= r, "invalid removal data r={r} m={m}");
    let numer = IntPolynomial::monomial(BigInt::one(), r)
        .sub(&IntPolynomial::monomial(BigInt::one(), r - m));
    let q_minus_one = IntPolynomial::from_coeffs(&[-1i64, 1]);
    numer
        .div_exact(&q_minus_one)
        .expect("q^r - q^{r-m} is divisible by q - 1")
}

/// Memoizing table of Green polynomials indexed by partition.
#[derive(Default)]
pub struct GreenTable {
    memo: HashMap<Partition, IntPolynomial>,
}

impl GreenTable {
    pub fn new() -> Self {
        GreenTable::default()
    }

    pub fn polynomial(&mut self, shape: &Partition) -> IntPolynomial {
        if let Some(p) = self.memo.get(shape) {
            return p.clone();
        }
        let result = if shape.is_empty() {
            IntPolynomial::one()
        } else {
            let mut acc = IntPolynomial::zero();
            for child in shape.remove_box_set() {
                let r = shape.removal_index(&child).expect("child from removal set");
                let m = shape
                    .removal_multiplicity(&child)
                    .expect("child from removal set");
                let weight = eigenline_polynomial(r, m);
                acc = acc.add(&weight.mul(&self.polynomial(&child)));
            }
            acc
        };
        self.memo.insert(shape.clone(), result.clone());
        result
    }

    /// Value at a concrete field order. Counts are nonnegative for q >= 1.
    pub fn eval(&mut self, shape: &Partition, q: u64) -> BigUint {
        self.polynomial(shape)
            .eval_u64(q)
            .to_biguint()
            .expect("fixed flag counts are nonnegative")
    }
}

/// One-off Green polynomial; building a [`GreenTable`] is cheaper when many
/// shapes are needed.
pub fn green_polynomial(shape: &Partition) -> IntPolynomial {
    GreenTable::new().polynomial(shape)
}
