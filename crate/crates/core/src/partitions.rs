//! Integer partitions and the statistics the sampler and oracle need.
//!
//! Conventions, used consistently everywhere: parts are weakly decreasing and
//! positive; the empty partition of 0 is allowed. When a partition `child` is
//! obtained from `parent` by removing one box, the removal index r is the
//! largest 1-indexed position among parts of `parent` equal to the decremented
//! part, and m is the multiplicity of that part value in `parent`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
            }
        }
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} contains a zero part")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition (n), or empty for n = 0.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Partition { parts: vec![n] }
        }
    }

    /// The one-column partition (1^n).
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    /// Parses "2,1,1". The empty string is rejected.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidPartition(s.to_string()))
            })
            .collect::<Result<_>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// The number being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (0..cols).map(|j| self.parts.iter().filter(|&&p| p > j).count()).collect();
        Partition { parts }
    }

    /// All partitions of n, in descending lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=remaining.min(max)).rev() {
                cur.push(p);
                rec(remaining - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n.max(1), &mut Vec::new(), &mut out);
        out
    }

    /// Partitions obtained by removing one box, each exactly once (one per
    /// removable corner), ordered by the index of the shortened part.
    pub fn remove_box_set(&self) -> Vec<Partition> {
        let k = self.parts.len();
        let mut out = Vec::new();
        for i in 0..k {
            // Only the last part of a run of equal parts keeps the result sorted.
            if i + 1 < k && self.parts[i + 1] == self.parts[i] {
                continue;
            }
            let mut parts = self.parts.clone();
            parts[i] -= 1;
            if parts[i] == 0 {
                parts.remove(i);
            }
            out.push(Partition { parts });
        }
        out
    }

    /// The removal index r: 1-indexed position of the decremented part,
    /// maximal among equal parts. Errors unless `child` is self minus one box.
    pub fn removal_index(&self, child: &Partition) -> Result<usize> {
        if !self.remove_box_set().contains(child) {
            return Err(Error::NotBoxRemoval { parent: self.to_string(), child: child.to_string() });
        }
        let decremented = (0..self.parts.len())
            .find(|&i| child.parts.get(i).copied().unwrap_or(0) != self.parts[i])
            .expect("child differs in some part");
        let v = self.parts[decremented];
        Ok((0..self.parts.len()).rev().find(|&j| self.parts[j] == v).unwrap() + 1)
    }

    /// The multiplicity m of the decremented part value in self.
    pub fn removal_multiplicity(&self, child: &Partition) -> Result<usize> {
        let r = self.removal_index(child)?;
        let v = self.parts[r - 1];
        Ok(self.parts.iter().filter(|&&p| p == v).count())
    }

    /// 1-indexed coordinates where a Jordan block of this shape starts:
    /// {1, l1+1, l1+l2+1, ...}.
    pub fn block_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut acc = 1;
        for &p in &self.parts {
            out.push(acc);
            acc += p;
        }
        out
    }

    /// Number of eigenvectors of the unipotent Jordan matrix J_self whose
    /// quotient has type `child`: q^r - q^(r-m).
    pub fn eigenvector_set_size(&self, child: &Partition, q: u64) -> Result<BigUint> {
        let r = self.removal_index(child)? as u32;
        let m = self.removal_multiplicity(child)? as u32;
        let q = BigUint::from(q);
        Ok(q.pow(r) - q.pow(r - m))
    }

    /// b(lambda) = sum (i-1) * lambda_i, the degree of the fixed-point count.
    pub fn b_stat(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    /// Dominance order: self <= other, both partitioning the same n.
    pub fn dominance_leq(&self, other: &Partition) -> bool {
        assert_eq!(self.size(), other.size(), "dominance compares partitions of the same n");
        let mut a = 0usize;
        let mut b = 0usize;
        let k = self.parts.len().max(other.parts.len());
        for i in 0..k {
            a += self.parts.get(i).copied().unwrap_or(0);
            b += other.parts.get(i).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }

    /// Number of standard Young tableaux of this shape, by the hook length
    /// formula: n! / product of hooks.
    pub fn hook_count(&self) -> BigUint {
        let n = self.size();
        let conj = self.conjugate();
        let mut hooks = BigUint::one();
        for (i, &p) in self.parts.iter().enumerate() {
            for j in 0..p {
                let arm = p - 1 - j;
                let leg = conj.parts[j] - 1 - i;
                hooks *= BigUint::from(arm + leg + 1);
            }
        }
        let mut fact = BigUint::one();
        for k in 2..=n {
            fact *= BigUint::from(k);
        }
        let f = &fact / &hooks;
        assert_eq!(&f * &hooks, fact, "hook product must divide n!");
        f
    }

    /// Dimension of the conjugacy orbit of a nilpotent of this Jordan type:
    /// n^2 - sum of squared conjugate parts.
    pub fn orbit_dim(&self) -> usize {
        let n = self.size();
        let sq: usize = self.conjugate().parts.iter().map(|&c| c * c).sum();
        n * n - sq
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
