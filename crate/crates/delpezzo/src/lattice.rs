// SPDX-License-Identifier: Apache-2.0

//! The odd unimodular lattices I^{1,n}, their canonical vector, roots and
//! exceptional vectors.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported `n` (the E_8 case, degree 1).
pub const MAX_RANK: usize = 8;

/// Bound on |v_0| for roots and exceptional vectors when n <= 8.
const E0_BOUND: i64 = 6;

/// Errors raised by lattice arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported rank n = {0} (need 1 <= n <= 8)")]
    UnsupportedRank(usize),
    #[error("degree {0} outside 1..=8")]
    UnsupportedDegree(u32),
}

/// I^{1,n} with form diag(1, -1, ..., -1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSpace {
    n: usize,
}

impl QuadraticSpace {
    /// Space of rank `n + 1`. Any `n >= 1` is accepted; enumeration needs `n <= 8`.
    pub fn new(n: usize) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::UnsupportedRank(n));
        }
        Ok(Self { n })
    }

    /// The space I^{1,9-d} attached to degree `d`.
    pub fn for_degree(d: u32) -> Result<Self, LatticeError> {
        if !(1..=8).contains(&d) {
            return Err(LatticeError::UnsupportedDegree(d));
        }
        Ok(Self { n: 9 - d as usize })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n + 1
    }

    pub fn degree(&self) -> i64 {
        9 - self.n as i64
    }

    /// Basis vector e_i, 0 <= i <= n.
    pub fn basis(&self, i: usize) -> LatticeVector {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        LatticeVector::from(c)
    }

    /// The canonical vector k = (-3, 1, ..., 1).
    pub fn canonical(&self) -> LatticeVector {
        let mut c = vec![1; self.rank()];
        c[0] = -3;
        LatticeVector::from(c)
    }

    fn check(&self, v: &LatticeVector) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// a_0 b_0 - sum_{i>=1} a_i b_i.
    pub fn inner_product(&self, a: &LatticeVector, b: &LatticeVector) -> Result<i64, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.dot(b))
    }

    /// All v with v^2 = -1 and v.k = -1, lexicographically sorted.
    pub fn enumerate_exceptional(&self) -> Result<Vec<LatticeVector>, LatticeError> {
        // v.k = -3 v0 - sum vi = -1 and v0^2 - sum vi^2 = -1
        self.enumerate(|v0| (1 - 3 * v0, v0 * v0 + 1))
    }

    /// All v with v^2 = -2 and v.k = 0, lexicographically sorted.
    pub fn enumerate_roots(&self) -> Result<Vec<LatticeVector>, LatticeError> {
        self.enumerate(|v0| (-3 * v0, v0 * v0 + 2))
    }

    fn enumerate(&self, target: impl Fn(i64) -> (i64, i64)) -> Result<Vec<LatticeVector>, LatticeError> {
        if self.n > MAX_RANK {
            return Err(LatticeError::UnsupportedRank(self.n));
        }
        let mut out = Vec::new();
        let mut buf = vec![0i64; self.rank()];
        for v0 in -E0_BOUND..=E0_BOUND {
            let (sum, sq) = target(v0);
            buf[0] = v0;
            descend(&mut buf, 1, sum, sq, &mut out);
        }
        out.sort();
        Ok(out)
    }
}

/// Fills buf[i..] with integers of given sum and sum of squares.
fn descend(buf: &mut [i64], i: usize, sum: i64, sq: i64, out: &mut Vec<LatticeVector>) {
    let left = (buf.len() - i) as i64;
    if left == 0 {
        if sum == 0 && sq == 0 {
            out.push(LatticeVector::from(buf.to_vec()));
        }
        return;
    }
    // Cauchy-Schwarz: sum^2 <= left * sq.
    if sq < 0 || sum * sum > left * sq {
        return;
    }
    let bound = isqrt(sq);
    for x in -bound..=bound {
        buf[i] = x;
        descend(buf, i + 1, sum - x, sq - x * x, out);
    }
    buf[i] = 0;
}

fn isqrt(x: i64) -> i64 {
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Integer vector in the basis e_0..e_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector {
    coords: Vec<i64>,
}

impl From<Vec<i64>> for LatticeVector {
    fn from(coords: Vec<i64>) -> Self {
        Self { coords }
    }
}

impl LatticeVector {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Form value without a rank check; callers guarantee equal lengths.
    pub fn dot(&self, other: &Self) -> i64 {
        debug_assert_eq!(self.len(), other.len());
        let mut it = self.coords.iter().zip(&other.coords);
        let (a0, b0) = it.next().map(|(a, b)| (*a, *b)).unwrap_or((0, 0));
        a0 * b0 - it.map(|(a, b)| a * b).sum::<i64>()
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    pub fn scaled_add(&self, c: i64, other: &Self) -> Self {
        Self::from(self.coords.iter().zip(&other.coords).map(|(a, b)| a + c * b).collect::<Vec<_>>())
    }

    pub fn neg(&self) -> Self {
        Self::from(self.coords.iter().map(|a| -a).collect::<Vec<_>>())
    }

    /// First nonzero coordinate is positive.
    pub fn is_positive(&self) -> bool {
        self.coords.iter().find(|c| **c != 0).is_some_and(|c| *c > 0)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
