//! Multi-indices and the graded monomial order.
//!
//! Monomials in `n` variables are ranked by total degree first, then
//! ascending lexicographically within a degree with the first variable most
//! significant. Position 0 is always the zero index. For `n = 2` the order
//! begins
//!
//! ```text
//! 0:(0,0)  1:(0,1)  2:(1,0)  3:(0,2)  4:(1,1)  5:(2,0)  6:(0,3) ...
//! ```
//!
//! Invariants:
//! - `position` and `monomial_at` are mutually inverse,
//! - `dimension(d)` counts monomials of total degree `<= d`, i.e. C(d+n, n),
//! - ranks are computed combinatorially, never by enumerating prefixes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial, one entry per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, var: usize) -> Self {
        let mut v = vec![0; n];
        v[var] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0[var]
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Decrement the exponent of `var`; `None` if it is already zero.
    pub fn lowered(&self, var: usize) -> Option<MultiIndex> {
        if self.0[var] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[var] -= 1;
        Some(MultiIndex(v))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    /// Graded order: total degree first, then ascending lex with the first
    /// variable most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Binomial coefficient C(n, k) as an exact big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Binomial coefficient small enough to fit a usize; panics on overflow,
/// which cannot happen for the index ranges this crate materializes.
fn binomial_usize(n: u64, k: u64) -> usize {
    binomial(n, k)
        .to_usize()
        .expect("monomial rank exceeds usize")
}

/// The graded monomial order on a fixed number of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedOrder {
    vars: usize,
}

impl GradedOrder {
    pub fn new(vars: usize) -> Self {
        assert!(vars >= 1, "at least one variable required");
        GradedOrder { vars }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// Number of monomials of total degree `<= d`: C(d+n, n).
    pub fn dimension(&self, d: u32) -> usize {
        binomial_usize(u64::from(d) + self.vars as u64, self.vars as u64)
    }

    /// Rank of `m` in the graded order.
    pub fn position(&self, m: &MultiIndex) -> Result<usize> {
        if m.len() != self.vars {
            return Err(Error::IndexLength {
                expected: self.vars,
                got: m.len(),
            });
        }
        let t = m.degree();
        // Everything of strictly smaller degree comes first.
        let mut rank = if t == 0 {
            return Ok(0);
        } else {
            binomial_usize(u64::from(t) - 1 + self.vars as u64, self.vars as u64)
        };
        // Within degree t, count vectors lexicographically smaller than m:
        // fix a strictly smaller leading exponent v < m_1, the remaining n-1
        // entries sum to t - v freely, contributing C((t-v) + n-2, n-2);
        // then recurse on the tail with the leading exponent pinned.
        let mut remaining = t;
        for pos in 0..self.vars {
            let e = m.exponent(pos);
            let tail_vars = (self.vars - pos - 1) as u64;
            if tail_vars == 0 {
                break;
            }
            for v in 0..e {
                rank += binomial_usize(
                    u64::from(remaining - v) + tail_vars - 1,
                    tail_vars - 1,
                );
            }
            remaining -= e;
        }
        Ok(rank)
    }

    /// Monomial at a given rank (inverse of [`GradedOrder::position`]).
    pub fn monomial_at(&self, mut rank: usize) -> MultiIndex {
        // Find the total degree: the largest t with dimension(t-1) <= rank.
        let mut t: u32 = 0;
        while self.dimension(t) <= rank {
            t += 1;
        }
        if t > 0 {
            rank -= self.dimension(t - 1);
        }
        // Peel off leading exponents.
        let mut exps = Vec::with_capacity(self.vars);
        let mut remaining = t;
        for pos in 0..self.vars {
            let tail_vars = (self.vars - pos - 1) as u64;
            if tail_vars == 0 {
                exps.push(remaining);
                break;
            }
            let mut v = 0u32;
            loop {
                let block = binomial_usize(
                    u64::from(remaining - v) + tail_vars - 1,
                    tail_vars - 1,
                );
                if rank < block {
                    break;
                }
                rank -= block;
                v += 1;
            }
            exps.push(v);
            remaining -= v;
        }
        MultiIndex(exps)
    }

    /// All monomials of total degree `<= d`, in order.
    pub fn monomials_up_to(&self, d: u32) -> Vec<MultiIndex> {
        (0..self.dimension(d)).map(|r| self.monomial_at(r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_variable_prefix() {
        let ord = GradedOrder::new(2);
        let expect = [
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![0, 2],
            vec![1, 1],
            vec![2, 0],
            vec![0, 3],
            vec![1, 2],
            vec![2, 1],
            vec![3, 0],
        ];
        for (r, exps) in expect.iter().enumerate() {
            let m = MultiIndex(exps.clone());
            assert_eq!(ord.position(&m).unwrap(), r, "rank of {m}");
            assert_eq!(ord.monomial_at(r), m, "monomial at {r}");
        }
    }

    #[test]
    fn round_trip_three_variables() {
        let ord = GradedOrder::new(3);
        for r in 0..ord.dimension(5) {
            let m = ord.monomial_at(r);
            assert_eq!(ord.position(&m).unwrap(), r);
        }
    }

    #[test]
    fn order_matches_comparator() {
        let ord = GradedOrder::new(3);
        let ms = ord.monomials_up_to(4);
        for w in ms.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn dimension_counts() {
        assert_eq!(GradedOrder::new(1).dimension(4), 5);
        assert_eq!(GradedOrder::new(2).dimension(4), 15);
        assert_eq!(GradedOrder::new(3).dimension(2), 10);
    }

    #[test]
    fn length_mismatch_rejected() {
        let ord = GradedOrder::new(2);
        assert!(ord.position(&MultiIndex(vec![1])).is_err());
    }
}
