//! Multi-indices of the three-dimensional Hermite basis and their ranking.
//!
//! Indices are ordered by ascending degree and, within one degree,
//! lexicographically descending on `(a1, a2, a3)`:
//! `(0,0,0), (1,0,0), (0,1,0), (0,0,1), (2,0,0), (1,1,0), ...`.
//! The rank of an index does not depend on the truncation order, so the same
//! numbering is shared by coefficient vectors of every order and by the
//! on-disk tensor cache.

use std::fmt;

/// Identifier of the ordering above, written into cache headers.
pub const ORDERING_TAG: [u8; 4] = *b"DMLD";

/// Triple `(a1, a2, a3)` of non-negative exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub [u32; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0, 0]);

    pub const fn new(a1: u32, a2: u32, a3: u32) -> Self {
        MultiIndex([a1, a2, a3])
    }

    /// Unit index `e_d` for axis `d` in `0..3`.
    pub fn unit(d: usize) -> Self {
        let mut a = [0; 3];
        a[d] = 1;
        MultiIndex(a)
    }

    pub fn degree(&self) -> u32 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn get(&self, d: usize) -> u32 {
        self.0[d]
    }

    /// Rank in the degree-major ordering.
    pub fn rank(&self) -> usize {
        let n = self.degree() as usize;
        let s = (self.0[1] + self.0[2]) as usize;
        basis_size_below(n) + s * (s + 1) / 2 + self.0[2] as usize
    }

    /// Inverse of [`MultiIndex::rank`].
    pub fn unrank(rank: usize) -> Self {
        let mut n = 0usize;
        while basis_size(n) <= rank {
            n += 1;
        }
        let mut pos = rank - basis_size_below(n);
        let mut s = 0usize;
        while pos > s {
            pos -= s + 1;
            s += 1;
        }
        let a3 = pos as u32;
        let a2 = s as u32 - a3;
        MultiIndex([(n - s) as u32, a2, a3])
    }

    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// `self ≼ other` componentwise.
    pub fn le(&self, other: &MultiIndex) -> bool {
        (0..3).all(|d| self.0[d] <= other.0[d])
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        Some(MultiIndex([
            self.0[0].checked_sub(other.0[0])?,
            self.0[1].checked_sub(other.0[1])?,
            self.0[2].checked_sub(other.0[2])?,
        ]))
    }

    /// Index shifted by `delta` along axis `d`, if it stays non-negative.
    pub fn shifted(&self, d: usize, delta: i32) -> Option<MultiIndex> {
        let v = self.0[d] as i64 + delta as i64;
        if v < 0 {
            return None;
        }
        let mut a = self.0;
        a[d] = v as u32;
        Some(MultiIndex(a))
    }

    /// All components even.
    pub fn is_even(&self) -> bool {
        self.0.iter().all(|a| a % 2 == 0)
    }

    /// Every `j ≼ self`.
    pub fn dominated(self) -> impl Iterator<Item = MultiIndex> {
        let [a, b, c] = self.0;
        (0..=a).flat_map(move |i| (0..=b).flat_map(move |j| (0..=c).map(move |k| MultiIndex([i, j, k]))))
    }

    /// Every `j ≼ self` with `self − j` componentwise even.
    pub fn dominated_same_parity(self) -> impl Iterator<Item = MultiIndex> {
        let [a, b, c] = self.0;
        (a % 2..=a).step_by(2).flat_map(move |i| {
            (b % 2..=b)
                .step_by(2)
                .flat_map(move |j| (c % 2..=c).step_by(2).map(move |k| MultiIndex([i, j, k])))
        })
    }

    /// Componentwise parity pattern as a 3-bit mask.
    #[inline]
    pub fn parity(&self) -> u8 {
        (self.0[0] & 1) as u8 | ((self.0[1] & 1) << 1) as u8 | ((self.0[2] & 1) << 2) as u8
    }
}

impl std::ops::Add for MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: MultiIndex) -> MultiIndex {
        MultiIndex([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Number of indices of degree at most `m`: (m+1)(m+2)(m+3)/6.
pub const fn basis_size(m: usize) -> usize {
    (m + 1) * (m + 2) * (m + 3) / 6
}

/// Number of indices of degree strictly below `n`.
pub const fn basis_size_below(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        basis_size(n - 1)
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Sentinel for a neighbour that falls outside the truncated basis.
pub const NONE: u32 = u32::MAX;

/// Truncated basis `{α : |α| ≤ m}` with precomputed neighbour ranks.
#[derive(Clone, Debug)]
pub struct IndexSet {
    m: usize,
    indices: Vec<MultiIndex>,
    plus: [Vec<u32>; 3],
    minus: [Vec<u32>; 3],
    minus2: [Vec<u32>; 3],
}

impl IndexSet {
    pub fn new(m: usize) -> Self {
        let n = basis_size(m);
        let indices: Vec<MultiIndex> = (0..n).map(MultiIndex::unrank).collect();
        let neighbour = |delta: i32| -> [Vec<u32>; 3] {
            std::array::from_fn(|d| {
                indices
                    .iter()
                    .map(|a| match a.shifted(d, delta) {
                        Some(b) if (b.degree() as usize) <= m => b.rank() as u32,
                        _ => NONE,
                    })
                    .collect()
            })
        };
        let plus = neighbour(1);
        let minus = neighbour(-1);
        let minus2 = neighbour(-2);
        IndexSet { m, indices, plus, minus, minus2 }
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn index(&self, rank: usize) -> MultiIndex {
        self.indices[rank]
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// Rank of `α + e_d`, or [`NONE`] when its degree exceeds the order.
    #[inline]
    pub fn plus(&self, d: usize, rank: usize) -> u32 {
        self.plus[d][rank]
    }

    /// Rank of `α − e_d`, or [`NONE`].
    #[inline]
    pub fn minus(&self, d: usize, rank: usize) -> u32 {
        self.minus[d][rank]
    }

    /// Rank of `α − 2e_d`, or [`NONE`].
    #[inline]
    pub fn minus2(&self, d: usize, rank: usize) -> u32 {
        self.minus2[d][rank]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_ranks_follow_fixed_ordering() {
        assert_eq!(MultiIndex::new(0, 0, 0).rank(), 0);
        assert_eq!(MultiIndex::new(1, 0, 0).rank(), 1);
        assert_eq!(MultiIndex::new(0, 1, 0).rank(), 2);
        assert_eq!(MultiIndex::new(0, 0, 1).rank(), 3);
        assert_eq!(MultiIndex::new(2, 0, 0).rank(), 4);
        assert_eq!(MultiIndex::new(1, 1, 0).rank(), 5);
        assert_eq!(MultiIndex::new(0, 0, 2).rank(), 9);
    }

    #[test]
    fn rank_unrank_are_inverse_up_to_degree_40() {
        let n = basis_size(40);
        for r in 0..n {
            let a = MultiIndex::unrank(r);
            assert!(a.degree() <= 40);
            assert_eq!(a.rank(), r);
        }
        assert_eq!(MultiIndex::unrank(n).degree(), 41);
    }

    #[test]
    fn basis_counts() {
        assert_eq!(basis_size(0), 1);
        assert_eq!(basis_size(2), 10);
        assert_eq!(basis_size(10), 286);
        assert_eq!(basis_size(30), 5456);
    }

    #[test]
    fn neighbour_tables_respect_truncation() {
        let set = IndexSet::new(3);
        let r = MultiIndex::new(1, 1, 1).rank();
        assert_eq!(set.plus(0, r), NONE);
        assert_eq!(set.minus(0, r) as usize, MultiIndex::new(0, 1, 1).rank());
        assert_eq!(set.minus2(0, r), NONE);
        let r = MultiIndex::new(2, 0, 0).rank();
        assert_eq!(set.minus2(0, r), 0);
        assert_eq!(set.plus(1, r) as usize, MultiIndex::new(2, 1, 0).rank());
    }
}
