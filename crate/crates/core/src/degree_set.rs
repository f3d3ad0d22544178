//! Integer degree sets over a closed interval, their strands, and balanced pairs.
//!
//! An element of a [`DegreeSet`] is a *degree*; an integer of the interval that
//! is not a member is a *nondegree*. The nondegrees cut the interval into
//! linear strands, some of which may be empty.

use std::fmt;
use std::ops::RangeInclusive;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("interval [{lo},{hi}] is empty")]
    EmptyInterval { lo: i64, hi: i64 },
    #[error("{value} lies outside the interval [{lo},{hi}]")]
    OutOfInterval { value: i64, lo: i64, hi: i64 },
    #[error("duplicate member {0}")]
    Duplicate(i64),
    #[error("sets live over different intervals [{0},{1}] and [{2},{3}]")]
    IntervalMismatch(i64, i64, i64, i64),
}

/// A subset of the integer interval `[lo, hi]`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeSet {
    lo: i64,
    hi: i64,
    members: Vec<i64>,
}

impl DegreeSet {
    /// Builds a set from members in any order. Duplicates and members outside
    /// `[lo, hi]` are rejected.
    pub fn new(lo: i64, hi: i64, members: impl IntoIterator<Item = i64>) -> Result<Self, SetError> {
        if lo > hi {
            return Err(SetError::EmptyInterval { lo, hi });
        }
        let mut members: Vec<i64> = members.into_iter().collect();
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(SetError::Duplicate(w[0]));
            }
        }
        if let Some(&value) = members.iter().find(|&&x| x < lo || x > hi) {
            return Err(SetError::OutOfInterval { value, lo, hi });
        }
        Ok(DegreeSet { lo, hi, members })
    }

    /// The whole interval `[lo, hi]`.
    pub fn full(lo: i64, hi: i64) -> Result<Self, SetError> {
        DegreeSet::new(lo, hi, lo..=hi)
    }

    /// The same members regarded as a subset of another interval.
    pub fn over(&self, lo: i64, hi: i64) -> Result<Self, SetError> {
        DegreeSet::new(lo, hi, self.members.iter().copied())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn interval(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn members(&self) -> &[i64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn first(&self) -> Option<i64> {
        self.members.first().copied()
    }

    pub fn last(&self) -> Option<i64> {
        self.members.last().copied()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.members.iter().copied()
    }

    /// Integers of the interval that are not members, increasing.
    pub fn nondegrees(&self) -> Vec<i64> {
        self.interval().filter(|&x| !self.contains(x)).collect()
    }

    /// Number of degrees in `[lo, u]`.
    pub fn degrees_up_to(&self, u: i64) -> usize {
        self.members.partition_point(|&x| x <= u)
    }

    /// Number of nondegrees in `[lo, u]`.
    pub fn nondegrees_up_to(&self, u: i64) -> usize {
        if u < self.lo {
            return 0;
        }
        let u = u.min(self.hi);
        (u - self.lo + 1) as usize - self.degrees_up_to(u)
    }

    /// Number of nondegrees in the interval.
    pub fn span(&self) -> usize {
        (self.hi - self.lo + 1) as usize - self.members.len()
    }

    pub fn strands(&self) -> StrandDecomposition {
        strands(self)
    }
}

impl fmt::Display for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.members.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Strand starts `lo = x_0 < x_1 < ... < x_s` of a degree set, plus the
/// closing bound `x_{s+1} = hi + 2`. Strand `i` is `[x_i, x_{i+1} - 2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandDecomposition {
    lo: i64,
    hi: i64,
    starts: Vec<i64>,
}

impl StrandDecomposition {
    /// The strand starts `x_0 .. x_s`, without the closing bound.
    pub fn starts(&self) -> &[i64] {
        &self.starts
    }

    /// The closing bound `hi + 2`.
    pub fn end(&self) -> i64 {
        self.hi + 2
    }

    /// `x_i` for `0 <= i <= s + 1`.
    pub fn bound(&self, i: usize) -> i64 {
        if i < self.starts.len() {
            self.starts[i]
        } else if i == self.starts.len() {
            self.end()
        } else {
            panic!("strand bound index {i} beyond s + 1 = {}", self.starts.len())
        }
    }

    /// Strand span: the number of nondegrees.
    pub fn span(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn len(&self) -> usize {
        self.starts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Strand `i` as an inclusive range; empty when `x_{i+1} = x_i + 1`.
    pub fn strand(&self, i: usize) -> RangeInclusive<i64> {
        self.bound(i)..=self.bound(i + 1) - 2
    }

    pub fn strands(&self) -> Vec<RangeInclusive<i64>> {
        (0..self.len()).map(|i| self.strand(i)).collect()
    }

    pub fn interval(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

/// Splits `x` into strands: a new strand starts right after each nondegree.
pub fn strands(x: &DegreeSet) -> StrandDecomposition {
    let mut starts = vec![x.lo];
    starts.extend(x.nondegrees().into_iter().map(|g| g + 1));
    StrandDecomposition { lo: x.lo, hi: x.hi, starts }
}

fn balanced_by_counts(x: &DegreeSet, y: &DegreeSet) -> bool {
    x.interval()
        .all(|u| x.degrees_up_to(u) > y.nondegrees_up_to(u))
}

fn balanced_by_strand_starts(x: &DegreeSet, y: &DegreeSet) -> bool {
    let d = x.members();
    if d.first() != Some(&x.lo) {
        return false;
    }
    let starts = strands(y);
    (1..starts.len()).all(|i| d.get(i).is_some_and(|&di| starts.bound(i) > di))
}

/// Whether `(x, y)` is a balanced pair: every prefix `[lo, u]` holds more
/// degrees of `x` than nondegrees of `y`.
///
/// The prefix count and the strand-start criterion `y_i > d_i` are both
/// evaluated; disagreement is a bug and panics.
pub fn is_balanced(x: &DegreeSet, y: &DegreeSet) -> Result<bool, SetError> {
    if x.interval() != y.interval() {
        return Err(SetError::IntervalMismatch(x.lo, x.hi, y.lo, y.hi));
    }
    let by_counts = balanced_by_counts(x, y);
    let by_starts = balanced_by_strand_starts(x, y);
    assert_eq!(
        by_counts, by_starts,
        "balancedness criteria disagree for {x} and {y} over [{},{}]",
        x.lo, x.hi
    );
    Ok(by_counts)
}

/// Elementwise reflection `x -> n - x`, as a subset of `[0, n]`.
pub fn reflect(x: &DegreeSet, n: i64) -> Result<DegreeSet, SetError> {
    DegreeSet::new(0, n, x.iter().map(|v| n - v)).map_err(|e| match e {
        SetError::OutOfInterval { value, .. } => SetError::OutOfInterval { value: n - value, lo: 0, hi: n },
        other => other,
    })
}
