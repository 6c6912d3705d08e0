//! Piecewise-sign functions on an interval.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};

/// Sorted interior breakpoints of a piecewise-constant sign function on
/// `[lo, hi]`, with one sign per piece.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointPartition<T> {
    lo: T,
    hi: T,
    breakpoints: Vec<T>,
    signs: Vec<i8>,
}

/// Coordinate types a partition can be built over.
pub trait Coordinate:
    Copy + PartialOrd + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    /// Two values closer than this are merged.
    fn same(a: Self, b: Self) -> bool;
    fn midpoint(a: Self, b: Self) -> Self;
    fn from_sign(s: i8) -> Self;
}

impl Coordinate for f64 {
    fn same(a: Self, b: Self) -> bool {
        (a - b).abs() <= 1e-14
    }
    fn midpoint(a: Self, b: Self) -> Self {
        0.5 * (a + b)
    }
    fn from_sign(s: i8) -> Self {
        s as f64
    }
}

impl Coordinate for num_rational::Rational64 {
    fn same(a: Self, b: Self) -> bool {
        a == b
    }
    fn midpoint(a: Self, b: Self) -> Self {
        (a + b) / 2
    }
    fn from_sign(s: i8) -> Self {
        Self::from_integer(s as i64)
    }
}

impl<T: Coordinate> BreakpointPartition<T> {
    /// Merges `points` into a partition of `[lo, hi]`. Points outside the open
    /// interval are dropped and near-duplicates collapse; the sign of each piece
    /// is `sign_at(midpoint)`.
    pub fn from_points<I, F>(lo: T, hi: T, points: I, mut sign_at: F) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        F: FnMut(T) -> i8,
    {
        if !(lo < hi) {
            return Err(Error::InvalidArgument("empty partition domain".into()));
        }
        let mut pts: Vec<T> = points
            .into_iter()
            .filter(|&x| x > lo && x < hi && !T::same(x, lo) && !T::same(x, hi))
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).expect("breakpoints must be comparable"));
        pts.dedup_by(|b, a| T::same(*a, *b));
        let signs = std::iter::once(lo)
            .chain(pts.iter().copied())
            .zip(pts.iter().copied().chain(std::iter::once(hi)))
            .map(|(a, b)| sign_at(T::midpoint(a, b)))
            .collect();
        Ok(Self {
            lo,
            hi,
            breakpoints: pts,
            signs,
        })
    }

    pub fn domain(&self) -> (T, T) {
        (self.lo, self.hi)
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `(start, end, sign)` for each piece.
    pub fn pieces(&self) -> impl Iterator<Item = (T, T, i8)> + '_ {
        std::iter::once(self.lo)
            .chain(self.breakpoints.iter().copied())
            .zip(self.breakpoints.iter().copied().chain(std::iter::once(self.hi)))
            .zip(self.signs.iter().copied())
            .map(|((a, b), s)| (a, b, s))
    }

    /// Integral of the sign function over the domain.
    pub fn signed_measure(&self) -> T {
        self.pieces()
            .fold(T::zero(), |acc, (a, b, s)| acc + T::from_sign(s) * (b - a))
    }

    /// Total length of the pieces with sign `+1`.
    pub fn positive_measure(&self) -> T {
        self.pieces()
            .filter(|&(_, _, s)| s > 0)
            .fold(T::zero(), |acc, (a, b, _)| acc + (b - a))
    }
}
