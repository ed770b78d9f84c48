//! Finite unions of closed intervals on the extended real line.

use crate::error::{Error, Result};
use crate::geom::TOL;

/// Closed interval `[lo, hi]`; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn length(&self) -> f64 {
        if self.lo == self.hi {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// Sorted, pairwise disjoint closed intervals.
///
/// Intervals closer than [`TOL`] are merged, so a normalized union never
/// holds two components separated by a gap of length `<= TOL`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn single(iv: Interval) -> Self {
        IntervalUnion {
            intervals: vec![iv],
        }
    }

    /// Normalizes raw `(lo, hi)` pairs. Fails on any pair with `lo > hi`.
    pub fn from_pairs(raw: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let ivs = raw
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_intervals(ivs))
    }

    /// Sorts and merges intervals that overlap or touch.
    pub fn from_intervals(mut ivs: Vec<Interval>) -> Self {
        if ivs.len() > 4096 {
            use rayon::slice::ParallelSliceMut;
            ivs.par_sort_unstable_by(|a, b| a.lo.total_cmp(&b.lo));
        } else {
            ivs.sort_unstable_by(|a, b| a.lo.total_cmp(&b.lo));
        }
        let mut out: Vec<Interval> = Vec::with_capacity(ivs.len().min(1024));
        for iv in ivs {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi + TOL => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalUnion { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length; `+∞` when any component is unbounded.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        // first interval with hi >= x
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.lo <= x)
    }

    /// Whether the closed interval `[lo, hi]` lies inside a single component,
    /// allowing `tol` slack at both ends.
    pub fn covers(&self, lo: f64, hi: f64, tol: f64) -> bool {
        self.intervals
            .iter()
            .any(|iv| iv.lo <= lo + tol && iv.hi >= hi - tol)
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        IntervalUnion::from_intervals(all)
    }

    /// Intersection with one closed interval.
    pub fn clip(&self, lo: f64, hi: f64) -> IntervalUnion {
        let out = self
            .intervals
            .iter()
            .filter_map(|iv| {
                let a = iv.lo.max(lo);
                let b = iv.hi.min(hi);
                (a <= b).then_some(Interval { lo: a, hi: b })
            })
            .collect();
        IntervalUnion { intervals: out }
    }

    /// Image under `x -> scale * x + offset`.
    pub fn affine_image(&self, scale: f64, offset: f64) -> IntervalUnion {
        let map = |x: f64| {
            if x.is_infinite() {
                x * scale.signum()
            } else {
                scale * x + offset
            }
        };
        IntervalUnion::from_intervals(
            self.intervals
                .iter()
                .map(|iv| {
                    let (a, b) = (map(iv.lo), map(iv.hi));
                    Interval {
                        lo: a.min(b),
                        hi: a.max(b),
                    }
                })
                .collect(),
        )
    }

    /// Largest endpoint discrepancy between two unions with the same number
    /// of components; `None` when the component counts differ. Matching
    /// infinite endpoints count as zero.
    pub fn endpoint_distance(&self, other: &IntervalUnion) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let diff = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() };
        Some(
            self.intervals
                .iter()
                .zip(&other.intervals)
                .map(|(a, b)| diff(a.lo, b.lo).max(diff(a.hi, b.hi)))
                .fold(0.0, f64::max),
        )
    }
}

/// Normalizes raw intervals into a sorted disjoint union.
pub fn normalize_intervals(raw: &[(f64, f64)]) -> Result<IntervalUnion> {
    IntervalUnion::from_pairs(raw.iter().copied())
}

/// Lebesgue measure of a normalized union.
pub fn measure(u: &IntervalUnion) -> f64 {
    u.measure()
}
