//! Finite unions of closed arcs on the unit circle.

use std::f64::consts::TAU;

use crate::geom::TOL;
use crate::interval::{Interval, IntervalUnion};

/// Disjoint closed arcs, each running counter-clockwise from `start` to `end`.
///
/// `start` lies in `[0, 2π)` and `end` in `[start, start + 2π)`; an arc that
/// wraps past angle zero has `end > 2π`. Arcs are sorted by `start`.
/// Zero-length arcs (single directions) are kept.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArcUnion {
    arcs: Vec<(f64, f64)>,
    full_circle: bool,
}

impl ArcUnion {
    pub fn empty() -> Self {
        ArcUnion::default()
    }

    pub fn full() -> Self {
        ArcUnion {
            arcs: Vec::new(),
            full_circle: true,
        }
    }

    pub fn is_full(&self) -> bool {
        self.full_circle
    }

    pub fn is_empty(&self) -> bool {
        !self.full_circle && self.arcs.is_empty()
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    /// Builds a normalized union from `(start, length)` spans.
    pub fn from_spans(spans: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut pieces = Vec::new();
        for (start, len) in spans {
            if len >= TAU - TOL {
                return ArcUnion::full();
            }
            let s = start.rem_euclid(TAU);
            // rem_euclid can round up to TAU itself
            let s = if s >= TAU { 0.0 } else { s };
            let e = s + len;
            if e > TAU {
                pieces.push(Interval { lo: s, hi: TAU });
                pieces.push(Interval {
                    lo: 0.0,
                    hi: e - TAU,
                });
            } else {
                pieces.push(Interval { lo: s, hi: e });
            }
        }
        Self::from_linear(IntervalUnion::from_intervals(pieces))
    }

    fn from_linear(lin: IntervalUnion) -> Self {
        let ivs = lin.intervals();
        if ivs.is_empty() {
            return ArcUnion::empty();
        }
        let first = ivs[0];
        let last = ivs[ivs.len() - 1];
        if ivs.len() == 1 && first.lo <= TOL && first.hi >= TAU - TOL {
            return ArcUnion::full();
        }
        let mut arcs: Vec<(f64, f64)> = ivs.iter().map(|iv| (iv.lo, iv.hi)).collect();
        if ivs.len() >= 2 && first.lo <= TOL && last.hi >= TAU - TOL {
            let wrap = (last.lo, TAU + first.hi);
            arcs.pop();
            arcs.remove(0);
            if wrap.1 - wrap.0 >= TAU - TOL {
                return ArcUnion::full();
            }
            arcs.push(wrap);
        }
        ArcUnion {
            arcs,
            full_circle: false,
        }
    }

    /// Total angular length in `[0, 2π]`.
    pub fn measure(&self) -> f64 {
        if self.full_circle {
            TAU
        } else {
            self.arcs.iter().map(|&(s, e)| e - s).sum::<f64>().min(TAU)
        }
    }

    /// The arcs as closed intervals inside `[0, 2π]`; wrapping arcs are split
    /// at angle zero.
    pub fn linear_intervals(&self) -> Vec<Interval> {
        if self.full_circle {
            return vec![Interval { lo: 0.0, hi: TAU }];
        }
        let mut out = Vec::with_capacity(self.arcs.len() + 1);
        for &(s, e) in &self.arcs {
            if e > TAU {
                out.push(Interval {
                    lo: 0.0,
                    hi: e - TAU,
                });
                out.push(Interval { lo: s, hi: TAU });
            } else {
                out.push(Interval { lo: s, hi: e });
            }
        }
        out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        out
    }

    pub fn contains(&self, angle: f64) -> bool {
        if self.full_circle {
            return true;
        }
        let a = angle.rem_euclid(TAU);
        self.arcs
            .iter()
            .any(|&(s, e)| (a >= s && a <= e) || (e > TAU && a <= e - TAU))
    }

    pub fn union(&self, other: &ArcUnion) -> ArcUnion {
        if self.full_circle || other.full_circle {
            return ArcUnion::full();
        }
        let mut pieces = self.linear_intervals();
        pieces.extend(other.linear_intervals());
        Self::from_linear(IntervalUnion::from_intervals(pieces))
    }
}

/// Normalizes raw `(start, end)` arcs, each traversed counter-clockwise from
/// `start` to `end`. An `end` below `start` wraps through angle zero; a span
/// of `2π` or more is the whole circle.
pub fn normalize_arcs(raw: &[(f64, f64)]) -> ArcUnion {
    ArcUnion::from_spans(raw.iter().map(|&(s, e)| {
        let len = if e >= s { e - s } else { e - s + TAU };
        (s, len)
    }))
}

/// Total radian length of a normalized arc union.
pub fn arc_measure(a: &ArcUnion) -> f64 {
    a.measure()
}
