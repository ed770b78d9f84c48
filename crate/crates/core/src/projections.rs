//! Orthogonal and radial projections of cell unions, grid scans over
//! directions and viewpoints, and finite continuity probes.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::arc::ArcUnion;
use crate::error::{Error, Result};
use crate::geom::{inscribed_polygon, CellUnion, ConvexCell, Location, Point, Rect, TOL};
use crate::interval::{Interval, IntervalUnion};

/// A projection direction, given by a nonzero vector.
///
/// Projecting along `v` maps a point `p` to `p · rot₋₉₀(v) / |v|`. Along
/// `(0, 1)` this is the x-coordinate; along `(-1, x)` it is
/// `(a x + b) / |(x, 1)|` for the point `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    v: Point,
}

impl Direction {
    pub fn new(v: Point) -> Result<Self> {
        if !v.is_finite() || v.norm() == 0.0 {
            return Err(Error::InvalidDirection);
        }
        Ok(Direction { v })
    }

    /// Direction `(cos φ, sin φ)`; `φ = π/2` projects onto the x-axis.
    pub fn from_angle(phi: f64) -> Self {
        Direction {
            v: Point::new(phi.cos(), phi.sin()),
        }
    }

    pub fn vector(&self) -> Point {
        self.v
    }

    /// Angle of the direction vector in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        self.v.angle()
    }

    /// Unit vector of the axis the set is projected onto.
    #[inline]
    pub fn axis(&self) -> Point {
        self.v.rot_cw() * (1.0 / self.v.norm())
    }
}

/// `n` equally spaced directions `kπ/n`, `k = 0..n`.
pub fn direction_grid(n: usize) -> Vec<Direction> {
    (0..n)
        .map(|k| Direction::from_angle(PI * k as f64 / n as f64))
        .collect()
}

/// Directions `lo + k·step` for `k = 0..` while `<= hi`.
pub fn direction_range(lo: f64, hi: f64, step: f64) -> Vec<Direction> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|k| Direction::from_angle(lo + step * k as f64))
        .collect()
}

/// `nx × ny` viewpoints spanning `area` inclusively, row-major from
/// `(x0, y0)`.
pub fn viewpoint_grid(area: &Rect, nx: usize, ny: usize) -> Vec<Point> {
    let coord = |lo: f64, hi: f64, n: usize, i: usize| {
        if n <= 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            out.push(Point::new(
                coord(area.x0, area.x1, nx, i),
                coord(area.y0, area.y1, ny, j),
            ));
        }
    }
    out
}

const PAR_THRESHOLD: usize = 2048;

/// Orthogonal projection of a cell union as a normalized interval union.
pub fn ortho_project(c: &CellUnion, d: &Direction) -> IntervalUnion {
    let axis = d.axis();
    let to_iv = |cell: &ConvexCell| {
        let (lo, hi) = cell.support_range(axis);
        Interval { lo, hi }
    };
    let ivs: Vec<Interval> = if c.len() > PAR_THRESHOLD {
        c.cells().par_iter().map(to_iv).collect()
    } else {
        c.iter().map(to_iv).collect()
    };
    IntervalUnion::from_intervals(ivs)
}

/// Lebesgue measure of the orthogonal projection.
pub fn ortho_measure(c: &CellUnion, d: &Direction) -> f64 {
    ortho_project(c, d).measure()
}

/// The parameter a scan row was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanParam {
    Direction(Direction),
    Viewpoint(Point),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub param: ScanParam,
    pub measure: f64,
}

/// Measures indexed by grid position.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanTable {
    rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn new(rows: Vec<ScanRow>) -> Self {
        ScanTable { rows }
    }

    pub fn rows(&self) -> &[ScanRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn measures(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.measure).collect()
    }

    pub fn max_measure(&self) -> f64 {
        self.rows.iter().map(|r| r.measure).fold(0.0, f64::max)
    }
}

/// Projection measure for every direction of `grid`, in grid order.
pub fn direction_scan(c: &CellUnion, grid: &[Direction]) -> Result<ScanTable> {
    if grid.is_empty() {
        return Err(Error::InsufficientData("empty direction grid".into()));
    }
    let rows = grid
        .par_iter()
        .map(|d| ScanRow {
            param: ScanParam::Direction(*d),
            measure: ortho_measure(c, d),
        })
        .collect();
    Ok(ScanTable::new(rows))
}

enum CellArc {
    Full,
    Spans(SmallVec<[(f64, f64); 2]>),
}

/// Minimal arc `(start, length)` containing all given angles.
fn covering_arc(angles: &mut SmallVec<[f64; 8]>) -> (f64, f64) {
    angles.sort_unstable_by(f64::total_cmp);
    let n = angles.len();
    let mut best_gap = angles[0] + TAU - angles[n - 1];
    let mut start = angles[0];
    for i in 1..n {
        let gap = angles[i] - angles[i - 1];
        if gap > best_gap {
            best_gap = gap;
            start = angles[i];
        }
    }
    (start, (TAU - best_gap).max(0.0))
}

/// Arc subtended by a convex polygon from a point outside it. The polygon
/// lies in an open half-plane seen from `v`, so its extreme directions are
/// found by cross products alone.
fn exterior_arc(verts: &[Point], v: Point) -> (f64, f64) {
    let mut lo = verts[0] - v;
    let mut hi = lo;
    for &p in &verts[1..] {
        let d = p - v;
        if lo.cross(d) < 0.0 {
            lo = d;
        } else if hi.cross(d) > 0.0 {
            hi = d;
        }
    }
    (lo.angle(), lo.cross(hi).atan2(lo.dot(hi)).max(0.0))
}

fn cell_arc(cell: &ConvexCell, v: Point) -> CellArc {
    let verts = cell.vertices();
    let mut spans: SmallVec<[(f64, f64); 2]> = SmallVec::new();
    match verts.len() {
        1 => {
            let d = verts[0] - v;
            if d.norm() > TOL {
                spans.push((d.angle(), 0.0));
            }
        }
        2 => {
            if cell.locate(v) == Location::Boundary {
                // viewpoint on the segment: only the two end directions
                for &p in verts {
                    let d = p - v;
                    if d.norm() > TOL {
                        spans.push((d.angle(), 0.0));
                    }
                }
            } else {
                let a = (verts[0] - v).angle();
                let b = (verts[1] - v).angle();
                let d = (b - a).rem_euclid(TAU);
                if d <= PI {
                    spans.push((a, d));
                } else {
                    spans.push((b, TAU - d));
                }
            }
        }
        _ => {
            let bb = cell.bbox();
            let outside_box =
                v.x < bb.x0 - TOL || v.x > bb.x1 + TOL || v.y < bb.y0 - TOL || v.y > bb.y1 + TOL;
            if outside_box || cell.locate(v) == Location::Exterior {
                spans.push(exterior_arc(verts, v));
                return CellArc::Spans(spans);
            }
            if cell.locate(v) == Location::Interior {
                return CellArc::Full;
            }
            let mut angles: SmallVec<[f64; 8]> = verts
                .iter()
                .map(|&p| p - v)
                .filter(|d| d.norm() > TOL)
                .map(Point::angle)
                .collect();
            if !angles.is_empty() {
                spans.push(covering_arc(&mut angles));
            }
        }
    }
    CellArc::Spans(spans)
}

/// Radial projection of a cell union from `v`.
///
/// A viewpoint interior to a cell yields the full circle.
pub fn radial_project(c: &CellUnion, v: Point) -> ArcUnion {
    radial_project_cells(c.cells(), v)
}

fn radial_project_cells(cells: &[ConvexCell], v: Point) -> ArcUnion {
    let collect = |acc: Option<Vec<(f64, f64)>>, cell: &ConvexCell| -> Option<Vec<(f64, f64)>> {
        let mut acc = acc?;
        match cell_arc(cell, v) {
            CellArc::Full => None,
            CellArc::Spans(s) => {
                acc.extend(s);
                Some(acc)
            }
        }
    };
    let spans = if cells.len() > PAR_THRESHOLD {
        cells.par_iter().fold(|| Some(Vec::new()), collect).reduce(
            || Some(Vec::new()),
            |a, b| match (a, b) {
                (Some(mut a), Some(b)) => {
                    a.extend(b);
                    Some(a)
                }
                _ => None,
            },
        )
    } else {
        cells.iter().fold(Some(Vec::new()), collect)
    };
    match spans {
        None => ArcUnion::full(),
        Some(s) => ArcUnion::from_spans(s),
    }
}

/// Removes the open disk `B(v, radius)` from every cell, conservatively.
///
/// The disk is replaced by its inscribed regular 16-gon, so the retained set
/// contains the exact `cell \ B(v, radius)`.
pub fn exclude_ball(c: &CellUnion, v: Point, radius: f64) -> Vec<ConvexCell> {
    if radius <= 0.0 {
        return c.cells().to_vec();
    }
    let hole = inscribed_polygon(v, radius);
    let apothem = radius * (PI / hole.len() as f64).cos();
    let process = |cell: &ConvexCell| -> SmallVec<[ConvexCell; 1]> {
        if cell.distance(v) >= radius {
            return smallvec::smallvec![cell.clone()];
        }
        if cell.vertices().iter().all(|&p| (p - v).norm() <= apothem) {
            return SmallVec::new();
        }
        cell.subtract_convex(&hole).into_iter().collect()
    };
    if c.len() > PAR_THRESHOLD {
        c.cells().par_iter().flat_map_iter(process).collect()
    } else {
        c.iter().flat_map(process).collect()
    }
}

/// Measure of the radial projection from `v` of the set with the open ball
/// `B(v, exclusion_radius)` removed. An upper bound when
/// `exclusion_radius > 0`.
pub fn radial_measure(c: &CellUnion, v: Point, exclusion_radius: f64) -> f64 {
    if exclusion_radius <= 0.0 {
        return radial_project(c, v).measure();
    }
    let kept = exclude_ball(c, v, exclusion_radius);
    radial_project_cells(&kept, v).measure()
}

/// Radial measure from every viewpoint of `grid`, in grid order.
pub fn viewpoint_scan(c: &CellUnion, grid: &[Point], exclusion_radius: f64) -> Result<ScanTable> {
    if grid.is_empty() {
        return Err(Error::InsufficientData("empty viewpoint grid".into()));
    }
    let rows = grid
        .par_iter()
        .map(|&v| ScanRow {
            param: ScanParam::Viewpoint(v),
            measure: radial_measure(c, v, exclusion_radius),
        })
        .collect();
    Ok(ScanTable::new(rows))
}

/// Largest jump between adjacent rows and the index of its first row.
pub fn continuity_probe(table: &ScanTable) -> Result<(f64, usize)> {
    if table.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "continuity probe needs at least 2 rows, got {}",
            table.len()
        )));
    }
    let mut best = (0.0, 0);
    for (i, w) in table.rows().windows(2).enumerate() {
        let jump = (w[1].measure - w[0].measure).abs();
        if jump > best.0 {
            best = (jump, i);
        }
    }
    Ok(best)
}
