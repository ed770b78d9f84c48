//! Line families coded by planar sets: the point `(a, b)` codes the line
//! `y = a x + b`.
//!
//! Sections of the union of a family are computed two ways. Vertical lines
//! reduce to orthogonal projections of the coding set; a sloped probe line
//! `y = a0 x + b0` meets the line coded by `(a, b)` at
//! `x = (b - b0) / (a0 - a)`, which is minus the slope from `(a0, b0)` to
//! `(a, b)`. [`line_section`] evaluates that quotient directly on cell
//! vertices, while [`section_via_radial`] goes through the radial
//! projection from `(a0, b0)` and the map `φ -> -tan φ`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::expr::{eval_set_with, EvalOptions, SetExpr};
use crate::geom::{CellUnion, ConvexCell, Location, Point, Rect, TOL};
use crate::interval::{Interval, IntervalUnion};
use crate::projections::{ortho_project, radial_project, Direction};

/// The family of lines coded by the cells of an evaluated set expression.
#[derive(Debug, Clone)]
pub struct DualFamily {
    code: SetExpr,
    cells: CellUnion,
}

impl DualFamily {
    pub fn new(code: SetExpr) -> Result<Self> {
        Self::with_options(code, &EvalOptions::default())
    }

    pub fn with_options(code: SetExpr, opts: &EvalOptions) -> Result<Self> {
        let cells = eval_set_with(&code, opts)?;
        Ok(DualFamily { code, cells })
    }

    pub fn from_cells(cells: CellUnion) -> Self {
        DualFamily {
            code: SetExpr::Cells(cells.clone()),
            cells,
        }
    }

    pub fn code(&self) -> &SetExpr {
        &self.code
    }

    pub fn cells(&self) -> &CellUnion {
        &self.cells
    }

    /// Side of the square removed around a coding point that lies in the
    /// family: `4^-(level + 2)` for the deepest attractor level in the code.
    pub fn default_exclusion_side(&self) -> f64 {
        0.25f64.powi(self.code.max_level() as i32 + 2)
    }

    /// Whether the line `y = a0 x + b0` belongs to the family.
    pub fn contains_line(&self, a0: f64, b0: f64) -> bool {
        let p = Point::new(a0, b0);
        self.cells.iter().any(|c| c.locate(p) != Location::Exterior)
    }
}

/// A probe line in the plane of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeLine {
    Vertical(f64),
    /// `y = a0 x + b0`.
    Sloped(f64, f64),
}

/// What to do when a sloped probe line is itself a member of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CodingPointPolicy {
    /// Fail with [`Error::ProbeLineInFamily`].
    Reject,
    /// Remove a square of the given side centred on the coding point from
    /// every cell that contains it.
    ExcludeSquare(f64),
}

const PAR_THRESHOLD: usize = 2048;

/// Exact vertical section `{a x + b : (a, b) ∈ K}` of the union of lines.
pub fn vertical_section(f: &DualFamily, x: f64) -> IntervalUnion {
    vertical_section_of(f.cells(), x)
}

pub(crate) fn vertical_section_of(cells: &CellUnion, x: f64) -> IntervalUnion {
    // (a, b) -> a x + b is linear, so per-cell extremes sit at vertices
    let dir = Point::new(x, 1.0);
    let to_iv = |c: &ConvexCell| {
        let (lo, hi) = c.support_range(dir);
        Interval { lo, hi }
    };
    let ivs = if cells.len() > PAR_THRESHOLD {
        cells.cells().par_iter().map(to_iv).collect()
    } else {
        cells.iter().map(to_iv).collect()
    };
    IntervalUnion::from_intervals(ivs)
}

/// Set of lines with slope in the union: the a-range of the coding set.
pub fn slope_coverage(f: &DualFamily) -> IntervalUnion {
    let vertical = Direction::new(Point::new(0.0, 1.0)).expect("nonzero");
    ortho_project(f.cells(), &vertical)
}

/// `x`-coordinates of the intersection of `e` with the union of the family.
///
/// Vertical probes are answered by [`vertical_section`], returning the
/// `y`-coordinates on the probe instead.
pub fn line_section(
    f: &DualFamily,
    e: &ProbeLine,
    policy: CodingPointPolicy,
) -> Result<IntervalUnion> {
    match *e {
        ProbeLine::Vertical(x) => Ok(vertical_section(f, x)),
        ProbeLine::Sloped(a0, b0) => sloped_section(f.cells(), a0, b0, policy),
    }
}

pub(crate) fn sloped_section(
    cells: &CellUnion,
    a0: f64,
    b0: f64,
    policy: CodingPointPolicy,
) -> Result<IntervalUnion> {
    let p0 = Point::new(a0, b0);
    let per_cell = |cell: &ConvexCell| -> Result<SmallVec<[Interval; 2]>> {
        if cell.locate(p0) == Location::Exterior {
            return Ok(cell_line_image(cell, p0));
        }
        match policy {
            CodingPointPolicy::Reject => Err(Error::ProbeLineInFamily { a0, b0 }),
            CodingPointPolicy::ExcludeSquare(side) => {
                let mut out = SmallVec::new();
                for piece in exclude_square(cell, p0, side) {
                    if piece.locate(p0) == Location::Exterior {
                        out.extend(cell_line_image(&piece, p0));
                    }
                }
                Ok(out)
            }
        }
    };
    let parts: Vec<SmallVec<[Interval; 2]>> = if cells.len() > PAR_THRESHOLD {
        cells
            .cells()
            .par_iter()
            .map(per_cell)
            .collect::<Result<_>>()?
    } else {
        cells.iter().map(per_cell).collect::<Result<_>>()?
    };
    Ok(IntervalUnion::from_intervals(
        parts.into_iter().flatten().collect(),
    ))
}

/// Pieces of `cell` outside the axis-aligned square of side `side` centred
/// at `p0`: left, right, bottom and top slabs.
fn exclude_square(cell: &ConvexCell, p0: Point, side: f64) -> Vec<ConvexCell> {
    let h = 0.5 * side;
    let ex = Point::new(1.0, 0.0);
    let ey = Point::new(0.0, 1.0);
    let mut out = Vec::with_capacity(4);
    if let Some(c) = cell.clip_halfplane(ex, p0.x - h) {
        out.push(c);
    }
    if let Some(c) = cell.clip_halfplane(-ex, -(p0.x + h)) {
        out.push(c);
    }
    if let Some(mid) = cell
        .clip_halfplane(-ex, -(p0.x - h))
        .and_then(|c| c.clip_halfplane(ex, p0.x + h))
    {
        if let Some(c) = mid.clip_halfplane(ey, p0.y - h) {
            out.push(c);
        }
        if let Some(c) = mid.clip_halfplane(-ey, -(p0.y + h)) {
            out.push(c);
        }
    }
    out
}

/// Image of `cell` (exterior to `p0`) under `(a, b) -> (b - b0) / (a0 - a)`.
fn cell_line_image(cell: &ConvexCell, p0: Point) -> SmallVec<[Interval; 2]> {
    let g = |p: Point| (p.y - p0.y) / (p0.x - p.x);
    let verts = cell.vertices();
    let mut left = (f64::INFINITY, f64::NEG_INFINITY);
    let mut right = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut has_left, mut has_right) = (false, false);
    let mut on_line_sign = 0.0;
    for &p in verts {
        let da = p.x - p0.x;
        if da < -TOL {
            has_left = true;
            let v = g(p);
            left = (left.0.min(v), left.1.max(v));
        } else if da > TOL {
            has_right = true;
            let v = g(p);
            right = (right.0.min(v), right.1.max(v));
        } else if on_line_sign == 0.0 && (p.y - p0.y).abs() > TOL {
            on_line_sign = (p.y - p0.y).signum();
        }
    }
    let mut out = SmallVec::new();
    let touches_line = on_line_sign != 0.0 || (has_left && has_right);
    if !touches_line {
        let (lo, hi) = if has_left { left } else { right };
        if has_left || has_right {
            out.push(Interval { lo, hi });
        }
        return out;
    }
    if on_line_sign == 0.0 {
        // the cell crosses a = a0 along an edge
        let n = verts.len();
        for i in 0..n {
            let (p, q) = (verts[i], verts[(i + 1) % n]);
            let (dp, dq) = (p.x - p0.x, q.x - p0.x);
            if (dp < -TOL && dq > TOL) || (dp > TOL && dq < -TOL) {
                let b = p.y + (q.y - p.y) * (-dp) / (dq - dp);
                on_line_sign = (b - p0.y).signum();
                break;
            }
        }
    }
    let s = on_line_sign;
    if has_left {
        out.push(if s > 0.0 {
            Interval {
                lo: left.0,
                hi: f64::INFINITY,
            }
        } else {
            Interval {
                lo: f64::NEG_INFINITY,
                hi: left.1,
            }
        });
    }
    if has_right {
        out.push(if s > 0.0 {
            Interval {
                lo: f64::NEG_INFINITY,
                hi: right.1,
            }
        } else {
            Interval {
                lo: right.0,
                hi: f64::INFINITY,
            }
        });
    }
    out
}

/// Same set as [`line_section`] for a sloped probe whose coding point lies
/// outside the family, computed from the radial projection.
pub fn section_via_radial(f: &DualFamily, e: &ProbeLine) -> Result<IntervalUnion> {
    let (a0, b0) = match *e {
        ProbeLine::Vertical(x) => return Ok(vertical_section(f, x)),
        ProbeLine::Sloped(a0, b0) => (a0, b0),
    };
    if f.contains_line(a0, b0) {
        return Err(Error::ProbeLineInFamily { a0, b0 });
    }
    let arcs = radial_project(f.cells(), Point::new(a0, b0));
    let mut out = Vec::new();
    for iv in arcs.linear_intervals() {
        for (lo, hi) in split_at_verticals(iv.lo, iv.hi) {
            if let Some(img) = neg_tan_image(lo, hi) {
                out.push(img);
            }
        }
    }
    Ok(IntervalUnion::from_intervals(out))
}

const BRANCH_POINTS: [f64; 2] = [FRAC_PI_2, 3.0 * FRAC_PI_2];

fn split_at_verticals(lo: f64, hi: f64) -> SmallVec<[(f64, f64); 3]> {
    let mut out = SmallVec::new();
    let mut start = lo;
    for &bp in &BRANCH_POINTS {
        if start < bp - TOL && hi > bp + TOL {
            out.push((start, bp));
            start = bp;
        }
    }
    out.push((start, hi));
    out
}

/// Image of `[lo, hi]` (inside one branch of tan) under `φ -> -tan φ`,
/// with endpoints at vertical angles sent to infinity. `None` when the
/// interval is a single vertical angle.
fn neg_tan_image(lo: f64, hi: f64) -> Option<Interval> {
    let is_vertical = |a: f64| BRANCH_POINTS.iter().any(|&bp| (a - bp).abs() <= TOL);
    if is_vertical(lo) && is_vertical(hi) && hi - lo <= 2.0 * TOL {
        return None;
    }
    // -tan is decreasing on each branch
    let upper = if is_vertical(lo) {
        f64::INFINITY
    } else {
        -branch_tan(lo)
    };
    let lower = if is_vertical(hi) {
        f64::NEG_INFINITY
    } else {
        -branch_tan(hi)
    };
    Some(Interval {
        lo: lower,
        hi: upper,
    })
}

fn branch_tan(a: f64) -> f64 {
    // angles near 0 or 2π and near π are exact zeros of tan
    if a == 0.0 || a == TAU || a == PI {
        0.0
    } else {
        a.tan()
    }
}

/// A line in the plane given by a point and a unit direction, parameterized
/// by arclength `t` as `point + t · dir`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldLine {
    pub point: Point,
    pub dir: Point,
}

impl WorldLine {
    pub fn new(point: Point, dir: Point) -> Result<Self> {
        let n = dir.norm();
        if n == 0.0 || !n.is_finite() || !point.is_finite() {
            return Err(Error::InvalidDirection);
        }
        Ok(WorldLine {
            point,
            dir: dir * (1.0 / n),
        })
    }

    pub fn from_probe(e: &ProbeLine) -> Self {
        match *e {
            ProbeLine::Vertical(x) => WorldLine {
                point: Point::new(x, 0.0),
                dir: Point::new(0.0, 1.0),
            },
            ProbeLine::Sloped(a0, b0) => {
                let n = a0.hypot(1.0);
                WorldLine {
                    point: Point::new(0.0, b0),
                    dir: Point::new(1.0 / n, a0 / n),
                }
            }
        }
    }

    /// The line after rotating the plane by `theta` about the origin.
    pub fn rotated(&self, theta: f64) -> WorldLine {
        WorldLine {
            point: self.point.rotate(theta),
            dir: self.dir.rotate(theta),
        }
    }

    /// Parameter range of the part of the line inside `r`, if any.
    pub fn clip_range(&self, r: &Rect) -> Option<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (p, d, a, b) in [
            (self.point.x, self.dir.x, r.x0, r.x1),
            (self.point.y, self.dir.y, r.y0, r.y1),
        ] {
            if d.abs() < 1e-300 {
                if p < a || p > b {
                    return None;
                }
            } else {
                let t0 = (a - p) / d;
                let t1 = (b - p) / d;
                lo = lo.max(t0.min(t1));
                hi = hi.min(t0.max(t1));
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Outcome of intersecting an arbitrary line with the union of a family.
#[derive(Debug, Clone, PartialEq)]
pub enum LineHits {
    /// The line is itself a member of the family.
    Member,
    /// Arclength parameters of the intersection.
    Params(IntervalUnion),
}

/// Intersection of an arbitrary line with the union of the family, in the
/// line's arclength parameter. Lines that are members of the family are
/// reported as such unless `policy` excludes their coding point.
pub fn section_along(
    f: &DualFamily,
    line: &WorldLine,
    policy: Option<CodingPointPolicy>,
) -> Result<LineHits> {
    let WorldLine { point: p, dir: u } = *line;
    if u.x.abs() <= 1e-12 {
        let ys = vertical_section_of(f.cells(), p.x);
        return Ok(LineHits::Params(ys.affine_image(1.0 / u.y, -p.y / u.y)));
    }
    let a0 = u.y / u.x;
    let b0 = p.y - a0 * p.x;
    let xs = match policy {
        None => {
            if f.contains_line(a0, b0) {
                return Ok(LineHits::Member);
            }
            sloped_section(f.cells(), a0, b0, CodingPointPolicy::Reject)?
        }
        Some(pol) => sloped_section(f.cells(), a0, b0, pol)?,
    };
    Ok(LineHits::Params(xs.affine_image(1.0 / u.x, -p.x / u.x)))
}

/// A binary occupancy raster; row 0 is the top of the viewport.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    pub width: usize,
    pub height: usize,
    pub viewport: Rect,
    cells: Vec<bool>,
}

impl OccupancyGrid {
    pub fn new(viewport: Rect, width: usize, height: usize) -> Self {
        OccupancyGrid {
            width,
            height,
            viewport,
            cells: vec![false; width * height],
        }
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.cells[row * self.width + col]
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn fraction(&self) -> f64 {
        self.occupied() as f64 / (self.width * self.height) as f64
    }

    /// x-coordinate of a column centre.
    pub fn column_x(&self, col: usize) -> f64 {
        let dx = self.viewport.width() / self.width as f64;
        self.viewport.x0 + (col as f64 + 0.5) * dx
    }

    pub fn fill_column(&mut self, col: usize) {
        for row in 0..self.height {
            self.cells[row * self.width + col] = true;
        }
    }

    /// Marks every pixel of `col` whose vertical extent meets `ys`.
    pub fn mark_column(&mut self, col: usize, ys: &IntervalUnion) {
        let column = self.column_mask(ys);
        for (row, hit) in column.into_iter().enumerate() {
            if hit {
                self.cells[row * self.width + col] = true;
            }
        }
    }

    pub(crate) fn column_mask(&self, ys: &IntervalUnion) -> Vec<bool> {
        let mut mask = vec![false; self.height];
        mark_rows(&mut mask, &self.viewport, ys);
        mask
    }

    pub(crate) fn set_column(&mut self, col: usize, mask: &[bool]) {
        for (row, &hit) in mask.iter().enumerate() {
            if hit {
                self.cells[row * self.width + col] = true;
            }
        }
    }

    /// Runs of occupied pixels per row as `(row, first_col, len)`.
    pub fn row_runs(&self) -> Vec<(usize, usize, usize)> {
        let mut runs = Vec::new();
        for row in 0..self.height {
            let mut col = 0;
            while col < self.width {
                if self.get(col, row) {
                    let start = col;
                    while col < self.width && self.get(col, row) {
                        col += 1;
                    }
                    runs.push((row, start, col - start));
                } else {
                    col += 1;
                }
            }
        }
        runs
    }

    /// Binary PGM (P5); occupied pixels are black.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.cells.iter().map(|&b| if b { 0u8 } else { 255u8 }));
        out
    }
}

pub(crate) fn mark_rows(mask: &mut [bool], viewport: &Rect, ys: &IntervalUnion) {
    let h = mask.len();
    let dy = viewport.height() / h as f64;
    for iv in ys.intervals() {
        if iv.hi < viewport.y0 || iv.lo > viewport.y1 {
            continue;
        }
        // closed pixel extents: a value on a row boundary marks both rows
        let top = ((viewport.y1 - iv.hi.min(viewport.y1)) / dy).ceil() - 1.0;
        let bottom = ((viewport.y1 - iv.lo.max(viewport.y0)) / dy).floor();
        let first = (top.max(0.0) as usize).min(h - 1);
        let last = (bottom.max(0.0) as usize).min(h - 1);
        for m in &mut mask[first..=last] {
            *m = true;
        }
    }
}

/// Column-exact raster of the union of the family over `viewport`; returns
/// the grid and its occupied fraction.
pub fn raster_dual(
    f: &DualFamily,
    viewport: &Rect,
    width: usize,
    height: usize,
) -> Result<(OccupancyGrid, f64)> {
    if width == 0 || height == 0 {
        return Err(Error::InsufficientData(
            "raster needs at least one pixel".into(),
        ));
    }
    if viewport.is_degenerate() {
        return Err(Error::InvalidRectangle {
            x0: viewport.x0,
            y0: viewport.y0,
            x1: viewport.x1,
            y1: viewport.y1,
        });
    }
    let mut grid = OccupancyGrid::new(*viewport, width, height);
    let columns: Vec<Vec<bool>> = (0..width)
        .into_par_iter()
        .map(|col| {
            let ys = vertical_section(f, grid.column_x(col));
            grid.column_mask(&ys)
        })
        .collect();
    for (col, mask) in columns.iter().enumerate() {
        grid.set_column(col, mask);
    }
    let frac = grid.fraction();
    Ok((grid, frac))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn family(rects: &[Rect]) -> DualFamily {
        DualFamily::from_cells(CellUnion::from_rects(rects))
    }

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Rect {
        Rect::new(x0, y0, x1, y1).unwrap()
    }

    fn pairs(u: &IntervalUnion) -> Vec<(f64, f64)> {
        u.intervals().iter().map(|iv| (iv.lo, iv.hi)).collect()
    }

    #[test]
    fn vertical_section_of_single_line() {
        let f = DualFamily::from_cells(CellUnion::single(ConvexCell::point(Point::new(1.0, 0.5))));
        let s = vertical_section(&f, 2.0);
        assert_eq!(pairs(&s), vec![(2.5, 2.5)]);
        assert_eq!(s.measure(), 0.0);
    }

    #[test]
    fn vertical_section_of_unit_square_matches_projection() {
        let f = family(&[Rect::UNIT]);
        assert_eq!(pairs(&vertical_section(&f, 1.0)), vec![(0.0, 2.0)]);
        assert_eq!(pairs(&vertical_section(&f, 0.0)), vec![(0.0, 1.0)]);
        let d = Direction::new(Point::new(-1.0, 1.0)).unwrap();
        let proj = ortho_project(f.cells(), &d).affine_image(SQRT_2, 0.0);
        let p = pairs(&proj);
        assert!((p[0].0 - 0.0).abs() < 1e-15 && (p[0].1 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn line_section_point_code() {
        let f = DualFamily::from_cells(CellUnion::single(ConvexCell::point(Point::ORIGIN)));
        let s = line_section(&f, &ProbeLine::Sloped(1.0, 0.0), CodingPointPolicy::Reject).unwrap();
        assert_eq!(pairs(&s), vec![(0.0, 0.0)]);
        let r = section_via_radial(&f, &ProbeLine::Sloped(1.0, 0.0)).unwrap();
        assert_eq!(pairs(&r), vec![(0.0, 0.0)]);
    }

    #[test]
    fn line_section_bounded_case() {
        let f = family(&[rect(0.0, 0.0, 0.5, 1.0)]);
        let s = line_section(&f, &ProbeLine::Sloped(1.0, 0.0), CodingPointPolicy::Reject).unwrap();
        assert_eq!(pairs(&s), vec![(0.0, 2.0)]);
        let r = section_via_radial(&f, &ProbeLine::Sloped(1.0, 0.0)).unwrap();
        assert!(r.endpoint_distance(&s).unwrap() < 1e-12);
    }

    #[test]
    fn line_section_straddling_case() {
        let f = family(&[rect(0.0, 1.0, 1.0, 2.0)]);
        let e = ProbeLine::Sloped(0.5, 0.0);
        let s = line_section(&f, &e, CodingPointPolicy::Reject).unwrap();
        assert_eq!(
            pairs(&s),
            vec![(f64::NEG_INFINITY, -2.0), (2.0, f64::INFINITY)]
        );
        assert_eq!(s.measure(), f64::INFINITY);
        let r = section_via_radial(&f, &e).unwrap();
        assert!(r.endpoint_distance(&s).unwrap() < 1e-12);
    }

    #[test]
    fn straddling_below_the_coding_point() {
        // cell crosses a = a0 below b0: left ray goes to -inf
        let f = family(&[rect(0.0, -2.0, 1.0, -1.0)]);
        let e = ProbeLine::Sloped(0.5, 0.0);
        let s = line_section(&f, &e, CodingPointPolicy::Reject).unwrap();
        let r = section_via_radial(&f, &e).unwrap();
        assert_eq!(s.len(), 2);
        assert!(r.endpoint_distance(&s).unwrap() < 1e-12);
    }

    #[test]
    fn arc_straddling_vertical_splits() {
        // a thin cell directly above the coding point
        let f = family(&[rect(-0.1, 1.0, 0.1, 1.5)]);
        let r = section_via_radial(&f, &ProbeLine::Sloped(0.0, 0.0)).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.intervals()[0].lo, f64::NEG_INFINITY);
        assert_eq!(r.intervals()[1].hi, f64::INFINITY);
    }

    #[test]
    fn probe_in_family() {
        let f = family(&[Rect::UNIT]);
        let e = ProbeLine::Sloped(0.5, 0.5);
        assert_eq!(
            line_section(&f, &e, CodingPointPolicy::Reject),
            Err(Error::ProbeLineInFamily { a0: 0.5, b0: 0.5 })
        );
        assert!(section_via_radial(&f, &e).is_err());
        let s = line_section(&f, &e, CodingPointPolicy::ExcludeSquare(0.01)).unwrap();
        assert_eq!(s.measure(), f64::INFINITY);
    }

    #[test]
    fn exclusion_is_monotone_in_side() {
        let f = family(&[rect(0.0, 0.0, 1.0, 0.2), rect(0.4, 0.4, 0.6, 0.6)]);
        let e = ProbeLine::Sloped(0.5, 0.5);
        let mut prev: Option<IntervalUnion> = None;
        for side in [0.2, 0.1, 0.05, 0.01, 0.001] {
            let s = line_section(&f, &e, CodingPointPolicy::ExcludeSquare(side)).unwrap();
            if let Some(p) = &prev {
                // smaller exclusions retain more: every old component is covered
                for iv in p.intervals() {
                    if iv.is_bounded() {
                        assert!(s.covers(iv.lo, iv.hi, 1e-12));
                    }
                }
            }
            prev = Some(s);
        }
    }

    #[test]
    fn slope_coverage_cases() {
        assert_eq!(
            pairs(&slope_coverage(&family(&[Rect::UNIT]))),
            vec![(0.0, 1.0)]
        );
        let two = DualFamily::from_cells(CellUnion::new(vec![
            ConvexCell::point(Point::new(0.0, 0.3)),
            ConvexCell::point(Point::new(1.0, 0.7)),
        ]));
        let s = slope_coverage(&two);
        assert_eq!(pairs(&s), vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(s.measure(), 0.0);
    }

    #[test]
    fn raster_of_single_line() {
        let f = DualFamily::from_cells(CellUnion::single(ConvexCell::point(Point::new(0.0, 0.0))));
        let (g, frac) = raster_dual(&f, &rect(-1.0, -1.0, 1.0, 1.0), 64, 64).unwrap();
        // horizontal line y = 0 lies on a pixel boundary: two rows
        assert_eq!(g.occupied(), 128);
        assert!((frac - 2.0 / 64.0).abs() < 1e-15);
        let empty = DualFamily::from_cells(CellUnion::empty());
        let (g, frac) = raster_dual(&empty, &rect(-1.0, -1.0, 1.0, 1.0), 8, 8).unwrap();
        assert_eq!(g.occupied(), 0);
        assert_eq!(frac, 0.0);
    }

    #[test]
    fn raster_columns_are_exact() {
        // y = x + 0.1 through a 4x4 raster over [0,1]^2
        let f = DualFamily::from_cells(CellUnion::single(ConvexCell::point(Point::new(1.0, 0.1))));
        let (g, _) = raster_dual(&f, &Rect::UNIT, 4, 4).unwrap();
        for col in 0..4 {
            let y = g.column_x(col) + 0.1;
            let row = ((1.0 - y) / 0.25).floor() as usize;
            assert!(g.get(col, row));
            assert_eq!((0..4).filter(|&r| g.get(col, r)).count(), 1);
        }
    }

    #[test]
    fn section_along_matches_direct_sections() {
        let f = family(&[rect(0.0, 0.0, 1.0, 0.3)]);
        let line = WorldLine::from_probe(&ProbeLine::Vertical(0.7));
        match section_along(&f, &line, None).unwrap() {
            LineHits::Params(t) => assert_eq!(pairs(&t), pairs(&vertical_section(&f, 0.7))),
            LineHits::Member => panic!("vertical lines are never members"),
        }
        let e = ProbeLine::Sloped(2.0, 1.0);
        let direct = line_section(&f, &e, CodingPointPolicy::Reject).unwrap();
        let line = WorldLine::from_probe(&e);
        let LineHits::Params(t) = section_along(&f, &line, None).unwrap() else {
            panic!("not a member");
        };
        let scaled = direct.affine_image(5f64.sqrt(), 0.0);
        assert!(t.endpoint_distance(&scaled).unwrap() < 1e-12);
        let member = WorldLine::from_probe(&ProbeLine::Sloped(0.5, 0.1));
        assert_eq!(section_along(&f, &member, None).unwrap(), LineHits::Member);
    }

    #[test]
    fn world_line_clip_range() {
        let l = WorldLine::from_probe(&ProbeLine::Sloped(1.0, 0.0));
        let (lo, hi) = l.clip_range(&rect(-1.0, -1.0, 1.0, 1.0)).unwrap();
        assert!((hi - lo - 2.0 * SQRT_2).abs() < 1e-12);
        let v = WorldLine::from_probe(&ProbeLine::Vertical(5.0));
        assert!(v.clip_range(&Rect::UNIT).is_none());
    }
}
