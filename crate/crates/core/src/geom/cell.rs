use smallvec::SmallVec;

use super::{AffineMap, Point, Rect, TOL};
use crate::error::{Error, Result};

pub(crate) type Vertices = SmallVec<[Point; 4]>;

/// Where a point sits relative to a closed cell, up to [`TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// A closed convex polygon with counter-clockwise vertices.
///
/// One vertex is a point cell, two vertices a segment cell. Cells with three
/// or more vertices have positive signed area.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCell {
    vertices: Vertices,
}

impl ConvexCell {
    /// Validates and canonicalizes a vertex list.
    ///
    /// Clockwise input is reversed; repeated vertices are dropped; collinear
    /// input collapses to a segment (or a point).
    pub fn new(vertices: impl IntoIterator<Item = Point>) -> Result<Self> {
        let raw: Vertices = vertices.into_iter().collect();
        if raw.is_empty() {
            return Err(Error::InvalidCell("no vertices".into()));
        }
        if raw.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidCell("non-finite vertex".into()));
        }
        let mut cell = ConvexCell::from_raw(raw);
        if cell.vertices.len() >= 3 {
            if signed_area(&cell.vertices) < 0.0 {
                cell.vertices.reverse();
            }
            if !is_convex_ccw(&cell.vertices) {
                return Err(Error::InvalidCell(
                    "vertices do not form a convex polygon".into(),
                ));
            }
        }
        Ok(cell)
    }

    /// Canonicalizes without checking convexity or orientation. Used on the
    /// output of operations that preserve convexity.
    pub(crate) fn from_raw(mut v: Vertices) -> Self {
        dedup_cyclic(&mut v);
        if v.len() >= 3 {
            let area = signed_area(&v);
            let scale = bbox_of(&v).map(|b| b.diagonal()).unwrap_or(0.0);
            if area.abs() <= 1e-15 * scale * scale || area == 0.0 {
                v = collinear_extremes(&v);
            } else if area < 0.0 {
                v.reverse();
            }
        }
        ConvexCell { vertices: v }
    }

    pub fn point(p: Point) -> Self {
        let mut v = Vertices::new();
        v.push(p);
        ConvexCell { vertices: v }
    }

    pub fn segment(a: Point, b: Point) -> Self {
        ConvexCell::from_raw(smallvec::smallvec![a, b])
    }

    /// Axis-aligned rectangle cell. Degenerate rectangles become segments or
    /// points.
    pub fn rect(r: &Rect) -> Self {
        ConvexCell::from_raw(r.corners().into_iter().collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bbox(&self) -> Rect {
        bbox_of(&self.vertices).expect("cells have at least one vertex")
    }

    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            0.0
        } else {
            signed_area(&self.vertices)
        }
    }

    pub fn centroid_of_vertices(&self) -> Point {
        let n = self.vertices.len() as f64;
        let s = self.vertices.iter().fold(Point::ORIGIN, |acc, &p| acc + p);
        s * (1.0 / n)
    }

    /// Image under an affine map; orientation is restored when the map
    /// reverses it.
    pub fn map(&self, m: &AffineMap) -> ConvexCell {
        let mut v: Vertices = self.vertices.iter().map(|&p| m.apply(p)).collect();
        if m.determinant() < 0.0 {
            v.reverse();
        }
        ConvexCell::from_raw(v)
    }

    pub fn translate(&self, d: Point) -> ConvexCell {
        ConvexCell {
            vertices: self.vertices.iter().map(|&p| p + d).collect(),
        }
    }

    /// Range of the linear functional `p -> dir · p` over the cell.
    #[inline]
    pub fn support_range(&self, dir: Point) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &p in &self.vertices {
            let s = dir.dot(p);
            lo = lo.min(s);
            hi = hi.max(s);
        }
        (lo, hi)
    }

    pub fn locate(&self, p: Point) -> Location {
        match self.vertices.len() {
            1 => {
                if self.vertices[0].distance(p) <= TOL {
                    Location::Boundary
                } else {
                    Location::Exterior
                }
            }
            2 => {
                if segment_distance(p, self.vertices[0], self.vertices[1]) <= TOL {
                    Location::Boundary
                } else {
                    Location::Exterior
                }
            }
            n => {
                let mut min_d = f64::INFINITY;
                for i in 0..n {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    let e = b - a;
                    let d = e.cross(p - a) / e.norm();
                    min_d = min_d.min(d);
                }
                if min_d > TOL {
                    Location::Interior
                } else if min_d < -TOL {
                    // may still be within TOL of a vertex
                    if self.distance_exterior(p) <= TOL {
                        Location::Boundary
                    } else {
                        Location::Exterior
                    }
                } else {
                    Location::Boundary
                }
            }
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.locate(p) != Location::Exterior
    }

    /// Euclidean distance from `p` to the closed cell.
    pub fn distance(&self, p: Point) -> f64 {
        match self.vertices.len() {
            1 => self.vertices[0].distance(p),
            2 => segment_distance(p, self.vertices[0], self.vertices[1]),
            n => {
                let mut inside = true;
                for i in 0..n {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    if (b - a).cross(p - a) < 0.0 {
                        inside = false;
                        break;
                    }
                }
                if inside {
                    0.0
                } else {
                    self.distance_exterior(p)
                }
            }
        }
    }

    /// Point of the closed cell nearest to `p`.
    pub fn closest_point(&self, p: Point) -> Point {
        let v = &self.vertices;
        let n = v.len();
        if n >= 3 && self.distance(p) == 0.0 {
            return p;
        }
        if n == 1 {
            return v[0];
        }
        let mut best = v[0];
        let mut best_d = f64::INFINITY;
        for i in 0..n {
            let q = segment_closest(p, v[i], v[(i + 1) % n]);
            let d = p.distance(q);
            if d < best_d {
                best_d = d;
                best = q;
            }
        }
        best
    }

    fn distance_exterior(&self, p: Point) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Intersection with the closed half-plane `{p : normal · p <= offset}`.
    pub fn clip_halfplane(&self, normal: Point, offset: f64) -> Option<ConvexCell> {
        clip_halfplane_raw(&self.vertices, normal, offset).map(ConvexCell::from_raw)
    }

    /// Intersection with a closed rectangle (Sutherland–Hodgman over the four
    /// sides).
    pub fn clip_rect(&self, r: &Rect) -> Option<ConvexCell> {
        let bb = self.bbox();
        if bb.x0 >= r.x0 && bb.x1 <= r.x1 && bb.y0 >= r.y0 && bb.y1 <= r.y1 {
            return Some(self.clone());
        }
        if bb.x1 < r.x0 || bb.x0 > r.x1 || bb.y1 < r.y0 || bb.y0 > r.y1 {
            return None;
        }
        let v = clip_halfplane_raw(&self.vertices, Point::new(-1.0, 0.0), -r.x0)?;
        let v = clip_halfplane_raw(&v, Point::new(1.0, 0.0), r.x1)?;
        let v = clip_halfplane_raw(&v, Point::new(0.0, -1.0), -r.y0)?;
        let v = clip_halfplane_raw(&v, Point::new(0.0, 1.0), r.y1)?;
        Some(ConvexCell::from_raw(v))
    }

    /// Splits `self \ interior(poly)` into convex pieces, one per edge of the
    /// convex polygon `poly` (counter-clockwise). Pieces overlap only on
    /// boundaries.
    pub fn subtract_convex(&self, poly: &[Point]) -> Vec<ConvexCell> {
        let n = poly.len();
        let mut out = Vec::new();
        let mut rest: Vertices = self.vertices.clone();
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let e = b - a;
            // outward normal of a CCW edge
            let normal = Point::new(e.y, -e.x);
            let offset = normal.dot(a);
            // the part strictly outside this edge
            if let Some(piece) = clip_halfplane_raw(&rest, -normal, -offset) {
                out.push(ConvexCell::from_raw(piece));
            }
            match clip_halfplane_raw(&rest, normal, offset) {
                Some(r) => rest = r,
                None => break,
            }
        }
        out.retain(|c| !c.is_empty());
        out
    }
}

fn bbox_of(v: &[Point]) -> Option<Rect> {
    let first = v.first()?;
    let mut r = Rect {
        x0: first.x,
        y0: first.y,
        x1: first.x,
        y1: first.y,
    };
    for p in &v[1..] {
        r.x0 = r.x0.min(p.x);
        r.y0 = r.y0.min(p.y);
        r.x1 = r.x1.max(p.x);
        r.y1 = r.y1.max(p.y);
    }
    Some(r)
}

pub(crate) fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    let mut s = 0.0;
    for i in 0..n {
        s += v[i].cross(v[(i + 1) % n]);
    }
    0.5 * s
}

fn is_convex_ccw(v: &[Point]) -> bool {
    let n = v.len();
    let scale = bbox_of(v).map(|b| b.diagonal()).unwrap_or(1.0).max(1e-300);
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let c = v[(i + 2) % n];
        if (b - a).cross(c - b) < -TOL * scale {
            return false;
        }
    }
    // winding number one: total turning 2π
    let mut turn = 0.0;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let c = v[(i + 2) % n];
        let e1 = b - a;
        let e2 = c - b;
        turn += e1.cross(e2).atan2(e1.dot(e2));
    }
    (turn - std::f64::consts::TAU).abs() < 1e-6
}

fn dedup_cyclic(v: &mut Vertices) {
    v.dedup_by(|a, b| (*a - *b).norm() <= 1e-15 * (1.0 + a.norm()));
    while v.len() > 1 {
        let first = v[0];
        let last = *v.last().unwrap();
        if (first - last).norm() <= 1e-15 * (1.0 + first.norm()) {
            v.pop();
        } else {
            break;
        }
    }
}

fn collinear_extremes(v: &[Point]) -> Vertices {
    // farthest pair along the principal direction
    let bb = bbox_of(v).unwrap();
    let dir = if bb.width() >= bb.height() {
        Point::new(1.0, 0.0)
    } else {
        Point::new(0.0, 1.0)
    };
    let mut lo = v[0];
    let mut hi = v[0];
    for &p in v {
        if dir.dot(p) < dir.dot(lo) {
            lo = p;
        }
        if dir.dot(p) > dir.dot(hi) {
            hi = p;
        }
    }
    let mut out = Vertices::new();
    out.push(lo);
    if (hi - lo).norm() > 1e-15 * (1.0 + lo.norm()) {
        out.push(hi);
    }
    out
}

pub(crate) fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    p.distance(segment_closest(p, a, b))
}

fn segment_closest(p: Point, a: Point, b: Point) -> Point {
    let e = b - a;
    let len2 = e.norm_squared();
    if len2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    a + e * t
}

/// Sutherland–Hodgman step against `{p : normal · p <= offset}`.
pub(crate) fn clip_halfplane_raw(v: &[Point], normal: Point, offset: f64) -> Option<Vertices> {
    let n = v.len();
    if n == 0 {
        return None;
    }
    let side: SmallVec<[f64; 8]> = v.iter().map(|&p| normal.dot(p) - offset).collect();
    if side.iter().all(|&s| s <= 0.0) {
        return Some(v.iter().copied().collect());
    }
    if side.iter().all(|&s| s > 0.0) {
        return None;
    }
    if n == 1 {
        return None;
    }
    let mut out = Vertices::new();
    let edges = if n == 2 { 2 } else { n };
    for i in 0..edges {
        let j = (i + 1) % n;
        let (p, q) = (v[i], v[j]);
        let (sp, sq) = (side[i], side[j]);
        if sp <= 0.0 {
            out.push(p);
        }
        if (sp <= 0.0) != (sq <= 0.0) {
            let t = sp / (sp - sq);
            let mut x = p.lerp(q, t);
            // keep the new vertex on the boundary line exactly where possible
            if normal.x == 0.0 {
                x.y = offset / normal.y;
            } else if normal.y == 0.0 {
                x.x = offset / normal.x;
            }
            out.push(x);
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}

/// Convex hull (monotone chain), counter-clockwise, without collinear points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 {
            let (a, b) = (lower[lower.len() - 2], lower[lower.len() - 1]);
            if (b - a).cross(p - b) <= 0.0 {
                lower.pop();
            } else {
                break;
            }
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 {
            let (a, b) = (upper[upper.len() - 2], upper[upper.len() - 1]);
            if (b - a).cross(p - b) <= 0.0 {
                upper.pop();
            } else {
                break;
            }
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A finite union of convex cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CellUnion {
    cells: Vec<ConvexCell>,
}

impl CellUnion {
    pub fn new(cells: Vec<ConvexCell>) -> Self {
        CellUnion { cells }
    }

    pub fn empty() -> Self {
        CellUnion { cells: Vec::new() }
    }

    pub fn from_rects(rects: &[Rect]) -> Self {
        CellUnion::new(rects.iter().map(ConvexCell::rect).collect())
    }

    pub fn single(cell: ConvexCell) -> Self {
        CellUnion { cells: vec![cell] }
    }

    pub fn cells(&self) -> &[ConvexCell] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<ConvexCell> {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ConvexCell> {
        self.cells.iter()
    }

    pub fn push(&mut self, cell: ConvexCell) {
        self.cells.push(cell);
    }

    pub fn extend(&mut self, other: CellUnion) {
        self.cells.extend(other.cells);
    }

    pub fn bbox(&self) -> Option<Rect> {
        let mut it = self.cells.iter();
        let first = it.next()?.bbox();
        Some(it.fold(first, |acc, c| acc.union(&c.bbox())))
    }

    pub fn diameter_bound(&self) -> f64 {
        self.bbox().map(|b| b.diagonal()).unwrap_or(0.0)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.cells.iter().any(|c| c.contains(p))
    }

    /// Sum of cell areas (an upper bound on the area of the union).
    pub fn total_area(&self) -> f64 {
        self.cells.iter().map(ConvexCell::area).sum()
    }
}

impl FromIterator<ConvexCell> for CellUnion {
    fn from_iter<I: IntoIterator<Item = ConvexCell>>(iter: I) -> Self {
        CellUnion::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a CellUnion {
    type Item = &'a ConvexCell;
    type IntoIter = std::slice::Iter<'a, ConvexCell>;
    fn into_iter(self) -> Self::IntoIter {
        self.cells.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ConvexCell {
        ConvexCell::rect(&Rect::UNIT)
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let c = ConvexCell::new([
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(c.area() > 0.0);
        assert_eq!(c.area(), 1.0);
    }

    #[test]
    fn nonconvex_rejected() {
        let r = ConvexCell::new([
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.5),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ]);
        assert!(matches!(r, Err(Error::InvalidCell(_))));
        assert!(ConvexCell::new([]).is_err());
        assert!(ConvexCell::new([Point::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn collinear_input_collapses_to_segment() {
        let c = ConvexCell::new([
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(2.0, 2.0),
        ])
        .unwrap();
        assert_eq!(c.len(), 2);
        let p = ConvexCell::new([Point::new(1.0, 1.0), Point::new(1.0, 1.0)]).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn locate_and_distance() {
        let c = unit();
        assert_eq!(c.locate(Point::new(0.5, 0.5)), Location::Interior);
        assert_eq!(c.locate(Point::new(1.0, 0.5)), Location::Boundary);
        assert_eq!(c.locate(Point::new(1.0, 1.0)), Location::Boundary);
        assert_eq!(c.locate(Point::new(1.5, 0.5)), Location::Exterior);
        assert_eq!(c.distance(Point::new(2.0, 0.5)), 1.0);
        assert_eq!(c.distance(Point::new(0.25, 0.5)), 0.0);
        assert!((c.distance(Point::new(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
        let s = ConvexCell::segment(Point::new(0.0, 0.0), Point::new(2.0, 0.0));
        assert_eq!(s.locate(Point::new(1.0, 0.0)), Location::Boundary);
        assert_eq!(s.distance(Point::new(1.0, 3.0)), 3.0);
    }

    #[test]
    fn clip_rect_half() {
        let c = ConvexCell::rect(&Rect::new(-0.5, 0.0, 0.5, 1.0).unwrap());
        let clipped = c.clip_rect(&Rect::UNIT).unwrap();
        assert_eq!(clipped.bbox(), Rect::new(0.0, 0.0, 0.5, 1.0).unwrap());
        assert!((clipped.area() - 0.5).abs() < 1e-15);
        let far = ConvexCell::rect(&Rect::new(2.0, 2.0, 3.0, 3.0).unwrap());
        assert!(far.clip_rect(&Rect::UNIT).is_none());
    }

    #[test]
    fn clip_degenerate_cells() {
        let s = ConvexCell::segment(Point::new(-1.0, 0.5), Point::new(2.0, 0.5));
        let c = s.clip_rect(&Rect::UNIT).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.bbox(), Rect::new(0.0, 0.5, 1.0, 0.5).unwrap());
        let p = ConvexCell::point(Point::new(0.5, 0.5));
        assert_eq!(p.clip_rect(&Rect::UNIT), Some(p.clone()));
        let q = ConvexCell::point(Point::new(1.5, 0.5));
        assert!(q.clip_rect(&Rect::UNIT).is_none());
    }

    #[test]
    fn subtract_square_leaves_frame() {
        let c = ConvexCell::rect(&Rect::new(-1.0, -1.0, 1.0, 1.0).unwrap());
        let hole = [
            Point::new(-0.5, -0.5),
            Point::new(0.5, -0.5),
            Point::new(0.5, 0.5),
            Point::new(-0.5, 0.5),
        ];
        let pieces = c.subtract_convex(&hole);
        let area: f64 = pieces.iter().map(ConvexCell::area).sum();
        assert!((area - 3.0).abs() < 1e-12);
        assert!(pieces.iter().all(|p| !p.contains(Point::new(0.0, 0.0))));
        // a cell entirely inside the hole vanishes
        let inner = ConvexCell::rect(&Rect::new(-0.1, -0.1, 0.1, 0.1).unwrap());
        let left: f64 = inner
            .subtract_convex(&hole)
            .iter()
            .map(ConvexCell::area)
            .sum();
        assert!(left < 1e-15);
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(0.5, 0.5),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!(signed_area(&h) > 0.0);
    }
}
