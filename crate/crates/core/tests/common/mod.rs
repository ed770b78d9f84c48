//! Independent oracles shared by the integration tests. Nothing here calls
//! the projection, section or distance code under test.

#![allow(dead_code)]

use besicovitch_core::{CellUnion, ConvexCell, Point, Rect};
use rand::Rng;

/// Sorts and merges closed intervals whose gap is at most `tol`.
pub fn merge(mut v: Vec<(f64, f64)>, tol: f64) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in v {
        match out.last_mut() {
            Some(last) if lo <= last.1 + tol => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

pub fn total_length(v: &[(f64, f64)]) -> f64 {
    v.iter().map(|(a, b)| b - a).sum()
}

/// `{a x + b : (a, b) in rect}` for each rectangle, merged.
pub fn rect_vertical_section(rects: &[Rect], x: f64) -> Vec<(f64, f64)> {
    merge(
        rects
            .iter()
            .map(|r| {
                let vals = [
                    r.x0 * x + r.y0,
                    r.x0 * x + r.y1,
                    r.x1 * x + r.y0,
                    r.x1 * x + r.y1,
                ];
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .collect(),
        1e-12,
    )
}

/// Merged x-extents of the cells, from their vertices.
pub fn x_extents(c: &CellUnion) -> Vec<(f64, f64)> {
    merge(
        c.iter()
            .map(|cell| {
                let xs = cell.vertices().iter().map(|v| v.x);
                let lo = xs.clone().fold(f64::INFINITY, f64::min);
                let hi = xs.fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .collect(),
        1e-12,
    )
}

/// Whether the point `(x, y)` is on a line `y = a x + b` coded by a point of
/// the convex cell: the linear function `a x + b` over the cell takes every
/// value between its vertex extremes.
pub fn on_coded_line(cell: &ConvexCell, x: f64, y: f64) -> bool {
    let vals = cell.vertices().iter().map(|v| v.x * x + v.y);
    let lo = vals.clone().fold(f64::INFINITY, f64::min);
    let hi = vals.fold(f64::NEG_INFINITY, f64::max);
    lo <= y && y <= hi
}

pub fn rect_point_distance(r: &Rect, p: Point) -> f64 {
    let dx = (r.x0 - p.x).max(0.0).max(p.x - r.x1);
    let dy = (r.y0 - p.y).max(0.0).max(p.y - r.y1);
    dx.hypot(dy)
}

/// Hausdorff distance between two rectangles. The distance to a convex set
/// is convex, so each directed distance peaks at a corner.
pub fn rect_hausdorff(a: &Rect, b: &Rect) -> f64 {
    let directed = |s: &Rect, t: &Rect| {
        s.corners()
            .iter()
            .map(|&c| rect_point_distance(t, c))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

pub fn random_rect(rng: &mut impl Rng, span: f64, max_side: f64) -> Rect {
    let x0 = rng.gen_range(-span..span);
    let y0 = rng.gen_range(-span..span);
    let w = rng.gen_range(0.01..max_side);
    let h = rng.gen_range(0.01..max_side);
    Rect::new(x0, y0, x0 + w, y0 + h).unwrap()
}

pub fn random_rects(rng: &mut impl Rng, max_count: usize, span: f64, max_side: f64) -> Vec<Rect> {
    let n = rng.gen_range(1..=max_count);
    (0..n).map(|_| random_rect(rng, span, max_side)).collect()
}

/// Points of the `n x n` grid over the cell's bounding box that lie in the
/// cell (by the half-plane test on its counter-clockwise edges).
pub fn cell_samples(cell: &ConvexCell, n: usize) -> Vec<Point> {
    let bb = cell.bbox();
    let v = cell.vertices();
    let inside = |p: Point| {
        if v.len() < 3 {
            return true;
        }
        (0..v.len()).all(|i| {
            let a = v[i];
            let b = v[(i + 1) % v.len()];
            (b - a).cross(p - a) >= -1e-12
        })
    };
    let mut out = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let p = Point::new(
                bb.x0 + bb.width() * i as f64 / n as f64,
                bb.y0 + bb.height() * j as f64 / n as f64,
            );
            if inside(p) {
                out.push(p);
            }
        }
    }
    out
}
