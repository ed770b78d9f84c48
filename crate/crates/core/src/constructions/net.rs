use std::collections::{HashMap, HashSet};
use std::f64::consts::SQRT_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{CellUnion, Point, Rect};

/// Spatial hash of points in square buckets.
struct PointHash {
    size: f64,
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl PointHash {
    fn new(size: f64, points: &[Point]) -> Self {
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets
                .entry(Self::key(size, *p))
                .or_default()
                .push(i as u32);
        }
        PointHash { size, buckets }
    }

    fn key(size: f64, p: Point) -> (i64, i64) {
        ((p.x / size).floor() as i64, (p.y / size).floor() as i64)
    }

    /// Indices of points within `size` of `q`, ascending.
    fn near(&self, points: &[Point], q: Point) -> Vec<u32> {
        let (i, j) = Self::key(self.size, q);
        let mut out = Vec::new();
        for dj in -1..=1 {
            for di in -1..=1 {
                if let Some(b) = self.buckets.get(&(i + di, j + dj)) {
                    out.extend(
                        b.iter()
                            .copied()
                            .filter(|&k| points[k as usize].distance(q) <= self.size),
                    );
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Grid indices `k` with `k * step` in `[lo, hi]`.
fn grid_span(lo: f64, hi: f64, step: f64) -> std::ops::RangeInclusive<i64> {
    (lo / step).ceil() as i64..=(hi / step).floor() as i64
}

/// A finite `r`-net of the union: every point of every cell lies within `r`
/// of a returned point, and every returned point lies in some cell.
///
/// Candidates are the cell vertices and the points of the `r/√2` grid inside
/// the cells. Coverage is checked on the centers of the `r/4` grid squares
/// meeting the cells, each required to be within `r - (r/4)·√2/2` of a net
/// point; a sample that no candidate reaches gets its nearest cell point
/// added. Candidates are then dropped greedily in insertion order while
/// coverage holds.
pub fn epsilon_net(c: &CellUnion, r: f64) -> Result<Vec<Point>> {
    if c.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidRadius(r));
    }
    let step = r / SQRT_2;
    let h = r / 4.0;
    let reach = r - h * SQRT_2 / 2.0;

    let per_cell: Vec<(Vec<Point>, Vec<(i64, i64)>)> = c
        .cells()
        .par_iter()
        .map(|cell| {
            let bb = cell.bbox();
            let mut pts: Vec<Point> = cell.vertices().to_vec();
            for j in grid_span(bb.y0, bb.y1, step) {
                for i in grid_span(bb.x0, bb.x1, step) {
                    let q = Point::new(i as f64 * step, j as f64 * step);
                    if cell.distance(q) == 0.0 {
                        pts.push(q);
                    }
                }
            }
            let mut squares = Vec::new();
            let (i0, i1) = ((bb.x0 / h).floor() as i64, (bb.x1 / h).floor() as i64);
            let (j0, j1) = ((bb.y0 / h).floor() as i64, (bb.y1 / h).floor() as i64);
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let sq = Rect {
                        x0: i as f64 * h,
                        y0: j as f64 * h,
                        x1: (i + 1) as f64 * h,
                        y1: (j + 1) as f64 * h,
                    };
                    if cell.clip_rect(&sq).is_some() {
                        squares.push((i, j));
                    }
                }
            }
            (pts, squares)
        })
        .collect();

    let mut candidates = Vec::new();
    let mut seen = HashSet::new();
    let mut samples = Vec::new();
    let mut sample_cell = Vec::new();
    let mut seen_sq = HashSet::new();
    for (ci, (pts, squares)) in per_cell.into_iter().enumerate() {
        for p in pts {
            if seen.insert((p.x.to_bits(), p.y.to_bits())) {
                candidates.push(p);
            }
        }
        for (i, j) in squares {
            if seen_sq.insert((i, j)) {
                samples.push(Point::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h));
                sample_cell.push(ci);
            }
        }
    }

    let cover_lists = |cands: &[Point]| -> Vec<Vec<u32>> {
        let hash = PointHash::new(reach, cands);
        samples.par_iter().map(|&s| hash.near(cands, s)).collect()
    };
    let mut covers = cover_lists(&candidates);
    let before = candidates.len();
    for (k, list) in covers.iter().enumerate() {
        if list.is_empty() {
            let p = c.cells()[sample_cell[k]].closest_point(samples[k]);
            if seen.insert((p.x.to_bits(), p.y.to_bits())) {
                candidates.push(p);
            }
        }
    }
    if candidates.len() > before {
        covers = cover_lists(&candidates);
    }

    let mut count: Vec<u32> = covers.iter().map(|l| l.len() as u32).collect();
    let mut covered_by: Vec<Vec<u32>> = vec![Vec::new(); candidates.len()];
    for (s, list) in covers.iter().enumerate() {
        for &k in list {
            covered_by[k as usize].push(s as u32);
        }
    }
    let mut keep = vec![true; candidates.len()];
    for (k, samples_of) in covered_by.iter().enumerate() {
        if samples_of.iter().all(|&s| count[s as usize] >= 2) {
            keep[k] = false;
            for &s in samples_of {
                count[s as usize] -= 1;
            }
        }
    }
    Ok(candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect())
}

/// The closed squares of side `2·eps/3` centred on the net points, clipped
/// to `clip_to`; squares missing `clip_to` are dropped.
pub fn net_squares(net: &[Point], eps: f64, clip_to: &Rect) -> Vec<Rect> {
    let h = eps / 3.0;
    net.iter()
        .filter_map(|p| {
            Rect {
                x0: p.x - h,
                y0: p.y - h,
                x1: p.x + h,
                y1: p.y + h,
            }
            .intersection(clip_to)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexCell;

    /// Brute-force check: dense sample points of every cell are within r.
    fn covers(c: &CellUnion, net: &[Point], r: f64) -> bool {
        let n = 60;
        c.iter().all(|cell| {
            let bb = cell.bbox();
            (0..=n).all(|j| {
                (0..=n).all(|i| {
                    let q = Point::new(
                        bb.x0 + bb.width() * i as f64 / n as f64,
                        bb.y0 + bb.height() * j as f64 / n as f64,
                    );
                    let q = cell.closest_point(q);
                    net.iter().any(|p| p.distance(q) <= r + 1e-12)
                })
            })
        })
    }

    #[test]
    fn single_point() {
        let p = Point::new(0.3, -2.0);
        let c = CellUnion::single(ConvexCell::point(p));
        assert_eq!(epsilon_net(&c, 0.7).unwrap(), vec![p]);
    }

    #[test]
    fn unit_square_radius_one() {
        let c = CellUnion::from_rects(&[Rect::UNIT]);
        let net = epsilon_net(&c, 1.0).unwrap();
        assert!(net.len() <= 4, "{net:?}");
        assert!(covers(&c, &net, 1.0));
    }

    #[test]
    fn net_points_lie_in_cells_and_cover() {
        let c = CellUnion::from_rects(&[
            Rect::new(0.0, 0.0, 0.3, 0.02).unwrap(),
            Rect::new(0.5, 0.1, 0.9, 0.6).unwrap(),
        ]);
        for r in [0.05, 0.1, 0.3] {
            let net = epsilon_net(&c, r).unwrap();
            assert!(net
                .iter()
                .all(|p| c.iter().any(|cell| cell.distance(*p) <= 1e-12)));
            assert!(covers(&c, &net, r));
        }
    }

    #[test]
    fn errors() {
        assert_eq!(epsilon_net(&CellUnion::empty(), 1.0), Err(Error::EmptySet));
        let c = CellUnion::from_rects(&[Rect::UNIT]);
        assert_eq!(epsilon_net(&c, 0.0), Err(Error::InvalidRadius(0.0)));
    }

    #[test]
    fn corner_square_is_cut() {
        let q = net_squares(&[Point::new(0.0, 0.0)], 0.3, &Rect::UNIT);
        assert_eq!(q.len(), 1);
        assert!((q[0].x0).abs() < 1e-15 && (q[0].x1 - 0.1).abs() < 1e-15);
        assert!((q[0].y0).abs() < 1e-15 && (q[0].y1 - 0.1).abs() < 1e-15);
    }

    #[test]
    fn interior_square_and_dropped_square() {
        let q = net_squares(
            &[Point::new(0.5, 0.5), Point::new(5.0, 5.0)],
            0.06,
            &Rect::UNIT,
        );
        assert_eq!(q.len(), 1);
        assert!((q[0].width() - 0.04).abs() < 1e-15);
        assert!((q[0].height() - 0.04).abs() < 1e-15);
    }
}
