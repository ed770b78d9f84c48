//! Hausdorff distances between cell unions with certified error bounds.
//!
//! The distance to a closed set is 1-Lipschitz, so its maximum over a cell
//! is bracketed by values at sample points plus the sampling radius. The
//! directed distance is computed by best-first refinement of boxes over
//! each source cell down to the sample spacing; boxes whose upper bound
//! cannot beat the current lower bound are discarded.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{CellUnion, ConvexCell, Point, Rect};

/// A bracket `[lower, upper]` around a Hausdorff distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedDistance {
    pub lower: f64,
    pub upper: f64,
    pub sample_spacing: f64,
}

impl CertifiedDistance {
    pub fn contains(&self, d: f64) -> bool {
        self.lower <= d && d <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Minimum distance from `p` to any cell of `c`.
pub fn point_to_union_distance(p: Point, c: &CellUnion) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(c.cells()
        .par_iter()
        .with_min_len(1024)
        .map(|cell| cell.distance(p))
        .reduce(|| f64::INFINITY, f64::min))
}

/// Uniform bucket grid over a cell union for nearest-cell queries.
pub struct UnionIndex<'a> {
    cells: &'a [ConvexCell],
    bounds: Rect,
    nx: usize,
    ny: usize,
    bw: f64,
    bh: f64,
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl<'a> UnionIndex<'a> {
    pub fn new(union: &'a CellUnion) -> Result<Self> {
        let cells = union.cells();
        let bounds = union.bbox().ok_or(Error::EmptySet)?;
        let n = cells.len();
        let side = (n as f64).sqrt().ceil().clamp(1.0, 2048.0);
        let (w, h) = (bounds.width(), bounds.height());
        let (nx, ny) = if w <= 0.0 && h <= 0.0 {
            (1, 1)
        } else if w >= h {
            let ny = ((side * h / w.max(1e-300)).ceil() as usize).max(1);
            (side as usize, ny.min(side as usize))
        } else {
            let nx = ((side * w / h.max(1e-300)).ceil() as usize).max(1);
            (nx.min(side as usize), side as usize)
        };
        let bw = if w > 0.0 { w / nx as f64 } else { 1.0 };
        let bh = if h > 0.0 { h / ny as f64 } else { 1.0 };
        let mut index = UnionIndex {
            cells,
            bounds,
            nx,
            ny,
            bw,
            bh,
            offsets: Vec::new(),
            items: Vec::new(),
        };
        let ranges: Vec<(usize, usize, usize, usize)> = cells
            .iter()
            .map(|c| index.bucket_range(&c.bbox()))
            .collect();
        let mut counts = vec![0u32; nx * ny + 1];
        for &(i0, i1, j0, j1) in &ranges {
            for j in j0..=j1 {
                for i in i0..=i1 {
                    counts[j * nx + i + 1] += 1;
                }
            }
        }
        for k in 1..counts.len() {
            counts[k] += counts[k - 1];
        }
        let mut fill = counts.clone();
        let mut items = vec![0u32; counts[nx * ny] as usize];
        for (ci, &(i0, i1, j0, j1)) in ranges.iter().enumerate() {
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let b = j * nx + i;
                    items[fill[b] as usize] = ci as u32;
                    fill[b] += 1;
                }
            }
        }
        index.offsets = counts;
        index.items = items;
        Ok(index)
    }

    fn bucket_of(&self, x: f64, y: f64) -> (usize, usize) {
        let i = ((x - self.bounds.x0) / self.bw).floor();
        let j = ((y - self.bounds.y0) / self.bh).floor();
        (
            (i.max(0.0) as usize).min(self.nx - 1),
            (j.max(0.0) as usize).min(self.ny - 1),
        )
    }

    fn bucket_range(&self, r: &Rect) -> (usize, usize, usize, usize) {
        let (i0, j0) = self.bucket_of(r.x0, r.y0);
        let (i1, j1) = self.bucket_of(r.x1, r.y1);
        (i0, i1, j0, j1)
    }

    fn bucket(&self, i: usize, j: usize) -> &[u32] {
        let b = j * self.nx + i;
        &self.items[self.offsets[b] as usize..self.offsets[b + 1] as usize]
    }

    /// True when some single cell contains the whole rectangle.
    pub fn covers(&self, r: &Rect) -> bool {
        let (i, j) = self.bucket_of(r.center().x, r.center().y);
        let corners = r.corners();
        self.bucket(i, j).iter().any(|&k| {
            let cell = &self.cells[k as usize];
            corners.iter().all(|&q| cell.distance(q) == 0.0)
        })
    }

    /// Distance from `p` to the nearest cell.
    pub fn distance(&self, p: Point) -> f64 {
        let b = &self.bounds;
        let pc = Point::new(p.x.clamp(b.x0, b.x1), p.y.clamp(b.y0, b.y1));
        let d_out2 = (p - pc).norm_squared();
        let (ci, cj) = self.bucket_of(pc.x, pc.y);
        let mut best = f64::INFINITY;
        let max_r = self.nx.max(self.ny);
        for r in 0..=max_r {
            let i0 = ci.saturating_sub(r);
            let i1 = (ci + r).min(self.nx - 1);
            let j0 = cj.saturating_sub(r);
            let j1 = (cj + r).min(self.ny - 1);
            for j in j0..=j1 {
                let on_edge_row = j + r == cj || j == cj + r;
                for i in i0..=i1 {
                    if !on_edge_row && i + r != ci && i != ci + r {
                        continue;
                    }
                    for &k in self.bucket(i, j) {
                        let d = self.cells[k as usize].distance(p);
                        if d < best {
                            best = d;
                        }
                    }
                }
            }
            // cells not yet seen lie outside the searched block of buckets
            let mut gap = f64::INFINITY;
            if ci > r {
                gap = gap.min(pc.x - (b.x0 + i0 as f64 * self.bw));
            }
            if ci + r + 1 < self.nx {
                gap = gap.min(b.x0 + (i1 + 1) as f64 * self.bw - pc.x);
            }
            if cj > r {
                gap = gap.min(pc.y - (b.y0 + j0 as f64 * self.bh));
            }
            if cj + r + 1 < self.ny {
                gap = gap.min(b.y0 + (j1 + 1) as f64 * self.bh - pc.y);
            }
            if gap == f64::INFINITY {
                break;
            }
            let lb = (d_out2 + gap.max(0.0).powi(2)).sqrt();
            if best <= lb {
                break;
            }
        }
        best
    }
}

struct BoxItem {
    ub: f64,
    x0: f64,
    y0: f64,
    side: f64,
    center_dist: f64,
}

impl PartialEq for BoxItem {
    fn eq(&self, other: &Self) -> bool {
        self.ub == other.ub
    }
}
impl Eq for BoxItem {}
impl PartialOrd for BoxItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for BoxItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub
            .total_cmp(&other.ub)
            .then(other.x0.total_cmp(&self.x0))
            .then(other.y0.total_cmp(&self.y0))
    }
}

/// Certified bracket on `max_{p ∈ cell} d(p, target)` given a known lower
/// bound `floor` from elsewhere. Returns `(lower, upper)` with both at least
/// `floor`.
fn directed_cell(cell: &ConvexCell, target: &UnionIndex, h: f64, floor: f64) -> (f64, f64) {
    let bb = cell.bbox();
    let extent = bb.width().max(bb.height());
    let mut side = h;
    while side < extent {
        side *= 2.0;
    }
    let half_diag = |s: f64| s * std::f64::consts::FRAC_1_SQRT_2;
    let make = |x0: f64, y0: f64, side: f64| -> Option<BoxItem> {
        let r = Rect {
            x0,
            y0,
            x1: x0 + side,
            y1: y0 + side,
        };
        cell.clip_rect(&r)?;
        let c = r.center();
        let d = target.distance(c);
        let ub = if d == 0.0 && target.covers(&r) {
            0.0
        } else {
            d + half_diag(side)
        };
        Some(BoxItem {
            ub,
            x0,
            y0,
            side,
            center_dist: d,
        })
    };
    let mut lower = floor;
    let mut leaf_ub = floor;
    let mut heap = BinaryHeap::new();
    heap.extend(make(bb.x0, bb.y0, side));
    while let Some(item) = heap.pop() {
        if item.ub <= lower {
            break;
        }
        if item.side <= h {
            let r = Rect {
                x0: item.x0,
                y0: item.y0,
                x1: item.x0 + item.side,
                y1: item.y0 + item.side,
            };
            let c = r.center();
            let sample_d = if cell.distance(c) == 0.0 {
                item.center_dist
            } else {
                match cell.clip_rect(&r) {
                    Some(piece) => target.distance(piece.centroid_of_vertices()),
                    None => continue,
                }
            };
            lower = lower.max(sample_d);
            leaf_ub = leaf_ub.max(item.ub);
            continue;
        }
        let s = 0.5 * item.side;
        for (dx, dy) in [(0.0, 0.0), (s, 0.0), (0.0, s), (s, s)] {
            heap.extend(make(item.x0 + dx, item.y0 + dy, s));
        }
    }
    (lower, leaf_ub.max(lower))
}

/// Certified bracket on the directed distance `sup_{p ∈ a} d(p, b)`.
pub fn directed_hausdorff(a: &CellUnion, b: &CellUnion, h: f64) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidSpacing(h));
    }
    let index = UnionIndex::new(b)?;
    // vertices are always samples
    let floor = a
        .cells()
        .par_iter()
        .flat_map_iter(|c| c.vertices().iter().copied())
        .map(|v| index.distance(v))
        .reduce(|| 0.0, f64::max);
    let (lower, upper) = a
        .cells()
        .par_iter()
        .map(|c| directed_cell(c, &index, h, floor))
        .reduce(|| (floor, floor), |x, y| (x.0.max(y.0), x.1.max(y.1)));
    Ok((lower, upper))
}

/// Certified Hausdorff distance between two nonempty cell unions, sampling
/// at spacing `h`.
pub fn hausdorff(a: &CellUnion, b: &CellUnion, h: f64) -> Result<CertifiedDistance> {
    let (l1, u1) = directed_hausdorff(a, b, h)?;
    let (l2, u2) = directed_hausdorff(b, a, h)?;
    Ok(CertifiedDistance {
        lower: l1.max(l2),
        upper: u1.max(u2),
        sample_spacing: h,
    })
}

/// Outcome of [`metric_axiom_suite`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxiomReport {
    pub cases: usize,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks identity, symmetry and the triangle inequality on certified
/// distances for every triple.
pub fn metric_axiom_suite(
    triples: &[(CellUnion, CellUnion, CellUnion)],
    h: f64,
) -> Result<AxiomReport> {
    if triples.is_empty() {
        return Err(Error::InsufficientData("no triples".into()));
    }
    let slack = 1e-12;
    let results = triples
        .iter()
        .enumerate()
        .map(|(i, (a, b, c))| {
            let mut v = Vec::new();
            let aa = hausdorff(a, a, h)?;
            if aa.lower > slack {
                v.push(format!("triple {i}: d(A,A) lower bound {} > 0", aa.lower));
            }
            let ab = hausdorff(a, b, h)?;
            let ba = hausdorff(b, a, h)?;
            if ab.lower > ba.upper + slack || ba.lower > ab.upper + slack {
                v.push(format!(
                    "triple {i}: d(A,B) {ab:?} and d(B,A) {ba:?} disagree"
                ));
            }
            let bc = hausdorff(b, c, h)?;
            let ac = hausdorff(a, c, h)?;
            if ac.lower > ab.upper + bc.upper + slack {
                v.push(format!(
                    "triple {i}: triangle inequality fails: {} > {} + {}",
                    ac.lower, ab.upper, bc.upper
                ));
            }
            for (name, d) in [("AB", ab), ("BC", bc), ("AC", ac)] {
                if d.lower > d.upper || d.width() > h * std::f64::consts::SQRT_2 + slack {
                    v.push(format!("triple {i}: bad certificate for {name}: {d:?}"));
                }
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomReport {
        cases: triples.len(),
        violations: results.into_iter().flatten().collect(),
    })
}
