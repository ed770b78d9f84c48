use std::f64::consts::PI;

use rayon::prelude::*;

use super::cell::{convex_hull, Vertices};
use super::{CellUnion, ConvexCell, Point};
use crate::error::{Error, Result};

/// Number of sides of the polygon standing in for a disk.
pub const DISK_SIDES: usize = 16;

/// Regular polygon whose inscribed circle is the radius-`r` disk about
/// `center`. Edge normals point along multiples of `2π / DISK_SIDES`.
pub fn circumscribed_polygon(center: Point, r: f64) -> Vec<Point> {
    let n = DISK_SIDES as f64;
    let circum = r / (PI / n).cos();
    (0..DISK_SIDES)
        .map(|k| {
            let a = (2.0 * k as f64 + 1.0) * PI / n;
            center + Point::new(a.cos(), a.sin()) * circum
        })
        .collect()
}

/// Regular polygon inscribed in the radius-`r` circle about `center`.
pub fn inscribed_polygon(center: Point, r: f64) -> Vec<Point> {
    let n = DISK_SIDES as f64;
    (0..DISK_SIDES)
        .map(|k| {
            let a = (2.0 * k as f64 + 1.0) * PI / n;
            center + Point::new(a.cos(), a.sin()) * r
        })
        .collect()
}

/// Minkowski sum of a convex cell with the circumscribed disk polygon of
/// radius `r`.
pub fn dilate_cell(cell: &ConvexCell, r: f64) -> ConvexCell {
    let disk = circumscribed_polygon(Point::ORIGIN, r);
    let mut sums = Vec::with_capacity(cell.len() * DISK_SIDES);
    for &v in cell.vertices() {
        sums.extend(disk.iter().map(|&d| v + d));
    }
    let hull: Vertices = convex_hull(&sums).into_iter().collect();
    ConvexCell::from_raw(hull)
}

/// Conservative closed `r`-neighbourhood of a cell union: every cell is
/// replaced by its Minkowski sum with a regular 16-gon circumscribed about
/// the radius-`r` disk.
pub fn dilate(c: &CellUnion, r: f64) -> Result<CellUnion> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidRadius(r));
    }
    Ok(CellUnion::new(
        c.cells()
            .par_iter()
            .map(|cell| dilate_cell(cell, r))
            .collect(),
    ))
}
