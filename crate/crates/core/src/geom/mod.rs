//! Planar primitives: points, affine maps, convex cells and their unions.

mod affine;
pub(crate) mod cell;
mod dilate;
mod point;
mod rect;

pub use affine::AffineMap;
pub use cell::{convex_hull, CellUnion, ConvexCell, Location};
pub use dilate::{circumscribed_polygon, dilate, dilate_cell, inscribed_polygon, DISK_SIDES};
pub use point::Point;
pub use rect::Rect;

/// Absolute tolerance used by geometric predicates.
pub const TOL: f64 = 1e-12;

/// Applies `m` to every cell of `c`.
pub fn apply_affine(c: &CellUnion, m: &AffineMap) -> CellUnion {
    c.iter().map(|cell| cell.map(m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_leaves_cells_unchanged() {
        let c = CellUnion::from_rects(&[Rect::UNIT, Rect::new(2.0, 0.0, 3.0, 0.5).unwrap()]);
        assert_eq!(apply_affine(&c, &AffineMap::IDENTITY), c);
    }

    #[test]
    fn rotation_by_pi_maps_unit_square_to_negative_quadrant() {
        let c = CellUnion::from_rects(&[Rect::UNIT]);
        let r = apply_affine(&c, &AffineMap::rotation(std::f64::consts::PI));
        let bb = r.cells()[0].bbox();
        for (got, want) in [(bb.x0, -1.0), (bb.y0, -1.0), (bb.x1, 0.0), (bb.y1, 0.0)] {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(r.cells()[0].area() > 0.0);
    }

    #[test]
    fn shear_vertices() {
        let c = CellUnion::from_rects(&[Rect::UNIT]);
        let shear = AffineMap::new([[1.0, -0.5], [0.0, 1.0]], [0.0, 0.0]);
        let r = apply_affine(&c, &shear);
        let v = r.cells()[0].vertices();
        let want = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 1.0),
            Point::new(-0.5, 1.0),
        ];
        assert_eq!(v, &want);
    }

    #[test]
    fn reflection_restores_ccw_orientation() {
        let c = CellUnion::from_rects(&[Rect::UNIT]);
        let r = apply_affine(&c, &AffineMap::scaling(-1.0, 1.0));
        assert!((r.cells()[0].area() - 1.0).abs() < 1e-15);
    }
}
