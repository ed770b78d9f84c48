//! Builders for the concrete sets: four-corner attractors fitted to
//! rectangles, ε-nets, refinement rounds, dilation margins and rotated
//! assemblies of line families.

mod assembly;
mod net;
mod refine;

pub use assembly::{
    assembly_raster, assembly_section_measure, besicovitch_assemble, besicovitch_assemble_with,
    covered_directions, Assembly,
};
pub use net::{epsilon_net, net_squares};
pub use refine::{
    find_margin, refine_round, refine_round_with, MarginReport, RefineOptions, RefinementReport,
    ScanGrid,
};

use crate::error::{Error, Result};
use crate::expr::{IfsSystem, SetExpr};
use crate::geom::{AffineMap, ConvexCell, Rect};

/// The four similarities with ratio `ratio` fixing the corners of the unit
/// square.
pub fn four_corner_system(ratio: f64) -> Result<IfsSystem> {
    if !(ratio > 0.0 && ratio <= 0.5) {
        return Err(Error::InvalidRatio(ratio));
    }
    let t = 1.0 - ratio;
    IfsSystem::new(vec![
        AffineMap::similarity(ratio, 0.0, 0.0),
        AffineMap::similarity(ratio, t, 0.0),
        AffineMap::similarity(ratio, 0.0, t),
        AffineMap::similarity(ratio, t, t),
    ])
}

/// Affine map taking the unit square through the shear `(x, y) -> (x - y/2, y)`
/// and then sending `[-1/2, 1] x [0, 1]` onto `target`.
pub fn fitting_map(target: &Rect) -> AffineMap {
    let w = target.width();
    let h = target.height();
    AffineMap::new(
        [[2.0 * w / 3.0, -w / 3.0], [0.0, h]],
        [target.x0 + w / 3.0, target.y0],
    )
}

/// Level-`level` four-corner set (ratio 1/4) sheared and fitted into
/// `target`. Its projection onto the x-axis is exactly `[x0, x1]`: under the
/// shear the four first-level pieces project onto consecutive quarters of
/// the image interval.
pub fn fitted_invisible_set(target: &Rect, level: u32) -> Result<SetExpr> {
    if target.is_degenerate() {
        return Err(Error::InvalidRectangle {
            x0: target.x0,
            y0: target.y0,
            x1: target.x1,
            y1: target.y1,
        });
    }
    Ok(SetExpr::image(
        fitting_map(target),
        SetExpr::Attractor {
            system: four_corner_system(0.25)?,
            level,
            seed: ConvexCell::rect(&Rect::UNIT),
        },
    ))
}
