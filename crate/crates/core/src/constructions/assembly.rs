use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;

use crate::duality::{
    section_along, slope_coverage, CodingPointPolicy, DualFamily, LineHits, OccupancyGrid,
    ProbeLine, WorldLine,
};
use crate::error::{Error, Result};
use crate::expr::{EvalOptions, SetExpr};
use crate::geom::{Point, Rect};
use crate::interval::{Interval, IntervalUnion};

/// Rotated copies of one line family. Copy `k` is the family rotated by
/// `angles[k]` about the origin.
#[derive(Debug, Clone)]
pub struct Assembly {
    family: DualFamily,
    angles: Vec<f64>,
    exclusion_side: f64,
}

impl Assembly {
    pub fn new(family: DualFamily, angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() || angles.len() > 8 {
            return Err(Error::InvalidCopyCount(angles.len()));
        }
        if let Some(bad) = angles.iter().find(|a| !(0.0..PI).contains(*a)) {
            return Err(Error::InvalidMap(format!(
                "rotation angle {bad} not in [0, pi)"
            )));
        }
        let exclusion_side = family.default_exclusion_side();
        Ok(Assembly {
            family,
            angles,
            exclusion_side,
        })
    }

    pub fn with_exclusion_side(mut self, side: f64) -> Self {
        self.exclusion_side = side;
        self
    }

    pub fn family(&self) -> &DualFamily {
        &self.family
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn exclusion_side(&self) -> f64 {
        self.exclusion_side
    }

    pub fn copies(&self) -> impl Iterator<Item = (f64, &DualFamily)> {
        self.angles.iter().map(move |&a| (a, &self.family))
    }

    /// Whether some line of the assembly has direction `phi` (taken mod π).
    pub fn covers_direction(&self, phi: f64) -> bool {
        covered_directions(self).contains(phi.rem_euclid(PI))
    }

    /// Sections of every copy along `line`, in its arclength parameter.
    fn sections(&self, line: &WorldLine) -> Result<Vec<IntervalUnion>> {
        let policy = Some(CodingPointPolicy::ExcludeSquare(self.exclusion_side));
        self.angles
            .iter()
            .map(
                |&theta| match section_along(&self.family, &line.rotated(-theta), policy)? {
                    LineHits::Params(t) => Ok(t),
                    LineHits::Member => unreachable!("exclusion policy given"),
                },
            )
            .collect()
    }
}

pub fn besicovitch_assemble(code: SetExpr, copies: usize) -> Result<Assembly> {
    besicovitch_assemble_with(code, copies, &EvalOptions::default())
}

/// Builds `copies` rotations of the family coded by `code`, at angles
/// `k·π/4` reduced mod π. The code must contain lines of every slope in
/// `[0, 1]`.
pub fn besicovitch_assemble_with(
    code: SetExpr,
    copies: usize,
    opts: &EvalOptions,
) -> Result<Assembly> {
    if copies == 0 || copies > 8 {
        return Err(Error::InvalidCopyCount(copies));
    }
    let family = DualFamily::with_options(code, opts)?;
    let slopes = slope_coverage(&family);
    if !slopes.covers(0.0, 1.0, 1e-9) {
        return Err(Error::InsufficientSlopeCoverage(format!(
            "slopes {:?} do not contain [0, 1]",
            slopes.intervals()
        )));
    }
    let angles = (0..copies).map(|k| (k % 4) as f64 * FRAC_PI_4).collect();
    Assembly::new(family, angles)
}

/// Directions in `[0, π]` of the lines in the assembly.
pub fn covered_directions(a: &Assembly) -> IntervalUnion {
    let slopes = slope_coverage(a.family());
    let mut pieces = Vec::new();
    for &theta in a.angles() {
        for iv in slopes.intervals() {
            let lo = iv.lo.atan() + theta;
            let hi = iv.hi.atan() + theta;
            let shift = (lo / PI).floor() * PI;
            let (lo, hi) = (lo - shift, hi - shift);
            if hi > PI {
                pieces.push(Interval { lo, hi: PI });
                pieces.push(Interval {
                    lo: 0.0,
                    hi: hi - PI,
                });
            } else {
                pieces.push(Interval { lo, hi });
            }
        }
    }
    IntervalUnion::from_intervals(pieces)
}

/// Sum over copies of the length of the copy's intersection with `e`,
/// restricted to `window` when given. Without a window the result may be
/// infinite.
pub fn assembly_section_measure(a: &Assembly, e: &ProbeLine, window: Option<&Rect>) -> Result<f64> {
    let line = WorldLine::from_probe(e);
    let range = match window {
        Some(w) => match line.clip_range(w) {
            Some(r) => Some(r),
            None => return Ok(0.0),
        },
        None => None,
    };
    let total = a
        .sections(&line)?
        .iter()
        .map(|s| match range {
            Some((lo, hi)) => s.clip(lo, hi).measure(),
            None => s.measure(),
        })
        .sum();
    Ok(total)
}

/// Column-exact raster of the union of all copies; returns the grid and its
/// occupied fraction.
pub fn assembly_raster(
    a: &Assembly,
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
            let line = WorldLine {
                point: Point::new(grid.column_x(col), 0.0),
                dir: Point::new(0.0, 1.0),
            };
            let parts = a.sections(&line)?;
            let all: Vec<Interval> = parts
                .iter()
                .flat_map(|s| s.intervals().iter().copied())
                .collect();
            Ok(grid.column_mask(&IntervalUnion::from_intervals(all)))
        })
        .collect::<Result<_>>()?;
    for (col, mask) in columns.iter().enumerate() {
        grid.set_column(col, mask);
    }
    let frac = grid.fraction();
    Ok((grid, frac))
}
