//! Finite-resolution Besicovitch set approximants built through point-line
//! duality, with exact section/projection sweeps and certified Hausdorff
//! distances.

pub mod arc;
pub mod error;
pub mod expr;
pub mod geom;
pub mod interval;

pub use arc::{arc_measure, normalize_arcs, ArcUnion};
pub use error::{Error, Result};
pub use expr::{eval_set, eval_set_with, EvalOptions, IfsSystem, SetExpr};
pub use geom::{apply_affine, dilate, AffineMap, CellUnion, ConvexCell, Point, Rect};
pub use interval::{measure, normalize_intervals, Interval, IntervalUnion};
pub mod projections;

pub use projections::{
    continuity_probe, direction_scan, ortho_measure, ortho_project, radial_measure, radial_project,
    viewpoint_scan, Direction, ScanParam, ScanRow, ScanTable,
};
pub mod duality;

pub use duality::{
    line_section, raster_dual, section_via_radial, slope_coverage, vertical_section,
    CodingPointPolicy, DualFamily, OccupancyGrid, ProbeLine,
};
pub mod metrics;

pub use metrics::{hausdorff, metric_axiom_suite, point_to_union_distance, CertifiedDistance};
pub mod constructions;

pub use constructions::{
    assembly_raster, assembly_section_measure, besicovitch_assemble, covered_directions,
    epsilon_net, find_margin, fitted_invisible_set, four_corner_system, net_squares, refine_round,
    Assembly, MarginReport, RefinementReport, ScanGrid,
};
