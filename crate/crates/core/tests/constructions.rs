mod common;

use besicovitch_core::constructions::{refine_round_with, RefineOptions};
use besicovitch_core::projections::viewpoint_grid;
use besicovitch_core::{
    epsilon_net, eval_set, find_margin, four_corner_system, refine_round, CellUnion, ConvexCell,
    Point, Rect, ScanGrid, SetExpr,
};

fn four_corner(level: u32) -> CellUnion {
    eval_set(&SetExpr::Attractor {
        system: four_corner_system(0.25).unwrap(),
        level,
        seed: ConvexCell::rect(&Rect::UNIT),
    })
    .unwrap()
}

#[test]
fn four_corner_projection_halves_each_level() {
    // each level keeps the two outer quarters of every interval
    for n in 0..=6 {
        let ext = common::x_extents(&four_corner(n));
        let want = 0.5f64.powi(n as i32);
        assert!(
            (common::total_length(&ext) - want).abs() < 1e-12,
            "level {n}"
        );
        assert_eq!(ext.len(), 1 << n);
    }
}

#[test]
fn net_of_sixteen_squares_stays_inside() {
    let c = four_corner(2);
    let net = epsilon_net(&c, 1.0 / 16.0).unwrap();
    for p in &net {
        assert!(c.iter().any(|cell| cell.distance(*p) <= 1e-12), "{p:?}");
    }
    // every cell contributes at least one point
    for cell in c.iter() {
        assert!(net.iter().any(|p| cell.distance(*p) <= 1e-12));
    }
}

#[test]
fn second_round_halves_the_distance() {
    let sq = CellUnion::from_rects(&[Rect::UNIT]);
    let opts = RefineOptions {
        viewpoints: Vec::new(),
        ..Default::default()
    };
    let first = refine_round_with(&sq, 0.3, 3, &opts).unwrap();
    assert!(first.dh_bound() < 0.3);
    let second = refine_round_with(&first.output, 0.15, 3, &opts).unwrap();
    assert!(second.dh_bound() < 0.15, "{:?}", second.distance);
    assert!((second.x_projection.measure() - 1.0).abs() < 1e-12);
}

#[test]
fn report_fields_are_consistent() {
    let sq = CellUnion::from_rects(&[Rect::UNIT]);
    let rep = refine_round(&sq, 0.3, 4).unwrap();
    assert_eq!(rep.squares.len(), rep.net.len());
    assert_eq!(rep.output.len(), rep.squares.len() * 256);
    assert!(rep.distance.lower >= 0.0 && rep.distance.lower <= rep.distance.upper);
    assert!(rep.dh_bound() < rep.chain_bound() + 0.003 * std::f64::consts::SQRT_2);
}

// Frozen from the first recorded run. The outer viewpoints of the 5x5 grid
// see the level-6 output under at most 1.127 rad, so the threshold sits
// just above that.
const MARGIN_THRESHOLD: f64 = 1.25;
const MARGIN_BASELINE: f64 = 0.04306640625;

#[test]
fn refined_set_has_positive_margin() {
    let sq = CellUnion::from_rects(&[Rect::UNIT]);
    let opts = RefineOptions {
        viewpoints: Vec::new(),
        ..Default::default()
    };
    let rep = refine_round_with(&sq, 0.3, 6, &opts).unwrap();
    let points: Vec<Point> = viewpoint_grid(&Rect::new(-2.0, -2.0, 3.0, 3.0).unwrap(), 5, 5)
        .into_iter()
        .filter(|p| !Rect::UNIT.contains(*p))
        .collect();
    assert_eq!(points.len(), 24);
    let grid = ScanGrid::Viewpoints {
        points,
        exclusion: 0.0,
    };
    let m = find_margin(&rep.output, &grid, MARGIN_THRESHOLD, 0.05).unwrap();
    assert!(m.margin > 0.0);
    assert!(m.scan.max_measure() < MARGIN_THRESHOLD);
    assert_eq!(m.tested.len(), 11);
    assert!((m.margin - MARGIN_BASELINE).abs() < 1e-12, "{}", m.margin);
}
