mod common;

use std::f64::consts::PI;

use besicovitch_core::duality::section_along;
use besicovitch_core::duality::{LineHits, WorldLine};
use besicovitch_core::{
    dilate, eval_set, fitted_invisible_set, hausdorff, line_section, ortho_measure, ortho_project,
    radial_measure, vertical_section, AffineMap, CellUnion, CodingPointPolicy, Direction,
    DualFamily, Point, ProbeLine, Rect, SetExpr,
};
use proptest::prelude::*;

use common::*;

fn rect_strategy() -> impl Strategy<Value = Rect> {
    (-3.0f64..3.0, -3.0f64..3.0, 0.01f64..2.0, 0.01f64..2.0)
        .prop_map(|(x, y, w, h)| Rect::new(x, y, x + w, y + h).unwrap())
}

fn rects_strategy() -> impl Strategy<Value = Vec<Rect>> {
    prop::collection::vec(rect_strategy(), 1..8)
}

fn pairs(u: &besicovitch_core::IntervalUnion) -> Vec<(f64, f64)> {
    u.intervals().iter().map(|iv| (iv.lo, iv.hi)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vertical_section_is_scaled_projection(rects in rects_strategy(), x in -5.0f64..5.0) {
        let f = DualFamily::from_cells(CellUnion::from_rects(&rects));
        let s = vertical_section(&f, x);
        let d = Direction::new(Point::new(-1.0, x)).unwrap();
        let p = ortho_project(f.cells(), &d).affine_image(x.hypot(1.0), 0.0);
        let gap = s.endpoint_distance(&p);
        prop_assert!(gap.is_some_and(|g| g <= 1e-9), "{s:?} vs {p:?}");
        let oracle = rect_vertical_section(&rects, x);
        prop_assert_eq!(pairs(&s).len(), oracle.len());
    }

    #[test]
    fn section_of_union_is_union_of_sections(
        a in rects_strategy(), b in rects_strategy(), x in -5.0f64..5.0
    ) {
        let fa = DualFamily::from_cells(CellUnion::from_rects(&a));
        let fb = DualFamily::from_cells(CellUnion::from_rects(&b));
        let both = DualFamily::new(SetExpr::Union(vec![
            SetExpr::Cells(CellUnion::from_rects(&a)),
            SetExpr::Cells(CellUnion::from_rects(&b)),
        ])).unwrap();
        let joined = vertical_section(&fa, x).union(&vertical_section(&fb, x));
        prop_assert_eq!(vertical_section(&both, x), joined);
    }

    #[test]
    fn projection_is_rotation_equivariant(
        rects in rects_strategy(), phi in 0.0f64..PI, theta in -PI..PI
    ) {
        let c = CellUnion::from_rects(&rects);
        let rotated = besicovitch_core::apply_affine(&c, &AffineMap::rotation(theta));
        let m0 = ortho_measure(&c, &Direction::from_angle(phi));
        let m1 = ortho_measure(&rotated, &Direction::from_angle(phi + theta));
        prop_assert!((m0 - m1).abs() <= 1e-9 * m0.max(1.0));
    }

    #[test]
    fn projection_is_monotone(rects in rects_strategy(), extra in rect_strategy(), phi in 0.0f64..PI) {
        let small = CellUnion::from_rects(&rects);
        let mut big = small.clone();
        big.push(besicovitch_core::ConvexCell::rect(&extra));
        let d = Direction::from_angle(phi);
        prop_assert!(ortho_measure(&small, &d) <= ortho_measure(&big, &d) + 1e-12);
    }

    #[test]
    fn radial_measure_is_monotone(
        rects in rects_strategy(), extra in rect_strategy(), vx in -6.0f64..6.0, vy in -6.0f64..6.0
    ) {
        let small = CellUnion::from_rects(&rects);
        let mut big = small.clone();
        big.push(besicovitch_core::ConvexCell::rect(&extra));
        let v = Point::new(vx, vy);
        prop_assert!(radial_measure(&small, v, 0.0) <= radial_measure(&big, v, 0.0) + 1e-12);
    }

    #[test]
    fn sloped_section_contains_sampled_crossings(
        rects in prop::collection::vec(rect_strategy(), 1..5),
        a0 in -3.0f64..3.0, b0 in -3.0f64..3.0
    ) {
        let f = DualFamily::from_cells(CellUnion::from_rects(&rects));
        prop_assume!(!f.contains_line(a0, b0));
        let s = line_section(&f, &ProbeLine::Sloped(a0, b0), CodingPointPolicy::Reject).unwrap();
        for cell in f.cells().iter() {
            for p in cell_samples(cell, 6) {
                prop_assume!((p.x - a0).abs() > 1e-6);
                let g = (p.y - b0) / (a0 - p.x);
                let tol = 1e-9 * g.abs().max(1.0);
                prop_assert!(s.intervals().iter().any(|iv| iv.lo - tol <= g && g <= iv.hi + tol));
            }
        }
    }

    #[test]
    fn section_along_matches_rotated_point_membership(
        rects in prop::collection::vec(rect_strategy(), 1..4),
        px in -2.0f64..2.0, py in -2.0f64..2.0, ang in 0.0f64..PI, t in -3.0f64..3.0
    ) {
        let f = DualFamily::from_cells(CellUnion::from_rects(&rects));
        let line = WorldLine::new(Point::new(px, py), Point::new(ang.cos(), ang.sin())).unwrap();
        let hits = section_along(&f, &line, None).unwrap();
        prop_assume!(hits != LineHits::Member);
        let LineHits::Params(params) = hits else { unreachable!() };
        let q = line.point + line.dir * t;
        let on = f.cells().iter().any(|c| on_coded_line(c, q.x, q.y));
        if on {
            prop_assert!(params.intervals().iter().any(|iv| iv.lo - 1e-7 <= t && t <= iv.hi + 1e-7));
        }
    }
}

#[test]
fn exclusion_is_monotone_in_square_side() {
    let f = DualFamily::from_cells(CellUnion::from_rects(&[
        Rect::new(0.0, 0.0, 1.0, 1.0).unwrap(),
        Rect::new(1.5, -0.5, 2.0, 0.5).unwrap(),
    ]));
    let e = ProbeLine::Sloped(0.4, 0.3);
    let window = |side: f64| {
        line_section(&f, &e, CodingPointPolicy::ExcludeSquare(side))
            .unwrap()
            .clip(-50.0, 50.0)
            .measure()
    };
    // shrinking the excluded square can only add crossings
    let sides = [0.4, 0.2, 0.1, 0.05, 0.01, 0.001];
    let ms: Vec<f64> = sides.iter().map(|&s| window(s)).collect();
    assert!(ms.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{ms:?}");
}

#[test]
fn fitted_projection_exact_at_every_level() {
    for level in 0..=8 {
        let c = eval_set(&fitted_invisible_set(&Rect::UNIT, level).unwrap()).unwrap();
        let ext = x_extents(&c);
        assert_eq!(ext.len(), 1);
        assert!((total_length(&ext) - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn fitted_levels_shrink_radially() {
    let levels: Vec<CellUnion> = (1..=7)
        .map(|n| eval_set(&fitted_invisible_set(&Rect::UNIT, n).unwrap()).unwrap())
        .collect();
    for v in [
        Point::new(-1.0, 0.3),
        Point::new(2.5, 2.5),
        Point::new(0.5, -4.0),
    ] {
        let m: Vec<f64> = levels.iter().map(|c| radial_measure(c, v, 0.0)).collect();
        assert!(m.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{v:?}: {m:?}");
    }
}

#[test]
fn dilation_distance_is_bounded_by_circumradius() {
    let a = CellUnion::from_rects(&[
        Rect::new(0.0, 0.0, 1.0, 0.3).unwrap(),
        Rect::new(2.0, 1.0, 2.2, 1.5).unwrap(),
    ]);
    for r in [0.01, 0.1, 0.5] {
        let h = 1e-3;
        let d = hausdorff(&a, &dilate(&a, r).unwrap(), h).unwrap();
        let circum = r / (PI / 16.0).cos();
        assert!(
            d.upper <= circum + h * std::f64::consts::SQRT_2,
            "{r}: {d:?}"
        );
        assert!(d.lower >= r - 1e-12, "{r}: {d:?}");
    }
}

#[test]
fn certification_width_halves_with_spacing() {
    let a = CellUnion::from_rects(&[Rect::new(0.0, 0.0, 1.0, 1.0).unwrap()]);
    let b = CellUnion::from_rects(&[Rect::new(0.3, 0.2, 0.6, 0.4).unwrap()]);
    let truth = rect_hausdorff(&Rect::UNIT, &Rect::new(0.3, 0.2, 0.6, 0.4).unwrap());
    for h in [0.02, 0.01, 0.005, 0.0025] {
        let d = hausdorff(&a, &b, h).unwrap();
        assert!(d.width() <= h * std::f64::consts::SQRT_2);
        assert!(d.lower <= truth + 1e-12 && truth <= d.upper + 1e-12);
    }
}
