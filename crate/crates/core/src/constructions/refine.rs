use rayon::prelude::*;

use super::{epsilon_net, fitted_invisible_set, net_squares};
use crate::error::{Error, Result};
use crate::expr::{eval_set_with, EvalOptions, SetExpr};
use crate::geom::{dilate, CellUnion, Point, Rect};
use crate::interval::IntervalUnion;
use crate::metrics::{hausdorff, CertifiedDistance};
use crate::projections::{
    direction_scan, exclude_ball, ortho_project, radial_project, viewpoint_grid, viewpoint_scan,
    Direction, ScanTable,
};

/// Settings for [`refine_round_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct RefineOptions {
    pub eval: EvalOptions,
    /// Viewpoints for the before/after radial scans. Viewpoints inside the
    /// set being scanned are skipped.
    pub viewpoints: Vec<Point>,
    pub exclusion: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            eval: EvalOptions::default(),
            viewpoints: viewpoint_grid(&Rect::new(-2.0, -2.0, 3.0, 3.0).expect("valid"), 5, 5),
            exclusion: 0.0,
        }
    }
}

/// Everything one refinement round produced.
#[derive(Debug, Clone)]
pub struct RefinementReport {
    pub input: CellUnion,
    pub eps: f64,
    pub level: u32,
    pub net: Vec<Point>,
    pub squares: Vec<Rect>,
    /// Expression for the output set: one fitted set per square.
    pub code: SetExpr,
    pub output: CellUnion,
    pub x_projection: IntervalUnion,
    pub distance: CertifiedDistance,
    pub scan_before: ScanTable,
    pub scan_after: ScanTable,
}

impl RefinementReport {
    /// Certified upper bound on the Hausdorff distance from input to output.
    pub fn dh_bound(&self) -> f64 {
        self.distance.upper
    }

    /// `(√2 + 1)/3 · eps`, the distance the construction guarantees.
    pub fn chain_bound(&self) -> f64 {
        (std::f64::consts::SQRT_2 + 1.0) / 3.0 * self.eps
    }
}

fn x_axis() -> Direction {
    Direction::new(Point::new(0.0, 1.0)).expect("nonzero")
}

fn exterior_scan(c: &CellUnion, points: &[Point], exclusion: f64) -> Result<ScanTable> {
    let outside: Vec<Point> = points.iter().copied().filter(|&p| !c.contains(p)).collect();
    if outside.is_empty() {
        return Ok(ScanTable::new(Vec::new()));
    }
    viewpoint_scan(c, &outside, exclusion)
}

pub fn refine_round(c: &CellUnion, eps: f64, level: u32) -> Result<RefinementReport> {
    refine_round_with(c, eps, level, &RefineOptions::default())
}

/// One refinement round: cover `c` by squares around an `eps/3`-net and
/// replace each square by a fitted four-corner set with the same
/// x-projection.
pub fn refine_round_with(
    c: &CellUnion,
    eps: f64,
    level: u32,
    opts: &RefineOptions,
) -> Result<RefinementReport> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidRadius(eps));
    }
    let xp = ortho_project(c, &x_axis());
    if !xp.covers(0.0, 1.0, 1e-9) {
        let shown: Vec<String> = xp
            .intervals()
            .iter()
            .map(|iv| format!("[{}, {}]", iv.lo, iv.hi))
            .collect();
        return Err(Error::NotInOmega(shown.join(" ")));
    }
    let net = epsilon_net(c, eps / 3.0)?;
    let squares: Vec<Rect> = net_squares(&net, eps, &Rect::UNIT)
        .into_iter()
        .filter(|r| !r.is_degenerate())
        .collect();
    let code = SetExpr::Union(
        squares
            .iter()
            .map(|q| fitted_invisible_set(q, level))
            .collect::<Result<_>>()?,
    );
    let output = eval_set_with(&code, &opts.eval)?;
    let x_projection = ortho_project(&output, &x_axis());
    let distance = hausdorff(c, &output, eps / 100.0)?;
    let scan_before = exterior_scan(c, &opts.viewpoints, opts.exclusion)?;
    let scan_after = exterior_scan(&output, &opts.viewpoints, opts.exclusion)?;
    Ok(RefinementReport {
        input: c.clone(),
        eps,
        level,
        net,
        squares,
        code,
        output,
        x_projection,
        distance,
        scan_before,
        scan_after,
    })
}

/// The parameter set a margin search scans over.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanGrid {
    Directions(Vec<Direction>),
    /// Radial scans from each point, ignoring a ball of radius `exclusion`
    /// around it.
    Viewpoints {
        points: Vec<Point>,
        exclusion: f64,
    },
}

impl ScanGrid {
    pub fn scan(&self, c: &CellUnion) -> Result<ScanTable> {
        match self {
            ScanGrid::Directions(d) => direction_scan(c, d),
            ScanGrid::Viewpoints { points, exclusion } => viewpoint_scan(c, points, *exclusion),
        }
    }
}

/// Result of [`find_margin`].
#[derive(Debug, Clone, PartialEq)]
pub struct MarginReport {
    pub margin: f64,
    /// Scan of the set dilated by `margin`, or the failing scan when the
    /// margin is zero.
    pub scan: ScanTable,
    /// Every radius tried, with whether its scan stayed below threshold.
    pub tested: Vec<(f64, bool)>,
    /// For viewpoint scans: the annulus estimate `δ/(5n)` with `n` the
    /// reciprocal exclusion radius. Recorded for comparison only.
    pub annulus_estimate: Option<f64>,
}

const MARGIN_STEPS: usize = 10;

fn below(t: &ScanTable, threshold: f64) -> bool {
    t.rows().iter().all(|r| r.measure < threshold)
}

/// Largest dilation radius in `(0, r_max]`, to ten bisection steps, whose
/// scan stays strictly below `threshold` everywhere. Zero when even the
/// undilated set fails.
pub fn find_margin(
    c: &CellUnion,
    grid: &ScanGrid,
    threshold: f64,
    r_max: f64,
) -> Result<MarginReport> {
    if !(threshold > 0.0) {
        return Err(Error::InsufficientData(format!(
            "threshold {threshold} must be positive"
        )));
    }
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::InvalidRadius(r_max));
    }
    let annulus_estimate = annulus_estimate(c, grid, threshold);
    let base = grid.scan(c)?;
    let mut tested = Vec::new();
    if !below(&base, threshold) {
        return Ok(MarginReport {
            margin: 0.0,
            scan: base,
            tested,
            annulus_estimate,
        });
    }
    let top = grid.scan(&dilate(c, r_max)?)?;
    let top_ok = below(&top, threshold);
    tested.push((r_max, top_ok));
    if top_ok {
        return Ok(MarginReport {
            margin: r_max,
            scan: top,
            tested,
            annulus_estimate,
        });
    }
    let (mut lo, mut hi) = (0.0, r_max);
    let mut pass_scan = None;
    let mut fail_scan = top;
    for _ in 0..MARGIN_STEPS {
        let mid = 0.5 * (lo + hi);
        let t = grid.scan(&dilate(c, mid)?)?;
        let ok = below(&t, threshold);
        tested.push((mid, ok));
        if ok {
            lo = mid;
            pass_scan = Some(t);
        } else {
            hi = mid;
            fail_scan = t;
        }
    }
    Ok(MarginReport {
        margin: lo,
        scan: pass_scan.unwrap_or(fail_scan),
        tested,
        annulus_estimate,
    })
}

fn annulus_estimate(c: &CellUnion, grid: &ScanGrid, threshold: f64) -> Option<f64> {
    let ScanGrid::Viewpoints { points, exclusion } = grid else {
        return None;
    };
    if !(*exclusion > 0.0) || points.is_empty() {
        return None;
    }
    let n = 1.0 / exclusion;
    let delta = points
        .par_iter()
        .map(|&v| {
            let kept = CellUnion::new(exclude_ball(c, v, exclusion / 4.0));
            let arcs = radial_project(&kept, v);
            let m = arcs.measure();
            let k = arcs.arcs().len().max(1) as f64;
            if arcs.is_full() || m >= threshold {
                0.0
            } else {
                // each arc grows by at most 2δ
                (threshold - m) / (2.0 * k)
            }
        })
        .reduce(|| 1.0, f64::min);
    Some(delta / (5.0 * n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexCell;

    #[test]
    fn not_in_omega() {
        let c = CellUnion::from_rects(&[Rect::new(0.0, 0.0, 0.5, 1.0).unwrap()]);
        assert!(matches!(
            refine_round(&c, 0.3, 2),
            Err(Error::NotInOmega(_))
        ));
    }

    #[test]
    fn full_square_round() {
        let c = CellUnion::from_rects(&[Rect::UNIT]);
        let rep = refine_round(&c, 0.3, 3).unwrap();
        assert!(!rep.net.is_empty());
        assert_eq!(rep.x_projection.len(), 1);
        assert!((rep.x_projection.measure() - 1.0).abs() < 1e-12);
        assert!(rep.dh_bound() < 0.3);
        assert!(rep.dh_bound() < rep.chain_bound() + 0.003 * std::f64::consts::SQRT_2);
        // only (0.5, 0.5) of the 5x5 grid lies in the square
        assert_eq!(rep.scan_before.len(), 24);
        assert!(rep.scan_after.len() >= 24);
        assert!(rep.scan_before.rows().iter().all(|r| r.measure > 0.0));
    }

    #[test]
    fn huge_eps_gives_one_square() {
        let c = CellUnion::from_rects(&[Rect::UNIT]);
        let rep = refine_round(&c, 10.0, 1).unwrap();
        assert_eq!(rep.net.len(), 1);
        assert_eq!(rep.squares.len(), 1);
        assert_eq!(rep.squares[0], Rect::UNIT);
    }

    #[test]
    fn margin_zero_when_already_failing() {
        let c = CellUnion::from_rects(&[Rect::UNIT]);
        let grid = ScanGrid::Directions(vec![Direction::from_angle(0.3)]);
        let rep = find_margin(&c, &grid, 0.5, 0.1).unwrap();
        assert_eq!(rep.margin, 0.0);
        assert!(rep.scan.max_measure() >= 0.5);
    }

    #[test]
    fn margin_full_for_distant_point() {
        let c = CellUnion::single(ConvexCell::point(Point::new(0.0, 0.0)));
        let grid = ScanGrid::Viewpoints {
            points: vec![Point::new(50.0, 0.0), Point::new(0.0, -40.0)],
            exclusion: 0.0,
        };
        let rep = find_margin(&c, &grid, 0.5, 1.0).unwrap();
        assert_eq!(rep.margin, 1.0);
    }

    #[test]
    fn margin_bisects_to_the_threshold() {
        // projection width of a dilated point is about 2r
        let c = CellUnion::single(ConvexCell::point(Point::new(0.0, 0.0)));
        let grid = ScanGrid::Directions(vec![Direction::from_angle(0.0)]);
        let rep = find_margin(&c, &grid, 0.5, 1.0).unwrap();
        assert!(rep.margin > 0.2 && rep.margin < 0.25, "{}", rep.margin);
        assert_eq!(rep.tested.len(), 11);
        assert!(rep.scan.max_measure() < 0.5);
    }
}
