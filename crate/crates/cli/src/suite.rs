//! Built-in self-checks. Each check exercises the library end to end and
//! compares independent computation paths or closed-form values.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use besicovitch_core::projections::{direction_range, viewpoint_grid};
use besicovitch_core::{
    assembly_raster, assembly_section_measure, besicovitch_assemble, continuity_probe,
    direction_scan, eval_set, fitted_invisible_set, hausdorff, line_section, metric_axiom_suite,
    ortho_project, radial_measure, refine_round, section_via_radial, vertical_section, CellUnion,
    CodingPointPolicy, Direction, DualFamily, Point, ProbeLine, Rect,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

pub struct Check {
    pub id: usize,
    pub name: &'static str,
    run: fn() -> Outcome,
}

pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({:.2} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub fn checks() -> Vec<Check> {
    let table: [(&'static str, fn() -> Outcome); 10] = [
        ("vertical section identity", vertical_identity),
        ("section path agreement", section_paths),
        ("exact fitted projection", fitted_projection),
        ("invisibility decay", invisibility_decay),
        ("refinement inequality", refinement),
        ("direction coverage", coverage),
        ("assembly section decay", section_decay),
        ("hausdorff certification", hausdorff_brackets),
        ("semicontinuity probe", semicontinuity),
        ("raster decay", raster_decay),
    ];
    table
        .into_iter()
        .enumerate()
        .map(|(i, (name, run))| Check {
            id: i + 1,
            name,
            run,
        })
        .collect()
}

pub fn run_check(c: &Check) -> CheckResult {
    let start = Instant::now();
    let out = (c.run)();
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match out {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        id: c.id,
        name: c.name,
        passed,
        detail,
        seconds,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn random_rect(rng: &mut ChaCha8Rng, span: f64, max_side: f64) -> Rect {
    let x0 = rng.gen_range(-span..span);
    let y0 = rng.gen_range(-span..span);
    let w = rng.gen_range(0.01..max_side);
    let h = rng.gen_range(0.01..max_side);
    Rect::new(x0, y0, x0 + w, y0 + h).expect("ordered bounds")
}

fn random_rects(rng: &mut ChaCha8Rng, max_count: usize, span: f64, max_side: f64) -> Vec<Rect> {
    let n = rng.gen_range(1..=max_count);
    (0..n).map(|_| random_rect(rng, span, max_side)).collect()
}

fn fitted(level: u32) -> CellUnion {
    eval_set(&fitted_invisible_set(&Rect::UNIT, level).expect("unit square")).expect("in budget")
}

fn x_axis() -> Direction {
    Direction::new(Point::new(0.0, 1.0)).expect("nonzero")
}

fn vertical_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for set in 0..100 {
        let rects = random_rects(&mut rng, 10, 3.0, 2.0);
        let f = DualFamily::from_cells(CellUnion::from_rects(&rects));
        for _ in 0..100 {
            let x: f64 = rng.gen_range(-5.0..5.0);
            let d = Direction::new(Point::new(-1.0, x)).map_err(err)?;
            let proj = ortho_project(f.cells(), &d).affine_image(x.hypot(1.0), 0.0);
            let gap = vertical_section(&f, x)
                .endpoint_distance(&proj)
                .ok_or_else(|| format!("set {set}, x={x}: component counts differ"))?;
            ensure(gap <= 1e-9, || format!("set {set}, x={x}: gap {gap:e}"))?;
            worst = worst.max(gap);
        }
    }
    Ok(format!("10000 sections, worst endpoint gap {worst:.1e}"))
}

fn section_paths() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut done, mut unbounded, mut worst) = (0, 0, 0.0f64);
    while done < 100 {
        let a0: f64 = rng.gen_range(-2.0..2.0);
        let b0: f64 = rng.gen_range(-2.0..2.0);
        let rects = random_rects(&mut rng, 10, 2.0, 1.5);
        if rects
            .iter()
            .any(|r| (r.x0 - a0).abs() < 0.02 || (r.x1 - a0).abs() < 0.02)
        {
            continue;
        }
        let f = DualFamily::from_cells(CellUnion::from_rects(&rects));
        if f.contains_line(a0, b0) {
            continue;
        }
        let e = ProbeLine::Sloped(a0, b0);
        let direct = line_section(&f, &e, CodingPointPolicy::Reject).map_err(err)?;
        let radial = section_via_radial(&f, &e).map_err(err)?;
        let gap = direct
            .endpoint_distance(&radial)
            .ok_or_else(|| format!("probe {done}: component counts differ"))?;
        ensure(gap <= 1e-9, || format!("probe {done}: gap {gap:e}"))?;
        worst = worst.max(gap);
        if direct.intervals().iter().any(|iv| !iv.is_bounded()) {
            unbounded += 1;
        }
        done += 1;
    }
    ensure(unbounded >= 10, || {
        format!("only {unbounded} unbounded sections")
    })?;
    Ok(format!(
        "100 probes, {unbounded} unbounded, worst gap {worst:.1e}"
    ))
}

fn fitted_projection() -> Outcome {
    for level in 1..=10 {
        let p = ortho_project(&fitted(level), &x_axis());
        ensure(p.len() == 1, || {
            format!("level {level}: {} components", p.len())
        })?;
        let iv = p.intervals()[0];
        ensure(iv.lo.abs() <= 1e-12 && (iv.hi - 1.0).abs() <= 1e-12, || {
            format!("level {level}: projection [{}, {}]", iv.lo, iv.hi)
        })?;
    }
    Ok("levels 1-10 project onto [0, 1]".into())
}

// Frozen from the first recorded runs.
const DECAY_FACTOR_VIEWPOINT: f64 = 0.75;
const DECAY_FACTOR_RASTER: f64 = 0.92;

fn invisibility_decay() -> Outcome {
    let grid = viewpoint_grid(&Rect::new(-2.0, -2.0, 3.0, 3.0).expect("area"), 5, 5);
    let sets: Vec<CellUnion> = [2, 4, 6, 8].into_iter().map(fitted).collect();
    let outside: Vec<Point> = grid.into_iter().filter(|&p| !sets[0].contains(p)).collect();
    let mut decayed = 0;
    for &v in &outside {
        let m: Vec<f64> = sets.iter().map(|c| radial_measure(c, v, 0.0)).collect();
        ensure(m.windows(2).all(|w| w[1] <= w[0] + 1e-12), || {
            format!("viewpoint ({}, {}): {m:?}", v.x, v.y)
        })?;
        if m[3] < DECAY_FACTOR_VIEWPOINT * m[0] {
            decayed += 1;
        }
    }
    ensure(decayed >= 20, || {
        format!("only {decayed} viewpoints decayed")
    })?;
    Ok(format!(
        "{} viewpoints non-increasing, {decayed} decayed",
        outside.len()
    ))
}

fn refinement() -> Outcome {
    let square = CellUnion::from_rects(&[Rect::UNIT]);
    let mut notes = Vec::new();
    for eps in [0.3, 0.1, 0.03] {
        let rep = refine_round(&square, eps, 4).map_err(err)?;
        let bound = (SQRT_2 + 1.0) / 3.0 * eps + eps / 100.0 * SQRT_2;
        let up = rep.distance.upper;
        ensure(up < bound && up < eps, || {
            format!("eps {eps}: {up} vs {bound}")
        })?;
        notes.push(format!("eps {eps}: {up:.4}"));
    }
    Ok(notes.join(", "))
}

fn coverage() -> Outcome {
    let square = CellUnion::from_rects(&[Rect::UNIT]);
    let rep = refine_round(&square, 0.3, 4).map_err(err)?;
    let asm = besicovitch_assemble(rep.code, 4).map_err(err)?;
    let misses: Vec<usize> = (0..180)
        .filter(|&d| !asm.covers_direction((d as f64).to_radians()))
        .collect();
    ensure(misses.is_empty(), || format!("missed {misses:?}"))?;
    Ok("180 of 180 directions".into())
}

fn probe_lines() -> Vec<ProbeLine> {
    let mut v: Vec<ProbeLine> = (0..10)
        .map(|k| ProbeLine::Vertical(-1.83 + 0.371 * k as f64))
        .collect();
    v.extend((0..10).map(|k| ProbeLine::Sloped(-2.3 + 0.53 * k as f64, 0.87 - 0.29 * k as f64)));
    v
}

fn section_decay() -> Outcome {
    let window = Rect::new(-2.0, -2.0, 2.0, 2.0).expect("window");
    let asms = (2..=8)
        .map(|n| besicovitch_assemble(fitted_invisible_set(&Rect::UNIT, n)?, 4))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let mut decayed = 0;
    for e in probe_lines() {
        let m = asms
            .iter()
            .map(|a| assembly_section_measure(a, &e, Some(&window)))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(err)?;
        ensure(m.windows(2).all(|w| w[1] <= w[0] + 1e-12), || {
            format!("probe {e:?}: {m:?}")
        })?;
        if m[6] < m[0] {
            decayed += 1;
        }
    }
    ensure(decayed >= 18, || format!("only {decayed} probes decayed"))?;
    Ok(format!("20 probes non-increasing, {decayed} decayed"))
}

/// Pairs with a closed-form distance: for convex sets the Hausdorff
/// distance is the largest support-function gap, which is `|t|` for a
/// translate and `|s - 1|` times the half-diagonal for a central scaling.
fn hausdorff_brackets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let h = 1e-3;
    for i in 0..100 {
        let a = random_rect(&mut rng, 1.0, 1.0);
        let (b, truth) = if i % 2 == 0 {
            let (dx, dy): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let b = Rect::new(a.x0 + dx, a.y0 + dy, a.x1 + dx, a.y1 + dy).map_err(err)?;
            (b, dx.hypot(dy))
        } else {
            let s: f64 = rng.gen_range(0.3..2.0);
            let c = a.center();
            let b = Rect::new(
                c.x + s * (a.x0 - c.x),
                c.y + s * (a.y0 - c.y),
                c.x + s * (a.x1 - c.x),
                c.y + s * (a.y1 - c.y),
            )
            .map_err(err)?;
            (b, (s - 1.0).abs() * a.diagonal() / 2.0)
        };
        let d = hausdorff(
            &CellUnion::from_rects(&[a]),
            &CellUnion::from_rects(&[b]),
            h,
        )
        .map_err(err)?;
        ensure(d.lower - 1e-12 <= truth && truth <= d.upper + 1e-12, || {
            format!("pair {i}: {truth} not in [{}, {}]", d.lower, d.upper)
        })?;
    }
    let triples: Vec<_> = (0..100)
        .map(|_| {
            let mut u = || CellUnion::from_rects(&random_rects(&mut rng, 3, 1.0, 0.6));
            (u(), u(), u())
        })
        .collect();
    let report = metric_axiom_suite(&triples, h).map_err(err)?;
    ensure(report.passed(), || format!("{:?}", report.violations))?;
    Ok("100 pairs bracketed, 100 triples pass".into())
}

fn semicontinuity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let grid = direction_range(0.0, PI - 1e-3, 1e-3);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let c = CellUnion::from_rects(&random_rects(&mut rng, 10, 2.0, 1.5));
        let table = direction_scan(&c, &grid).map_err(err)?;
        let (jump, _) = continuity_probe(&table).map_err(err)?;
        let bound = 2.0 * c.len() as f64 * c.diameter_bound() * 1e-3 + 1e-9;
        ensure(jump <= bound, || format!("set {i}: jump {jump} > {bound}"))?;
        worst = worst.max(jump / bound);
    }
    Ok(format!(
        "20 sets, largest jump at {:.0}% of bound",
        100.0 * worst
    ))
}

fn raster_decay() -> Outcome {
    let vp = Rect::new(-2.0, -2.0, 2.0, 2.0).expect("viewport");
    let mut fracs = Vec::new();
    for n in 1..=6 {
        let asm = besicovitch_assemble(fitted_invisible_set(&Rect::UNIT, n).map_err(err)?, 4)
            .map_err(err)?;
        fracs.push(assembly_raster(&asm, &vp, 1024, 1024).map_err(err)?.1);
    }
    ensure(fracs.windows(2).all(|w| w[1] <= w[0]), || {
        format!("{fracs:?}")
    })?;
    ensure(fracs[5] < DECAY_FACTOR_RASTER * fracs[0], || {
        format!("{fracs:?}")
    })?;
    let shown: Vec<String> = fracs.iter().map(|f| format!("{f:.4}")).collect();
    Ok(format!("occupied fractions {}", shown.join(" > ")))
}
