use std::path::{Path, PathBuf};

use besicovitch_core::constructions::{
    besicovitch_assemble_with, refine_round_with, RefineOptions,
};
use besicovitch_core::duality::CodingPointPolicy;
use besicovitch_core::projections::{direction_grid, direction_range, viewpoint_grid};
use besicovitch_core::{
    assembly_raster, assembly_section_measure, continuity_probe, covered_directions,
    direction_scan, eval_set_with, find_margin, fitted_invisible_set, hausdorff, line_section,
    ortho_project, raster_dual, section_via_radial, viewpoint_scan, CellUnion, Direction,
    DualFamily, EvalOptions, Point, ProbeLine, Rect, ScanGrid, ScanParam, ScanTable, SetExpr,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{CliError, ErrorKind, Result};
use crate::output::{cells_svg, emit, raster_svg, write_file, Table};
use crate::row;
use crate::setfile::{parse_with_budget, SetDoc};
use crate::suite;

#[derive(Parser, Debug)]
#[command(
    name = "besicovitch",
    version,
    about = "Besicovitch set approximants via point-line duality"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate sets and summarize them
    Construct(ConstructArgs),
    /// Orthogonal projection measures over a direction grid
    Project(ProjectArgs),
    /// Radial projection measures over a viewpoint grid
    Radial(RadialArgs),
    /// Sections of the line family by probe lines
    Section(SectionArgs),
    /// One refinement round
    Refine(RefineArgs),
    /// Largest dilation keeping every scan below a threshold
    Margin(MarginArgs),
    /// Rotated copies of a line family
    Assemble(AssembleArgs),
    /// Certified Hausdorff distance between two sets
    Hausdorff(HausdorffArgs),
    /// Occupancy raster of a line family
    Raster(RasterArgs),
    /// Run the built-in checks
    Suite(SuiteArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SetArgs {
    /// Set description (JSON); `-` reads standard input
    #[arg(long, value_name = "FILE")]
    pub set: Option<PathBuf>,
    /// Fitted four-corner sets at these levels, e.g. `4`, `1-6` or `2,4,8`
    #[arg(long, value_name = "LEVELS", value_parser = parse_levels)]
    pub fitted: Option<Levels>,
    /// Rectangle the fitted sets fill
    #[arg(long, allow_hyphen_values = true, value_name = "X0,Y0,X1,Y1", value_parser = parse_rect, default_value = "0,0,1,1")]
    pub rect: Rect,
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// CSV output file (default: stdout)
    #[arg(long, short, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Levels(pub Vec<u32>);

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Write the canonical set description here
    #[arg(long, value_name = "FILE")]
    pub emit: Option<PathBuf>,
    /// Render the cells as SVG
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct DirectionArgs {
    /// `N` directions `kπ/N`
    #[arg(long, value_name = "N", conflicts_with = "range")]
    pub directions: Option<usize>,
    /// Directions `lo + k·step` up to `hi`, in radians
    #[arg(long, allow_hyphen_values = true, value_name = "LO,HI,STEP", value_parser = parse_triple)]
    pub range: Option<(f64, f64, f64)>,
}

impl DirectionArgs {
    fn grid(&self) -> Result<Option<Vec<Direction>>> {
        match (self.directions, self.range) {
            (Some(0), _) => Err(CliError::usage("--directions must be positive")),
            (Some(n), _) => Ok(Some(direction_grid(n))),
            (None, Some((lo, hi, step))) => {
                if !(step > 0.0) || !(hi >= lo) {
                    return Err(CliError::usage("--range needs lo <= hi and step > 0"));
                }
                Ok(Some(direction_range(lo, hi, step)))
            }
            (None, None) => Ok(None),
        }
    }
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Orthogonal projection (the only kind this command computes)
    #[arg(long)]
    pub ortho: bool,
    #[command(flatten)]
    pub grid: DirectionArgs,
    /// Also write the largest jump between adjacent directions
    #[arg(long, value_name = "FILE")]
    pub continuity: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct ViewpointArgs {
    /// Viewpoint grid size
    #[arg(long, value_name = "NX,NY", value_parser = parse_size)]
    pub grid: Option<(usize, usize)>,
    /// Area the viewpoint grid spans
    #[arg(long, allow_hyphen_values = true, value_name = "X0,Y0,X1,Y1", value_parser = parse_rect, default_value = "-2,-2,3,3")]
    pub area: Rect,
    /// Single viewpoints, appended after the grid
    #[arg(long, allow_hyphen_values = true, value_name = "X,Y", value_parser = parse_pair)]
    pub at: Vec<(f64, f64)>,
    /// Radius of the ball ignored around each viewpoint
    #[arg(long, value_name = "R", default_value_t = 0.0)]
    pub exclusion: f64,
    /// Drop viewpoints that lie in the set
    #[arg(long)]
    pub skip_inside: bool,
}

impl ViewpointArgs {
    fn points(&self) -> Vec<Point> {
        let mut pts = match self.grid {
            Some((nx, ny)) => viewpoint_grid(&self.area, nx, ny),
            None => Vec::new(),
        };
        pts.extend(self.at.iter().map(|&(x, y)| Point::new(x, y)));
        pts
    }
}

#[derive(Args, Debug)]
pub struct RadialArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[command(flatten)]
    pub view: ViewpointArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    /// Vertical probe `x = X`
    #[arg(long, value_name = "X", allow_hyphen_values = true)]
    pub vertical: Vec<f64>,
    /// Sloped probe `y = A x + B`
    #[arg(long, allow_hyphen_values = true, value_name = "A,B", value_parser = parse_pair)]
    pub sloped: Vec<(f64, f64)>,
}

impl ProbeArgs {
    fn lines(&self) -> Vec<ProbeLine> {
        self.vertical
            .iter()
            .map(|&x| ProbeLine::Vertical(x))
            .chain(self.sloped.iter().map(|&(a, b)| ProbeLine::Sloped(a, b)))
            .collect()
    }
}

#[derive(Args, Debug)]
pub struct SectionArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[command(flatten)]
    pub probes: ProbeArgs,
    /// Remove a square of this side around the coding point of a probe that
    /// belongs to the family (`auto` picks one from the level); without it
    /// such probes are an error
    #[arg(long, value_name = "SIDE|auto")]
    pub exclude: Option<String>,
    /// Compute sloped sections through the radial projection instead
    #[arg(long)]
    pub via_radial: bool,
    /// Clip the section parameter to this range
    #[arg(long, allow_hyphen_values = true, value_name = "LO,HI", value_parser = parse_pair)]
    pub window: Option<(f64, f64)>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct RefineArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long)]
    pub eps: f64,
    /// Level of the fitted sets placed in each square
    #[arg(long)]
    pub level: u32,
    /// Viewpoint grid for the before/after radial scans
    #[arg(long, value_name = "NX,NY", value_parser = parse_size, default_value = "5,5")]
    pub scan_grid: (usize, usize),
    #[arg(long, allow_hyphen_values = true, value_name = "X0,Y0,X1,Y1", value_parser = parse_rect, default_value = "-2,-2,3,3")]
    pub scan_area: Rect,
    /// Full report as JSON
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Description of the refined set
    #[arg(long, value_name = "FILE")]
    pub emit: Option<PathBuf>,
    /// Render the refined set as SVG
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct MarginArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long)]
    pub threshold: f64,
    /// Largest dilation radius tried
    #[arg(long, value_name = "R")]
    pub r_max: f64,
    #[command(flatten)]
    pub dirs: DirectionArgs,
    #[command(flatten)]
    pub view: ViewpointArgs,
    /// Every radius tried, as CSV
    #[arg(long, value_name = "FILE")]
    pub steps: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct AssembleArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Number of rotated copies
    #[arg(long, default_value_t = 4)]
    pub copies: usize,
    /// Rasterize at this size (`N` or `W,H`)
    #[arg(long, value_name = "SIZE", value_parser = parse_size)]
    pub raster: Option<(usize, usize)>,
    #[arg(long, allow_hyphen_values = true, value_name = "X0,Y0,X1,Y1", value_parser = parse_rect, default_value = "-2,-2,2,2")]
    pub viewport: Rect,
    /// Directory for raster images
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Also write SVG renders of the rasters
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub probes: ProbeArgs,
    /// Window for probe sections
    #[arg(long, allow_hyphen_values = true, value_name = "X0,Y0,X1,Y1", value_parser = parse_rect)]
    pub window: Option<Rect>,
    /// Test directions on a grid with this step, in degrees
    #[arg(long, value_name = "DEG")]
    pub coverage: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct HausdorffArgs {
    #[arg(long, value_name = "FILE")]
    pub a: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub b: PathBuf,
    /// Sample spacing; the bracket is at most spacing·√2 wide
    #[arg(long, value_name = "H", default_value_t = 1e-3)]
    pub spacing: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct RasterArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// `N` or `W,H`
    #[arg(long, value_name = "SIZE", value_parser = parse_size, default_value = "512")]
    pub size: (usize, usize),
    #[arg(long, allow_hyphen_values = true, value_name = "X0,Y0,X1,Y1", value_parser = parse_rect, default_value = "-2,-2,2,2")]
    pub viewport: Rect,
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub svg: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    /// Run only these checks (1 to 10)
    #[arg(long, value_name = "N")]
    pub criterion: Vec<usize>,
    /// List the checks and exit
    #[arg(long)]
    pub list: bool,
}

fn floats<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers"));
    }
    let mut out = [0.0f64; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
        if !o.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(out)
}

pub fn parse_rect(s: &str) -> std::result::Result<Rect, String> {
    let [x0, y0, x1, y1] = floats::<4>(s)?;
    Rect::new(x0, y0, x1, y1).map_err(|e| e.to_string())
}

pub fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let [a, b] = floats::<2>(s)?;
    Ok((a, b))
}

pub fn parse_triple(s: &str) -> std::result::Result<(f64, f64, f64), String> {
    let [a, b, c] = floats::<3>(s)?;
    Ok((a, b, c))
}

/// `N` for a square or `W,H`.
pub fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let parse = |p: &str| -> std::result::Result<usize, String> {
        match p.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("`{p}` is not a positive integer")),
            Ok(n) => Ok(n),
        }
    };
    match s.split_once(',') {
        Some((w, h)) => Ok((parse(w)?, parse(h)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

/// Comma-separated levels and inclusive ranges: `3`, `1-6`, `2,4,6-8`.
pub fn parse_levels(s: &str) -> std::result::Result<Levels, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let num = |p: &str| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| format!("`{p}` is not a level"))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty level range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    Ok(Levels(out))
}

/// Limits shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub eval: EvalOptions,
}

impl Context {
    pub fn with_budget(budget: usize) -> Self {
        Context {
            eval: EvalOptions::with_budget(budget),
        }
    }
}

struct Input {
    level: u32,
    expr: SetExpr,
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| CliError::io(Path::new("<stdin>"), e))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_doc(path: &Path, ctx: &Context) -> Result<SetDoc> {
    parse_with_budget(&read_text(path)?, ctx.eval.cell_budget).map_err(|e| CliError {
        message: format!("{}: {}", path.display(), e.message),
        ..e
    })
}

impl SetArgs {
    fn load(&self, ctx: &Context) -> Result<Vec<Input>> {
        match (&self.set, &self.fitted) {
            (Some(p), None) => {
                let expr = load_doc(p, ctx)?.to_expr();
                Ok(vec![Input {
                    level: expr.max_level(),
                    expr,
                }])
            }
            (None, Some(levels)) => levels
                .0
                .iter()
                .map(|&level| {
                    Ok(Input {
                        level,
                        expr: fitted_invisible_set(&self.rect, level)?,
                    })
                })
                .collect(),
            (Some(_), Some(_)) => Err(CliError::usage("give either --set or --fitted, not both")),
            (None, None) => Err(CliError::usage("one of --set or --fitted is required")),
        }
    }

    fn load_one(&self, ctx: &Context, what: &str) -> Result<Input> {
        let mut v = self.load(ctx)?;
        if v.len() != 1 {
            return Err(CliError::usage(format!("{what} takes exactly one set")));
        }
        Ok(v.remove(0))
    }
}

fn eval(i: &Input, ctx: &Context) -> Result<CellUnion> {
    Ok(eval_set_with(&i.expr, &ctx.eval)?)
}

fn x_axis() -> Direction {
    Direction::new(Point::new(0.0, 1.0)).expect("nonzero")
}

pub fn run(cmd: Command, ctx: &Context) -> Result<()> {
    match cmd {
        Command::Construct(a) => construct(a, ctx),
        Command::Project(a) => project(a, ctx),
        Command::Radial(a) => radial(a, ctx),
        Command::Section(a) => section(a, ctx),
        Command::Refine(a) => refine(a, ctx),
        Command::Margin(a) => margin(a, ctx),
        Command::Assemble(a) => assemble(a, ctx),
        Command::Hausdorff(a) => hausdorff_cmd(a, ctx),
        Command::Raster(a) => raster(a, ctx),
        Command::Suite(a) => run_suite(a),
    }
}

/// Columns: level, cells, area, x_projection, x_components, x0, y0, x1, y1
/// (bounding box, empty for an empty set).
fn construct(a: ConstructArgs, ctx: &Context) -> Result<()> {
    let inputs = a.set.load(ctx)?;
    if inputs.len() > 1 && (a.emit.is_some() || a.svg.is_some()) {
        return Err(CliError::usage("--emit and --svg take exactly one set"));
    }
    let mut t = Table::new(&[
        "level",
        "cells",
        "area",
        "x_projection",
        "x_components",
        "x0",
        "y0",
        "x1",
        "y1",
    ]);
    for i in &inputs {
        let c = eval(i, ctx)?;
        let xp = ortho_project(&c, &x_axis());
        let bb = c.bbox();
        t.push(row![
            i.level,
            c.len(),
            c.total_area(),
            xp.measure(),
            xp.len(),
            bb.map(|b| b.x0),
            bb.map(|b| b.y0),
            bb.map(|b| b.x1),
            bb.map(|b| b.y1),
        ]);
        if let Some(p) = &a.emit {
            write_file(p, SetDoc::from_expr(&i.expr)?.to_canonical().as_bytes())?;
        }
        if let Some(p) = &a.svg {
            write_file(p, cells_svg(&c).as_bytes())?;
        }
    }
    emit(a.out.output.as_deref(), &t.render())
}

/// Columns: level, index, angle, measure. The continuity file has level,
/// max_jump, index.
fn project(a: ProjectArgs, ctx: &Context) -> Result<()> {
    let grid = a
        .grid
        .grid()?
        .ok_or_else(|| CliError::usage("one of --directions or --range is required"))?;
    let mut t = Table::new(&["level", "index", "angle", "measure"]);
    let mut jumps = Table::new(&["level", "max_jump", "index"]);
    for i in &a.set.load(ctx)? {
        let c = eval(i, ctx)?;
        let table = direction_scan(&c, &grid)?;
        for (k, r) in table.rows().iter().enumerate() {
            let ScanParam::Direction(d) = r.param else {
                unreachable!("direction scan")
            };
            t.push(row![i.level, k, d.angle(), r.measure]);
        }
        if a.continuity.is_some() {
            let (jump, at) = continuity_probe(&table)?;
            jumps.push(row![i.level, jump, at]);
        }
    }
    if let Some(p) = &a.continuity {
        write_file(p, jumps.render().as_bytes())?;
    }
    emit(a.out.output.as_deref(), &t.render())
}

fn viewpoint_rows(
    c: &CellUnion,
    pts: &[Point],
    view: &ViewpointArgs,
) -> Result<Vec<(usize, Point, f64)>> {
    let keep: Vec<(usize, Point)> = pts
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, p)| !view.skip_inside || !c.contains(*p))
        .collect();
    if keep.is_empty() {
        return Ok(Vec::new());
    }
    let only: Vec<Point> = keep.iter().map(|k| k.1).collect();
    let table = viewpoint_scan(c, &only, view.exclusion)?;
    Ok(keep
        .iter()
        .zip(table.rows())
        .map(|(&(k, p), r)| (k, p, r.measure))
        .collect())
}

/// Columns: level, index, x, y, measure. `index` is the position in the
/// viewpoint list, grid points first.
fn radial(a: RadialArgs, ctx: &Context) -> Result<()> {
    let pts = a.view.points();
    if pts.is_empty() {
        return Err(CliError::usage("give --grid or --at"));
    }
    if a.view.exclusion < 0.0 {
        return Err(CliError::usage("--exclusion must not be negative"));
    }
    let mut t = Table::new(&["level", "index", "x", "y", "measure"]);
    for i in &a.set.load(ctx)? {
        let c = eval(i, ctx)?;
        for (k, p, m) in viewpoint_rows(&c, &pts, &a.view)? {
            t.push(row![i.level, k, p.x, p.y, m]);
        }
    }
    emit(a.out.output.as_deref(), &t.render())
}

fn probe_cols(e: &ProbeLine) -> (&'static str, f64, Option<f64>) {
    match *e {
        ProbeLine::Vertical(x) => ("vertical", x, None),
        ProbeLine::Sloped(a, b) => ("sloped", a, Some(b)),
    }
}

/// Columns: level, probe, kind, p, q, lo, hi; one row per component. For a
/// vertical probe `p` is its x and the section is in y; for a sloped probe
/// `y = p x + q` the section is in x. Vertical probes come first.
fn section(a: SectionArgs, ctx: &Context) -> Result<()> {
    let lines = a.probes.lines();
    if lines.is_empty() {
        return Err(CliError::usage("give --vertical or --sloped"));
    }
    let mut t = Table::new(&["level", "probe", "kind", "p", "q", "lo", "hi"]);
    for i in &a.set.load(ctx)? {
        let f = DualFamily::with_options(i.expr.clone(), &ctx.eval)?;
        let policy = match a.exclude.as_deref() {
            None => CodingPointPolicy::Reject,
            Some("auto") => CodingPointPolicy::ExcludeSquare(f.default_exclusion_side()),
            Some(s) => match s.parse::<f64>() {
                Ok(v) if v > 0.0 && v.is_finite() => CodingPointPolicy::ExcludeSquare(v),
                _ => return Err(CliError::usage(format!("bad --exclude value `{s}`"))),
            },
        };
        for (k, e) in lines.iter().enumerate() {
            let mut s = if a.via_radial {
                section_via_radial(&f, e)?
            } else {
                line_section(&f, e, policy)?
            };
            if let Some((lo, hi)) = a.window {
                s = s.clip(lo, hi);
            }
            let (kind, p, q) = probe_cols(e);
            for iv in s.intervals() {
                t.push(row![i.level, k, kind, p, q, iv.lo, iv.hi]);
            }
        }
    }
    emit(a.out.output.as_deref(), &t.render())
}

#[derive(Serialize)]
struct ScanPoint {
    x: f64,
    y: f64,
    measure: f64,
}

#[derive(Serialize)]
struct RefineReport {
    eps: f64,
    level: u32,
    net_points: usize,
    squares: Vec<[f64; 4]>,
    output_cells: usize,
    x_projection: f64,
    dh_lower: f64,
    dh_upper: f64,
    dh_spacing: f64,
    chain_bound: f64,
    scan_before: Vec<ScanPoint>,
    scan_after: Vec<ScanPoint>,
}

fn scan_points(t: &ScanTable) -> Vec<ScanPoint> {
    t.rows()
        .iter()
        .filter_map(|r| match r.param {
            ScanParam::Viewpoint(p) => Some(ScanPoint {
                x: p.x,
                y: p.y,
                measure: r.measure,
            }),
            ScanParam::Direction(_) => None,
        })
        .collect()
}

/// Columns: eps, level, net_points, squares, output_cells, x_projection,
/// dh_lower, dh_upper, chain_bound, scan_before_max, scan_after_max.
fn refine(a: RefineArgs, ctx: &Context) -> Result<()> {
    let input = a.set.load_one(ctx, "refine")?;
    let c = eval(&input, ctx)?;
    let opts = RefineOptions {
        eval: ctx.eval,
        viewpoints: viewpoint_grid(&a.scan_area, a.scan_grid.0, a.scan_grid.1),
        exclusion: 0.0,
    };
    let rep = refine_round_with(&c, a.eps, a.level, &opts)?;
    let mut t = Table::new(&[
        "eps",
        "level",
        "net_points",
        "squares",
        "output_cells",
        "x_projection",
        "dh_lower",
        "dh_upper",
        "chain_bound",
        "scan_before_max",
        "scan_after_max",
    ]);
    t.push(row![
        rep.eps,
        rep.level,
        rep.net.len(),
        rep.squares.len(),
        rep.output.len(),
        rep.x_projection.measure(),
        rep.distance.lower,
        rep.distance.upper,
        rep.chain_bound(),
        rep.scan_before.max_measure(),
        rep.scan_after.max_measure(),
    ]);
    if let Some(p) = &a.report {
        let r = RefineReport {
            eps: rep.eps,
            level: rep.level,
            net_points: rep.net.len(),
            squares: rep
                .squares
                .iter()
                .map(|q| [q.x0, q.y0, q.x1, q.y1])
                .collect(),
            output_cells: rep.output.len(),
            x_projection: rep.x_projection.measure(),
            dh_lower: rep.distance.lower,
            dh_upper: rep.distance.upper,
            dh_spacing: rep.distance.sample_spacing,
            chain_bound: rep.chain_bound(),
            scan_before: scan_points(&rep.scan_before),
            scan_after: scan_points(&rep.scan_after),
        };
        let mut s = serde_json::to_string_pretty(&r).expect("report serializes");
        s.push('\n');
        write_file(p, s.as_bytes())?;
    }
    if let Some(p) = &a.emit {
        write_file(p, SetDoc::from_expr(&rep.code)?.to_canonical().as_bytes())?;
    }
    if let Some(p) = &a.svg {
        write_file(p, cells_svg(&rep.output).as_bytes())?;
    }
    emit(a.out.output.as_deref(), &t.render())
}

/// Columns: margin, max_measure, threshold, r_max, tested, annulus_estimate.
/// The steps file has step, radius, passed.
fn margin(a: MarginArgs, ctx: &Context) -> Result<()> {
    let input = a.set.load_one(ctx, "margin")?;
    let c = eval(&input, ctx)?;
    let grid = match a.dirs.grid()? {
        Some(d) => {
            if a.view.grid.is_some() || !a.view.at.is_empty() {
                return Err(CliError::usage("give directions or viewpoints, not both"));
            }
            ScanGrid::Directions(d)
        }
        None => {
            let pts: Vec<Point> = a
                .view
                .points()
                .into_iter()
                .filter(|p| !a.view.skip_inside || !c.contains(*p))
                .collect();
            if pts.is_empty() {
                return Err(CliError::usage(
                    "give --directions, --range, --grid or --at",
                ));
            }
            ScanGrid::Viewpoints {
                points: pts,
                exclusion: a.view.exclusion,
            }
        }
    };
    let rep = find_margin(&c, &grid, a.threshold, a.r_max)?;
    let mut t = Table::new(&[
        "margin",
        "max_measure",
        "threshold",
        "r_max",
        "tested",
        "annulus_estimate",
    ]);
    t.push(row![
        rep.margin,
        rep.scan.max_measure(),
        a.threshold,
        a.r_max,
        rep.tested.len(),
        rep.annulus_estimate,
    ]);
    if let Some(p) = &a.steps {
        let mut s = Table::new(&["step", "radius", "passed"]);
        for (k, &(r, ok)) in rep.tested.iter().enumerate() {
            s.push(row![k, r, ok]);
        }
        write_file(p, s.render().as_bytes())?;
    }
    emit(a.out.output.as_deref(), &t.render())
}

/// Depending on the mode:
///
/// * `--raster`: level, width, height, occupied, fraction; images go to
///   `--out-dir` as `assembly-level-N.pgm` (and `.svg`).
/// * probes: level, probe, kind, p, q, measure.
/// * `--coverage`: level, index, degrees, covered.
/// * otherwise: level, copies, cells, covered_directions.
fn assemble(a: AssembleArgs, ctx: &Context) -> Result<()> {
    let lines = a.probes.lines();
    let modes = [a.raster.is_some(), !lines.is_empty(), a.coverage.is_some()];
    if modes.iter().filter(|&&m| m).count() > 1 {
        return Err(CliError::usage(
            "choose one of --raster, probe lines or --coverage",
        ));
    }
    if let Some(step) = a.coverage {
        if !(step > 0.0 && step <= 180.0) {
            return Err(CliError::usage("--coverage step must be in (0, 180]"));
        }
    }
    let mut t = if a.raster.is_some() {
        Table::new(&["level", "width", "height", "occupied", "fraction"])
    } else if !lines.is_empty() {
        Table::new(&["level", "probe", "kind", "p", "q", "measure"])
    } else if a.coverage.is_some() {
        Table::new(&["level", "index", "degrees", "covered"])
    } else {
        Table::new(&["level", "copies", "cells", "covered_directions"])
    };
    if let Some(d) = &a.out_dir {
        std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
    }
    for i in &a.set.load(ctx)? {
        let asm = besicovitch_assemble_with(i.expr.clone(), a.copies, &ctx.eval)?;
        if let Some((w, h)) = a.raster {
            let (g, frac) = assembly_raster(&asm, &a.viewport, w, h)?;
            t.push(row![i.level, w, h, g.occupied(), frac]);
            if let Some(d) = &a.out_dir {
                let stem = format!("assembly-level-{}", i.level);
                write_file(&d.join(format!("{stem}.pgm")), &g.to_pgm())?;
                if a.svg {
                    write_file(&d.join(format!("{stem}.svg")), raster_svg(&g).as_bytes())?;
                }
            }
        } else if !lines.is_empty() {
            for (k, e) in lines.iter().enumerate() {
                let m = assembly_section_measure(&asm, e, a.window.as_ref())?;
                let (kind, p, q) = probe_cols(e);
                t.push(row![i.level, k, kind, p, q, m]);
            }
        } else if let Some(step) = a.coverage {
            let n = (180.0 / step - 1e-9).floor() as usize;
            for k in 0..=n {
                let deg = k as f64 * step;
                if deg >= 180.0 {
                    break;
                }
                t.push(row![
                    i.level,
                    k,
                    deg,
                    asm.covers_direction(deg.to_radians())
                ]);
            }
        } else {
            t.push(row![
                i.level,
                asm.angles().len(),
                asm.family().cells().len(),
                covered_directions(&asm).measure(),
            ]);
        }
    }
    emit(a.out.output.as_deref(), &t.render())
}

/// Columns: lower, upper, width, spacing.
fn hausdorff_cmd(a: HausdorffArgs, ctx: &Context) -> Result<()> {
    let ca = eval_set_with(&load_doc(&a.a, ctx)?.to_expr(), &ctx.eval)?;
    let cb = eval_set_with(&load_doc(&a.b, ctx)?.to_expr(), &ctx.eval)?;
    let d = hausdorff(&ca, &cb, a.spacing)?;
    let mut t = Table::new(&["lower", "upper", "width", "spacing"]);
    t.push(row![d.lower, d.upper, d.width(), d.sample_spacing]);
    emit(a.out.output.as_deref(), &t.render())
}

/// Columns: level, width, height, occupied, fraction; images go to
/// `--out-dir` as `dual-level-N.pgm` (and `.svg`).
fn raster(a: RasterArgs, ctx: &Context) -> Result<()> {
    let (w, h) = a.size;
    let mut t = Table::new(&["level", "width", "height", "occupied", "fraction"]);
    if let Some(d) = &a.out_dir {
        std::fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
    }
    for i in &a.set.load(ctx)? {
        let f = DualFamily::with_options(i.expr.clone(), &ctx.eval)?;
        let (g, frac) = raster_dual(&f, &a.viewport, w, h)?;
        t.push(row![i.level, w, h, g.occupied(), frac]);
        if let Some(d) = &a.out_dir {
            let stem = format!("dual-level-{}", i.level);
            write_file(&d.join(format!("{stem}.pgm")), &g.to_pgm())?;
            if a.svg {
                write_file(&d.join(format!("{stem}.svg")), raster_svg(&g).as_bytes())?;
            }
        }
    }
    emit(a.out.output.as_deref(), &t.render())
}

fn run_suite(a: SuiteArgs) -> Result<()> {
    let all = suite::checks();
    if let Some(bad) = a.criterion.iter().find(|&&n| n == 0 || n > all.len()) {
        return Err(CliError::usage(format!(
            "no check {bad}; checks are 1 to {}",
            all.len()
        )));
    }
    let chosen: Vec<_> = all
        .iter()
        .filter(|c| a.criterion.is_empty() || a.criterion.contains(&c.id))
        .collect();
    if a.list {
        let text: String = chosen
            .iter()
            .map(|c| format!("{:>2} {}\n", c.id, c.name))
            .collect();
        return emit(None, &text);
    }
    let mut failed = Vec::new();
    for c in chosen {
        let r = suite::run_check(c);
        emit(None, &(r.line() + "\n"))?;
        if !r.passed {
            failed.push(r.id.to_string());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::new(
            ErrorKind::Property,
            format!("failed checks: {}", failed.join(", ")),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_lists() {
        assert_eq!(parse_levels("3").unwrap(), Levels(vec![3]));
        assert_eq!(parse_levels("1-3,5").unwrap(), Levels(vec![1, 2, 3, 5]));
        assert!(parse_levels("4-2").is_err());
        assert!(parse_levels("x").is_err());
    }

    #[test]
    fn sizes_and_rects() {
        assert_eq!(parse_size("64").unwrap(), (64, 64));
        assert_eq!(parse_size("3,2").unwrap(), (3, 2));
        assert!(parse_size("0").is_err());
        assert!(parse_rect("1,0,0,1").is_err());
        assert_eq!(parse_rect("-2,-2,2,2").unwrap().width(), 4.0);
    }
}
