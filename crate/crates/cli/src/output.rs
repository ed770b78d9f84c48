//! CSV tables and SVG renders.

use std::fmt::Write as _;
use std::path::Path;

use besicovitch_core::{CellUnion, OccupancyGrid, Rect};

use crate::error::{CliError, Result};

/// A CSV table: header row, comma separated, LF line endings.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest representation that parses back to the same value.
pub fn num(x: f64) -> String {
    format!("{x}")
}

#[macro_export]
macro_rules! row {
    ($($v:expr),* $(,)?) => {
        vec![$($crate::output::Cell::cell(&$v)),*]
    };
}

/// Values that can fill a CSV cell.
pub trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        num(*self)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl Cell for $t {
            fn cell(&self) -> String {
                self.to_string()
            }
        }
    )*};
}
int_cell!(usize, u32, u64, i64);

impl Cell for bool {
    fn cell(&self) -> String {
        u8::from(*self).to_string()
    }
}

impl Cell for &str {
    fn cell(&self) -> String {
        self.to_string()
    }
}

impl Cell for String {
    fn cell(&self) -> String {
        self.clone()
    }
}

impl<T: Cell> Cell for Option<T> {
    fn cell(&self) -> String {
        self.as_ref().map(Cell::cell).unwrap_or_default()
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text.as_bytes()),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

const SVG_WIDTH: f64 = 800.0;

fn svg_open(view: &Rect) -> (String, f64) {
    let scale = SVG_WIDTH / view.width();
    let height = view.height() * scale;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(SVG_WIDTH),
        num(height),
        num(SVG_WIDTH),
        num(height)
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    (s, scale)
}

/// Cells as filled polygons, y pointing up, padded by 5% around `bbox`.
pub fn cells_svg(c: &CellUnion) -> String {
    let bb = c.bbox().unwrap_or(Rect::UNIT);
    let pad = 0.05 * bb.width().max(bb.height()).max(1e-9);
    let view = Rect {
        x0: bb.x0 - pad,
        y0: bb.y0 - pad,
        x1: bb.x1 + pad,
        y1: bb.y1 + pad,
    };
    let (mut s, scale) = svg_open(&view);
    s.push_str("<g fill=\"black\" stroke=\"none\">\n");
    for cell in c.iter() {
        let pts: Vec<String> = cell
            .vertices()
            .iter()
            .map(|p| {
                format!(
                    "{},{}",
                    num(round3((p.x - view.x0) * scale)),
                    num(round3((view.y1 - p.y) * scale))
                )
            })
            .collect();
        match pts.len() {
            1 => {
                let (x, y) = pts[0].split_once(',').expect("pair");
                let _ = writeln!(s, "<circle cx=\"{x}\" cy=\"{y}\" r=\"0.5\"/>");
            }
            2 => {
                let _ = writeln!(
                    s,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.5\"/>",
                    pts.join(" ")
                );
            }
            _ => {
                let _ = writeln!(s, "<polygon points=\"{}\"/>", pts.join(" "));
            }
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// Occupied pixels as horizontal run-length strips.
pub fn raster_svg(g: &OccupancyGrid) -> String {
    let (mut s, scale) = svg_open(&g.viewport);
    let px = g.viewport.width() / g.width as f64 * scale;
    let py = g.viewport.height() / g.height as f64 * scale;
    s.push_str("<g fill=\"black\" stroke=\"none\" shape-rendering=\"crispEdges\">\n");
    for (row, col, len) in g.row_runs() {
        let _ = writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
            num(round3(col as f64 * px)),
            num(round3(row as f64 * py)),
            num(round3(len as f64 * px)),
            num(round3(py))
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}
