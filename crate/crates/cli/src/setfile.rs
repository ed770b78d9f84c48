//! JSON set descriptions.
//!
//! ```json
//! {"type": "cells", "rects": [[0, 0, 1, 1]], "polys": [[[0, 0], [1, 0], [0, 1]]]}
//! {"type": "attractor", "system": "four_corner", "ratio": 0.25, "level": 3}
//! {"type": "affine", "matrix": [1, 0, 0, 1], "translate": [0, 0], "child": {...}}
//! {"type": "union", "children": [...]}
//! {"type": "clip", "rect": [0, 0, 1, 1], "child": {...}}
//! ```
//!
//! Attractors are seeded with the unit square. [`SetDoc::to_canonical`]
//! emits a normalized document that parses back to itself and re-emits
//! byte for byte.

use std::fmt;

use besicovitch_core::{
    four_corner_system, AffineMap, CellUnion, ConvexCell, Point, Rect, SetExpr,
};
use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::error::{CliError, ErrorKind, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum System {
    #[serde(rename = "four_corner")]
    FourCorner,
}

/// A validated set description.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SetDoc {
    Cells {
        rects: Vec<[f64; 4]>,
        polys: Vec<Vec<[f64; 2]>>,
    },
    Attractor {
        system: System,
        ratio: f64,
        level: u32,
    },
    Affine {
        matrix: [f64; 4],
        translate: [f64; 2],
        child: Box<SetDoc>,
    },
    Union {
        children: Vec<SetDoc>,
    },
    Clip {
        rect: [f64; 4],
        child: Box<SetDoc>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    #[serde(rename = "type")]
    kind: String,
    rects: Option<Vec<[f64; 4]>>,
    polys: Option<Vec<Vec<[f64; 2]>>>,
    system: Option<String>,
    ratio: Option<f64>,
    level: Option<u32>,
    matrix: Option<[f64; 4]>,
    translate: Option<[f64; 2]>,
    rect: Option<[f64; 4]>,
    child: Option<Box<RawNode>>,
    children: Option<Vec<RawNode>>,
}

#[derive(Debug, Clone)]
enum Seg {
    Field(&'static str),
    Index(usize),
}

/// Location of a node, printed like `children[1].child.rect`.
#[derive(Debug, Clone, Default)]
struct NodePath(Vec<Seg>);

impl NodePath {
    fn field(&self, name: &'static str) -> NodePath {
        let mut p = self.clone();
        p.0.push(Seg::Field(name));
        p
    }

    fn index(&self, i: usize) -> NodePath {
        let mut p = self.clone();
        p.0.push(Seg::Index(i));
        p
    }

    fn fail(&self, message: impl Into<String>) -> CliError {
        CliError::schema(self.to_string(), message)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(".");
        }
        for (i, s) in self.0.iter().enumerate() {
            match s {
                Seg::Field(name) if i == 0 => write!(f, "{name}")?,
                Seg::Field(name) => write!(f, ".{name}")?,
                Seg::Index(k) => write!(f, "[{k}]")?,
            }
        }
        Ok(())
    }
}

const FIELDS: [&str; 10] = [
    "rects",
    "polys",
    "system",
    "ratio",
    "level",
    "matrix",
    "translate",
    "rect",
    "child",
    "children",
];

impl RawNode {
    fn present(&self) -> [bool; 10] {
        [
            self.rects.is_some(),
            self.polys.is_some(),
            self.system.is_some(),
            self.ratio.is_some(),
            self.level.is_some(),
            self.matrix.is_some(),
            self.translate.is_some(),
            self.rect.is_some(),
            self.child.is_some(),
            self.children.is_some(),
        ]
    }

    fn validate(self, path: &NodePath) -> Result<SetDoc> {
        let allowed: &[&str] = match self.kind.as_str() {
            "cells" => &["rects", "polys"],
            "attractor" => &["system", "ratio", "level"],
            "affine" => &["matrix", "translate", "child"],
            "union" => &["children"],
            "clip" => &["rect", "child"],
            other => {
                return Err(path.field("type").fail(format!(
                    "unknown type `{other}`, expected one of cells, attractor, affine, union, clip"
                )))
            }
        };
        for (name, there) in FIELDS.iter().zip(self.present()) {
            if there && !allowed.contains(name) {
                return Err(path
                    .field(name)
                    .fail(format!("field not allowed for type `{}`", self.kind)));
            }
        }
        let need = |name: &'static str| path.field(name).fail("missing field");
        match self.kind.as_str() {
            "cells" => {
                let rects = self.rects.unwrap_or_default();
                let polys = self.polys.unwrap_or_default();
                for (i, r) in rects.iter().enumerate() {
                    check_rect(r, &path.field("rects").index(i))?;
                }
                for (i, p) in polys.iter().enumerate() {
                    ConvexCell::new(p.iter().map(|&[x, y]| Point::new(x, y)))
                        .map_err(|e| path.field("polys").index(i).fail(e.to_string()))?;
                }
                Ok(SetDoc::Cells { rects, polys })
            }
            "attractor" => {
                let system = self.system.ok_or_else(|| need("system"))?;
                if system != "four_corner" {
                    return Err(path
                        .field("system")
                        .fail(format!("unknown system `{system}`, expected four_corner")));
                }
                let ratio = self.ratio.unwrap_or(0.25);
                four_corner_system(ratio).map_err(|e| path.field("ratio").fail(e.to_string()))?;
                let level = self.level.ok_or_else(|| need("level"))?;
                Ok(SetDoc::Attractor {
                    system: System::FourCorner,
                    ratio,
                    level,
                })
            }
            "affine" => {
                let matrix = self.matrix.ok_or_else(|| need("matrix"))?;
                if matrix.iter().any(|v| !v.is_finite()) {
                    return Err(path.field("matrix").fail("non-finite entry"));
                }
                let translate = self.translate.unwrap_or([0.0, 0.0]);
                if translate.iter().any(|v| !v.is_finite()) {
                    return Err(path.field("translate").fail("non-finite entry"));
                }
                let child = self.child.ok_or_else(|| need("child"))?;
                Ok(SetDoc::Affine {
                    matrix,
                    translate,
                    child: Box::new(child.validate(&path.field("child"))?),
                })
            }
            "union" => {
                let children = self.children.ok_or_else(|| need("children"))?;
                let cp = path.field("children");
                Ok(SetDoc::Union {
                    children: children
                        .into_iter()
                        .enumerate()
                        .map(|(i, c)| c.validate(&cp.index(i)))
                        .collect::<Result<_>>()?,
                })
            }
            _ => {
                let rect = self.rect.ok_or_else(|| need("rect"))?;
                check_rect(&rect, &path.field("rect"))?;
                let child = self.child.ok_or_else(|| need("child"))?;
                Ok(SetDoc::Clip {
                    rect,
                    child: Box::new(child.validate(&path.field("child"))?),
                })
            }
        }
    }
}

fn check_rect(r: &[f64; 4], path: &NodePath) -> Result<Rect> {
    Rect::new(r[0], r[1], r[2], r[3]).map_err(|e| path.fail(e.to_string()))
}

fn rect_of(r: &[f64; 4]) -> Rect {
    Rect::new(r[0], r[1], r[2], r[3]).expect("validated rectangle")
}

/// Parses and validates a set description. Syntax errors carry the line
/// and column, schema errors the path of the offending node.
pub fn parse_set_description(text: &str) -> Result<SetDoc> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawNode = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            Category::Data => CliError::schema(path, strip_position(&inner)),
            _ => syntax(&inner),
        }
    })?;
    de.end().map_err(|e| syntax(&e))?;
    raw.validate(&NodePath::default())
}

fn syntax(e: &serde_json::Error) -> CliError {
    CliError {
        line: Some(e.line()),
        column: Some(e.column()),
        ..CliError::new(ErrorKind::Syntax, strip_position(e))
    }
}

/// Parses a description and checks it against a cell budget.
pub fn parse_with_budget(text: &str, budget: usize) -> Result<SetDoc> {
    let doc = parse_set_description(text)?;
    let bound = doc.to_expr().cell_bound();
    if bound > budget as u128 {
        return Err(CliError::new(
            ErrorKind::Budget,
            format!("description expands to {bound} cells, budget is {budget}"),
        ));
    }
    Ok(doc)
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

impl SetDoc {
    pub fn to_expr(&self) -> SetExpr {
        match self {
            SetDoc::Cells { rects, polys } => {
                let mut c = CellUnion::from_rects(&rects.iter().map(rect_of).collect::<Vec<_>>());
                for p in polys {
                    c.push(
                        ConvexCell::new(p.iter().map(|&[x, y]| Point::new(x, y)))
                            .expect("validated polygon"),
                    );
                }
                SetExpr::Cells(c)
            }
            SetDoc::Attractor { ratio, level, .. } => SetExpr::Attractor {
                system: four_corner_system(*ratio).expect("validated ratio"),
                level: *level,
                seed: ConvexCell::rect(&Rect::UNIT),
            },
            SetDoc::Affine {
                matrix: m,
                translate,
                child,
            } => SetExpr::image(
                AffineMap::new([[m[0], m[1]], [m[2], m[3]]], *translate),
                child.to_expr(),
            ),
            SetDoc::Union { children } => {
                SetExpr::Union(children.iter().map(SetDoc::to_expr).collect())
            }
            SetDoc::Clip { rect, child } => SetExpr::clip(rect_of(rect), child.to_expr()),
        }
    }

    /// Describes an expression. Attractors must be four-corner systems on
    /// the unit square; axis-aligned rectangular cells become `rects`.
    pub fn from_expr(e: &SetExpr) -> Result<SetDoc> {
        Ok(match e {
            SetExpr::Cells(c) => {
                let mut rects = Vec::new();
                let mut polys = Vec::new();
                for cell in c.iter() {
                    let bb = cell.bbox();
                    if cell.len() == 4 && *cell == ConvexCell::rect(&bb) {
                        rects.push([bb.x0, bb.y0, bb.x1, bb.y1]);
                    } else {
                        polys.push(cell.vertices().iter().map(|p| [p.x, p.y]).collect());
                    }
                }
                SetDoc::Cells { rects, polys }
            }
            SetExpr::Attractor {
                system,
                level,
                seed,
            } => {
                let ratio = system.maps().first().map_or(0.0, |m| m.linear[0][0]);
                let same = four_corner_system(ratio).is_ok_and(|s| s == *system);
                if !same || *seed != ConvexCell::rect(&Rect::UNIT) {
                    return Err(CliError::input(
                        "only four-corner attractors on the unit square can be described",
                    ));
                }
                SetDoc::Attractor {
                    system: System::FourCorner,
                    ratio,
                    level: *level,
                }
            }
            SetExpr::Image(m, child) => SetDoc::Affine {
                matrix: [
                    m.linear[0][0],
                    m.linear[0][1],
                    m.linear[1][0],
                    m.linear[1][1],
                ],
                translate: m.translation,
                child: Box::new(SetDoc::from_expr(child)?),
            },
            SetExpr::Union(cs) => SetDoc::Union {
                children: cs.iter().map(SetDoc::from_expr).collect::<Result<_>>()?,
            },
            SetExpr::Clip(r, child) => SetDoc::Clip {
                rect: [r.x0, r.y0, r.x1, r.y1],
                child: Box::new(SetDoc::from_expr(child)?),
            },
        })
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("set description serializes");
        s.push('\n');
        s
    }
}
