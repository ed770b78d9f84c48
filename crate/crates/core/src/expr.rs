//! Set-expression trees and their evaluation into cell unions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{apply_affine, AffineMap, CellUnion, ConvexCell, Rect};

/// Default maximum attractor level.
pub const DEFAULT_MAX_LEVEL: u32 = 12;
/// Default maximum number of cells any evaluation may produce.
pub const DEFAULT_CELL_BUDGET: usize = 10_000_000;

/// A finite family of contracting affine maps.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsSystem {
    maps: Vec<AffineMap>,
}

impl IfsSystem {
    pub fn new(maps: Vec<AffineMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidMap("an IFS needs at least one map".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::InvalidMap(format!("map {i} has non-finite entries")));
            }
            let norm = m.operator_norm();
            if norm >= 1.0 {
                return Err(Error::InvalidMap(format!(
                    "map {i} is not contracting (operator norm {norm})"
                )));
            }
        }
        Ok(IfsSystem { maps })
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    /// Number of cells a level-`level` expansion of one seed produces, or
    /// `None` on overflow.
    pub fn cell_count(&self, level: u32) -> Option<u128> {
        (self.maps.len() as u128).checked_pow(level)
    }
}

/// A lazy description of a compact set.
#[derive(Debug, Clone, PartialEq)]
pub enum SetExpr {
    Cells(CellUnion),
    /// All compositions of `level` maps of the system applied to `seed`.
    Attractor {
        system: IfsSystem,
        level: u32,
        seed: ConvexCell,
    },
    Image(AffineMap, Box<SetExpr>),
    Union(Vec<SetExpr>),
    Clip(Rect, Box<SetExpr>),
}

impl SetExpr {
    pub fn image(map: AffineMap, child: SetExpr) -> SetExpr {
        SetExpr::Image(map, Box::new(child))
    }

    pub fn clip(rect: Rect, child: SetExpr) -> SetExpr {
        SetExpr::Clip(rect, Box::new(child))
    }

    /// Deepest attractor level in the tree (0 when there is none).
    pub fn max_level(&self) -> u32 {
        match self {
            SetExpr::Cells(_) => 0,
            SetExpr::Attractor { level, .. } => *level,
            SetExpr::Image(_, c) | SetExpr::Clip(_, c) => c.max_level(),
            SetExpr::Union(cs) => cs.iter().map(SetExpr::max_level).max().unwrap_or(0),
        }
    }

    /// Upper bound on the number of cells evaluation produces.
    pub fn cell_bound(&self) -> u128 {
        match self {
            SetExpr::Cells(c) => c.len() as u128,
            SetExpr::Attractor { system, level, .. } => {
                system.cell_count(*level).unwrap_or(u128::MAX)
            }
            SetExpr::Image(_, c) | SetExpr::Clip(_, c) => c.cell_bound(),
            SetExpr::Union(cs) => cs
                .iter()
                .map(SetExpr::cell_bound)
                .fold(0u128, u128::saturating_add),
        }
    }
}

/// Limits applied during evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub max_level: u32,
    pub cell_budget: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            max_level: DEFAULT_MAX_LEVEL,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }
}

impl EvalOptions {
    pub fn with_budget(cell_budget: usize) -> Self {
        EvalOptions {
            cell_budget,
            ..Default::default()
        }
    }
}

/// Materializes an expression with default limits.
pub fn eval_set(expr: &SetExpr) -> Result<CellUnion> {
    eval_set_with(expr, &EvalOptions::default())
}

pub fn eval_set_with(expr: &SetExpr, opts: &EvalOptions) -> Result<CellUnion> {
    let bound = expr.cell_bound();
    if bound > opts.cell_budget as u128 {
        return Err(Error::BudgetExceeded {
            requested: bound,
            budget: opts.cell_budget,
        });
    }
    eval_inner(expr, opts)
}

fn eval_inner(expr: &SetExpr, opts: &EvalOptions) -> Result<CellUnion> {
    match expr {
        SetExpr::Cells(c) => Ok(c.clone()),
        SetExpr::Attractor {
            system,
            level,
            seed,
        } => {
            if *level > opts.max_level {
                return Err(Error::LevelTooDeep {
                    level: *level,
                    max: opts.max_level,
                });
            }
            Ok(expand_attractor(system, *level, seed))
        }
        SetExpr::Image(m, child) => Ok(apply_affine(&eval_inner(child, opts)?, m)),
        SetExpr::Union(children) => {
            let parts = children
                .iter()
                .map(|c| eval_inner(c, opts))
                .collect::<Result<Vec<_>>>()?;
            let mut out = CellUnion::empty();
            for p in parts {
                out.extend(p);
            }
            Ok(out)
        }
        SetExpr::Clip(rect, child) => {
            let inner = eval_inner(child, opts)?;
            Ok(inner
                .cells()
                .par_iter()
                .filter_map(|c| c.clip_rect(rect))
                .collect::<Vec<_>>()
                .into_iter()
                .collect())
        }
    }
}

/// Cell for the word `i1 i2 … in` is `f_{i1} ∘ … ∘ f_{in}(seed)`; cells are
/// ordered lexicographically by word.
fn expand_attractor(system: &IfsSystem, level: u32, seed: &ConvexCell) -> CellUnion {
    let maps = system.maps();
    // composed maps of the previous level, then applied once to the seed
    let mut words: Vec<AffineMap> = vec![AffineMap::IDENTITY];
    for _ in 0..level {
        words = words
            .iter()
            .flat_map(|w| maps.iter().map(move |f| w.compose(f)))
            .collect();
    }
    CellUnion::new(words.par_iter().map(|w| seed.map(w)).collect())
}
