//! Shared inputs for the benchmarks.

use besicovitch_core::{eval_set, fitted_invisible_set, CellUnion, Rect, SetExpr};

pub fn fitted_code(level: u32) -> SetExpr {
    fitted_invisible_set(&Rect::UNIT, level).expect("unit square is not degenerate")
}

pub fn fitted(level: u32) -> CellUnion {
    eval_set(&fitted_code(level)).expect("within the default budget")
}
