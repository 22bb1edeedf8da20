//! Space-file format:
//!
//! ```json
//! { "cells": [ { "id": "e", "dim": 1, "orbit": "fixed" } ],
//!   "boundary": { "e": [ { "cell": "v", "a": 1, "b": 0 } ] } }
//! ```
//!
//! Output lists cells in complex order and boundary keys in the same order,
//! omitting cells with empty boundary, so serialization is byte-stable.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{Cell, EquivariantCellComplex, GroupRingElement, Orbit};
use crate::error::ComplexError;

/// Largest accepted cell dimension in a space file.
pub const MAX_DIM: u32 = 64;
/// Largest accepted number of cells in a space file.
pub const MAX_CELLS: usize = 100_000;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellRecord {
    id: String,
    dim: u32,
    orbit: Orbit,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Term {
    cell: String,
    a: i64,
    b: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    cells: Vec<CellRecord>,
    #[serde(default)]
    boundary: Map<String, Value>,
}

pub(super) fn to_json(x: &EquivariantCellComplex) -> String {
    let cells: Vec<Value> = x
        .cells
        .iter()
        .map(|c| serde_json::to_value(CellRecord { id: c.id.clone(), dim: c.dim, orbit: c.orbit }).expect("serializable"))
        .collect();
    let mut bd = Map::new();
    for (i, c) in x.cells.iter().enumerate() {
        if x.boundary[i].is_empty() {
            continue;
        }
        let terms: Vec<Value> = x.boundary[i]
            .iter()
            .map(|(j, g)| serde_json::to_value(Term { cell: x.cells[*j].id.clone(), a: g.a, b: g.b }).expect("serializable"))
            .collect();
        bd.insert(c.id.clone(), Value::Array(terms));
    }
    let mut root = Map::new();
    root.insert("cells".into(), Value::Array(cells));
    root.insert("boundary".into(), Value::Object(bd));
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
    s.push('\n');
    s
}

pub(super) fn from_json(text: &str) -> Result<EquivariantCellComplex, ComplexError> {
    let file: SpaceFile = serde_json::from_str(text).map_err(|e| ComplexError::Parse(e.to_string()))?;
    if file.cells.len() > MAX_CELLS {
        return Err(ComplexError::Parse(format!("more than {MAX_CELLS} cells")));
    }
    let mut cells = Vec::with_capacity(file.cells.len());
    for c in file.cells {
        if c.dim > MAX_DIM {
            return Err(ComplexError::Parse(format!("cell `{}` has dimension above {MAX_DIM}", c.id)));
        }
        cells.push(Cell { id: c.id, dim: c.dim, orbit: c.orbit });
    }
    let mut boundary: Vec<Vec<(String, GroupRingElement)>> = vec![Vec::new(); cells.len()];
    let pos: std::collections::HashMap<&str, usize> = cells.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
    for (key, value) in file.boundary {
        let i = *pos.get(key.as_str()).ok_or_else(|| ComplexError::UnknownCell(key.clone()))?;
        let terms: Vec<Term> = serde_json::from_value(value).map_err(|e| ComplexError::Parse(format!("boundary of `{key}`: {e}")))?;
        for t in terms {
            // Keep coefficient sums far from overflow in ∂∂ checks.
            if t.a.unsigned_abs() > 1 << 20 || t.b.unsigned_abs() > 1 << 20 {
                return Err(ComplexError::Parse(format!("coefficient too large in boundary of `{key}`")));
            }
            boundary[i].push((t.cell, GroupRingElement::new(t.a, t.b)));
        }
    }
    EquivariantCellComplex::new(cells, boundary)
}
