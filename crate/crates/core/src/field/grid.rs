//! Rectilinear grids, central-difference stencils and CSV/JSON export.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FieldError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: [f64; 3],
    pub max: [f64; 3],
    pub n: [usize; 3],
}

impl GridSpec {
    pub fn cube(lo: f64, hi: f64, n: usize) -> Self {
        GridSpec {
            min: [lo; 3],
            max: [hi; 3],
            n: [n; 3],
        }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        for a in 0..3 {
            if self.n[a] == 0 {
                return Err(FieldError::EmptyGrid(a));
            }
            if !self.min[a].is_finite() || !self.max[a].is_finite() {
                return Err(FieldError::BadGrid(format!("non-finite bound on axis {a}")));
            }
            if self.n[a] > 1 && !(self.max[a] > self.min[a]) {
                return Err(FieldError::BadGrid(format!(
                    "max must exceed min on axis {a}"
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        let n = self.n[axis];
        if n == 1 || i == 0 {
            self.min[axis]
        } else if i == n - 1 {
            self.max[axis]
        } else {
            self.min[axis] + (self.max[axis] - self.min[axis]) * i as f64 / (n - 1) as f64
        }
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        if self.n[axis] > 1 {
            (self.max[axis] - self.min[axis]) / (self.n[axis] - 1) as f64
        } else {
            0.0
        }
    }

    /// Node index to `[i, j, k]`, `x` fastest.
    pub fn unflatten(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.n[0];
        let j = (idx / self.n[0]) % self.n[1];
        let k = idx / (self.n[0] * self.n[1]);
        [i, j, k]
    }

    pub fn flatten(&self, ijk: [usize; 3]) -> usize {
        ijk[0] + self.n[0] * (ijk[1] + self.n[1] * ijk[2])
    }

    pub fn point(&self, ijk: [usize; 3]) -> [f64; 3] {
        std::array::from_fn(|a| self.coordinate(a, ijk[a]))
    }

    fn is_interior(&self, ijk: [usize; 3]) -> bool {
        (0..3).all(|a| ijk[a] > 0 && ijk[a] + 1 < self.n[a])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stencil {
    pub div: f64,
    pub curl: [f64; 3],
    pub lap: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub point: [f64; 3],
    pub value: [f64; 3],
    /// `None` at boundary nodes or when stencils were not requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stencil: Option<Stencil>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridTable {
    pub spec: GridSpec,
    pub stencils: bool,
    pub rows: Vec<GridRow>,
}

/// Residual statistics over interior nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StencilStats {
    pub interior: usize,
    pub max_div: f64,
    pub max_curl: f64,
    pub max_lap: f64,
    /// Rows whose value is not finite.
    pub nan_rows: usize,
}

/// Evaluate `field` on every node; with `stencils`, add discrete operators at interior nodes.
pub fn sample_grid(
    field: &(dyn Fn([f64; 3]) -> [f64; 3] + Sync),
    spec: &GridSpec,
    stencils: bool,
) -> Result<GridTable, FieldError> {
    spec.validate()?;
    let values: Vec<[f64; 3]> = (0..spec.len())
        .into_par_iter()
        .map(|idx| field(spec.point(spec.unflatten(idx))))
        .collect();
    Ok(assemble(spec, values, stencils))
}

fn assemble(spec: &GridSpec, values: Vec<[f64; 3]>, stencils: bool) -> GridTable {
    let stencil_at = |idx: usize| -> Option<Stencil> {
        let ijk = spec.unflatten(idx);
        if !stencils || !spec.is_interior(ijk) {
            return None;
        }
        let mut d1 = [[0.0; 3]; 3];
        let mut lap = [0.0; 3];
        let f0 = values[idx];
        for a in 0..3 {
            let h = spec.spacing(a);
            let mut up = ijk;
            let mut dn = ijk;
            up[a] += 1;
            dn[a] -= 1;
            let (fu, fd) = (values[spec.flatten(up)], values[spec.flatten(dn)]);
            for i in 0..3 {
                d1[i][a] = (fu[i] - fd[i]) / (2.0 * h);
                lap[i] += (fu[i] - 2.0 * f0[i] + fd[i]) / (h * h);
            }
        }
        Some(Stencil {
            div: d1[0][0] + d1[1][1] + d1[2][2],
            curl: [
                d1[2][1] - d1[1][2],
                d1[0][2] - d1[2][0],
                d1[1][0] - d1[0][1],
            ],
            lap,
        })
    };
    let rows = (0..values.len())
        .into_par_iter()
        .map(|idx| GridRow {
            point: spec.point(spec.unflatten(idx)),
            value: values[idx],
            stencil: stencil_at(idx),
        })
        .collect();
    GridTable {
        spec: spec.clone(),
        stencils,
        rows,
    }
}

fn fold_max(m: f64, v: f64) -> f64 {
    if v.is_nan() || m.is_nan() {
        f64::NAN
    } else {
        m.max(v)
    }
}

pub fn stencil_stats(table: &GridTable) -> StencilStats {
    let mut s = StencilStats {
        interior: 0,
        max_div: 0.0,
        max_curl: 0.0,
        max_lap: 0.0,
        nan_rows: 0,
    };
    for row in &table.rows {
        if row.value.iter().any(|v| !v.is_finite()) {
            s.nan_rows += 1;
        }
        if let Some(st) = &row.stencil {
            s.interior += 1;
            s.max_div = fold_max(s.max_div, st.div.abs());
            s.max_curl = st.curl.iter().fold(s.max_curl, |m, v| fold_max(m, v.abs()));
            s.max_lap = st.lap.iter().fold(s.max_lap, |m, v| fold_max(m, v.abs()));
        }
    }
    s
}

const HEADER: &str = "x,y,z,F1,F2,F3";
const STENCIL_HEADER: &str = ",div,curl1,curl2,curl3,lap1,lap2,lap3";

impl GridTable {
    pub fn stats(&self) -> StencilStats {
        stencil_stats(self)
    }

    /// CSV with one row per node; stencil cells are empty at boundary nodes.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 64);
        out.push_str(HEADER);
        if self.stencils {
            out.push_str(STENCIL_HEADER);
        }
        out.push('\n');
        for row in &self.rows {
            let cells = row.point.iter().chain(&row.value);
            let mut first = true;
            for v in cells {
                if !first {
                    out.push(',');
                }
                first = false;
                let _ = write!(out, "{v}");
            }
            if self.stencils {
                match &row.stencil {
                    Some(st) => {
                        for v in std::iter::once(&st.div).chain(&st.curl).chain(&st.lap) {
                            let _ = write!(out, ",{v}");
                        }
                    }
                    None => out.push_str(",,,,,,,"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self.rows.iter().map(row_json).collect();
        let doc = serde_json::json!({ "grid": self.spec, "rows": rows });
        serde_json::to_string_pretty(&doc).expect("grid table serializes")
    }
}

fn num(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

fn row_json(row: &GridRow) -> serde_json::Value {
    let mut m = serde_json::Map::new();
    for (name, v) in ["x", "y", "z", "F1", "F2", "F3"]
        .into_iter()
        .zip(row.point.iter().chain(&row.value))
    {
        m.insert(name.into(), num(*v));
    }
    if let Some(st) = &row.stencil {
        let names = ["div", "curl1", "curl2", "curl3", "lap1", "lap2", "lap3"];
        let vals = std::iter::once(&st.div).chain(&st.curl).chain(&st.lap);
        for (name, v) in names.into_iter().zip(vals) {
            m.insert(name.into(), num(*v));
        }
    }
    serde_json::Value::Object(m)
}

fn axis_values(rows: &[[f64; 6]], axis: usize) -> Vec<f64> {
    let mut v: Vec<f64> = rows.iter().map(|r| r[axis]).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Read a CSV written by [`GridTable::to_csv`], rebuild the grid, and recompute stencils.
pub fn read_csv(text: &str, stencils: bool) -> Result<GridTable, FieldError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(FieldError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header.trim();
    if header != HEADER && header != format!("{HEADER}{STENCIL_HEADER}") {
        return Err(FieldError::Parse {
            line: 1,
            msg: format!("unexpected header {header:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let cells: Vec<&str> = line.trim().split(',').collect();
        if cells.len() < 6 {
            return Err(FieldError::Parse {
                line: i + 1,
                msg: format!("expected at least 6 cells, found {}", cells.len()),
            });
        }
        let mut r = [0.0; 6];
        for (slot, cell) in r.iter_mut().zip(&cells) {
            *slot = cell.trim().parse().map_err(|_| FieldError::Parse {
                line: i + 1,
                msg: format!("not a number: {cell:?}"),
            })?;
        }
        rows.push(r);
    }
    let axes: [Vec<f64>; 3] = std::array::from_fn(|a| axis_values(&rows, a));
    let spec = GridSpec {
        min: std::array::from_fn(|a| axes[a][0]),
        max: std::array::from_fn(|a| *axes[a].last().unwrap()),
        n: std::array::from_fn(|a| axes[a].len()),
    };
    if spec.len() != rows.len() {
        return Err(FieldError::BadGrid(format!(
            "{} rows do not form a {}x{}x{} grid",
            rows.len(),
            spec.n[0],
            spec.n[1],
            spec.n[2]
        )));
    }
    for (idx, r) in rows.iter().enumerate() {
        let ijk = spec.unflatten(idx);
        if (0..3).any(|a| r[a] != axes[a][ijk[a]]) {
            return Err(FieldError::BadGrid(format!(
                "row {} is out of x-fastest order",
                idx + 1
            )));
        }
    }
    let values = rows.iter().map(|r| [r[3], r[4], r[5]]).collect();
    let mut table = assemble(&spec, values, stencils);
    // keep the exact coordinates that were read
    for (row, r) in table.rows.iter_mut().zip(&rows) {
        row.point = [r[0], r[1], r[2]];
    }
    Ok(table)
}
