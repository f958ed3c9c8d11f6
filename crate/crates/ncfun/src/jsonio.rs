//! JSON schemas for the on-disk formats the CLI and bindings consume.
//!
//! A complex matrix is an array of rows, each entry a `[re, im]` pair of
//! finite doubles. A matrix tuple is `{ "n": int, "d": int, "matrices":
//! [matrix, ...] }`. Realization data is `{ "delta": grid of expression
//! strings, "m": int, "alpha": [re, im], "B": matrix, "C": matrix,
//! "D": matrix }` with an optional `"d"` overriding the variable count
//! (default: the largest index mentioned in the delta entries).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::{parse_poly, NcPoly, PolyMatrix};
use crate::mattuple::MatrixTuple;
use crate::realization::Realization;
use crate::{CMat, C64};

pub type MatrixRows = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_rows(m: &CMat) -> MatrixRows {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn matrix_from_rows(rows: &MatrixRows) -> Result<CMat> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::InvalidArgument {
            arg: "matrix",
            reason: "matrix must have at least one row".into(),
        });
    }
    let ncols = rows[0].len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidArgument {
            arg: "matrix",
            reason: "rows must be nonempty and of equal length".into(),
        });
    }
    for row in rows {
        for &[re, im] in row {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::InvalidArgument {
                    arg: "matrix",
                    reason: "entries must be finite".into(),
                });
            }
        }
    }
    Ok(CMat::from_fn(nrows, ncols, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixTupleJson {
    pub n: usize,
    pub d: usize,
    pub matrices: Vec<MatrixRows>,
}

pub fn matrix_tuple_to_json(t: &MatrixTuple) -> MatrixTupleJson {
    MatrixTupleJson {
        n: t.level(),
        d: t.len(),
        matrices: t.matrices().iter().map(matrix_to_rows).collect(),
    }
}

pub fn matrix_tuple_from_json(json: &MatrixTupleJson) -> Result<MatrixTuple> {
    if json.matrices.len() != json.d {
        return Err(Error::InvalidArgument {
            arg: "tuple",
            reason: format!(
                "declared d = {} but {} matrices given",
                json.d,
                json.matrices.len()
            ),
        });
    }
    let matrices = json
        .matrices
        .iter()
        .map(matrix_from_rows)
        .collect::<Result<Vec<_>>>()?;
    let tuple = MatrixTuple::new(matrices)?;
    if tuple.level() != json.n {
        return Err(Error::InvalidArgument {
            arg: "tuple",
            reason: format!(
                "declared n = {} but the matrices are {1}x{1}",
                json.n,
                tuple.level()
            ),
        });
    }
    Ok(tuple)
}

pub fn parse_matrix_tuple(text: &str) -> Result<MatrixTuple> {
    let json: MatrixTupleJson = serde_json::from_str(text)?;
    matrix_tuple_from_json(&json)
}

pub fn parse_matrix(text: &str) -> Result<CMat> {
    let rows: MatrixRows = serde_json::from_str(text)?;
    matrix_from_rows(&rows)
}

/// A polynomial-matrix file: expression strings over `d` variables.
#[derive(Debug, Serialize, Deserialize)]
pub struct DeltaJson {
    pub d: usize,
    pub entries: Vec<Vec<String>>,
}

pub fn poly_matrix_from_json(json: &DeltaJson) -> Result<PolyMatrix> {
    let rows = json.entries.len();
    if rows == 0 || json.entries[0].is_empty() {
        return Err(Error::InvalidArgument {
            arg: "delta",
            reason: "entry grid must be nonempty".into(),
        });
    }
    let cols = json.entries[0].len();
    if json.entries.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument {
            arg: "delta",
            reason: "entry rows must have equal length".into(),
        });
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in &json.entries {
        for text in row {
            entries.push(parse_poly(text, json.d)?);
        }
    }
    PolyMatrix::new(rows, cols, entries)
}

pub fn parse_delta(text: &str) -> Result<PolyMatrix> {
    let json: DeltaJson = serde_json::from_str(text)?;
    poly_matrix_from_json(&json)
}

pub fn poly_matrix_to_json(delta: &PolyMatrix) -> DeltaJson {
    DeltaJson {
        d: delta.num_vars(),
        entries: (0..delta.rows())
            .map(|i| {
                (0..delta.cols())
                    .map(|j| delta.entry(i, j).to_string())
                    .collect()
            })
            .collect(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RealizationJson {
    pub delta: Vec<Vec<String>>,
    /// Variable count; defaults to the largest index mentioned in `delta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub m: usize,
    pub alpha: [f64; 2],
    #[serde(rename = "B")]
    pub b: MatrixRows,
    #[serde(rename = "C")]
    pub c: MatrixRows,
    #[serde(rename = "D")]
    pub d_block: MatrixRows,
}

/// Largest `x<k>` index mentioned in an expression string. Only used to infer
/// a default variable count; a full parse validates afterwards.
fn max_var_index(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0usize;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let mut j = i + 1;
            let mut val = 0usize;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                val = val * 10 + (bytes[j] - b'0') as usize;
                j += 1;
            }
            if j > i + 1 {
                best = best.max(val);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    best
}

pub fn realization_from_json_value(json: &RealizationJson) -> Result<Realization> {
    let inferred = json
        .delta
        .iter()
        .flatten()
        .map(|s| max_var_index(s))
        .max()
        .unwrap_or(0);
    let d = json.d.unwrap_or(inferred.max(1));
    let delta = poly_matrix_from_json(&DeltaJson {
        d,
        entries: json.delta.clone(),
    })?;
    Realization::new(
        delta,
        json.m,
        C64::new(json.alpha[0], json.alpha[1]),
        matrix_from_rows(&json.b)?,
        matrix_from_rows(&json.c)?,
        matrix_from_rows(&json.d_block)?,
    )
}

pub fn parse_realization(text: &str) -> Result<Realization> {
    let json: RealizationJson = serde_json::from_str(text)?;
    realization_from_json_value(&json)
}

pub fn realization_to_json(r: &Realization) -> RealizationJson {
    let delta_json = poly_matrix_to_json(r.delta());
    RealizationJson {
        delta: delta_json.entries,
        d: Some(r.num_vars()),
        m: r.aux_dim(),
        alpha: [r.alpha().re, r.alpha().im],
        b: matrix_to_rows(r.b_row()),
        c: matrix_to_rows(r.c_col()),
        d_block: matrix_to_rows(r.d_block()),
    }
}

/// A list of sample tuples, as consumed by the sweep subcommand.
pub fn parse_samples(text: &str) -> Result<Vec<MatrixTuple>> {
    let json: Vec<MatrixTupleJson> = serde_json::from_str(text)?;
    json.iter().map(matrix_tuple_from_json).collect()
}

/// A polynomial expressed purely as an NcPoly -> canonical string bridge.
pub fn poly_to_string(p: &NcPoly) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_roundtrips_through_json() {
        let t = MatrixTuple::new(vec![
            CMat::from_row_slice(
                2,
                2,
                &[
                    C64::new(1.0, 2.0),
                    C64::new(0.0, -1.0),
                    C64::new(0.5, 0.0),
                    C64::new(-3.0, 0.25),
                ],
            ),
            CMat::identity(2, 2),
        ])
        .unwrap();
        let text = serde_json::to_string(&matrix_tuple_to_json(&t)).unwrap();
        let back = parse_matrix_tuple(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn inconsistent_tuple_header_is_rejected() {
        let text = r#"{"n": 2, "d": 1, "matrices": [[[[1,0]]]]}"#;
        assert!(parse_matrix_tuple(text).is_err());
    }

    #[test]
    fn delta_grid_parses_expressions() {
        let text = r#"{"d": 2, "entries": [["x1", "x2"], ["0", "x1*x2"]]}"#;
        let delta = parse_delta(text).unwrap();
        assert_eq!(delta.rows(), 2);
        assert_eq!(delta.cols(), 2);
        assert_eq!(delta.num_vars(), 2);
        assert!(delta.entry(1, 0).is_zero());
    }

    #[test]
    fn realization_infers_variable_count_from_delta() {
        let text = r#"{
            "delta": [["x1 + x2"]],
            "m": 1,
            "alpha": [0.0, 0.0],
            "B": [[[1.0, 0.0]]],
            "C": [[[1.0, 0.0]]],
            "D": [[[0.0, 0.0]]]
        }"#;
        let r = parse_realization(text).unwrap();
        assert_eq!(r.num_vars(), 2);
        assert!(r.validate_isometry() < 1e-12);
    }

    #[test]
    fn realization_roundtrips_through_json() {
        let text = r#"{
            "delta": [["x1"]],
            "d": 1,
            "m": 1,
            "alpha": [0.0, 0.0],
            "B": [[[1.0, 0.0]]],
            "C": [[[1.0, 0.0]]],
            "D": [[[0.0, 0.0]]]
        }"#;
        let r = parse_realization(text).unwrap();
        let serialized = serde_json::to_string(&realization_to_json(&r)).unwrap();
        let back = parse_realization(&serialized).unwrap();
        assert_eq!(back.alpha(), r.alpha());
        assert_eq!(back.d_block(), r.d_block());
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let rows: MatrixRows = vec![vec![[f64::NAN, 0.0]]];
        assert!(matrix_from_rows(&rows).is_err());
    }
}
