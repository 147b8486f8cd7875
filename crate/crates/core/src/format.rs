//! JSON lattice files:
//!
//! ```json
//! {"name": "weil", "rank": 2, "generators": [{"name": "sigma", "matrix": [[0, 1], [1, 0]]}], "cap": 24}
//! ```
//!
//! The group is the matrix group generated by the listed matrices and the
//! lattice is its natural representation. `cap` is optional.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::classify::matrix_rows;
use crate::error::{Error, Result};
use crate::group::{FiniteMatrixGroup, DEFAULT_ORDER_CAP};
use crate::lattice::GLattice;
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: IntMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeFile {
    pub name: String,
    pub rank: usize,
    pub generators: Vec<NamedMatrix>,
    pub cap: Option<usize>,
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation { field: field.into(), message: message.into() }
}

fn parse_integer(v: &Value, field: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(invalid(field, format!("expected an integer, found {}", n)))
            }
        }
        other => Err(invalid(field, format!("expected an integer, found {}", kind(other)))),
    }
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn parse_count(v: &Value, field: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| invalid(field, format!("expected a nonnegative integer, found {}", v)))
}

fn parse_matrix(v: &Value, rank: usize, field: &str) -> Result<IntMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid(field, format!("expected an array of rows, found {}", kind(v))))?;
    if rows.len() != rank {
        return Err(invalid(field, format!("expected {} rows, found {}", rank, rows.len())));
    }
    let mut data = Vec::with_capacity(rank * rank);
    for (i, row) in rows.iter().enumerate() {
        let f = format!("{}[{}]", field, i);
        let row = row
            .as_array()
            .ok_or_else(|| invalid(&f, format!("expected an array, found {}", kind(row))))?;
        if row.len() != rank {
            return Err(invalid(&f, format!("expected {} entries, found {}", rank, row.len())));
        }
        for (j, x) in row.iter().enumerate() {
            data.push(parse_integer(x, &format!("{}[{}]", f, j))?);
        }
    }
    Ok(IntMatrix::from_vec(rank, rank, data))
}

impl LatticeFile {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(format!("input is not UTF-8: {}", e)))?;
        let root: Value = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))?;
        let obj = root
            .as_object()
            .ok_or_else(|| invalid("$", format!("expected an object, found {}", kind(&root))))?;
        for key in obj.keys() {
            if !["name", "rank", "generators", "cap"].contains(&key.as_str()) {
                return Err(invalid(key.as_str(), "unknown field"));
            }
        }
        let name = match obj.get("name") {
            Some(Value::String(s)) => s.clone(),
            Some(other) => return Err(invalid("name", format!("expected a string, found {}", kind(other)))),
            None => return Err(invalid("name", "missing field")),
        };
        let rank = parse_count(obj.get("rank").ok_or_else(|| invalid("rank", "missing field"))?, "rank")?;
        let gens = obj.get("generators").ok_or_else(|| invalid("generators", "missing field"))?;
        let gens = gens
            .as_array()
            .ok_or_else(|| invalid("generators", format!("expected an array, found {}", kind(gens))))?;
        let mut generators = Vec::with_capacity(gens.len());
        for (k, g) in gens.iter().enumerate() {
            let field = format!("generators[{}]", k);
            let g = g
                .as_object()
                .ok_or_else(|| invalid(&field, format!("expected an object, found {}", kind(g))))?;
            let name = match g.get("name") {
                Some(Value::String(s)) => s.clone(),
                None => format!("g{}", k),
                Some(other) => {
                    return Err(invalid(format!("{}.name", field), format!("expected a string, found {}", kind(other))))
                }
            };
            let mfield = format!("{}.matrix", field);
            let matrix = parse_matrix(g.get("matrix").ok_or_else(|| invalid(&mfield, "missing field"))?, rank, &mfield)?;
            generators.push(NamedMatrix { name, matrix });
        }
        let cap = obj.get("cap").map(|v| parse_count(v, "cap")).transpose()?;
        Ok(LatticeFile { name, rank, generators, cap })
    }

    /// Closes the group and returns its natural lattice.
    pub fn to_lattice(&self) -> Result<GLattice> {
        let mats: Vec<IntMatrix> = self.generators.iter().map(|g| g.matrix.clone()).collect();
        let cap = self.cap.unwrap_or(DEFAULT_ORDER_CAP);
        let group = FiniteMatrixGroup::close(self.rank, &mats, cap).map_err(|e| match e {
            Error::NotInvertible { index, determinant } => invalid(
                format!("generators[{}].matrix", index),
                format!("determinant {} is not +1 or -1", determinant),
            ),
            Error::OrderCapExceeded { cap } => invalid(
                "generators",
                format!("generated group has more than {} elements (cap); it may be infinite", cap),
            ),
            other => other,
        })?;
        Ok(GLattice::natural(Arc::new(group)))
    }

    /// Writes the generator actions of `m`. Re-parsing gives `m` back when the
    /// action is faithful.
    pub fn from_lattice(name: &str, m: &GLattice) -> Self {
        LatticeFile {
            name: name.to_string(),
            rank: m.rank(),
            generators: m
                .generator_actions()
                .into_iter()
                .enumerate()
                .map(|(k, matrix)| NamedMatrix { name: format!("g{}", k), matrix })
                .collect(),
            cap: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl Serialize for LatticeFile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Gen<'a> {
            name: &'a str,
            matrix: Vec<Vec<Value>>,
        }
        #[derive(Serialize)]
        struct File<'a> {
            name: &'a str,
            rank: usize,
            generators: Vec<Gen<'a>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            cap: Option<usize>,
        }
        File {
            name: &self.name,
            rank: self.rank,
            generators: self
                .generators
                .iter()
                .map(|g| Gen { name: &g.name, matrix: matrix_rows(&g.matrix) })
                .collect(),
            cap: self.cap,
        }
        .serialize(s)
    }
}

pub fn parse_lattice_file(bytes: &[u8]) -> Result<GLattice> {
    LatticeFile::parse(bytes)?.to_lattice()
}
