//! JSON file formats for tensors and decompositions.
//!
//! Both formats are plain serde documents so they stay greppable and easy
//! to produce from other tools:
//!
//! * tensor file: `{ "dims": [d1, d2, d3], "order": "slice-major",
//!   "data": [ ... ] }` with `data` in the crate's canonical order (slice k
//!   varies slowest, then row i, then column j); the `order` field is a
//!   required literal so foreign writers must state the layout explicitly;
//! * decomposition file: `{ "shape": [d1, d2, d3], "terms": [ { "u": [..],
//!   "v": [..], "w": [..] }, ... ] }`, one record per rank-one term.
//!
//! Loading distinguishes malformed JSON (`Error::Parse`) from well-formed
//! documents with inconsistent contents (`Error::Validation`).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{Decomposition, RankOneTerm, Tensor3};

/// The only data layout the tensor format supports.
const SLICE_MAJOR: &str = "slice-major";

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TensorFile {
    dims: [usize; 3],
    order: String,
    data: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermRecord {
    u: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DecompositionFile {
    shape: [usize; 3],
    terms: Vec<TermRecord>,
}

fn write_pretty<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Io(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn read_parsed<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Writes a tensor as pretty-printed JSON.
pub fn save_tensor(path: impl AsRef<Path>, tensor: &Tensor3) -> Result<()> {
    let (d1, d2, d3) = tensor.dims();
    let file = TensorFile {
        dims: [d1, d2, d3],
        order: SLICE_MAJOR.to_string(),
        data: tensor.data().to_vec(),
    };
    write_pretty(path.as_ref(), &file)
}

/// Reads a tensor back, validating the layout tag, dimensions, and
/// finiteness.
pub fn load_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    let path = path.as_ref();
    let file: TensorFile = read_parsed(path)?;
    if file.order != SLICE_MAJOR {
        return Err(Error::Validation(format!(
            "{}: field \"order\" must be \"{SLICE_MAJOR}\", got \"{}\"",
            path.display(),
            file.order
        )));
    }
    let [d1, d2, d3] = file.dims;
    Tensor3::new(d1, d2, d3, file.data)
        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

/// Writes a decomposition as pretty-printed JSON.
pub fn save_decomposition(path: impl AsRef<Path>, decomp: &Decomposition) -> Result<()> {
    let (d1, d2, d3) = decomp.shape;
    let file = DecompositionFile {
        shape: [d1, d2, d3],
        terms: decomp
            .terms
            .iter()
            .map(|t| TermRecord { u: t.u.clone(), v: t.v.clone(), w: t.w.clone() })
            .collect(),
    };
    write_pretty(path.as_ref(), &file)
}

/// Reads a decomposition back, validating every term against the shape.
pub fn load_decomposition(path: impl AsRef<Path>) -> Result<Decomposition> {
    let path = path.as_ref();
    let file: DecompositionFile = read_parsed(path)?;
    let [d1, d2, d3] = file.shape;
    let terms: Vec<RankOneTerm> =
        file.terms.into_iter().map(|t| RankOneTerm { u: t.u, v: t.v, w: t.w }).collect();
    Decomposition::new((d1, d2, d3), terms)
        .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}
