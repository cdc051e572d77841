//! Text formats for dictionaries and sparse vectors.
//!
//! CSV dictionary:
//!
//! ```text
//! # spark-forge dictionary v1, family=thm1, q=2, scale_sq=2, layout=block-major
//! 1,1,0,0,1,1,0,0,1,1,0,0
//! ...
//! ```
//!
//! CSV vector (one `index,value` line per nonzero):
//!
//! ```text
//! # spark-forge vector v1, family=thm1, q=2, len=12, layout=block-major
//! 0,1
//! 7,1
//! 8,-1
//! ```
//!
//! The JSON forms carry the same header fields as keys, plus `entries`
//! (row-major rows) or `support` (`[index, value]` pairs).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use spark_forge_core::dict::{DictError, Family, ScaledDictionary, SparseVector};
use spark_forge_core::matrix::{MatrixError, SignColumns};

pub const DICTIONARY_MAGIC: &str = "spark-forge dictionary v1";
pub const VECTOR_MAGIC: &str = "spark-forge vector v1";
pub const LAYOUT: &str = "block-major";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("empty input")]
    Empty,
    #[error("bad header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Dict(#[from] DictError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Output encoding selected by `--format`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn parse_header(line: &str, magic: &str) -> Result<BTreeMap<String, String>, FormatError> {
    let body = line
        .strip_prefix('#')
        .map(str::trim)
        .and_then(|s| s.strip_prefix(magic))
        .ok_or_else(|| FormatError::Header(format!("expected `# {magic}, ...`")))?;
    let mut fields = BTreeMap::new();
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| FormatError::Header(format!("`{part}` is not key=value")))?;
        if fields.insert(k.to_string(), v.to_string()).is_some() {
            return Err(FormatError::Header(format!("duplicate key `{k}`")));
        }
    }
    Ok(fields)
}

fn field<'a>(fields: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str, FormatError> {
    fields
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| FormatError::Header(format!("missing `{key}`")))
}

fn number<T: std::str::FromStr>(fields: &BTreeMap<String, String>, key: &str) -> Result<T, FormatError> {
    let v = field(fields, key)?;
    v.parse()
        .map_err(|_| FormatError::Header(format!("`{key}={v}` is not a number")))
}

fn family_of(s: &str) -> Result<Family, FormatError> {
    Family::parse(s).ok_or_else(|| FormatError::Header(format!("unknown family `{s}`")))
}

fn check_layout(s: &str) -> Result<(), FormatError> {
    if s == LAYOUT {
        Ok(())
    } else {
        Err(FormatError::Header(format!("unsupported layout `{s}`")))
    }
}

pub fn dictionary_to_csv(d: &ScaledDictionary) -> String {
    let mut out = format!(
        "# {DICTIONARY_MAGIC}, family={}, q={}, scale_sq={}, layout={LAYOUT}\n",
        d.family(),
        d.q(),
        d.scale_sq()
    );
    for row in d.columns().to_dense() {
        let mut first = true;
        for v in row {
            if !first {
                out.push(',');
            }
            first = false;
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn vector_to_csv(x: &SparseVector, family: Family, q: usize) -> String {
    let mut out = format!(
        "# {VECTOR_MAGIC}, family={family}, q={q}, len={}, layout={LAYOUT}\n",
        x.len()
    );
    for &(i, v) in x.entries() {
        writeln!(out, "{i},{v}").unwrap();
    }
    out
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn dictionary_from_csv(text: &str) -> Result<ScaledDictionary, FormatError> {
    let header = text.lines().next().ok_or(FormatError::Empty)?;
    if header.trim().is_empty() {
        return Err(FormatError::Empty);
    }
    let fields = parse_header(header, DICTIONARY_MAGIC)?;
    let family = family_of(field(&fields, "family")?)?;
    let q: usize = number(&fields, "q")?;
    let scale_sq: u64 = number(&fields, "scale_sq")?;
    check_layout(field(&fields, "layout")?)?;
    family.validate_q(q)?;

    let rows = family.dimension(q);
    let cols = rows * (q + 1);
    let mut entries = Vec::with_capacity(rows * cols);
    let mut found = 0;
    for (line, l) in data_lines(text) {
        let before = entries.len();
        for tok in l.split(',') {
            let v: i64 = tok.trim().parse().map_err(|_| FormatError::Line {
                line,
                msg: format!("`{tok}` is not an integer"),
            })?;
            entries.push(v);
        }
        if entries.len() - before != cols {
            return Err(FormatError::Line {
                line,
                msg: format!("{} entries, expected {cols}", entries.len() - before),
            });
        }
        found += 1;
    }
    if found != rows {
        return Err(FormatError::RowCount { expected: rows, found });
    }
    let m = SignColumns::from_dense(rows, cols, &entries)?;
    Ok(ScaledDictionary::from_parts(family, q, scale_sq, m)?)
}

/// A parsed vector with the header context it was written for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedVector {
    pub family: Family,
    pub q: usize,
    pub vector: SparseVector,
}

pub fn vector_from_csv(text: &str) -> Result<TaggedVector, FormatError> {
    let header = text.lines().next().ok_or(FormatError::Empty)?;
    if header.trim().is_empty() {
        return Err(FormatError::Empty);
    }
    let fields = parse_header(header, VECTOR_MAGIC)?;
    let family = family_of(field(&fields, "family")?)?;
    let q: usize = number(&fields, "q")?;
    let len: usize = number(&fields, "len")?;
    check_layout(field(&fields, "layout")?)?;
    let mut entries = Vec::new();
    for (line, l) in data_lines(text) {
        let bad = |msg: String| FormatError::Line { line, msg };
        let (i, v) = l
            .split_once(',')
            .ok_or_else(|| bad(format!("`{l}` is not `index,value`")))?;
        let i: usize = i.trim().parse().map_err(|_| bad(format!("bad index `{i}`")))?;
        let v: i8 = match v.trim() {
            "1" | "+1" => 1,
            "-1" => -1,
            "0" => 0,
            other => return Err(bad(format!("value `{other}` is not in {{-1, 0, 1}}"))),
        };
        entries.push((i, v));
    }
    let vector = SparseVector::new(len, entries)?;
    Ok(TaggedVector { family, q, vector })
}

#[derive(Serialize, Deserialize)]
struct DictionaryJson {
    cols: usize,
    entries: Vec<Vec<i8>>,
    family: String,
    format: String,
    layout: String,
    q: usize,
    rows: usize,
    scale_sq: u64,
}

#[derive(Serialize, Deserialize)]
struct VectorJson {
    family: String,
    format: String,
    layout: String,
    len: usize,
    q: usize,
    support: Vec<(usize, i8)>,
}

pub fn dictionary_to_json(d: &ScaledDictionary) -> String {
    let doc = DictionaryJson {
        cols: d.n_cols(),
        entries: d.columns().to_dense(),
        family: d.family().to_string(),
        format: DICTIONARY_MAGIC.into(),
        layout: LAYOUT.into(),
        q: d.q(),
        rows: d.dimension(),
        scale_sq: d.scale_sq(),
    };
    let mut s = serde_json::to_string(&doc).expect("dictionary serializes");
    s.push('\n');
    s
}

pub fn vector_to_json(x: &SparseVector, family: Family, q: usize) -> String {
    let doc = VectorJson {
        family: family.to_string(),
        format: VECTOR_MAGIC.into(),
        layout: LAYOUT.into(),
        len: x.len(),
        q,
        support: x.entries().to_vec(),
    };
    let mut s = serde_json::to_string(&doc).expect("vector serializes");
    s.push('\n');
    s
}

fn dictionary_from_json(text: &str) -> Result<ScaledDictionary, FormatError> {
    let doc: DictionaryJson = serde_json::from_str(text)?;
    if doc.format != DICTIONARY_MAGIC {
        return Err(FormatError::Header(format!("format `{}`", doc.format)));
    }
    check_layout(&doc.layout)?;
    let family = family_of(&doc.family)?;
    if doc.entries.len() != doc.rows {
        return Err(FormatError::RowCount { expected: doc.rows, found: doc.entries.len() });
    }
    let mut flat = Vec::with_capacity(doc.rows * doc.cols);
    for (r, row) in doc.entries.iter().enumerate() {
        if row.len() != doc.cols {
            return Err(FormatError::Line {
                line: r + 1,
                msg: format!("{} entries, expected {}", row.len(), doc.cols),
            });
        }
        flat.extend(row.iter().map(|&v| i64::from(v)));
    }
    let m = SignColumns::from_dense(doc.rows, doc.cols, &flat)?;
    Ok(ScaledDictionary::from_parts(family, doc.q, doc.scale_sq, m)?)
}

fn vector_from_json(text: &str) -> Result<TaggedVector, FormatError> {
    let doc: VectorJson = serde_json::from_str(text)?;
    if doc.format != VECTOR_MAGIC {
        return Err(FormatError::Header(format!("format `{}`", doc.format)));
    }
    check_layout(&doc.layout)?;
    Ok(TaggedVector {
        family: family_of(&doc.family)?,
        q: doc.q,
        vector: SparseVector::new(doc.len, doc.support)?,
    })
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

/// Reads either encoding.
pub fn parse_dictionary(text: &str) -> Result<ScaledDictionary, FormatError> {
    if is_json(text) {
        dictionary_from_json(text)
    } else {
        dictionary_from_csv(text)
    }
}

/// Reads either encoding.
pub fn parse_vector(text: &str) -> Result<TaggedVector, FormatError> {
    if is_json(text) {
        vector_from_json(text)
    } else {
        vector_from_csv(text)
    }
}

pub fn write_dictionary(d: &ScaledDictionary, format: Format) -> String {
    match format {
        Format::Csv => dictionary_to_csv(d),
        Format::Json => dictionary_to_json(d),
    }
}

pub fn write_vector(x: &SparseVector, family: Family, q: usize, format: Format) -> String {
    match format {
        Format::Csv => vector_to_csv(x, family, q),
        Format::Json => vector_to_json(x, family, q),
    }
}
