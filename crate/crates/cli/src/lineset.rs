//! The line-set interchange format: `{q, form: "parabolic-6", lines}` with
//! each line given by two 7-entry vectors of GF(q) base positions in the
//! coordinates of the parabolic slice.

use std::fmt;

use cayley_core::{Field, FieldElement, Subspace, Vector};
use serde::{Deserialize, Serialize};

pub const FORM: &str = "parabolic-6";
pub const WIDTH: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSetFile {
    pub q: usize,
    pub form: String,
    pub lines: Vec<[Vec<usize>; 2]>,
}

#[derive(Debug)]
pub enum LineSetError {
    Parse(serde_json::Error),
    Form(String),
    FieldMismatch { file: usize, field: usize },
    Width { line: usize, len: usize },
    Entry { line: usize, value: usize },
    /// The two vectors do not span a line.
    Rank { line: usize },
}

impl fmt::Display for LineSetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineSetError::Parse(e) => write!(f, "parse error: {e}"),
            LineSetError::Form(s) => write!(f, "unsupported form {s:?}, expected {FORM:?}"),
            LineSetError::FieldMismatch { file, field } => write!(f, "file is over GF({file}), run is over GF({field})"),
            LineSetError::Width { line, len } => write!(f, "line {line}: vector of length {len}, expected {WIDTH}"),
            LineSetError::Entry { line, value } => write!(f, "line {line}: entry {value} is not an element of GF(q)"),
            LineSetError::Rank { line } => write!(f, "line {line}: vectors do not span a line"),
        }
    }
}

impl std::error::Error for LineSetError {}

fn encode_vector(f: &Field, v: &Vector) -> Vec<usize> {
    v.as_slice().iter().map(|&x| f.base_position(x).expect("coordinates lie in GF(q)")).collect()
}

pub fn encode(f: &Field, lines: &[Subspace]) -> LineSetFile {
    let lines = lines
        .iter()
        .map(|l| {
            let r = l.rows();
            [encode_vector(f, &r[0]), encode_vector(f, &r[1])]
        })
        .collect();
    LineSetFile { q: f.q(), form: FORM.into(), lines }
}

pub fn parse(text: &str) -> Result<LineSetFile, LineSetError> {
    serde_json::from_str(text).map_err(LineSetError::Parse)
}

pub fn decode(f: &Field, file: &LineSetFile) -> Result<Vec<Subspace>, LineSetError> {
    if file.form != FORM {
        return Err(LineSetError::Form(file.form.clone()));
    }
    if file.q != f.q() {
        return Err(LineSetError::FieldMismatch { file: file.q, field: f.q() });
    }
    let vector = |line: usize, xs: &[usize]| -> Result<Vector, LineSetError> {
        if xs.len() != WIDTH {
            return Err(LineSetError::Width { line, len: xs.len() });
        }
        let elems: Vec<FieldElement> = xs
            .iter()
            .map(|&x| f.from_base_position(x).ok_or(LineSetError::Entry { line, value: x }))
            .collect::<Result<_, _>>()?;
        Ok(Vector::from_slice(&elems))
    };
    file.lines
        .iter()
        .enumerate()
        .map(|(i, [a, b])| {
            let s = Subspace::span(f, WIDTH, [vector(i, a)?, vector(i, b)?]);
            if s.rank() != 2 {
                return Err(LineSetError::Rank { line: i });
            }
            Ok(s)
        })
        .collect()
}

pub fn to_json(file: &LineSetFile) -> String {
    let mut s = serde_json::to_string(file).expect("line set serialises");
    s.push('\n');
    s
}

