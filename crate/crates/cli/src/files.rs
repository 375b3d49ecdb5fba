//! On-disk formats: frame files, matrix files, and their digests.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use frameweave::{Frame, Matrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// `{"dim": n, "vectors": [[...], ...], "name": "..."}`
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
    #[serde(default)]
    pub name: Option<String>,
}

/// `{"rows": [[...], ...]}`, a dense matrix in row order.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub struct Loaded<T> {
    pub value: T,
    pub digest: InputDigest,
}

fn read(path: &Path) -> Result<(Vec<u8>, InputDigest), CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    };
    Ok((bytes, digest))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    serde_json::from_slice(bytes).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_frame(path: &Path) -> Result<Loaded<Frame>, CliError> {
    let (bytes, digest) = read(path)?;
    let file: FrameFile = parse(path, &bytes)?;
    let value = file.to_frame()?;
    Ok(Loaded { value, digest })
}

pub fn load_matrix(path: &Path) -> Result<Loaded<Matrix>, CliError> {
    let (bytes, digest) = read(path)?;
    let file: MatrixFile = parse(path, &bytes)?;
    let cols = file.rows.first().map_or(0, Vec::len);
    if file.rows.is_empty() || cols == 0 || file.rows.iter().any(|r| r.len() != cols) {
        return Err(CliError::Usage(format!(
            "{}: matrix rows must be nonempty and of equal length",
            path.display()
        )));
    }
    let value = Matrix::from_rows(&file.rows);
    value.ensure_finite()?;
    Ok(Loaded { value, digest })
}

impl FrameFile {
    pub fn from_frame(frame: &Frame, name: Option<String>) -> Self {
        Self {
            dim: frame.dim(),
            vectors: frame.vectors(),
            name,
        }
    }

    pub fn to_frame(&self) -> Result<Frame, CliError> {
        Ok(Frame::new(self.dim, self.vectors.clone())?)
    }

    /// One vector per line. Numbers use the shortest representation that
    /// parses back to the same `f64`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            let quoted = serde_json::to_string(name).expect("strings serialize");
            writeln!(out, "  \"name\": {quoted},").unwrap();
        }
        writeln!(out, "  \"dim\": {},", self.dim).unwrap();
        out.push_str("  \"vectors\": [\n");
        for (k, v) in self.vectors.iter().enumerate() {
            let nums: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
            let sep = if k + 1 < self.vectors.len() { "," } else { "" };
            writeln!(out, "    [{}]{sep}", nums.join(", ")).unwrap();
        }
        out.push_str("  ]\n}\n");
        out
    }
}
