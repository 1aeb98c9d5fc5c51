//! Contraction-path exchange: `{"path": [3, 0, 1, 2], "score": "1234"}`.
//!
//! The score is a decimal string because it can exceed 64 bits. Other fields
//! are ignored on read, so a `path` command record is itself a valid file.

use serde::{Deserialize, Serialize};

use crate::format::FormatError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFile {
    pub path: Vec<usize>,
    pub score: String,
}

impl PathFile {
    pub fn new(path: Vec<usize>, score: u128) -> Self {
        PathFile {
            path,
            score: score.to_string(),
        }
    }

    pub fn score(&self) -> Result<u128, FormatError> {
        self.score.parse().map_err(|_| FormatError::Invalid {
            at: "score".into(),
            message: format!("'{}' is not a decimal integer", self.score),
        })
    }
}

/// Reads the first JSON value of `text`.
pub fn parse_path(text: &str) -> Result<PathFile, FormatError> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let p: PathFile = serde_json::from_str(first).or_else(|_| serde_json::from_str(text))?;
    p.score()?;
    Ok(p)
}
