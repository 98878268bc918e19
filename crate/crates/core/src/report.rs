//! Report and weight files.
//!
//! Every file the tool writes is one pretty-printed JSON object:
//!
//! ```text
//! {
//!   "tool": "neuromem",
//!   "tool_version": "0.1.0",
//!   "format_version": 1,
//!   "config": { "command": "...", ...every flag... },
//!   "seed": 42 | null,
//!   "result": { ...command specific... }
//! }
//! ```
//!
//! Object keys appear in a fixed order, floats use the shortest
//! round-tripping decimal form, and nothing time- or host-dependent is
//! recorded, so equal configurations produce byte-identical files. A weight
//! file is the report of `train`; its `result.weights` holds the matrix rows.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::read_file;
use crate::hebbian::InterconnectionMatrix;

pub const TOOL_NAME: &str = "neuromem";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report<'a, C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub format_version: u32,
    pub config: &'a C,
    pub seed: Option<u64>,
    pub result: R,
}

impl<'a, C: Serialize, R: Serialize> Report<'a, C, R> {
    pub fn new(config: &'a C, seed: Option<u64>, result: R) -> Self {
        Report {
            tool: TOOL_NAME,
            tool_version: TOOL_VERSION,
            format_version: FORMAT_VERSION,
            config,
            seed,
            result,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainResult {
    pub n: usize,
    pub memory_count: usize,
    /// 1-based pairs of identical memories.
    pub duplicates: Vec<(usize, usize)>,
    pub weights: InterconnectionMatrix,
}

#[derive(Deserialize)]
struct WeightFile {
    tool: String,
    format_version: u32,
    result: TrainResult,
}

pub fn parse_weights_str(text: &str, source: &str) -> Result<TrainResult> {
    let file: WeightFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.tool != TOOL_NAME || file.format_version != FORMAT_VERSION {
        return Err(Error::Parse {
            path: source.to_string(),
            line: 1,
            column: 1,
            message: format!(
                "not a {TOOL_NAME} format {FORMAT_VERSION} weight file (tool {:?}, format {})",
                file.tool, file.format_version
            ),
        });
    }
    if file.result.n != file.result.weights.n() {
        return Err(Error::dim(format!(
            "{source}: header says n = {}, matrix is {}x{}",
            file.result.n,
            file.result.weights.n(),
            file.result.weights.n()
        )));
    }
    Ok(file.result)
}

pub fn parse_weights(path: &Path) -> Result<TrainResult> {
    parse_weights_str(&read_file(path)?, &path.display().to_string())
}
