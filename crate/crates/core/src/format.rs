//! Text formats: memory files, proximity files, and the inline syntaxes used
//! on the command line.
//!
//! Memory file: one memory per line, whitespace-separated `1` / `-1`
//! tokens (`+1` is accepted too). Proximity file: `n` lines of `n` decimal
//! reals. In both, `#` starts a comment and blank lines are skipped.

use std::path::Path;

use crate::bipolar::{validate_memory_set, Bipolar, BipolarVector, MemorySet};
use crate::error::{Error, Result};
use crate::proximity::ProximityMatrix;

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Non-comment tokens of each content line as `(line, column, token)`,
/// 1-based, column counted in characters.
fn tokenize(text: &str) -> Vec<(usize, Vec<(usize, &str)>)> {
    let mut lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        for (byte, ch) in content
            .char_indices()
            .chain(std::iter::once((content.len(), ' ')))
        {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    let column = content[..s].chars().count() + 1;
                    tokens.push((column, &content[s..byte]));
                }
            } else if start.is_none() {
                start = Some(byte);
            }
        }
        if !tokens.is_empty() {
            lines.push((lineno + 1, tokens));
        }
    }
    lines
}

fn parse_bipolar_token(tok: &str) -> Option<Bipolar> {
    match tok {
        "1" | "+1" => Some(Bipolar::Pos),
        "-1" => Some(Bipolar::Neg),
        _ => None,
    }
}

pub fn parse_memories_str(text: &str, source: &str) -> Result<MemorySet> {
    let mut memories: Vec<BipolarVector> = Vec::new();
    let mut first_line = 0;
    for (line, tokens) in tokenize(text) {
        let mut values = Vec::with_capacity(tokens.len());
        for (column, tok) in &tokens {
            let b = parse_bipolar_token(tok).ok_or_else(|| Error::Parse {
                path: source.to_string(),
                line,
                column: *column,
                message: format!("unexpected token {tok:?}, expected 1 or -1"),
            })?;
            values.push(b);
        }
        if let Some(first) = memories.first() {
            if first.len() != values.len() {
                return Err(Error::dim(format!(
                    "{source}: line {line} has {} values, line {first_line} has {}",
                    values.len(),
                    first.len()
                )));
            }
        } else {
            first_line = line;
        }
        memories.push(BipolarVector::new(values)?);
    }
    if memories.is_empty() {
        return Err(Error::param(format!("{source}: no memories found")));
    }
    validate_memory_set(memories)
}

pub fn parse_memories(path: &Path) -> Result<MemorySet> {
    parse_memories_str(&read_file(path)?, &path.display().to_string())
}

/// Renders memories in the memory file format.
pub fn write_memories(memories: &[BipolarVector]) -> String {
    let mut out = String::new();
    for m in memories {
        let line: Vec<String> = m.iter().map(|b| b.value().to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_proximity_str(text: &str, source: &str) -> Result<ProximityMatrix> {
    let mut rows = Vec::new();
    for (line, tokens) in tokenize(text) {
        let row = tokens
            .iter()
            .map(|(column, tok)| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|d| d.is_finite() && *d >= 0.0)
                    .ok_or_else(|| Error::Parse {
                        path: source.to_string(),
                        line,
                        column: *column,
                        message: format!("unexpected token {tok:?}, expected a nonnegative number"),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    ProximityMatrix::new(rows).map_err(|e| match e {
        Error::Dimension(msg) => Error::Dimension(format!("{source}: {msg}")),
        Error::Parameter(msg) => Error::Parameter(format!("{source}: {msg}")),
        other => other,
    })
}

pub fn parse_proximity(path: &Path) -> Result<ProximityMatrix> {
    parse_proximity_str(&read_file(path)?, &path.display().to_string())
}

/// A state written inline, entries separated by commas and/or whitespace.
pub fn parse_state(text: &str) -> Result<BipolarVector> {
    let values = inline_items(text)
        .map(|(column, tok)| {
            parse_bipolar_token(tok).ok_or_else(|| inline_error("--state", column, tok, "1 or -1"))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(inline_error("--state", 1, "", "at least one value"));
    }
    BipolarVector::new(values)
}

/// `index:value` pairs with 1-based indices, e.g. `1:+1,4:-1`. Returns
/// 0-based indices.
pub fn parse_start(text: &str) -> Result<Vec<(usize, Bipolar)>> {
    let pairs = inline_items(text)
        .map(|(column, tok)| {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| inline_error("--start", column, tok, "INDEX:VALUE"))?;
            let idx: usize =
                idx.parse().ok().filter(|&i| i >= 1).ok_or_else(|| {
                    inline_error("--start", column, tok, "a 1-based neuron index")
                })?;
            let val = parse_bipolar_token(val)
                .ok_or_else(|| inline_error("--start", column, tok, "value +1 or -1"))?;
            Ok((idx - 1, val))
        })
        .collect::<Result<Vec<_>>>()?;
    if pairs.is_empty() {
        return Err(Error::param("--start needs at least one INDEX:VALUE pair"));
    }
    Ok(pairs)
}

pub fn parse_usize_list(text: &str, what: &str) -> Result<Vec<usize>> {
    inline_items(text)
        .map(|(column, tok)| {
            tok.parse()
                .map_err(|_| inline_error(what, column, tok, "a nonnegative integer"))
        })
        .collect()
}

pub fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>> {
    inline_items(text)
        .map(|(column, tok)| {
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| inline_error(what, column, tok, "a finite number"))
        })
        .collect()
}

fn inline_items(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut column = 1;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .map(move |tok| {
            let c = column;
            column += tok.chars().count() + 1;
            (c, tok)
        })
        .filter(|(_, tok)| !tok.is_empty())
}

fn inline_error(what: &str, column: usize, tok: &str, expected: &str) -> Error {
    Error::Parse {
        path: what.to_string(),
        line: 1,
        column,
        message: format!("unexpected token {tok:?}, expected {expected}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ErrorKind;

    #[test]
    fn memory_file_basics() {
        let set = parse_memories_str("1 1 -1 1\n", "m").unwrap();
        assert_eq!(set.memories()[0].to_ints(), vec![1, 1, -1, 1]);

        let text = "# two memories\n\n1 1 1 1   # first\n  1 -1 1 -1\n#\n";
        let set = parse_memories_str(text, "m").unwrap();
        assert_eq!(set.m(), 2);
        assert_eq!(set.n(), 4);
    }

    #[test]
    fn memory_file_bad_token_reports_position() {
        let err = parse_memories_str("1 1 1\n1 2 1\n", "mem.txt").unwrap_err();
        match &err {
            Error::Parse {
                line,
                column,
                message,
                ..
            } => {
                assert_eq!((*line, *column), (2, 3));
                assert!(message.contains("\"2\""));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn memory_file_width_mismatch() {
        let err = parse_memories_str("1 1 1\n1 -1\n", "m").unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Dimension);
        let err = parse_memories_str("# nothing\n", "m").unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Parameter);
    }

    #[test]
    fn memory_round_trip() {
        let text = "1 -1 1\n-1 -1 1\n";
        let set = parse_memories_str(text, "m").unwrap();
        assert_eq!(write_memories(set.memories()), text);
    }

    #[test]
    fn proximity_file() {
        let p = parse_proximity_str("0 1 1\n1 0 1\n1 1 0\n", "p").unwrap();
        assert_eq!(p.n(), 3);
        let err = parse_proximity_str("0 1\n1.5 0\n", "p").unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Parameter);
        assert!(err.to_string().contains("(1, 2)"), "{err}");
        let err = parse_proximity_str("0 1 1 1\n1 0 1 1\n1 1 0 1\n", "p").unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Dimension);
        let err = parse_proximity_str("0 x\n1 0\n", "p").unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 1,
                column: 3,
                ..
            }
        ));
        let err = parse_proximity_str("0 -1\n-1 0\n", "p").unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Parse);
    }

    #[test]
    fn inline_syntaxes() {
        assert_eq!(parse_state("1,-1, 1").unwrap().to_ints(), vec![1, -1, 1]);
        assert!(parse_state("1,0").is_err());
        assert!(parse_state("").is_err());
        assert_eq!(
            parse_start("1:+1,4:-1").unwrap(),
            vec![(0, Bipolar::Pos), (3, Bipolar::Neg)]
        );
        assert!(matches!(
            parse_start("1:+1,0:-1").unwrap_err(),
            Error::Parse { column: 6, .. }
        ));
        assert!(parse_start("1+1").is_err());
        assert!(parse_start("2:1,3:x").is_err());
        assert_eq!(
            parse_usize_list("5,10, 15", "--m-list").unwrap(),
            vec![5, 10, 15]
        );
        assert_eq!(
            parse_f64_list("0.6,-0.8", "--amps").unwrap(),
            vec![0.6, -0.8]
        );
        assert!(parse_f64_list("0.6,nan", "--amps").is_err());
    }
}
