//! Plain-text instance files.
//!
//! ```text
//! veto-instance v1
//! a 5
//! b 5
//! c 6
//! W 1 1
//! ```
//!
//! Lines starting with `#` and blank lines are skipped. A comment of the form
//! `# n <int>` records the number of sincere voters, which is metadata only.

use std::fmt::Write as _;
use thiserror::Error;
use veto_manip::election::ManipulationInstance;

pub const HEADER: &str = "veto-instance v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceFileError {
    #[error("empty instance file")]
    Empty,
    #[error("line {line}: expected header `{HEADER}`, found `{found}`")]
    Header { line: usize, found: String },
    #[error("line {line}: expected field `{expected}`, found `{found}`")]
    Field {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: field `{field}`: `{value}` is not a non-negative integer")]
    Number {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: field `{field}` takes exactly one value")]
    Arity { line: usize, field: &'static str },
    #[error("line {line}: coalition weights must be positive")]
    ZeroWeight { line: usize },
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("line {line}: unexpected content after the `W` line")]
    Trailing { line: usize },
}

fn parse_number(line: usize, field: &'static str, value: &str) -> Result<u64, InstanceFileError> {
    value.parse().map_err(|_| InstanceFileError::Number {
        line,
        field,
        value: value.to_string(),
    })
}

pub fn parse_instance(text: &str) -> Result<ManipulationInstance, InstanceFileError> {
    let mut voters = 0u32;
    let mut content = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            if let (Some("n"), Some(value), None) = (parts.next(), parts.next(), parts.next()) {
                if let Ok(n) = value.parse() {
                    voters = n;
                }
            }
            continue;
        }
        if !trimmed.is_empty() {
            content.push((line, trimmed));
        }
    }

    let mut lines = content.into_iter();
    let (line, header) = lines.next().ok_or(InstanceFileError::Empty)?;
    if header != HEADER {
        return Err(InstanceFileError::Header {
            line,
            found: header.to_string(),
        });
    }

    let mut scalar = |field: &'static str| -> Result<u64, InstanceFileError> {
        let (line, text) = lines.next().ok_or(InstanceFileError::Missing(field))?;
        let mut parts = text.split_whitespace();
        if parts.next() != Some(field) {
            return Err(InstanceFileError::Field {
                line,
                expected: field,
                found: text.to_string(),
            });
        }
        let value = parts.next().ok_or(InstanceFileError::Arity { line, field })?;
        if parts.next().is_some() {
            return Err(InstanceFileError::Arity { line, field });
        }
        parse_number(line, field, value)
    };
    let a = scalar("a")?;
    let b = scalar("b")?;
    let c = scalar("c")?;

    let (line, text) = lines.next().ok_or(InstanceFileError::Missing("W"))?;
    let mut parts = text.split_whitespace();
    if parts.next() != Some("W") {
        return Err(InstanceFileError::Field {
            line,
            expected: "W",
            found: text.to_string(),
        });
    }
    let coalition = parts
        .map(|v| parse_number(line, "W", v))
        .collect::<Result<Vec<_>, _>>()?;
    if coalition.contains(&0) {
        return Err(InstanceFileError::ZeroWeight { line });
    }
    if let Some((line, _)) = lines.next() {
        return Err(InstanceFileError::Trailing { line });
    }

    Ok(ManipulationInstance::new(a, b, c, coalition)
        .expect("weights checked positive")
        .with_voters(voters))
}

pub fn format_instance(instance: &ManipulationInstance) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "a {}", instance.a()).unwrap();
    writeln!(out, "b {}", instance.b()).unwrap();
    writeln!(out, "c {}", instance.c()).unwrap();
    out.push('W');
    for w in instance.coalition() {
        write!(out, " {w}").unwrap();
    }
    out.push('\n');
    if instance.n() > 0 {
        writeln!(out, "# n {}", instance.n()).unwrap();
    }
    out
}
