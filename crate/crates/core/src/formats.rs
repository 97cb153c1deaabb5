//! Text formats shared by the library and the command line tool.
//!
//! Poset files: a header line `n <count>` followed by one `child parent`
//! cover pair per line. Integer set files: one integer per line. `#` starts
//! a comment in both; blank lines are ignored. All output uses LF endings,
//! and numbers in JSON reports are rendered as decimal strings so that big
//! integers and exact rationals survive the round trip.

use crate::poset::{Poset, PosetError};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    BadPoset {
        line: usize,
        #[source]
        source: PosetError,
    },
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            None
        } else {
            Some((idx + 1, stripped))
        }
    })
}

/// Parses the poset text format.
pub fn parse_poset(text: &str) -> Result<Poset, FormatError> {
    let mut lines = significant_lines(text);
    let (header_line, header) = lines.next().ok_or(FormatError::Syntax {
        line: 1,
        msg: "missing header line 'n <count>'".into(),
    })?;
    let mut parts = header.split_whitespace();
    let n = match (parts.next(), parts.next(), parts.next()) {
        (Some("n"), Some(count), None) => {
            count.parse::<usize>().map_err(|_| FormatError::Syntax {
                line: header_line,
                msg: format!("bad element count '{count}'"),
            })?
        }
        _ => {
            return Err(FormatError::Syntax {
                line: header_line,
                msg: format!("expected 'n <count>', got '{header}'"),
            })
        }
    };
    let mut covers = Vec::new();
    let mut last_line = header_line;
    for (line, body) in lines {
        last_line = line;
        let mut parts = body.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                let child = a.parse::<usize>().map_err(|_| FormatError::Syntax {
                    line,
                    msg: format!("bad element '{a}'"),
                })?;
                let parent = b.parse::<usize>().map_err(|_| FormatError::Syntax {
                    line,
                    msg: format!("bad element '{b}'"),
                })?;
                covers.push((child, parent));
            }
            _ => {
                return Err(FormatError::Syntax {
                    line,
                    msg: format!("expected 'child parent', got '{body}'"),
                })
            }
        }
    }
    Poset::from_covers(n, &covers).map_err(|source| FormatError::BadPoset {
        line: last_line,
        source,
    })
}

/// Emits the poset text format with covers sorted lexicographically.
pub fn emit_poset(p: &Poset) -> String {
    let mut out = format!("n {}\n", p.n());
    for &(c, q) in p.covers() {
        out.push_str(&format!("{c} {q}\n"));
    }
    out
}

/// Parses one positive integer per line.
pub fn parse_int_set(text: &str) -> Result<Vec<BigInt>, FormatError> {
    let mut out = Vec::new();
    for (line, body) in significant_lines(text) {
        for token in body.split_whitespace() {
            let value = BigInt::from_str(token).map_err(|_| FormatError::Syntax {
                line,
                msg: format!("bad integer '{token}'"),
            })?;
            out.push(value);
        }
    }
    if out.is_empty() {
        return Err(FormatError::Syntax {
            line: 1,
            msg: "no integers found".into(),
        });
    }
    Ok(out)
}

pub fn emit_int_set(xs: &[BigInt]) -> String {
    let mut out = String::new();
    for x in xs {
        out.push_str(&x.to_string());
        out.push('\n');
    }
    out
}

/// DOT digraph of the Hasse diagram, edges child -> parent, one `rank=same`
/// group per height level. Node names are indices; `labels` overrides the
/// displayed text.
pub fn emit_dot(p: &Poset, labels: Option<&[String]>) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
    for i in 0..p.n() {
        let label = match labels {
            Some(ls) => ls.get(i).cloned().unwrap_or_else(|| i.to_string()),
            None => i.to_string(),
        };
        out.push_str(&format!("  v{i} [label=\"{label}\"];\n"));
    }
    let heights = p.heights();
    let max_h = heights.iter().copied().max().unwrap_or(0);
    for h in 0..=max_h {
        let level: Vec<String> = (0..p.n())
            .filter(|&i| heights[i] == h)
            .map(|i| format!("v{i}"))
            .collect();
        if level.len() > 1 {
            out.push_str(&format!("  {{ rank=same; {}; }}\n", level.join("; ")));
        }
    }
    for &(c, q) in p.covers() {
        out.push_str(&format!("  v{c} -> v{q};\n"));
    }
    out.push_str("}\n");
    out
}

/// Renders an exact rational as `p/q` (or just `p` for integers).
pub fn rational_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Envelope for machine-readable command output. All numeric payload values
/// are decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
}

impl Report {
    pub const SCHEMA_VERSION: &'static str = "1";

    pub fn new(command: &str, inputs: serde_json::Value, results: serde_json::Value) -> Self {
        Report {
            schema_version: Self::SCHEMA_VERSION.into(),
            command: command.into(),
            inputs,
            results,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_chain() {
        let p = parse_poset("n 2\n0 1\n").unwrap();
        assert_eq!(p.n(), 2);
        assert!(p.leq(0, 1));
    }

    #[test]
    fn parse_with_comments_and_blanks() {
        let text = "# a diamond\nn 4\n\n0 1  # bottom to left\n0 2\n1 3\n2 3\n";
        let p = parse_poset(text).unwrap();
        assert_eq!(p.covers().len(), 4);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_poset("n 2\n0 x\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }));
        let err = parse_poset("poset 2\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 1, .. }));
        let err = parse_poset("n 2\n0 5\n").unwrap_err();
        assert!(matches!(
            err,
            FormatError::BadPoset {
                source: PosetError::BadElement(0, 5),
                ..
            }
        ));
    }

    #[test]
    fn poset_round_trip() {
        let text = "n 4\n0 1\n0 2\n1 3\n2 3\n";
        let p = parse_poset(text).unwrap();
        assert_eq!(emit_poset(&p), text);
        let q = parse_poset(&emit_poset(&p)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn cube_emits_thirteen_lines() {
        let cube = crate::enumeration::Class8::J.representative();
        let text = emit_poset(&cube);
        assert_eq!(text.lines().count(), 13); // header + 12 cover pairs
    }

    #[test]
    fn int_set_round_trip() {
        let text = "1\n3\n5\n45\n";
        let xs = parse_int_set(text).unwrap();
        assert_eq!(xs.len(), 4);
        assert_eq!(emit_int_set(&xs), text);
        assert!(parse_int_set("# nothing\n").is_err());
    }

    #[test]
    fn dot_output_shape() {
        let p = parse_poset("n 2\n0 1\n").unwrap();
        let dot = emit_dot(&p, None);
        assert!(dot.contains("v0 -> v1;"));
        assert_eq!(dot.matches("->").count(), 1);

        let diamond = parse_poset("n 4\n0 1\n0 2\n1 3\n2 3\n").unwrap();
        let labels: Vec<String> = ["1", "3", "5", "45"].iter().map(|s| s.to_string()).collect();
        let dot = emit_dot(&diamond, Some(&labels));
        assert_eq!(dot.matches("->").count(), 4);
        assert!(dot.contains("label=\"45\""));
        // deterministic
        assert_eq!(dot, emit_dot(&diamond, Some(&labels)));
    }

    #[test]
    fn report_round_trip() {
        let r = Report::new(
            "analyze",
            serde_json::json!({"set": ["1", "3"]}),
            serde_json::json!({"det": "22/45"}),
        );
        let s = r.to_json_pretty();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(r, back);
    }

    #[test]
    fn rational_strings() {
        use num_traits::One;
        let r = BigRational::new(BigInt::from(22), BigInt::from(45));
        assert_eq!(rational_string(&r), "22/45");
        assert_eq!(rational_string(&BigRational::one()), "1");
    }
}
