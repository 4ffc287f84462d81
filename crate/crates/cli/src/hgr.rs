//! The `hgr` text format.
//!
//! ```text
//! c optional comment lines
//! p hg <n> <m>
//! <m lines, one edge each, space-separated 1-based vertex ids>
//! ```
//!
//! Blank lines are ignored. Emission is canonical: vertices ascending within
//! a line, lines in lexicographic order, every line newline-terminated.

use std::fmt::Write as _;

use hyperdom::{Hypergraph, HypergraphError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HgrError {
    #[error("line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("header declares {declared} edges but {found} edge lines follow")]
    CountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Build(#[from] HypergraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HgrDocument {
    pub comments: Vec<String>,
    pub n: usize,
    pub m: usize,
    pub edges: Vec<Vec<i64>>,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> HgrError {
    HgrError::SyntaxError {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into `(1-based column, token)` pairs.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - line.as_ptr() as usize + 1, t))
}

pub fn parse_document(text: &str) -> Result<HgrDocument, HgrError> {
    let mut comments = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "c" || trimmed.starts_with("c ") {
            if header.is_some() {
                return Err(syntax(lineno, 1, "comment after the header"));
            }
            comments.push(trimmed[1..].trim_start().to_string());
            continue;
        }
        let toks: Vec<(usize, &str)> = tokens(line).collect();
        if toks[0].1 == "p" {
            if header.is_some() {
                return Err(syntax(lineno, toks[0].0, "second header line"));
            }
            if toks.len() != 4 || toks[1].1 != "hg" {
                return Err(syntax(lineno, toks[0].0, "expected `p hg <n> <m>`"));
            }
            let num = |(col, t): (usize, &str)| {
                t.parse::<usize>()
                    .map_err(|_| syntax(lineno, col, format!("`{t}` is not a non-negative integer")))
            };
            header = Some((num(toks[2])?, num(toks[3])?));
            continue;
        }
        if header.is_none() {
            return Err(syntax(lineno, toks[0].0, "edge line before the `p hg` header"));
        }
        let mut edge = Vec::with_capacity(toks.len());
        for (col, t) in toks {
            let v = t
                .parse::<i64>()
                .map_err(|_| syntax(lineno, col, format!("`{t}` is not a vertex id")))?;
            edge.push(v);
        }
        edges.push(edge);
    }
    let Some((n, m)) = header else {
        return Err(syntax(text.lines().count().max(1), 1, "missing `p hg <n> <m>` header"));
    };
    if edges.len() != m {
        return Err(HgrError::CountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Ok(HgrDocument { comments, n, m, edges })
}

pub fn parse_hgr(text: &str) -> Result<Hypergraph, HgrError> {
    let doc = parse_document(text)?;
    Ok(Hypergraph::build(doc.n, &doc.edges)?)
}

pub fn emit_hgr(h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "p hg {} {}", h.n(), h.m()).unwrap();
    for e in h.edges() {
        let line: Vec<String> = e.vertices().iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperdom::families::make_f;

    #[test]
    fn parses_single_edge() {
        let h = parse_hgr("p hg 3 1\n1 2 3").unwrap();
        assert_eq!(h.edge_lists(), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn emits_f_canonically() {
        assert_eq!(emit_hgr(&make_f()), "p hg 6 4\n1 2 4\n1 3 6\n2 3 5\n4 5 6\n");
        assert_eq!(parse_hgr(&emit_hgr(&make_f())).unwrap(), make_f());
    }

    #[test]
    fn canonicalizes_messy_input() {
        let text = "c a comment\nc\n\np hg 6 4\n6 5 4\n3 1 6\n\n2 4 1\n5 3 2\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.comments, vec!["a comment".to_string(), String::new()]);
        assert_eq!(emit_hgr(&parse_hgr(text).unwrap()), emit_hgr(&make_f()));
    }

    #[test]
    fn count_mismatch() {
        assert_eq!(
            parse_hgr("p hg 3 2\n1 2 3"),
            Err(HgrError::CountMismatch { declared: 2, found: 1 })
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse_hgr("p hg 3 1\n1 x 3"),
            Err(syntax(2, 3, "`x` is not a vertex id"))
        );
        assert!(matches!(
            parse_hgr("1 2\np hg 2 1"),
            Err(HgrError::SyntaxError { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_hgr("p hg 3\n1 2"),
            Err(HgrError::SyntaxError { line: 1, .. })
        ));
        assert!(matches!(parse_hgr(""), Err(HgrError::SyntaxError { .. })));
        assert!(matches!(
            parse_hgr("p hg 3 1\np hg 3 1\n1 2"),
            Err(HgrError::SyntaxError { line: 2, .. })
        ));
    }

    #[test]
    fn build_errors_propagate() {
        assert!(matches!(
            parse_hgr("p hg 3 1\n1 4"),
            Err(HgrError::Build(HypergraphError::OutOfRangeVertex { .. }))
        ));
        assert!(matches!(
            parse_hgr("p hg 3 1\n2"),
            Err(HgrError::Build(HypergraphError::EdgeTooSmall { .. }))
        ));
    }
}
