//! Line-oriented encoding of block specs.
//!
//! ```text
//! # comment
//! block f
//! block hhat 2,1,2        # profile entries, upper triangle row-major
//! extra1 1 2 3            # extra edge on the latest hhat block (2 or 3 ids)
//! extra2 1 2 5            # {x, x', s} edge on the latest hhat block
//! block hhat 1,1,1
//! z1 2 1 2 3 3            # from-block, two X ids, to-block, X id
//! z2 3 1 2 2 8            # from-block, two X ids, to-block, S id
//! ```
//!
//! Blocks are numbered from 1 in file order; vertex ids are block-local.
//! Everything after `#` on a line is ignored.

use std::fmt::Write as _;

use hyperdom::families::{Block, CrossEdge, G3Spec, Hhat3Spec, MatrixProfile};
use hyperdom::VertexId;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    SpecSyntax { line: usize, message: String },
    #[error("expected exactly one hhat block and no cross edges")]
    NotSingleBlock,
}

fn err(line: usize, message: impl Into<String>) -> SpecError {
    SpecError::SpecSyntax {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, toks: &[&str]) -> Result<Vec<u32>, SpecError> {
    toks.iter()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| err(line, format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

pub fn parse_g3_spec(text: &str) -> Result<G3Spec, SpecError> {
    let mut spec = G3Spec {
        blocks: Vec::new(),
        z1: Vec::new(),
        z2: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some((&head, rest)) = toks.split_first() else {
            continue;
        };
        match head {
            "block" => match rest {
                ["f"] => spec.blocks.push(Block::F),
                ["hhat", csv] => {
                    let entries = csv
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<usize>()
                                .map_err(|_| err(line, format!("bad entry `{t}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let profile = MatrixProfile::from_entries(entries).map_err(|e| err(line, e.to_string()))?;
                    spec.blocks.push(Block::Hhat(Hhat3Spec::plain(profile)));
                }
                _ => return Err(err(line, "expected `block f` or `block hhat <entries>`")),
            },
            "extra1" | "extra2" => {
                let ids = numbers(line, rest)?;
                let Some(Block::Hhat(block)) = spec.blocks.last_mut() else {
                    return Err(err(line, format!("`{head}` must follow a hhat block")));
                };
                if head == "extra1" {
                    if !(2..=3).contains(&ids.len()) {
                        return Err(err(line, "extra1 takes 2 or 3 vertex ids"));
                    }
                    block.extra1.push(ids);
                } else {
                    let edge: [VertexId; 3] = ids.try_into().map_err(|_| err(line, "extra2 takes 3 vertex ids"))?;
                    block.extra2.push(edge);
                }
            }
            "z1" | "z2" => {
                let ids = numbers(line, rest)?;
                let [from, a, b, to, third] = ids[..] else {
                    return Err(err(line, format!("{head} takes 5 numbers")));
                };
                let count = spec.blocks.len() as u32;
                for k in [from, to] {
                    if k == 0 || k > count {
                        return Err(err(line, format!("block {k} is not defined above")));
                    }
                }
                let edge = CrossEdge {
                    from: from as usize - 1,
                    pair: [a, b],
                    to: to as usize - 1,
                    third,
                };
                if head == "z1" {
                    spec.z1.push(edge);
                } else {
                    spec.z2.push(edge);
                }
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    if spec.blocks.is_empty() {
        return Err(err(text.lines().count().max(1), "no blocks"));
    }
    Ok(spec)
}

/// Parses a file that must describe exactly one Ĥ₃ block.
pub fn parse_hhat3_spec(text: &str) -> Result<Hhat3Spec, SpecError> {
    let mut spec = parse_g3_spec(text)?;
    match (spec.blocks.len(), spec.z1.is_empty() && spec.z2.is_empty()) {
        (1, true) => match spec.blocks.pop() {
            Some(Block::Hhat(h)) => Ok(h),
            _ => Err(SpecError::NotSingleBlock),
        },
        _ => Err(SpecError::NotSingleBlock),
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn emit_g3_spec(spec: &G3Spec) -> String {
    let mut out = String::new();
    for block in &spec.blocks {
        match block {
            Block::F => out.push_str("block f\n"),
            Block::Hhat(h) => {
                writeln!(out, "block hhat {}", join(h.profile.entries(), ",")).unwrap();
                for e in &h.extra1 {
                    writeln!(out, "extra1 {}", join(e, " ")).unwrap();
                }
                for e in &h.extra2 {
                    writeln!(out, "extra2 {}", join(e, " ")).unwrap();
                }
            }
        }
    }
    for (head, edges) in [("z1", &spec.z1), ("z2", &spec.z2)] {
        for c in edges {
            writeln!(
                out,
                "{head} {} {} {} {} {}",
                c.from + 1,
                c.pair[0],
                c.pair[1],
                c.to + 1,
                c.third
            )
            .unwrap();
        }
    }
    out
}
