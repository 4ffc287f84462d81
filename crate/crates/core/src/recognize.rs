//! Structural recognition of rank-3 hypergraphs with γ = 2ν.
//!
//! The test runs in polynomial time and decomposes the input into blocks:
//!
//! 1. The rank must be exactly 3.
//! 2. A connected component isomorphic to F is an F block. F blocks take no
//!    cross edges, so nothing else is checked for them.
//! 3. In the rest, every degree-1 vertex sits in a 3-edge whose two other
//!    vertices have degree at least 2. Those two vertices span an edge of the
//!    spine quotient, whose components must be complete graphs of odd order.
//!    They are the X sets of the Ĥ₃ blocks.
//! 4. Every other vertex is a middle. It must lie in an edge with two X
//!    vertices of one block. Its home is the least such block and its spine
//!    is the least such edge there.
//! 5. Each edge must be a spine, an extra edge inside one block, or a cross
//!    edge of type z1 or z2.
//! 6. Every X pair must keep a degree-1 middle, which becomes its designated
//!    middle.
//!
//! An accepted input comes with a [`BlockDecomposition`] that converts back
//! into a [`G3Spec`] plus a relabeling.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{self, SolveError};
use crate::families::{Block, CrossEdge, G3Spec, Hhat3Spec, MatrixProfile};
use crate::hypergraph::{Hypergraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("vertex {0} is isolated")]
    IsolatedVertex(VertexId),
    #[error("hypergraph has no edges")]
    NoEdges,
    #[error("structural answer {structural} disagrees with oracle answer {oracle} on {instance:?}")]
    Disagreement {
        structural: bool,
        oracle: bool,
        instance: Hypergraph,
    },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTag {
    Spine,
    Extra1,
    Extra2,
    Z1,
    Z2,
    FInternal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub i: VertexId,
    pub j: VertexId,
    /// Middles whose spine is `{i, v, j}`, designated first.
    pub middles: Vec<VertexId>,
    pub designated: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HhatWitness {
    pub x: Vec<VertexId>,
    /// One entry per pair of `x`, lexicographic.
    pub pairs: Vec<PairWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FWitness {
    pub x: [VertexId; 3],
    /// Middles of the pairs (x₁,x₂), (x₂,x₃), (x₁,x₃).
    pub middles: [VertexId; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub hhat_blocks: Vec<HhatWitness>,
    pub f_blocks: Vec<FWitness>,
    /// Aligned with the input's canonical edge list.
    pub edge_tags: Vec<EdgeTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectStep {
    RankTwo,
    RankGate,
    DegreeOneScan,
    SpineQuotient,
    MiddleAssignment,
    EdgeClassification,
    DesignationAudit,
}

impl fmt::Display for RejectStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectStep::RankTwo => "rank_two",
            RejectStep::RankGate => "rank_gate",
            RejectStep::DegreeOneScan => "degree_one_scan",
            RejectStep::SpineQuotient => "spine_quotient",
            RejectStep::MiddleAssignment => "middle_assignment",
            RejectStep::EdgeClassification => "edge_classification",
            RejectStep::DesignationAudit => "designation_audit",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub step: RejectStep,
    pub message: String,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Vec<VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecognitionReport {
    pub accepted: bool,
    pub witness: Option<BlockDecomposition>,
    pub reason: Option<Rejection>,
}

impl RecognitionReport {
    fn reject(
        step: RejectStep,
        message: impl Into<String>,
        vertices: Vec<VertexId>,
        edges: Vec<Vec<VertexId>>,
    ) -> Self {
        RecognitionReport {
            accepted: false,
            witness: None,
            reason: Some(Rejection {
                step,
                message: message.into(),
                vertices,
                edges,
            }),
        }
    }
}

/// Recognizes F: six vertices, four 3-edges, every two edges meeting in
/// exactly one vertex. Returns the witness with the lexicographically
/// greatest edge as the middle triangle.
fn as_f(h: &Hypergraph, class: &[VertexId], edges: &[usize]) -> Option<FWitness> {
    if class.len() != 6 || edges.len() != 4 {
        return None;
    }
    let masks: Vec<u128> = edges.iter().map(|&i| h.edge(i).mask()).collect();
    if edges.iter().any(|&i| h.edge(i).len() != 3) {
        return None;
    }
    for a in 0..4 {
        for b in a + 1..4 {
            if (masks[a] & masks[b]).count_ones() != 1 {
                return None;
            }
        }
    }
    let triangle = *edges.iter().max_by(|&&a, &&b| h.edge(a).cmp(h.edge(b)))?;
    let tri = h.edge(triangle).mask();
    let x: Vec<VertexId> = class
        .iter()
        .copied()
        .filter(|&v| tri & crate::hypergraph::bit(v) == 0)
        .collect();
    let middle_of = |a: VertexId, b: VertexId| -> Option<VertexId> {
        let both = crate::hypergraph::bit(a) | crate::hypergraph::bit(b);
        let e = edges.iter().map(|&i| h.edge(i)).find(|e| e.mask() & both == both)?;
        e.vertices().iter().copied().find(|&v| v != a && v != b)
    };
    Some(FWitness {
        x: [x[0], x[1], x[2]],
        middles: [middle_of(x[0], x[1])?, middle_of(x[1], x[2])?, middle_of(x[0], x[2])?],
    })
}

pub fn recognize(h: &Hypergraph) -> Result<RecognitionReport, RecognizeError> {
    if let Some(&v) = h.isolated_vertices().first() {
        return Err(RecognizeError::IsolatedVertex(v));
    }
    let rank = h.rank().map_err(|_| RecognizeError::NoEdges)?;
    if rank == 2 {
        return Ok(RecognitionReport::reject(
            RejectStep::RankTwo,
            "rank 2: gamma <= nu, so gamma = 2 nu is impossible",
            vec![],
            vec![],
        ));
    }
    if rank != 3 {
        let wide: Vec<Vec<VertexId>> = h
            .edges()
            .iter()
            .filter(|e| e.len() > 3)
            .map(|e| e.vertices().to_vec())
            .collect();
        return Ok(RecognitionReport::reject(
            RejectStep::RankGate,
            format!("rank {rank} is not 3"),
            vec![],
            wide,
        ));
    }

    let n = h.n();
    let mut edge_tags: Vec<Option<EdgeTag>> = vec![None; h.m()];
    let mut in_f = vec![false; n + 1];
    let mut f_blocks = Vec::new();

    // F components
    let mut comp_of = vec![0usize; n + 1];
    let classes = h.components();
    for (c, class) in classes.iter().enumerate() {
        for &v in class {
            comp_of[v as usize] = c;
        }
    }
    let mut comp_edges: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    for (i, e) in h.edges().iter().enumerate() {
        comp_edges[comp_of[e.vertices()[0] as usize]].push(i);
    }
    for (c, class) in classes.iter().enumerate() {
        if let Some(w) = as_f(h, class, &comp_edges[c]) {
            for &v in class {
                in_f[v as usize] = true;
            }
            for &i in &comp_edges[c] {
                edge_tags[i] = Some(EdgeTag::FInternal);
            }
            f_blocks.push(w);
        }
    }

    // degree-1 scan and spine quotient
    let mut quotient: Vec<Vec<VertexId>> = vec![Vec::new(); n + 1];
    let mut backing: BTreeMap<(VertexId, VertexId), Vec<VertexId>> = BTreeMap::new();
    for v in h.vertices() {
        if in_f[v as usize] || h.degree(v) != 1 {
            continue;
        }
        let e = h.star(v).expect("in range")[0];
        let others: Vec<VertexId> = e.vertices().iter().copied().filter(|&u| u != v).collect();
        if e.len() != 3 || others.iter().any(|&u| h.degree(u) < 2) {
            return Ok(RecognitionReport::reject(
                RejectStep::DegreeOneScan,
                format!("degree-1 vertex {v} is not the middle of a 3-edge between two vertices of degree >= 2"),
                vec![v],
                vec![e.vertices().to_vec()],
            ));
        }
        let (a, b) = (others[0], others[1]);
        let entry = backing.entry((a, b)).or_default();
        if entry.is_empty() {
            quotient[a as usize].push(b);
            quotient[b as usize].push(a);
        }
        entry.push(v);
    }

    // components of the quotient
    let mut block_of: Vec<Option<usize>> = vec![None; n + 1];
    let mut x_sets: Vec<Vec<VertexId>> = Vec::new();
    for start in h.vertices() {
        if quotient[start as usize].is_empty() || block_of[start as usize].is_some() {
            continue;
        }
        let idx = x_sets.len();
        let mut members = vec![start];
        block_of[start as usize] = Some(idx);
        let mut head = 0;
        while head < members.len() {
            let u = members[head];
            head += 1;
            for &w in &quotient[u as usize] {
                if block_of[w as usize].is_none() {
                    block_of[w as usize] = Some(idx);
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        let k = members.len();
        let complete = members.iter().all(|&u| quotient[u as usize].len() == k - 1);
        if !complete || k % 2 == 0 || k < 3 {
            return Ok(RecognitionReport::reject(
                RejectStep::SpineQuotient,
                format!("spine quotient component of order {k} is not a complete graph of odd order >= 3"),
                members,
                vec![],
            ));
        }
        x_sets.push(members);
    }
    let is_x = |v: VertexId| block_of[v as usize].is_some();

    // middle assignment
    let mut home: Vec<Option<(usize, usize)>> = vec![None; n + 1]; // (block, spine edge)
    for v in h.vertices() {
        if in_f[v as usize] || is_x(v) {
            continue;
        }
        let mut best: Option<(usize, usize)> = None;
        for i in h.star_indices(v).expect("in range") {
            let e = h.edge(i);
            if e.len() != 3 {
                continue;
            }
            let xs: Vec<VertexId> = e.vertices().iter().copied().filter(|&u| u != v).collect();
            if let (Some(a), Some(b)) = (block_of[xs[0] as usize], block_of[xs[1] as usize]) {
                if a == b && best.is_none_or(|(blk, _)| a < blk) {
                    best = Some((a, i));
                }
            }
        }
        match best {
            Some(found) => home[v as usize] = Some(found),
            None => {
                return Ok(RecognitionReport::reject(
                    RejectStep::MiddleAssignment,
                    format!("vertex {v} is in no edge with two X vertices of one block"),
                    vec![v],
                    h.star(v)
                        .expect("in range")
                        .iter()
                        .map(|e| e.vertices().to_vec())
                        .collect(),
                ));
            }
        }
    }

    // edge classification
    for (i, e) in h.edges().iter().enumerate() {
        if edge_tags[i].is_some() {
            continue;
        }
        let xs: Vec<VertexId> = e.vertices().iter().copied().filter(|&u| is_x(u)).collect();
        let mids: Vec<VertexId> = e.vertices().iter().copied().filter(|&u| !is_x(u)).collect();
        let blk = |u: VertexId| block_of[u as usize].expect("x vertex");
        let tag = match (xs.len(), mids.len()) {
            (2, 0) if blk(xs[0]) == blk(xs[1]) => Some(EdgeTag::Extra1),
            (3, 0) => {
                let (a, b, c) = (blk(xs[0]), blk(xs[1]), blk(xs[2]));
                if a == b && b == c {
                    Some(EdgeTag::Extra1)
                } else if a == b || b == c || a == c {
                    Some(EdgeTag::Z1)
                } else {
                    None
                }
            }
            (2, 1) if blk(xs[0]) == blk(xs[1]) => {
                let (hb, spine) = home[mids[0] as usize].expect("middles are homed");
                if spine == i {
                    Some(EdgeTag::Spine)
                } else if hb == blk(xs[0]) {
                    Some(EdgeTag::Extra2)
                } else {
                    Some(EdgeTag::Z2)
                }
            }
            _ => None,
        };
        match tag {
            Some(t) => edge_tags[i] = Some(t),
            None => {
                return Ok(RecognitionReport::reject(
                    RejectStep::EdgeClassification,
                    format!("edge {e:?} is neither a spine, an extra edge nor a cross edge"),
                    e.vertices().to_vec(),
                    vec![e.vertices().to_vec()],
                ));
            }
        }
    }

    // designation audit
    let mut hhat_blocks = Vec::with_capacity(x_sets.len());
    for (b, x) in x_sets.iter().enumerate() {
        let mut pairs = Vec::new();
        for (ai, &a) in x.iter().enumerate() {
            for &c in &x[ai + 1..] {
                let mut middles: Vec<VertexId> = h
                    .vertices()
                    .filter(|&v| match home[v as usize] {
                        Some((hb, spine)) => hb == b && h.edge(spine).contains(a) && h.edge(spine).contains(c),
                        None => false,
                    })
                    .collect();
                let Some(pos) = middles.iter().position(|&v| h.degree(v) == 1) else {
                    return Ok(RecognitionReport::reject(
                        RejectStep::DesignationAudit,
                        format!("pair ({a},{c}) has no degree-1 middle"),
                        vec![a, c],
                        vec![],
                    ));
                };
                let designated = middles.remove(pos);
                middles.insert(0, designated);
                pairs.push(PairWitness {
                    i: a,
                    j: c,
                    middles,
                    designated,
                });
            }
        }
        hhat_blocks.push(HhatWitness { x: x.clone(), pairs });
    }

    Ok(RecognitionReport {
        accepted: true,
        witness: Some(BlockDecomposition {
            hhat_blocks,
            f_blocks,
            edge_tags: edge_tags.into_iter().map(|t| t.expect("every edge tagged")).collect(),
        }),
        reason: None,
    })
}

impl BlockDecomposition {
    /// Rebuilds a spec from the witness. Blocks are the Ĥ₃ blocks in order,
    /// then the F blocks. The returned map sends each vertex of
    /// `make_g3(spec)` (index `v - 1`) to the vertex of `h` it stands for.
    pub fn to_spec(&self, h: &Hypergraph) -> (G3Spec, Vec<VertexId>) {
        let mut map: Vec<VertexId> = Vec::with_capacity(h.n());
        // original id -> (block, local id)
        let mut local: BTreeMap<VertexId, (usize, VertexId)> = BTreeMap::new();
        let mut blocks = Vec::new();
        for (b, w) in self.hhat_blocks.iter().enumerate() {
            let mut ids = w.x.clone();
            let mut entries = Vec::with_capacity(w.pairs.len());
            for p in &w.pairs {
                entries.push(p.middles.len());
                ids.extend(p.middles.iter().copied());
            }
            for (k, &v) in ids.iter().enumerate() {
                local.insert(v, (b, k as VertexId + 1));
            }
            map.extend(ids);
            let profile = MatrixProfile::from_entries(entries).expect("witness blocks are odd and complete");
            blocks.push(Block::Hhat(Hhat3Spec::plain(profile)));
        }
        for (k, w) in self.f_blocks.iter().enumerate() {
            let b = self.hhat_blocks.len() + k;
            let ids = [w.x[0], w.x[1], w.x[2], w.middles[0], w.middles[1], w.middles[2]];
            for (k, &v) in ids.iter().enumerate() {
                local.insert(v, (b, k as VertexId + 1));
            }
            map.extend(ids);
            blocks.push(Block::F);
        }
        let x_count = |b: usize| match &blocks[b] {
            Block::Hhat(s) => s.profile.dimension() as VertexId,
            Block::F => 3,
        };
        let mut z1 = Vec::new();
        let mut z2 = Vec::new();
        let mut extra1: Vec<Vec<Vec<VertexId>>> = vec![Vec::new(); blocks.len()];
        let mut extra2: Vec<Vec<[VertexId; 3]>> = vec![Vec::new(); blocks.len()];
        for (e, tag) in h.edges().iter().zip(&self.edge_tags) {
            let locs: Vec<(usize, VertexId)> = e.vertices().iter().map(|v| local[v]).collect();
            match tag {
                EdgeTag::Spine | EdgeTag::FInternal => {}
                EdgeTag::Extra1 => extra1[locs[0].0].push(locs.iter().map(|l| l.1).collect()),
                EdgeTag::Extra2 => {
                    let b = locs[0].0;
                    let mut xs: Vec<VertexId> = locs.iter().map(|l| l.1).filter(|&v| v <= x_count(b)).collect();
                    let s = locs.iter().map(|l| l.1).find(|&v| v > x_count(b)).expect("one middle");
                    xs.sort_unstable();
                    extra2[b].push([xs[0], xs[1], s]);
                }
                EdgeTag::Z1 | EdgeTag::Z2 => {
                    // the block holding two of the three vertices as X
                    let from = (0..blocks.len())
                        .find(|&b| locs.iter().filter(|l| l.0 == b && l.1 <= x_count(b)).count() == 2)
                        .expect("cross edge has a two-vertex side");
                    let mut pair: Vec<VertexId> = locs
                        .iter()
                        .filter(|l| l.0 == from && l.1 <= x_count(from))
                        .map(|l| l.1)
                        .collect();
                    pair.sort_unstable();
                    let &(to, third) = locs
                        .iter()
                        .find(|l| !(l.0 == from && l.1 <= x_count(from)))
                        .expect("third vertex");
                    let c = CrossEdge {
                        from,
                        pair: [pair[0], pair[1]],
                        to,
                        third,
                    };
                    if *tag == EdgeTag::Z1 {
                        z1.push(c);
                    } else {
                        z2.push(c);
                    }
                }
            }
        }
        for (b, block) in blocks.iter_mut().enumerate() {
            if let Block::Hhat(s) = block {
                s.extra1 = std::mem::take(&mut extra1[b]);
                s.extra2 = std::mem::take(&mut extra2[b]);
            }
        }
        (G3Spec { blocks, z1, z2 }, map)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecideMode {
    Structural,
    Oracle,
    Both,
}

/// rank 3 and γ = 2ν, by the exact solvers.
pub fn oracle_extremal(h: &Hypergraph) -> Result<bool, RecognizeError> {
    if let Some(&v) = h.isolated_vertices().first() {
        return Err(RecognizeError::IsolatedVertex(v));
    }
    let rank = h.rank().map_err(|_| RecognizeError::NoEdges)?;
    if rank != 3 {
        return Ok(false);
    }
    let nu = exact::max_matching(h)?.value;
    let gamma = exact::min_dominating(h)?.value;
    Ok(gamma == 2 * nu)
}

pub fn decide_extremal(h: &Hypergraph, mode: DecideMode) -> Result<bool, RecognizeError> {
    if h.m() == 0 {
        return Err(RecognizeError::NoEdges);
    }
    match mode {
        DecideMode::Structural => Ok(recognize(h)?.accepted),
        DecideMode::Oracle => oracle_extremal(h),
        DecideMode::Both => {
            let structural = recognize(h)?.accepted;
            let oracle = oracle_extremal(h)?;
            if structural != oracle {
                return Err(RecognizeError::Disagreement {
                    structural,
                    oracle,
                    instance: h.clone(),
                });
            }
            Ok(structural)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_f, make_g3, make_h3a};

    #[test]
    fn accepts_f() {
        let r = recognize(&make_f()).unwrap();
        assert!(r.accepted);
        let w = r.witness.unwrap();
        assert_eq!(
            w.f_blocks,
            vec![FWitness {
                x: [1, 2, 3],
                middles: [4, 5, 6]
            }]
        );
        assert!(w.hhat_blocks.is_empty());
    }

    #[test]
    fn accepts_h3a_example() {
        let h = make_h3a(&MatrixProfile::new(1, vec![2, 1, 2]).unwrap()).unwrap();
        let r = recognize(&h).unwrap();
        assert!(r.accepted);
        let w = r.witness.unwrap();
        assert_eq!(w.hhat_blocks.len(), 1);
        assert_eq!(w.hhat_blocks[0].x, vec![1, 2, 3]);
        assert_eq!(w.hhat_blocks[0].pairs[0].middles, vec![4, 5]);
        assert!(w.edge_tags.iter().all(|&t| t == EdgeTag::Spine));
    }

    #[test]
    fn rejects_k43_and_single_edge() {
        let k = Hypergraph::complete_uniform(4, 3).unwrap();
        let r = recognize(&k).unwrap();
        assert!(!r.accepted);
        assert!(r.witness.is_none());

        let single = Hypergraph::build(3, [[1, 2, 3]]).unwrap();
        let r = recognize(&single).unwrap();
        assert_eq!(r.reason.unwrap().step, RejectStep::DegreeOneScan);
    }

    #[test]
    fn rank_gates() {
        let tri = Hypergraph::complete_uniform(3, 2).unwrap();
        assert_eq!(recognize(&tri).unwrap().reason.unwrap().step, RejectStep::RankTwo);
        let four = Hypergraph::build(4, [[1, 2, 3, 4]]).unwrap();
        assert_eq!(recognize(&four).unwrap().reason.unwrap().step, RejectStep::RankGate);
        let iso = Hypergraph::build(4, [[1, 2, 3]]).unwrap();
        assert_eq!(recognize(&iso), Err(RecognizeError::IsolatedVertex(4)));
    }

    #[test]
    fn f_with_a_pendant_is_rejected() {
        // F plus an all-ones block joined through a cross edge at F
        let h = Hypergraph::build(
            12,
            [
                [1, 2, 4],
                [2, 3, 5],
                [1, 3, 6],
                [4, 5, 6],
                [7, 8, 10],
                [7, 9, 11],
                [8, 9, 12],
                [3, 7, 8],
            ],
        )
        .unwrap();
        assert!(!recognize(&h).unwrap().accepted);
        assert!(!decide_extremal(&h, DecideMode::Both).unwrap());
    }

    #[test]
    fn decide_modes() {
        let ones = || Block::Hhat(Hhat3Spec::plain(MatrixProfile::ones(1).unwrap()));
        let spec = G3Spec {
            blocks: vec![ones(), ones()],
            z1: vec![CrossEdge {
                from: 0,
                pair: [1, 2],
                to: 1,
                third: 1,
            }],
            z2: vec![],
        };
        let h = make_g3(&spec).unwrap().hypergraph;
        assert!(decide_extremal(&h, DecideMode::Both).unwrap());
        let tri = Hypergraph::complete_uniform(3, 2).unwrap();
        assert!(!decide_extremal(&tri, DecideMode::Both).unwrap());
        let k = Hypergraph::complete_uniform(4, 3).unwrap();
        assert!(!decide_extremal(&k, DecideMode::Both).unwrap());
        assert!(!decide_extremal(&k, DecideMode::Oracle).unwrap());
        assert!(!decide_extremal(&k, DecideMode::Structural).unwrap());
    }

    #[test]
    fn witness_round_trip() {
        let h = make_h3a(&MatrixProfile::new(1, vec![2, 1, 2]).unwrap()).unwrap();
        let w = recognize(&h).unwrap().witness.unwrap();
        let (spec, map) = w.to_spec(&h);
        let rebuilt = make_g3(&spec).unwrap().hypergraph;
        assert_eq!(rebuilt.relabel(&map), h);
    }
}
