//! Generators for the rank-3 hypergraphs with γ = 2ν.
//!
//! A block is either the fixed hypergraph F or a member of Ĥ₃, which is
//! H₃(A) for an odd-dimension upper-triangular profile A plus optional extra
//! edges. A G₃ member is a disjoint union of blocks plus cross edges, each
//! cross edge taking two X vertices of one block and one X or S vertex of
//! another.
//!
//! Cross edges may only join Ĥ₃ blocks. An F block has no degree-1 vertex
//! and its middle triangle avoids X, so any cross edge touching F either
//! raises ν or lowers γ (F + the all-ones block with `{1,2,7}` has ν = 3).
//! F therefore only appears as a whole component.
//!
//! Block-local vertex ids: X vertices are `1..=2l+1`; middles follow, pair by
//! pair in lexicographic order, `a_ij` consecutive ids per pair. The first
//! middle of each pair is the designated one; the rest form S. F uses
//! x₁,x₂,x₃ → 1,2,3 and x₁₂,x₂₃,x₁₃ → 4,5,6.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, VertexId, MAX_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad profile: {0}")]
    BadProfile(String),
    #[error("bad spec: {0}")]
    BadSpec(String),
    #[error("infeasible bounds: {0}")]
    InfeasibleBounds(String),
    #[error("no valid sample after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
}

/// Upper-triangular positive profile of odd dimension `2l + 1`, stored
/// row-major: `(1,2), (1,3), …, (1,2l+1), (2,3), …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MatrixProfile {
    l: usize,
    entries: Vec<usize>,
}

impl MatrixProfile {
    pub fn new(l: usize, entries: Vec<usize>) -> Result<Self, FamilyError> {
        if l == 0 {
            return Err(FamilyError::BadProfile("l must be at least 1".into()));
        }
        let d = 2 * l + 1;
        let expected = d * (d - 1) / 2;
        if entries.len() != expected {
            return Err(FamilyError::BadProfile(format!(
                "l={l} needs {expected} entries, got {}",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&a| a == 0) {
            return Err(FamilyError::BadProfile(format!("entry {pos} is zero")));
        }
        Ok(MatrixProfile { l, entries })
    }

    /// Infers `l` from the entry count.
    pub fn from_entries(entries: Vec<usize>) -> Result<Self, FamilyError> {
        let mut l = 1;
        loop {
            let d = 2 * l + 1;
            let count = d * (d - 1) / 2;
            if count == entries.len() {
                return Self::new(l, entries);
            }
            if count > entries.len() {
                return Err(FamilyError::BadProfile(format!(
                    "{} entries is not the upper triangle of an odd dimension",
                    entries.len()
                )));
            }
            l += 1;
        }
    }

    pub fn ones(l: usize) -> Result<Self, FamilyError> {
        let d = 2 * l + 1;
        Self::new(l, vec![1; d * d.saturating_sub(1) / 2])
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dimension(&self) -> usize {
        2 * self.l + 1
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// `(i, j, a_ij)` in row-major order, 1-based.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let d = self.dimension();
        (1..=d)
            .flat_map(move |i| (i + 1..=d).map(move |j| (i, j)))
            .zip(self.entries.iter().copied())
            .map(|((i, j), a)| (i, j, a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairLayout {
    pub i: VertexId,
    pub j: VertexId,
    /// Middles of this pair; the first is the designated one.
    pub middles: Vec<VertexId>,
}

/// Local vertex numbering of one Ĥ₃ block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLayout {
    pub x_count: usize,
    pub pairs: Vec<PairLayout>,
    pub n: usize,
}

impl VertexLayout {
    pub fn new(profile: &MatrixProfile) -> Self {
        let x_count = profile.dimension();
        let mut next = x_count as VertexId + 1;
        let mut pairs = Vec::new();
        for (i, j, a) in profile.pairs() {
            let middles = (next..next + a as VertexId).collect();
            next += a as VertexId;
            pairs.push(PairLayout {
                i: i as VertexId,
                j: j as VertexId,
                middles,
            });
        }
        VertexLayout {
            x_count,
            pairs,
            n: next as usize - 1,
        }
    }

    pub fn is_x(&self, v: VertexId) -> bool {
        v >= 1 && (v as usize) <= self.x_count
    }

    pub fn designated(&self) -> Vec<VertexId> {
        self.pairs.iter().map(|p| p.middles[0]).collect()
    }

    /// Non-designated middles.
    pub fn s(&self) -> Vec<VertexId> {
        self.pairs.iter().flat_map(|p| p.middles[1..].iter().copied()).collect()
    }

    pub fn is_s(&self, v: VertexId) -> bool {
        self.pairs.iter().any(|p| p.middles[1..].contains(&v))
    }

    /// The spine edges `{x_i, v, x_j}`.
    pub fn spines(&self) -> Vec<Vec<VertexId>> {
        self.pairs
            .iter()
            .flat_map(|p| p.middles.iter().map(move |&v| vec![p.i, v, p.j]))
            .collect()
    }
}

/// A member of Ĥ₃: a profile plus extra edges in block-local ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Hhat3Spec {
    pub profile: MatrixProfile,
    /// 2- or 3-subsets of X.
    pub extra1: Vec<Vec<VertexId>>,
    /// Two X vertices and one S vertex.
    pub extra2: Vec<[VertexId; 3]>,
}

impl Hhat3Spec {
    pub fn plain(profile: MatrixProfile) -> Self {
        Hhat3Spec {
            profile,
            extra1: Vec::new(),
            extra2: Vec::new(),
        }
    }

    pub fn layout(&self) -> VertexLayout {
        VertexLayout::new(&self.profile)
    }

    /// Checks the extra-edge shapes and returns every edge in local ids.
    pub fn local_edges(&self) -> Result<Vec<Vec<VertexId>>, FamilyError> {
        let layout = self.layout();
        let mut edges = layout.spines();
        for e in &self.extra1 {
            let distinct: BTreeSet<_> = e.iter().copied().collect();
            if !(2..=3).contains(&e.len()) || distinct.len() != e.len() {
                return Err(FamilyError::BadSpec(format!(
                    "extra1 edge {e:?} must be 2 or 3 distinct vertices"
                )));
            }
            if !e.iter().all(|&v| layout.is_x(v)) {
                return Err(FamilyError::BadSpec(format!("extra1 edge {e:?} leaves X")));
            }
            edges.push(e.clone());
        }
        for e in &self.extra2 {
            let xs = e.iter().filter(|&&v| layout.is_x(v)).count();
            let ss = e.iter().filter(|&&v| layout.is_s(v)).count();
            let distinct: BTreeSet<_> = e.iter().copied().collect();
            if xs != 2 || ss != 1 || distinct.len() != 3 {
                return Err(FamilyError::BadSpec(format!(
                    "extra2 edge {e:?} must be two X vertices and one S vertex"
                )));
            }
            edges.push(e.to_vec());
        }
        Ok(edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Block {
    F,
    Hhat(Hhat3Spec),
}

impl Block {
    /// ν of the block on its own.
    pub fn l(&self) -> usize {
        match self {
            Block::F => 1,
            Block::Hhat(s) => s.profile.l(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Block::F => 6,
            Block::Hhat(s) => s.layout().n,
        }
    }

    fn local_edges(&self) -> Result<Vec<Vec<VertexId>>, FamilyError> {
        match self {
            Block::F => Ok(F_EDGES.iter().map(|e| e.to_vec()).collect()),
            Block::Hhat(s) => s.local_edges(),
        }
    }
}

const F_EDGES: [[VertexId; 3]; 4] = [[1, 4, 2], [2, 5, 3], [1, 6, 3], [4, 5, 6]];

/// A cross edge: two X vertices of block `from` and one vertex of block `to`
/// (an X vertex for z1, an S vertex for z2). Block indices are 0-based
/// positions in [`G3Spec::blocks`]; vertices are block-local.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CrossEdge {
    pub from: usize,
    pub pair: [VertexId; 2],
    pub to: usize,
    pub third: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct G3Spec {
    pub blocks: Vec<Block>,
    pub z1: Vec<CrossEdge>,
    pub z2: Vec<CrossEdge>,
}

impl G3Spec {
    pub fn single(block: Block) -> Self {
        G3Spec {
            blocks: vec![block],
            z1: Vec::new(),
            z2: Vec::new(),
        }
    }
}

/// Where a block landed in the assembled hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockPlacement {
    /// Global id of local vertex 1, minus one.
    pub offset: VertexId,
    pub size: usize,
    pub x: Vec<VertexId>,
    pub designated: Vec<VertexId>,
    pub s: Vec<VertexId>,
}

impl BlockPlacement {
    pub fn global(&self, local: VertexId) -> VertexId {
        self.offset + local
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<VertexId> {
        self.offset + 1..=self.offset + self.size as VertexId
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct G3Build {
    pub hypergraph: Hypergraph,
    pub blocks: Vec<BlockPlacement>,
}

pub fn make_f() -> Hypergraph {
    Hypergraph::from_vertex_lists(6, F_EDGES.iter().map(|e| e.to_vec())).expect("F is well formed")
}

pub fn make_h3a(profile: &MatrixProfile) -> Result<Hypergraph, FamilyError> {
    let layout = profile_layout_checked(profile)?;
    Hypergraph::from_vertex_lists(layout.n, layout.spines()).map_err(|e| FamilyError::BadProfile(e.to_string()))
}

fn profile_layout_checked(profile: &MatrixProfile) -> Result<VertexLayout, FamilyError> {
    let checked = MatrixProfile::new(profile.l, profile.entries.clone())?;
    let layout = VertexLayout::new(&checked);
    if layout.n > MAX_VERTICES {
        return Err(FamilyError::BadProfile(format!("{} vertices is too many", layout.n)));
    }
    Ok(layout)
}

pub fn make_hhat3(spec: &Hhat3Spec) -> Result<Hypergraph, FamilyError> {
    let layout = profile_layout_checked(&spec.profile)?;
    let edges = spec.local_edges()?;
    Hypergraph::from_vertex_lists(layout.n, edges).map_err(|e| FamilyError::BadSpec(e.to_string()))
}

fn placement(block: &Block, offset: VertexId) -> BlockPlacement {
    let (size, x, designated, s) = match block {
        Block::F => (6, vec![1, 2, 3], vec![4, 5, 6], vec![]),
        Block::Hhat(spec) => {
            let layout = spec.layout();
            (
                layout.n,
                (1..=layout.x_count as VertexId).collect(),
                layout.designated(),
                layout.s(),
            )
        }
    };
    let shift = |v: Vec<VertexId>| v.into_iter().map(|u| u + offset).collect();
    BlockPlacement {
        offset,
        size,
        x: shift(x),
        designated: shift(designated),
        s: shift(s),
    }
}

fn check_cross(spec: &G3Spec, c: &CrossEdge, second_kind: bool) -> Result<(), FamilyError> {
    let label = if second_kind { "z2" } else { "z1" };
    let k = spec.blocks.len();
    if c.from >= k || c.to >= k {
        return Err(FamilyError::BadSpec(format!(
            "{label} edge {c:?} names a missing block"
        )));
    }
    if c.from == c.to {
        return Err(FamilyError::BadSpec(format!(
            "{label} edge {c:?} stays inside one block"
        )));
    }
    let (Block::Hhat(from), Block::Hhat(to)) = (&spec.blocks[c.from], &spec.blocks[c.to]) else {
        return Err(FamilyError::BadSpec(format!(
            "{label} edge {c:?} touches an F block; F blocks take no cross edges"
        )));
    };
    let from_layout = from.layout();
    let to_layout = to.layout();
    if c.pair[0] == c.pair[1] || !c.pair.iter().all(|&v| from_layout.is_x(v)) {
        return Err(FamilyError::BadSpec(format!(
            "{label} edge {c:?} needs two distinct X vertices of block {}",
            c.from
        )));
    }
    let ok = if second_kind {
        to_layout.is_s(c.third)
    } else {
        to_layout.is_x(c.third)
    };
    if !ok {
        let want = if second_kind { "an S" } else { "an X" };
        return Err(FamilyError::BadSpec(format!(
            "{label} edge {c:?} needs {want} vertex of block {}",
            c.to
        )));
    }
    Ok(())
}

/// Assembles a G₃ member: blocks in list order with consecutive vertex
/// ranges, then the cross edges.
pub fn make_g3(spec: &G3Spec) -> Result<G3Build, FamilyError> {
    if spec.blocks.is_empty() {
        return Err(FamilyError::BadSpec("no blocks".into()));
    }
    let mut blocks = Vec::with_capacity(spec.blocks.len());
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    let mut offset: VertexId = 0;
    for block in &spec.blocks {
        if let Block::Hhat(s) = block {
            profile_layout_checked(&s.profile)?;
        }
        let place = placement(block, offset);
        for e in block.local_edges()? {
            edges.push(e.into_iter().map(|v| v + offset).collect());
        }
        offset += place.size as VertexId;
        blocks.push(place);
    }
    if offset as usize > MAX_VERTICES {
        return Err(FamilyError::BadSpec(format!("{offset} vertices is too many")));
    }
    for c in &spec.z1 {
        check_cross(spec, c, false)?;
    }
    for c in &spec.z2 {
        check_cross(spec, c, true)?;
    }
    for c in spec.z1.iter().chain(&spec.z2) {
        let from = &blocks[c.from];
        let to = &blocks[c.to];
        edges.push(vec![from.global(c.pair[0]), from.global(c.pair[1]), to.global(c.third)]);
    }
    let hypergraph =
        Hypergraph::from_vertex_lists(offset as usize, edges).map_err(|e| FamilyError::BadSpec(e.to_string()))?;
    Ok(G3Build { hypergraph, blocks })
}

/// Predicted `(ν, γ)` of a G₃ member: `(Σ l_i, 2 Σ l_i)`.
pub fn expected_invariants(spec: &G3Spec) -> Result<(usize, usize), FamilyError> {
    make_g3(spec)?;
    let nu: usize = spec.blocks.iter().map(Block::l).sum();
    Ok((nu, 2 * nu))
}

/// Size bounds and edge densities for [`sample_member`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBounds {
    pub max_blocks: usize,
    pub max_l: usize,
    pub max_a: usize,
    pub max_n: usize,
    /// Probability that a block is F.
    pub p_f: f64,
    /// Inclusion probability of each candidate extra / cross edge.
    pub p_extra1: f64,
    pub p_extra2: f64,
    pub p_z1: f64,
    pub p_z2: f64,
}

impl Default for SampleBounds {
    fn default() -> Self {
        SampleBounds {
            max_blocks: 3,
            max_l: 2,
            max_a: 2,
            max_n: 24,
            p_f: 0.2,
            p_extra1: 0.3,
            p_extra2: 0.2,
            p_z1: 0.08,
            p_z2: 0.05,
        }
    }
}

fn min_block_size(l: usize) -> usize {
    let d = 2 * l + 1;
    d + d * (d - 1) / 2
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    p > 0.0 && rng.gen_bool(p.min(1.0))
}

fn sample_hhat(rng: &mut ChaCha8Rng, bounds: &SampleBounds, room: usize) -> Option<Hhat3Spec> {
    let ls: Vec<usize> = (1..=bounds.max_l).filter(|&l| min_block_size(l) <= room).collect();
    let &l = ls.choose(rng)?;
    let mut spare = room - min_block_size(l);
    let d = 2 * l + 1;
    let mut entries = vec![1; d * (d - 1) / 2];
    for a in entries.iter_mut() {
        let top = (bounds.max_a - 1).min(spare);
        let extra = rng.gen_range(0..=top);
        *a += extra;
        spare -= extra;
    }
    let profile = MatrixProfile::new(l, entries).ok()?;
    let layout = VertexLayout::new(&profile);
    let xs: Vec<VertexId> = (1..=d as VertexId).collect();
    let mut extra1 = Vec::new();
    for (ai, &a) in xs.iter().enumerate() {
        for (bi, &b) in xs.iter().enumerate().skip(ai + 1) {
            if bernoulli(rng, bounds.p_extra1) {
                extra1.push(vec![a, b]);
            }
            for &c in &xs[bi + 1..] {
                if bernoulli(rng, bounds.p_extra1) {
                    extra1.push(vec![a, b, c]);
                }
            }
        }
    }
    let mut extra2 = Vec::new();
    for s in layout.s() {
        for (ai, &a) in xs.iter().enumerate() {
            for &b in &xs[ai + 1..] {
                if bernoulli(rng, bounds.p_extra2) {
                    extra2.push([a, b, s]);
                }
            }
        }
    }
    Some(Hhat3Spec {
        profile,
        extra1,
        extra2,
    })
}

/// Draws a reproducible G₃ member within `bounds`.
pub fn sample_member(bounds: &SampleBounds, seed: u64) -> Result<(G3Spec, Hypergraph), FamilyError> {
    if bounds.max_blocks == 0 || bounds.max_l == 0 || bounds.max_a == 0 {
        return Err(FamilyError::InfeasibleBounds(
            "max_blocks, max_l and max_a must be positive".into(),
        ));
    }
    if bounds.max_n < 6 {
        return Err(FamilyError::InfeasibleBounds(
            "the smallest block has 6 vertices".into(),
        ));
    }
    if bounds.max_n > MAX_VERTICES {
        return Err(FamilyError::InfeasibleBounds(format!("max_n above {MAX_VERTICES}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=bounds.max_blocks.min(bounds.max_n / 6));
    let mut blocks = Vec::new();
    let mut used = 0;
    for idx in 0..k {
        let room = bounds.max_n - used;
        // keep space for at least a minimal block for each later one
        let reserve = 6 * (k - idx - 1);
        if room < 6 + reserve {
            break;
        }
        let room = room - reserve;
        let block = if bernoulli(&mut rng, bounds.p_f) {
            Block::F
        } else {
            match sample_hhat(&mut rng, bounds, room) {
                Some(s) => Block::Hhat(s),
                None => Block::F,
            }
        };
        used += block.size();
        blocks.push(block);
    }
    let mut spec = G3Spec {
        blocks,
        z1: Vec::new(),
        z2: Vec::new(),
    };
    let hhat: Vec<(usize, VertexLayout)> = spec
        .blocks
        .iter()
        .enumerate()
        .filter_map(|(i, b)| match b {
            Block::Hhat(s) => Some((i, s.layout())),
            Block::F => None,
        })
        .collect();
    for (from, from_layout) in &hhat {
        for (to, to_layout) in &hhat {
            if from == to {
                continue;
            }
            let xs = from_layout.x_count as VertexId;
            for a in 1..=xs {
                for b in a + 1..=xs {
                    for c in 1..=to_layout.x_count as VertexId {
                        if bernoulli(&mut rng, bounds.p_z1) {
                            spec.z1.push(CrossEdge {
                                from: *from,
                                pair: [a, b],
                                to: *to,
                                third: c,
                            });
                        }
                    }
                    for s in to_layout.s() {
                        if bernoulli(&mut rng, bounds.p_z2) {
                            spec.z2.push(CrossEdge {
                                from: *from,
                                pair: [a, b],
                                to: *to,
                                third: s,
                            });
                        }
                    }
                }
            }
        }
    }
    let built = make_g3(&spec)?;
    Ok((spec, built.hypergraph))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub const RANDOM_RETRIES: usize = 1000;

/// A reproducible random hypergraph with `m` distinct edges of sizes
/// `2..=max_rank` and no isolated vertex.
pub fn sample_random_hypergraph(n: usize, max_rank: usize, m: usize, seed: u64) -> Result<Hypergraph, FamilyError> {
    if !(2..=MAX_VERTICES).contains(&n) {
        return Err(FamilyError::InfeasibleBounds(format!(
            "n={n} outside 2..={MAX_VERTICES}"
        )));
    }
    if max_rank < 2 || max_rank > n {
        return Err(FamilyError::InfeasibleBounds(format!(
            "max_rank={max_rank} outside 2..={n}"
        )));
    }
    let available: u128 = (2..=max_rank).map(|r| binomial(n, r)).sum();
    if m == 0 || m as u128 > available {
        return Err(FamilyError::InfeasibleBounds(format!("m={m} outside 1..={available}")));
    }
    if m * max_rank < n {
        return Err(FamilyError::InfeasibleBounds(format!(
            "{m} edges of size <= {max_rank} cannot cover {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<VertexId> = (1..=n as VertexId).collect();
    // sizes with no room left (all r-subsets taken) are skipped
    let mut per_size_left: Vec<u128> = (0..=max_rank).map(|r| if r < 2 { 0 } else { binomial(n, r) }).collect();
    for _ in 0..RANDOM_RETRIES {
        let mut edges: BTreeSet<Vec<VertexId>> = BTreeSet::new();
        per_size_left
            .iter_mut()
            .enumerate()
            .for_each(|(r, c)| *c = if r < 2 { 0 } else { binomial(n, r) });
        while edges.len() < m {
            let sizes: Vec<usize> = (2..=max_rank).filter(|&r| per_size_left[r] > 0).collect();
            let &r = sizes
                .choose(&mut rng)
                .expect("m is at most the number of available edges");
            let mut e: Vec<VertexId> = pool.choose_multiple(&mut rng, r).copied().collect();
            e.sort_unstable();
            if edges.insert(e) {
                per_size_left[r] -= 1;
            }
        }
        let h = Hypergraph::from_vertex_lists(n, edges).expect("edges are in range");
        if !h.has_isolated_vertex() {
            return Ok(h);
        }
    }
    Err(FamilyError::RetriesExhausted {
        attempts: RANDOM_RETRIES,
    })
}
