//! Canonical hypergraph model.
//!
//! Vertices are dense 1-based ids `1..=n`. Edges are stored as strictly
//! ascending vertex lists, deduplicated, in lexicographic order. Every edge
//! also carries a `u128` mask (bit `v - 1` set for vertex `v`), which is what
//! the solvers work on; this caps the vertex count at [`MAX_VERTICES`].

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Largest vertex count a [`Hypergraph`] can hold.
pub const MAX_VERTICES: usize = 128;

/// A 1-based vertex id.
pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("vertex {vertex} is out of range 1..={n}")]
    OutOfRangeVertex { vertex: i64, n: usize },
    #[error("edge {edge:?} has fewer than two distinct vertices")]
    EdgeTooSmall { edge: Vec<i64> },
    #[error("empty edge")]
    EmptyEdge,
    #[error("hypergraph has no edges")]
    NoEdges,
    #[error("u and v are the same vertex ({0})")]
    SameVertex(VertexId),
    #[error("r={r} is not in 2..={n}")]
    BadParameters { n: usize, r: usize },
    #[error("{n} vertices exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices { n: usize },
    #[error("vertex count must be at least 1")]
    NoVertices,
}

/// Bitmask with bit `v - 1` set for each vertex `v`.
#[inline]
pub fn bit(v: VertexId) -> u128 {
    1u128 << (v - 1)
}

/// Ascending vertex ids of a mask.
pub fn mask_vertices(mut mask: u128) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let tz = mask.trailing_zeros();
        out.push(tz + 1);
        mask &= mask - 1;
    }
    out
}

pub fn vertices_mask(vs: &[VertexId]) -> u128 {
    vs.iter().fold(0, |m, &v| m | bit(v))
}

/// A hyperedge: at least two distinct vertices in ascending order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    vertices: Vec<VertexId>,
    #[serde(skip)]
    mask: u128,
}

impl Edge {
    fn from_sorted(vertices: Vec<VertexId>) -> Self {
        let mask = vertices_mask(&vertices);
        Edge { vertices, mask }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.mask & bit(v) != 0
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vertices.cmp(&other.vertices)
    }
}

/// An immutable hypergraph in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Edge>,
    degrees: Vec<usize>,
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, {:?})", self.n, self.edges)
    }
}

impl Hypergraph {
    /// Builds a canonical hypergraph from raw edge lists.
    ///
    /// Vertex order inside a raw edge and the order of edges are irrelevant;
    /// repeated vertices inside an edge are merged and duplicate edges
    /// collapse. An edge must still have at least two distinct vertices.
    pub fn build<I, E>(n: usize, raw_edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[i64]>,
    {
        if n == 0 {
            return Err(HypergraphError::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(HypergraphError::TooManyVertices { n });
        }
        let mut edges = Vec::new();
        for raw in raw_edges {
            let raw = raw.as_ref();
            if raw.is_empty() {
                return Err(HypergraphError::EmptyEdge);
            }
            let mut vs = Vec::with_capacity(raw.len());
            for &v in raw {
                if v < 1 || v as usize > n {
                    return Err(HypergraphError::OutOfRangeVertex { vertex: v, n });
                }
                vs.push(v as VertexId);
            }
            vs.sort_unstable();
            vs.dedup();
            if vs.len() < 2 {
                return Err(HypergraphError::EdgeTooSmall { edge: raw.to_vec() });
            }
            edges.push(Edge::from_sorted(vs));
        }
        Ok(Self::from_edges(n, edges))
    }

    /// Same as [`Hypergraph::build`] for already-typed vertex lists.
    pub fn from_vertex_lists<I>(n: usize, lists: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = Vec<VertexId>>,
    {
        let raw: Vec<Vec<i64>> = lists
            .into_iter()
            .map(|e| e.into_iter().map(i64::from).collect())
            .collect();
        Self::build(n, raw)
    }

    fn from_edges(n: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort();
        edges.dedup();
        let mut degrees = vec![0; n];
        for e in &edges {
            for &v in &e.vertices {
                degrees[(v - 1) as usize] += 1;
            }
        }
        Hypergraph { n, edges, degrees }
    }

    /// The complete r-uniform hypergraph on n vertices.
    pub fn complete_uniform(n: usize, r: usize) -> Result<Self, HypergraphError> {
        if r < 2 || r > n {
            return Err(HypergraphError::BadParameters { n, r });
        }
        if n > MAX_VERTICES {
            return Err(HypergraphError::TooManyVertices { n });
        }
        let mut edges = Vec::new();
        let mut combo: Vec<VertexId> = (1..=r as VertexId).collect();
        loop {
            edges.push(Edge::from_sorted(combo.clone()));
            // next combination in lexicographic order
            let mut i = r;
            loop {
                if i == 0 {
                    return Ok(Self::from_edges(n, edges));
                }
                i -= 1;
                if combo[i] < (n - r + i + 1) as VertexId {
                    break;
                }
            }
            combo[i] += 1;
            for j in i + 1..r {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    /// Vertex ids `1..=n`.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        1..=self.n as VertexId
    }

    pub fn all_mask(&self) -> u128 {
        if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        }
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), HypergraphError> {
        if v < 1 || v as usize > self.n {
            Err(HypergraphError::OutOfRangeVertex {
                vertex: i64::from(v),
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Maximum edge size.
    pub fn rank(&self) -> Result<usize, HypergraphError> {
        self.edges.iter().map(Edge::len).max().ok_or(HypergraphError::NoEdges)
    }

    pub fn is_uniform(&self, r: usize) -> bool {
        self.edges.iter().all(|e| e.len() == r)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degrees[(v - 1) as usize]
    }

    /// Degree of every vertex, indexed by `v - 1`.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.degree(v) == 0).collect()
    }

    pub fn has_isolated_vertex(&self) -> bool {
        self.degrees.contains(&0)
    }

    /// Indices of the edges containing `v`, in canonical order.
    pub fn star_indices(&self, v: VertexId) -> Result<Vec<usize>, HypergraphError> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(v))
            .map(|(i, _)| i)
            .collect())
    }

    /// The edges containing `v`.
    pub fn star(&self, v: VertexId) -> Result<Vec<&Edge>, HypergraphError> {
        Ok(self.star_indices(v)?.into_iter().map(|i| &self.edges[i]).collect())
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> Result<bool, HypergraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(HypergraphError::SameVertex(u));
        }
        let both = bit(u) | bit(v);
        Ok(self.edges.iter().any(|e| e.mask & both == both))
    }

    /// Closed neighbourhood masks, indexed by `v - 1`.
    pub fn closed_neighborhoods(&self) -> Vec<u128> {
        let mut nb: Vec<u128> = self.vertices().map(bit).collect();
        for e in &self.edges {
            for &v in &e.vertices {
                nb[(v - 1) as usize] |= e.mask;
            }
        }
        nb
    }

    /// Connected classes sorted by least vertex; isolated vertices form
    /// singleton classes.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let first = (e.vertices[0] - 1) as usize;
            for &v in &e.vertices[1..] {
                let a = find(&mut parent, first);
                let b = find(&mut parent, (v - 1) as usize);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut classes: Vec<Vec<VertexId>> = Vec::new();
        let mut slot = vec![usize::MAX; self.n];
        for i in 0..self.n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[r]].push(i as VertexId + 1);
        }
        classes
    }

    /// The partial hypergraph induced by `w`, relabeled order-preservingly
    /// to `1..=|w|`. The second value maps new ids (index `i` is vertex
    /// `i + 1`) to original ids.
    pub fn induced(&self, w: &[VertexId]) -> Result<(Hypergraph, Vec<VertexId>), HypergraphError> {
        let mut labels = w.to_vec();
        for &v in &labels {
            self.check_vertex(v)?;
        }
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(HypergraphError::NoVertices);
        }
        let keep = vertices_mask(&labels);
        let mut new_id = vec![0; self.n + 1];
        for (i, &v) in labels.iter().enumerate() {
            new_id[v as usize] = i as VertexId + 1;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.mask & !keep == 0)
            .map(|e| Edge::from_sorted(e.vertices.iter().map(|&v| new_id[v as usize]).collect()))
            .collect();
        Ok((Self::from_edges(labels.len(), edges), labels))
    }

    /// True iff no edge is contained in another.
    pub fn is_simple(&self) -> bool {
        for (i, a) in self.edges.iter().enumerate() {
            for (j, b) in self.edges.iter().enumerate() {
                if i != j && a.mask & !b.mask == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// A copy with the edges at the given indices removed.
    pub fn without_edges(&self, indices: &[usize]) -> Hypergraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !indices.contains(i))
            .map(|(_, e)| e.clone())
            .collect();
        Self::from_edges(self.n, edges)
    }

    /// A copy with one extra edge (which must be valid for this vertex count).
    pub fn with_edge(&self, vertices: &[VertexId]) -> Result<Hypergraph, HypergraphError> {
        let mut lists: Vec<Vec<VertexId>> = self.edges.iter().map(|e| e.vertices.clone()).collect();
        lists.push(vertices.to_vec());
        Self::from_vertex_lists(self.n, lists)
    }

    /// Applies `map` (indexed by `v - 1`, a permutation of `1..=n`) to every
    /// vertex and re-canonicalizes.
    pub fn relabel(&self, map: &[VertexId]) -> Hypergraph {
        assert_eq!(map.len(), self.n, "relabel map must cover every vertex");
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut vs: Vec<VertexId> = e.vertices.iter().map(|&v| map[(v - 1) as usize]).collect();
                vs.sort_unstable();
                Edge::from_sorted(vs)
            })
            .collect();
        Self::from_edges(self.n, edges)
    }

    /// Edge lists as plain vectors, canonical order.
    pub fn edge_lists(&self) -> Vec<Vec<VertexId>> {
        self.edges.iter().map(|e| e.vertices.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Hypergraph {
        Hypergraph::build(6, [[1, 4, 2], [2, 5, 3], [1, 6, 3], [4, 5, 6]]).unwrap()
    }

    #[test]
    fn build_canonicalizes_f() {
        let h = f();
        assert_eq!(
            h.edge_lists(),
            vec![vec![1, 2, 4], vec![1, 3, 6], vec![2, 3, 5], vec![4, 5, 6]]
        );
        assert!(h.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn build_path_and_dedup() {
        let p = Hypergraph::build(3, [[1, 2], [2, 3]]).unwrap();
        assert_eq!(p.m(), 2);
        let d = Hypergraph::build(3, [[1, 2], [2, 1]]).unwrap();
        assert_eq!(d.m(), 1);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(
            Hypergraph::build(3, [vec![1, 4]]),
            Err(HypergraphError::OutOfRangeVertex { vertex: 4, .. })
        ));
        assert!(matches!(
            Hypergraph::build(3, [vec![0, 1]]),
            Err(HypergraphError::OutOfRangeVertex { vertex: 0, .. })
        ));
        assert!(matches!(
            Hypergraph::build(3, [vec![2]]),
            Err(HypergraphError::EdgeTooSmall { .. })
        ));
        assert!(matches!(
            Hypergraph::build(3, [vec![2, 2]]),
            Err(HypergraphError::EdgeTooSmall { .. })
        ));
        assert_eq!(
            Hypergraph::build(3, [Vec::<i64>::new()]),
            Err(HypergraphError::EmptyEdge)
        );
        assert_eq!(
            Hypergraph::build(129, [vec![1, 2]]),
            Err(HypergraphError::TooManyVertices { n: 129 })
        );
    }

    #[test]
    fn rank_cases() {
        assert_eq!(f().rank(), Ok(3));
        assert_eq!(Hypergraph::build(3, [[1, 2], [2, 3]]).unwrap().rank(), Ok(2));
        let mixed = Hypergraph::build(4, [vec![1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(mixed.rank(), Ok(3));
        let empty = Hypergraph::build(2, Vec::<Vec<i64>>::new()).unwrap();
        assert_eq!(empty.rank(), Err(HypergraphError::NoEdges));
    }

    #[test]
    fn star_and_adjacency() {
        let h = f();
        let lists = |es: Vec<&Edge>| es.iter().map(|e| e.vertices().to_vec()).collect::<Vec<_>>();
        assert_eq!(lists(h.star(4).unwrap()), vec![vec![1, 2, 4], vec![4, 5, 6]]);
        assert_eq!(lists(h.star(1).unwrap()), vec![vec![1, 2, 4], vec![1, 3, 6]]);
        assert!(h.star(7).is_err());
        assert_eq!(h.adjacent(1, 2), Ok(true));
        assert_eq!(h.adjacent(1, 5), Ok(false));
        assert_eq!(h.adjacent(1, 1), Err(HypergraphError::SameVertex(1)));
        assert!(h.adjacent(1, 9).is_err());
        let k = Hypergraph::complete_uniform(5, 3).unwrap();
        for u in 1..=5 {
            for v in 1..=5 {
                if u != v {
                    assert!(k.adjacent(u, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn components_cases() {
        assert_eq!(f().components(), vec![vec![1, 2, 3, 4, 5, 6]]);
        let two = Hypergraph::build(6, [[1, 2, 3], [4, 5, 6]]).unwrap();
        assert_eq!(two.components().len(), 2);
        let iso = Hypergraph::build(4, [[1, 2]]).unwrap();
        assert_eq!(iso.components(), vec![vec![1, 2], vec![3], vec![4]]);
    }

    #[test]
    fn induced_cases() {
        let h = f();
        let (sub, labels) = h.induced(&[1, 2, 4]).unwrap();
        assert_eq!(sub.edge_lists(), vec![vec![1, 2, 3]]);
        assert_eq!(labels, vec![1, 2, 4]);
        let (same, _) = h.induced(&[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(same, h);
        assert_eq!(h.induced(&[1, 2]).unwrap().0.m(), 0);
    }

    #[test]
    fn simplicity() {
        assert!(f().is_simple());
        assert!(!Hypergraph::build(3, [vec![1, 2], vec![1, 2, 3]]).unwrap().is_simple());
        assert!(Hypergraph::build(3, [[1, 2, 3]]).unwrap().is_simple());
    }

    #[test]
    fn complete_uniform_cases() {
        assert_eq!(Hypergraph::complete_uniform(4, 3).unwrap().m(), 4);
        let k3 = Hypergraph::complete_uniform(3, 2).unwrap();
        assert_eq!(k3.edge_lists(), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(
            Hypergraph::complete_uniform(5, 5).unwrap().edge_lists(),
            vec![vec![1, 2, 3, 4, 5]]
        );
        assert!(Hypergraph::complete_uniform(3, 1).is_err());
        assert!(Hypergraph::complete_uniform(3, 4).is_err());
    }

    #[test]
    fn mask_helpers() {
        assert_eq!(mask_vertices(vertices_mask(&[1, 5, 128])), vec![1, 5, 128]);
        let full = Hypergraph::build(128, [[1, 128]]).unwrap();
        assert_eq!(full.all_mask(), u128::MAX);
    }
}
