//! Edge peeling and the structures read off a peeled hypergraph.
//!
//! Peeling repeatedly deletes an edge that contains no vertex of degree 1
//! in the current hypergraph. Deleting such an edge never isolates a vertex.
//! At the fixed point every edge owns at least one degree-1 vertex, so every
//! dominating set is also a transversal, and the non-degree-1 vertices of a
//! maximum matching dominate.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{self, Matching, SolveError};
use crate::hypergraph::{mask_vertices, Hypergraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("hypergraph has no edges")]
    NoEdges,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(VertexId),
    #[error("matching of size {given} is not maximum (nu = {nu})")]
    NotMaximumMatching { given: usize, nu: usize },
    #[error("edge {edge} contains no degree-1 vertex")]
    PeelPrecondition { edge: usize },
    #[error("matching edges {edges:?} consist of degree-1 vertices only and contribute nothing")]
    ValidButEmpty { edges: Vec<usize> },
    #[error("contraction precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// The fixed point of peeling and how it was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelTrace {
    pub result: Hypergraph,
    /// Indices into the input's edge list, in deletion order.
    pub deleted: Vec<usize>,
    /// Number of scans, including the final one that found nothing to delete.
    pub rounds: usize,
}

fn peel_checks(h: &Hypergraph) -> Result<(), ReduceError> {
    if h.m() == 0 {
        return Err(ReduceError::NoEdges);
    }
    if let Some(&v) = h.isolated_vertices().first() {
        return Err(ReduceError::IsolatedVertex(v));
    }
    Ok(())
}

fn peel_by<F>(h: &Hypergraph, mut choose: F) -> Result<PeelTrace, ReduceError>
where
    F: FnMut(&[usize]) -> usize,
{
    peel_checks(h)?;
    let mut alive = vec![true; h.m()];
    let mut degree = h.degrees().to_vec();
    let mut deleted = Vec::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let eligible: Vec<usize> = (0..h.m())
            .filter(|&i| alive[i] && h.edge(i).vertices().iter().all(|&v| degree[(v - 1) as usize] != 1))
            .collect();
        if eligible.is_empty() {
            break;
        }
        let i = choose(&eligible);
        alive[i] = false;
        for &v in h.edge(i).vertices() {
            degree[(v - 1) as usize] -= 1;
        }
        deleted.push(i);
    }
    let result = h.without_edges(&deleted);
    Ok(PeelTrace {
        result,
        deleted,
        rounds,
    })
}

/// Peels `h`, always deleting the canonically least eligible edge.
pub fn peel(h: &Hypergraph) -> Result<PeelTrace, ReduceError> {
    peel_by(h, |eligible| eligible[0])
}

/// Peels `h` choosing uniformly among eligible edges with a seeded RNG.
/// Used to probe whether reported properties depend on the deletion order.
pub fn peel_randomized(h: &Hypergraph, seed: u64) -> Result<PeelTrace, ReduceError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    peel_by(h, |eligible| *eligible.choose(&mut rng).expect("nonempty"))
}

/// Vertices of degree 1 in `h`, as a mask.
fn degree_one_mask(h: &Hypergraph) -> u128 {
    h.vertices()
        .filter(|&v| h.degree(v) == 1)
        .fold(0u128, |m, v| m | crate::hypergraph::bit(v))
}

/// Union over the matching edges of their non-degree-1 vertices.
///
/// `m` must be a maximum matching of `hstar` and every edge of `hstar` must
/// contain a degree-1 vertex. A matching edge made only of degree-1 vertices
/// (an isolated edge) contributes nothing; that case is reported as
/// [`ReduceError::ValidButEmpty`], see
/// [`dominating_from_matching_with_fallback`].
pub fn dominating_from_matching(hstar: &Hypergraph, m: &Matching) -> Result<Vec<VertexId>, ReduceError> {
    let (set, empty) = contributions(hstar, m)?;
    if !empty.is_empty() {
        return Err(ReduceError::ValidButEmpty { edges: empty });
    }
    Ok(mask_vertices(set))
}

/// As [`dominating_from_matching`], but an edge that contributes nothing
/// adds its least vertex instead.
pub fn dominating_from_matching_with_fallback(hstar: &Hypergraph, m: &Matching) -> Result<Vec<VertexId>, ReduceError> {
    let (mut set, empty) = contributions(hstar, m)?;
    for i in empty {
        set |= crate::hypergraph::bit(hstar.edge(i).vertices()[0]);
    }
    Ok(mask_vertices(set))
}

fn contributions(hstar: &Hypergraph, m: &Matching) -> Result<(u128, Vec<usize>), ReduceError> {
    if hstar.m() == 0 {
        return Err(ReduceError::NoEdges);
    }
    let ones = degree_one_mask(hstar);
    if let Some(i) = hstar.edges().iter().position(|e| e.mask() & ones == 0) {
        return Err(ReduceError::PeelPrecondition { edge: i });
    }
    let nu = exact::max_matching(hstar)?.value;
    if !m.is_valid_in(hstar) || m.len() != nu {
        return Err(ReduceError::NotMaximumMatching { given: m.len(), nu });
    }
    let mut set = 0u128;
    let mut empty = Vec::new();
    for &i in m.edges() {
        let rest = hstar.edge(i).mask() & !ones;
        if rest == 0 {
            empty.push(i);
        }
        set |= rest;
    }
    Ok((set, empty))
}

/// A simple graph given on original vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractedGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
}

impl ContractedGraph {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_complete(&self) -> bool {
        let k = self.vertices.len();
        self.edges.len() == k * (k.saturating_sub(1)) / 2
    }
}

/// Drops the unique degree-1 vertex from every edge of a 3-uniform
/// hypergraph and merges parallel results.
pub fn edge_contract(h: &Hypergraph) -> Result<ContractedGraph, ReduceError> {
    if !h.is_uniform(3) {
        return Err(ReduceError::PreconditionViolated("hypergraph is not 3-uniform".into()));
    }
    let ones = degree_one_mask(h);
    let mut edges = Vec::with_capacity(h.m());
    for (i, e) in h.edges().iter().enumerate() {
        let count = (e.mask() & ones).count_ones();
        if count != 1 {
            return Err(ReduceError::PreconditionViolated(format!(
                "edge {i} {:?} has {count} degree-1 vertices",
                e
            )));
        }
        let pair = mask_vertices(e.mask() & !ones);
        edges.push([pair[0], pair[1]]);
    }
    edges.sort_unstable();
    edges.dedup();
    let vertices = h.vertices().filter(|&v| h.degree(v) >= 2).collect();
    Ok(ContractedGraph { vertices, edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub vertices: Vec<VertexId>,
    pub nu: usize,
    pub gamma: usize,
    /// Order of the contracted graph, when contraction applies.
    pub contraction_order: Option<usize>,
    pub contraction_is_complete_odd: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructReport {
    pub is_three_uniform: bool,
    pub every_edge_exactly_one_deg1: bool,
    pub per_component: Vec<ComponentReport>,
}

impl StructReport {
    /// All structural checks hold.
    pub fn all_ok(&self) -> bool {
        self.is_three_uniform
            && self.every_edge_exactly_one_deg1
            && self.per_component.iter().all(|c| c.contraction_is_complete_odd)
    }
}

/// Checks the shape a peeled extremal hypergraph is expected to have.
/// Failures are recorded in the report, not raised.
pub fn hstar_report(h: &Hypergraph) -> Result<StructReport, ReduceError> {
    let ones = degree_one_mask(h);
    let is_three_uniform = h.m() > 0 && h.is_uniform(3);
    let every_edge_exactly_one_deg1 = h.edges().iter().all(|e| (e.mask() & ones).count_ones() == 1);
    let mut per_component = Vec::new();
    for class in h.components() {
        if class.len() == 1 && h.degree(class[0]) == 0 {
            continue;
        }
        let (sub, labels) = h.induced(&class).map_err(|_| ReduceError::NoEdges)?;
        let nu = exact::max_matching(&sub)?.value;
        let gamma = exact::min_dominating(&sub)?.value;
        let contracted = edge_contract(&sub).ok();
        let contraction_order = contracted.as_ref().map(ContractedGraph::order);
        let contraction_is_complete_odd = contracted
            .as_ref()
            .is_some_and(|g| g.is_complete() && g.order() == 2 * nu + 1);
        per_component.push(ComponentReport {
            vertices: labels,
            nu,
            gamma,
            contraction_order,
            contraction_is_complete_odd,
        });
    }
    Ok(StructReport {
        is_three_uniform,
        every_edge_exactly_one_deg1,
        per_component,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Hypergraph {
        Hypergraph::build(6, [[1, 2, 4], [2, 3, 5], [1, 3, 6], [4, 5, 6]]).unwrap()
    }

    /// H3(A) for the upper triangle (2, 1, 2): X = {1,2,3}; middles 4,5 for
    /// pair (1,2), 6 for (1,3), 7,8 for (2,3).
    fn h3a_example() -> Hypergraph {
        Hypergraph::build(8, [[1, 4, 2], [1, 5, 2], [1, 6, 3], [2, 7, 3], [2, 8, 3]]).unwrap()
    }

    fn edge_index(h: &Hypergraph, vs: &[VertexId]) -> usize {
        h.edges().iter().position(|e| e.vertices() == vs).unwrap()
    }

    #[test]
    fn peel_f() {
        let t = peel(&f()).unwrap();
        assert_eq!(t.deleted, vec![0]);
        assert_eq!(t.result.edge_lists(), vec![vec![1, 3, 6], vec![2, 3, 5], vec![4, 5, 6]]);
        assert_eq!(t.rounds, 2);
    }

    #[test]
    fn peel_h3a_is_identity() {
        let h = h3a_example();
        let t = peel(&h).unwrap();
        assert!(t.deleted.is_empty());
        assert_eq!(t.result, h);
    }

    #[test]
    fn peel_triangle() {
        let tri = Hypergraph::complete_uniform(3, 2).unwrap();
        let t = peel(&tri).unwrap();
        assert_eq!(t.result.edge_lists(), vec![vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn peel_errors() {
        let empty = Hypergraph::build(2, Vec::<Vec<i64>>::new()).unwrap();
        assert_eq!(peel(&empty), Err(ReduceError::NoEdges));
        let iso = Hypergraph::build(3, [[1, 2]]).unwrap();
        assert_eq!(peel(&iso), Err(ReduceError::IsolatedVertex(3)));
    }

    #[test]
    fn dominating_from_matching_examples() {
        let h = h3a_example();
        let m = Matching::new(vec![edge_index(&h, &[1, 2, 4])]);
        assert_eq!(dominating_from_matching(&h, &m).unwrap(), vec![1, 2]);

        let pf = peel(&f()).unwrap().result;
        let m = Matching::new(vec![edge_index(&pf, &[1, 3, 6])]);
        assert_eq!(dominating_from_matching(&pf, &m).unwrap(), vec![3, 6]);
    }

    #[test]
    fn dominating_from_matching_single_edge() {
        let single = Hypergraph::build(3, [[1, 2, 3]]).unwrap();
        let m = Matching::new(vec![0]);
        assert_eq!(
            dominating_from_matching(&single, &m),
            Err(ReduceError::ValidButEmpty { edges: vec![0] })
        );
        assert_eq!(dominating_from_matching_with_fallback(&single, &m).unwrap(), vec![1]);
    }

    #[test]
    fn dominating_from_matching_rejects_bad_inputs() {
        let h = Hypergraph::build(6, [[1, 2, 3], [4, 5, 6]]).unwrap();
        let short = Matching::new(vec![0]);
        assert_eq!(
            dominating_from_matching(&h, &short),
            Err(ReduceError::NotMaximumMatching { given: 1, nu: 2 })
        );
        assert_eq!(
            dominating_from_matching(&f(), &Matching::new(vec![0])),
            Err(ReduceError::PeelPrecondition { edge: 0 })
        );
    }

    #[test]
    fn contract_examples() {
        let g = edge_contract(&h3a_example()).unwrap();
        assert_eq!(g.vertices, vec![1, 2, 3]);
        assert_eq!(g.edges, vec![[1, 2], [1, 3], [2, 3]]);
        assert!(g.is_complete());

        let g = edge_contract(&peel(&f()).unwrap().result).unwrap();
        assert_eq!(g.vertices, vec![3, 5, 6]);
        assert_eq!(g.edges, vec![[3, 5], [3, 6], [5, 6]]);

        let single = Hypergraph::build(3, [[1, 2, 3]]).unwrap();
        assert!(matches!(
            edge_contract(&single),
            Err(ReduceError::PreconditionViolated(_))
        ));
        let tri = Hypergraph::complete_uniform(3, 2).unwrap();
        assert!(matches!(edge_contract(&tri), Err(ReduceError::PreconditionViolated(_))));
    }

    #[test]
    fn report_examples() {
        let r = hstar_report(&peel(&f()).unwrap().result).unwrap();
        assert!(r.all_ok());
        assert_eq!(r.per_component.len(), 1);
        assert_eq!(r.per_component[0].contraction_order, Some(3));
        assert_eq!((r.per_component[0].nu, r.per_component[0].gamma), (1, 2));

        let tri = Hypergraph::complete_uniform(3, 2).unwrap();
        assert!(!hstar_report(&tri).unwrap().is_three_uniform);

        assert!(hstar_report(&h3a_example()).unwrap().all_ok());
    }

    #[test]
    fn peel_is_deterministic_and_randomized_reaches_a_fixed_point() {
        let h = Hypergraph::complete_uniform(5, 3).unwrap();
        assert_eq!(peel(&h).unwrap(), peel(&h).unwrap());
        for seed in 0..10 {
            let t = peel_randomized(&h, seed).unwrap();
            let ones = degree_one_mask(&t.result);
            assert!(t.result.edges().iter().all(|e| e.mask() & ones != 0));
            assert!(!t.result.has_isolated_vertex());
        }
    }
}
