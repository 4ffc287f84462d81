//! Exact matching, domination and transversal numbers.
//!
//! All three problems are solved by small branch-and-bound searches over
//! `u128` vertex masks. Domination is a hitting-set problem over closed
//! neighbourhoods (a set `D` dominates `v` iff `D` meets `N[v]`), so it
//! shares the transversal engine. Certificates are the lexicographically
//! least optimum: the optimal value is found first, then the certificate is
//! fixed one element at a time, taking the smallest element that still
//! admits an optimal completion.

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{bit, mask_vertices, Hypergraph, VertexId};

/// Default cap on search nodes per solve.
pub const DEFAULT_NODE_LIMIT: u64 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("hypergraph has no edges")]
    NoEdges,
    #[error("vertex {0} is isolated")]
    IsolatedVertex(VertexId),
    #[error("search exceeded the node budget of {limit}")]
    BudgetExceeded { limit: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub node_limit: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

/// Indices into the owning hypergraph's canonical edge list, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Matching(Vec<usize>);

impl Matching {
    pub fn new(mut edges: Vec<usize>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Matching(edges)
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff every index is in range and the edges are pairwise disjoint.
    pub fn is_valid_in(&self, h: &Hypergraph) -> bool {
        let mut used = 0u128;
        for &i in &self.0 {
            if i >= h.m() {
                return false;
            }
            let e = h.edge(i).mask();
            if used & e != 0 {
                return false;
            }
            used |= e;
        }
        true
    }

    pub fn vertex_mask(&self, h: &Hypergraph) -> u128 {
        self.0.iter().fold(0, |m, &i| m | h.edge(i).mask())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveKind {
    Matching,
    Dominating,
    Transversal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Certificate {
    Matching(Matching),
    Vertices(Vec<VertexId>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub kind: SolveKind,
    pub value: usize,
    pub certificate: Certificate,
}

impl SolveResult {
    pub fn matching(&self) -> Option<&Matching> {
        match &self.certificate {
            Certificate::Matching(m) => Some(m),
            Certificate::Vertices(_) => None,
        }
    }

    pub fn vertices(&self) -> Option<&[VertexId]> {
        match &self.certificate {
            Certificate::Vertices(v) => Some(v),
            Certificate::Matching(_) => None,
        }
    }
}

/// True iff `d` dominates every vertex of `h` (closed neighbourhoods).
pub fn is_dominating(h: &Hypergraph, d: &[VertexId]) -> bool {
    let chosen = d.iter().fold(0u128, |m, &v| m | bit(v));
    h.closed_neighborhoods().iter().all(|&nb| nb & chosen != 0)
}

/// True iff `t` meets every edge of `h`.
pub fn is_transversal(h: &Hypergraph, t: &[VertexId]) -> bool {
    let chosen = t.iter().fold(0u128, |m, &v| m | bit(v));
    h.edges().iter().all(|e| e.mask() & chosen != 0)
}

fn require_edges(h: &Hypergraph) -> Result<(), SolveError> {
    if h.m() == 0 {
        Err(SolveError::NoEdges)
    } else {
        Ok(())
    }
}

fn require_no_isolated(h: &Hypergraph) -> Result<(), SolveError> {
    match h.isolated_vertices().first() {
        Some(&v) => Err(SolveError::IsolatedVertex(v)),
        None => Ok(()),
    }
}

struct Budget {
    nodes: u64,
    limit: u64,
}

impl Budget {
    fn new(opts: SolveOptions) -> Self {
        Budget {
            nodes: 0,
            limit: opts.node_limit,
        }
    }

    #[inline]
    fn tick(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            Err(SolveError::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Minimum hitting set over vertex masks.
struct HittingSearch<'a> {
    sets: &'a [u128],
    budget: Budget,
}

impl HittingSearch<'_> {
    /// Is there a set of at most `k` more vertices, none in `forbidden`,
    /// that together with `chosen` meets every set?
    fn exists(&mut self, chosen: u128, mut forbidden: u128, k: usize) -> Result<bool, SolveError> {
        self.budget.tick()?;
        let mut branch: Option<u128> = None;
        let mut packed = 0u128;
        let mut lower = 0usize;
        for &s in self.sets {
            if s & chosen != 0 {
                continue;
            }
            let allowed = s & !forbidden;
            if allowed == 0 || k == 0 {
                return Ok(false);
            }
            if allowed & packed == 0 {
                packed |= allowed;
                lower += 1;
                if lower > k {
                    return Ok(false);
                }
            }
            if branch.is_none_or(|b| allowed.count_ones() < b.count_ones()) {
                branch = Some(allowed);
            }
        }
        let Some(mut candidates) = branch else {
            return Ok(true);
        };
        while candidates != 0 {
            let v = candidates & candidates.wrapping_neg();
            candidates &= candidates - 1;
            if self.exists(chosen | v, forbidden, k - 1)? {
                return Ok(true);
            }
            forbidden |= v;
        }
        Ok(false)
    }

    /// Minimum size and lexicographically least optimal hitting set.
    fn solve(&mut self, universe: u128) -> Result<Vec<VertexId>, SolveError> {
        let outside = !universe;
        let mut k = 0;
        while !self.exists(0, outside, k)? {
            k += 1;
        }
        let mut chosen = 0u128;
        let mut below = outside;
        for step in 0..k {
            let mut pick = None;
            for v in mask_vertices(universe & !below) {
                let b = bit(v);
                // everything at or below v is now off limits for the rest
                let fence = below | (b | (b - 1));
                if self.exists(chosen | b, fence, k - step - 1)? {
                    pick = Some((b, fence));
                    break;
                }
            }
            let (b, fence) = pick.expect("an optimal completion exists by construction");
            chosen |= b;
            below = fence;
        }
        Ok(mask_vertices(chosen))
    }
}

/// Maximum set packing over the edges of a hypergraph.
struct PackingSearch {
    masks: Vec<u128>,
    budget: Budget,
}

impl PackingSearch {
    fn new(h: &Hypergraph, opts: SolveOptions) -> Self {
        PackingSearch {
            masks: h.edges().iter().map(|e| e.mask()).collect(),
            budget: Budget::new(opts),
        }
    }

    /// Can `need` more pairwise-disjoint edges be chosen from `cand`
    /// avoiding `used`?
    fn exists(&mut self, used: u128, cand: &[usize], need: usize) -> Result<bool, SolveError> {
        self.budget.tick()?;
        if need == 0 {
            return Ok(true);
        }
        let live: Vec<usize> = cand.iter().copied().filter(|&i| self.masks[i] & used == 0).collect();
        if live.len() < need {
            return Ok(false);
        }
        let mut cover = 0u128;
        let mut smallest = u32::MAX;
        for &i in &live {
            cover |= self.masks[i];
            smallest = smallest.min(self.masks[i].count_ones());
        }
        if (cover.count_ones() / smallest) < need as u32 {
            return Ok(false);
        }
        // branch on the least vertex touched by a live edge: cover it with
        // one of its edges, or leave it uncovered
        let v = cover & cover.wrapping_neg();
        for &i in &live {
            if self.masks[i] & v != 0 && self.exists(used | self.masks[i], &live, need - 1)? {
                return Ok(true);
            }
        }
        self.exists(used | v, &live, need)
    }

    fn maximum(&mut self, used: u128) -> Result<usize, SolveError> {
        let all: Vec<usize> = (0..self.masks.len()).collect();
        // greedy lower bound
        let mut acc = used;
        let mut size = 0;
        for &m in &self.masks {
            if m & acc == 0 {
                acc |= m;
                size += 1;
            }
        }
        while self.exists(used, &all, size + 1)? {
            size += 1;
        }
        Ok(size)
    }

    /// Lexicographically least packing of exactly `size` edges avoiding `used`.
    fn least(&mut self, mut used: u128, size: usize) -> Result<Option<Matching>, SolveError> {
        let all: Vec<usize> = (0..self.masks.len()).collect();
        if !self.exists(used, &all, size)? {
            return Ok(None);
        }
        let mut picked = Vec::with_capacity(size);
        let mut start = 0;
        for step in 0..size {
            let mut found = None;
            for i in start..self.masks.len() {
                if self.masks[i] & used != 0 {
                    continue;
                }
                let rest = &all[i + 1..];
                if self.exists(used | self.masks[i], rest, size - step - 1)? {
                    found = Some(i);
                    break;
                }
            }
            let i = found.expect("a completion exists by construction");
            picked.push(i);
            used |= self.masks[i];
            start = i + 1;
        }
        Ok(Some(Matching(picked)))
    }
}

pub fn max_matching(h: &Hypergraph) -> Result<SolveResult, SolveError> {
    max_matching_with(h, SolveOptions::default())
}

pub fn max_matching_with(h: &Hypergraph, opts: SolveOptions) -> Result<SolveResult, SolveError> {
    require_edges(h)?;
    let mut search = PackingSearch::new(h, opts);
    let nu = search.maximum(0)?;
    let m = search.least(0, nu)?.expect("maximum packing exists");
    Ok(SolveResult {
        kind: SolveKind::Matching,
        value: nu,
        certificate: Certificate::Matching(m),
    })
}

/// A maximum matching of `h` that uses no vertex of `forbidden`, if any.
pub fn max_matching_avoiding(h: &Hypergraph, forbidden: &[VertexId]) -> Result<Option<Matching>, SolveError> {
    max_matching_avoiding_with(h, forbidden, SolveOptions::default())
}

pub fn max_matching_avoiding_with(
    h: &Hypergraph,
    forbidden: &[VertexId],
    opts: SolveOptions,
) -> Result<Option<Matching>, SolveError> {
    if h.m() == 0 {
        return Ok(Some(Matching(Vec::new())));
    }
    let mut search = PackingSearch::new(h, opts);
    let nu = search.maximum(0)?;
    let blocked = forbidden.iter().fold(0u128, |m, &v| m | bit(v));
    search.least(blocked, nu)
}

pub fn min_dominating(h: &Hypergraph) -> Result<SolveResult, SolveError> {
    min_dominating_with(h, SolveOptions::default())
}

pub fn min_dominating_with(h: &Hypergraph, opts: SolveOptions) -> Result<SolveResult, SolveError> {
    require_no_isolated(h)?;
    let sets = h.closed_neighborhoods();
    let mut search = HittingSearch {
        sets: &sets,
        budget: Budget::new(opts),
    };
    let d = search.solve(h.all_mask())?;
    Ok(SolveResult {
        kind: SolveKind::Dominating,
        value: d.len(),
        certificate: Certificate::Vertices(d),
    })
}

pub fn min_transversal(h: &Hypergraph) -> Result<SolveResult, SolveError> {
    min_transversal_with(h, SolveOptions::default())
}

pub fn min_transversal_with(h: &Hypergraph, opts: SolveOptions) -> Result<SolveResult, SolveError> {
    require_edges(h)?;
    let sets: Vec<u128> = h.edges().iter().map(|e| e.mask()).collect();
    let mut search = HittingSearch {
        sets: &sets,
        budget: Budget::new(opts),
    };
    let t = search.solve(h.all_mask())?;
    Ok(SolveResult {
        kind: SolveKind::Transversal,
        value: t.len(),
        certificate: Certificate::Vertices(t),
    })
}

/// ν, γ and τ together with the inequalities that must hold between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub nu: usize,
    pub gamma: usize,
    pub tau: usize,
    pub rank: usize,
    pub chain_ok: bool,
    pub violated: Vec<String>,
}

pub fn check_bound_chain(h: &Hypergraph) -> Result<BoundReport, SolveError> {
    check_bound_chain_with(h, SolveOptions::default())
}

pub fn check_bound_chain_with(h: &Hypergraph, opts: SolveOptions) -> Result<BoundReport, SolveError> {
    require_edges(h)?;
    require_no_isolated(h)?;
    let nu = max_matching_with(h, opts)?.value;
    let gamma = min_dominating_with(h, opts)?.value;
    let tau = min_transversal_with(h, opts)?.value;
    let rank = h.rank().map_err(|_| SolveError::NoEdges)?;
    Ok(bound_report(nu, gamma, tau, rank, h.is_uniform(2)))
}

/// Evaluates the inequality chain on already-computed values.
pub fn bound_report(nu: usize, gamma: usize, tau: usize, rank: usize, two_uniform: bool) -> BoundReport {
    let mut violated = Vec::new();
    let mut check = |ok: bool, name: &str| {
        if !ok {
            violated.push(name.to_string());
        }
    };
    check(nu <= tau, "nu<=tau");
    check(gamma <= tau, "gamma<=tau");
    check(tau <= rank * nu, "tau<=r*nu");
    check(gamma <= (rank - 1) * nu, "gamma<=(r-1)*nu");
    if two_uniform {
        check(gamma <= nu, "gamma<=nu");
    }
    BoundReport {
        nu,
        gamma,
        tau,
        rank,
        chain_ok: violated.is_empty(),
        violated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Hypergraph {
        Hypergraph::build(6, [[1, 2, 4], [2, 3, 5], [1, 3, 6], [4, 5, 6]]).unwrap()
    }

    fn k43() -> Hypergraph {
        Hypergraph::complete_uniform(4, 3).unwrap()
    }

    fn two_triples() -> Hypergraph {
        Hypergraph::build(6, [[1, 2, 3], [4, 5, 6]]).unwrap()
    }

    #[test]
    fn matching_numbers() {
        assert_eq!(max_matching(&f()).unwrap().value, 1);
        assert_eq!(max_matching(&two_triples()).unwrap().value, 2);
        assert_eq!(max_matching(&k43()).unwrap().value, 1);
        let empty = Hypergraph::build(3, Vec::<Vec<i64>>::new()).unwrap();
        assert_eq!(max_matching(&empty), Err(SolveError::NoEdges));
    }

    #[test]
    fn matching_certificate_is_lex_least() {
        let r = max_matching(&f()).unwrap();
        assert_eq!(r.matching().unwrap().edges(), &[0]);
        // path 1-2-3-4: {1,2},{3,4} is the only maximum matching
        let p = Hypergraph::build(4, [[1, 2], [2, 3], [3, 4]]).unwrap();
        assert_eq!(max_matching(&p).unwrap().matching().unwrap().edges(), &[0, 2]);
    }

    #[test]
    fn avoiding() {
        let h = f();
        let m = max_matching_avoiding(&h, &[4, 5]).unwrap().unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(h.edge(m.edges()[0]).vertices(), &[1, 3, 6]);
        let single = Hypergraph::build(3, [[1, 2, 3]]).unwrap();
        assert_eq!(max_matching_avoiding(&single, &[1]).unwrap(), None);
        assert_eq!(max_matching_avoiding(&h, &[]).unwrap().unwrap().len(), 1);
        // F has no edge avoiding the non-adjacent pair {1,5}
        assert_eq!(max_matching_avoiding(&h, &[1, 5]).unwrap(), None);
    }

    #[test]
    fn domination_numbers() {
        let r = min_dominating(&f()).unwrap();
        assert_eq!(r.value, 2);
        assert!(is_dominating(&f(), r.vertices().unwrap()));
        let k = min_dominating(&k43()).unwrap();
        assert_eq!((k.value, k.vertices().unwrap()), (1, &[1][..]));
        assert_eq!(min_dominating(&two_triples()).unwrap().value, 2);
        let iso = Hypergraph::build(3, [[1, 2]]).unwrap();
        assert_eq!(min_dominating(&iso), Err(SolveError::IsolatedVertex(3)));
    }

    #[test]
    fn transversal_numbers() {
        let r = min_transversal(&f()).unwrap();
        assert_eq!(r.value, 2);
        // {1,5} hits every edge of F and is lexicographically least
        assert_eq!(r.vertices().unwrap(), &[1, 5]);
        assert_eq!(min_transversal(&k43()).unwrap().value, 2);
        assert_eq!(
            min_transversal(&Hypergraph::build(3, [[1, 2, 3]]).unwrap())
                .unwrap()
                .value,
            1
        );
    }

    #[test]
    fn bound_chain_examples() {
        let r = check_bound_chain(&f()).unwrap();
        assert_eq!((r.nu, r.gamma, r.tau), (1, 2, 2));
        assert!(r.chain_ok);
        assert_eq!(r.gamma, (r.rank - 1) * r.nu);
        let r = check_bound_chain(&k43()).unwrap();
        assert_eq!((r.nu, r.gamma, r.tau), (1, 1, 2));
        let tri = Hypergraph::complete_uniform(3, 2).unwrap();
        let r = check_bound_chain(&tri).unwrap();
        assert_eq!((r.nu, r.gamma, r.tau), (1, 1, 2));
        assert!(r.chain_ok);
    }

    #[test]
    fn bound_report_flags_violations() {
        let r = bound_report(2, 5, 3, 3, false);
        assert!(!r.chain_ok);
        assert_eq!(r.violated, vec!["gamma<=tau", "gamma<=(r-1)*nu"]);
        let g = bound_report(1, 2, 2, 2, true);
        assert_eq!(g.violated, vec!["gamma<=(r-1)*nu", "gamma<=nu"]);
    }

    #[test]
    fn budget_abort() {
        let h = Hypergraph::complete_uniform(9, 3).unwrap();
        let tiny = SolveOptions { node_limit: 3 };
        assert_eq!(
            min_transversal_with(&h, tiny),
            Err(SolveError::BudgetExceeded { limit: 3 })
        );
        assert!(matches!(
            max_matching_with(&h, tiny),
            Err(SolveError::BudgetExceeded { .. })
        ));
    }
}
