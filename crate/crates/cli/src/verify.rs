//! Corpus verification: recognizer against oracle, bound chain, and hgr
//! round trip on every instance.

use std::fmt;
use std::ops::Add;
use std::time::Instant;

use hyperdom::families::{sample_random_hypergraph, FamilyError};
use hyperdom::recognize::{decide_extremal, DecideMode, RecognizeError};
use hyperdom::{check_bound_chain, Hypergraph, SolveError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::hgr::{emit_hgr, parse_hgr};

/// Largest `k` accepted by the exhaustive sweep (2^20 edge subsets at k = 5).
pub const MAX_EXHAUSTIVE_N: usize = 5;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Recognize(RecognizeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("could not start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub agreements: u64,
    pub disagreements: u64,
    pub bound_violations: u64,
    pub round_trip_failures: u64,
    /// Instances with γ = 2ν.
    pub members: u64,
}

impl Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally {
            checked: self.checked + o.checked,
            agreements: self.agreements + o.agreements,
            disagreements: self.disagreements + o.disagreements,
            bound_violations: self.bound_violations + o.bound_violations,
            round_trip_failures: self.round_trip_failures + o.round_trip_failures,
            members: self.members + o.members,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    #[serde(flatten)]
    pub tally: Tally,
    pub wall_time_ms: u128,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        let t = &self.tally;
        t.disagreements == 0 && t.bound_violations == 0 && t.round_trip_failures == 0
    }
}

impl fmt::Display for VerifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.tally;
        writeln!(f, "checked={}", t.checked)?;
        writeln!(f, "agreements={}", t.agreements)?;
        writeln!(f, "disagreements={}", t.disagreements)?;
        writeln!(f, "bound_violations={}", t.bound_violations)?;
        writeln!(f, "round_trip_failures={}", t.round_trip_failures)?;
        writeln!(f, "members={}", t.members)?;
        write!(f, "wall_time_ms={}", self.wall_time_ms)
    }
}

/// Checks one instance. Budget aborts and other solver failures are errors,
/// not disagreements.
pub fn check_instance(h: &Hypergraph) -> Result<Tally, VerifyError> {
    let mut t = Tally {
        checked: 1,
        ..Tally::default()
    };
    match decide_extremal(h, DecideMode::Both) {
        Ok(member) => {
            t.agreements = 1;
            t.members = member as u64;
        }
        Err(RecognizeError::Disagreement { .. }) => t.disagreements = 1,
        Err(e) => return Err(VerifyError::Recognize(e)),
    }
    if !check_bound_chain(h)?.chain_ok {
        t.bound_violations = 1;
    }
    if parse_hgr(&emit_hgr(h)).ok().as_ref() != Some(h) {
        t.round_trip_failures = 1;
    }
    Ok(t)
}

/// All 2- and 3-subsets of `1..=k`, in lexicographic order.
fn edge_pool(k: usize) -> Vec<Vec<u32>> {
    let mut pool = Vec::new();
    for mask in 1u32..(1 << k) {
        let size = mask.count_ones();
        if size == 2 || size == 3 {
            pool.push((1..=k as u32).filter(|v| mask >> (v - 1) & 1 == 1).collect());
        }
    }
    pool.sort();
    pool
}

fn run_pool<F>(jobs: Option<usize>, work: F) -> Result<Tally, VerifyError>
where
    F: FnOnce() -> Result<Tally, VerifyError> + Send,
{
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j).build()?.install(work),
        None => work(),
    }
}

/// Every hypergraph on `k` vertices whose edges are 2- or 3-subsets and
/// which has no isolated vertex. `k` must be at most [`MAX_EXHAUSTIVE_N`].
pub fn verify_exhaustive(k: usize, jobs: Option<usize>) -> Result<VerifySummary, VerifyError> {
    assert!(
        k <= MAX_EXHAUSTIVE_N,
        "exhaustive sweep is limited to {MAX_EXHAUSTIVE_N} vertices"
    );
    let start = Instant::now();
    let pool = edge_pool(k);
    let total: u64 = 1 << pool.len();
    let tally = run_pool(jobs, || {
        (1..total)
            .into_par_iter()
            .map(|sub| {
                let lists = (0..pool.len()).filter(|i| sub >> i & 1 == 1).map(|i| pool[i].clone());
                let h = Hypergraph::from_vertex_lists(k, lists).expect("pool edges are in range");
                if h.has_isolated_vertex() {
                    Ok(Tally::default())
                } else {
                    check_instance(&h)
                }
            })
            .try_reduce(Tally::default, |a, b| Ok(a + b))
    })?;
    Ok(VerifySummary {
        tally,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

/// The `i`-th random instance of a run. Depends only on `(seed, i, n, rank)`,
/// so results do not depend on the worker count. When `m` is too small to
/// cover every vertex in practice, it is stepped up until sampling succeeds.
pub fn random_instance(seed: u64, i: u64, n: usize, rank: usize) -> Result<Hypergraph, FamilyError> {
    let inst_seed = seed ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(inst_seed);
    let rank = rank.min(n);
    let available = (2..=rank).map(|r| binomial(n, r)).sum::<usize>();
    let lo = n.div_ceil(rank).max(1);
    let hi = (2 * n).clamp(lo, available.max(lo));
    let first = rng.gen_range(lo..=hi);
    let sample_seed: u64 = rng.gen();
    let mut last = None;
    for m in first..=available.max(first) {
        match sample_random_hypergraph(n, rank, m, sample_seed) {
            Ok(h) => return Ok(h),
            Err(e @ FamilyError::RetriesExhausted { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn verify_random(
    count: u64,
    n: usize,
    rank: usize,
    seed: u64,
    jobs: Option<usize>,
) -> Result<VerifySummary, VerifyError> {
    let start = Instant::now();
    let tally = run_pool(jobs, || {
        (0..count)
            .into_par_iter()
            .map(|i| check_instance(&random_instance(seed, i, n, rank)?))
            .try_reduce(Tally::default, |a, b| Ok(a + b))
    })?;
    Ok(VerifySummary {
        tally,
        wall_time_ms: start.elapsed().as_millis(),
    })
}
