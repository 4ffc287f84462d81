//! Brute-force oracles, independent of the branch-and-bound code.

#![allow(dead_code)]

use hyperdom::Hypergraph;

fn masks(h: &Hypergraph) -> Vec<u128> {
    h.edges().iter().map(|e| e.mask()).collect()
}

/// ν by enumerating every edge subset.
pub fn brute_nu(h: &Hypergraph) -> usize {
    let ms = masks(h);
    assert!(ms.len() <= 22, "edge subsets too many for brute force");
    let mut best = 0;
    for sub in 0u32..(1 << ms.len()) {
        let mut used = 0u128;
        let mut ok = true;
        for (i, &m) in ms.iter().enumerate() {
            if sub >> i & 1 == 1 {
                if used & m != 0 {
                    ok = false;
                    break;
                }
                used |= m;
            }
        }
        if ok {
            best = best.max(sub.count_ones() as usize);
        }
    }
    best
}

fn dominates(h: &Hypergraph, set: u128) -> bool {
    (1..=h.n() as u32).all(|v| {
        let b = 1u128 << (v - 1);
        set & b != 0 || h.edges().iter().any(|e| e.mask() & b != 0 && e.mask() & set != 0)
    })
}

fn hits(h: &Hypergraph, set: u128) -> bool {
    h.edges().iter().all(|e| e.mask() & set != 0)
}

fn min_subset(h: &Hypergraph, ok: impl Fn(u128) -> bool) -> usize {
    let n = h.n();
    assert!(n <= 16, "vertex subsets too many for brute force");
    (0u128..(1 << n))
        .filter(|&s| ok(s))
        .map(|s| s.count_ones() as usize)
        .min()
        .expect("the full vertex set always works")
}

/// γ by enumerating every vertex subset.
pub fn brute_gamma(h: &Hypergraph) -> usize {
    min_subset(h, |s| dominates(h, s))
}

/// τ by enumerating every vertex subset.
pub fn brute_tau(h: &Hypergraph) -> usize {
    min_subset(h, |s| hits(h, s))
}

/// Lexicographically least minimum dominating set, by enumeration.
pub fn brute_least_dominating(h: &Hypergraph) -> Vec<u32> {
    let g = brute_gamma(h);
    let n = h.n();
    let mut best: Option<Vec<u32>> = None;
    for s in 0u128..(1 << n) {
        if s.count_ones() as usize == g && dominates(h, s) {
            let v: Vec<u32> = (1..=n as u32).filter(|&u| s >> (u - 1) & 1 == 1).collect();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best.unwrap()
}

/// Small deterministic LCG so these helpers do not share the library's RNG.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, k: u64) -> u64 {
        self.next() % k
    }
}
