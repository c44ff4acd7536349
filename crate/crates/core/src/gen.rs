//! Seeded random instances for the self-test, the acceptance suite and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::a2sat::{Cnf2, Lit};
use crate::graphcut::{Digraph, Graph};
use crate::mwc::{MulticutInstance, MwcInstance};
use crate::paircut::PairCutInstance;

pub fn random_digraph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Digraph {
    let mut d = Digraph::with_vertices(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                d.add_arc(u, v);
            }
        }
    }
    d
}

pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// `count` distinct vertices of 0..n, sorted.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(count.min(n));
    all.sort_unstable();
    all
}

/// Pair-cut instance on 3..=max_n vertices with source 0 and pairs avoiding it.
pub fn random_dpc<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_k: usize) -> PairCutInstance {
    let n = rng.gen_range(3..=max_n.max(3));
    let mut d = random_digraph(rng, n, 0.3);
    for v in 1..n {
        if rng.gen_bool(0.3) {
            d.add_arc(0, v);
        }
    }
    let pairs: Vec<(usize, usize)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let a = rng.gen_range(1..n);
            let b = rng.gen_range(1..n);
            (a, b)
        })
        .collect();
    let k = rng.gen_range(0..=max_k);
    PairCutInstance::with_pairs(d, 0, &pairs, k).expect("vertices in range")
}

pub fn random_cnf2<R: Rng + ?Sized>(rng: &mut R, max_vars: usize, max_clauses: usize) -> Cnf2 {
    let n = rng.gen_range(1..=max_vars.max(1));
    let m = rng.gen_range(1..=max_clauses.max(1));
    let clauses = (0..m)
        .map(|_| {
            let len = if rng.gen_bool(0.15) { 1 } else { 2 };
            (0..len).map(|_| Lit { var: rng.gen_range(0..n), neg: rng.gen_bool(0.5) }).collect()
        })
        .collect();
    Cnf2::new(n, clauses).expect("variables in range")
}

/// Multiway cut instance with 2..=max_terminals terminals. With undeletable terminals no
/// two terminals are adjacent.
pub fn random_mwc<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_terminals: usize, max_k: usize, deletable: bool) -> MwcInstance {
    let n = rng.gen_range(4..=max_n.max(4));
    let nt = rng.gen_range(2..=max_terminals.max(2).min(n - 1));
    let terminals = random_subset(rng, n, nt);
    let mut g = Graph::with_vertices(n);
    for u in 0..n {
        for v in u + 1..n {
            let both = terminals.contains(&u) && terminals.contains(&v);
            if (!both || deletable) && rng.gen_bool(0.35) {
                g.add_edge(u, v);
            }
        }
    }
    let k = rng.gen_range(0..=max_k);
    MwcInstance::new(g, terminals, k, deletable).expect("terminals in range")
}

/// Multicut instance with 1..=max_pairs pairs of distinct, non-adjacent terminals.
pub fn random_multicut<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_pairs: usize, max_k: usize) -> MulticutInstance {
    let n = rng.gen_range(4..=max_n.max(4));
    let g = random_graph(rng, n, 0.35);
    let mut pairs = Vec::new();
    for _ in 0..rng.gen_range(1..=max_pairs.max(1)) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && !g.has_edge(a, b) {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    if pairs.is_empty() {
        if let Some((a, b)) = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).find(|&(a, b)| !g.has_edge(a, b)) {
            pairs.push((a, b));
        }
    }
    let k = rng.gen_range(0..=max_k);
    MulticutInstance { graph: g, pairs, k }
}

/// Multiway cut instance with 3..=max_terminals undeletable terminals, each pendant to
/// its own vertex of a random core with edge probability `p`. Dense cores give
/// fractional LP optima, so terminals tend to survive the terminal reduction.
pub fn planted_mwc<R: Rng + ?Sized>(rng: &mut R, max_n: usize, max_terminals: usize, max_k: usize, p: f64) -> MwcInstance {
    let s = rng.gen_range(3..=max_terminals.max(3));
    let n = rng.gen_range(2 * s + 1..=max_n.max(2 * s + 1));
    let core = n - s;
    let mut g = random_graph(rng, core, p);
    let attach = random_subset(rng, core, s);
    let terminals = attach
        .iter()
        .map(|&a| {
            let t = g.add_vertex(g.n().to_string());
            g.add_edge(t, a);
            t
        })
        .collect();
    let k = rng.gen_range(1..=max_k.max(1));
    MwcInstance::new(g, terminals, k, false).expect("terminals in range")
}
