//! Exhaustive reference solvers for desk-scale instances. Nothing here touches the field,
//! matroid or representative-set code, and linkage uses its own flow routine rather than
//! the one in `graphcut`.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;

use crate::a2sat::Cnf2;
use crate::error::{Error, Result};
use crate::graphcut::{add_sink_only_copies, Digraph, Graph};

/// Hard caps on instance size; oracles refuse anything larger.
#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_k: usize,
    pub max_candidates: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_vertices: 10, max_k: 3, max_candidates: 1 << 20 }
    }
}

impl OracleBudget {
    /// Larger vertex cap for checking kernel outputs, which carry copies and twins.
    pub fn wide() -> Self {
        OracleBudget { max_vertices: 40, max_k: 4, max_candidates: 1 << 20 }
    }

    fn check(&self, what: &str, n: usize, k: usize, candidates: u64) -> Result<()> {
        if n > self.max_vertices {
            return Err(Error::Budget(format!("{what}: {n} vertices > {}", self.max_vertices)));
        }
        if k > self.max_k {
            return Err(Error::Budget(format!("{what}: k = {k} > {}", self.max_k)));
        }
        if candidates > self.max_candidates {
            return Err(Error::Budget(format!("{what}: {candidates} candidates > {}", self.max_candidates)));
        }
        Ok(())
    }
}

fn binomial_prefix(n: usize, k: usize) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for i in 0..=k.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul((n - i) as u64) / (i as u64 + 1);
    }
    total
}

/// Subsets of `pool` in order of size, then lexicographically.
fn subsets_by_size(pool: &[usize], max: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..=max.min(pool.len())).flat_map(move |r| pool.iter().copied().combinations(r))
}

fn reach(adj: &[Vec<usize>], from: &[usize], blocked: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in from {
        if !blocked[s] && !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !blocked[v] && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

fn out_lists(d: &Digraph) -> Vec<Vec<usize>> {
    (0..d.n()).map(|v| d.out_neighbors(v).iter().copied().collect()).collect()
}

fn undirected_lists(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).iter().copied().collect()).collect()
}

fn blocked_mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut b = vec![false; n];
    for &v in set {
        b[v] = true;
    }
    b
}

/// Whether `t` can be saturated by vertex-disjoint paths from `s` (zero-length paths
/// allowed). Max-flow by depth-first augmentation on a capacity matrix.
pub fn brute_linked(d: &Digraph, s: &[usize], t: &[usize]) -> Result<bool> {
    let t: Vec<usize> = t.iter().copied().unique().collect();
    let s: Vec<usize> = s.iter().copied().unique().collect();
    if t.len() > s.len() {
        return Ok(false);
    }
    let n = d.n();
    if n > 200 {
        return Err(Error::Budget(format!("linkage: {n} vertices > 200")));
    }
    // nodes: v_in = v, v_out = n + v, source 2n, sink 2n+1
    let size = 2 * n + 2;
    let mut cap = vec![vec![0i32; size]; size];
    for v in 0..n {
        cap[v][n + v] = 1;
        for &w in d.out_neighbors(v) {
            cap[n + v][w] = 1;
        }
    }
    for &v in &s {
        cap[2 * n][v] = 1;
    }
    for &v in &t {
        cap[n + v][2 * n + 1] = 1;
    }
    let mut flow = 0;
    loop {
        let mut seen = vec![false; size];
        if !dfs_augment(&mut cap, &mut seen, 2 * n, 2 * n + 1) {
            break;
        }
        flow += 1;
    }
    Ok(flow == t.len())
}

fn dfs_augment(cap: &mut [Vec<i32>], seen: &mut [bool], u: usize, sink: usize) -> bool {
    if u == sink {
        return true;
    }
    seen[u] = true;
    for v in 0..cap.len() {
        if cap[u][v] > 0 && !seen[v] && dfs_augment(cap, seen, v, sink) {
            cap[u][v] -= 1;
            cap[v][u] += 1;
            return true;
        }
    }
    false
}

/// Same question as `brute_linked`, answered by backtracking over explicit path systems.
pub fn path_packing_linked(d: &Digraph, s: &[usize], t: &[usize]) -> Result<bool> {
    let n = d.n();
    if n > 16 {
        return Err(Error::Budget(format!("path packing: {n} vertices > 16")));
    }
    let t: Vec<usize> = t.iter().copied().unique().collect();
    let is_source = blocked_mask(n, s);
    let mut memo = HashMap::new();
    Ok(pack(d, &is_source, &t, 0, 0u32, &mut memo))
}

fn pack(d: &Digraph, is_source: &[bool], t: &[usize], i: usize, used: u32, memo: &mut HashMap<(usize, u32), bool>) -> bool {
    if i == t.len() {
        return true;
    }
    if let Some(&r) = memo.get(&(i, used)) {
        return r;
    }
    // walk backwards from t[i] to any unused source, avoiding used vertices and later sinks
    let mut later = 0u32;
    for &x in &t[i + 1..] {
        later |= 1 << x;
    }
    let mut found = false;
    let mut stack = vec![(t[i], 1u32 << t[i])];
    if (used | later) >> t[i] & 1 == 0 {
        while let Some((v, path)) = stack.pop() {
            if is_source[v] && pack(d, is_source, t, i + 1, used | path, memo) {
                found = true;
                break;
            }
            for &u in d.in_neighbors(v) {
                if (used | later | path) >> u & 1 == 0 {
                    stack.push((u, path | 1 << u));
                }
            }
        }
    }
    memo.insert((i, used), found);
    found
}

/// Size of a minimum set of `deletable` vertices meeting every A-B path, or None.
pub fn brute_min_cut(d: &Digraph, a: &[usize], b: &[usize], deletable: &[bool], budget: &OracleBudget) -> Result<Option<usize>> {
    let pool: Vec<usize> = (0..d.n()).filter(|&v| deletable[v]).collect();
    budget.check("min cut", d.n(), 0, 1u64 << pool.len().min(63))?;
    let adj = out_lists(d);
    for c in subsets_by_size(&pool, pool.len()) {
        let r = reach(&adj, a, &blocked_mask(d.n(), &c));
        if b.iter().all(|&v| !r[v]) {
            return Ok(Some(c.len()));
        }
    }
    Ok(None)
}

/// All minimum A-B cuts (every vertex deletable).
fn all_min_cuts(adj: &[Vec<usize>], a: &[usize], b: &[usize]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let pool: Vec<usize> = (0..n).collect();
    for r in 0..=n {
        let cuts: Vec<Vec<usize>> = pool
            .iter()
            .copied()
            .combinations(r)
            .filter(|c| {
                let seen = reach(adj, a, &blocked_mask(n, c));
                b.iter().all(|&v| !seen[v])
            })
            .collect();
        if !cuts.is_empty() {
            return cuts;
        }
    }
    unreachable!("deleting everything separates")
}

/// Vertices outside S and T lying in every minimum (A,B)-cut for some A of S, B of T.
pub fn brute_essential(d: &Digraph, s: &[usize], t: &[usize], budget: &OracleBudget) -> Result<BTreeSet<usize>> {
    let n = d.n();
    let cand = (1u64 << n) << (s.len() + t.len());
    budget.check("essential", n, 0, cand)?;
    let adj = out_lists(d);
    let terminals: BTreeSet<usize> = s.iter().chain(t).copied().collect();
    let mut out = BTreeSet::new();
    for a in s.iter().copied().powerset().filter(|x| !x.is_empty()) {
        for b in t.iter().copied().powerset().filter(|x| !x.is_empty()) {
            let cuts = all_min_cuts(&adj, &a, &b);
            let mut common: BTreeSet<usize> = cuts[0].iter().copied().collect();
            for c in &cuts[1..] {
                let cs: BTreeSet<usize> = c.iter().copied().collect();
                common = common.intersection(&cs).copied().collect();
            }
            out.extend(common.into_iter().filter(|v| !terminals.contains(v)));
        }
    }
    Ok(out)
}

/// Smallest X (|X| <= k, s not in X) such that no tuple has all members reachable from s
/// in D - X. The first witness in size-then-lexicographic order.
pub fn brute_dpc(d: &Digraph, s: usize, tuples: &[Vec<usize>], k: usize, budget: &OracleBudget) -> Result<Option<Vec<usize>>> {
    let n = d.n();
    budget.check("dpc", n, k, binomial_prefix(n.saturating_sub(1), k))?;
    let adj = out_lists(d);
    let pool: Vec<usize> = (0..n).filter(|&v| v != s).collect();
    for x in subsets_by_size(&pool, k) {
        let r = reach(&adj, &[s], &blocked_mask(n, &x));
        if tuples.iter().all(|tp| !tp.iter().all(|&v| r[v])) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

fn separates_parts(adj: &[Vec<usize>], parts: &[Vec<usize>], removed: &[usize]) -> bool {
    let n = adj.len();
    let blocked = blocked_mask(n, removed);
    let mut owner = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            if !blocked[v] {
                owner[v] = i;
            }
        }
    }
    for (i, p) in parts.iter().enumerate() {
        let r = reach(adj, p, &blocked);
        if (0..n).any(|v| r[v] && owner[v] != usize::MAX && owner[v] != i) {
            return false;
        }
    }
    true
}

/// Minimum-first multiway cut separating the groups in `parts` (terminals in one group
/// may stay connected). With `deletable_terminals = false` the cut avoids all terminals.
pub fn brute_multiway_cut(
    g: &Graph,
    parts: &[Vec<usize>],
    k: usize,
    deletable_terminals: bool,
    budget: &OracleBudget,
) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    let terminals: BTreeSet<usize> = parts.iter().flatten().copied().collect();
    let pool: Vec<usize> = (0..n).filter(|v| deletable_terminals || !terminals.contains(v)).collect();
    budget.check("multiway cut", n, k, binomial_prefix(pool.len(), k))?;
    let adj = undirected_lists(g);
    let found = subsets_by_size(&pool, k).find(|c| separates_parts(&adj, parts, c));
    Ok(found)
}

/// Size of a minimum multiway cut using only `allowed` vertices; None if impossible.
pub fn brute_min_multiway_cut_size(g: &Graph, parts: &[Vec<usize>], allowed: &[bool], budget: &OracleBudget) -> Result<Option<usize>> {
    let pool: Vec<usize> = (0..g.n()).filter(|&v| allowed[v]).collect();
    budget.check("multiway cut size", g.n(), 0, 1u64 << pool.len().min(63))?;
    let adj = undirected_lists(g);
    let found = subsets_by_size(&pool, pool.len()).find(|c| separates_parts(&adj, parts, c));
    Ok(found.map(|c| c.len()))
}

/// Minimum-first vertex multicut of size <= k for terminal pairs; terminals undeletable.
pub fn brute_multicut(g: &Graph, pairs: &[(usize, usize)], k: usize, budget: &OracleBudget) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    let terminals: BTreeSet<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let pool: Vec<usize> = (0..n).filter(|v| !terminals.contains(v)).collect();
    budget.check("multicut", n, k, binomial_prefix(pool.len(), k))?;
    let adj = undirected_lists(g);
    let found = subsets_by_size(&pool, k).find(|c| {
        let blocked = blocked_mask(n, c);
        pairs.iter().all(|&(a, b)| a != b && !reach(&adj, &[a], &blocked)[b])
    });
    Ok(found)
}

/// Satisfiability by truth table, ignoring clauses that touch `deleted`.
pub fn truth_table_satisfiable(f: &Cnf2, deleted: &[usize]) -> bool {
    let gone = blocked_mask(f.num_vars, deleted);
    let live: Vec<&Vec<crate::a2sat::Lit>> = f.clauses.iter().filter(|c| c.iter().all(|l| !gone[l.var])).collect();
    let vars: Vec<usize> = (0..f.num_vars).filter(|&v| !gone[v]).collect();
    let mut value = vec![false; f.num_vars];
    for mask in 0u64..(1u64 << vars.len()) {
        for (i, &v) in vars.iter().enumerate() {
            value[v] = mask >> i & 1 == 1;
        }
        if live.iter().all(|c| c.iter().any(|l| value[l.var] != l.neg)) {
            return true;
        }
    }
    false
}

/// Smallest variable deletion set of size <= k leaving a satisfiable formula.
pub fn brute_a2sat(f: &Cnf2, k: usize, budget: &OracleBudget) -> Result<Option<Vec<usize>>> {
    let n = f.num_vars;
    if n > 20 {
        return Err(Error::Budget(format!("a2sat: {n} variables > 20")));
    }
    budget.check("a2sat", 0, k, binomial_prefix(n, k) << n.min(20))?;
    let pool: Vec<usize> = (0..n).collect();
    let found = subsets_by_size(&pool, k).find(|x| truth_table_satisfiable(f, x));
    Ok(found)
}

/// Union of all vertices v such that v is highly reachable in some multiway cut X
/// (|X| <= k, X avoiding the terminals): X + v' + N(t) is linked from N(T) in G plus
/// sink-only copies, for every terminal t.
pub fn brute_highly_reachable(g: &Graph, terminals: &[usize], k: usize, budget: &OracleBudget) -> Result<BTreeSet<usize>> {
    let n = g.n();
    let tset: BTreeSet<usize> = terminals.iter().copied().collect();
    let pool: Vec<usize> = (0..n).filter(|v| !tset.contains(v)).collect();
    budget.check("highly reachable", n, k, binomial_prefix(pool.len(), k))?;
    let adj = undirected_lists(g);
    let parts: Vec<Vec<usize>> = terminals.iter().map(|&t| vec![t]).collect();
    let d = g.to_digraph();
    let (dd, copies) = add_sink_only_copies(&d, &pool, "'");
    let copy_of: HashMap<usize, usize> = pool.iter().copied().zip(copies).collect();
    let nbrs: Vec<BTreeSet<usize>> = terminals.iter().map(|&t| g.neighbors(t).clone()).collect();
    let sources: Vec<usize> = nbrs.iter().flatten().copied().unique().collect();
    let mut out = BTreeSet::new();
    for x in subsets_by_size(&pool, k) {
        if !separates_parts(&adj, &parts, &x) {
            continue;
        }
        for &v in &x {
            if out.contains(&v) {
                continue;
            }
            let mut ok = true;
            for nt in &nbrs {
                let mut set: Vec<usize> = x.clone();
                set.push(copy_of[&v]);
                set.extend(nt.iter().copied());
                let set: Vec<usize> = set.into_iter().unique().collect();
                if !brute_linked(&dd, &sources, &set)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                out.insert(v);
            }
        }
    }
    Ok(out)
}

/// Minimum vertex cover size by subset enumeration (at most 20 vertices).
pub fn brute_min_vertex_cover(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > 20 {
        return Err(Error::Budget(format!("vertex cover: {n} vertices > 20")));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let best = (0u32..(1u32 << n))
        .filter(|mask| edges.iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0);
    Ok(best)
}

/// Maximum matching size by memoised recursion over vertex subsets (at most 16 vertices).
pub fn brute_max_matching(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > 16 {
        return Err(Error::Budget(format!("matching: {n} vertices > 16")));
    }
    fn go(g: &Graph, free: u32, memo: &mut HashMap<u32, usize>) -> usize {
        if free == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&free) {
            return v;
        }
        let u = free.trailing_zeros() as usize;
        let rest = free & !(1 << u);
        let mut best = go(g, rest, memo);
        for &w in g.neighbors(u) {
            if rest >> w & 1 == 1 {
                best = best.max(1 + go(g, rest & !(1 << w), memo));
            }
        }
        memo.insert(free, best);
        best
    }
    let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
    Ok(go(g, full, &mut HashMap::new()))
}

/// Twice the optimum of the vertex cover LP, searched over {0, 1/2, 1} values by
/// branch and bound (at most 16 vertices).
pub fn brute_vc_lp_doubled(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > 16 {
        return Err(Error::Budget(format!("vertex cover LP: {n} vertices > 16")));
    }
    fn go(g: &Graph, v: usize, vals: &mut Vec<usize>, cost: usize, best: &mut usize) {
        if cost >= *best {
            return;
        }
        if v == g.n() {
            *best = cost;
            return;
        }
        // smallest value for v that keeps every edge to an earlier vertex covered
        let need = g.neighbors(v).iter().filter(|&&u| u < v).map(|&u| 2 - vals[u]).max().unwrap_or(0);
        for x in need..=2 {
            vals[v] = x;
            go(g, v + 1, vals, cost + x, best);
        }
    }
    let mut best = 2 * n + 1;
    go(g, 0, &mut vec![0; n], 0, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::a2sat::Lit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linked_examples() {
        // s=0 -> a=1, s -> b=2, a -> c=3, b -> c
        let d = Digraph::from_arcs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(brute_linked(&d, &[0], &[1]).unwrap());
        assert!(!brute_linked(&d, &[0], &[1, 2]).unwrap());
        assert!(brute_linked(&d, &[1, 2], &[1, 2]).unwrap());
        assert!(!brute_linked(&d, &[1, 2], &[0]).unwrap());
        assert!(brute_linked(&d, &[1, 2], &[3, 1]).unwrap());
    }

    #[test]
    fn two_linkage_oracles_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=8);
            let mut d = Digraph::with_vertices(n);
            for u in 0..n {
                for v in 0..n {
                    if rng.gen_bool(0.25) {
                        d.add_arc(u, v);
                    }
                }
            }
            let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            let t: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            assert_eq!(brute_linked(&d, &s, &t).unwrap(), path_packing_linked(&d, &s, &t).unwrap());
        }
    }

    #[test]
    fn dpc_star() {
        let d = Digraph::from_arcs(4, &[(0, 1), (0, 2), (0, 3)]);
        let b = OracleBudget::default();
        assert_eq!(brute_dpc(&d, 0, &[vec![1, 2], vec![2, 3]], 1, &b).unwrap(), Some(vec![2]));
        assert_eq!(brute_dpc(&d, 0, &[vec![1, 2], vec![2, 3], vec![1, 3]], 1, &b).unwrap(), None);
    }

    #[test]
    fn multiway_triangle() {
        // triangle 0,1,2 with pendant terminals 3,4,5
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)]);
        let parts = vec![vec![3], vec![4], vec![5]];
        let b = OracleBudget::default();
        assert_eq!(brute_multiway_cut(&g, &parts, 1, false, &b).unwrap(), None);
        assert!(brute_multiway_cut(&g, &parts, 2, false, &b).unwrap().is_some());
    }

    #[test]
    fn budget_refusal() {
        let d = Digraph::with_vertices(11);
        assert!(matches!(brute_dpc(&d, 0, &[], 1, &OracleBudget::default()), Err(Error::Budget(_))));
    }

    #[test]
    fn a2sat_contradiction() {
        let f = Cnf2 { num_vars: 1, clauses: vec![vec![Lit::pos(0)], vec![Lit::neg(0)]] };
        let b = OracleBudget::default();
        assert_eq!(brute_a2sat(&f, 0, &b).unwrap(), None);
        assert_eq!(brute_a2sat(&f, 1, &b).unwrap(), Some(vec![0]));
    }

    #[test]
    fn essential_chain() {
        // 0 -> 1 -> 2, S={0}, T={2}: vertex 1 is in every min cut? cuts {0},{1},{2}: no
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2)]);
        assert!(brute_essential(&d, &[0], &[2], &OracleBudget::default()).unwrap().is_empty());
        // twins as sources: 0,1 -> 2 -> 3,4
        let d = Digraph::from_arcs(5, &[(0, 2), (1, 2), (2, 3), (2, 4)]);
        let e = brute_essential(&d, &[0, 1], &[3, 4], &OracleBudget::default()).unwrap();
        assert_eq!(e, BTreeSet::from([2]));
    }

    #[test]
    fn vertex_cover_small_graphs() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(brute_min_vertex_cover(&tri).unwrap(), 2);
        assert_eq!(brute_max_matching(&tri).unwrap(), 1);
        assert_eq!(brute_vc_lp_doubled(&tri).unwrap(), 3);
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(brute_min_vertex_cover(&c4).unwrap(), 2);
        assert_eq!(brute_max_matching(&c4).unwrap(), 2);
        assert_eq!(brute_vc_lp_doubled(&c4).unwrap(), 4);
        assert_eq!(brute_vc_lp_doubled(&Graph::with_vertices(3)).unwrap(), 0);
    }

    #[test]
    fn matching_lp_cover_sandwich() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let n = rng.gen_range(1..=9);
            let mut g = Graph::with_vertices(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.35) {
                        g.add_edge(u, v);
                    }
                }
            }
            let m = brute_max_matching(&g).unwrap();
            let lp = brute_vc_lp_doubled(&g).unwrap();
            let vc = brute_min_vertex_cover(&g).unwrap();
            assert!(2 * m <= lp && lp <= 2 * vc && vc <= 2 * m);
        }
    }
}
