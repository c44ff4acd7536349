//! Directed and undirected graphs, vertex cuts via unit augmenting paths, and the
//! vertex surgery used by the kernels (copies, bypassing, twins).

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// Digraph with labelled vertices. Parallel arcs are merged and self-loops dropped,
/// since neither affects vertex cuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    out: Vec<BTreeSet<usize>>,
    inn: Vec<BTreeSet<usize>>,
}

impl Digraph {
    pub fn new() -> Self {
        Digraph { labels: Vec::new(), index: HashMap::new(), out: Vec::new(), inn: Vec::new() }
    }

    /// Vertices labelled "0".."n-1".
    pub fn with_vertices(n: usize) -> Self {
        let mut d = Self::new();
        for i in 0..n {
            d.add_vertex(i.to_string());
        }
        d
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Self {
        let mut d = Self::with_vertices(n);
        for &(u, v) in arcs {
            d.add_arc(u, v);
        }
        d
    }

    /// Adds a vertex; panics if the label is taken.
    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        let label = label.into();
        let id = self.labels.len();
        let prev = self.index.insert(label.clone(), id);
        assert!(prev.is_none(), "duplicate vertex label {label}");
        self.labels.push(label);
        self.out.push(BTreeSet::new());
        self.inn.push(BTreeSet::new());
        id
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        if u != v {
            self.out[u].insert(v);
            self.inn[v].insert(u);
        }
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(&v)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
    }

    pub fn out_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.inn[v]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn reversed(&self) -> Digraph {
        let mut r = self.clone();
        std::mem::swap(&mut r.out, &mut r.inn);
        r
    }

    /// Subgraph induced by `keep` (in the given order).
    pub fn induced(&self, keep: &[usize]) -> Digraph {
        let mut pos = vec![usize::MAX; self.n()];
        let mut d = Digraph::new();
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
            d.add_vertex(self.labels[v].clone());
        }
        for &u in keep {
            for &v in &self.out[u] {
                if pos[v] != usize::MAX {
                    d.add_arc(pos[u], pos[v]);
                }
            }
        }
        d
    }

    pub fn without(&self, removed: &[usize]) -> Digraph {
        let gone: BTreeSet<usize> = removed.iter().copied().collect();
        let keep: Vec<usize> = (0..self.n()).filter(|v| !gone.contains(v)).collect();
        self.induced(&keep)
    }
}

impl Default for Digraph {
    fn default() -> Self {
        Self::new()
    }
}

/// Undirected simple graph with labelled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new() -> Self {
        Graph { labels: Vec::new(), index: HashMap::new(), adj: Vec::new() }
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_vertex(i.to_string());
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        let label = label.into();
        let id = self.labels.len();
        let prev = self.index.insert(label.clone(), id);
        assert!(prev.is_none(), "duplicate vertex label {label}");
        self.labels.push(label);
        self.adj.push(BTreeSet::new());
        id
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Each edge becomes a pair of opposite arcs.
    pub fn to_digraph(&self) -> Digraph {
        let mut d = Digraph::new();
        for l in &self.labels {
            d.add_vertex(l.clone());
        }
        for (u, v) in self.edges() {
            d.add_arc(u, v);
            d.add_arc(v, u);
        }
        d
    }

    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n()];
        let mut g = Graph::new();
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
            g.add_vertex(self.labels[v].clone());
        }
        for &u in keep {
            for &v in &self.adj[u] {
                if pos[v] != usize::MAX {
                    g.add_edge(pos[u], pos[v]);
                }
            }
        }
        g
    }

    pub fn without(&self, removed: &[usize]) -> Graph {
        let gone: BTreeSet<usize> = removed.iter().copied().collect();
        let keep: Vec<usize> = (0..self.n()).filter(|v| !gone.contains(v)).collect();
        self.induced(&keep)
    }

    /// Connected component id per vertex, numbered in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut next = 0;
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }
}

impl Default for Graph {
    fn default() -> Self {
        Self::new()
    }
}

/// Sources, sinks and the set of vertices a cut may use.
#[derive(Debug, Clone)]
pub struct CutQuery {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub deletable: Vec<bool>,
}

impl CutQuery {
    /// All vertices deletable, including sources and sinks.
    pub fn new(n: usize, sources: &[usize], sinks: &[usize]) -> Self {
        CutQuery { sources: sources.to_vec(), sinks: sinks.to_vec(), deletable: vec![true; n] }
    }

    pub fn protect(mut self, vertices: &[usize]) -> Self {
        for &v in vertices {
            self.deletable[v] = false;
        }
        self
    }

    pub fn restrict_to(mut self, allowed: &[usize]) -> Self {
        let allowed: BTreeSet<usize> = allowed.iter().copied().collect();
        for (v, d) in self.deletable.iter_mut().enumerate() {
            *d = *d && allowed.contains(&v);
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutOutcome {
    /// A minimum cut, closest to the sources among all minimum cuts.
    Cut(Vec<usize>),
    /// Some source reaches some sink through undeletable vertices only.
    Uncuttable,
}

impl CutOutcome {
    pub fn cut(&self) -> Option<&[usize]> {
        match self {
            CutOutcome::Cut(c) => Some(c),
            CutOutcome::Uncuttable => None,
        }
    }

    pub fn size(&self) -> Option<usize> {
        self.cut().map(|c| c.len())
    }
}

struct FlowNet {
    to: Vec<usize>,
    cap: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

const INF: u32 = u32::MAX / 2;

impl FlowNet {
    fn new(n: usize) -> Self {
        FlowNet { to: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn edge(&mut self, u: usize, v: usize, c: u32) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// One BFS augmentation of a single unit; false if no path.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut prev = vec![usize::MAX; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    prev[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            return false;
        }
        let mut v = t;
        while v != s {
            let e = prev[v];
            self.cap[e] -= 1;
            self.cap[e ^ 1] += 1;
            v = self.to[e ^ 1];
        }
        true
    }

    fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}

/// Minimum vertex cut between `q.sources` and `q.sinks`. Cuts may contain sources and
/// sinks when those are deletable. Among minimum cuts the one closest to the sources is
/// returned (smallest set of vertices still reachable).
pub fn min_vertex_cut(d: &Digraph, q: &CutQuery) -> CutOutcome {
    let n = d.n();
    // v_in = 2v, v_out = 2v+1
    let (src, snk) = (2 * n, 2 * n + 1);
    let mut net = FlowNet::new(2 * n + 2);
    for v in 0..n {
        net.edge(2 * v, 2 * v + 1, if q.deletable[v] { 1 } else { INF });
    }
    for (u, v) in d.arcs() {
        net.edge(2 * u + 1, 2 * v, INF);
    }
    for &s in &q.sources {
        net.edge(src, 2 * s, INF);
    }
    for &t in &q.sinks {
        net.edge(2 * t + 1, snk, INF);
    }
    let budget = q.deletable.iter().filter(|&&b| b).count();
    let mut flow = 0;
    while net.augment(src, snk) {
        flow += 1;
        if flow > budget {
            return CutOutcome::Uncuttable;
        }
    }
    let reach = net.residual_reachable(src);
    let cut: Vec<usize> = (0..n).filter(|&v| reach[2 * v] && !reach[2 * v + 1]).collect();
    debug_assert_eq!(cut.len(), flow);
    CutOutcome::Cut(cut)
}

/// Size of a minimum (S,T)-cut where every vertex is deletable.
pub fn min_cut_size(d: &Digraph, sources: &[usize], sinks: &[usize]) -> usize {
    min_vertex_cut(d, &CutQuery::new(d.n(), sources, sinks)).size().expect("all vertices deletable")
}

/// The minimum (S,X)-cut closest to S, every vertex deletable.
pub fn closest_cut(d: &Digraph, sources: &[usize], x: &[usize]) -> Vec<usize> {
    let q = CutQuery::new(d.n(), sources, x);
    min_vertex_cut(d, &q).cut().expect("all vertices deletable").to_vec()
}

/// Vertices reachable from `sources` in D - `removed`.
pub fn reachable_after(d: &Digraph, sources: &[usize], removed: &[usize]) -> Vec<bool> {
    let mut blocked = vec![false; d.n()];
    for &c in removed {
        blocked[c] = true;
    }
    let mut seen = vec![false; d.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if !blocked[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in d.out_neighbors(u) {
            if !blocked[v] && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Adds a copy v' of each v in `xs` that keeps only the in-arcs of v. Returns the copies.
pub fn add_sink_only_copies(d: &Digraph, xs: &[usize], suffix: &str) -> (Digraph, Vec<usize>) {
    let mut g = d.clone();
    let mut copies = Vec::with_capacity(xs.len());
    for &x in xs {
        let c = g.add_vertex(format!("{}{}", d.label(x), suffix));
        for &u in d.in_neighbors(x) {
            g.add_arc(u, c);
        }
        copies.push(c);
    }
    (g, copies)
}

/// Adds a copy x- of each x in `xs` that keeps only the out-arcs of x.
pub fn add_source_copies(d: &Digraph, xs: &[usize]) -> (Digraph, Vec<usize>) {
    let mut g = d.clone();
    let mut copies = Vec::with_capacity(xs.len());
    for &x in xs {
        let c = g.add_vertex(format!("{}-", d.label(x)));
        for &w in d.out_neighbors(x) {
            g.add_arc(c, w);
        }
        copies.push(c);
    }
    (g, copies)
}

/// Removes v after adding an arc from each in-neighbour to each out-neighbour.
pub fn bypass_vertex(d: &Digraph, v: usize) -> Digraph {
    bypass_vertices(d, &[v])
}

/// Bypasses every vertex of `set`; the result has an arc u->w iff D has a u-w path whose
/// internal vertices all lie in `set`. Order-independent.
pub fn bypass_vertices(d: &Digraph, set: &[usize]) -> Digraph {
    let mut inside = vec![false; d.n()];
    for &v in set {
        inside[v] = true;
    }
    let keep: Vec<usize> = (0..d.n()).filter(|&v| !inside[v]).collect();
    let mut out = d.induced(&keep);
    let mut pos = vec![usize::MAX; d.n()];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    for &u in &keep {
        let mut seen = vec![false; d.n()];
        let mut queue: VecDeque<usize> = d.out_neighbors(u).iter().copied().filter(|&w| inside[w]).collect();
        for &w in &queue {
            seen[w] = true;
        }
        while let Some(w) = queue.pop_front() {
            for &x in d.out_neighbors(w) {
                if inside[x] {
                    if !seen[x] {
                        seen[x] = true;
                        queue.push_back(x);
                    }
                } else {
                    out.add_arc(pos[u], pos[x]);
                }
            }
        }
    }
    out
}

/// Removes v after turning N(v) into a clique.
pub fn bypass_vertex_undirected(g: &Graph, v: usize) -> Graph {
    bypass_vertices_undirected(g, &[v])
}

/// Bypasses every vertex of `set`: each component C of G[set] turns N(C) into a clique.
pub fn bypass_vertices_undirected(g: &Graph, set: &[usize]) -> Graph {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    let keep: Vec<usize> = (0..g.n()).filter(|&v| !inside[v]).collect();
    let mut out = g.induced(&keep);
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    let mut done = vec![false; g.n()];
    for &s in set {
        if done[s] {
            continue;
        }
        done[s] = true;
        let mut boundary = BTreeSet::new();
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if inside[w] {
                    if !done[w] {
                        done[w] = true;
                        queue.push_back(w);
                    }
                } else {
                    boundary.insert(pos[w]);
                }
            }
        }
        let b: Vec<usize> = boundary.into_iter().collect();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                out.add_edge(b[i], b[j]);
            }
        }
    }
    out
}

/// Replaces v by k+1 mutually adjacent twins labelled `v#1`..`v#(k+1)`, each with N(v).
/// Returns the new graph and the twin ids.
pub fn make_heavy(g: &Graph, v: usize, k: usize) -> (Graph, Vec<usize>) {
    let mut h = Graph::new();
    let mut pos = vec![usize::MAX; g.n()];
    for u in 0..g.n() {
        if u != v {
            pos[u] = h.add_vertex(g.label(u).to_string());
        }
    }
    for (a, b) in g.edges() {
        if a != v && b != v {
            h.add_edge(pos[a], pos[b]);
        }
    }
    let twins: Vec<usize> = (1..=k + 1).map(|i| h.add_vertex(format!("{}#{}", g.label(v), i))).collect();
    for (i, &t) in twins.iter().enumerate() {
        for &w in g.neighbors(v) {
            h.add_edge(t, pos[w]);
        }
        for &t2 in &twins[..i] {
            h.add_edge(t, t2);
        }
    }
    (h, twins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chain() -> Digraph {
        // s=0 -> a=1 -> b=2 -> c=3
        Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3)])
    }

    #[test]
    fn closest_cut_with_protected_source() {
        let d = chain();
        let q = CutQuery::new(4, &[0], &[3]).protect(&[0]);
        assert_eq!(min_vertex_cut(&d, &q), CutOutcome::Cut(vec![1]));
    }

    #[test]
    fn closest_cut_may_use_the_source() {
        assert_eq!(closest_cut(&chain(), &[0], &[3]), vec![0]);
    }

    #[test]
    fn diamond_cut() {
        // s=0 -> a=1 -> t=3, s -> b=2 -> t
        let d = Digraph::from_arcs(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]);
        let q = CutQuery::new(4, &[0], &[3]).protect(&[0]);
        assert_eq!(min_vertex_cut(&d, &q), CutOutcome::Cut(vec![3]));
        assert_eq!(min_cut_size(&d, &[0], &[3]), 1);
    }

    #[test]
    fn uncuttable_when_terminals_protected() {
        let d = Digraph::from_arcs(2, &[(0, 1)]);
        let q = CutQuery::new(2, &[0], &[1]).protect(&[0, 1]);
        assert_eq!(min_vertex_cut(&d, &q), CutOutcome::Uncuttable);
    }

    #[test]
    fn empty_sinks_give_empty_cut() {
        let q = CutQuery::new(4, &[0], &[]);
        assert_eq!(min_vertex_cut(&chain(), &q), CutOutcome::Cut(vec![]));
    }

    #[test]
    fn bypass_directed() {
        // 0 -> 1 -> 2, 3 -> 1
        let d = Digraph::from_arcs(4, &[(0, 1), (1, 2), (3, 1)]);
        let b = bypass_vertex(&d, 1);
        assert_eq!(b.labels(), &["0", "2", "3"]);
        let arcs: Vec<_> = b.arcs().map(|(u, v)| (b.label(u).to_string(), b.label(v).to_string())).collect();
        assert_eq!(arcs, vec![("0".into(), "2".into()), ("3".into(), "2".into())]);
    }

    #[test]
    fn bypass_undirected_makes_clique() {
        let g = Graph::from_edges(4, &[(0, 3), (1, 3), (2, 3), (0, 1)]);
        let b = bypass_vertex_undirected(&g, 3);
        assert_eq!(b.edge_count(), 3);
    }

    #[test]
    fn heavy_vertex_twins() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let (h, twins) = make_heavy(&g, 1, 2);
        assert_eq!(twins.len(), 3);
        assert_eq!(h.n(), 5);
        for &t in &twins {
            assert_eq!(h.neighbors(t).len(), 4);
        }
        let (h0, _) = make_heavy(&g, 1, 0);
        assert_eq!((h0.n(), h0.edge_count()), (3, 2));
    }

    #[test]
    fn copies() {
        let d = chain();
        let (g, c) = add_sink_only_copies(&d, &[2], "'");
        assert_eq!(g.label(c[0]), "2'");
        assert!(g.has_arc(1, c[0]) && g.out_neighbors(c[0]).is_empty());
        let (g, c) = add_source_copies(&d, &[1]);
        assert_eq!(g.label(c[0]), "1-");
        assert!(g.has_arc(c[0], 2) && g.in_neighbors(c[0]).is_empty());
    }

    fn random_digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Digraph {
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

    #[test]
    fn cut_separates_and_is_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.gen_range(2..=8);
            let d = random_digraph(&mut rng, n, 0.3);
            let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let t: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let cut = min_vertex_cut(&d, &CutQuery::new(n, &s, &t)).cut().unwrap().to_vec();
            let reach = reachable_after(&d, &s, &cut);
            assert!(t.iter().all(|&v| !reach[v]));
            // no smaller separator exists
            for mask in 0u32..(1 << n) {
                if (mask.count_ones() as usize) < cut.len() {
                    let c: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                    let r = reachable_after(&d, &s, &c);
                    assert!(t.iter().any(|&v| r[v]));
                }
            }
        }
    }

    #[test]
    fn bypass_preserves_reachability_among_survivors() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let n = rng.gen_range(2..=8);
            let d = random_digraph(&mut rng, n, 0.3);
            let set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            let b = bypass_vertices(&d, &set);
            let seq = set.iter().rev().fold(d.clone(), |acc, &v| bypass_vertex(&acc, v));
            assert_eq!(b, seq);
            for u in 0..b.n() {
                let du = d.id(b.label(u)).unwrap();
                let rd = reachable_after(&d, &[du], &[]);
                let rb = reachable_after(&b, &[u], &[]);
                for w in 0..b.n() {
                    assert_eq!(rb[w], rd[d.id(b.label(w)).unwrap()]);
                }
            }
        }
    }
}
