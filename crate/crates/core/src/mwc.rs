//! Vertex multiway cut: the half-integral LP, terminal reduction, kernels for deletable
//! terminals and for few terminals, and the multicut kernel built on heavy terminals.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;

use crate::cutcover::multiway_cover;
use crate::error::{Error, Result};
use crate::exactfield::Field;
use crate::graphcut::{add_sink_only_copies, bypass_vertex_undirected, bypass_vertices_undirected, make_heavy, Graph};
use crate::matroid::RepresentedMatroid;
use crate::repset::{representative_family, TupleFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MwcInstance {
    pub graph: Graph,
    pub terminals: Vec<usize>,
    pub k: usize,
    pub deletable_terminals: bool,
}

impl MwcInstance {
    pub fn new(graph: Graph, terminals: Vec<usize>, k: usize, deletable_terminals: bool) -> Result<Self> {
        if let Some(&t) = terminals.iter().find(|&&t| t >= graph.n()) {
            return Err(Error::Bounds(format!("terminal {t} of {}", graph.n())));
        }
        let mut terminals = terminals;
        terminals.sort_unstable();
        terminals.dedup();
        Ok(MwcInstance { graph, terminals, k, deletable_terminals })
    }

    /// Trivial negative instance: two adjacent undeletable terminals.
    pub fn trivial_no(deletable_terminals: bool) -> Self {
        if deletable_terminals {
            // a triangle of deletable terminals needs two deletions
            MwcInstance { graph: Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]), terminals: vec![0, 1, 2], k: 0, deletable_terminals }
        } else {
            MwcInstance { graph: Graph::from_edges(2, &[(0, 1)]), terminals: vec![0, 1], k: 0, deletable_terminals }
        }
    }

    /// Union of the terminal neighbourhoods.
    pub fn terminal_neighborhood(&self) -> BTreeSet<usize> {
        let ts: BTreeSet<usize> = self.terminals.iter().copied().collect();
        self.terminals.iter().flat_map(|&t| self.graph.neighbors(t).iter().copied()).filter(|v| !ts.contains(v)).collect()
    }
}

/// Optimal solution of the vertex multiway cut relaxation with values in {0, 1/2, 1},
/// stored doubled. Terminals carry 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntegralLp {
    pub doubled: Vec<u8>,
    pub doubled_objective: usize,
}

impl HalfIntegralLp {
    pub fn objective(&self) -> f64 {
        self.doubled_objective as f64 / 2.0
    }

    pub fn value(&self, v: usize) -> f64 {
        self.doubled[v] as f64 / 2.0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.doubled.len()).filter(|&v| self.doubled[v] > 0).collect()
    }
}

/// Non-terminal count up to which the LP is solved by exhaustive half-integral search.
pub const LP_SEARCH_LIMIT: usize = 22;

/// Shortest terminal-to-terminal distance, where entering a vertex costs w[v]; paths
/// stop at the first terminal they meet.
fn min_terminal_distance(g: &Graph, is_terminal: &[bool], terminals: &[usize], w: &[f64]) -> (f64, Vec<usize>) {
    let n = g.n();
    let mut best = (f64::INFINITY, Vec::new());
    for &t in terminals {
        let mut dist = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[t] = 0.0;
        heap.push(Reverse((OrdF64(0.0), t)));
        while let Some(Reverse((OrdF64(d), u))) = heap.pop() {
            if d > dist[u] || (u != t && is_terminal[u]) {
                continue;
            }
            for &v in g.neighbors(u) {
                let nd = d + if is_terminal[v] { 0.0 } else { w[v] };
                if nd < dist[v] {
                    dist[v] = nd;
                    prev[v] = u;
                    heap.push(Reverse((OrdF64(nd), v)));
                }
            }
        }
        for &u in terminals {
            if u != t && dist[u] < best.0 {
                let mut path = Vec::new();
                let mut x = prev[u];
                while x != t {
                    path.push(x);
                    x = prev[x];
                }
                best = (dist[u], path);
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn terminal_mask(n: usize, terminals: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &t in terminals {
        m[t] = true;
    }
    m
}

/// Exhaustive search over doubled values {0,1,2}, with unassigned vertices at 2 for
/// the feasibility prune. None when two terminals are adjacent.
pub fn half_integral_mwc_lp_exhaustive(g: &Graph, terminals: &[usize]) -> Result<Option<HalfIntegralLp>> {
    let n = g.n();
    let is_t = terminal_mask(n, terminals);
    let order: Vec<usize> = (0..n).filter(|&v| !is_t[v]).collect();
    if order.len() > LP_SEARCH_LIMIT {
        return Err(Error::Budget(format!("exhaustive LP search over {} vertices > {LP_SEARCH_LIMIT}", order.len())));
    }
    let mut w: Vec<f64> = (0..n).map(|v| if is_t[v] { 0.0 } else { 2.0 }).collect();
    if min_terminal_distance(g, &is_t, terminals, &w).0 < 2.0 {
        return Ok(None);
    }
    struct Search<'a> {
        g: &'a Graph,
        is_t: &'a [bool],
        terminals: &'a [usize],
        order: &'a [usize],
        best: usize,
        best_w: Vec<f64>,
    }
    fn dfs(s: &mut Search, w: &mut Vec<f64>, idx: usize, cost: usize) {
        if cost >= s.best {
            return;
        }
        if idx == s.order.len() {
            s.best = cost;
            s.best_w = w.clone();
            return;
        }
        let v = s.order[idx];
        for val in 0..=2u8 {
            w[v] = val as f64;
            if val == 2 || min_terminal_distance(s.g, s.is_t, s.terminals, w).0 >= 2.0 {
                dfs(s, w, idx + 1, cost + val as usize);
            }
        }
        w[v] = 2.0;
    }
    let mut s = Search { g, is_t: &is_t, terminals, order: &order, best: usize::MAX, best_w: Vec::new() };
    dfs(&mut s, &mut w, 0, 0);
    let doubled = s.best_w.iter().map(|&x| x as u8).collect();
    Ok(Some(HalfIntegralLp { doubled, doubled_objective: s.best }))
}

/// Simplex with lazily separated path constraints. Extreme points of this polytope are
/// half-integral, so the basic optimum is rounded to halves and then re-checked.
pub fn half_integral_mwc_lp_simplex(g: &Graph, terminals: &[usize]) -> Result<Option<HalfIntegralLp>> {
    let n = g.n();
    let is_t = terminal_mask(n, terminals);
    let big: Vec<f64> = (0..n).map(|v| if is_t[v] { 0.0 } else { 1.0 }).collect();
    if min_terminal_distance(g, &is_t, terminals, &big).0 < 1.0 {
        return Ok(None);
    }
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Option<minilp::Variable>> =
        (0..n).map(|v| (!is_t[v]).then(|| problem.add_var(1.0, (0.0, 1.0)))).collect();
    let mut sol = problem.solve().map_err(|e| Error::Degenerate(format!("LP: {e}")))?;
    loop {
        let w: Vec<f64> = (0..n).map(|v| vars[v].map_or(0.0, |x| sol[x])).collect();
        let (d, path) = min_terminal_distance(g, &is_t, terminals, &w);
        if d >= 1.0 - 1e-9 {
            let doubled: Vec<u8> = w.iter().map(|&x| (x * 2.0).round() as u8).collect();
            if doubled.iter().zip(&w).any(|(&h, &x)| (h as f64 / 2.0 - x).abs() > 1e-6) {
                return Err(Error::Degenerate("LP optimum is not half-integral".into()));
            }
            let dw: Vec<f64> = doubled.iter().map(|&h| h as f64).collect();
            if min_terminal_distance(g, &is_t, terminals, &dw).0 < 2.0 {
                return Err(Error::Degenerate("rounded LP solution infeasible".into()));
            }
            let doubled_objective = doubled.iter().map(|&h| h as usize).sum();
            return Ok(Some(HalfIntegralLp { doubled, doubled_objective }));
        }
        let coeffs: Vec<(minilp::Variable, f64)> = path.iter().map(|&v| (vars[v].expect("path interior avoids terminals"), 1.0)).collect();
        sol = sol.add_constraint(coeffs, ComparisonOp::Ge, 1.0).map_err(|e| Error::Degenerate(format!("LP: {e}")))?;
    }
}

/// Half-integral LP optimum with terminals undeletable; exhaustive search up to
/// [`LP_SEARCH_LIMIT`] non-terminals, simplex beyond. None when terminals are adjacent.
pub fn half_integral_mwc_lp(g: &Graph, terminals: &[usize]) -> Result<Option<HalfIntegralLp>> {
    if g.n() - terminals.len() <= LP_SEARCH_LIMIT {
        half_integral_mwc_lp_exhaustive(g, terminals)
    } else {
        half_integral_mwc_lp_simplex(g, terminals)
    }
}

/// G plus a pendant super-terminal `t^` per terminal; returns the graph and the
/// super-terminals.
fn attach_super_terminals(g: &Graph, terminals: &[usize]) -> (Graph, Vec<usize>) {
    let mut h = g.clone();
    let sup = terminals
        .iter()
        .map(|&t| {
            let x = h.add_vertex(format!("{}^", g.label(t)));
            h.add_edge(x, t);
            x
        })
        .collect();
    (h, sup)
}

/// Region of each vertex: index of the terminal reaching it in G - X.
fn regions(g: &Graph, terminals: &[usize], x: &[usize]) -> Vec<Option<usize>> {
    let blocked = terminal_mask(g.n(), x);
    let mut region = vec![None; g.n()];
    for (i, &t) in terminals.iter().enumerate() {
        let mut queue = VecDeque::from([t]);
        region[t] = Some(i);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if !blocked[v] && region[v].is_none() {
                    region[v] = Some(i);
                    queue.push_back(v);
                }
            }
        }
    }
    region
}

#[derive(Debug, Clone)]
pub enum TerminalReduction {
    /// The LP (or forced deletions) already exceed the budget.
    Negative { doubled_lp: Option<usize> },
    Reduced(ReducedMwc),
}

#[derive(Debug, Clone)]
pub struct ReducedMwc {
    /// Undeletable terminals with disjoint neighbourhoods and |N(T)| <= 2k.
    pub instance: MwcInstance,
    /// Labels of vertices deleted by the reduction.
    pub forced: Vec<String>,
    pub doubled_lp: usize,
}

/// Contracts the LP regions into their terminals and deletes support vertices adjacent
/// to two terminals. Deletable terminals are first shielded by pendant super-terminals.
pub fn reduce_terminals(inst: &MwcInstance) -> Result<TerminalReduction> {
    let (g, terms) = if inst.deletable_terminals {
        attach_super_terminals(&inst.graph, &inst.terminals)
    } else {
        (inst.graph.clone(), inst.terminals.clone())
    };
    let Some(lp) = half_integral_mwc_lp(&g, &terms)? else {
        return Ok(TerminalReduction::Negative { doubled_lp: None });
    };
    if lp.doubled_objective > 2 * inst.k {
        return Ok(TerminalReduction::Negative { doubled_lp: Some(lp.doubled_objective) });
    }
    let x = lp.support();
    let region = regions(&g, &terms, &x);
    // contracted graph: terminals first, then unassigned vertices in id order
    let mut h = Graph::new();
    let mut pos = vec![usize::MAX; g.n()];
    for &t in &terms {
        pos[t] = h.add_vertex(g.label(t).to_string());
    }
    for v in 0..g.n() {
        match region[v] {
            Some(i) => pos[v] = pos[terms[i]],
            None => pos[v] = h.add_vertex(g.label(v).to_string()),
        }
    }
    for (u, v) in g.edges() {
        if pos[u] != pos[v] {
            h.add_edge(pos[u], pos[v]);
        }
    }
    let nt = terms.len();
    let mut k = inst.k;
    let mut deleted = Vec::new();
    for &v in &x {
        let hv = pos[v];
        let tn = h.neighbors(hv).iter().filter(|&&u| u < nt).count();
        if tn >= 2 {
            if k == 0 {
                return Ok(TerminalReduction::Negative { doubled_lp: Some(lp.doubled_objective) });
            }
            k -= 1;
            deleted.push(hv);
        }
    }
    let mut drop = deleted.clone();
    let h1 = h.without(&deleted);
    // `without` keeps the relative order, so terminals stay at 0..nt
    drop.extend((0..nt).filter(|&t| h1.neighbors(t).is_empty()));
    let out = h.without(&drop);
    let terminals: Vec<usize> = (0..out.n()).filter(|&v| terms.iter().any(|&t| g.label(t) == out.label(v))).collect();
    let instance = MwcInstance { graph: out, terminals, k, deletable_terminals: false };
    let nbhd = instance.terminal_neighborhood();
    let total: usize = instance.terminals.iter().map(|&t| instance.graph.neighbors(t).len()).sum();
    assert_eq!(total, nbhd.len(), "terminal neighbourhoods overlap after reduction");
    assert!(nbhd.len() <= 2 * k, "|N(T)| = {} exceeds 2k = {}", nbhd.len(), 2 * k);
    Ok(TerminalReduction::Reduced(ReducedMwc {
        instance,
        forced: deleted.iter().map(|&v| h.label(v).to_string()).collect(),
        doubled_lp: lp.doubled_objective,
    }))
}

#[derive(Debug, Clone)]
pub struct MwcKernel {
    pub instance: MwcInstance,
    /// The reduction proved the input negative; `instance` is a trivial negative one.
    pub negative: bool,
    /// Labels of input vertices deleted by forced reductions.
    pub forced: Vec<String>,
    pub failure_bound: f64,
    pub vertex_bound: usize,
}

/// Kernel for multiway cut with deletable terminals. After LP-forced deletions, keeps
/// the terminals plus the vertices whose triple {v, v', v''} survives in a
/// representative family of the gammoid from T, and shortcuts through the rest.
pub fn kernelize_dtmwc<R: Rng + ?Sized>(field: Field, inst: &MwcInstance, rng: &mut R) -> Result<MwcKernel> {
    if !inst.deletable_terminals {
        return Err(Error::Contract("kernelize_dtmwc needs deletable terminals".into()));
    }
    let g = &inst.graph;
    let n = g.n();
    let (gh, sup) = attach_super_terminals(g, &inst.terminals);
    let lp = half_integral_mwc_lp(&gh, &sup)?.expect("super-terminals are never adjacent");
    let negative = |forced: Vec<String>| MwcKernel {
        instance: MwcInstance::trivial_no(true),
        negative: true,
        forced,
        failure_bound: 0.0,
        vertex_bound: 3,
    };
    if lp.doubled_objective > 2 * inst.k {
        return Ok(negative(Vec::new()));
    }
    let x = lp.support();
    let region = regions(&gh, &sup, &x);
    let mut k = inst.k;
    let mut forced = Vec::new();
    for &v in &x {
        let touching: BTreeSet<usize> = gh.neighbors(v).iter().filter_map(|&u| region[u]).collect();
        if touching.len() >= 2 {
            if k == 0 {
                return Ok(negative(forced.iter().map(|&f: &usize| g.label(f).to_string()).collect()));
            }
            k -= 1;
            forced.push(v);
        }
    }
    // terminals whose region no longer touches the rest live in terminal-free pieces
    let g1 = g.without(&forced);
    let map1: Vec<usize> = {
        let mut m = vec![usize::MAX; n];
        let mut i = 0;
        for v in 0..n {
            if !forced.contains(&v) {
                m[v] = i;
                i += 1;
            }
        }
        m
    };
    let comp = g1.components();
    let term1: Vec<usize> = inst.terminals.iter().filter(|t| !forced.contains(t)).map(|&t| map1[t]).collect();
    let mut per_comp: BTreeMap<usize, usize> = BTreeMap::new();
    for &t in &term1 {
        *per_comp.entry(comp[t]).or_default() += 1;
    }
    let keep: Vec<usize> = (0..g1.n()).filter(|&v| per_comp.get(&comp[v]).is_some_and(|&c| c >= 2)).collect();
    let g2 = g1.induced(&keep);
    let terminals: Vec<usize> = (0..g2.n()).filter(|&v| term1.iter().any(|&t| g1.label(t) == g2.label(v))).collect();
    let is_t = terminal_mask(g2.n(), &terminals);
    let others: Vec<usize> = (0..g2.n()).filter(|&v| !is_t[v]).collect();
    let (d1, c1) = add_sink_only_copies(&g2.to_digraph(), &others, "'");
    let (d2, c2) = add_sink_only_copies(&d1, &others, "''");
    let gam = RepresentedMatroid::gammoid(field, &d2, &terminals, rng)?;
    let triples: Vec<(String, Vec<usize>)> =
        others.iter().enumerate().map(|(i, &v)| (g2.label(v).to_string(), vec![v, c1[i], c2[i]])).collect();
    let fam = TupleFamily::from_ids(&gam, triples, false)?;
    let rep = representative_family(&gam, &fam)?;
    let vstar: BTreeSet<usize> = rep.kept.iter().map(|l| g2.id(l).unwrap()).collect();
    let shortcut: Vec<usize> = others.iter().copied().filter(|v| !vstar.contains(v)).collect();
    let out = bypass_vertices_undirected(&g2, &shortcut);
    let terminals: Vec<usize> = (0..out.n()).filter(|&v| terminals.iter().any(|&t| g2.label(t) == out.label(v))).collect();
    let t = terminals.len();
    Ok(MwcKernel {
        instance: MwcInstance { graph: out, terminals, k, deletable_terminals: true },
        negative: false,
        forced: forced.iter().map(|&v| g.label(v).to_string()).collect(),
        failure_bound: gam.failure_bound(),
        vertex_bound: t + crate::matroid::binomial_f64(t, 3) as usize,
    })
}

/// Candidates for highly reachable vertices of an instance in reduced form: vertices
/// whose tuple (v(0), v'(1), .., v'(|T|)) survives in a representative family over a
/// uniform layer of rank k and |T| copies of the gammoid from N(T). Returns ids and the
/// failure weight.
pub fn highly_reachable_candidates<R: Rng + ?Sized>(field: Field, inst: &MwcInstance, rng: &mut R) -> Result<(Vec<usize>, f64)> {
    let g = &inst.graph;
    let is_t = terminal_mask(g.n(), &inst.terminals);
    let others: Vec<usize> = (0..g.n()).filter(|&v| !is_t[v]).collect();
    let s = inst.terminals.len();
    let nt: Vec<usize> = inst.terminal_neighborhood().into_iter().collect();
    if s == 0 || others.is_empty() || nt.is_empty() || inst.k == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let (d, _) = add_sink_only_copies(&g.to_digraph(), &others, "'");
    let layer0 = RepresentedMatroid::uniform(field, g.labels().to_vec(), inst.k.min(g.n()))?;
    let gam = RepresentedMatroid::gammoid(field, &d, &nt, rng)?;
    let mut layers = vec![&layer0];
    layers.extend(std::iter::repeat_n(&gam, s));
    let sum = RepresentedMatroid::direct_sum(&layers)?.with_failure_weight(gam.failure_weight());
    let tuples: Vec<(String, Vec<String>)> = others
        .iter()
        .map(|&v| {
            let l = g.label(v);
            let mut t = vec![format!("{l}(0)")];
            t.extend((1..=s).map(|i| format!("{l}'({i})")));
            (l.to_string(), t)
        })
        .collect();
    let fam = TupleFamily::new(&sum, &tuples, true)?;
    let rep = representative_family(&sum, &fam)?;
    Ok((rep.kept.iter().map(|l| g.id(l).unwrap()).collect(), gam.failure_weight()))
}

/// Kernel for multiway cut with at most s undeletable terminals: terminal reduction,
/// then one bypass per round of the lowest vertex outside T, N(T) and the candidates.
pub fn kernelize_smwc<R: Rng + ?Sized>(field: Field, inst: &MwcInstance, rng: &mut R) -> Result<MwcKernel> {
    let red = match reduce_terminals(inst)? {
        TerminalReduction::Negative { .. } => {
            return Ok(MwcKernel {
                instance: MwcInstance::trivial_no(false),
                negative: true,
                forced: Vec::new(),
                failure_bound: 0.0,
                vertex_bound: 2,
            })
        }
        TerminalReduction::Reduced(r) => r,
    };
    let mut cur = red.instance;
    let mut weight = 0.0;
    loop {
        let (cand, w) = highly_reachable_candidates(field, &cur, rng)?;
        weight += w;
        let keep: BTreeSet<usize> = cur.terminals.iter().copied().chain(cur.terminal_neighborhood()).chain(cand).collect();
        let Some(v) = (0..cur.graph.n()).find(|v| !keep.contains(v)) else {
            break;
        };
        let labels: Vec<String> = cur.terminals.iter().map(|&t| cur.graph.label(t).to_string()).collect();
        let graph = bypass_vertex_undirected(&cur.graph, v);
        let terminals = labels.iter().map(|l| graph.id(l).unwrap()).collect();
        cur = MwcInstance { graph, terminals, ..cur };
    }
    let (t, nt) = (cur.terminals.len(), cur.terminal_neighborhood().len());
    Ok(MwcKernel {
        vertex_bound: t + nt + cur.k * nt.pow(t as u32),
        instance: cur,
        negative: false,
        forced: red.forced,
        failure_bound: (weight / (field.prime() - 1) as f64).min(1.0),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticutInstance {
    pub graph: Graph,
    pub pairs: Vec<(usize, usize)>,
    pub k: usize,
}

#[derive(Debug, Clone)]
pub struct MulticutKernel {
    pub instance: MulticutInstance,
    /// Number of groups the multiway cover is built for: ceil(sqrt(2 r)).
    pub parts: usize,
    pub failure_bound: f64,
    pub vertex_bound: usize,
}

/// Smallest p with p^2 >= 2r.
pub fn multicut_parts(r: usize) -> usize {
    (0..).find(|p| p * p >= 2 * r).unwrap()
}

/// Kernel for vertex multicut with r pairs and undeletable terminals: every terminal
/// becomes k+1 twins, a multiway cover for ceil(sqrt(2r)) groups is kept around the
/// twins, and the rest is bypassed. Pairs move to the first twins `v#1`.
pub fn kernelize_multicut<R: Rng + ?Sized>(field: Field, inst: &MulticutInstance, rng: &mut R) -> Result<MulticutKernel> {
    let g = &inst.graph;
    if let Some(&(a, b)) = inst.pairs.iter().find(|&&(a, b)| a >= g.n() || b >= g.n()) {
        return Err(Error::Bounds(format!("pair ({a}, {b}) of {}", g.n())));
    }
    let terminals: BTreeSet<usize> = inst.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    let labels: Vec<String> = terminals.iter().map(|&t| g.label(t).to_string()).collect();
    let mut h = g.clone();
    for l in &labels {
        let v = h.id(l)?;
        h = make_heavy(&h, v, inst.k).0;
    }
    let x: Vec<usize> = labels.iter().flat_map(|l| (1..=inst.k + 1).map(move |i| format!("{l}#{i}"))).map(|l| h.id(&l).unwrap()).collect();
    let parts = multicut_parts(inst.pairs.len());
    let cover = multiway_cover(field, &h, &x, parts, rng)?;
    let out = cover.reduced_graph;
    let first = |v: usize| out.id(&format!("{}#1", g.label(v))).unwrap();
    let pairs = inst.pairs.iter().map(|&(a, b)| (first(a), first(b))).collect();
    let xs = x.len();
    Ok(MulticutKernel {
        instance: MulticutInstance { graph: out, pairs, k: inst.k },
        parts,
        failure_bound: cover.failure_bound,
        vertex_bound: xs + xs.pow(parts as u32 + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_multicut, brute_multiway_cut, OracleBudget};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn budget() -> OracleBudget {
        OracleBudget { max_vertices: 16, max_k: 10, ..OracleBudget::default() }
    }

    fn answer(inst: &MwcInstance) -> bool {
        let parts: Vec<Vec<usize>> = inst.terminals.iter().map(|&t| vec![t]).collect();
        brute_multiway_cut(&inst.graph, &parts, inst.k, inst.deletable_terminals, &budget()).unwrap().is_some()
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
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

    fn random_instance(rng: &mut ChaCha8Rng, n: usize, nt: usize, k: usize, deletable: bool) -> MwcInstance {
        let mut g = random_graph(rng, n, 0.3);
        if !deletable {
            // adjacent undeletable terminals make every instance negative
            let edges: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| u >= nt || v >= nt).collect();
            g = Graph::from_edges(n, &edges);
        }
        MwcInstance::new(g, (0..nt).collect(), k, deletable).unwrap()
    }

    #[test]
    fn lp_examples() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let lp = half_integral_mwc_lp(&path, &[0, 2]).unwrap().unwrap();
        assert_eq!((lp.doubled_objective, lp.doubled[1]), (2, 2));
        let two = Graph::from_edges(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]);
        assert_eq!(half_integral_mwc_lp(&two, &[0, 3]).unwrap().unwrap().doubled_objective, 4);
        // triangle u,v,w = 3,4,5 with pendant terminals 0,1,2
        let tri = Graph::from_edges(6, &[(0, 3), (1, 4), (2, 5), (3, 4), (4, 5), (3, 5)]);
        let lp = half_integral_mwc_lp(&tri, &[0, 1, 2]).unwrap().unwrap();
        assert_eq!(lp.doubled_objective, 3);
        assert_eq!(&lp.doubled[3..], &[1, 1, 1]);
        assert!(half_integral_mwc_lp(&Graph::from_edges(2, &[(0, 1)]), &[0, 1]).unwrap().is_none());
    }

    #[test]
    fn lp_routes_agree_and_sandwich_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..150 {
            let n = rng.gen_range(3..=10);
            let nt = rng.gen_range(2..=3.min(n));
            let inst = random_instance(&mut rng, n, nt, 0, false);
            let a = half_integral_mwc_lp_exhaustive(&inst.graph, &inst.terminals).unwrap();
            let b = half_integral_mwc_lp_simplex(&inst.graph, &inst.terminals).unwrap();
            assert_eq!(a.as_ref().map(|x| x.doubled_objective), b.as_ref().map(|x| x.doubled_objective));
            if let Some(lp) = a {
                let parts: Vec<Vec<usize>> = inst.terminals.iter().map(|&t| vec![t]).collect();
                let opt = (0..=n).find(|&k| brute_multiway_cut(&inst.graph, &parts, k, false, &budget()).unwrap().is_some()).unwrap();
                assert!(lp.doubled_objective <= 2 * opt && opt <= lp.doubled_objective);
            }
        }
    }

    #[test]
    fn reduction_normal_form_and_answers() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..150 {
            let n = rng.gen_range(3..=9);
            let nt = rng.gen_range(2..=3.min(n));
            let k = rng.gen_range(0..=3);
            let deletable = rng.gen_bool(0.5);
            let inst = random_instance(&mut rng, n, nt, k, deletable);
            let want = answer(&inst);
            match reduce_terminals(&inst).unwrap() {
                TerminalReduction::Negative { .. } => assert!(!want),
                TerminalReduction::Reduced(r) => {
                    assert!(r.instance.terminals.len() <= 2 * r.instance.k);
                    assert_eq!(answer(&r.instance), want, "{inst:?}");
                }
            }
        }
    }

    #[test]
    fn path_reduction_deletes_the_middle() {
        let inst = MwcInstance::new(Graph::from_edges(3, &[(0, 1), (1, 2)]), vec![0, 2], 1, false).unwrap();
        let TerminalReduction::Reduced(r) = reduce_terminals(&inst).unwrap() else { panic!() };
        assert_eq!(r.forced, vec!["1".to_string()]);
        assert_eq!((r.instance.k, r.instance.graph.n()), (0, 0));
    }

    #[test]
    fn vertex_cover_shaped_instances() {
        let f = Field::mersenne61();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        // every vertex of a graph H gets a pendant deletable terminal
        let shaped = |edges: &[(usize, usize)], n: usize, k: usize| {
            let mut g = Graph::from_edges(n, edges);
            let ts: Vec<usize> = (0..n).map(|v| {
                let t = g.add_vertex(format!("t{v}"));
                g.add_edge(t, v);
                t
            }).collect();
            MwcInstance::new(g, ts, k, true).unwrap()
        };
        let edge = shaped(&[(0, 1)], 2, 1);
        let ker = kernelize_dtmwc(f, &edge, &mut rng).unwrap();
        assert!(answer(&edge) && answer(&ker.instance));
        let tri = [(0, 1), (1, 2), (0, 2)];
        for (k, want) in [(1, false), (2, true)] {
            let inst = shaped(&tri, 3, k);
            let ker = kernelize_dtmwc(f, &inst, &mut rng).unwrap();
            assert_eq!((answer(&inst), answer(&ker.instance)), (want, want));
        }
    }

    #[test]
    fn kernels_preserve_answers() {
        let f = Field::mersenne61();
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..100 {
            let n = rng.gen_range(3..=9);
            let nt = rng.gen_range(2..=3.min(n));
            let k = rng.gen_range(0..=3);
            let dt = random_instance(&mut rng, n, nt, k, true);
            let ker = kernelize_dtmwc(f, &dt, &mut rng).unwrap();
            assert_eq!(answer(&ker.instance), answer(&dt));
            assert!(ker.negative || ker.instance.graph.n() <= ker.vertex_bound);
            let s = random_instance(&mut rng, n, nt, k, false);
            let ker = kernelize_smwc(f, &s, &mut rng).unwrap();
            assert_eq!(answer(&ker.instance), answer(&s));
            assert!(ker.negative || ker.instance.graph.n() <= ker.vertex_bound);
        }
    }

    #[test]
    fn multicut_kernel_preserves_answers() {
        let f = Field::mersenne61();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..40 {
            let n = rng.gen_range(4..=8);
            let k = rng.gen_range(0..=2);
            let g = random_graph(&mut rng, n, 0.35);
            let r = rng.gen_range(1..=2);
            let pairs: Vec<(usize, usize)> = (0..r)
                .map(|_| loop {
                    let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    if a != b && !g.has_edge(a, b) {
                        break (a, b);
                    }
                })
                .collect();
            let inst = MulticutInstance { graph: g.clone(), pairs: pairs.clone(), k };
            let ker = kernelize_multicut(f, &inst, &mut rng).unwrap();
            let big = OracleBudget { max_vertices: 40, ..OracleBudget::default() };
            let a = brute_multicut(&g, &pairs, k, &big).unwrap().is_some();
            let b = brute_multicut(&ker.instance.graph, &ker.instance.pairs, k, &big).unwrap().is_some();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn parts_for_pairs() {
        assert_eq!([1, 2, 3, 4, 5].map(multicut_parts), [2, 2, 3, 3, 4]);
    }
}
