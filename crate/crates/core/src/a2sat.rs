//! Almost 2-SAT: variable deletion to reach a satisfiable 2-CNF formula. Reduction to
//! digraph pair cut, an exact bootstrap by iterative compression, the kernel pipeline,
//! and vertex cover above LP rewritten as vertex cover above a maximum matching.

use petgraph::graph::{DiGraph, UnGraph};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactfield::Field;
use crate::graphcut::{Digraph, Graph};
use crate::paircut::{kernelize_dpc, solve_dpc, PairCutInstance};

/// A literal; `neg` marks negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub neg: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit { var, neg: false }
    }

    pub fn neg(var: usize) -> Self {
        Lit { var, neg: true }
    }

    pub fn negated(self) -> Self {
        Lit { var: self.var, neg: !self.neg }
    }

    /// DIMACS-style signed 1-based integer.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.neg {
            -v
        } else {
            v
        }
    }
}

/// Conjunction of clauses with one or two literals each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf2 {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf2 {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> Result<Self> {
        for c in &clauses {
            if c.is_empty() || c.len() > 2 {
                return Err(Error::Contract(format!("clause with {} literals", c.len())));
            }
            if let Some(l) = c.iter().find(|l| l.var >= num_vars) {
                return Err(Error::Bounds(format!("variable {} of {num_vars}", l.var)));
            }
        }
        Ok(Cnf2 { num_vars, clauses })
    }

    /// The formula left after removing every clause that mentions a variable of `deleted`.
    pub fn without_vars(&self, deleted: &[usize]) -> Cnf2 {
        let mut gone = vec![false; self.num_vars];
        for &v in deleted {
            gone[v] = true;
        }
        let clauses = self.clauses.iter().filter(|c| c.iter().all(|l| !gone[l.var])).cloned().collect();
        Cnf2 { num_vars: self.num_vars, clauses }
    }

    pub fn is_deletion_set(&self, deleted: &[usize]) -> bool {
        is_satisfiable_2sat(&self.without_vars(deleted)).is_some()
    }
}

fn lit_node(l: Lit) -> usize {
    // negative literals first, so unconstrained variables end up false
    2 * l.var + usize::from(!l.neg)
}

/// Satisfying assignment via strongly connected components of the implication graph,
/// or None.
pub fn is_satisfiable_2sat(f: &Cnf2) -> Option<Vec<bool>> {
    let n = f.num_vars;
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(2 * n, 2 * f.clauses.len());
    let nodes: Vec<_> = (0..2 * n).map(|_| g.add_node(())).collect();
    for c in &f.clauses {
        let (a, b) = (c[0], *c.get(1).unwrap_or(&c[0]));
        g.add_edge(nodes[lit_node(a.negated())], nodes[lit_node(b)], ());
        g.add_edge(nodes[lit_node(b.negated())], nodes[lit_node(a)], ());
    }
    // components come in reverse topological order
    let mut comp = vec![0; 2 * n];
    for (i, scc) in petgraph::algo::tarjan_scc(&g).iter().enumerate() {
        for v in scc {
            comp[v.index()] = i;
        }
    }
    (0..n)
        .map(|v| {
            let (t, f) = (comp[lit_node(Lit::pos(v))], comp[lit_node(Lit::neg(v))]);
            (t != f).then_some(t < f)
        })
        .collect()
}

/// What a vertex of the pair-cut instance stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    Source,
    /// A variable outside X; reachable means true after normalization.
    Var(usize),
    /// The literal vertex x_b of a variable of X: reachable means x = b after normalization.
    Literal { var: usize, value: bool },
}

#[derive(Debug, Clone)]
pub struct A2satDpc {
    pub instance: PairCutInstance,
    pub x: Vec<usize>,
    /// Variables negated so that the formula minus X is satisfied by all-false.
    pub flipped: Vec<bool>,
    pub roles: Vec<VertexRole>,
}

impl A2satDpc {
    /// Deletion set of the formula encoded by a pair-cut solution.
    pub fn deletion_set(&self, cut: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &c in cut {
            match self.roles[c] {
                VertexRole::Var(v) => out.push(v),
                VertexRole::Literal { var, value: true } => {
                    let other = cut.iter().any(|&d| self.roles[d] == VertexRole::Literal { var, value: false });
                    if other {
                        out.push(var);
                    }
                }
                _ => {}
            }
        }
        out.sort_unstable();
        out
    }
}

/// Pair-cut instance with budget |X| + k that is positive iff F has a deletion set of
/// size at most k. X must be a deletion set of F.
pub fn reduce_to_dpc(f: &Cnf2, x: &[usize], k: usize) -> Result<A2satDpc> {
    let n = f.num_vars;
    let Some(sigma) = is_satisfiable_2sat(&f.without_vars(x)) else {
        return Err(Error::Contract("X is not a deletion set".into()));
    };
    let mut in_x = vec![false; n];
    for &v in x {
        in_x[v] = true;
    }
    let flipped: Vec<bool> = (0..n).map(|v| !in_x[v] && sigma[v]).collect();
    let mut d = Digraph::new();
    let mut roles = vec![VertexRole::Source];
    let s = d.add_vertex("s");
    let mut var_vertex = vec![usize::MAX; n];
    let mut lit_vertex = vec![[usize::MAX; 2]; n];
    for v in 0..n {
        if in_x[v] {
            for b in [false, true] {
                lit_vertex[v][usize::from(b)] = d.add_vertex(format!("x{v}_{}", u8::from(b)));
                roles.push(VertexRole::Literal { var: v, value: b });
            }
        } else {
            var_vertex[v] = d.add_vertex(format!("v{v}"));
            roles.push(VertexRole::Var(v));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut xs: Vec<usize> = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    for &v in &xs {
        let [l0, l1] = lit_vertex[v];
        d.add_arc(s, l0);
        d.add_arc(s, l1);
        pairs.push((l0, l1));
    }
    let norm = |l: Lit| Lit { var: l.var, neg: l.neg ^ flipped[l.var] };
    // the literal is false exactly when this vertex is reachable
    let falsifier = |l: Lit| lit_vertex[l.var][usize::from(l.neg)];
    for c in &f.clauses {
        let a = norm(c[0]);
        let b = norm(*c.get(1).unwrap_or(&c[0]));
        if a.var == b.var && a.neg != b.neg {
            continue;
        }
        let lits: Vec<Lit> = if a == b { vec![a] } else { vec![a, b] };
        let (inside, outside): (Vec<Lit>, Vec<Lit>) = lits.into_iter().partition(|l| in_x[l.var]);
        match (inside.as_slice(), outside.as_slice()) {
            ([p], []) => pairs.push((s, falsifier(*p))),
            ([p, q], []) => pairs.push((falsifier(*p), falsifier(*q))),
            ([p], [y]) => {
                if y.neg {
                    pairs.push((falsifier(*p), var_vertex[y.var]));
                } else {
                    d.add_arc(falsifier(*p), var_vertex[y.var]);
                }
            }
            ([], [y]) => {
                if !y.neg {
                    return Err(Error::Contract("positive unit clause after normalization".into()));
                }
                pairs.push((s, var_vertex[y.var]));
            }
            ([], [y, z]) => match (y.neg, z.neg) {
                (true, true) => pairs.push((var_vertex[y.var], var_vertex[z.var])),
                (false, true) => d.add_arc(var_vertex[z.var], var_vertex[y.var]),
                (true, false) => d.add_arc(var_vertex[y.var], var_vertex[z.var]),
                (false, false) => return Err(Error::Contract("positive clause after normalization".into())),
            },
            _ => unreachable!("at most two literals"),
        }
    }
    let instance = PairCutInstance::with_pairs(d, s, &pairs, xs.len() + k)?;
    Ok(A2satDpc { instance, x: xs, flipped, roles })
}

/// Deletion set by iterative compression over the variables, keeping |X| <= k+1 and
/// compressing with the pair-cut solver when it would grow past that. None means no
/// deletion set of size k exists. A satisfiable formula gives the empty set.
pub fn bootstrap_deletion_set(f: &Cnf2, k: usize) -> Result<Option<Vec<usize>>> {
    if is_satisfiable_2sat(f).is_some() {
        return Ok(Some(Vec::new()));
    }
    let mut x: Vec<usize> = Vec::new();
    for i in 0..f.num_vars {
        let prefix = Cnf2 { num_vars: f.num_vars, clauses: f.clauses.iter().filter(|c| c.iter().all(|l| l.var <= i)).cloned().collect() };
        if prefix.is_deletion_set(&x) {
            continue;
        }
        x.push(i);
        if x.len() > k + 1 {
            let red = reduce_to_dpc(&prefix, &x, k + 1)?;
            match solve_dpc(&red.instance).solution {
                None => return Ok(None),
                Some(cut) => x = red.deletion_set(&cut),
            }
        }
    }
    Ok(Some(x))
}

/// Exact deletion set of size <= k, or None: bootstrap, then one compression step with
/// budget k when the bootstrap stops at k+1.
pub fn solve_a2sat(f: &Cnf2, k: usize) -> Result<Option<Vec<usize>>> {
    let Some(x) = bootstrap_deletion_set(f, k)? else {
        return Ok(None);
    };
    if x.len() <= k {
        return Ok(Some(x));
    }
    let red = reduce_to_dpc(f, &x, k)?;
    Ok(solve_dpc(&red.instance).solution.map(|cut| red.deletion_set(&cut)))
}

/// Formula whose deletion sets of size <= k are exactly the pair-cut solutions: one
/// variable per vertex, the source replaced by k+1 forced-true copies.
#[derive(Debug, Clone)]
pub struct EncodedDpc {
    pub formula: Cnf2,
    pub k: usize,
    /// Vertex label per variable; copies of the source are `label#i`.
    pub names: Vec<String>,
}

pub fn encode_dpc_as_2cnf(inst: &PairCutInstance) -> EncodedDpc {
    let d = &inst.graph;
    let s = inst.source;
    let mut var = vec![usize::MAX; d.n()];
    let mut names = Vec::new();
    for v in (0..d.n()).filter(|&v| v != s) {
        var[v] = names.len();
        names.push(d.label(v).to_string());
    }
    let copies: Vec<usize> = (1..=inst.k + 1)
        .map(|i| {
            names.push(format!("{}#{i}", d.label(s)));
            names.len() - 1
        })
        .collect();
    let mut clauses: Vec<Vec<Lit>> = copies.iter().map(|&c| vec![Lit::pos(c)]).collect();
    let expand = |v: usize| if v == s { copies.clone() } else { vec![var[v]] };
    for (u, v) in d.arcs() {
        if v == s {
            continue;
        }
        for a in expand(u) {
            clauses.push(vec![Lit::neg(a), Lit::pos(var[v])]);
        }
    }
    for t in &inst.tuples {
        let (u, v) = match t.as_slice() {
            [u] => (*u, *u),
            [u, v] => (*u, *v),
            _ => panic!("only pairs and singletons encode as 2-CNF"),
        };
        for a in expand(u) {
            for b in expand(v) {
                clauses.push(if a == b { vec![Lit::neg(a)] } else { vec![Lit::neg(a), Lit::neg(b)] });
            }
        }
    }
    EncodedDpc { formula: Cnf2 { num_vars: names.len(), clauses }, k: inst.k, names }
}

#[derive(Debug, Clone)]
pub struct A2satKernel {
    pub formula: Cnf2,
    pub k: usize,
    pub names: Vec<String>,
    /// Decided during bootstrapping; the formula is a fixed trivial instance.
    pub decided: Option<bool>,
    pub bootstrap_size: usize,
    pub false_positive_bound: f64,
    pub false_negative_bound: f64,
    /// Variable bound of the pipeline: pair-cut kernel vertices minus the source plus
    /// k'+1 source copies, with k' = |X| + k.
    pub variable_bound: usize,
}

/// Bootstrap, reduce to pair cut, kernelize, and encode back as a formula.
pub fn kernelize_a2sat<R: Rng + ?Sized>(field: Field, f: &Cnf2, k: usize, rng: &mut R) -> Result<A2satKernel> {
    let decided = |yes: bool, size: usize| {
        let formula = if yes {
            Cnf2 { num_vars: 0, clauses: vec![] }
        } else {
            Cnf2 { num_vars: 1, clauses: vec![vec![Lit::pos(0)], vec![Lit::neg(0)]] }
        };
        A2satKernel {
            names: (0..formula.num_vars).map(|i| format!("z{i}")).collect(),
            formula,
            k: 0,
            decided: Some(yes),
            bootstrap_size: size,
            false_positive_bound: 0.0,
            false_negative_bound: 0.0,
            variable_bound: 1,
        }
    };
    let Some(x) = bootstrap_deletion_set(f, k)? else {
        return Ok(decided(false, 0));
    };
    if x.len() <= k {
        return Ok(decided(true, x.len()));
    }
    let red = reduce_to_dpc(f, &x, k)?;
    let ker = kernelize_dpc(field, &red.instance, rng)?;
    let enc = encode_dpc_as_2cnf(&ker.instance);
    Ok(A2satKernel {
        formula: enc.formula,
        k: enc.k,
        names: enc.names,
        decided: None,
        bootstrap_size: x.len(),
        false_positive_bound: ker.false_positive_bound,
        false_negative_bound: ker.false_negative_bound,
        variable_bound: ker.vertex_bound - 1 + red.instance.k + 1,
    })
}

/// Maximum matching (Edmonds' blossom algorithm) as sorted vertex pairs.
pub fn maximum_matching(g: &Graph) -> Vec<(usize, usize)> {
    let pg: UnGraph<(), ()> = UnGraph::from_edges(g.edges().map(|(u, v)| (u as u32, v as u32)));
    let mut pg = pg;
    while pg.node_count() < g.n() {
        pg.add_node(());
    }
    let m = petgraph::algo::maximum_matching(&pg);
    let mut out: Vec<(usize, usize)> = m.edges().map(|(a, b)| (a.index().min(b.index()), a.index().max(b.index()))).collect();
    out.sort_unstable();
    out
}

/// Twice the optimum of the vertex cover relaxation: a maximum matching in the
/// bipartite double cover, by Koenig's theorem.
pub fn vc_lp_doubled(g: &Graph) -> usize {
    let n = g.n();
    let mut h = Graph::with_vertices(2 * n);
    for (u, v) in g.edges() {
        h.add_edge(u, n + v);
        h.add_edge(v, n + u);
    }
    maximum_matching(&h).len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcAboveMatching {
    pub graph: Graph,
    /// Budget above the maximum matching.
    pub k: usize,
    pub matching: usize,
    pub doubled_lp: usize,
    /// The input was negative and `graph` is a fixed negative instance.
    pub dummy: bool,
}

/// Vertex cover above LP (is there a cover of size <= LP + k?) as vertex cover above a
/// maximum matching with k' = floor(LP + k) - |M| <= 3k + 1.
pub fn reduce_vc_above_lp(g: &Graph, k: usize) -> VcAboveMatching {
    let doubled_lp = vc_lp_doubled(g);
    let matching = maximum_matching(g).len();
    if 2 * matching + 2 * (2 * k + 1) < doubled_lp {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        return VcAboveMatching { graph: tri, k: 0, matching: 1, doubled_lp: 3, dummy: true };
    }
    VcAboveMatching { graph: g.clone(), k: (doubled_lp + 2 * k) / 2 - matching, matching, doubled_lp, dummy: false }
}
