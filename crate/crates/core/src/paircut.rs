//! Digraph pair cut: delete at most k vertices other than s so that no pair (or q-tuple)
//! has all its members reachable from s. Exact branching solver, representative pairs,
//! compression into a gammoid representation, and a polynomial kernel.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::Rng;

use crate::cutcover::cut_covering_set;
use crate::error::{Error, Result};
use crate::exactfield::{next_prime, Field, MAX_PRIME};
use crate::graphcut::{bypass_vertices, min_vertex_cut, reachable_after, CutOutcome, CutQuery, Digraph};
use crate::matroid::{transversal_failure_weight, RepresentedMatroid};
use crate::repset::{representative_family, TupleFamily};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCutInstance {
    pub graph: Digraph,
    pub source: usize,
    /// Pairs, or q-tuples for the generalized problem. A tuple is violated when every
    /// member is reachable from the source.
    pub tuples: Vec<Vec<usize>>,
    pub k: usize,
}

impl PairCutInstance {
    pub fn new(graph: Digraph, source: usize, tuples: Vec<Vec<usize>>, k: usize) -> Result<Self> {
        let n = graph.n();
        if source >= n {
            return Err(Error::Bounds(format!("source {source} of {n}")));
        }
        if let Some(&v) = tuples.iter().flatten().find(|&&v| v >= n) {
            return Err(Error::Bounds(format!("tuple member {v} of {n}")));
        }
        if tuples.iter().any(|t| t.is_empty()) {
            return Err(Error::Contract("empty tuple".into()));
        }
        Ok(PairCutInstance { graph, source, tuples, k })
    }

    pub fn with_pairs(graph: Digraph, source: usize, pairs: &[(usize, usize)], k: usize) -> Result<Self> {
        Self::new(graph, source, pairs.iter().map(|&(u, v)| vec![u, v]).collect(), k)
    }

    /// Common tuple size, if all tuples agree.
    pub fn arity(&self) -> Option<usize> {
        let q = self.tuples.first()?.len();
        self.tuples.iter().all(|t| t.len() == q).then_some(q)
    }

    /// Whether deleting `x` leaves no tuple fully reachable. `x` must avoid the source.
    pub fn is_solution(&self, x: &[usize]) -> bool {
        if x.contains(&self.source) || x.len() > self.k {
            return false;
        }
        let reach = reachable_after(&self.graph, &[self.source], x);
        !self.tuples.iter().any(|t| t.iter().all(|&v| reach[v]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpcOutcome {
    pub solution: Option<Vec<usize>>,
    /// Leaves of the search tree restricted to nodes whose cut fits the budget.
    pub leaves: usize,
}

fn first_reachable(tuples: &[Vec<usize>], reachable: impl Fn(usize) -> bool) -> Option<&Vec<usize>> {
    tuples.iter().find(|t| t.iter().all(|&v| reachable(v)))
}

/// Exact branching on the closest cut between s and a growing sink set T. The witness
/// is the closest cut of the first accepting branch.
pub fn solve_dpc(inst: &PairCutInstance) -> DpcOutcome {
    fn rec(inst: &PairCutInstance, sinks: &mut Vec<usize>) -> (Option<Vec<usize>>, usize) {
        let q = CutQuery::new(inst.graph.n(), &[inst.source], sinks).protect(&[inst.source]);
        let cut = match min_vertex_cut(&inst.graph, &q) {
            CutOutcome::Cut(c) if c.len() <= inst.k => c,
            _ => return (None, 0),
        };
        let reach = reachable_after(&inst.graph, &[inst.source], &cut);
        let Some(t) = first_reachable(&inst.tuples, |v| reach[v]) else {
            return (Some(cut), 1);
        };
        let mut leaves = 0;
        for &u in &t.clone() {
            sinks.push(u);
            let (sol, l) = rec(inst, sinks);
            sinks.pop();
            leaves += l;
            if sol.is_some() {
                return (sol, leaves.max(1));
            }
        }
        (None, leaves.max(1))
    }
    let (solution, leaves) = rec(inst, &mut Vec::new());
    DpcOutcome { solution, leaves }
}

/// D with s replaced by k+1 copies labelled `s#1`..`s#(k+1)`, each with all arcs of s.
#[derive(Debug, Clone)]
pub struct SourceCopies {
    pub graph: Digraph,
    pub copies: Vec<usize>,
    /// Vertex of the new graph for each original vertex; s maps to its first copy.
    pub map: Vec<usize>,
}

pub fn split_source(inst: &PairCutInstance) -> SourceCopies {
    let d = &inst.graph;
    let s = inst.source;
    let mut g = Digraph::new();
    let mut map = vec![usize::MAX; d.n()];
    for v in (0..d.n()).filter(|&v| v != s) {
        map[v] = g.add_vertex(d.label(v).to_string());
    }
    let copies: Vec<usize> = (1..=inst.k + 1).map(|i| g.add_vertex(format!("{}#{i}", d.label(s)))).collect();
    map[s] = copies[0];
    for (u, v) in d.arcs() {
        match (u == s, v == s) {
            (false, false) => g.add_arc(map[u], map[v]),
            (true, _) => copies.iter().for_each(|&c| g.add_arc(c, map[v])),
            (false, true) => copies.iter().for_each(|&c| g.add_arc(map[u], c)),
        }
    }
    SourceCopies { graph: g, copies, map }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representatives {
    /// Indices into the instance's tuples, ascending.
    pub kept: Vec<usize>,
    pub failure_bound: f64,
    pub vector_dim: usize,
}

fn representatives_in(gam: &RepresentedMatroid, sc: &SourceCopies, tuples: &[Vec<usize>]) -> Result<(Vec<usize>, usize)> {
    let Some(q) = tuples.first().map(|t| t.len()) else {
        return Ok((Vec::new(), 0));
    };
    if tuples.iter().any(|t| t.len() != q) {
        return Err(Error::Contract("tuples of different sizes".into()));
    }
    let layers = vec![gam; q];
    // one random matrix used q times: its failure event is counted once
    let sum = RepresentedMatroid::direct_sum(&layers)?.with_failure_weight(gam.failure_weight());
    let fam: Vec<(String, Vec<String>)> = tuples
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let members = t.iter().enumerate().map(|(j, &v)| format!("{}({j})", sc.graph.label(sc.map[v]))).collect();
            (i.to_string(), members)
        })
        .collect();
    let fam = TupleFamily::new(&sum, &fam, true)?;
    let rep = representative_family(&sum, &fam)?;
    let kept = rep.kept.iter().map(|l| l.parse().expect("tuple labels are indices")).collect();
    Ok((kept, rep.vector_dim))
}

/// At most (k+1)^q tuples such that, for every X closest to s with |X| <= k, D - X has a
/// fully reachable tuple of P iff it has one among the kept tuples.
pub fn representative_tuples_q<R: Rng + ?Sized>(field: Field, inst: &PairCutInstance, rng: &mut R) -> Result<Representatives> {
    let sc = split_source(inst);
    let gam = RepresentedMatroid::gammoid(field, &sc.graph, &sc.copies, rng)?;
    let (kept, vector_dim) = representatives_in(&gam, &sc, &inst.tuples)?;
    Ok(Representatives { kept, failure_bound: gam.failure_bound(), vector_dim })
}

/// The pair case of [`representative_tuples_q`]; at most (k+1)^2 pairs.
pub fn representative_pairs<R: Rng + ?Sized>(field: Field, inst: &PairCutInstance, rng: &mut R) -> Result<Representatives> {
    if inst.arity().is_some_and(|q| q != 2) {
        return Err(Error::Contract("representative_pairs needs pairs".into()));
    }
    representative_tuples_q(field, inst, rng)
}

/// Gammoid representation restricted to the source copies and the members of the
/// representative tuples; enough to decide the instance without the digraph.
#[derive(Debug, Clone)]
pub struct CompressedDpc {
    pub matroid: RepresentedMatroid,
    pub sources: Vec<String>,
    pub tuples: Vec<Vec<String>>,
    pub k: usize,
    pub failure_bound: f64,
}

impl CompressedDpc {
    /// Size of the matrix payload in bits, at ceil(log2 p) bits per entry.
    pub fn matrix_bits(&self) -> u64 {
        let m = self.matroid.matrix();
        let bits = 64 - self.matroid.field().prime().leading_zeros() as u64;
        (m.rows() * m.cols()) as u64 * bits
    }

    /// `compressed-dpc <k> <#sources> <#tuples>`, then `source` and `tuple` lines, then
    /// the matroid export.
    pub fn export(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "compressed-dpc {} {} {}", self.k, self.sources.len(), self.tuples.len());
        for l in &self.sources {
            let _ = writeln!(s, "source {l}");
        }
        for t in &self.tuples {
            let _ = writeln!(s, "tuple {}", t.join(" "));
        }
        s.push_str(&self.matroid.export());
        s
    }

    pub fn import(text: &str) -> Result<Self> {
        let fmt = |line: usize, msg: &str| Error::Format { line, msg: msg.to_string() };
        let lines: Vec<&str> = text.lines().collect();
        let mut idx = lines.iter().position(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#')).ok_or_else(|| fmt(1, "empty input"))?;
        let head: Vec<&str> = lines[idx].split_whitespace().collect();
        if head.len() != 4 || head[0] != "compressed-dpc" {
            return Err(fmt(idx + 1, "expected `compressed-dpc <k> <#sources> <#tuples>`"));
        }
        let num = |s: &str, line: usize| s.parse::<usize>().map_err(|_| fmt(line, &format!("bad number `{s}`")));
        let (k, ns, nt) = (num(head[1], idx + 1)?, num(head[2], idx + 1)?, num(head[3], idx + 1)?);
        let mut sources = Vec::with_capacity(ns);
        let mut tuples = Vec::with_capacity(nt);
        for want in (0..ns).map(|_| "source").chain((0..nt).map(|_| "tuple")) {
            idx += 1;
            let words: Vec<&str> = lines.get(idx).ok_or_else(|| fmt(idx + 1, "unexpected end of input"))?.split_whitespace().collect();
            if words.first() != Some(&want) || words.len() < 2 {
                return Err(fmt(idx + 1, &format!("expected a `{want}` line")));
            }
            if want == "source" {
                sources.push(words[1].to_string());
            } else {
                tuples.push(words[1..].iter().map(|w| w.to_string()).collect());
            }
        }
        let rest = lines[idx + 1..].join("\n");
        let matroid = RepresentedMatroid::import(&rest).map_err(|e| match e {
            Error::Format { line, msg } => Error::Format { line: line + idx + 1, msg },
            other => other,
        })?;
        for l in sources.iter().chain(tuples.iter().flatten()) {
            if matroid.id(l).is_err() {
                return Err(fmt(1, &format!("label `{l}` is not in the ground set")));
            }
        }
        let failure_bound = 0.0;
        Ok(CompressedDpc { matroid, sources, tuples, k, failure_bound })
    }
}

/// Chooses the prime so the gammoid's failure probability is at most `epsilon`, keeps
/// the representative tuples, and restricts the gammoid to sources and tuple members.
/// Failures make a negative instance look positive, never the reverse.
pub fn compress_dpc<R: Rng + ?Sized>(inst: &PairCutInstance, epsilon: f64, rng: &mut R) -> Result<CompressedDpc> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!("epsilon {epsilon} outside (0,1)")));
    }
    let sc = split_source(inst);
    let n = sc.graph.n();
    let weight = transversal_failure_weight(n, n - sc.copies.len()); // every non-source row matches its own vertex
    let need = (weight / epsilon).ceil() + 1.0;
    let floor = (n as f64).powi(3).max((1u64 << 40) as f64) + 1.0;
    let target = need.max(floor);
    if target >= MAX_PRIME as f64 {
        return Err(Error::Config(format!("epsilon {epsilon} needs a prime above {target:.3e}, beyond 64-bit arithmetic")));
    }
    let p = next_prime(target as u64).ok_or_else(|| Error::Config("no prime in range".into()))?;
    let field = Field::new(p)?;
    let gam = RepresentedMatroid::gammoid(field, &sc.graph, &sc.copies, rng)?;
    let (kept, _) = representatives_in(&gam, &sc, &inst.tuples)?;
    let tuples: Vec<&Vec<usize>> = kept.iter().map(|&i| &inst.tuples[i]).collect();
    let mut ground: BTreeSet<usize> = sc.copies.iter().copied().collect();
    ground.extend(tuples.iter().flat_map(|t| t.iter().map(|&v| sc.map[v])));
    let ground: Vec<usize> = ground.into_iter().collect();
    let matroid = gam.restrict(&ground)?;
    Ok(CompressedDpc {
        sources: sc.copies.iter().map(|&c| sc.graph.label(c).to_string()).collect(),
        tuples: tuples.iter().map(|t| t.iter().map(|&v| sc.graph.label(sc.map[v]).to_string()).collect()).collect(),
        k: inst.k,
        failure_bound: gam.failure_bound(),
        matroid,
    })
}

/// Runs the branching solver on rank queries alone: the closest cut for sinks T has size
/// rank(T), and u stays reachable iff rank(T + u) > rank(T).
pub fn decide_compressed(c: &CompressedDpc) -> Result<DpcOutcomeCompressed> {
    let m = &c.matroid;
    let tuples: Vec<Vec<usize>> = c.tuples.iter().map(|t| m.ids(t)).collect::<Result<_>>()?;
    fn rec(m: &RepresentedMatroid, tuples: &[Vec<usize>], k: usize, sinks: &mut Vec<usize>) -> (bool, usize) {
        let lambda = m.rank_of(sinks);
        if lambda > k {
            return (false, 0);
        }
        let reachable = |u: usize| {
            let mut t = sinks.clone();
            t.push(u);
            m.rank_of(&t) > lambda
        };
        let Some(t) = first_reachable(tuples, reachable) else {
            return (true, 1);
        };
        let mut leaves = 0;
        for &u in &t.clone() {
            sinks.push(u);
            let (ok, l) = rec(m, tuples, k, sinks);
            sinks.pop();
            leaves += l;
            if ok {
                return (true, leaves.max(1));
            }
        }
        (false, leaves.max(1))
    }
    let (positive, leaves) = rec(m, &tuples, c.k, &mut Vec::new());
    Ok(DpcOutcomeCompressed { positive, leaves })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpcOutcomeCompressed {
    pub positive: bool,
    pub leaves: usize,
}

#[derive(Debug, Clone)]
pub struct DpcKernel {
    pub instance: PairCutInstance,
    /// Kernel vertex for each original vertex, if kept.
    pub vertex_map: BTreeMap<usize, usize>,
    /// Probability that the representative tuples miss a violated tuple (kernel may say
    /// yes wrongly).
    pub false_positive_bound: f64,
    /// Probability that the cut-covering set misses a cut (kernel may say no wrongly).
    pub false_negative_bound: f64,
    /// Upper bound on the kernel's vertex count: 1 + |T| + (k+1) |T| (k+1), with T the
    /// union of the kept tuples.
    pub vertex_bound: usize,
}

/// Keeps the representative tuples and a cut-covering set between the k+1 source copies
/// and the tuple members; bypasses every other vertex.
pub fn kernelize_dpc<R: Rng + ?Sized>(field: Field, inst: &PairCutInstance, rng: &mut R) -> Result<DpcKernel> {
    let sc = split_source(inst);
    let gam = RepresentedMatroid::gammoid(field, &sc.graph, &sc.copies, rng)?;
    let (kept, _) = representatives_in(&gam, &sc, &inst.tuples)?;
    let tuples: Vec<Vec<usize>> = kept.iter().map(|&i| inst.tuples[i].clone()).collect();
    let members: BTreeSet<usize> = tuples.iter().flatten().copied().collect();
    let sinks: Vec<usize> = members.iter().map(|&v| sc.map[v]).collect();
    let cover = cut_covering_set(field, &sc.graph, &sc.copies, &sinks, rng)?;
    let mut keep: BTreeSet<usize> = members.clone();
    keep.insert(inst.source);
    keep.extend(cover.z.iter().map(|&z| inst.graph.id(sc.graph.label(z)).expect("non-copy vertices keep labels")));
    let drop: Vec<usize> = (0..inst.graph.n()).filter(|v| !keep.contains(v)).collect();
    let reduced = bypass_vertices(&inst.graph, &drop);
    let vertex_map: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let instance = PairCutInstance {
        source: vertex_map[&inst.source],
        tuples: tuples.iter().map(|t| t.iter().map(|v| vertex_map[v]).collect()).collect(),
        k: inst.k,
        graph: reduced,
    };
    let t = members.len();
    Ok(DpcKernel {
        instance,
        vertex_map,
        false_positive_bound: gam.failure_bound(),
        false_negative_bound: cover.failure_bound,
        vertex_bound: 1 + t + (inst.k + 1) * t * (inst.k + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcut::closest_cut;
    use crate::oracle::{brute_dpc, OracleBudget};
    use itertools::Itertools;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn star(leaves: usize) -> Digraph {
        let arcs: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
        Digraph::from_arcs(leaves + 1, &arcs)
    }

    pub(crate) fn random_instance(rng: &mut ChaCha8Rng, n: usize, k: usize, q: usize) -> PairCutInstance {
        let mut d = Digraph::with_vertices(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.25) {
                    d.add_arc(u, v);
                }
            }
        }
        let m = rng.gen_range(0..=6);
        let tuples = (0..m).map(|_| (0..q).map(|_| rng.gen_range(1..n)).collect()).collect();
        PairCutInstance::new(d, 0, tuples, k).unwrap()
    }

    #[test]
    fn star_examples() {
        let inst = PairCutInstance::with_pairs(star(3), 0, &[(1, 2), (2, 3)], 1).unwrap();
        assert_eq!(solve_dpc(&inst).solution, Some(vec![2]));
        let tri = PairCutInstance::with_pairs(star(3), 0, &[(1, 2), (2, 3), (1, 3)], 1).unwrap();
        assert_eq!(solve_dpc(&tri).solution, None);
        let none = PairCutInstance::new(star(3), 0, vec![], 0).unwrap();
        assert_eq!(solve_dpc(&none).solution, Some(vec![]));
    }

    #[test]
    fn solver_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..300 {
            let n = rng.gen_range(2..=9);
            let k = rng.gen_range(0..=3);
            let inst = random_instance(&mut rng, n, k, 2);
            let out = solve_dpc(&inst);
            let brute = brute_dpc(&inst.graph, 0, &inst.tuples, k, &OracleBudget::default()).unwrap();
            assert_eq!(out.solution.is_some(), brute.is_some());
            assert!(out.leaves <= 1 << k);
            if let Some(x) = out.solution {
                assert!(inst.is_solution(&x));
                let q = CutQuery::new(n, &[0], &x).protect(&[0]);
                assert_eq!(min_vertex_cut(&inst.graph, &q).cut().unwrap(), x.as_slice());
            }
        }
    }

    #[test]
    fn split_source_copies() {
        let inst = PairCutInstance::with_pairs(star(2), 0, &[(1, 2)], 1).unwrap();
        let sc = split_source(&inst);
        assert_eq!(sc.graph.labels(), &["1", "2", "0#1", "0#2"]);
        assert_eq!(sc.graph.arc_count(), 4);
    }

    fn closest_sets(inst: &PairCutInstance) -> Vec<Vec<usize>> {
        let n = inst.graph.n();
        (1..n)
            .powerset()
            .filter(|x| x.len() <= inst.k)
            .filter(|x| {
                let q = CutQuery::new(n, &[inst.source], x).protect(&[inst.source]);
                min_vertex_cut(&inst.graph, &q).cut() == Some(x.as_slice())
            })
            .collect()
    }

    fn has_reachable(inst: &PairCutInstance, x: &[usize], which: &[usize]) -> bool {
        let reach = reachable_after(&inst.graph, &[inst.source], x);
        which.iter().any(|&i| inst.tuples[i].iter().all(|&v| reach[v]))
    }

    #[test]
    fn representative_pairs_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let f = Field::mersenne61();
        for _ in 0..80 {
            let n = rng.gen_range(3..=8);
            let k = rng.gen_range(0..=2);
            let mut inst = random_instance(&mut rng, n, k, 2);
            inst.tuples.extend((0..6).map(|_| vec![rng.gen_range(1..n), rng.gen_range(1..n)]));
            let rep = representative_pairs(f, &inst, &mut rng).unwrap();
            assert!(rep.kept.len() <= (k + 1) * (k + 1));
            let all: Vec<usize> = (0..inst.tuples.len()).collect();
            for x in closest_sets(&inst) {
                assert_eq!(has_reachable(&inst, &x, &all), has_reachable(&inst, &x, &rep.kept), "X = {x:?}");
            }
        }
    }

    #[test]
    fn closest_cut_in_split_graph_is_the_solver_witness() {
        let inst = PairCutInstance::with_pairs(Digraph::from_arcs(4, &[(0, 1), (1, 2), (2, 3)]), 0, &[(3, 3)], 1).unwrap();
        let x = solve_dpc(&inst).solution.unwrap();
        assert_eq!(x, vec![1]);
        let sc = split_source(&inst);
        assert_eq!(closest_cut(&sc.graph, &sc.copies, &[sc.map[3]]), vec![sc.map[1]]);
    }

    #[test]
    fn compression_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..150 {
            let n = rng.gen_range(2..=9);
            let k = rng.gen_range(0..=3);
            let inst = random_instance(&mut rng, n, k, 2);
            let c = compress_dpc(&inst, 2f64.powi(-20), &mut rng).unwrap();
            assert!(c.failure_bound <= 2f64.powi(-20));
            assert!(c.matroid.ground_size() <= (k + 1) + 2 * (k + 1) * (k + 1));
            let back = CompressedDpc::import(&c.export()).unwrap();
            assert_eq!(back.export(), c.export());
            assert_eq!(decide_compressed(&back).unwrap().positive, solve_dpc(&inst).solution.is_some());
        }
    }

    #[test]
    fn compressed_import_reports_lines() {
        let err = CompressedDpc::import("compressed-dpc 1 1 0\nsourc a\n").unwrap_err();
        assert!(matches!(err, Error::Format { line: 2, .. }));
    }

    #[test]
    fn kernel_preserves_answers() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let f = Field::mersenne61();
        for _ in 0..120 {
            let n = rng.gen_range(2..=9);
            let k = rng.gen_range(0..=2);
            let inst = random_instance(&mut rng, n, k, 2);
            let ker = kernelize_dpc(f, &inst, &mut rng).unwrap();
            assert!(ker.instance.graph.n() <= ker.vertex_bound);
            let a = solve_dpc(&inst).solution.is_some();
            let b = solve_dpc(&ker.instance).solution.is_some();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn singleton_tuples_reduce_to_k_plus_one() {
        let inst = PairCutInstance::new(star(6), 0, (1..=6).map(|v| vec![v]).collect(), 2).unwrap();
        let rep = representative_tuples_q(Field::mersenne61(), &inst, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(rep.kept.len(), 3);
    }
}
