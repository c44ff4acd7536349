//! Randomised acceptance checks against the exhaustive oracles, shared by `selftest`
//! and the `acceptance` integration test. Each check prints as one PASS/FAIL line.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::a2sat::{kernelize_a2sat, maximum_matching, reduce_vc_above_lp, solve_a2sat, vc_lp_doubled};
use crate::cutcover::{cut_covering_set, multiway_cover, terminal_cut_cover, tightness_instance};
use crate::error::Result;
use crate::exactfield::{FMatrix, Field};
use crate::gen;
use crate::graphcut::{add_sink_only_copies, reachable_after, Digraph, Graph};
use crate::matroid::{binomial_f64, RepresentedMatroid};
use crate::mwc::{kernelize_dtmwc, kernelize_multicut, kernelize_smwc, MwcInstance, MwcKernel};
use crate::oracle::{
    brute_a2sat, brute_dpc, brute_linked, brute_max_matching, brute_min_cut, brute_min_multiway_cut_size,
    brute_min_vertex_cover, brute_multicut, brute_multiway_cut, brute_vc_lp_doubled, OracleBudget,
};
use crate::paircut::{compress_dpc, decide_compressed, kernelize_dpc, representative_pairs, solve_dpc, PairCutInstance};
use crate::repset::{representative_family, verify_representative, TupleFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// Roughly a tenth of the full instance counts.
    Quick,
    Full,
}

impl Scale {
    fn count(self, full: usize) -> usize {
        match self {
            Scale::Full => full,
            Scale::Quick => (full / 10).max(5),
        }
    }
}

pub const TITLES: [&str; 11] = [
    "gammoid independence matches path packing",
    "closest sets and reachability via sink-only copies",
    "representative families are representative and small",
    "pair-cut branching matches brute force",
    "representative pairs preserve reachable pairs for closest sets",
    "cut-covering sets keep every (A,B) min cut",
    "terminal and multiway covers keep every cut",
    "kernels preserve answers",
    "compression round trip",
    "vertex cover above LP",
    "CLI determinism",
];

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {verdict} {}: {}", self.id, TITLES[self.id - 1], self.detail)
    }
}

/// Mismatches tolerated for a summed failure bound: none unless the bound reaches 1.
fn tolerated(bound_sum: f64) -> usize {
    bound_sum.floor() as usize
}

fn rng_for(seed: u64, id: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add((id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn mask(n: usize, ids: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut m = vec![false; n];
    for v in ids {
        m[v] = true;
    }
    m
}

fn separates(d: &Digraph, sources: &[usize], sinks: &[usize], cut: &[usize]) -> bool {
    let r = reachable_after(d, sources, cut);
    sinks.iter().all(|&t| !r[t])
}

/// X is the unique minimum (S,X)-cut among subsets of `pool`.
fn is_closest(d: &Digraph, sources: &[usize], x: &[usize], pool: &[usize]) -> bool {
    (0..=x.len()).all(|size| pool.iter().copied().combinations(size).all(|c| c == x || !separates(d, sources, x, &c)))
}

/// The minimum (S,X)-cut with the fewest vertices reachable from S.
fn closest_cut_brute(d: &Digraph, sources: &[usize], x: &[usize]) -> Vec<usize> {
    for size in 0..=d.n() {
        let best = (0..d.n())
            .combinations(size)
            .filter(|c| separates(d, sources, x, c))
            .min_by_key(|c| reachable_after(d, sources, c).iter().filter(|&&r| r).count());
        if let Some(c) = best {
            return c;
        }
    }
    unreachable!("deleting every vertex separates")
}

pub fn run_criterion(id: usize, scale: Scale, seed: u64) -> Result<CriterionReport> {
    let mut rng = rng_for(seed, id);
    let field = Field::mersenne61();
    let (passed, detail) = match id {
        1 => gammoid_fidelity(field, scale, &mut rng)?,
        2 => closest_sets(field, scale, &mut rng)?,
        3 => representative_families(field, scale, &mut rng)?,
        4 => pair_cut_solver(scale, &mut rng)?,
        5 => representative_pairs_contract(field, scale, &mut rng)?,
        6 => cut_covers(field, scale, &mut rng)?,
        7 => terminal_and_multiway_covers(field, scale, &mut rng)?,
        8 => kernels(field, scale, &mut rng)?,
        9 => compression(scale, &mut rng)?,
        10 => vertex_cover_above_lp(scale, &mut rng)?,
        11 => cli_determinism(seed)?,
        _ => return Err(crate::Error::Config(format!("no criterion {id}"))),
    };
    Ok(CriterionReport { id, passed, detail })
}

/// Every criterion in order; errors become failing reports.
pub fn run_all(scale: Scale, seed: u64) -> Vec<CriterionReport> {
    (1..=TITLES.len())
        .map(|id| run_criterion(id, scale, seed).unwrap_or_else(|e| CriterionReport { id, passed: false, detail: format!("error: {e}") }))
        .collect()
}

type Outcome = Result<(bool, String)>;

fn gammoid_fidelity(field: Field, scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(200);
    let (mut mismatches, mut checks, mut bound_sum, mut worst) = (0usize, 0usize, 0.0, 0.0f64);
    for _ in 0..count {
        let n = rng.gen_range(2..=8);
        let d = gen::random_digraph(rng, n, 0.3);
        let s_len = rng.gen_range(1..=3.min(n));
        let s = gen::random_subset(rng, n, s_len);
        let m = RepresentedMatroid::gammoid(field, &d, &s, rng)?;
        bound_sum += m.failure_bound();
        worst = worst.max(m.failure_bound());
        for size in 0..=4.min(n) {
            for t in (0..n).combinations(size) {
                checks += 1;
                if m.is_independent_ids(&t) != brute_linked(&d, &s, &t)? {
                    mismatches += 1;
                }
            }
        }
    }
    let passed = mismatches <= tolerated(bound_sum) && worst < 1e-6;
    Ok((passed, format!("{count} digraphs, {checks} subsets, {mismatches} mismatches, max budget {worst:.1e} (< 1e-6)")))
}

fn closest_sets(field: Field, scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(200);
    let (mut bad1, mut bad2, mut checks, mut bound_sum) = (0usize, 0usize, 0usize, 0.0);
    for _ in 0..count {
        let n = rng.gen_range(3..=8);
        let d = gen::random_digraph(rng, n, 0.3);
        let s_len = rng.gen_range(1..=2.min(n));
        let s = gen::random_subset(rng, n, s_len);
        let x_len = rng.gen_range(1..=3.min(n));
        let x = gen::random_subset(rng, n, x_len);
        let (dp, copies) = add_sink_only_copies(&d, &x, "'");
        let m = RepresentedMatroid::gammoid(field, &dp, &s, rng)?;
        bound_sum += m.failure_bound();
        // equivalence 1: X closest iff X + x' independent for every x outside S
        let all: Vec<usize> = (0..n).collect();
        let closest = is_closest(&d, &s, &x, &all);
        let by_rank = x.iter().zip(&copies).filter(|(v, _)| !s.contains(v)).all(|(_, &c)| {
            let mut set = x.clone();
            set.push(c);
            m.is_independent_ids(&set)
        });
        checks += 1;
        if closest != by_rank {
            bad1 += 1;
        }
        // equivalence 2: v outside X is reachable in D - C(X) iff X_B + v independent
        let mut xb: Vec<usize> = Vec::new();
        for &v in &x {
            xb.push(v);
            if !m.is_independent_ids(&xb) {
                xb.pop();
            }
        }
        let reach = reachable_after(&d, &s, &closest_cut_brute(&d, &s, &x));
        for v in (0..n).filter(|v| !x.contains(v)) {
            let mut set = xb.clone();
            set.push(v);
            checks += 1;
            if reach[v] != m.is_independent_ids(&set) {
                bad2 += 1;
            }
        }
    }
    let passed = bad1 + bad2 <= tolerated(bound_sum);
    Ok((passed, format!("{count} triples, {checks} checks, mismatches: closest {bad1}, reachable {bad2}")))
}

fn random_matroid(field: Field, rng: &mut ChaCha8Rng, rows: usize, n: usize, tag: &str) -> Result<RepresentedMatroid> {
    let entries: Vec<Vec<i64>> =
        (0..rows).map(|_| (0..n).map(|_| if rng.gen_bool(0.4) { 0 } else { rng.gen_range(1..=3) }).collect()).collect();
    let labels = (0..n).map(|i| format!("{tag}{i}")).collect();
    RepresentedMatroid::new(FMatrix::from_rows(field, &entries)?, labels)
}

fn representative_families(field: Field, scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(200);
    let (mut unsound, mut oversize, mut largest) = (0usize, 0usize, 0usize);
    for i in 0..count {
        let s = rng.gen_range(1..=3);
        let layered = i % 2 == 1;
        let (m, tuples) = if layered {
            let blocks: Vec<RepresentedMatroid> = (0..s)
                .map(|b| {
                    let size = rng.gen_range(2..=4);
                    let rows = rng.gen_range(1..=2);
                    random_matroid(field, rng, rows, size, &format!("b{b}_"))
                })
                .collect::<Result<_>>()?;
            let refs: Vec<&RepresentedMatroid> = blocks.iter().collect();
            let sum = RepresentedMatroid::direct_sum(&refs)?;
            let ranges: Vec<_> = sum.blocks().unwrap().iter().map(|b| b.cols.clone()).collect();
            let tuples: Vec<(String, Vec<usize>)> = (0..rng.gen_range(1..=20))
                .map(|j| (format!("f{j}"), ranges.iter().map(|r| rng.gen_range(r.clone())).collect()))
                .collect();
            (sum, tuples)
        } else {
            let n = rng.gen_range(s.max(3)..=12);
            let rows = rng.gen_range(s..=s + 4);
            let m = random_matroid(field, rng, rows, n, "e")?;
            let tuples: Vec<(String, Vec<usize>)> =
                (0..rng.gen_range(1..=20)).map(|j| (format!("f{j}"), gen::random_subset(rng, n, s))).collect();
            (m, tuples)
        };
        let fam = TupleFamily::from_ids(&m, tuples, layered)?;
        if fam.is_empty() {
            continue;
        }
        let rep = representative_family(&m, &fam)?;
        if !verify_representative(&m, &fam, &rep)? {
            unsound += 1;
        }
        let cap = if layered {
            m.blocks().unwrap().iter().map(|b| m.rank_of(&b.cols.clone().collect::<Vec<_>>())).product::<usize>()
        } else {
            binomial_f64(m.rank(), s) as usize
        };
        largest = largest.max(rep.kept.len());
        if rep.kept.len() > cap {
            oversize += 1;
        }
    }
    // representative pairs of a pair-cut instance: at most (k+1)^2
    let mut pair_oversize = 0;
    for _ in 0..scale.count(40) {
        let k = rng.gen_range(0..=3);
        let mut inst = gen::random_dpc(rng, 10, k);
        inst.k = k;
        let n = inst.graph.n();
        inst.tuples.extend((0..12).map(|_| vec![rng.gen_range(1..n), rng.gen_range(1..n)]));
        if representative_pairs(field, &inst, rng)?.kept.len() > (k + 1) * (k + 1) {
            pair_oversize += 1;
        }
    }
    let passed = unsound == 0 && oversize == 0 && pair_oversize == 0;
    Ok((
        passed,
        format!("{count} families: {unsound} not representative, {oversize} over the size bound (largest kept {largest}); pair families over (k+1)^2: {pair_oversize}"),
    ))
}

fn pair_cut_solver(scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(500);
    let budget = OracleBudget::default();
    let (mut wrong, mut over, mut max_leaves) = (0usize, 0usize, 0usize);
    for _ in 0..count {
        let inst = gen::random_dpc(rng, 10, 3);
        let out = solve_dpc(&inst);
        let brute = brute_dpc(&inst.graph, inst.source, &inst.tuples, inst.k, &budget)?;
        let witness_ok = out.solution.as_ref().is_none_or(|x| inst.is_solution(x));
        if out.solution.is_some() != brute.is_some() || !witness_ok {
            wrong += 1;
        }
        if out.leaves > 1 << inst.k {
            over += 1;
        }
        max_leaves = max_leaves.max(out.leaves);
    }
    Ok((wrong == 0 && over == 0, format!("{count} instances, {wrong} disagreements, {over} runs over 2^k leaves (max {max_leaves})")))
}

fn representative_pairs_contract(field: Field, scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(200);
    let (mut bad, mut checks, mut bound_sum) = (0usize, 0usize, 0.0);
    for _ in 0..count {
        let k = rng.gen_range(0..=2);
        let mut inst = gen::random_dpc(rng, 9, k);
        inst.k = k;
        let n = inst.graph.n();
        inst.tuples.extend((0..rng.gen_range(0..=8)).map(|_| vec![rng.gen_range(1..n), rng.gen_range(1..n)]));
        let rep = representative_pairs(field, &inst, rng)?;
        bound_sum += rep.failure_bound;
        let pool: Vec<usize> = (0..n).filter(|&v| v != inst.source).collect();
        let all: Vec<usize> = (0..inst.tuples.len()).collect();
        let has_pair = |x: &[usize], which: &[usize]| {
            let reach = reachable_after(&inst.graph, &[inst.source], x);
            which.iter().any(|&i| inst.tuples[i].iter().all(|&v| reach[v]))
        };
        for size in 0..=k {
            for x in pool.iter().copied().combinations(size) {
                if !is_closest(&inst.graph, &[inst.source], &x, &pool) {
                    continue;
                }
                checks += 1;
                if has_pair(&x, &all) != has_pair(&x, &rep.kept) {
                    bad += 1;
                }
            }
        }
    }
    Ok((bad <= tolerated(bound_sum), format!("{count} instances, {checks} closest sets, {bad} mismatches")))
}

fn cut_covers(field: Field, scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(200);
    let budget = OracleBudget::default();
    let (mut bad, mut oversize, mut checks, mut bound_sum) = (0usize, 0usize, 0usize, 0.0);
    for _ in 0..count {
        let n = rng.gen_range(4..=9);
        let d = gen::random_digraph(rng, n, 0.3);
        let ns = rng.gen_range(1..=3.min(n / 2));
        let nt = rng.gen_range(1..=3.min(n - ns - 1));
        let picked = gen::random_subset(rng, n, ns + nt);
        let (s, t) = picked.split_at(ns);
        let cover = cut_covering_set(field, &d, s, t, rng)?;
        bound_sum += cover.failure_bound;
        let all = vec![true; n];
        let allowed = mask(n, cover.z.iter().chain(s).chain(t).copied());
        let r = brute_min_cut(&d, s, t, &all, &budget)?.unwrap();
        if cover.z.len() > s.len() * t.len() * r {
            oversize += 1;
        }
        for a in s.iter().copied().powerset() {
            for b in t.iter().copied().powerset() {
                checks += 1;
                if brute_min_cut(&d, &a, &b, &all, &budget)? != brute_min_cut(&d, &a, &b, &allowed, &budget)? {
                    bad += 1;
                }
            }
        }
    }
    let mut tight = Vec::new();
    for (ns, nt) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)] {
        let (d, s, t) = tightness_instance(ns, nt);
        let z = cut_covering_set(field, &d, &s, &t, rng)?.z.len();
        tight.push((ns, nt, z));
    }
    let tight_ok = tight.iter().all(|&(a, b, z)| z == a * b);
    let tight_text = tight.iter().map(|(a, b, z)| format!("{a}x{b}->{z}")).join(" ");
    Ok((
        bad <= tolerated(bound_sum) && oversize == 0 && tight_ok,
        format!("{count} digraphs, {checks} (A,B) pairs, {bad} mismatches, {oversize} over |S||T|r; tightness |Z| {tight_text}"),
    ))
}

fn terminal_and_multiway_covers(field: Field, scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let budget = OracleBudget::default();
    let count = scale.count(100);
    let (mut bad_t, mut over_t, mut checks_t, mut bound_sum) = (0usize, 0usize, 0usize, 0.0);
    let mut worst_t = 0.0f64;
    for _ in 0..count {
        let n = rng.gen_range(3..=8);
        let d = gen::random_digraph(rng, n, 0.3);
        let x_len = rng.gen_range(1..=3);
        let x = gen::random_subset(rng, n, x_len);
        let cover = terminal_cut_cover(field, &d, &x, rng)?;
        bound_sum += cover.failure_bound;
        let cap = x.len().pow(3);
        worst_t = worst_t.max(cover.z.len() as f64 / cap as f64);
        if cover.z.len() > cap {
            over_t += 1;
        }
        let zx: BTreeSet<usize> = cover.z.iter().chain(&x).copied().collect();
        for r in x.iter().copied().powerset() {
            let keep: Vec<usize> = (0..n).filter(|v| !r.contains(v)).collect();
            let pos = |v: usize| keep.iter().position(|&u| u == v);
            let h = d.induced(&keep);
            let allowed = mask(keep.len(), zx.iter().filter_map(|&v| pos(v)));
            let live: Vec<usize> = x.iter().filter_map(|&v| pos(v)).collect();
            let all = vec![true; keep.len()];
            for a in live.iter().copied().powerset() {
                for b in live.iter().copied().powerset() {
                    checks_t += 1;
                    if brute_min_cut(&h, &a, &b, &all, &budget)? != brute_min_cut(&h, &a, &b, &allowed, &budget)? {
                        bad_t += 1;
                    }
                }
            }
        }
    }
    let (mut bad_m, mut over_m, mut checks_m) = (0usize, 0usize, 0usize);
    let mut worst_m = 0.0f64;
    for _ in 0..count {
        let n = rng.gen_range(3..=8);
        let g = gen::random_graph(rng, n, 0.35);
        let x_len = rng.gen_range(1..=4.min(n));
        let x = gen::random_subset(rng, n, x_len);
        let parts = rng.gen_range(1..=3);
        let cover = multiway_cover(field, &g, &x, parts, rng)?;
        bound_sum += cover.failure_bound;
        let cap = x.len().pow(parts as u32 + 1);
        worst_m = worst_m.max(cover.z.len() as f64 / cap as f64);
        if cover.z.len() > cap {
            over_m += 1;
        }
        let zx: BTreeSet<usize> = cover.z.iter().chain(&x).copied().collect();
        // group 0 is deleted, groups 1..=parts are the parts
        for assign in std::iter::repeat_n(0..=parts, x.len()).multi_cartesian_product() {
            let keep: Vec<usize> = (0..n).filter(|v| x.iter().position(|u| u == v).is_none_or(|i| assign[i] != 0)).collect();
            let pos = |v: usize| keep.iter().position(|&u| u == v);
            let h = g.induced(&keep);
            let groups: Vec<Vec<usize>> =
                (1..=parts).map(|p| x.iter().zip(&assign).filter(|(_, &a)| a == p).map(|(&v, _)| pos(v).unwrap()).collect()).collect();
            let allowed = mask(keep.len(), zx.iter().filter_map(|&v| pos(v)));
            let all = vec![true; keep.len()];
            checks_m += 1;
            if brute_min_multiway_cut_size(&h, &groups, &all, &budget)? != brute_min_multiway_cut_size(&h, &groups, &allowed, &budget)? {
                bad_m += 1;
            }
        }
    }
    let passed = bad_t + bad_m <= tolerated(bound_sum) && over_t == 0 && over_m == 0;
    Ok((
        passed,
        format!(
            "terminal: {count} digraphs, {checks_t} (S,T,R) checks, {bad_t} mismatches, |Z|/|X|^3 <= {worst_t:.2}; multiway: {count} graphs, {checks_m} partitions, {bad_m} mismatches, |Z|/|X|^(s+1) <= {worst_m:.2}; {} over bound",
            over_t + over_m
        ),
    ))
}

/// Tally for one kernel: answers that differ in each direction, bound sums and the
/// largest size relative to the bound.
#[derive(Default)]
struct KernelTally {
    instances: usize,
    false_pos: usize,
    false_neg: usize,
    bound_sum: f64,
    over_bound: usize,
    max_size: usize,
    max_constant: f64,
    /// Positive-looking kernels with at least two terminals left.
    nontrivial: usize,
    shrunk: usize,
}

impl KernelTally {
    fn record(&mut self, original: bool, kernel: bool, size: usize, bound: usize, k: usize, exponent: u32) {
        self.instances += 1;
        match (original, kernel) {
            (true, false) => self.false_neg += 1,
            (false, true) => self.false_pos += 1,
            _ => {}
        }
        if size > bound {
            self.over_bound += 1;
        }
        self.max_size = self.max_size.max(size);
        self.max_constant = self.max_constant.max(size as f64 / (k.max(1) as f64).powi(exponent as i32));
    }

    fn note_reduction(&mut self, ker: &MwcKernel, input_size: usize) {
        if !ker.negative && ker.instance.terminals.len() >= 2 {
            self.nontrivial += 1;
            if ker.instance.graph.n() < input_size {
                self.shrunk += 1;
            }
        }
    }

    fn ok(&self, false_pos_allowed: bool) -> bool {
        let wrong_direction = if false_pos_allowed { 0 } else { self.false_pos };
        wrong_direction == 0 && self.false_pos + self.false_neg <= tolerated(self.bound_sum) && self.over_bound == 0
    }

    fn describe(&self, name: &str, growth: &str) -> String {
        format!(
            "{name}: {} instances, {} false negatives, {} false positives, budget sum {:.1e}, max size {} (size/{growth} <= {:.1}), {} over bound",
            self.instances, self.false_neg, self.false_pos, self.bound_sum, self.max_size, self.max_constant, self.over_bound
        )
    }
}

fn mwc_answer(inst: &MwcInstance, budget: &OracleBudget) -> Result<bool> {
    let parts: Vec<Vec<usize>> = inst.terminals.iter().map(|&t| vec![t]).collect();
    Ok(brute_multiway_cut(&inst.graph, &parts, inst.k, inst.deletable_terminals, budget)?.is_some())
}

fn kernels(field: Field, scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(300);
    let budget = OracleBudget { max_vertices: 40, max_k: 10, max_candidates: 1 << 24 };
    let mut lines = Vec::new();
    let mut passed = true;

    let mut t = KernelTally::default();
    for _ in 0..count {
        let inst = gen::random_dpc(rng, 10, 3);
        let ker = kernelize_dpc(field, &inst, rng)?;
        t.bound_sum += ker.false_positive_bound + ker.false_negative_bound;
        let a = brute_dpc(&inst.graph, inst.source, &inst.tuples, inst.k, &budget)?.is_some();
        let b = solve_dpc(&ker.instance).solution.is_some();
        t.record(a, b, ker.instance.graph.n(), ker.vertex_bound, inst.k, 4);
    }
    passed &= t.ok(true);
    lines.push(t.describe("pair cut", "k^4"));

    let mut t = KernelTally::default();
    for _ in 0..count {
        let inst = gen::random_mwc(rng, 10, 5, 3, true);
        let ker = kernelize_dtmwc(field, &inst, rng)?;
        t.bound_sum += ker.failure_bound;
        let b = !ker.negative && mwc_answer(&ker.instance, &budget)?;
        let size = if ker.negative { 0 } else { ker.instance.graph.n() };
        t.note_reduction(&ker, inst.graph.n());
        t.record(mwc_answer(&inst, &budget)?, b, size, ker.vertex_bound, inst.k, 3);
    }
    passed &= t.ok(false) && t.nontrivial > 0;
    lines.push(format!("{}, {} kept >= 2 terminals, {} shrunk", t.describe("deletable-terminal multiway cut", "k^3"), t.nontrivial, t.shrunk));

    let mut t = KernelTally::default();
    for _ in 0..count {
        let inst = if t.instances % 2 == 0 { gen::planted_mwc(rng, 12, 4, 5, 0.6) } else { gen::random_mwc(rng, 10, 3, 3, false) };
        let s = inst.terminals.len() as u32;
        let ker = kernelize_smwc(field, &inst, rng)?;
        t.bound_sum += ker.failure_bound;
        let b = !ker.negative && mwc_answer(&ker.instance, &budget)?;
        let size = if ker.negative { 0 } else { ker.instance.graph.n() };
        t.note_reduction(&ker, inst.graph.n());
        t.record(mwc_answer(&inst, &budget)?, b, size, ker.vertex_bound, inst.k, s + 1);
    }
    passed &= t.ok(false) && t.nontrivial > 0;
    lines.push(format!("{}, {} kept >= 2 terminals, {} shrunk", t.describe("multiway cut with s terminals", "k^(s+1)"), t.nontrivial, t.shrunk));

    let mut t = KernelTally::default();
    for _ in 0..count {
        let inst = gen::random_multicut(rng, 10, 3, 3);
        let ker = kernelize_multicut(field, &inst, rng)?;
        t.bound_sum += ker.failure_bound;
        let a = brute_multicut(&inst.graph, &inst.pairs, inst.k, &budget)?.is_some();
        let b = brute_multicut(&ker.instance.graph, &ker.instance.pairs, ker.instance.k, &budget)?.is_some();
        t.record(a, b, ker.instance.graph.n(), ker.vertex_bound, inst.k, ker.parts as u32 + 1);
    }
    passed &= t.ok(false);
    lines.push(t.describe("multicut", "k^(parts+1)"));

    let mut t = KernelTally::default();
    for _ in 0..count {
        let f = gen::random_cnf2(rng, 8, 14);
        let k = rng.gen_range(0..=3);
        let ker = kernelize_a2sat(field, &f, k, rng)?;
        t.bound_sum += ker.false_positive_bound + ker.false_negative_bound;
        let a = brute_a2sat(&f, k, &budget)?.is_some();
        let b = match ker.decided {
            Some(b) => b,
            None => solve_a2sat(&ker.formula, ker.k)?.is_some(),
        };
        t.record(a, b, ker.formula.num_vars, ker.variable_bound.max(1), k, 4);
    }
    passed &= t.ok(true);
    lines.push(t.describe("almost 2-SAT", "k^4"));

    Ok((passed, lines.join("; ")))
}

fn compression(scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(500);
    let eps = 2f64.powi(-20);
    let (mut false_pos, mut false_neg, mut bound_sum, mut max_bits) = (0usize, 0usize, 0.0, 0u64);
    for _ in 0..count {
        let inst: PairCutInstance = gen::random_dpc(rng, 10, 3);
        let c = compress_dpc(&inst, eps, rng)?;
        bound_sum += c.failure_bound;
        max_bits = max_bits.max(c.matrix_bits());
        let back = crate::paircut::CompressedDpc::import(&c.export())?;
        let got = decide_compressed(&back)?.positive;
        match (solve_dpc(&inst).solution.is_some(), got) {
            (true, false) => false_neg += 1,
            (false, true) => false_pos += 1,
            _ => {}
        }
    }
    Ok((
        false_neg == 0 && false_pos <= tolerated(bound_sum),
        format!("{count} instances at epsilon 2^-20, {false_pos} false positives, {false_neg} false negatives, largest matrix {max_bits} bits"),
    ))
}

fn vertex_cover_above_lp(scale: Scale, rng: &mut ChaCha8Rng) -> Outcome {
    let count = scale.count(200);
    let (mut over, mut disagree, mut lp_bad, mut match_bad, mut dummies) = (0usize, 0usize, 0usize, 0usize, 0usize);
    for i in 0..count {
        // every eighth graph is disjoint triangles, whose LP exceeds the matching by 1/2
        // each, so the negative (dummy) branch gets exercised
        let (g, k) = if i % 8 == 0 {
            let t = rng.gen_range(2..=4);
            let edges: Vec<(usize, usize)> = (0..t).flat_map(|j| [(3 * j, 3 * j + 1), (3 * j + 1, 3 * j + 2), (3 * j, 3 * j + 2)]).collect();
            (Graph::from_edges(3 * t, &edges), rng.gen_range(0..=1))
        } else {
            let n = rng.gen_range(1..=12);
            let p = rng.gen_range(0.15..0.6);
            (gen::random_graph(rng, n, p), rng.gen_range(0..=3))
        };
        let lp = vc_lp_doubled(&g);
        if lp != brute_vc_lp_doubled(&g)? {
            lp_bad += 1;
        }
        if maximum_matching(&g).len() != brute_max_matching(&g)? {
            match_bad += 1;
        }
        let out = reduce_vc_above_lp(&g, k);
        if out.dummy {
            dummies += 1;
        } else if out.k > 3 * k + 1 {
            over += 1;
        }
        let original = 2 * brute_min_vertex_cover(&g)? <= lp + 2 * k;
        let reduced = brute_min_vertex_cover(&out.graph)? <= out.matching + out.k;
        if original != reduced {
            disagree += 1;
        }
    }
    Ok((
        over + disagree + lp_bad + match_bad == 0,
        format!(
            "{count} graphs ({dummies} dummy), {over} with k' > 3k+1, {disagree} answer disagreements, {lp_bad} LP mismatches, {match_bad} matching mismatches"
        ),
    ))
}

fn cli_determinism(seed: u64) -> Outcome {
    let dir = std::env::temp_dir().join(format!("matkern-determinism-{}-{seed}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let fixtures = crate::cli::write_fixtures(&dir)?;
    let (mut differing, mut failing) = (Vec::new(), Vec::new());
    let commands = crate::cli::determinism_commands(&fixtures, seed);
    for args in &commands {
        let run = || -> (i32, Vec<u8>) {
            let mut out = Vec::new();
            let mut err = Vec::new();
            let code = crate::cli::run(args.iter().map(String::as_str), &mut out, &mut err);
            out.extend(err);
            (code, out)
        };
        let (first, second) = (run(), run());
        if first.0 != 0 {
            failing.push(args[..2].join(" "));
        }
        if first != second {
            differing.push(args[..2].join(" "));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok((
        differing.is_empty() && failing.is_empty(),
        format!("{} commands run twice in-process, differing: {differing:?}, nonzero exit: {failing:?}", commands.len()),
    ))
}
