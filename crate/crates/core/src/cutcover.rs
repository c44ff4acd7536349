//! Cut-covering sets: small vertex sets that contain a minimum cut for every choice of
//! terminals, found by repeatedly bypassing vertices that no layered representative
//! family needs.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactfield::Field;
use crate::graphcut::{
    add_sink_only_copies, add_source_copies, bypass_vertex, bypass_vertex_undirected, bypass_vertices, min_cut_size,
    Digraph, Graph,
};
use crate::matroid::RepresentedMatroid;
use crate::repset::{representative_family, TupleFamily};

#[derive(Debug, Clone)]
pub struct CoverResult<G> {
    /// Retained non-terminal vertices, as ids of the input graph.
    pub z: Vec<usize>,
    /// Input graph with everything outside Z and the terminals bypassed.
    pub reduced_graph: G,
    pub failure_bound: f64,
    /// Number of vertices bypassed.
    pub iterations: usize,
}

fn ids_by_label(d: &Digraph, labels: &[String]) -> Vec<usize> {
    labels.iter().map(|l| d.id(l).expect("terminal labels survive bypassing")).collect()
}

fn layered_cover(layers: &[&RepresentedMatroid], tuples: Vec<(String, Vec<String>)>) -> Result<Vec<String>> {
    let sum = RepresentedMatroid::direct_sum(layers)?;
    let fam = TupleFamily::new(&sum, &tuples, true)?;
    Ok(representative_family(&sum, &fam)?.kept)
}

/// Vertices outside S and T that may be essential for some (A,B) with A in S, B in T,
/// with the failure weight of the two gammoids drawn. Every essential vertex is included
/// unless a representation fails.
pub fn essential_cover_directed<R: Rng + ?Sized>(
    field: Field,
    d: &Digraph,
    sources: &[usize],
    sinks: &[usize],
    rng: &mut R,
) -> Result<(Vec<usize>, f64)> {
    let terminals: BTreeSet<usize> = sources.iter().chain(sinks).copied().collect();
    let candidates: Vec<usize> = (0..d.n()).filter(|v| !terminals.contains(v)).collect();
    if sources.is_empty() || sinks.is_empty() || candidates.is_empty() {
        return Ok((Vec::new(), 0.0));
    }
    let r = min_cut_size(d, sources, sinks);
    if r == 0 {
        return Ok((Vec::new(), 0.0));
    }
    // sources become pure sources and sinks pure sinks
    let mut aug = d.clone();
    let pre: Vec<usize> = sources.iter().map(|&s| aug.add_vertex(format!("{}<", d.label(s)))).collect();
    let post: Vec<usize> = sinks.iter().map(|&t| aug.add_vertex(format!("{}>", d.label(t)))).collect();
    for (&p, &s) in pre.iter().zip(sources) {
        aug.add_arc(p, s);
    }
    for (&q, &t) in post.iter().zip(sinks) {
        aug.add_arc(t, q);
    }
    let all: Vec<usize> = (0..d.n()).collect();
    let (fwd, _) = add_sink_only_copies(&aug, &all, "'");
    let (bwd, _) = add_sink_only_copies(&aug.reversed(), &all, "'");
    let layer0 = RepresentedMatroid::uniform(field, d.labels().to_vec(), r)?;
    let layer1 = RepresentedMatroid::gammoid(field, &fwd, &pre, rng)?;
    let layer2 = RepresentedMatroid::gammoid(field, &bwd, &post, rng)?;
    let weight = layer1.failure_weight() + layer2.failure_weight();
    let tuples: Vec<(String, Vec<String>)> = candidates
        .iter()
        .map(|&v| {
            let l = d.label(v);
            (l.to_string(), vec![format!("{l}(0)"), format!("{l}'(1)"), format!("{l}'(2)")])
        })
        .collect();
    let kept = layered_cover(&[&layer0, &layer1, &layer2], tuples)?;
    Ok((ids_by_label(d, &kept), weight))
}

/// Bypasses, one per round and lowest id first, every non-terminal vertex outside the
/// current essential cover. Z contains a minimum (A,B)-cut of the input for all A of S
/// and B of T, and |Z| <= |S| |T| r with r the (S,T) min-cut size.
pub fn cut_covering_set<R: Rng + ?Sized>(
    field: Field,
    d: &Digraph,
    sources: &[usize],
    sinks: &[usize],
    rng: &mut R,
) -> Result<CoverResult<Digraph>> {
    for &v in sources.iter().chain(sinks) {
        if v >= d.n() {
            return Err(Error::Bounds(format!("terminal {v} of {}", d.n())));
        }
    }
    let s_labels: Vec<String> = sources.iter().map(|&v| d.label(v).to_string()).collect();
    let t_labels: Vec<String> = sinks.iter().map(|&v| d.label(v).to_string()).collect();
    let terminals: BTreeSet<&str> = s_labels.iter().chain(&t_labels).map(|s| s.as_str()).collect();
    let mut g = d.clone();
    let mut weight = 0.0;
    let mut iterations = 0;
    loop {
        let (s, t) = (ids_by_label(&g, &s_labels), ids_by_label(&g, &t_labels));
        let (cover, w) = essential_cover_directed(field, &g, &s, &t, rng)?;
        weight += w;
        let cover: BTreeSet<usize> = cover.into_iter().collect();
        let next = (0..g.n()).find(|&v| !terminals.contains(g.label(v)) && !cover.contains(&v));
        match next {
            Some(v) => {
                g = bypass_vertex(&g, v);
                iterations += 1;
            }
            None => break,
        }
    }
    let z: Vec<usize> = (0..g.n()).filter(|&v| !terminals.contains(g.label(v))).map(|v| d.id(g.label(v)).unwrap()).collect();
    Ok(CoverResult { z, reduced_graph: g, failure_bound: (weight / (field.prime() - 1) as f64).min(1.0), iterations })
}

/// For terminals X: Z contains a minimum (S,T)-cut of G - R for all S, T, R within X.
/// The reduced graph is G with everything outside Z and X bypassed.
pub fn terminal_cut_cover<R: Rng + ?Sized>(field: Field, d: &Digraph, x: &[usize], rng: &mut R) -> Result<CoverResult<Digraph>> {
    let (g, minus) = add_source_copies(d, x);
    let inner = cut_covering_set(field, &g, &minus, x, rng)?;
    let z: Vec<usize> = inner.z.iter().copied().filter(|&v| v < d.n()).collect();
    let keep: BTreeSet<usize> = z.iter().chain(x).copied().collect();
    let drop: Vec<usize> = (0..d.n()).filter(|v| !keep.contains(v)).collect();
    Ok(CoverResult { z, reduced_graph: bypass_vertices(d, &drop), failure_bound: inner.failure_bound, iterations: inner.iterations })
}

/// Vertices outside X that one round of the multiway construction keeps, for `parts`
/// terminal groups; returns ids in `g` and the failure weight.
pub fn multiway_essential_cover<R: Rng + ?Sized>(
    field: Field,
    g: &Graph,
    x: &[usize],
    parts: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, f64)> {
    let xs: BTreeSet<usize> = x.iter().copied().collect();
    let candidates: Vec<usize> = (0..g.n()).filter(|v| !xs.contains(v)).collect();
    if x.is_empty() || candidates.is_empty() || parts == 0 {
        return Ok((Vec::new(), 0.0));
    }
    let all: Vec<usize> = (0..g.n()).collect();
    let (mut dg, _) = add_sink_only_copies(&g.to_digraph(), &all, "'");
    let minus: Vec<usize> = x
        .iter()
        .map(|&v| {
            let m = dg.add_vertex(format!("{}-", g.label(v)));
            dg.add_arc(m, v);
            m
        })
        .collect();
    let layer0 = RepresentedMatroid::uniform(field, g.labels().to_vec(), x.len())?;
    let gam = RepresentedMatroid::gammoid(field, &dg, &minus, rng)?;
    let weight = gam.failure_weight();
    let mut layers = vec![&layer0];
    layers.extend(std::iter::repeat_n(&gam, parts));
    let tuples: Vec<(String, Vec<String>)> = candidates
        .iter()
        .map(|&v| {
            let l = g.label(v);
            let mut t = vec![format!("{l}(0)")];
            t.extend((1..=parts).map(|i| format!("{l}'({i})")));
            (l.to_string(), t)
        })
        .collect();
    let kept = layered_cover(&layers, tuples)?;
    Ok((kept.iter().map(|l| g.id(l).unwrap()).collect(), weight))
}

/// For undirected G and terminals X: Z contains a minimum multiway cut of
/// (G - X_0, X_1, .., X_p) for every partition of X into X_0 and at most `parts` groups.
pub fn multiway_cover<R: Rng + ?Sized>(
    field: Field,
    g: &Graph,
    x: &[usize],
    parts: usize,
    rng: &mut R,
) -> Result<CoverResult<Graph>> {
    let x_labels: BTreeSet<String> = x.iter().map(|&v| g.label(v).to_string()).collect();
    let mut h = g.clone();
    let mut weight = 0.0;
    let mut iterations = 0;
    loop {
        let xs: Vec<usize> = x_labels.iter().map(|l| h.id(l).unwrap()).collect();
        let (cover, w) = multiway_essential_cover(field, &h, &xs, parts, rng)?;
        weight += w;
        let cover: BTreeSet<usize> = cover.into_iter().collect();
        match (0..h.n()).find(|&v| !x_labels.contains(h.label(v)) && !cover.contains(&v)) {
            Some(v) => {
                h = bypass_vertex_undirected(&h, v);
                iterations += 1;
            }
            None => break,
        }
    }
    let z: Vec<usize> = (0..h.n()).filter(|&v| !x_labels.contains(h.label(v))).map(|v| g.id(h.label(v)).unwrap()).collect();
    Ok(CoverResult { z, reduced_graph: h, failure_bound: (weight / (field.prime() - 1) as f64).min(1.0), iterations })
}

/// Directed graph on which every cut-covering set needs |S| |T| vertices: sources and
/// sinks come as twin pairs, and a connector u -> c -> w joins every source pair u with
/// every sink pair w. Returns the digraph, S and T.
pub fn tightness_instance(ns: usize, nt: usize) -> (Digraph, Vec<usize>, Vec<usize>) {
    let mut d = Digraph::new();
    let s: Vec<[usize; 2]> = (0..ns).map(|i| [d.add_vertex(format!("s{i}a")), d.add_vertex(format!("s{i}b"))]).collect();
    let t: Vec<[usize; 2]> = (0..nt).map(|j| [d.add_vertex(format!("t{j}a")), d.add_vertex(format!("t{j}b"))]).collect();
    for (i, su) in s.iter().enumerate() {
        for (j, tw) in t.iter().enumerate() {
            let c = d.add_vertex(format!("c{i}_{j}"));
            for &a in su {
                d.add_arc(a, c);
            }
            for &b in tw {
                d.add_arc(c, b);
            }
        }
    }
    (d, s.into_iter().flatten().collect(), t.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcut::{min_vertex_cut, CutQuery};
    use crate::oracle::{brute_essential, OracleBudget};
    use itertools::Itertools;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f() -> Field {
        Field::mersenne61()
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
    fn all_terminals_means_nothing_to_do() {
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2)]);
        let res = cut_covering_set(f(), &d, &[0, 1], &[2], &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(res.z.is_empty());
        assert_eq!(res.iterations, 0);
        assert_eq!(res.reduced_graph, d);
    }

    #[test]
    fn essential_vertices_are_covered() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let n = rng.gen_range(3..=8);
            let d = random_digraph(&mut rng, n, 0.3);
            let verts: Vec<usize> = (0..n).collect();
            let (ns, nt) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let s: Vec<usize> = verts.choose_multiple_sorted(&mut rng, ns);
            let rest: Vec<usize> = verts.iter().copied().filter(|v| !s.contains(v)).collect();
            let t: Vec<usize> = rest.choose_multiple_sorted(&mut rng, nt);
            let (cover, _) = essential_cover_directed(f(), &d, &s, &t, &mut rng).unwrap();
            let ess = brute_essential(&d, &s, &t, &OracleBudget::default()).unwrap();
            assert!(ess.iter().all(|v| cover.contains(v)), "{ess:?} not in {cover:?}");
        }
    }

    trait Pick {
        fn choose_multiple_sorted(&self, rng: &mut ChaCha8Rng, k: usize) -> Vec<usize>;
    }

    impl Pick for Vec<usize> {
        fn choose_multiple_sorted(&self, rng: &mut ChaCha8Rng, k: usize) -> Vec<usize> {
            let mut v: Vec<usize> = rand::seq::SliceRandom::choose_multiple(self.as_slice(), rng, k).copied().collect();
            v.sort_unstable();
            v
        }
    }

    #[test]
    fn cover_preserves_all_min_cuts() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..40 {
            let n = rng.gen_range(3..=8);
            let d = random_digraph(&mut rng, n, 0.35);
            let verts: Vec<usize> = (0..n).collect();
            let (ns, nt) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
            let s = verts.choose_multiple_sorted(&mut rng, ns);
            let t = verts.choose_multiple_sorted(&mut rng, nt);
            let res = cut_covering_set(f(), &d, &s, &t, &mut rng).unwrap();
            let r = min_cut_size(&d, &s, &t);
            assert!(res.z.len() <= s.len() * t.len() * r);
            let allowed: Vec<usize> = res.z.iter().chain(&s).chain(&t).copied().collect();
            for a in s.iter().copied().powerset().filter(|x| !x.is_empty()) {
                for b in t.iter().copied().powerset().filter(|x| !x.is_empty()) {
                    let full = min_vertex_cut(&d, &CutQuery::new(n, &a, &b)).size();
                    let restricted = min_vertex_cut(&d, &CutQuery::new(n, &a, &b).restrict_to(&allowed)).size();
                    assert_eq!(full, restricted);
                }
            }
        }
    }

    #[test]
    fn tightness() {
        let (d, s, t) = tightness_instance(2, 2);
        let res = cut_covering_set(f(), &d, &s, &t, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(res.z.len(), 4);
    }
}
