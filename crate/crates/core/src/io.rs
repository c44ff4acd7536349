//! Text formats: graphs (`digraph n m` / `graph n m` then `u v` lines), vertex sets
//! (whitespace-separated ids), tuples (one tuple of ids per line) and 2-CNF formulas
//! (`p cnf2 n m`, then clauses of one or two signed literals ending in 0). Lines starting
//! with `#` are comments. Vertex labels are the ids.

use std::fmt::Write as _;

use crate::a2sat::{Cnf2, Lit};
use crate::error::{Error, Result};
use crate::graphcut::{Digraph, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyGraph {
    Directed(Digraph),
    Undirected(Graph),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn fmt_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

fn parse_num(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| fmt_err(line, format!("expected a non-negative integer, found `{s}`")))
}

pub fn parse_graph(text: &str) -> Result<AnyGraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| fmt_err(1, "missing `digraph n m` or `graph n m` header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 || (h[0] != "digraph" && h[0] != "graph") {
        return Err(fmt_err(hl, "expected `digraph n m` or `graph n m`"));
    }
    let (n, m) = (parse_num(hl, h[1])?, parse_num(hl, h[2])?);
    let mut edges = Vec::with_capacity(m);
    let mut last = hl;
    for (ln, l) in lines {
        let w: Vec<&str> = l.split_whitespace().collect();
        if w.len() != 2 {
            return Err(fmt_err(ln, "expected `u v`"));
        }
        let (u, v) = (parse_num(ln, w[0])?, parse_num(ln, w[1])?);
        if u >= n || v >= n {
            return Err(fmt_err(ln, format!("vertex out of range 0..{n}")));
        }
        edges.push((u, v));
        last = ln;
    }
    if edges.len() != m {
        return Err(fmt_err(last, format!("header announces {m} edges, found {}", edges.len())));
    }
    Ok(if h[0] == "digraph" { AnyGraph::Directed(Digraph::from_arcs(n, &edges)) } else { AnyGraph::Undirected(Graph::from_edges(n, &edges)) })
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    match parse_graph(text)? {
        AnyGraph::Directed(d) => Ok(d),
        AnyGraph::Undirected(_) => Err(fmt_err(1, "expected a `digraph` file")),
    }
}

pub fn parse_undirected(text: &str) -> Result<Graph> {
    match parse_graph(text)? {
        AnyGraph::Undirected(g) => Ok(g),
        AnyGraph::Directed(_) => Err(fmt_err(1, "expected a `graph` file")),
    }
}

pub fn write_digraph(d: &Digraph) -> String {
    let mut s = format!("digraph {} {}\n", d.n(), d.arc_count());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("graph {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn parse_vertex_set(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        for w in l.split_whitespace() {
            let v = parse_num(ln, w)?;
            if v >= n {
                return Err(fmt_err(ln, format!("vertex {v} out of range 0..{n}")));
            }
            out.push(v);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn parse_tuples(text: &str, n: usize) -> Result<Vec<Vec<usize>>> {
    content_lines(text)
        .map(|(ln, l)| {
            l.split_whitespace()
                .map(|w| {
                    let v = parse_num(ln, w)?;
                    if v >= n {
                        return Err(fmt_err(ln, format!("vertex {v} out of range 0..{n}")));
                    }
                    Ok(v)
                })
                .collect()
        })
        .collect()
}

pub fn parse_pairs(text: &str, n: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, t) in parse_tuples(text, n)?.into_iter().enumerate() {
        match t.as_slice() {
            [a, b] => out.push((*a, *b)),
            _ => {
                let ln = content_lines(text).nth(i).map_or(1, |(ln, _)| ln);
                return Err(fmt_err(ln, "expected `u v`"));
            }
        }
    }
    Ok(out)
}

pub fn write_ids<'a>(ids: impl IntoIterator<Item = &'a usize>) -> String {
    ids.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_cnf2(text: &str) -> Result<Cnf2> {
    let mut lines = content_lines(text).filter(|(_, l)| !l.starts_with('c'));
    let (hl, header) = lines.next().ok_or_else(|| fmt_err(1, "missing `p cnf2 n m` header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "p" || h[1] != "cnf2" {
        return Err(fmt_err(hl, "expected `p cnf2 n m`"));
    }
    let (n, m) = (parse_num(hl, h[2])?, parse_num(hl, h[3])?);
    let mut clauses = Vec::with_capacity(m);
    let mut last = hl;
    for (ln, l) in lines {
        let nums: Vec<i64> = l
            .split_whitespace()
            .map(|w| w.parse::<i64>().map_err(|_| fmt_err(ln, format!("bad literal `{w}`"))))
            .collect::<Result<_>>()?;
        let Some((&0, lits)) = nums.split_last() else {
            return Err(fmt_err(ln, "clause must end with 0"));
        };
        if lits.is_empty() || lits.len() > 2 || lits.contains(&0) {
            return Err(fmt_err(ln, "clause needs one or two nonzero literals"));
        }
        let mut clause = Vec::with_capacity(2);
        for &x in lits {
            let var = x.unsigned_abs() as usize - 1;
            if var >= n {
                return Err(fmt_err(ln, format!("variable {} out of range 1..={n}", x.abs())));
            }
            clause.push(Lit { var, neg: x < 0 });
        }
        clauses.push(clause);
        last = ln;
    }
    if clauses.len() != m {
        return Err(fmt_err(last, format!("header announces {m} clauses, found {}", clauses.len())));
    }
    Cnf2::new(n, clauses)
}

pub fn write_cnf2(f: &Cnf2) -> String {
    let mut s = format!("p cnf2 {} {}\n", f.num_vars, f.clauses.len());
    for c in &f.clauses {
        let lits: Vec<String> = c.iter().map(|l| l.to_dimacs().to_string()).collect();
        let _ = writeln!(s, "{} 0", lits.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "# a chain\ndigraph 3 2\n0 1\n1 2 # tail\n";
        let d = parse_digraph(text).unwrap();
        assert_eq!(write_digraph(&d), "digraph 3 2\n0 1\n1 2\n");
        let g = parse_undirected("graph 3 1\n2 0\n").unwrap();
        assert_eq!(write_graph(&g), "graph 3 1\n0 2\n");
    }

    #[test]
    fn graph_errors_name_lines() {
        let e = parse_graph("digraph 2 1\n0 5\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 2, .. }), "{e}");
        let e = parse_graph("\n\ndigraf 2 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 3, .. }));
        let e = parse_graph("graph 2 2\n0 1\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 2, .. }));
    }

    #[test]
    fn cnf_round_trip() {
        let f = parse_cnf2("c comment\np cnf2 3 3\n1 -2 0\n-3 0\n2 3 0\n").unwrap();
        assert_eq!(f.clauses.len(), 3);
        assert_eq!(write_cnf2(&f), "p cnf2 3 3\n1 -2 0\n-3 0\n2 3 0\n");
        let e = parse_cnf2("p cnf2 2 1\n1 2 3 0\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 2, .. }));
        let e = parse_cnf2("p cnf2 2 1\n1 4 0\n").unwrap_err();
        assert!(matches!(e, Error::Format { line: 2, .. }));
    }

    #[test]
    fn sets_and_pairs() {
        assert_eq!(parse_vertex_set("3 1\n1\n", 4).unwrap(), vec![1, 3]);
        assert_eq!(parse_pairs("0 1\n2 3\n", 4).unwrap(), vec![(0, 1), (2, 3)]);
        assert!(matches!(parse_pairs("0 1\n2\n", 4).unwrap_err(), Error::Format { line: 2, .. }));
    }
}
