//! Python bindings for matkern. Graphs are built from vertex counts and edge lists,
//! vertices are 0-based ids, and every randomized call takes a `seed`.

// pyo3 0.22 macro expansion trips this lint on every PyResult method
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use matkern::a2sat::{self, Cnf2, Lit};
use matkern::acceptance::{run_all, Scale};
use matkern::cutcover;
use matkern::exactfield::{Field, MERSENNE_61};
use matkern::graphcut::{self, Digraph, Graph};
use matkern::matroid::RepresentedMatroid;
use matkern::mwc::{self, MulticutInstance, MwcInstance, MwcKernel};
use matkern::paircut::{self, CompressedDpc, PairCutInstance};
use matkern::repset::{representative_family, TupleFamily};
use matkern::{io, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Budget(_) | Error::Degenerate(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn field(prime: Option<u64>) -> PyResult<Field> {
    Field::new(prime.unwrap_or(MERSENNE_61)).map_err(py_err)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_ids(n: usize, ids: &[usize]) -> PyResult<()> {
    match ids.iter().find(|&&v| v >= n) {
        Some(v) => Err(PyValueError::new_err(format!("vertex {v} out of range for {n} vertices"))),
        None => Ok(()),
    }
}

#[pyclass(name = "Digraph", module = "pymatkern")]
#[derive(Clone)]
pub struct PyDigraph {
    inner: Digraph,
}

#[pymethods]
impl PyDigraph {
    #[new]
    #[pyo3(signature = (n, arcs=Vec::new()))]
    fn new(n: usize, arcs: Vec<(usize, usize)>) -> PyResult<Self> {
        check_ids(n, &arcs.iter().flat_map(|&(u, v)| [u, v]).collect::<Vec<_>>())?;
        Ok(PyDigraph { inner: Digraph::from_arcs(n, &arcs) })
    }

    /// Parses the `digraph n m` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyDigraph { inner: io::parse_digraph(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        io::write_digraph(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs().collect()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    /// Minimum number of vertices whose removal separates `sources` from `sinks`;
    /// sources and sinks may be removed too.
    fn min_cut_size(&self, sources: Vec<usize>, sinks: Vec<usize>) -> PyResult<usize> {
        check_ids(self.inner.n(), &sources)?;
        check_ids(self.inner.n(), &sinks)?;
        Ok(graphcut::min_cut_size(&self.inner, &sources, &sinks))
    }

    /// Minimum (sources, x)-cut closest to the sources.
    fn closest_cut(&self, sources: Vec<usize>, x: Vec<usize>) -> PyResult<Vec<usize>> {
        check_ids(self.inner.n(), &sources)?;
        check_ids(self.inner.n(), &x)?;
        Ok(graphcut::closest_cut(&self.inner, &sources, &x))
    }

    /// Vertices reachable from `sources` once `removed` is deleted.
    #[pyo3(signature = (sources, removed=Vec::new()))]
    fn reachable(&self, sources: Vec<usize>, removed: Vec<usize>) -> PyResult<Vec<usize>> {
        check_ids(self.inner.n(), &sources)?;
        check_ids(self.inner.n(), &removed)?;
        let r = graphcut::reachable_after(&self.inner, &sources, &removed);
        Ok((0..r.len()).filter(|&v| r[v]).collect())
    }

    fn __repr__(&self) -> String {
        format!("Digraph(n={}, arcs={})", self.inner.n(), self.inner.arc_count())
    }
}

#[pyclass(name = "Graph", module = "pymatkern")]
#[derive(Clone)]
pub struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        check_ids(n, &edges.iter().flat_map(|&(u, v)| [u, v]).collect::<Vec<_>>())?;
        Ok(PyGraph { inner: Graph::from_edges(n, &edges) })
    }

    /// Parses the `graph n m` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: io::parse_undirected(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        io::write_graph(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

/// Linear matroid over a prime field with labelled columns.
#[pyclass(name = "Matroid", module = "pymatkern")]
pub struct PyMatroid {
    inner: RepresentedMatroid,
}

#[pymethods]
impl PyMatroid {
    /// Gammoid of `digraph` from `sources`: sets linked from the sources by disjoint paths.
    #[staticmethod]
    #[pyo3(signature = (digraph, sources, seed=0, prime=None))]
    fn gammoid(digraph: &PyDigraph, sources: Vec<usize>, seed: u64, prime: Option<u64>) -> PyResult<Self> {
        check_ids(digraph.inner.n(), &sources)?;
        let m = RepresentedMatroid::gammoid(field(prime)?, &digraph.inner, &sources, &mut rng(seed)).map_err(py_err)?;
        Ok(PyMatroid { inner: m })
    }

    /// Uniform matroid of rank `r` on `n` elements labelled 0..n.
    #[staticmethod]
    #[pyo3(signature = (n, r, prime=None))]
    fn uniform(n: usize, r: usize, prime: Option<u64>) -> PyResult<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(PyMatroid { inner: RepresentedMatroid::uniform(field(prime)?, labels, r).map_err(py_err)? })
    }

    /// Parses the text written by `export`.
    #[staticmethod]
    fn import_text(text: &str) -> PyResult<Self> {
        Ok(PyMatroid { inner: RepresentedMatroid::import(text).map_err(py_err)? })
    }

    fn export(&self) -> String {
        self.inner.export()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    #[getter]
    fn failure_bound(&self) -> f64 {
        self.inner.failure_bound()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn rank_of(&self, ids: Vec<usize>) -> PyResult<usize> {
        check_ids(self.inner.ground_size(), &ids)?;
        Ok(self.inner.rank_of(&ids))
    }

    fn is_independent(&self, ids: Vec<usize>) -> PyResult<bool> {
        check_ids(self.inner.ground_size(), &ids)?;
        Ok(self.inner.is_independent_ids(&ids))
    }

    /// Positions of a representative subfamily of `tuples` (lists of element ids).
    /// Tuples that are dependent on their own are dropped.
    fn representative_family(&self, tuples: Vec<Vec<usize>>) -> PyResult<Vec<usize>> {
        for t in &tuples {
            check_ids(self.inner.ground_size(), t)?;
        }
        let named: Vec<(String, Vec<usize>)> = tuples.into_iter().enumerate().map(|(i, t)| (i.to_string(), t)).collect();
        let fam = TupleFamily::from_ids(&self.inner, named, false).map_err(py_err)?;
        let rep = representative_family(&self.inner, &fam).map_err(py_err)?;
        Ok(rep.kept.iter().map(|l| l.parse().expect("labels are positions")).collect())
    }

    fn __repr__(&self) -> String {
        format!("Matroid(ground={}, rank={})", self.inner.ground_size(), self.inner.rank())
    }
}

fn dpc_instance(digraph: &PyDigraph, source: usize, pairs: Vec<(usize, usize)>, k: usize) -> PyResult<PairCutInstance> {
    PairCutInstance::with_pairs(digraph.inner.clone(), source, &pairs, k).map_err(py_err)
}

/// Deletion set of size <= k after which no pair has both ends reachable from
/// `source`, or None.
#[pyfunction]
fn solve_dpc(digraph: &PyDigraph, source: usize, pairs: Vec<(usize, usize)>, k: usize) -> PyResult<Option<Vec<usize>>> {
    Ok(paircut::solve_dpc(&dpc_instance(digraph, source, pairs, k)?).solution)
}

#[pyfunction]
#[pyo3(signature = (digraph, source, pairs, k, seed=0, prime=None))]
fn kernelize_dpc<'py>(
    py: Python<'py>,
    digraph: &PyDigraph,
    source: usize,
    pairs: Vec<(usize, usize)>,
    k: usize,
    seed: u64,
    prime: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = dpc_instance(digraph, source, pairs, k)?;
    let ker = paircut::kernelize_dpc(field(prime)?, &inst, &mut rng(seed)).map_err(py_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("digraph", PyDigraph { inner: ker.instance.graph }.into_py(py))?;
    d.set_item("source", ker.instance.source)?;
    d.set_item("tuples", ker.instance.tuples)?;
    d.set_item("k", ker.instance.k)?;
    d.set_item("vertex_map", ker.vertex_map)?;
    d.set_item("false_positive_bound", ker.false_positive_bound)?;
    d.set_item("false_negative_bound", ker.false_negative_bound)?;
    d.set_item("vertex_bound", ker.vertex_bound)?;
    Ok(d)
}

/// Compressed pair-cut instance as exportable text; the prime is chosen from `epsilon`.
#[pyfunction]
#[pyo3(signature = (digraph, source, pairs, k, epsilon=2f64.powi(-20), seed=0))]
fn compress_dpc(digraph: &PyDigraph, source: usize, pairs: Vec<(usize, usize)>, k: usize, epsilon: f64, seed: u64) -> PyResult<(String, f64)> {
    let inst = dpc_instance(digraph, source, pairs, k)?;
    let c = paircut::compress_dpc(&inst, epsilon, &mut rng(seed)).map_err(py_err)?;
    Ok((c.export(), c.failure_bound))
}

#[pyfunction]
fn decide_compressed(text: &str) -> PyResult<bool> {
    let c = CompressedDpc::import(text).map_err(py_err)?;
    Ok(paircut::decide_compressed(&c).map_err(py_err)?.positive)
}

fn cover_dict<'py, G>(py: Python<'py>, c: cutcover::CoverResult<G>, wrap: impl FnOnce(G) -> PyObject) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("z", c.z)?;
    d.set_item("reduced", wrap(c.reduced_graph))?;
    d.set_item("failure_bound", c.failure_bound)?;
    d.set_item("iterations", c.iterations)?;
    Ok(d)
}

/// Vertex set Z keeping a minimum (A, B)-cut for every A within sources and B within sinks.
#[pyfunction]
#[pyo3(signature = (digraph, sources, sinks, seed=0, prime=None))]
fn cut_covering_set<'py>(
    py: Python<'py>,
    digraph: &PyDigraph,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    seed: u64,
    prime: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    check_ids(digraph.inner.n(), &sources)?;
    check_ids(digraph.inner.n(), &sinks)?;
    let c = cutcover::cut_covering_set(field(prime)?, &digraph.inner, &sources, &sinks, &mut rng(seed)).map_err(py_err)?;
    cover_dict(py, c, |g| PyDigraph { inner: g }.into_py(py))
}

#[pyfunction]
#[pyo3(signature = (digraph, terminals, seed=0, prime=None))]
fn terminal_cut_cover<'py>(py: Python<'py>, digraph: &PyDigraph, terminals: Vec<usize>, seed: u64, prime: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    check_ids(digraph.inner.n(), &terminals)?;
    let c = cutcover::terminal_cut_cover(field(prime)?, &digraph.inner, &terminals, &mut rng(seed)).map_err(py_err)?;
    cover_dict(py, c, |g| PyDigraph { inner: g }.into_py(py))
}

#[pyfunction]
#[pyo3(signature = (graph, terminals, parts, seed=0, prime=None))]
fn multiway_cover<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    terminals: Vec<usize>,
    parts: usize,
    seed: u64,
    prime: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    check_ids(graph.inner.n(), &terminals)?;
    let c = cutcover::multiway_cover(field(prime)?, &graph.inner, &terminals, parts, &mut rng(seed)).map_err(py_err)?;
    cover_dict(py, c, |g| PyGraph { inner: g }.into_py(py))
}

fn mwc_dict(py: Python<'_>, ker: MwcKernel) -> PyResult<Bound<'_, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("graph", PyGraph { inner: ker.instance.graph }.into_py(py))?;
    d.set_item("terminals", ker.instance.terminals)?;
    d.set_item("k", ker.instance.k)?;
    d.set_item("negative", ker.negative)?;
    d.set_item("forced", ker.forced)?;
    d.set_item("failure_bound", ker.failure_bound)?;
    d.set_item("vertex_bound", ker.vertex_bound)?;
    Ok(d)
}

/// Kernel for multiway cut where terminals may be deleted.
#[pyfunction]
#[pyo3(signature = (graph, terminals, k, seed=0, prime=None))]
fn kernelize_dtmwc<'py>(py: Python<'py>, graph: &PyGraph, terminals: Vec<usize>, k: usize, seed: u64, prime: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let inst = MwcInstance::new(graph.inner.clone(), terminals, k, true).map_err(py_err)?;
    mwc_dict(py, mwc::kernelize_dtmwc(field(prime)?, &inst, &mut rng(seed)).map_err(py_err)?)
}

/// Kernel for multiway cut with undeletable terminals.
#[pyfunction]
#[pyo3(signature = (graph, terminals, k, seed=0, prime=None))]
fn kernelize_smwc<'py>(py: Python<'py>, graph: &PyGraph, terminals: Vec<usize>, k: usize, seed: u64, prime: Option<u64>) -> PyResult<Bound<'py, PyDict>> {
    let inst = MwcInstance::new(graph.inner.clone(), terminals, k, false).map_err(py_err)?;
    mwc_dict(py, mwc::kernelize_smwc(field(prime)?, &inst, &mut rng(seed)).map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (graph, pairs, k, seed=0, prime=None))]
fn kernelize_multicut<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    pairs: Vec<(usize, usize)>,
    k: usize,
    seed: u64,
    prime: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = MulticutInstance { graph: graph.inner.clone(), pairs, k };
    let ker = mwc::kernelize_multicut(field(prime)?, &inst, &mut rng(seed)).map_err(py_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("graph", PyGraph { inner: ker.instance.graph }.into_py(py))?;
    d.set_item("pairs", ker.instance.pairs)?;
    d.set_item("k", ker.instance.k)?;
    d.set_item("parts", ker.parts)?;
    d.set_item("failure_bound", ker.failure_bound)?;
    d.set_item("vertex_bound", ker.vertex_bound)?;
    Ok(d)
}

/// Half-integral LP optimum for multiway cut with undeletable terminals, as doubled
/// per-vertex values and doubled objective; None when two terminals are adjacent.
#[pyfunction]
fn multiway_lp(graph: &PyGraph, terminals: Vec<usize>) -> PyResult<Option<(Vec<u8>, usize)>> {
    check_ids(graph.inner.n(), &terminals)?;
    Ok(mwc::half_integral_mwc_lp(&graph.inner, &terminals).map_err(py_err)?.map(|lp| (lp.doubled, lp.doubled_objective)))
}

/// Clauses as DIMACS-style signed 1-based literals.
fn cnf(num_vars: usize, clauses: Vec<Vec<i64>>) -> PyResult<Cnf2> {
    let lits = clauses
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|x| match x {
                    0 => Err(PyValueError::new_err("literal 0")),
                    x => Ok(Lit { var: (x.unsigned_abs() - 1) as usize, neg: x < 0 }),
                })
                .collect::<PyResult<Vec<Lit>>>()
        })
        .collect::<PyResult<Vec<_>>>()?;
    Cnf2::new(num_vars, lits).map_err(py_err)
}

fn dimacs(f: &Cnf2) -> Vec<Vec<i64>> {
    f.clauses.iter().map(|c| c.iter().map(|l| l.to_dimacs()).collect()).collect()
}

#[pyfunction]
fn solve_2sat(num_vars: usize, clauses: Vec<Vec<i64>>) -> PyResult<Option<Vec<bool>>> {
    Ok(a2sat::is_satisfiable_2sat(&cnf(num_vars, clauses)?))
}

/// At most k variables (0-based) whose clauses can be dropped to make the formula
/// satisfiable, or None.
#[pyfunction]
fn solve_a2sat(num_vars: usize, clauses: Vec<Vec<i64>>, k: usize) -> PyResult<Option<Vec<usize>>> {
    a2sat::solve_a2sat(&cnf(num_vars, clauses)?, k).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (num_vars, clauses, k, seed=0, prime=None))]
fn kernelize_a2sat(py: Python<'_>, num_vars: usize, clauses: Vec<Vec<i64>>, k: usize, seed: u64, prime: Option<u64>) -> PyResult<Bound<'_, PyDict>> {
    let ker = a2sat::kernelize_a2sat(field(prime)?, &cnf(num_vars, clauses)?, k, &mut rng(seed)).map_err(py_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("num_vars", ker.formula.num_vars)?;
    d.set_item("clauses", dimacs(&ker.formula))?;
    d.set_item("k", ker.k)?;
    d.set_item("names", ker.names)?;
    d.set_item("decided", ker.decided)?;
    d.set_item("false_positive_bound", ker.false_positive_bound)?;
    d.set_item("false_negative_bound", ker.false_negative_bound)?;
    d.set_item("variable_bound", ker.variable_bound)?;
    Ok(d)
}

/// Vertex cover above LP rewritten as vertex cover above a maximum matching.
#[pyfunction]
fn reduce_vc_above_lp<'py>(py: Python<'py>, graph: &PyGraph, k: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = a2sat::reduce_vc_above_lp(&graph.inner, k);
    let d = PyDict::new_bound(py);
    d.set_item("graph", PyGraph { inner: r.graph }.into_py(py))?;
    d.set_item("k", r.k)?;
    d.set_item("matching", r.matching)?;
    d.set_item("doubled_lp", r.doubled_lp)?;
    d.set_item("dummy", r.dummy)?;
    Ok(d)
}

/// Runs the acceptance checks; returns (id, passed, detail) per criterion.
#[pyfunction]
#[pyo3(signature = (quick=true, seed=0))]
fn selftest(py: Python<'_>, quick: bool, seed: u64) -> Vec<(usize, bool, String)> {
    let scale = if quick { Scale::Quick } else { Scale::Full };
    py.allow_threads(|| run_all(scale, seed).into_iter().map(|r| (r.id, r.passed, r.detail)).collect())
}

#[pymodule]
fn pymatkern(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MERSENNE_61", MERSENNE_61)?;
    m.add_class::<PyDigraph>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyMatroid>()?;
    m.add_function(wrap_pyfunction!(solve_dpc, m)?)?;
    m.add_function(wrap_pyfunction!(kernelize_dpc, m)?)?;
    m.add_function(wrap_pyfunction!(compress_dpc, m)?)?;
    m.add_function(wrap_pyfunction!(decide_compressed, m)?)?;
    m.add_function(wrap_pyfunction!(cut_covering_set, m)?)?;
    m.add_function(wrap_pyfunction!(terminal_cut_cover, m)?)?;
    m.add_function(wrap_pyfunction!(multiway_cover, m)?)?;
    m.add_function(wrap_pyfunction!(kernelize_dtmwc, m)?)?;
    m.add_function(wrap_pyfunction!(kernelize_smwc, m)?)?;
    m.add_function(wrap_pyfunction!(kernelize_multicut, m)?)?;
    m.add_function(wrap_pyfunction!(multiway_lp, m)?)?;
    m.add_function(wrap_pyfunction!(solve_2sat, m)?)?;
    m.add_function(wrap_pyfunction!(solve_a2sat, m)?)?;
    m.add_function(wrap_pyfunction!(kernelize_a2sat, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_vc_above_lp, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
