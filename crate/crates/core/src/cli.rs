//! Command-line front end. Every command ends with one summary line
//! `RESULT <answer|size> FAILPROB <bound> SEED <seed>`; kernels also print `MAP old new`
//! for each kept input vertex and `NEW label new` for vertices they introduce.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::a2sat::{is_satisfiable_2sat, kernelize_a2sat, reduce_vc_above_lp, Cnf2};
use crate::acceptance::{run_all, Scale};
use crate::cutcover::{cut_covering_set, multiway_cover, terminal_cut_cover};
use crate::exactfield::{Field, FieldConfig, MERSENNE_61};
use crate::graphcut::{Digraph, Graph};
use crate::io;
use crate::mwc::{kernelize_dtmwc, kernelize_multicut, kernelize_smwc, MulticutInstance, MwcInstance, MwcKernel};
use crate::oracle::{
    brute_a2sat, brute_dpc, brute_essential, brute_linked, brute_min_vertex_cover, brute_multicut, brute_multiway_cut,
    OracleBudget,
};
use crate::paircut::{compress_dpc, decide_compressed, kernelize_dpc, solve_dpc, CompressedDpc, PairCutInstance};

#[derive(Parser, Debug)]
#[command(name = "matkern", version, about = "Randomized matroid-based kernels for cut problems")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "MATKERN_SEED", default_value_t = 0)]
    seed: u64,
    /// Prime for matrix representations (compress-dpc picks its own from --epsilon).
    #[arg(long, global = true, default_value_t = MERSENNE_61)]
    prime: u64,
    /// Write output instances to PREFIX.<kind> instead of standard output.
    #[arg(long, global = true, value_name = "PREFIX")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact pair-cut solver by branching on closest cuts.
    SolveDpc {
        graph: PathBuf,
        tuples: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        source: usize,
    },
    /// Randomized pair-cut kernel.
    KernelDpc {
        graph: PathBuf,
        pairs: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        source: usize,
    },
    /// Compress a pair-cut instance to a represented matroid with labelled pairs.
    CompressDpc {
        graph: PathBuf,
        pairs: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        source: usize,
        #[arg(long, default_value_t = 2f64.powi(-20))]
        epsilon: f64,
    },
    /// Decide a compressed pair-cut instance.
    DecideCompressed { file: PathBuf },
    /// Cut-covering set for sources S and sinks T of a digraph.
    CoverCut {
        graph: PathBuf,
        #[arg(long)]
        sources: PathBuf,
        #[arg(long)]
        sinks: PathBuf,
    },
    /// Cut-covering set for all S, T, R within a terminal set X.
    CoverTerminal {
        graph: PathBuf,
        #[arg(long)]
        terminals: PathBuf,
    },
    /// Multiway cut-covering set of an undirected graph.
    CoverMultiway {
        graph: PathBuf,
        #[arg(long)]
        terminals: PathBuf,
        #[arg(long)]
        parts: usize,
    },
    /// Kernel for multiway cut with deletable terminals.
    KernelDtmwc {
        graph: PathBuf,
        #[arg(long)]
        terminals: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Kernel for multiway cut with few undeletable terminals.
    KernelSmwc {
        graph: PathBuf,
        #[arg(long)]
        terminals: PathBuf,
        #[arg(long)]
        k: usize,
        /// Upper bound on the number of terminals; larger terminal sets are rejected.
        #[arg(long)]
        parts: Option<usize>,
    },
    /// Kernel for vertex multicut with few pairs.
    KernelMulticut {
        graph: PathBuf,
        pairs: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Kernel for variable-deletion Almost 2-SAT.
    KernelA2sat {
        formula: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Vertex cover above LP as vertex cover above a maximum matching.
    ReduceVclp {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// 2-SAT by strongly connected components.
    #[command(name = "solve-2sat")]
    Solve2sat { formula: PathBuf },
    /// Exhaustive reference solvers for small instances.
    Oracle {
        problem: OracleProblem,
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        source: usize,
        /// Multiway cut may delete terminals.
        #[arg(long)]
        deletable_terminals: bool,
    },
    /// Run the randomized acceptance checks.
    Selftest {
        /// About a tenth of the full instance counts.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OracleProblem {
    /// digraph, tuples; --k, --source
    Dpc,
    /// graph, terminals; --k, --deletable-terminals
    Multiway,
    /// graph, pairs; --k
    Multicut,
    /// formula; --k
    A2sat,
    /// graph
    VertexCover,
    /// digraph, sources, sinks
    Linked,
    /// digraph, sources, sinks
    Essential,
}

/// Output of one command: instance files, free-form lines, and the summary.
struct Report {
    files: Vec<(&'static str, String)>,
    lines: Vec<String>,
    result: String,
    failprob: f64,
}

impl Report {
    fn new(result: impl ToString, failprob: f64) -> Self {
        Report { files: Vec::new(), lines: Vec::new(), result: result.to_string(), failprob }
    }

    fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    fn file(&mut self, kind: &'static str, content: String) -> &mut Self {
        self.files.push((kind, content));
        self
    }
}

type CliResult<T> = std::result::Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> crate::Result<T>) -> CliResult<T> {
    parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn lib<T>(r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| e.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

/// `MAP old new` for vertices labelled by an input id, `NEW label new` otherwise.
fn map_lines(labels: &[String], input_n: usize) -> Vec<String> {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| match l.parse::<usize>() {
            Ok(old) if old < input_n && old.to_string() == *l => format!("MAP {old} {i}"),
            _ => format!("NEW {l} {i}"),
        })
        .collect()
}

fn field_for(cli: &Cli, ground: usize) -> CliResult<Field> {
    let cfg = lib(FieldConfig::new(cli.prime, cli.seed))?;
    lib(cfg.check_ground_size(ground))?;
    Ok(cfg.field())
}

fn tuples_text(tuples: &[Vec<usize>]) -> String {
    tuples.iter().map(|t| io::write_ids(t) + "\n").collect()
}

fn dpc_instance(graph: &Path, tuples: &Path, k: usize, source: usize) -> CliResult<PairCutInstance> {
    let d = load(graph, io::parse_digraph)?;
    let n = d.n();
    let t = load(tuples, |s| io::parse_tuples(s, n))?;
    lib(PairCutInstance::new(d, source, t, k))
}

fn mwc_instance(graph: &Path, terminals: &Path, k: usize, deletable: bool) -> CliResult<MwcInstance> {
    let g = load(graph, io::parse_undirected)?;
    let n = g.n();
    let t = load(terminals, |s| io::parse_vertex_set(s, n))?;
    lib(MwcInstance::new(g, t, k, deletable))
}

fn cover_report(z: &[usize], reduced: String, labels: &[String], input_n: usize, failure: f64, iterations: usize) -> Report {
    let mut r = Report::new(z.len(), failure);
    r.file("graph", reduced);
    r.line(format!("Z {}", io::write_ids(z))).line(format!("BYPASSED {iterations}"));
    r.lines.extend(map_lines(labels, input_n));
    r
}

fn mwc_report(ker: MwcKernel, input_n: usize) -> Report {
    let mut r = Report::new(if ker.negative { 0 } else { ker.instance.graph.n() }, ker.failure_bound);
    if ker.negative {
        r.line("NEGATIVE");
    }
    r.file("graph", io::write_graph(&ker.instance.graph)).file("terminals", io::write_ids(&ker.instance.terminals) + "\n");
    r.line(format!("K {}", ker.instance.k)).line(format!("FORCED {}", ker.forced.join(" "))).line(format!("BOUND {}", ker.vertex_bound));
    if !ker.negative {
        r.lines.extend(map_lines(ker.instance.graph.labels(), input_n));
    }
    r
}

fn oracle_report(problem: OracleProblem, files: &[PathBuf], k: usize, source: usize, deletable: bool) -> CliResult<Report> {
    let need = |count: usize| {
        if files.len() == count {
            Ok(())
        } else {
            Err(format!("oracle {problem:?} takes {count} file(s), got {}", files.len()))
        }
    };
    let budget = OracleBudget::default();
    let witness = |found: Option<Vec<usize>>| {
        let mut r = Report::new(yes_no(found.is_some()), 0.0);
        if let Some(x) = found {
            r.line(format!("WITNESS {}", io::write_ids(&x)));
        }
        r
    };
    let three = |files: &[PathBuf]| -> CliResult<(Digraph, Vec<usize>, Vec<usize>)> {
        let d = load(&files[0], io::parse_digraph)?;
        let n = d.n();
        Ok((d, load(&files[1], |s| io::parse_vertex_set(s, n))?, load(&files[2], |s| io::parse_vertex_set(s, n))?))
    };
    Ok(match problem {
        OracleProblem::Dpc => {
            need(2)?;
            let inst = dpc_instance(&files[0], &files[1], k, source)?;
            witness(lib(brute_dpc(&inst.graph, inst.source, &inst.tuples, k, &budget))?)
        }
        OracleProblem::Multiway => {
            need(2)?;
            let inst = mwc_instance(&files[0], &files[1], k, deletable)?;
            let parts: Vec<Vec<usize>> = inst.terminals.iter().map(|&t| vec![t]).collect();
            witness(lib(brute_multiway_cut(&inst.graph, &parts, k, deletable, &budget))?)
        }
        OracleProblem::Multicut => {
            need(2)?;
            let g = load(&files[0], io::parse_undirected)?;
            let n = g.n();
            let pairs = load(&files[1], |s| io::parse_pairs(s, n))?;
            witness(lib(brute_multicut(&g, &pairs, k, &budget))?)
        }
        OracleProblem::A2sat => {
            need(1)?;
            let f = load(&files[0], io::parse_cnf2)?;
            witness(lib(brute_a2sat(&f, k, &budget))?)
        }
        OracleProblem::VertexCover => {
            need(1)?;
            let g = load(&files[0], io::parse_undirected)?;
            Report::new(lib(brute_min_vertex_cover(&g))?, 0.0)
        }
        OracleProblem::Linked => {
            need(3)?;
            let (d, s, t) = three(files)?;
            Report::new(yes_no(lib(brute_linked(&d, &s, &t))?), 0.0)
        }
        OracleProblem::Essential => {
            need(3)?;
            let (d, s, t) = three(files)?;
            let e: Vec<usize> = lib(brute_essential(&d, &s, &t, &budget))?.into_iter().collect();
            let mut r = Report::new(e.len(), 0.0);
            r.line(format!("ESSENTIAL {}", io::write_ids(&e)));
            r
        }
    })
}

fn execute(cli: &Cli) -> CliResult<(Report, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let report = match &cli.command {
        Command::SolveDpc { graph, tuples, k, source } => {
            let inst = dpc_instance(graph, tuples, *k, *source)?;
            let out = solve_dpc(&inst);
            let mut r = Report::new(yes_no(out.solution.is_some()), 0.0);
            r.line(format!("LEAVES {}", out.leaves));
            if let Some(x) = out.solution {
                r.file("witness", io::write_ids(&x) + "\n");
            }
            r
        }
        Command::KernelDpc { graph, pairs, k, source } => {
            let inst = dpc_instance(graph, pairs, *k, *source)?;
            let n = inst.graph.n();
            let ker = lib(kernelize_dpc(field_for(cli, n)?, &inst, &mut rng))?;
            let mut r = Report::new(ker.instance.graph.n(), (ker.false_positive_bound + ker.false_negative_bound).min(1.0));
            r.file("graph", io::write_digraph(&ker.instance.graph)).file("tuples", tuples_text(&ker.instance.tuples));
            r.line(format!("SOURCE {}", ker.instance.source)).line(format!("K {}", ker.instance.k));
            r.line(format!("FALSE-POSITIVE {:.3e}", ker.false_positive_bound)).line(format!("FALSE-NEGATIVE {:.3e}", ker.false_negative_bound));
            r.line(format!("BOUND {}", ker.vertex_bound));
            r.lines.extend(ker.vertex_map.iter().map(|(old, new)| format!("MAP {old} {new}")));
            r
        }
        Command::CompressDpc { graph, pairs, k, source, epsilon } => {
            if cli.prime != MERSENNE_61 {
                log::warn!("compress-dpc chooses its prime from --epsilon; --prime is ignored");
            }
            if !(*epsilon > 0.0 && *epsilon < 1.0) {
                return Err(format!("--epsilon must lie in (0, 1), got {epsilon}"));
            }
            let inst = dpc_instance(graph, pairs, *k, *source)?;
            let c = lib(compress_dpc(&inst, *epsilon, &mut rng))?;
            let mut r = Report::new(c.matrix_bits(), c.failure_bound);
            r.line(format!("PRIME {}", c.matroid.field().prime())).line(format!("GROUND {}", c.matroid.ground_size()));
            r.file("compressed", c.export());
            r
        }
        Command::DecideCompressed { file } => {
            let c = load(file, CompressedDpc::import)?;
            let out = lib(decide_compressed(&c))?;
            let mut r = Report::new(yes_no(out.positive), 0.0);
            r.line(format!("LEAVES {}", out.leaves));
            r
        }
        Command::CoverCut { graph, sources, sinks } => {
            let d = load(graph, io::parse_digraph)?;
            let n = d.n();
            let s = load(sources, |t| io::parse_vertex_set(t, n))?;
            let t = load(sinks, |t| io::parse_vertex_set(t, n))?;
            let c = lib(cut_covering_set(field_for(cli, n)?, &d, &s, &t, &mut rng))?;
            cover_report(&c.z, io::write_digraph(&c.reduced_graph), c.reduced_graph.labels(), n, c.failure_bound, c.iterations)
        }
        Command::CoverTerminal { graph, terminals } => {
            let d = load(graph, io::parse_digraph)?;
            let n = d.n();
            let x = load(terminals, |t| io::parse_vertex_set(t, n))?;
            let c = lib(terminal_cut_cover(field_for(cli, n)?, &d, &x, &mut rng))?;
            cover_report(&c.z, io::write_digraph(&c.reduced_graph), c.reduced_graph.labels(), n, c.failure_bound, c.iterations)
        }
        Command::CoverMultiway { graph, terminals, parts } => {
            let g = load(graph, io::parse_undirected)?;
            let n = g.n();
            let x = load(terminals, |t| io::parse_vertex_set(t, n))?;
            let c = lib(multiway_cover(field_for(cli, n)?, &g, &x, *parts, &mut rng))?;
            cover_report(&c.z, io::write_graph(&c.reduced_graph), c.reduced_graph.labels(), n, c.failure_bound, c.iterations)
        }
        Command::KernelDtmwc { graph, terminals, k } => {
            let inst = mwc_instance(graph, terminals, *k, true)?;
            let n = inst.graph.n();
            mwc_report(lib(kernelize_dtmwc(field_for(cli, n)?, &inst, &mut rng))?, n)
        }
        Command::KernelSmwc { graph, terminals, k, parts } => {
            let inst = mwc_instance(graph, terminals, *k, false)?;
            if let Some(p) = parts.filter(|&p| inst.terminals.len() > p) {
                return Err(format!("{} terminals exceed --parts {p}", inst.terminals.len()));
            }
            let n = inst.graph.n();
            mwc_report(lib(kernelize_smwc(field_for(cli, n)?, &inst, &mut rng))?, n)
        }
        Command::KernelMulticut { graph, pairs, k } => {
            let g: Graph = load(graph, io::parse_undirected)?;
            let n = g.n();
            let pairs = load(pairs, |s| io::parse_pairs(s, n))?;
            let inst = MulticutInstance { graph: g, pairs, k: *k };
            let ker = lib(kernelize_multicut(field_for(cli, n)?, &inst, &mut rng))?;
            let mut r = Report::new(ker.instance.graph.n(), ker.failure_bound);
            let pairs: Vec<Vec<usize>> = ker.instance.pairs.iter().map(|&(a, b)| vec![a, b]).collect();
            r.file("graph", io::write_graph(&ker.instance.graph)).file("pairs", tuples_text(&pairs));
            r.line(format!("K {}", ker.instance.k)).line(format!("PARTS {}", ker.parts)).line(format!("BOUND {}", ker.vertex_bound));
            r.lines.extend(map_lines(ker.instance.graph.labels(), n));
            r
        }
        Command::KernelA2sat { formula, k } => {
            let f: Cnf2 = load(formula, io::parse_cnf2)?;
            let ker = lib(kernelize_a2sat(field_for(cli, f.num_vars)?, &f, *k, &mut rng))?;
            let mut r = Report::new(ker.formula.num_vars, (ker.false_positive_bound + ker.false_negative_bound).min(1.0));
            r.file("cnf2", io::write_cnf2(&ker.formula));
            r.line(format!("K {}", ker.k)).line(format!("BOOTSTRAP {}", ker.bootstrap_size));
            if let Some(d) = ker.decided {
                r.line(format!("DECIDED {}", yes_no(d)));
            }
            r.line(format!("FALSE-POSITIVE {:.3e}", ker.false_positive_bound)).line(format!("FALSE-NEGATIVE {:.3e}", ker.false_negative_bound));
            r.line(format!("BOUND {}", ker.variable_bound));
            r.lines.extend(ker.names.iter().enumerate().map(|(i, name)| format!("NAME {} {name}", i + 1)));
            r
        }
        Command::ReduceVclp { graph, k } => {
            let g = load(graph, io::parse_undirected)?;
            let out = reduce_vc_above_lp(&g, *k);
            let mut r = Report::new(out.k, 0.0);
            r.file("graph", io::write_graph(&out.graph));
            r.line(format!("LP {}", out.doubled_lp as f64 / 2.0)).line(format!("MATCHING {}", out.matching));
            r.line(format!("K {}", out.k)).line(format!("DUMMY {}", out.dummy));
            r
        }
        Command::Solve2sat { formula } => {
            let f = load(formula, io::parse_cnf2)?;
            match is_satisfiable_2sat(&f) {
                Some(a) => {
                    let mut r = Report::new("SAT", 0.0);
                    let lits: Vec<String> = a.iter().enumerate().map(|(i, &v)| if v { (i + 1).to_string() } else { format!("-{}", i + 1) }).collect();
                    r.line(format!("ASSIGNMENT {}", lits.join(" ")));
                    r
                }
                None => Report::new("UNSAT", 0.0),
            }
        }
        Command::Oracle { problem, files, k, source, deletable_terminals } => oracle_report(*problem, files, *k, *source, *deletable_terminals)?,
        Command::Selftest { quick } => {
            let scale = if *quick { Scale::Quick } else { Scale::Full };
            let reports = run_all(scale, cli.seed);
            let passed = reports.iter().filter(|r| r.passed).count();
            let mut r = Report::new(format!("{passed}/{}", reports.len()), 0.0);
            r.lines.extend(reports.iter().map(|c| c.to_string()));
            return Ok((r, passed == reports.len()));
        }
    };
    Ok((report, true))
}

fn emit(cli: &Cli, r: &Report, out: &mut dyn Write) -> CliResult<()> {
    let io_err = |e: std::io::Error| e.to_string();
    for (kind, content) in &r.files {
        match &cli.out {
            Some(prefix) => {
                let path = PathBuf::from(format!("{}.{kind}", prefix.display()));
                std::fs::write(&path, content).map_err(|e| format!("{}: {e}", path.display()))?;
                writeln!(out, "WROTE {}", path.display()).map_err(io_err)?;
            }
            None => {
                writeln!(out, "BEGIN {kind}").map_err(io_err)?;
                out.write_all(content.as_bytes()).map_err(io_err)?;
                writeln!(out, "END {kind}").map_err(io_err)?;
            }
        }
    }
    for l in &r.lines {
        writeln!(out, "{l}").map_err(io_err)?;
    }
    writeln!(out, "RESULT {} FAILPROB {:.3e} SEED {}", r.result, r.failprob, cli.seed).map_err(io_err)
}

/// Runs the CLI on `args` (without the program name). Returns the exit status: 0 on
/// success, 1 when `selftest` has a failing check, 2 on parse, format or contract errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("matkern")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli).and_then(|(report, ok)| emit(&cli, &report, out).map(|_| ok)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Paths of the small instances used by the determinism check.
#[derive(Debug, Clone)]
pub struct Fixtures {
    pub digraph: PathBuf,
    pub pairs: PathBuf,
    pub sources: PathBuf,
    pub sinks: PathBuf,
    pub graph: PathBuf,
    pub terminals: PathBuf,
    pub graph_pairs: PathBuf,
    pub formula: PathBuf,
    pub compressed: PathBuf,
}

pub fn write_fixtures(dir: &Path) -> crate::Result<Fixtures> {
    let path = |name: &str| dir.join(name);
    let f = Fixtures {
        digraph: path("instance.dg"),
        pairs: path("pairs.txt"),
        sources: path("sources.txt"),
        sinks: path("sinks.txt"),
        graph: path("instance.g"),
        terminals: path("terminals.txt"),
        graph_pairs: path("graph_pairs.txt"),
        formula: path("formula.cnf2"),
        compressed: path("instance.cdpc"),
    };
    let dg = "digraph 7 9\n0 1\n0 2\n0 3\n1 4\n2 4\n2 5\n3 5\n4 6\n5 6\n";
    std::fs::write(&f.digraph, dg)?;
    std::fs::write(&f.pairs, "4 5\n1 3\n6 6\n")?;
    std::fs::write(&f.sources, "0 1\n")?;
    std::fs::write(&f.sinks, "5 6\n")?;
    std::fs::write(&f.graph, "graph 8 9\n0 2\n1 2\n2 3\n3 4\n4 5\n1 5\n3 6\n6 7\n5 7\n")?;
    std::fs::write(&f.terminals, "0 1 7\n")?;
    std::fs::write(&f.graph_pairs, "0 7\n1 4\n")?;
    std::fs::write(&f.formula, "p cnf2 4 6\n1 2 0\n-1 2 0\n-2 3 0\n-3 0\n1 -4 0\n4 0\n")?;
    let d = io::parse_digraph(dg)?;
    let inst = PairCutInstance::with_pairs(d, 0, &[(4, 5), (1, 3)], 1)?;
    let c = compress_dpc(&inst, 2f64.powi(-20), &mut ChaCha8Rng::seed_from_u64(1))?;
    std::fs::write(&f.compressed, c.export())?;
    Ok(f)
}

/// One invocation of every subcommand except `selftest` on the fixtures.
pub fn determinism_commands(f: &Fixtures, seed: u64) -> Vec<Vec<String>> {
    let p = |x: &PathBuf| x.display().to_string();
    let seed = seed.to_string();
    let cmds: Vec<Vec<String>> = vec![
        vec!["solve-dpc".into(), p(&f.digraph), p(&f.pairs), "--k".into(), "1".into()],
        vec!["kernel-dpc".into(), p(&f.digraph), p(&f.pairs), "--k".into(), "1".into()],
        vec!["compress-dpc".into(), p(&f.digraph), p(&f.pairs), "--k".into(), "1".into()],
        vec!["decide-compressed".into(), p(&f.compressed)],
        vec!["cover-cut".into(), p(&f.digraph), "--sources".into(), p(&f.sources), "--sinks".into(), p(&f.sinks)],
        vec!["cover-terminal".into(), p(&f.digraph), "--terminals".into(), p(&f.sinks)],
        vec!["cover-multiway".into(), p(&f.graph), "--terminals".into(), p(&f.terminals), "--parts".into(), "2".into()],
        vec!["kernel-dtmwc".into(), p(&f.graph), "--terminals".into(), p(&f.terminals), "--k".into(), "2".into()],
        vec!["kernel-smwc".into(), p(&f.graph), "--terminals".into(), p(&f.terminals), "--k".into(), "2".into(), "--parts".into(), "3".into()],
        vec!["kernel-multicut".into(), p(&f.graph), p(&f.graph_pairs), "--k".into(), "1".into()],
        vec!["kernel-a2sat".into(), p(&f.formula), "--k".into(), "1".into()],
        vec!["reduce-vclp".into(), p(&f.graph), "--k".into(), "1".into()],
        vec!["solve-2sat".into(), p(&f.formula)],
        vec!["oracle".into(), "dpc".into(), p(&f.digraph), p(&f.pairs), "--k".into(), "1".into()],
        vec!["oracle".into(), "multiway".into(), p(&f.graph), p(&f.terminals), "--k".into(), "2".into()],
        vec!["oracle".into(), "multicut".into(), p(&f.graph), p(&f.graph_pairs), "--k".into(), "1".into()],
        vec!["oracle".into(), "a2sat".into(), p(&f.formula), "--k".into(), "1".into()],
        vec!["oracle".into(), "vertex-cover".into(), p(&f.graph)],
        vec!["oracle".into(), "linked".into(), p(&f.digraph), p(&f.sources), p(&f.sinks)],
        vec!["oracle".into(), "essential".into(), p(&f.digraph), p(&f.sources), p(&f.sinks)],
    ];
    cmds.into_iter()
        .map(|mut c| {
            c.extend(["--seed".to_string(), seed.clone()]);
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parse_errors_exit_two_with_line() {
        let dir = tempfile::tempdir().unwrap();
        let g = dir.path().join("bad.dg");
        std::fs::write(&g, "digraph 2 1\n0 9\n").unwrap();
        let t = dir.path().join("t.txt");
        std::fs::write(&t, "1 1\n").unwrap();
        let (code, _, err) = run_str(&["solve-dpc", g.to_str().unwrap(), t.to_str().unwrap(), "--k", "1"]);
        assert_eq!(code, 2);
        assert!(err.contains("line 2"), "{err}");
        let (code, _, _) = run_str(&["no-such-command"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn summary_line_and_maps() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_fixtures(dir.path()).unwrap();
        for args in determinism_commands(&f, 7) {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = run(args.iter().map(String::as_str), &mut out, &mut err);
            let out = String::from_utf8(out).unwrap();
            assert_eq!(code, 0, "{args:?}: {}", String::from_utf8_lossy(&err));
            let last = out.lines().last().unwrap();
            assert!(last.starts_with("RESULT ") && last.contains(" FAILPROB ") && last.ends_with(" SEED 7"), "{last}");
            if args[0].starts_with("kernel-") && args[0] != "kernel-a2sat" {
                assert!(out.contains("BEGIN graph") && (out.contains("MAP ") || out.contains("graph 0 0")), "{args:?}\n{out}");
            }
        }
    }

    #[test]
    fn out_prefix_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_fixtures(dir.path()).unwrap();
        let prefix = dir.path().join("ker");
        let (code, out, _) = run_str(&[
            "kernel-dpc",
            f.digraph.to_str().unwrap(),
            f.pairs.to_str().unwrap(),
            "--k",
            "1",
            "--out",
            prefix.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("WROTE"));
        let text = std::fs::read_to_string(dir.path().join("ker.graph")).unwrap();
        assert!(io::parse_digraph(&text).is_ok());
    }

    #[test]
    fn compressed_file_decides() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_fixtures(dir.path()).unwrap();
        let (code, out, _) = run_str(&["decide-compressed", f.compressed.to_str().unwrap()]);
        assert_eq!(code, 0);
        // the compressed fixture was built from the first two pairs only
        let two = dir.path().join("two_pairs.txt");
        std::fs::write(&two, "4 5\n1 3\n").unwrap();
        let (_, solved, _) = run_str(&["solve-dpc", f.digraph.to_str().unwrap(), two.to_str().unwrap(), "--k", "1"]);
        let (_, brute, _) = run_str(&["oracle", "dpc", f.digraph.to_str().unwrap(), two.to_str().unwrap(), "--k", "1"]);
        let verdict = |s: &str| s.lines().last().unwrap().split_whitespace().nth(1).unwrap().to_string();
        assert_eq!(verdict(&brute), "NO");
        assert_eq!(verdict(&solved), "NO");
        assert_eq!(verdict(&out), "NO");
    }

    #[test]
    fn contract_errors_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let f = write_fixtures(dir.path()).unwrap();
        let (code, _, err) = run_str(&["kernel-dtmwc", f.graph.to_str().unwrap(), "--terminals", f.terminals.to_str().unwrap(), "--k", "1", "--prime", "15"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error:"), "{err}");
    }
}
