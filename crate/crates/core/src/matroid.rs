//! Linear matroids given by a matrix over GF(p) whose columns are labelled ground elements.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Range;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactfield::{FMatrix, Field};
use crate::graphcut::Digraph;

/// Column and row ranges of one summand of a direct sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub cols: Range<usize>,
    pub rows: Range<usize>,
}

#[derive(Debug, Clone)]
pub struct RepresentedMatroid {
    matrix: FMatrix,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    blocks: Option<Vec<Block>>,
    failure_weight: f64,
}

/// Retries allowed when a random representation shows a detectable degeneracy.
pub const MAX_RETRIES: usize = 3;

pub(crate) fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Failure weight of a random transversal presentation of rank `rank` on n elements.
/// Smaller independent sets extend to bases and dependent sets stay dependent, so only
/// the at most C(n, rank) bases matter, each through one minor of degree `rank`. Divide
/// by p - 1 for the probability.
pub fn transversal_failure_weight(n: usize, rank: usize) -> f64 {
    binomial_f64(n, rank) * rank as f64
}

/// Size of a maximum matching between the sets and the elements they allow.
pub fn transversal_rank(n: usize, sets: &[Vec<usize>]) -> usize {
    fn augment(i: usize, sets: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &e in &sets[i] {
            if !seen[e] {
                seen[e] = true;
                if owner[e] == usize::MAX || augment(owner[e], sets, owner, seen) {
                    owner[e] = i;
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; n];
    (0..sets.len()).filter(|&i| augment(i, sets, &mut owner, &mut vec![false; n])).count()
}

/// Which neighbours of a non-source vertex join it in the transversal presentation
/// whose dual is the strict gammoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammoidOrientation {
    InNeighbors,
    OutNeighbors,
}

/// The orientation that yields sets linked *from* the sources; checked against the
/// flow oracle in the tests and by `selftest`.
pub const GAMMOID_ORIENTATION: GammoidOrientation = GammoidOrientation::InNeighbors;

impl RepresentedMatroid {
    pub fn new(matrix: FMatrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != matrix.cols() {
            return Err(Error::SizeMismatch(format!("{} labels for {} columns", labels.len(), matrix.cols())));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Contract(format!("duplicate ground label `{l}`")));
            }
        }
        Ok(RepresentedMatroid { matrix, labels, index, blocks: None, failure_weight: 0.0 })
    }

    pub fn matrix(&self) -> &FMatrix {
        &self.matrix
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn blocks(&self) -> Option<&[Block]> {
        self.blocks.as_deref()
    }

    pub fn id(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn ids<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.id(l.as_ref())).collect()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn rank_of(&self, ids: &[usize]) -> usize {
        self.matrix.column_rank_of_subset(ids).expect("ids are in range")
    }

    /// Independence of a set of column ids; repeated ids make the set dependent.
    pub fn is_independent_ids(&self, ids: &[usize]) -> bool {
        let mut sorted = ids.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == ids.len() && self.rank_of(ids) == ids.len()
    }

    pub fn is_independent<S: AsRef<str>>(&self, labels: &[S]) -> Result<bool> {
        Ok(self.is_independent_ids(&self.ids(labels)?))
    }

    /// Upper bound on the probability that the random choices behind this matrix
    /// misrepresent the intended matroid.
    pub fn failure_bound(&self) -> f64 {
        (self.failure_weight / (self.field().prime() - 1) as f64).min(1.0)
    }

    /// Numerator of `failure_bound` over p - 1; depends only on the instance shape.
    pub fn failure_weight(&self) -> f64 {
        self.failure_weight
    }

    pub fn with_failure_weight(mut self, w: f64) -> Self {
        self.failure_weight = w;
        self
    }

    /// Restriction to the given columns, in the given order.
    pub fn restrict(&self, ids: &[usize]) -> Result<Self> {
        let m = self.matrix.select_columns(ids)?;
        let labels = ids.iter().map(|&i| self.labels[i].clone()).collect();
        Ok(RepresentedMatroid::new(m, labels)?.with_failure_weight(self.failure_weight))
    }

    /// Uniform matroid of rank r on the labels: a Vandermonde matrix on points 1..n.
    pub fn uniform(field: Field, labels: Vec<String>, r: usize) -> Result<Self> {
        let n = labels.len();
        if field.prime() <= n as u64 {
            return Err(Error::Config(format!("prime {} must exceed ground size {n}", field.prime())));
        }
        if r > n {
            return Err(Error::Contract(format!("rank {r} exceeds ground size {n}")));
        }
        let mut m = FMatrix::zeros(field, r, n);
        for j in 0..n {
            let x = (j + 1) as u64;
            let mut v = 1;
            for i in 0..r {
                m.set(i, j, v);
                v = field.mul(v, x);
            }
        }
        RepresentedMatroid::new(m, labels)
    }

    /// Transversal matroid of the set system `sets` (row i may use the elements in
    /// `sets[i]`), with independent uniformly random nonzero entries.
    pub fn transversal_random<R: Rng + ?Sized>(field: Field, labels: Vec<String>, sets: &[Vec<usize>], rng: &mut R) -> Result<Self> {
        let n = labels.len();
        let mut m = FMatrix::zeros(field, sets.len(), n);
        for (i, set) in sets.iter().enumerate() {
            for &e in set {
                if e >= n {
                    return Err(Error::Bounds(format!("element {e} of {n}")));
                }
                m.set(i, e, field.random_nonzero(rng));
            }
        }
        let w = transversal_failure_weight(n, transversal_rank(n, sets));
        Ok(RepresentedMatroid::new(m, labels)?.with_failure_weight(w))
    }

    /// Dual matroid: [I | A] in standard form becomes [-A^T | I].
    pub fn dual(&self) -> Self {
        let f = self.field();
        let n = self.ground_size();
        let (sf, perm) = self.matrix.standard_form();
        let r = sf.rows();
        let mut d = FMatrix::zeros(f, n - r, n);
        for k in 0..n - r {
            for j in 0..r {
                d.set(k, perm[j], f.neg(sf.get(j, r + k)));
            }
            d.set(k, perm[r + k], 1);
        }
        let mut out = RepresentedMatroid::new(d, self.labels.clone()).expect("labels already unique");
        out.failure_weight = self.failure_weight;
        out
    }

    /// Strict gammoid on V(D): a set is independent iff it can be reached from `sources`
    /// by vertex-disjoint paths (zero-length paths allowed).
    pub fn gammoid<R: Rng + ?Sized>(field: Field, d: &Digraph, sources: &[usize], rng: &mut R) -> Result<Self> {
        gammoid_with_orientation(field, d, sources, GAMMOID_ORIENTATION, rng)
    }

    /// Block-diagonal sum; labels become `label(i)` for summand i.
    pub fn direct_sum(parts: &[&RepresentedMatroid]) -> Result<Self> {
        let field = parts.first().map(|p| p.field()).ok_or_else(|| Error::Contract("empty direct sum".into()))?;
        if parts.iter().any(|p| p.field() != field) {
            return Err(Error::Contract("direct sum over different fields".into()));
        }
        let rows: usize = parts.iter().map(|p| p.matrix.rows()).sum();
        let cols: usize = parts.iter().map(|p| p.ground_size()).sum();
        let mut m = FMatrix::zeros(field, rows, cols);
        let mut labels = Vec::with_capacity(cols);
        let mut blocks = Vec::with_capacity(parts.len());
        let (mut r0, mut c0) = (0, 0);
        for (i, p) in parts.iter().enumerate() {
            let (pr, pc) = (p.matrix.rows(), p.ground_size());
            for a in 0..pr {
                for b in 0..pc {
                    m.set(r0 + a, c0 + b, p.matrix.get(a, b));
                }
            }
            labels.extend(p.labels.iter().map(|l| format!("{l}({i})")));
            blocks.push(Block { cols: c0..c0 + pc, rows: r0..r0 + pr });
            r0 += pr;
            c0 += pc;
        }
        let mut out = RepresentedMatroid::new(m, labels)?;
        out.blocks = Some(blocks);
        out.failure_weight = parts.iter().map(|p| p.failure_weight).sum();
        Ok(out)
    }

    /// Truncation to rank r by a random r x rank(M) linear map.
    pub fn truncate<R: Rng + ?Sized>(&self, r: usize, rng: &mut R) -> Result<Self> {
        let f = self.field();
        let (sf, perm) = self.matrix.standard_form();
        let rank = sf.rows();
        if r > rank {
            return Err(Error::Contract(format!("truncation rank {r} exceeds rank {rank}")));
        }
        let n = self.ground_size();
        let mut base = FMatrix::zeros(f, rank, n);
        for i in 0..rank {
            for (k, &c) in perm.iter().enumerate() {
                base.set(i, c, sf.get(i, k));
            }
        }
        let mut map = FMatrix::zeros(f, r, rank);
        for i in 0..r {
            for j in 0..rank {
                map.set(i, j, f.random(rng));
            }
        }
        let m = map.mul(&base)?;
        let out = RepresentedMatroid::new(m, self.labels.clone())?;
        Ok(out.with_failure_weight(self.failure_weight + binomial_f64(n, r) * r as f64))
    }

    /// Text form: `matroid <rank> <n> <prime>`, n label lines, then the matrix rows.
    pub fn export(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "matroid {} {} {}", self.matrix.rows(), self.ground_size(), self.field().prime());
        for l in &self.labels {
            let _ = writeln!(s, "{l}");
        }
        for i in 0..self.matrix.rows() {
            let row: Vec<String> = self.matrix.row(i).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn import(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let fmt = |line: usize, msg: &str| Error::Format { line: line + 1, msg: msg.to_string() };
        let (hl, header) = lines.next().ok_or_else(|| fmt(0, "missing header"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "matroid" {
            return Err(fmt(hl, "expected `matroid <rank> <n> <prime>`"));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|_| fmt(hl, &format!("bad number `{s}`")));
        let (rows, n, p) = (num(parts[1])? as usize, num(parts[2])? as usize, num(parts[3])?);
        let field = Field::new(p).map_err(|e| fmt(hl, &e.to_string()))?;
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let (_, l) = lines.next().ok_or_else(|| fmt(hl, "missing ground labels"))?;
            labels.push(l.trim().to_string());
        }
        let mut m = FMatrix::zeros(field, rows, n);
        for i in 0..rows {
            let (ln, l) = lines.next().ok_or_else(|| fmt(hl, "missing matrix rows"))?;
            let vals: Vec<&str> = l.split_whitespace().collect();
            if vals.len() != n {
                return Err(fmt(ln, &format!("expected {n} entries, found {}", vals.len())));
            }
            for (j, v) in vals.iter().enumerate() {
                let x = v.parse::<u64>().map_err(|_| fmt(ln, &format!("bad entry `{v}`")))?;
                if x >= p {
                    return Err(fmt(ln, &format!("entry {x} not reduced modulo {p}")));
                }
                m.set(i, j, x);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(fmt(ln, "trailing content"));
        }
        RepresentedMatroid::new(m, labels)
    }
}

/// Gammoid construction with an explicit orientation, exposed for the orientation check.
pub fn gammoid_with_orientation<R: Rng + ?Sized>(
    field: Field,
    d: &Digraph,
    sources: &[usize],
    orientation: GammoidOrientation,
    rng: &mut R,
) -> Result<RepresentedMatroid> {
    let n = d.n();
    let mut is_source = vec![false; n];
    for &s in sources {
        if s >= n {
            return Err(Error::Contract(format!("source {s} is not a vertex of a {n}-vertex digraph")));
        }
        is_source[s] = true;
    }
    let sets: Vec<Vec<usize>> = (0..n)
        .filter(|&v| !is_source[v])
        .map(|v| {
            let nb = match orientation {
                GammoidOrientation::InNeighbors => d.in_neighbors(v),
                GammoidOrientation::OutNeighbors => d.out_neighbors(v),
            };
            std::iter::once(v).chain(nb.iter().copied()).collect()
        })
        .collect();
    let labels: Vec<String> = d.labels().to_vec();
    for attempt in 0..=MAX_RETRIES {
        let t = RepresentedMatroid::transversal_random(field, labels.clone(), &sets, rng)?;
        // every set contains its own vertex, so the presentation has full rank
        if t.rank() == sets.len() {
            if attempt > 0 {
                log::warn!("gammoid representation redrawn {attempt} time(s)");
            }
            return Ok(t.dual());
        }
    }
    Err(Error::Degenerate(format!("transversal presentation rank deficient after {MAX_RETRIES} retries")))
}
