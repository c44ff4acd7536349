//! Representative families of s-element independent sets, computed by greedy linear
//! independence of exterior-product (or, for layered families, tensor-product) vectors.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactfield::Field;
use crate::matroid::RepresentedMatroid;

/// Labelled s-tuples of ground elements. Dependent tuples are dropped on construction.
#[derive(Debug, Clone)]
pub struct TupleFamily {
    s: usize,
    layered: bool,
    tuples: Vec<(String, Vec<usize>)>,
    dropped: Vec<String>,
}

impl TupleFamily {
    /// `layered` families take element i of every tuple from block i of a direct sum.
    pub fn new<S: AsRef<str>>(m: &RepresentedMatroid, tuples: &[(String, Vec<S>)], layered: bool) -> Result<Self> {
        let resolved: Vec<(String, Vec<usize>)> =
            tuples.iter().map(|(l, xs)| Ok((l.clone(), m.ids(xs)?))).collect::<Result<_>>()?;
        Self::from_ids(m, resolved, layered)
    }

    pub fn from_ids(m: &RepresentedMatroid, tuples: Vec<(String, Vec<usize>)>, layered: bool) -> Result<Self> {
        let s = tuples.first().map_or(0, |t| t.1.len());
        if let Some((l, _)) = tuples.iter().find(|t| t.1.len() != s) {
            return Err(Error::Contract(format!("tuple `{l}` does not have {s} elements")));
        }
        if layered {
            let blocks = m.blocks().ok_or_else(|| Error::Contract("layered family needs a direct sum".into()))?;
            if !tuples.is_empty() && blocks.len() != s {
                return Err(Error::Contract(format!("{} blocks for tuples of size {s}", blocks.len())));
            }
            for (l, xs) in &tuples {
                if xs.iter().zip(blocks).any(|(x, b)| !b.cols.contains(x)) {
                    return Err(Error::Contract(format!("tuple `{l}` is not layered")));
                }
            }
        }
        let mut kept = Vec::with_capacity(tuples.len());
        let mut dropped = Vec::new();
        for (l, xs) in tuples {
            if m.is_independent_ids(&xs) {
                kept.push((l, xs));
            } else {
                log::warn!("dropping dependent tuple `{l}`");
                dropped.push(l);
            }
        }
        Ok(TupleFamily { s, layered, tuples: kept, dropped })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn is_layered(&self) -> bool {
        self.layered
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[(String, Vec<usize>)] {
        &self.tuples
    }

    pub fn dropped(&self) -> &[String] {
        &self.dropped
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentativeFamily {
    /// Labels of the kept tuples, in input order.
    pub kept: Vec<String>,
    /// Positions of the kept tuples in the family.
    pub positions: Vec<usize>,
    /// The family is `r`-representative with r = rank - s.
    pub r: usize,
    pub vector_dim: usize,
}

/// The s x s minors of the tuple's columns over all s-row subsets in lexicographic order.
pub fn wedge_vector(m: &RepresentedMatroid, ids: &[usize]) -> Result<Vec<u64>> {
    let mat = m.matrix();
    (0..mat.rows()).combinations(ids.len()).map(|rows| mat.minor(&rows, ids)).collect()
}

/// Outer product of the per-block column vectors of a layered tuple (blocks ascending,
/// rows ascending within each block). Equals the wedge vector with its structural
/// zeros removed.
pub fn tensor_vector(m: &RepresentedMatroid, ids: &[usize]) -> Result<Vec<u64>> {
    let blocks = m.blocks().ok_or_else(|| Error::Contract("tensor vector needs a direct sum".into()))?;
    if blocks.len() != ids.len() {
        return Err(Error::Contract(format!("{} blocks for a {}-tuple", blocks.len(), ids.len())));
    }
    let f = m.field();
    let mat = m.matrix();
    let mut out = vec![1u64];
    for (b, &x) in blocks.iter().zip(ids) {
        if !b.cols.contains(&x) {
            return Err(Error::Contract(format!("element {x} outside its block")));
        }
        let col: Vec<u64> = b.rows.clone().map(|i| mat.get(i, x)).collect();
        let mut next = Vec::with_capacity(out.len() * col.len());
        for &a in &out {
            next.extend(col.iter().map(|&c| f.mul(a, c)));
        }
        out = next;
    }
    Ok(out)
}

/// Incremental row echelon basis; later vectors vanish on earlier pivots.
struct Echelon {
    field: Field,
    basis: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn new(field: Field) -> Self {
        Echelon { field, basis: Vec::new() }
    }

    /// Adds `v` if it is independent of the current basis.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let f = self.field;
        for (p, b) in &self.basis {
            let c = v[*p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(b) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[p]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        self.basis.push((p, v));
        true
    }
}

/// Greedy basis of the tuple vectors in input order.
pub fn representative_family(m: &RepresentedMatroid, fam: &TupleFamily) -> Result<RepresentativeFamily> {
    let rank = m.rank();
    let s = fam.s();
    let vector_dim = if fam.is_layered() {
        m.blocks().map_or(0, |b| b.iter().map(|x| x.rows.len()).product())
    } else {
        crate::matroid::binomial_f64(m.matrix().rows(), s) as usize
    };
    let mut ech = Echelon::new(m.field());
    let mut kept = Vec::new();
    let mut positions = Vec::new();
    for (i, (label, ids)) in fam.tuples().iter().enumerate() {
        let v = if fam.is_layered() { tensor_vector(m, ids)? } else { wedge_vector(m, ids)? };
        if ech.insert(v) {
            kept.push(label.clone());
            positions.push(i);
        }
    }
    Ok(RepresentativeFamily { kept, positions, r: rank.saturating_sub(s), vector_dim })
}

/// Exhaustive check of the representative property over every Y with |Y| <= r.
pub fn verify_representative(m: &RepresentedMatroid, fam: &TupleFamily, rep: &RepresentativeFamily) -> Result<bool> {
    let n = m.ground_size();
    if n > 14 || rep.r > 6 {
        return Err(Error::Budget(format!("verification needs ground <= 14 and r <= 6 (got {n}, {})", rep.r)));
    }
    let kept: Vec<&Vec<usize>> = rep.positions.iter().map(|&i| &fam.tuples()[i].1).collect();
    let fits = |x: &Vec<usize>, y: &[usize]| {
        if x.iter().any(|e| y.contains(e)) {
            return false;
        }
        let mut all = x.clone();
        all.extend_from_slice(y);
        m.is_independent_ids(&all)
    };
    for size in 0..=rep.r {
        for y in (0..n).combinations(size) {
            let any = fam.tuples().iter().any(|(_, x)| fits(x, &y));
            if any && !kept.iter().any(|x| fits(x, &y)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::FMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f() -> Field {
        Field::mersenne61()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn wedge_of_unit_vectors() {
        let m = RepresentedMatroid::new(FMatrix::identity(f(), 3), labels(3)).unwrap();
        assert_eq!(wedge_vector(&m, &[0, 1]).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn tensor_needs_layers() {
        let m = RepresentedMatroid::uniform(f(), labels(3), 2).unwrap();
        assert!(matches!(tensor_vector(&m, &[0, 1]), Err(Error::Contract(_))));
        let fam = vec![("a".to_string(), vec!["0", "1"])];
        assert!(TupleFamily::new(&m, &fam, true).is_err());
    }

    #[test]
    fn dependent_tuples_dropped() {
        let m = RepresentedMatroid::uniform(f(), labels(3), 1).unwrap();
        let fam = TupleFamily::new(&m, &[("a".to_string(), vec!["0", "1"])], false).unwrap();
        assert!(fam.is_empty());
        assert_eq!(fam.dropped(), &["a".to_string()]);
    }

    #[test]
    fn uniform_pairs_keep_at_most_binomial() {
        let m = RepresentedMatroid::uniform(f(), labels(6), 4).unwrap();
        let tuples: Vec<(String, Vec<usize>)> =
            (0..6).combinations(2).map(|p| (format!("{}{}", p[0], p[1]), p)).collect();
        let fam = TupleFamily::from_ids(&m, tuples, false).unwrap();
        let rep = representative_family(&m, &fam).unwrap();
        assert_eq!(rep.kept.len(), 6);
        assert_eq!(rep.r, 2);
        assert!(verify_representative(&m, &fam, &rep).unwrap());
    }

    fn random_family(rng: &mut ChaCha8Rng) -> (RepresentedMatroid, TupleFamily) {
        let n = rng.gen_range(3..=9);
        let rank = rng.gen_range(1..=5.min(n));
        let rows: Vec<Vec<i64>> = (0..rank).map(|_| (0..n).map(|_| rng.gen_range(-1..=1)).collect()).collect();
        let m = RepresentedMatroid::new(FMatrix::from_rows(f(), &rows).unwrap(), labels(n)).unwrap();
        let s = rng.gen_range(1..=3.min(n));
        let tuples: Vec<(String, Vec<usize>)> = (0..n)
            .combinations(s)
            .filter(|_| rng.gen_bool(0.5))
            .enumerate()
            .map(|(i, t)| (format!("t{i}"), t))
            .collect();
        let fam = TupleFamily::from_ids(&m, tuples, false).unwrap();
        (m, fam)
    }

    #[test]
    fn greedy_family_is_representative() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let (m, fam) = random_family(&mut rng);
            if fam.is_empty() {
                continue;
            }
            let rep = representative_family(&m, &fam).unwrap();
            assert!(rep.kept.len() as f64 <= crate::matroid::binomial_f64(m.matrix().rows(), fam.s()));
            if m.rank() == m.matrix().rows() {
                assert!(verify_representative(&m, &fam, &rep).unwrap());
            }
        }
    }

    #[test]
    fn idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..50 {
            let (m, fam) = random_family(&mut rng);
            let rep = representative_family(&m, &fam).unwrap();
            let sub: Vec<(String, Vec<usize>)> = rep.positions.iter().map(|&i| fam.tuples()[i].clone()).collect();
            let fam2 = TupleFamily::from_ids(&m, sub, false).unwrap();
            let rep2 = representative_family(&m, &fam2).unwrap();
            assert_eq!(rep2.kept, rep.kept);
        }
    }

    #[test]
    fn tensor_and_wedge_agree_on_layered_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let a = RepresentedMatroid::uniform(f(), labels(5), rng.gen_range(1..=3)).unwrap();
            let rows: Vec<Vec<i64>> = (0..2).map(|_| (0..4).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let b = RepresentedMatroid::new(FMatrix::from_rows(f(), &rows).unwrap(), labels(4)).unwrap();
            let sum = RepresentedMatroid::direct_sum(&[&a, &b]).unwrap();
            let tuples: Vec<(String, Vec<usize>)> = (0..5)
                .flat_map(|x| (5..9).map(move |y| vec![x, y]))
                .filter(|_| rng.gen_bool(0.6))
                .enumerate()
                .map(|(i, t)| (format!("t{i}"), t))
                .collect();
            let layered = TupleFamily::from_ids(&sum, tuples.clone(), true).unwrap();
            let plain = TupleFamily::from_ids(&sum, tuples, false).unwrap();
            let r1 = representative_family(&sum, &layered).unwrap();
            let r2 = representative_family(&sum, &plain).unwrap();
            assert_eq!(r1.kept, r2.kept);
            assert!(r1.kept.len() <= r1.vector_dim);
        }
    }
}
