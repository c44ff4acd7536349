//! Arithmetic in a prime field GF(p) with p < 2^63, and dense matrices over it.

use crate::error::{Error, Result};
use rand::Rng;

pub const MERSENNE_61: u64 = (1 << 61) - 1;
/// Largest prime below 2^63; the ceiling for automatically chosen primes.
pub const MAX_PRIME: u64 = 9_223_372_036_854_775_783;

/// Prime and RNG seed shared by a pipeline run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldConfig {
    pub prime: u64,
    pub seed: u64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { prime: MERSENNE_61, seed: 0 }
    }
}

impl FieldConfig {
    pub fn new(prime: u64, seed: u64) -> Result<Self> {
        Field::new(prime)?;
        Ok(FieldConfig { prime, seed })
    }

    pub fn field(&self) -> Field {
        Field { p: self.prime }
    }

    /// Entry check for pipelines over `n` ground elements: p > max(n^3, 2^40).
    pub fn check_ground_size(&self, n: usize) -> Result<()> {
        let need = (n as u128).pow(3).max(1u128 << 40);
        if (self.prime as u128) <= need {
            return Err(Error::Config(format!(
                "prime {} too small for ground size {} (need > {})",
                self.prime, n, need
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    p: u64,
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(Error::Config(format!("{p} is not a prime below 2^63")));
        }
        Ok(Field { p })
    }

    pub fn mersenne61() -> Self {
        Field { p: MERSENNE_61 }
    }

    #[inline]
    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let r = (x as i128).rem_euclid(self.p as i128);
        r as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let x = a as u128 * b as u128;
        if self.p == MERSENNE_61 {
            let lo = (x as u64) & MERSENNE_61;
            let hi = (x >> 61) as u64;
            let s = lo + hi;
            if s >= MERSENNE_61 {
                s - MERSENNE_61
            } else {
                s
            }
        } else {
            (x % self.p as u128) as u64
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime >= n, or None above `MAX_PRIME`.
pub fn next_prime(n: u64) -> Option<u64> {
    let mut c = n.max(2);
    while c <= MAX_PRIME {
        if is_prime(c) {
            return Some(c);
        }
        c += 1;
    }
    None
}

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from rows of integers, reducing each entry modulo p.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::SizeMismatch(format!("row {i} has {} entries, expected {c}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(x));
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Result<FMatrix> {
        self.check_cols(cols)?;
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out.set(i, k, self.get(i, j));
            }
        }
        Ok(out)
    }

    fn check_cols(&self, cols: &[usize]) -> Result<()> {
        match cols.iter().find(|&&j| j >= self.cols) {
            Some(j) => Err(Error::Bounds(format!("column {j} of {}", self.cols))),
            None => Ok(()),
        }
    }

    /// Row-reduces in place to reduced row echelon form and returns the pivot columns.
    /// The pivot in each column is the first nonzero entry at or below the current row.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn column_rank_of_subset(&self, cols: &[usize]) -> Result<usize> {
        Ok(self.select_columns(cols)?.rank())
    }

    /// Determinant of the square submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<u64> {
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch(format!("{} rows vs {} columns", rows.len(), cols.len())));
        }
        if let Some(i) = rows.iter().find(|&&i| i >= self.rows) {
            return Err(Error::Bounds(format!("row {i} of {}", self.rows)));
        }
        self.check_cols(cols)?;
        let n = rows.len();
        let mut a: Vec<u64> = Vec::with_capacity(n * n);
        for &i in rows {
            for &j in cols {
                a.push(self.get(i, j));
            }
        }
        Ok(determinant(self.field, &mut a, n))
    }

    /// Returns `(R, perm)` where R has `rank` rows and equals `[I | A]`, and column k of R
    /// corresponds to column `perm[k]` of `self`.
    pub fn standard_form(&self) -> (FMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let r = pivots.len();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut perm = pivots.clone();
        perm.extend((0..self.cols).filter(|&c| !is_pivot[c]));
        let mut out = Self::zeros(self.field, r, self.cols);
        for i in 0..r {
            for (k, &c) in perm.iter().enumerate() {
                out.set(i, k, m.get(i, c));
            }
        }
        (out, perm)
    }
}

/// Determinant of an n×n row-major matrix; destroys `a`.
pub fn determinant(f: Field, a: &mut [u64], n: usize) -> u64 {
    let mut det = 1u64;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| a[i * n + c] != 0) else {
            return 0;
        };
        if pr != c {
            for j in 0..n {
                a.swap(pr * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let pivot = a[c * n + c];
        det = f.mul(det, pivot);
        let inv = f.inv(pivot);
        for i in c + 1..n {
            let factor = f.mul(a[i * n + c], inv);
            if factor == 0 {
                continue;
            }
            for j in c..n {
                a[i * n + j] = f.sub(a[i * n + j], f.mul(factor, a[c * n + j]));
            }
        }
    }
    det
}
