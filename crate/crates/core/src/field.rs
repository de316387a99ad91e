//! Arithmetic and dense linear algebra over a prime field F_b.
//!
//! Matrices store digits `0..b` as `u32` in row-major order. Elimination uses
//! the first nonzero entry in a column as pivot; in exact arithmetic no pivot
//! strategy is needed. For `b = 2` the rank is computed on bit-packed rows,
//! which must agree with the generic path (see tests).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported modulus.
pub const MAX_MODULUS: u32 = 1 << 15;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_modulus(b: u64) -> Result<u32> {
    if b <= MAX_MODULUS as u64 && is_prime(b) {
        Ok(b as u32)
    } else {
        Err(Error::NotPrime(b))
    }
}

#[inline]
pub(crate) fn add_mod(x: u32, y: u32, b: u32) -> u32 {
    let s = x + y;
    if s >= b {
        s - b
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(x: u32, y: u32, b: u32) -> u32 {
    if x >= y {
        x - y
    } else {
        x + b - y
    }
}

#[inline]
pub(crate) fn mul_mod(x: u32, y: u32, b: u32) -> u32 {
    ((x as u64 * y as u64) % b as u64) as u32
}

/// Inverse by the extended Euclidean algorithm. `x` must be nonzero mod `b`.
pub(crate) fn inv_mod(x: u32, b: u32) -> u32 {
    let (mut r0, mut r1) = (b as i64, (x % b) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "{x} is not invertible mod {b}");
    t0.rem_euclid(b as i64) as u32
}

pub(crate) fn pow_mod(mut x: u32, mut e: u64, b: u32) -> u32 {
    let mut acc = 1 % b;
    x %= b;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, x, b);
        }
        x = mul_mod(x, x, b);
        e >>= 1;
    }
    acc
}

/// An element of F_b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    /// Reduces `value` mod `modulus`; fails if the modulus is not a supported prime.
    pub fn new(value: u64, modulus: u64) -> Result<Self> {
        let b = check_modulus(modulus)?;
        Ok(Self {
            value: (value % b as u64) as u32,
            modulus: b,
        })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Option<Self> {
        (self.value != 0).then(|| Self {
            value: inv_mod(self.value, self.modulus),
            ..self
        })
    }

    pub fn pow(self, e: u64) -> Self {
        Self {
            value: pow_mod(self.value, e, self.modulus),
            ..self
        }
    }

    fn same_field(self, other: Self) {
        assert_eq!(self.modulus, other.modulus, "mixing elements of different fields");
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.same_field(rhs);
        Self {
            value: add_mod(self.value, rhs.value, self.modulus),
            ..self
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.same_field(rhs);
        Self {
            value: sub_mod(self.value, rhs.value, self.modulus),
            ..self
        }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(rhs);
        Self {
            value: mul_mod(self.value, rhs.value, self.modulus),
            ..self
        }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: sub_mod(0, self.value, self.modulus),
            ..self
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Classification of the solution set of `A n = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Inconsistent,
    Unique(Vec<u32>),
    /// Consistent with `nullity >= 1` free variables; `b^nullity` solutions.
    Affine {
        representative: Vec<u32>,
        nullity: usize,
    },
}

impl SolveOutcome {
    pub fn is_consistent(&self) -> bool {
        !matches!(self, SolveOutcome::Inconsistent)
    }

    pub fn representative(&self) -> Option<&[u32]> {
        match self {
            SolveOutcome::Inconsistent => None,
            SolveOutcome::Unique(v) => Some(v),
            SolveOutcome::Affine { representative, .. } => Some(representative),
        }
    }

    pub fn nullity(&self) -> usize {
        match self {
            SolveOutcome::Affine { nullity, .. } => *nullity,
            _ => 0,
        }
    }

    /// Number of solutions over F_b, saturating at `u128::MAX`.
    pub fn solution_count(&self, b: u32) -> u128 {
        match self {
            SolveOutcome::Inconsistent => 0,
            _ => (0..self.nullity()).fold(1u128, |acc, _| acc.saturating_mul(b as u128)),
        }
    }
}

/// Dense matrix over F_b.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    data: Vec<u32>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix(b={}, {}x{})", self.modulus, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self> {
        let modulus = check_modulus(modulus)?;
        Ok(Self {
            rows,
            cols,
            modulus,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(modulus: u64, n: usize) -> Result<Self> {
        let mut m = Self::zeros(modulus, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        Ok(m)
    }

    /// Ones on the anti-diagonal.
    pub fn anti_identity(modulus: u64, n: usize) -> Result<Self> {
        let mut m = Self::zeros(modulus, n, n)?;
        for i in 0..n {
            m.data[i * n + (n - 1 - i)] = 1;
        }
        Ok(m)
    }

    /// Entries are reduced mod `modulus`.
    pub fn from_fn(modulus: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Result<Self> {
        let mut m = Self::zeros(modulus, rows, cols)?;
        let b = m.modulus as u64;
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = (f(i, j) % b) as u32;
            }
        }
        Ok(m)
    }

    /// Rows must be equally long with entries in `0..modulus`.
    pub fn from_rows(modulus: u64, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(modulus, rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::dim(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= m.modulus {
                    return Err(Error::OutOfRange(format!(
                        "entry {v} at ({i},{j}) not in [0,{})",
                        m.modulus
                    )));
                }
                m.data[i * cols + j] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self {
            rows: self.cols,
            cols: self.rows,
            modulus: self.modulus,
            data: vec![0; self.data.len()],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Schoolbook product `self * rhs` over F_b.
    pub fn mul(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch(self.modulus, rhs.modulus));
        }
        if self.cols != rhs.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let b = self.modulus as u64;
        let mut out = Self {
            rows: self.rows,
            cols: rhs.cols,
            modulus: self.modulus,
            data: vec![0; self.rows * rhs.cols],
        };
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let x = self.get(i, k) as u64;
                if x == 0 {
                    continue;
                }
                for (a, &y) in acc.iter_mut().zip(rhs.row(k)) {
                    *a = (*a + x * y as u64) % b;
                }
            }
            for (j, a) in acc.iter().enumerate() {
                out.data[i * rhs.cols + j] = *a as u32;
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector of digits.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.cols);
        let b = self.modulus as u64;
        (0..self.rows)
            .map(|i| {
                let s = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |s, (&x, &y)| s + x as u64 * y as u64);
                (s % b) as u32
            })
            .collect()
    }

    /// The first `k` rows; rows past the end are zero rows.
    pub fn top_rows(&self, k: usize) -> FieldMatrix {
        let mut data = vec![0; k * self.cols];
        let copied = k.min(self.rows) * self.cols;
        data[..copied].copy_from_slice(&self.data[..copied]);
        Self {
            rows: k,
            cols: self.cols,
            modulus: self.modulus,
            data,
        }
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[FieldMatrix]) -> Result<FieldMatrix> {
        let first = blocks.first().ok_or_else(|| Error::invalid("vstack of no blocks"))?;
        let mut out = Self {
            rows: 0,
            cols: first.cols,
            modulus: first.modulus,
            data: Vec::new(),
        };
        for blk in blocks {
            if blk.modulus != out.modulus {
                return Err(Error::ModulusMismatch(out.modulus, blk.modulus));
            }
            if blk.cols != out.cols {
                return Err(Error::dim(format!("vstack: {} vs {} columns", out.cols, blk.cols)));
            }
            out.rows += blk.rows;
            out.data.extend_from_slice(&blk.data);
        }
        Ok(out)
    }

    /// Reduced row echelon form in place; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let b = self.modulus;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), b);
            for j in c..self.cols {
                let v = self.get(r, j);
                self.data[r * self.cols + j] = mul_mod(v, inv, b);
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i == r || f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = sub_mod(self.get(i, j), mul_mod(f, self.get(r, j), b), b);
                    self.data[i * self.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Row rank over F_b.
    pub fn rank(&self) -> usize {
        if self.modulus == 2 && self.cols <= 128 {
            self.rank_gf2_packed()
        } else {
            self.rank_generic()
        }
    }

    /// Rank by plain Gaussian elimination, for any modulus.
    pub fn rank_generic(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    fn rank_gf2_packed(&self) -> usize {
        let mut rows: Vec<u128> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .fold(0u128, |acc, (j, &v)| acc | ((v as u128) << j))
            })
            .collect();
        let mut rank = 0;
        for c in 0..self.cols {
            let bit = 1u128 << c;
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(p, rank);
            let pivot = rows[rank];
            for row in rows.iter_mut().skip(rank + 1) {
                if *row & bit != 0 {
                    *row ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Classifies the solutions of `self * n = rhs`.
    pub fn solve_affine(&self, rhs: &[u32]) -> Result<SolveOutcome> {
        if rhs.len() != self.rows {
            return Err(Error::dim(format!(
                "rhs has {} entries, matrix has {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let b = self.modulus;
        let mut aug = FieldMatrix::zeros(b as u64, self.rows, self.cols + 1)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j);
            }
            aug.data[i * (self.cols + 1) + self.cols] = rhs[i] % b;
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(SolveOutcome::Inconsistent);
        }
        let mut x = vec![0u32; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        let nullity = self.cols - pivots.len();
        Ok(if nullity == 0 {
            SolveOutcome::Unique(x)
        } else {
            SolveOutcome::Affine {
                representative: x,
                nullity,
            }
        })
    }

    /// Basis of `{ r : r^T A = 0 }`; it has `rows - rank` vectors.
    pub fn left_nullspace(&self) -> Vec<Vec<u32>> {
        let b = self.modulus;
        let mut t = self.transpose();
        let pivots = t.rref_in_place();
        let n = t.cols; // = self.rows
        let mut is_pivot = vec![false; n];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        (0..n)
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut v = vec![0u32; n];
                v[free] = 1;
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = sub_mod(0, t.get(r, free), b);
                }
                v
            })
            .collect()
    }

    /// Parses one or more matrix blocks: a header line `b rows cols` followed
    /// by `rows` lines of `cols` digits. Blank lines and `#` comments are skipped.
    pub fn parse_blocks(text: &str) -> Result<Vec<FieldMatrix>> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut out = Vec::new();
        while let Some((lineno, header)) = lines.next() {
            let h = parse_numbers(lineno, header)?;
            let [b, rows, cols] = h[..] else {
                return Err(Error::parse(lineno, "expected header `b rows cols`"));
            };
            let mut data = Vec::with_capacity(rows as usize);
            for _ in 0..rows {
                let (ln, l) = lines.next().ok_or_else(|| Error::parse(lineno, "matrix ends early"))?;
                let row = parse_numbers(ln, l)?;
                if row.len() != cols as usize {
                    return Err(Error::parse(ln, format!("expected {cols} digits, found {}", row.len())));
                }
                data.push(row.into_iter().map(|v| v as u32).collect::<Vec<_>>());
            }
            let m = if rows == 0 {
                FieldMatrix::zeros(b, 0, cols as usize)?
            } else {
                FieldMatrix::from_rows(b, &data).map_err(|e| Error::parse(lineno, e.to_string()))?
            };
            out.push(m);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.modulus, self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::parse(line, format!("not a non-negative integer: {t:?}")))
        })
        .collect()
}
