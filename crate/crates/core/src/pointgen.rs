//! Point generation for digital nets and digitally shifted digital nets.
//!
//! A coordinate `x = x_1/b + ... + x_m/b^m` is stored as the integer
//! `x * b^m`; digit `x_1` is the most significant. Nothing here touches
//! floating point.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::construct::NetSpec;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::{add_mod, check_modulus};

/// Largest net `generate_points` will materialise.
pub const MAX_MATERIALISED: u64 = 1 << 24;

/// Digits `x_1..x_m` (most significant first) of `value = x * b^m`.
pub fn to_digits(mut value: u64, b: u32, m: usize) -> Vec<u32> {
    let mut d = vec![0u32; m];
    for k in (0..m).rev() {
        d[k] = (value % b as u64) as u32;
        value /= b as u64;
    }
    d
}

/// Inverse of [`to_digits`].
pub fn from_digits(digits: &[u32], b: u32) -> u64 {
    digits.iter().fold(0u64, |acc, &x| acc * b as u64 + x as u64)
}

/// Base-`b` digits `n_0, n_1, ...` (least significant first) of an index.
pub fn index_digits(mut n: u64, b: u32, m: usize) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = (n % b as u64) as u32;
            n /= b as u64;
            d
        })
        .collect()
}

/// A point set at resolution `b^-m`, one row per point in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetPoints {
    pub b: u32,
    pub m: usize,
    pub d: usize,
    coords: Vec<u64>,
    pub label: String,
}

impl NetPoints {
    /// Validates that every coordinate lies in `[0, b^m)`.
    pub fn new(b: u64, m: usize, d: usize, coords: Vec<u64>, label: impl Into<String>) -> Result<Self> {
        let b = check_modulus(b)?;
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if coords.len() % d != 0 {
            return Err(Error::dim(format!(
                "{} coordinates do not split into rows of {d}",
                coords.len()
            )));
        }
        let scale = (b as u64)
            .checked_pow(m as u32)
            .ok_or_else(|| Error::TooLarge(format!("b^m = {b}^{m} overflows")))?;
        if let Some(bad) = coords.iter().find(|&&x| x >= scale) {
            return Err(Error::OutOfRange(format!("coordinate {bad} not below b^m = {scale}")));
        }
        Ok(Self {
            b,
            m,
            d,
            coords,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `b^m`, the common denominator of all coordinates.
    pub fn scale(&self) -> u64 {
        (self.b as u64).pow(self.m as u32)
    }

    pub fn point(&self, n: usize) -> &[u64] {
        &self.coords[n * self.d..(n + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[u64]> {
        self.coords.chunks_exact(self.d)
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// The first `count` points.
    pub fn prefix(&self, count: usize) -> Result<NetPoints> {
        if count > self.len() {
            return Err(Error::OutOfRange(format!(
                "prefix {count} longer than {} points",
                self.len()
            )));
        }
        Ok(Self {
            coords: self.coords[..count * self.d].to_vec(),
            ..self.clone()
        })
    }

    /// Point file: header `b m d N`, then one line of `d` integers per point.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {} {}\n", self.b, self.m, self.d, self.len());
        for p in self.points() {
            let row: Vec<String> = p.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn parse(text: &str) -> Result<NetPoints> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty point file"))?;
        let h = parse_u64s(ln, header)?;
        let [b, m, d, n] = h[..] else {
            return Err(Error::parse(ln, "expected header `b m d N`"));
        };
        let mut coords = Vec::with_capacity((n * d) as usize);
        for _ in 0..n {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| Error::parse(ln, format!("expected {n} points")))?;
            let row = parse_u64s(ln, l)?;
            if row.len() != d as usize {
                return Err(Error::parse(
                    ln,
                    format!("expected {d} coordinates, found {}", row.len()),
                ));
            }
            coords.extend(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing data after the declared points"));
        }
        NetPoints::new(b, m as usize, d as usize, coords, "file")
    }
}

fn parse_u64s(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::parse(line, format!("not a non-negative integer: {t:?}")))
        })
        .collect()
}

/// A digital shift: one digit vector `delta_{j,1..m}` per coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftVector {
    pub b: u32,
    pub m: usize,
    pub digits: Vec<Vec<u32>>,
}

impl ShiftVector {
    pub fn zero(b: u32, m: usize, d: usize) -> Self {
        Self {
            b,
            m,
            digits: vec![vec![0; m]; d],
        }
    }

    /// From integer shifts `delta_j * b^m`.
    pub fn from_values(b: u64, m: usize, values: &[u64]) -> Result<Self> {
        let bb = check_modulus(b)?;
        let scale = b
            .checked_pow(m as u32)
            .ok_or_else(|| Error::TooLarge("b^m overflows".into()))?;
        if let Some(v) = values.iter().find(|&&v| v >= scale) {
            return Err(Error::OutOfRange(format!("shift {v} not below b^m = {scale}")));
        }
        Ok(Self {
            b: bb,
            m,
            digits: values.iter().map(|&v| to_digits(v, bb, m)).collect(),
        })
    }

    pub fn random<R: Rng + ?Sized>(b: u32, m: usize, d: usize, rng: &mut R) -> Self {
        Self {
            b,
            m,
            digits: (0..d)
                .map(|_| (0..m).map(|_| rng.random_range(0..b)).collect())
                .collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.digits.len()
    }

    pub fn values(&self) -> Vec<u64> {
        self.digits.iter().map(|d| from_digits(d, self.b)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().flatten().all(|&x| x == 0)
    }

    /// Digit `k` (1-based) of coordinate `j`; zero beyond `m`.
    pub fn digit(&self, j: usize, k: usize) -> u32 {
        self.digits[j].get(k - 1).copied().unwrap_or(0)
    }
}

/// Digitwise sum of two scaled coordinates.
pub fn digit_add(x: u64, y: u64, b: u32, m: usize) -> u64 {
    if b == 2 {
        return x ^ y;
    }
    let (mut x, mut y) = (x, y);
    let mut out = 0u64;
    let mut place = 1u64;
    for _ in 0..m {
        let s = add_mod((x % b as u64) as u32, (y % b as u64) as u32, b);
        out += s as u64 * place;
        place *= b as u64;
        x /= b as u64;
        y /= b as u64;
    }
    out
}

/// Per-coordinate column contributions: column `l` of `F_j` as a scaled integer.
fn column_values(spec: &NetSpec) -> Vec<Vec<u64>> {
    spec.matrices
        .iter()
        .map(|f| {
            (0..spec.m)
                .map(|l| {
                    let col: Vec<u32> = (0..spec.m).map(|k| f.get(k, l)).collect();
                    from_digits(&col, spec.b)
                })
                .collect()
        })
        .collect()
}

fn coordinate(cols: &[u64], n: u64, b: u32, m: usize) -> u64 {
    if b == 2 {
        let mut acc = 0;
        let mut bits = n;
        let mut l = 0;
        while bits != 0 {
            if bits & 1 == 1 {
                acc ^= cols[l];
            }
            bits >>= 1;
            l += 1;
        }
        return acc;
    }
    let mut acc = 0u64;
    let mut rest = n;
    for &col in cols {
        let digit = (rest % b as u64) as u32;
        rest /= b as u64;
        for _ in 0..digit {
            acc = digit_add(acc, col, b, m);
        }
    }
    acc
}

/// First `count` points (default all `b^m`) of the net, in index order.
pub fn generate_points(spec: &NetSpec, count: Option<u64>, exec: Execution) -> Result<NetPoints> {
    let total = spec
        .num_points()
        .filter(|&n| n <= MAX_MATERIALISED)
        .ok_or_else(|| Error::TooLarge(format!("{}^{} points exceed 2^24; use point_of_index", spec.b, spec.m)))?;
    let count = count.unwrap_or(total);
    if count > total {
        return Err(Error::OutOfRange(format!("count {count} exceeds b^m = {total}")));
    }
    let cols = column_values(spec);
    let (b, m, d) = (spec.b, spec.m, spec.d());
    let rows = exec.map_collect(0..count as usize, |n| {
        cols.iter().map(|c| coordinate(c, n as u64, b, m)).collect::<Vec<u64>>()
    });
    NetPoints::new(b as u64, m, d, rows.into_iter().flatten().collect(), spec.label.clone())
}

/// Point `n` as scaled integers, without generating the rest of the net.
pub fn point_of_index(spec: &NetSpec, n: u64) -> Result<Vec<u64>> {
    let total = spec.num_points().ok_or_else(|| {
        Error::TooLarge(format!(
            "{}^{} does not fit in 64 bits; use point_digits",
            spec.b, spec.m
        ))
    })?;
    if n >= total {
        return Err(Error::OutOfRange(format!("index {n} not below b^m = {total}")));
    }
    let digits = index_digits(n, spec.b, spec.m);
    Ok(spec
        .matrices
        .iter()
        .map(|f| from_digits(&f.mul_vec(&digits), spec.b))
        .collect())
}

/// Digit vectors `F_j n` for an arbitrarily large index `n < b^m`.
pub fn point_digits(spec: &NetSpec, n: &BigUint) -> Result<Vec<Vec<u32>>> {
    let bb = BigUint::from(spec.b);
    let mut rest = n.clone();
    let mut digits = Vec::with_capacity(spec.m);
    for _ in 0..spec.m {
        digits.push((&rest % &bb).to_u32().expect("digit below b"));
        rest /= &bb;
    }
    if !rest.is_zero() {
        return Err(Error::OutOfRange(format!("index {n} not below {}^{}", spec.b, spec.m)));
    }
    Ok(spec.matrices.iter().map(|f| f.mul_vec(&digits)).collect())
}

/// `x_n (+) delta` for every point.
pub fn digital_shift(points: &NetPoints, delta: &ShiftVector) -> Result<NetPoints> {
    if delta.b != points.b || delta.m != points.m || delta.d() != points.d {
        return Err(Error::dim(format!(
            "shift is (b={}, m={}, d={}), points are (b={}, m={}, d={})",
            delta.b,
            delta.m,
            delta.d(),
            points.b,
            points.m,
            points.d
        )));
    }
    let shifts = delta.values();
    let coords = points
        .coords
        .chunks_exact(points.d)
        .flat_map(|p| {
            p.iter()
                .zip(&shifts)
                .map(|(&x, &s)| digit_add(x, s, points.b, points.m))
        })
        .collect();
    Ok(NetPoints {
        coords,
        label: format!("{}+shift", points.label),
        ..points.clone()
    })
}
