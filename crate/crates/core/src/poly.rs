//! Univariate polynomials over F_b, Laurent expansions of rational functions
//! in `x^{-1}`, polynomial continued fractions and the Fibonacci polynomials
//! over F_2.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{add_mod, check_modulus, inv_mod, mul_mod, sub_mod};

/// Polynomial over F_b; `coeffs[i]` is the coefficient of `x^i`.
///
/// Always trimmed, so the zero polynomial has no coefficients and equality is
/// structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFb {
    coeffs: Vec<u32>,
    modulus: u32,
}

impl fmt::Debug for PolyFb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFb[{}]({})", self.modulus, self)
    }
}

impl fmt::Display for PolyFb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl PolyFb {
    /// Coefficients in ascending powers, reduced mod `modulus`.
    pub fn new(modulus: u64, coeffs: &[u64]) -> Result<Self> {
        let b = check_modulus(modulus)?;
        Ok(Self::from_digits(
            b,
            coeffs.iter().map(|&c| (c % b as u64) as u32).collect(),
        ))
    }

    pub(crate) fn from_digits(modulus: u32, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs, modulus }
    }

    pub fn zero(modulus: u64) -> Result<Self> {
        Self::new(modulus, &[])
    }

    pub fn one(modulus: u64) -> Result<Self> {
        Self::new(modulus, &[1])
    }

    /// `x^k`.
    pub fn monomial(modulus: u64, k: usize) -> Result<Self> {
        let mut c = vec![0u64; k + 1];
        c[k] = 1;
        Self::new(modulus, &c)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let b = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::from_digits(
            b,
            (0..n).map(|i| add_mod(self.coeff(i), other.coeff(i), b)).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let b = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::from_digits(
            b,
            (0..n).map(|i| sub_mod(self.coeff(i), other.coeff(i), b)).collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::from_digits(self.modulus, vec![]));
        }
        let b = self.modulus;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(x, y, b), b);
            }
        }
        Ok(Self::from_digits(b, out))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0u32; k];
        c.extend_from_slice(&self.coeffs);
        Self::from_digits(self.modulus, c)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Self) -> Result<(Self, Self)> {
        self.check(d)?;
        let dd = d.degree().ok_or(Error::ZeroDivisor)?;
        let b = self.modulus;
        let inv_lead = inv_mod(d.leading(), b);
        let mut r = self.coeffs.clone();
        let qlen = r.len().saturating_sub(dd);
        let mut q = vec![0u32; qlen];
        for k in (0..qlen).rev() {
            let c = mul_mod(r[k + dd], inv_lead, b);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (i, &y) in d.coeffs.iter().enumerate() {
                r[k + i] = sub_mod(r[k + i], mul_mod(c, y, b), b);
            }
        }
        r.truncate(dd);
        Ok((Self::from_digits(b, q), Self::from_digits(b, r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (mut a, mut c) = (self.clone(), other.clone());
        while !c.is_zero() {
            let (_, r) = a.divmod(&c)?;
            a = c;
            c = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let inv = inv_mod(a.leading(), a.modulus);
        let b = a.modulus;
        Ok(Self::from_digits(
            b,
            a.coeffs.iter().map(|&x| mul_mod(x, inv, b)).collect(),
        ))
    }

    /// Parses `"b: c0 c1 ... c_deg"` (ascending powers).
    pub fn parse(s: &str) -> Result<Self> {
        let (b, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(1, "expected `b: c0 c1 ...`"))?;
        let b: u64 = b
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, format!("bad modulus {b:?}")))?;
        let coeffs = rest
            .split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::parse(1, format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(&c) = coeffs.iter().find(|&&c| c >= b) {
            return Err(Error::parse(1, format!("coefficient {c} not a digit in base {b}")));
        }
        Self::new(b, &coeffs)
    }

    pub fn to_text(&self) -> String {
        let digits: Vec<String> = self.coeffs.iter().map(u32::to_string).collect();
        format!("{}: {}", self.modulus, digits.join(" "))
    }
}

/// A window `u_start, ..., u_{start+len-1}` of the expansion
/// `q(x)/p(x) = sum_{i >= start} u_i x^{-i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPrefix {
    pub start: i64,
    pub coeffs: Vec<u32>,
}

impl LaurentPrefix {
    /// `u_i`; zero below `start`, `None` past the computed window.
    pub fn coeff(&self, i: i64) -> Option<u32> {
        if i < self.start {
            return Some(0);
        }
        self.coeffs.get((i - self.start) as usize).copied()
    }

    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }
}

/// First `nterms` coefficients of `q/p` in `F_b((x^{-1}))`, starting at
/// `deg p - deg q` (or at 1 when `q = 0`).
pub fn laurent_expand(q: &PolyFb, p: &PolyFb, nterms: usize) -> Result<LaurentPrefix> {
    q.check(p)?;
    let dp = p.degree().ok_or(Error::ZeroDivisor)?;
    if nterms == 0 {
        return Err(Error::invalid("nterms must be at least 1"));
    }
    let Some(dq) = q.degree() else {
        return Ok(LaurentPrefix {
            start: 1,
            coeffs: vec![0; nterms],
        });
    };
    let start = dp as i64 - dq as i64;
    Ok(LaurentPrefix {
        start,
        coeffs: laurent_window(q, p, start, nterms),
    })
}

/// `u_start..u_{start+n-1}` by long division of `q * x^K` by `p`; any `start`
/// at or below the true leading index is allowed.
pub(crate) fn laurent_window(q: &PolyFb, p: &PolyFb, start: i64, n: usize) -> Vec<u32> {
    let b = p.modulus;
    let dp = p.degree().expect("nonzero denominator") as i64;
    let last = start + n as i64 - 1;
    // work with R = q * x^k, where the term u_i x^{-i} p has degree dp + k - i
    let k = last.max(0) as usize;
    let mut r = q.shift(k).coeffs;
    let inv_lead = inv_mod(p.leading(), b);
    let mut out = Vec::with_capacity(n);
    for i in start..=last {
        let deg = dp + k as i64 - i;
        let c = if deg >= 0 && (deg as usize) < r.len() {
            mul_mod(r[deg as usize], inv_lead, b)
        } else {
            0
        };
        out.push(c);
        if c != 0 {
            let off = (k as i64 - i) as usize;
            for (j, &y) in p.coeffs.iter().enumerate() {
                r[off + j] = sub_mod(r[off + j], mul_mod(c, y, b), b);
            }
        }
    }
    out
}

/// Partial quotients `[a_0; a_1, ..., a_l]` of `q/p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFExpansion {
    pub partial_quotients: Vec<PolyFb>,
    /// `max deg a_i` over `i >= 1` (0 when there are none).
    pub max_partial_degree: usize,
}

impl CFExpansion {
    /// Folds the quotients back into `(numerator, denominator)`.
    pub fn reconstruct(&self) -> Result<(PolyFb, PolyFb)> {
        let b = self.partial_quotients[0].modulus() as u64;
        let mut iter = self.partial_quotients.iter().rev();
        let last = iter.next().expect("at least a_0");
        let (mut num, mut den) = (last.clone(), PolyFb::one(b)?);
        for a in iter {
            // a + den/num = (a*num + den)/num
            let new_num = a.mul(&num)?.add(&den)?;
            den = num;
            num = new_num;
        }
        Ok((num, den))
    }
}

/// Euclidean continued fraction of `q/p`; requires `gcd(p, q) = 1`.
pub fn cf_expand(q: &PolyFb, p: &PolyFb) -> Result<CFExpansion> {
    q.check(p)?;
    if p.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let g = q.gcd(p)?;
    if g.degree() != Some(0) {
        return Err(Error::NotCoprime(g.degree().unwrap_or(0)));
    }
    let mut quotients = Vec::new();
    let (mut num, mut den) = (q.clone(), p.clone());
    loop {
        let (a, r) = num.divmod(&den)?;
        quotients.push(a);
        if r.is_zero() {
            break;
        }
        num = den;
        den = r;
    }
    let max_partial_degree = quotients.iter().skip(1).filter_map(PolyFb::degree).max().unwrap_or(0);
    Ok(CFExpansion {
        partial_quotients: quotients,
        max_partial_degree,
    })
}

/// `f_1 = 1`, `f_2 = x`, `f_{n+2} = x f_{n+1} + f_n` over F_2.
pub fn fibonacci_poly(n: usize) -> Result<PolyFb> {
    if n == 0 {
        return Err(Error::invalid("Fibonacci polynomials are indexed from 1"));
    }
    let (mut prev, mut cur) = (PolyFb::one(2)?, PolyFb::monomial(2, 1)?);
    if n == 1 {
        return Ok(prev);
    }
    for _ in 2..n {
        let next = cur.shift(1).add(&prev)?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
