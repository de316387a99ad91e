//! Shifted elementary intervals, kappa-separation and the t-value.
//!
//! A level-`c` axis interval is `[s/b^{c+1}, s/b^{c+1} + b^-c)` with
//! `s = b a - e`. Plain intervals need `0 <= s <= b^{c+1} - b`; toroidal ones
//! take any `s` modulo `b^{c+1}` and wrap. Both checks below work on that
//! anchor form: the pairwise test looks for the tightest anchor below the
//! smaller coordinate, and the linear-algebra test splits each interval into
//! the `b` level-`c+1` cells `s + g` and counts consistent systems.

use crate::construct::NetSpec;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::{add_mod, mul_mod, sub_mod, FieldMatrix, SolveOutcome};
use crate::geometry::Rational;
use crate::pointgen::{NetPoints, ShiftVector};

/// Cap on `b^(sum c + 2d)` for one criterion evaluation.
pub const MAX_CRITERION_WORK: u128 = 1 << 33;

/// A shifted (optionally toroidal) elementary interval `J_{c,a,e}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalSpec {
    pub c: Vec<u32>,
    pub a: Vec<u64>,
    pub e: Vec<u32>,
    pub toroidal: bool,
}

/// Geometry of one axis at level `c`, in units of `1/K` with `K = b^max(m, c+1)`.
#[derive(Clone, Copy, Debug)]
struct AxisLevel {
    b: u128,
    k: u128,
    /// `K / b^m`: scales point coordinates.
    up: u128,
    /// `K / b^{c+1}`: anchor step.
    u: u128,
    /// `b^{c+1}`.
    cells: u128,
    /// `b^c`.
    a_range: u128,
}

impl AxisLevel {
    fn new(b: u32, m: usize, c: u32) -> Result<Self> {
        let bb = b as u128;
        let too = || Error::TooLarge(format!("level {c} at resolution {b}^{m} overflows"));
        let cells = bb.checked_pow(c + 1).ok_or_else(too)?;
        let k = bb
            .checked_pow((m as u32).max(c + 1))
            .filter(|&k| k < 1 << 100)
            .ok_or_else(too)?;
        Ok(Self {
            b: bb,
            k,
            up: k / bb.pow(m as u32),
            u: k / cells,
            cells,
            a_range: cells / bb,
        })
    }

    /// Anchor of an interval containing both coordinates, if one exists.
    fn share(&self, x: u64, y: u64, toroidal: bool) -> Option<u128> {
        let (x, y) = (x as u128 * self.up, y as u128 * self.up);
        let width = self.b * self.u;
        if toroidal {
            for (p, q) in [(x, y), (y, x)] {
                let s = p / self.u;
                if (q + self.k - s * self.u) % self.k < width {
                    return Some(s);
                }
            }
            None
        } else {
            let (lo, hi) = (x.min(y), x.max(y));
            let s = (lo / self.u).min(self.cells - self.b);
            (hi < (s + self.b) * self.u).then_some(s)
        }
    }

    /// `(a, e)` with `b a - e = s` (mod `b^{c+1}` when toroidal).
    fn coordinates(&self, s: u128, toroidal: bool) -> (u64, u32) {
        let mut a = s.div_ceil(self.b);
        let e = a * self.b - s;
        if toroidal && a == self.a_range {
            a = 0;
        }
        (a as u64, e as u32)
    }

    fn contains(&self, s: i128, x: u64, toroidal: bool) -> bool {
        let x = x as u128 * self.up;
        let width = self.b * self.u;
        if toroidal {
            let start = s.rem_euclid(self.cells as i128) as u128 * self.u;
            (x + self.k - start) % self.k < width
        } else {
            s >= 0 && (s as u128) * self.u <= x && x < (s as u128 + self.b) * self.u
        }
    }
}

fn levels(b: u32, m: usize, c: &[u32]) -> Result<Vec<AxisLevel>> {
    c.iter().map(|&cj| AxisLevel::new(b, m, cj)).collect()
}

impl IntervalSpec {
    pub fn new(c: Vec<u32>, a: Vec<u64>, e: Vec<u32>, toroidal: bool) -> Result<Self> {
        if c.is_empty() || c.len() != a.len() || c.len() != e.len() {
            return Err(Error::dim("c, a and e must be nonempty and of equal length"));
        }
        Ok(Self { c, a, e, toroidal })
    }

    pub fn d(&self) -> usize {
        self.c.len()
    }

    /// `s_j = b a_j - e_j`.
    pub fn anchors(&self, b: u32) -> Vec<i128> {
        self.a
            .iter()
            .zip(&self.e)
            .map(|(&a, &e)| b as i128 * a as i128 - e as i128)
            .collect()
    }

    pub fn is_admissible(&self, b: u32) -> bool {
        let bb = b as i128;
        self.c
            .iter()
            .zip(self.anchors(b))
            .zip(&self.e)
            .zip(&self.a)
            .all(|(((&c, s), &e), &a)| {
                let Some(a_range) = bb.checked_pow(c) else { return false };
                if e >= b {
                    return false;
                }
                if self.toroidal {
                    (a as i128) < a_range
                } else {
                    s >= 0 && s <= a_range * bb - bb
                }
            })
    }

    /// Whether the scaled point `x` (resolution `b^-m`) lies in the interval.
    pub fn contains(&self, b: u32, m: usize, x: &[u64]) -> Result<bool> {
        if x.len() != self.d() {
            return Err(Error::dim(format!(
                "point has {} coordinates, interval {}",
                x.len(),
                self.d()
            )));
        }
        let lv = levels(b, m, &self.c)?;
        Ok(self
            .anchors(b)
            .iter()
            .zip(&lv)
            .zip(x)
            .all(|((&s, l), &xj)| l.contains(s, xj, self.toroidal)))
    }
}

/// Two points sharing one interval. `passing_g` lists the cell offsets whose
/// systems were consistent (criterion only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub interval: IntervalSpec,
    pub pair: (usize, usize),
    pub passing_g: Vec<Vec<u32>>,
}

fn check_c(points_d: usize, c: &[u32]) -> Result<()> {
    if c.len() != points_d {
        return Err(Error::dim(format!(
            "c has {} entries for dimension {points_d}",
            c.len()
        )));
    }
    Ok(())
}

fn pair_violation(
    points: &NetPoints,
    lv: &[AxisLevel],
    c: &[u32],
    i: usize,
    j: usize,
    toroidal: bool,
) -> Option<Violation> {
    let (xi, xj) = (points.point(i), points.point(j));
    let mut a = Vec::with_capacity(c.len());
    let mut e = Vec::with_capacity(c.len());
    for (axis, l) in lv.iter().enumerate() {
        let s = l.share(xi[axis], xj[axis], toroidal)?;
        let (aa, ee) = l.coordinates(s, toroidal);
        a.push(aa);
        e.push(ee);
    }
    Some(Violation {
        interval: IntervalSpec {
            c: c.to_vec(),
            a,
            e,
            toroidal,
        },
        pair: (i.min(j), i.max(j)),
        passing_g: Vec::new(),
    })
}

/// Pairwise test: `None` when no admissible interval at level `c` holds two
/// points, else the first violating pair in first-axis sweep order.
pub fn is_c_separated_bruteforce(
    points: &NetPoints,
    c: &[u32],
    toroidal: bool,
    exec: Execution,
) -> Result<Option<Violation>> {
    check_c(points.d, c)?;
    let lv = levels(points.b, points.m, c)?;
    let n = points.len();
    let scale = points.scale();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| (points.point(i)[0], i));
    // first-axis gaps (in 1/K units) must stay below the interval width
    let reach = lv[0].b * lv[0].u;
    Ok(exec.find_first(0..n, |pos| {
        let i = order[pos];
        let x0 = points.point(i)[0];
        for step in 1..n {
            let next = pos + step;
            if !toroidal && next >= n {
                break;
            }
            let j = order[next % n];
            let y0 = points.point(j)[0];
            let gap = if next < n { y0 - x0 } else { y0 + scale - x0 };
            if gap as u128 * lv[0].up >= reach {
                break;
            }
            if let Some(v) = pair_violation(points, &lv, c, i, j, toroidal) {
                return Some(v);
            }
        }
        None
    }))
}

/// Level at which separation was decided, and how.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Bruteforce,
    Criterion,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bruteforce => "bruteforce",
            Method::Criterion => "criterion",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationReport {
    /// Smallest verified kappa; `None` if never separated (duplicates) or the
    /// budget ran out.
    pub kappa: Option<u32>,
    pub c_witness: Option<Vec<u32>>,
    /// A violation one level below `kappa` (or at the last level tried).
    pub violation: Option<Violation>,
    pub method: Method,
    pub toroidal: bool,
    /// `(b-1) b^-kappa / (2b)`.
    pub q_lower_from_kappa: Option<Rational>,
    /// Levels where the criterion hypothesis failed, with the reason.
    pub inapplicable: Vec<(Vec<u32>, String)>,
    pub budget_exhausted: bool,
}

/// `(b-1) b^-kappa / (2b)`.
pub fn q_lower_from_kappa(b: u32, kappa: u32) -> Option<Rational> {
    let den = (b as i128).checked_pow(kappa + 1)?.checked_mul(2)?;
    Some(Rational::new(b as i128 - 1, den))
}

/// `b^-kappa / 2`, the separation radius cap implied by a level-kappa violation.
pub fn q_upper_from_violation(b: u32, kappa: u32) -> Option<Rational> {
    let den = (b as i128).checked_pow(kappa)?.checked_mul(2)?;
    Some(Rational::new(1, den))
}

/// Smallest kappa with `(kappa, ..., kappa)` separated, by the pairwise test.
pub fn min_kappa_bruteforce(points: &NetPoints, toroidal: bool, exec: Execution) -> Result<SeparationReport> {
    if points.len() < 2 {
        return Err(Error::invalid("kappa search needs at least two points"));
    }
    let mut last = None;
    let mut found = None;
    for kappa in 0..=points.m as u32 + 1 {
        match is_c_separated_bruteforce(points, &vec![kappa; points.d], toroidal, exec)? {
            Some(v) => last = Some(v),
            None => {
                found = Some(kappa);
                break;
            }
        }
    }
    Ok(SeparationReport {
        kappa: found,
        c_witness: found.map(|k| vec![k; points.d]),
        violation: last,
        method: Method::Bruteforce,
        toroidal,
        q_lower_from_kappa: found.and_then(|k| q_lower_from_kappa(points.b, k)),
        inapplicable: Vec::new(),
        budget_exhausted: false,
    })
}

/// Digits `xi_1..xi_{c+1}` (most significant first) of the level-`c+1` cell
/// `b a - e + g` modulo `b^{c+1}`. The leading `c` digits come from `a`, or
/// from `a - 1` when subtracting `e` borrows.
pub fn cell_digits(a: u64, e: u32, g: u32, b: u32, c: u32) -> Vec<u32> {
    let a_range = (b as u64).pow(c);
    let prefix = if e == 0 || g >= e {
        a
    } else {
        (a + a_range - 1) % a_range
    };
    let mut digits = crate::pointgen::to_digits(prefix, b, c as usize);
    digits.push(sub_mod(g, e, b));
    digits
}

/// Outcome of the algebraic test at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriterionOutcome {
    Separated,
    Violated(Violation),
    Inapplicable(String),
}

/// The stacked system `F_{c+1} n = B_{c+1,delta,g}` with its left nullspace.
#[derive(Clone, Debug)]
pub struct CriterionSystem {
    b: u32,
    m: usize,
    c: Vec<u32>,
    pub f_stack: FieldMatrix,
    pub nullbasis: Vec<Vec<u32>>,
    pub rank: usize,
    shift_digits: Vec<Vec<u32>>,
    offsets: Vec<usize>,
}

impl CriterionSystem {
    pub fn new(spec: &NetSpec, shift: &ShiftVector, c: &[u32]) -> Result<Self> {
        let d = spec.d();
        check_c(d, c)?;
        if shift.b != spec.b || shift.m != spec.m || shift.d() != d {
            return Err(Error::dim("shift does not match the net's (b, m, d)"));
        }
        let blocks: Vec<FieldMatrix> = spec
            .matrices
            .iter()
            .zip(c)
            .map(|(f, &cj)| f.top_rows(cj as usize + 1))
            .collect();
        let f_stack = FieldMatrix::vstack(&blocks)?;
        let mut offsets = vec![0usize];
        for &cj in c {
            offsets.push(offsets.last().unwrap() + cj as usize + 1);
        }
        let shift_digits = (0..d)
            .map(|j| (1..=c[j] as usize + 1).map(|k| shift.digit(j, k)).collect())
            .collect();
        Ok(Self {
            b: spec.b,
            m: spec.m,
            c: c.to_vec(),
            rank: f_stack.rank(),
            nullbasis: f_stack.left_nullspace(),
            f_stack,
            shift_digits,
            offsets,
        })
    }

    /// `None` when the hypotheses hold, else the reason they fail.
    pub fn hypothesis_failure(&self) -> Option<String> {
        let sum: u64 = self.c.iter().map(|&x| x as u64).sum::<u64>() + self.c.len() as u64;
        if sum <= self.m as u64 {
            return Some(format!("sum(c) + d = {sum} does not exceed m = {}", self.m));
        }
        if self.rank != self.m {
            return Some(format!("rank of the stacked matrix is {} < m = {}", self.rank, self.m));
        }
        None
    }

    /// Right-hand side `B` for one interval and cell offset.
    pub fn rhs(&self, a: &[u64], e: &[u32], g: &[u32]) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.f_stack.rows());
        for j in 0..self.c.len() {
            let digits = cell_digits(a[j], e[j], g[j], self.b, self.c[j]);
            out.extend(
                digits
                    .iter()
                    .zip(&self.shift_digits[j])
                    .map(|(&x, &s)| sub_mod(x, s, self.b)),
            );
        }
        out
    }

    /// Projection of axis `j`'s part of `B` onto every nullspace vector,
    /// for all `(a, e, g)`; flat, `nullity` values per entry.
    fn axis_table(&self, j: usize) -> Vec<u32> {
        let b = self.b;
        let cj = self.c[j];
        let nul = self.nullbasis.len();
        let a_range = (b as u64).pow(cj);
        let off = self.offsets[j];
        let mut table = Vec::with_capacity(a_range as usize * (b * b) as usize * nul);
        for a in 0..a_range {
            for e in 0..b {
                for g in 0..b {
                    let digits = cell_digits(a, e, g, b, cj);
                    for r in &self.nullbasis {
                        let mut acc = 0;
                        for (k, (&x, &s)) in digits.iter().zip(&self.shift_digits[j]).enumerate() {
                            acc = add_mod(acc, mul_mod(r[off + k], sub_mod(x, s, b), b), b);
                        }
                        table.push(acc);
                    }
                }
            }
        }
        table
    }

    /// Index of the unique solution of `F_{c+1} n = B`.
    fn point_index(&self, a: &[u64], e: &[u32], g: &[u32]) -> usize {
        let rhs = self.rhs(a, e, g);
        match self.f_stack.solve_affine(&rhs) {
            Ok(SolveOutcome::Unique(n)) => n
                .iter()
                .rev()
                .fold(0usize, |acc, &digit| acc * self.b as usize + digit as usize),
            other => unreachable!("full-rank consistent system gave {other:?}"),
        }
    }

    /// Decides separation at this level: every interval must admit at most one
    /// consistent cell offset `g`. Plain mode skips the wrapping intervals
    /// (`a_j = 0`, `e_j > 0`).
    pub fn check(&self, toroidal: bool, exec: Execution) -> Result<CriterionOutcome> {
        if let Some(reason) = self.hypothesis_failure() {
            return Ok(CriterionOutcome::Inapplicable(reason));
        }
        let (b, d) = (self.b, self.c.len());
        let work = (b as u128).checked_pow(self.c.iter().sum::<u32>() + 2 * d as u32);
        if work.is_none_or(|w| w > MAX_CRITERION_WORK) {
            return Err(Error::TooLarge(format!(
                "criterion at c = {:?} exceeds the work cap",
                self.c
            )));
        }
        let nul = self.nullbasis.len();
        let tables: Vec<Vec<u32>> = (0..d).map(|j| self.axis_table(j)).collect();
        let ae_count: Vec<usize> = self.c.iter().map(|&cj| (b as usize).pow(cj) * b as usize).collect();
        let bu = b as usize;
        let g_total = bu.pow(d as u32);

        let found = exec.find_first(0..ae_count[0], |first| {
            let mut idx = vec![0usize; d];
            idx[0] = first;
            let mut sum = vec![0u32; nul];
            let mut g = vec![0usize; d];
            loop {
                let skip = !toroidal && idx.iter().any(|&ae| ae / bu == 0 && ae % bu > 0);
                if !skip {
                    let mut passing: Vec<Vec<u32>> = Vec::new();
                    for gi in 0..g_total {
                        let mut rest = gi;
                        for gj in g.iter_mut().rev() {
                            *gj = rest % bu;
                            rest /= bu;
                        }
                        sum.iter_mut().for_each(|x| *x = 0);
                        for j in 0..d {
                            let base = (idx[j] * bu + g[j]) * nul;
                            for (s, &t) in sum.iter_mut().zip(&tables[j][base..base + nul]) {
                                *s = add_mod(*s, t, b);
                            }
                        }
                        if sum.iter().all(|&x| x == 0) {
                            passing.push(g.iter().map(|&x| x as u32).collect());
                        }
                    }
                    if passing.len() >= 2 {
                        return Some((idx.clone(), passing));
                    }
                }
                // odometer over axes 1..d
                let mut axis = d;
                loop {
                    if axis == 1 {
                        return None;
                    }
                    axis -= 1;
                    idx[axis] += 1;
                    if idx[axis] < ae_count[axis] {
                        break;
                    }
                    idx[axis] = 0;
                }
            }
        });
        Ok(match found {
            None => CriterionOutcome::Separated,
            Some((idx, passing)) => {
                let a: Vec<u64> = idx.iter().map(|&ae| (ae / bu) as u64).collect();
                let e: Vec<u32> = idx.iter().map(|&ae| (ae % bu) as u32).collect();
                let i = self.point_index(&a, &e, &passing[0]);
                let k = self.point_index(&a, &e, &passing[1]);
                CriterionOutcome::Violated(Violation {
                    interval: IntervalSpec {
                        c: self.c.clone(),
                        a,
                        e,
                        toroidal,
                    },
                    pair: (i.min(k), i.max(k)),
                    passing_g: passing,
                })
            }
        })
    }
}

/// Algebraic separation test of the shifted net at level `c`.
pub fn criterion_check(
    spec: &NetSpec,
    shift: &ShiftVector,
    c: &[u32],
    toroidal: bool,
    exec: Execution,
) -> Result<CriterionOutcome> {
    CriterionSystem::new(spec, shift, c)?.check(toroidal, exec)
}

/// Smallest kappa `<= budget` at which the criterion certifies separation.
///
/// Adding rows never lowers the rank and enlarging `c` never breaks
/// separation, so among all `c` with `max c_j = kappa` the balanced vector
/// decides the level; it is the only one evaluated.
pub fn min_kappa_criterion(
    spec: &NetSpec,
    shift: &ShiftVector,
    budget: u32,
    toroidal: bool,
    exec: Execution,
) -> Result<SeparationReport> {
    let d = spec.d();
    let mut report = SeparationReport {
        kappa: None,
        c_witness: None,
        violation: None,
        method: Method::Criterion,
        toroidal,
        q_lower_from_kappa: None,
        inapplicable: Vec::new(),
        budget_exhausted: false,
    };
    for kappa in 0..=budget {
        let c = vec![kappa; d];
        let outcome = match CriterionSystem::new(spec, shift, &c)?.check(toroidal, exec) {
            Ok(o) => o,
            Err(Error::TooLarge(msg)) => {
                report.inapplicable.push((c, msg));
                report.budget_exhausted = true;
                return Ok(report);
            }
            Err(e) => return Err(e),
        };
        match outcome {
            CriterionOutcome::Separated => {
                report.kappa = Some(kappa);
                report.q_lower_from_kappa = q_lower_from_kappa(spec.b, kappa);
                report.c_witness = Some(c);
                return Ok(report);
            }
            CriterionOutcome::Violated(v) => report.violation = Some(v),
            CriterionOutcome::Inapplicable(reason) => report.inapplicable.push((c, reason)),
        }
    }
    report.budget_exhausted = true;
    Ok(report)
}

/// All `c` with `d` nonnegative parts summing to `total`.
pub fn compositions(total: u32, d: usize) -> Vec<Vec<u32>> {
    fn rec(rest: u32, d: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if d == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=rest {
            cur.push(x);
            rec(rest - x, d - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(total, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Smallest `t` for which every stack of the first `c_j` rows with
/// `sum c_j = m - t` is linearly independent.
pub fn t_value(spec: &NetSpec) -> Result<u32> {
    let (m, d) = (spec.m, spec.d());
    if d > 5 || m > 20 {
        return Err(Error::TooLarge(format!(
            "t-value search limited to d <= 5, m <= 20 (got d = {d}, m = {m})"
        )));
    }
    for t in 0..=m as u32 {
        let k = m as u32 - t;
        let ok = compositions(k, d).iter().all(|c| {
            let blocks: Vec<FieldMatrix> = spec
                .matrices
                .iter()
                .zip(c)
                .map(|(f, &cj)| f.top_rows(cj as usize))
                .collect();
            FieldMatrix::vstack(&blocks)
                .map(|s| s.rank() == k as usize)
                .unwrap_or(false)
        });
        if ok {
            return Ok(t);
        }
    }
    Ok(m as u32)
}

/// Box count: every elementary box of volume `b^{t-m}` holds exactly `b^t` points.
pub fn is_tmd_net(points: &NetPoints, t: u32) -> Result<bool> {
    let (b, m, d) = (points.b as u64, points.m, points.d);
    if t as usize > m {
        return Err(Error::invalid("t must not exceed m"));
    }
    if points.len() as u64 != b.pow(m as u32) {
        return Ok(false);
    }
    let per_box = b.pow(t);
    for c in compositions(m as u32 - t, d) {
        let mut counts = vec![0u64; b.pow(m as u32 - t) as usize];
        for p in points.points() {
            let cell = p
                .iter()
                .zip(&c)
                .fold(0u64, |acc, (&x, &cj)| acc * b.pow(cj) + x / b.pow((m as u32) - cj));
            counts[cell as usize] += 1;
        }
        if counts.iter().any(|&n| n != per_box) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::*;
    use crate::geometry::{separation_radius, Norm};
    use crate::pointgen::{digital_shift, generate_points, to_digits};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SEQ: Execution = Execution::Sequential;

    fn pts(spec: &NetSpec) -> NetPoints {
        generate_points(spec, None, SEQ).unwrap()
    }

    /// Enumerates every admissible interval and counts points directly.
    fn separated_by_enumeration(points: &NetPoints, c: &[u32], toroidal: bool) -> bool {
        let b = points.b;
        let d = points.d;
        let per_axis: Vec<Vec<(u64, u32)>> = c
            .iter()
            .map(|&cj| {
                let top = (b as u64).pow(cj) + u64::from(!toroidal);
                (0..top).flat_map(|a| (0..b).map(move |e| (a, e))).collect()
            })
            .collect();
        let total: usize = per_axis.iter().map(Vec::len).product();
        (0..total).all(|mut flat| {
            let mut a = vec![0; d];
            let mut e = vec![0; d];
            for j in (0..d).rev() {
                let (aa, ee) = per_axis[j][flat % per_axis[j].len()];
                flat /= per_axis[j].len();
                a[j] = aa;
                e[j] = ee;
            }
            let iv = IntervalSpec::new(c.to_vec(), a, e, toroidal).unwrap();
            if !iv.is_admissible(b) {
                return true;
            }
            points.points().filter(|p| iv.contains(b, points.m, p).unwrap()).count() <= 1
        })
    }

    fn random_spec(rng: &mut ChaCha8Rng, b: u32, m: usize, d: usize) -> NetSpec {
        let mats = (0..d)
            .map(|_| FieldMatrix::from_fn(b as u64, m, m, |_, _| rng.random_range(0..b) as u64).unwrap())
            .collect();
        NetSpec::custom(mats, "random").unwrap()
    }

    #[test]
    fn cell_digits_match_direct_expansion() {
        for b in [2u32, 3, 5] {
            for c in 0..4u32 {
                let a_range = (b as u64).pow(c);
                let cells = a_range * b as u64;
                for a in 0..a_range {
                    for e in 0..b {
                        for g in 0..b {
                            let v = (b as u64 * a + g as u64 + cells - e as u64) % cells;
                            assert_eq!(cell_digits(a, e, g, b, c), to_digits(v, b, c as usize + 1));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn interval_admissibility_and_membership() {
        let iv = IntervalSpec::new(vec![2], vec![2], vec![1], false).unwrap();
        assert_eq!(iv.anchors(2), vec![3]);
        assert!(iv.is_admissible(2));
        // [3/8, 5/8) at resolution 1/16
        assert!(iv.contains(2, 4, &[6]).unwrap());
        assert!(iv.contains(2, 4, &[9]).unwrap());
        assert!(!iv.contains(2, 4, &[10]).unwrap());
        assert!(!IntervalSpec::new(vec![2], vec![0], vec![1], false)
            .unwrap()
            .is_admissible(2));
        let wrap = IntervalSpec::new(vec![2], vec![0], vec![1], true).unwrap();
        assert!(wrap.is_admissible(2));
        assert!(wrap.contains(2, 4, &[15]).unwrap() && wrap.contains(2, 4, &[1]).unwrap());
        assert!(!wrap.contains(2, 4, &[2]).unwrap());
        assert!(!IntervalSpec::new(vec![2], vec![4], vec![0], true)
            .unwrap()
            .is_admissible(2));
        assert!(IntervalSpec::new(vec![1, 2], vec![0], vec![0, 0], true).is_err());
    }

    #[test]
    fn vdc_examples() {
        let v = pts(&vdc_matrices(2, 2).unwrap());
        assert!(is_c_separated_bruteforce(&v, &[2], false, SEQ).unwrap().is_none());
        let viol = is_c_separated_bruteforce(&v, &[1], false, SEQ).unwrap().unwrap();
        assert!(viol.interval.is_admissible(2));
        let (i, j) = viol.pair;
        assert!(viol.interval.contains(2, 2, v.point(i)).unwrap() && viol.interval.contains(2, 2, v.point(j)).unwrap());
        let rep = min_kappa_bruteforce(&v, false, SEQ).unwrap();
        assert_eq!(rep.kappa, Some(2));
        assert_eq!(rep.q_lower_from_kappa, Some(Rational::new(1, 16)));
    }

    #[test]
    fn hammersley_interval_holds_two_points() {
        let h = pts(&hammersley_matrices(2, 4).unwrap());
        let iv = IntervalSpec::new(vec![2, 2], vec![2, 2], vec![1, 1], false).unwrap();
        let inside: Vec<usize> = (0..h.len())
            .filter(|&n| iv.contains(2, 4, h.point(n)).unwrap())
            .collect();
        assert!(inside.contains(&9) && inside.contains(&6));
        assert!(is_c_separated_bruteforce(&h, &[2, 2], false, SEQ).unwrap().is_some());
        let spec = hammersley_matrices(2, 4).unwrap();
        match criterion_check(&spec, &ShiftVector::zero(2, 4, 2), &[2, 2], true, SEQ).unwrap() {
            CriterionOutcome::Violated(v) => {
                assert_eq!(v.passing_g.len(), 2);
                for n in [v.pair.0, v.pair.1] {
                    assert!(v.interval.contains(2, 4, h.point(n)).unwrap());
                }
            }
            other => panic!("expected a violation, got {other:?}"),
        }
        let eight = pts(&hammersley_matrices(2, 8).unwrap());
        assert!(min_kappa_bruteforce(&eight, false, SEQ).unwrap().kappa.unwrap() >= 7);
    }

    #[test]
    fn pairwise_matches_interval_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for trial in 0..60 {
            let b = [2u32, 3][trial % 2];
            let m = rng.random_range(1..4);
            let d = rng.random_range(1..3);
            let p = digital_shift(
                &pts(&random_spec(&mut rng, b, m, d)),
                &ShiftVector::random(b, m, d, &mut rng),
            )
            .unwrap();
            for _ in 0..4 {
                let c: Vec<u32> = (0..d).map(|_| rng.random_range(0..m as u32 + 2)).collect();
                for tor in [false, true] {
                    let fast = is_c_separated_bruteforce(&p, &c, tor, Execution::Parallel).unwrap();
                    assert_eq!(
                        fast.is_none(),
                        separated_by_enumeration(&p, &c, tor),
                        "c={c:?} tor={tor}"
                    );
                    if let Some(v) = fast {
                        assert!(v.interval.is_admissible(b));
                        assert!(v.interval.contains(b, m, p.point(v.pair.0)).unwrap());
                        assert!(v.interval.contains(b, m, p.point(v.pair.1)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn criterion_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let mut compared = 0;
        while compared < 150 {
            let b = [2u32, 3][compared % 2];
            let m = rng.random_range(2..6);
            let spec = random_spec(&mut rng, b, m, 2);
            let shift = ShiftVector::random(b, m, 2, &mut rng);
            let c: Vec<u32> = (0..2).map(|_| rng.random_range(0..m as u32 + 1)).collect();
            let sys = CriterionSystem::new(&spec, &shift, &c).unwrap();
            if sys.hypothesis_failure().is_some() {
                continue;
            }
            let shifted = digital_shift(&pts(&spec), &shift).unwrap();
            for tor in [true, false] {
                let alg = sys.check(tor, Execution::Parallel).unwrap();
                let brute = is_c_separated_bruteforce(&shifted, &c, tor, SEQ).unwrap();
                assert_eq!(
                    alg == CriterionOutcome::Separated,
                    brute.is_none(),
                    "b={b} m={m} c={c:?} tor={tor}"
                );
                if let CriterionOutcome::Violated(v) = alg {
                    for n in [v.pair.0, v.pair.1] {
                        assert!(v.interval.contains(b, m, shifted.point(n)).unwrap());
                    }
                }
            }
            compared += 1;
        }
    }

    #[test]
    fn criterion_inapplicable_cases() {
        let spec = lp_matrices(2, 6).unwrap();
        let zero = ShiftVector::zero(2, 6, 2);
        assert!(matches!(
            criterion_check(&spec, &zero, &[2, 2], true, SEQ).unwrap(),
            CriterionOutcome::Inapplicable(_)
        ));
        let same = NetSpec::custom(vec![FieldMatrix::identity(2, 4).unwrap(); 2], "diag").unwrap();
        assert!(matches!(
            criterion_check(&same, &ShiftVector::zero(2, 4, 2), &[2, 2], true, SEQ).unwrap(),
            CriterionOutcome::Inapplicable(_)
        ));
        assert!(criterion_check(&spec, &ShiftVector::zero(2, 5, 2), &[4, 4], true, SEQ).is_err());
    }

    #[test]
    fn lp_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let spec = lp_matrices(2, 6).unwrap();
        for _ in 0..5 {
            let shift = ShiftVector::random(2, 6, 2, &mut rng);
            assert_eq!(
                criterion_check(&spec, &shift, &[4, 4], true, SEQ).unwrap(),
                CriterionOutcome::Separated
            );
        }
        let lp4 = pts(&lp_matrices(2, 4).unwrap());
        assert!(min_kappa_bruteforce(&lp4, true, SEQ).unwrap().kappa.unwrap() <= 3);
        for m in [4usize, 6, 8] {
            let spec = lp_matrices(2, m).unwrap();
            let shift = ShiftVector::random(2, m, 2, &mut rng);
            let rep = min_kappa_criterion(&spec, &shift, m as u32, true, Execution::Parallel).unwrap();
            assert!(rep.kappa.unwrap() <= m as u32 / 2 + 1);
            let brute = min_kappa_bruteforce(&digital_shift(&pts(&spec), &shift).unwrap(), true, SEQ).unwrap();
            assert_eq!(rep.kappa, brute.kappa);
        }
    }

    #[test]
    fn duplicates_never_separate() {
        let same = NetSpec::custom(vec![FieldMatrix::zeros(3, 2, 2).unwrap()], "zero").unwrap();
        let rep = min_kappa_bruteforce(&pts(&same), false, SEQ).unwrap();
        assert_eq!(rep.kappa, None);
        assert!(rep.violation.is_some());
        let crit = min_kappa_criterion(&same, &ShiftVector::zero(3, 2, 1), 4, true, SEQ).unwrap();
        assert!(crit.kappa.is_none() && crit.budget_exhausted);
    }

    #[test]
    fn separation_monotone_in_c() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..15 {
            let b = [2u32, 3][rng.random_range(0..2)];
            let m = rng.random_range(2..5);
            let p = pts(&random_spec(&mut rng, b, m, 2));
            for tor in [false, true] {
                let top = m as u32 + 1;
                let sep = |c: &[u32]| is_c_separated_bruteforce(&p, c, tor, SEQ).unwrap().is_none();
                for c0 in 0..=top {
                    for c1 in 0..=top {
                        if sep(&[c0, c1]) {
                            assert!(c0 == top || sep(&[c0 + 1, c1]));
                            assert!(c1 == top || sep(&[c0, c1 + 1]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kappa_and_radius_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..20 {
            let b = [2u32, 3][rng.random_range(0..2)];
            let m = rng.random_range(2..6);
            let p = digital_shift(
                &pts(&random_spec(&mut rng, b, m, 2)),
                &ShiftVector::random(b, m, 2, &mut rng),
            )
            .unwrap();
            for tor in [false, true] {
                let rep = min_kappa_bruteforce(&p, tor, SEQ).unwrap();
                let q = separation_radius(&p, Norm::Inf, tor, SEQ).unwrap().q;
                if let Some(k) = rep.kappa {
                    assert!(q >= q_lower_from_kappa(b, k).unwrap());
                }
                if let Some(v) = &rep.violation {
                    assert!(q <= q_upper_from_violation(b, v.interval.c[0]).unwrap());
                }
            }
        }
    }

    #[test]
    fn t_values() {
        for m in 1..=10 {
            assert_eq!(t_value(&lp_matrices(2, m).unwrap()).unwrap(), 0);
            assert_eq!(t_value(&hammersley_matrices(3, m).unwrap()).unwrap(), 0);
        }
        for m in 1..8 {
            let same = NetSpec::custom(vec![FieldMatrix::identity(2, m).unwrap(); 2], "diag").unwrap();
            assert_eq!(t_value(&same).unwrap(), m as u32 - 1);
        }
        assert_eq!(t_value(&faure_matrices(3, 6).unwrap()).unwrap(), 0);
        assert!(t_value(&faure_matrices(7, 3).unwrap()).is_err());
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(4, 3).len(), 15);
    }

    #[test]
    fn box_count() {
        let lp = pts(&lp_matrices(3, 4).unwrap());
        assert!(is_tmd_net(&lp, 0).unwrap());
        let same = NetSpec::custom(vec![FieldMatrix::identity(2, 4).unwrap(); 2], "diag").unwrap();
        let p = pts(&same);
        assert!(!is_tmd_net(&p, 0).unwrap());
        assert!(is_tmd_net(&p, 3).unwrap());
    }
}
