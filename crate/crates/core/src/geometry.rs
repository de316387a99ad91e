//! Separation radius, covering radius and mesh ratio of integer-scaled point
//! sets, in the l1, l2 and l-infinity norms, plain or on the torus.
//!
//! Distances are computed exactly in integer units. For l2 every reported
//! quantity is the *square* of the radius so it stays rational. The covering
//! radius is bracketed by evaluating the nearest-point distance at the cell
//! centres of a `b^-r` grid: any point of the cube is within `s * w_p` of a
//! centre, so `h` lies in `[max f, max f + s * w_p]`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::pointgen::NetPoints;

pub type Rational = Ratio<i128>;

/// `"num/den"`.
pub fn ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Largest cell grid the covering bracket will evaluate.
pub const MAX_GRID_CELLS: u128 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Norm {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "inf")]
    Inf,
}

impl Norm {
    /// Whether reported values are squares (only for l2).
    pub fn squared(self) -> bool {
        self == Norm::L2
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::Inf => "inf",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Norm::L1),
            "2" => Ok(Norm::L2),
            "inf" | "infinity" | "max" => Ok(Norm::Inf),
            _ => Err(Error::invalid(format!("unsupported norm {s:?}; use 1, 2 or inf"))),
        }
    }
}

#[inline]
fn axis_gap(x: u64, y: u64, scale: u64, toroidal: bool) -> u64 {
    let g = x.abs_diff(y);
    if toroidal {
        g.min(scale - g)
    } else {
        g
    }
}

/// Distance in integer units of `1/scale` (squared for l2).
#[inline]
pub(crate) fn raw_distance(x: &[u64], y: &[u64], scale: u64, norm: Norm, toroidal: bool) -> u128 {
    let gaps = x.iter().zip(y).map(|(&a, &b)| axis_gap(a, b, scale, toroidal) as u128);
    match norm {
        Norm::Inf => gaps.max().unwrap_or(0),
        Norm::L1 => gaps.sum(),
        Norm::L2 => gaps.map(|g| g * g).sum(),
    }
}

/// Lower bound on the distance implied by one axis gap, in the same units.
#[inline]
fn gap_bound(gap: u64, norm: Norm) -> u128 {
    match norm {
        Norm::L2 => gap as u128 * gap as u128,
        _ => gap as u128,
    }
}

fn to_rational(raw: u128, unit: u128, norm: Norm) -> Rational {
    let den = if norm.squared() { unit * unit } else { unit };
    Rational::new(raw as i128, den as i128)
}

/// Exact distance between two points of `points`' grid (squared for l2).
pub fn pair_distance(points: &NetPoints, x: &[u64], y: &[u64], norm: Norm, toroidal: bool) -> Result<Rational> {
    if x.len() != points.d || y.len() != points.d {
        return Err(Error::dim(format!("points must have {} coordinates", points.d)));
    }
    let scale = points.scale();
    Ok(to_rational(
        raw_distance(x, y, scale, norm, toroidal),
        scale as u128,
        norm,
    ))
}

/// Half the minimum pairwise distance, with the lexicographically smallest
/// index pair attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationRadius {
    /// `q` (or `q^2` for l2).
    pub q: Rational,
    pub witness: (usize, usize),
    /// Minimum pairwise distance in units of `b^-m` (squared for l2).
    pub raw_distance: u128,
}

fn finish_separation(best: (u128, usize, usize), scale: u64, norm: Norm) -> SeparationRadius {
    let (raw, i, j) = best;
    SeparationRadius {
        q: to_rational(raw, 2 * scale as u128, norm),
        witness: (i, j),
        raw_distance: raw,
    }
}

fn require_pairs(points: &NetPoints) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::invalid("the separation radius needs at least two points"));
    }
    Ok(())
}

/// Separation radius by a sweep over the points sorted along the first axis.
/// Each point only scans forward while the first-axis gap could still beat
/// its best candidate; on the torus the scan wraps around.
pub fn separation_radius(points: &NetPoints, norm: Norm, toroidal: bool, exec: Execution) -> Result<SeparationRadius> {
    require_pairs(points)?;
    let n = points.len();
    let scale = points.scale();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&i| (points.point(i)[0], i));
    let best = exec
        .min_over(0..n, |pos| {
            let i = order[pos];
            let xi = points.point(i);
            let mut local: Option<(u128, usize, usize)> = None;
            for step in 1..n {
                let next = pos + step;
                if !toroidal && next >= n {
                    break;
                }
                let j = order[next % n];
                let xj = points.point(j);
                let forward = if next < n { xj[0] - xi[0] } else { xj[0] + scale - xi[0] };
                if let Some((d, _, _)) = local {
                    if gap_bound(forward, norm) > d {
                        break;
                    }
                }
                let cand = (raw_distance(xi, xj, scale, norm, toroidal), i.min(j), i.max(j));
                if local.is_none_or(|l| cand < l) {
                    local = Some(cand);
                }
            }
            local
        })
        .expect("at least two points");
    Ok(finish_separation(best, scale, norm))
}

/// O(N^2) reference scan over all pairs.
pub fn separation_radius_bruteforce(
    points: &NetPoints,
    norm: Norm,
    toroidal: bool,
    exec: Execution,
) -> Result<SeparationRadius> {
    require_pairs(points)?;
    let n = points.len();
    let scale = points.scale();
    let best = exec
        .min_over(0..n, |i| {
            let xi = points.point(i);
            (i + 1..n)
                .map(|j| (raw_distance(xi, points.point(j), scale, norm, toroidal), i, j))
                .min()
        })
        .expect("at least two points");
    Ok(finish_separation(best, scale, norm))
}

/// Covering radius bracket `h_lower <= h <= h_upper` (squares for l2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringBracket {
    pub h_lower: Rational,
    pub h_upper: Rational,
    /// Grid exponent `r` (cell side `b^-r`).
    pub resolution: u32,
    /// Index of a cell centre attaining `h_lower`, one entry per axis.
    pub worst_cell: Vec<u64>,
}

/// Default grid exponent: `ceil(m/d) + 2`.
pub fn default_resolution(m: usize, d: usize) -> u32 {
    (m.div_ceil(d) + 2) as u32
}

fn ceil_sqrt(v: u128) -> u128 {
    let mut r = (v as f64).sqrt() as u128;
    while r * r > v {
        r -= 1;
    }
    while r * r < v {
        r += 1;
    }
    r
}

/// Uniform bucket grid over the points with `g` cells per axis.
struct BucketGrid {
    g: u64,
    /// Width of a bucket in point units.
    width: u64,
    starts: Vec<usize>,
    members: Vec<usize>,
}

impl BucketGrid {
    fn new(points: &NetPoints) -> Self {
        let (b, d, n) = (points.b as u64, points.d, points.len() as u128);
        let mut k = 0u32;
        while (k as usize) < points.m && (b.pow(k + 1) as u128).pow(d as u32) <= n.max(1) {
            k += 1;
        }
        let g = b.pow(k);
        let width = points.scale() / g;
        let cells = (g as usize).pow(d as u32);
        let cell_of = |p: &[u64]| p.iter().fold(0usize, |acc, &x| acc * g as usize + (x / width) as usize);
        let mut counts = vec![0usize; cells + 1];
        for p in points.points() {
            counts[cell_of(p) + 1] += 1;
        }
        for c in 1..=cells {
            counts[c] += counts[c - 1];
        }
        let mut fill = counts.clone();
        let mut members = vec![0usize; points.len()];
        for (i, p) in points.points().enumerate() {
            let c = cell_of(p);
            members[fill[c]] = i;
            fill[c] += 1;
        }
        Self {
            g,
            width,
            starts: counts,
            members,
        }
    }

    fn cell_members(&self, cell: &[u64]) -> &[usize] {
        let idx = cell.iter().fold(0usize, |acc, &x| acc * self.g as usize + x as usize);
        &self.members[self.starts[idx]..self.starts[idx + 1]]
    }
}

/// Calls `visit` on every cell at Chebyshev distance exactly `ring` from `home`
/// (clipped to the grid, or wrapped when `toroidal`). Requires `2 ring + 1 <= g`
/// in the toroidal case so no cell is visited twice.
fn for_each_ring_cell(home: &[u64], ring: i64, g: u64, toroidal: bool, visit: &mut impl FnMut(&[u64])) {
    let d = home.len();
    let mut offset = vec![-ring; d];
    let mut cell = vec![0u64; d];
    'outer: loop {
        if offset.iter().any(|&o| o.abs() == ring) {
            let mut ok = true;
            for a in 0..d {
                let c = home[a] as i64 + offset[a];
                if toroidal {
                    cell[a] = c.rem_euclid(g as i64) as u64;
                } else if c < 0 || c >= g as i64 {
                    ok = false;
                    break;
                } else {
                    cell[a] = c as u64;
                }
            }
            if ok {
                visit(&cell);
            }
        }
        for a in (0..d).rev() {
            if offset[a] < ring {
                offset[a] += 1;
                continue 'outer;
            }
            offset[a] = -ring;
        }
        break;
    }
}

/// Nearest-point distance from `target` (given in units `1/(2 b^R)`; `up`
/// converts point coordinates to those units).
fn nearest_distance(
    points: &NetPoints,
    grid: &BucketGrid,
    target: &[u128],
    up: u128,
    norm: Norm,
    toroidal: bool,
) -> u128 {
    let full = points.scale() as u128 * up;
    let dist = |p: &[u64]| -> u128 {
        let gaps = target.iter().zip(p).map(|(&t, &x)| {
            let x = x as u128 * up;
            let g = t.abs_diff(x);
            if toroidal {
                g.min(full - g)
            } else {
                g
            }
        });
        match norm {
            Norm::Inf => gaps.max().unwrap_or(0),
            Norm::L1 => gaps.sum(),
            Norm::L2 => gaps.map(|g| g * g).sum(),
        }
    };
    let cell_units = grid.width as u128 * up;
    let home: Vec<u64> = target
        .iter()
        .map(|&t| ((t / cell_units) as u64).min(grid.g - 1))
        .collect();
    let mut best = u128::MAX;
    let mut ring = 0i64;
    loop {
        if toroidal && 2 * ring + 1 > grid.g as i64 || !toroidal && ring >= grid.g as i64 {
            if toroidal {
                // ring would alias: finish with a full scan
                return points.points().map(dist).min().unwrap_or(u128::MAX).min(best);
            }
            return best;
        }
        for_each_ring_cell(&home, ring, grid.g, toroidal, &mut |cell| {
            for &i in grid.cell_members(cell) {
                best = best.min(dist(points.point(i)));
            }
        });
        // cells beyond this ring are at least ring * width away on some axis
        let reach = ring as u128 * cell_units;
        let bound = if norm.squared() { reach * reach } else { reach };
        if best != u128::MAX && best <= bound {
            return best;
        }
        ring += 1;
    }
}

/// Brackets the covering radius using the cell centres of the `b^-r` grid.
pub fn covering_radius_bracket(
    points: &NetPoints,
    norm: Norm,
    toroidal: bool,
    resolution: u32,
    exec: Execution,
) -> Result<CoveringBracket> {
    if points.is_empty() {
        return Err(Error::invalid("the covering radius of an empty set is undefined"));
    }
    if resolution == 0 {
        return Err(Error::invalid("grid resolution r must be at least 1"));
    }
    let (b, d, m) = (points.b as u128, points.d, points.m as u32);
    let per_axis = b
        .checked_pow(resolution)
        .ok_or_else(|| Error::TooLarge("grid resolution".into()))?;
    let cells = per_axis
        .checked_pow(d as u32)
        .filter(|&c| c <= MAX_GRID_CELLS)
        .ok_or_else(|| Error::TooLarge(format!("{}^({}*{}) grid cells exceed 2^26", b, resolution, d)))?;
    let big_r = resolution.max(m);
    // units of 1/(2 b^R); keep squared l2 distances inside u128
    let unit = b
        .checked_pow(big_r)
        .map(|v| 2 * v)
        .filter(|&u| u < (1u128 << 60))
        .ok_or_else(|| Error::TooLarge("grid and point resolution too fine".into()))?;
    let up = 2 * b.pow(big_r - m);
    let half_cell = b.pow(big_r - resolution);
    let grid = BucketGrid::new(points);
    let (best_raw, best_cell) = exec
        .max_over(0..cells as usize, |c| {
            let mut rest = c as u128;
            let mut idx = vec![0u64; d];
            for a in (0..d).rev() {
                idx[a] = (rest % per_axis) as u64;
                rest /= per_axis;
            }
            let target: Vec<u128> = idx.iter().map(|&i| (2 * i as u128 + 1) * half_cell).collect();
            let f = nearest_distance(points, &grid, &target, up, norm, toroidal);
            // prefer the lowest cell among ties
            Some((f, std::cmp::Reverse(c), idx))
        })
        .map(|(f, _, idx)| (f, idx))
        .expect("nonempty grid");
    let h_lower = to_rational(best_raw, unit, norm);
    let h_upper = match norm {
        Norm::Inf => Rational::new((best_raw + half_cell) as i128, unit as i128),
        Norm::L1 => Rational::new((best_raw + d as u128 * half_cell) as i128, unit as i128),
        Norm::L2 => {
            // (sqrt(f^2) + sqrt(d) * s/2)^2 rounded outward to whole units
            let up_len = ceil_sqrt(best_raw) + ceil_sqrt(d as u128 * half_cell * half_cell);
            Rational::new((up_len * up_len) as i128, (unit * unit) as i128)
        }
    };
    Ok(CoveringBracket {
        h_lower,
        h_upper,
        resolution,
        worst_cell: best_cell,
    })
}

/// Complete geometry report for one point set.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusReport {
    pub norm: Norm,
    pub toroidal: bool,
    pub q: Rational,
    pub q_witness: (usize, usize),
    pub h_lower: Rational,
    pub h_upper: Rational,
    /// `None` when two points coincide (`q = 0`).
    pub rho_lower: Option<Rational>,
    pub rho_upper: Option<Rational>,
    pub resolution: u32,
}

/// Separation radius, covering bracket and mesh-ratio bracket together.
pub fn analyze(
    points: &NetPoints,
    norm: Norm,
    toroidal: bool,
    resolution: Option<u32>,
    exec: Execution,
) -> Result<RadiusReport> {
    let sep = separation_radius(points, norm, toroidal, exec)?;
    let r = resolution.unwrap_or_else(|| default_resolution(points.m, points.d));
    let cov = covering_radius_bracket(points, norm, toroidal, r, exec)?;
    let ratio = |h: &Rational| (!sep.q.is_zero()).then(|| h / sep.q);
    Ok(RadiusReport {
        norm,
        toroidal,
        rho_lower: ratio(&cov.h_lower),
        rho_upper: ratio(&cov.h_upper),
        q: sep.q,
        q_witness: sep.witness,
        h_lower: cov.h_lower,
        h_upper: cov.h_upper,
        resolution: r,
    })
}

/// Volume-argument bounds; floating point, diagnostic only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: u64,
    pub d: usize,
    pub p: Norm,
    /// Every N-point set has `h_p >= h_volume_lower`.
    pub h_volume_lower: f64,
    /// Every N-point set has `q_p <= q_volume_upper`; `None` when the bound
    /// degenerates (non-positive denominator).
    pub q_volume_upper: Option<f64>,
}

/// `Gamma(k/2)` for a positive integer `k`.
fn gamma_half(k: u32) -> f64 {
    if k % 2 == 0 {
        (1..k / 2).map(|i| i as f64).product()
    } else {
        // Gamma(1/2) = sqrt(pi), Gamma(x+1) = x Gamma(x)
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while (2.0 * x) < k as f64 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

pub fn volume_bounds(n: u64, d: usize, p: Norm) -> Result<BoundsReport> {
    if n < 2 || d == 0 {
        return Err(Error::invalid("volume bounds need N >= 2 and d >= 1"));
    }
    // (Gamma(1 + 1/p), Gamma(1 + d/p))
    let (g1, gd) = match p {
        Norm::Inf => (1.0, 1.0),
        Norm::L1 => (1.0, gamma_half(2 * d as u32 + 2)),
        Norm::L2 => (gamma_half(3), gamma_half(d as u32 + 2)),
    };
    let root = gd.powf(1.0 / d as f64);
    let nroot = (n as f64).powf(1.0 / d as f64);
    let h_volume_lower = root / (2.0 * g1 * nroot);
    let den = 2.0 * nroot * g1 - 2.0 * root;
    let q_volume_upper = (den > 0.0).then(|| root / den);
    Ok(BoundsReport {
        n,
        d,
        p,
        h_volume_lower,
        q_volume_upper,
    })
}

/// Smallest `M` with `M^d >= v`.
fn ceil_root(v: u128, d: u32) -> u128 {
    let mut r = (v as f64).powf(1.0 / d as f64).floor() as u128;
    while r > 0 && r.checked_pow(d).is_none_or(|p| p >= v) {
        r -= 1;
    }
    while r.checked_pow(d).is_some_and(|p| p < v) {
        r += 1;
    }
    r
}

/// `b^{(d+t-1)/d} b^{-m/d}`, the covering-radius bound for `(t,m,d)`-nets.
/// Exact when the exponent is an integer; otherwise rounded up to the next
/// multiple of `b^-k`, one digit past the integer part of the exponent.
pub fn tmd_net_covering_bound(b: u32, m: usize, d: usize, t: u32) -> Result<Rational> {
    if t as usize > m || d == 0 {
        return Err(Error::invalid("need t <= m and d >= 1"));
    }
    let e = d as i64 + t as i64 - 1 - m as i64;
    let di = d as i64;
    let bb = b as i128;
    let pow = |k: i64| -> Result<i128> {
        bb.checked_pow(k as u32)
            .ok_or_else(|| Error::TooLarge("bound exponent".into()))
    };
    if e % di == 0 {
        let k = e / di;
        return Ok(if k >= 0 {
            Rational::from_integer(pow(k)?)
        } else {
            Rational::new(1, pow(-k)?)
        });
    }
    let k = (-e).div_euclid(di) + 1 + 1; // ceil(-e/d) + 1 for non-integral -e/d
    let k = k.max(1);
    let target = pow(e + k * di)? as u128;
    Ok(Rational::new(ceil_root(target, d as u32) as i128, pow(k)?))
}

/// Successive prefix-size ratios of a sequence: `(max |P_{i+1}|/|P_i|, max |P_i|/|P_{i+1}|)`.
/// The first is the quantity a quasi-uniform sequence must keep bounded;
/// the second is the condition as literally written, reported alongside.
pub fn growth_ratios(sizes: &[u64]) -> (Rational, Rational) {
    let ratios: Vec<(Rational, Rational)> = sizes
        .windows(2)
        .filter(|w| w[0] > 0 && w[1] > 0)
        .map(|w| {
            (
                Rational::new(w[1] as i128, w[0] as i128),
                Rational::new(w[0] as i128, w[1] as i128),
            )
        })
        .collect();
    let up = ratios.iter().map(|r| r.0).max().unwrap_or_else(Rational::one);
    let down = ratios.iter().map(|r| r.1).max().unwrap_or_else(Rational::one);
    (up, down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::*;
    use crate::pointgen::generate_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SEQ: Execution = Execution::Sequential;

    fn pts(b: u64, m: usize, d: usize, coords: &[u64]) -> NetPoints {
        NetPoints::new(b, m, d, coords.to_vec(), "t").unwrap()
    }

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn random_points(rng: &mut ChaCha8Rng, b: u64, m: usize, d: usize, n: usize) -> NetPoints {
        let scale = b.pow(m as u32);
        let coords = (0..n * d).map(|_| rng.random_range(0..scale)).collect();
        NetPoints::new(b, m, d, coords, "random").unwrap()
    }

    #[test]
    fn pair_distance_examples() {
        let p = pts(2, 2, 1, &[0, 3]);
        assert_eq!(pair_distance(&p, &[1], &[1], Norm::Inf, false).unwrap(), r(0, 1));
        assert_eq!(pair_distance(&p, &[0], &[3], Norm::Inf, true).unwrap(), r(1, 4));
        let p2 = pts(2, 2, 2, &[0, 0, 2, 1]);
        assert_eq!(pair_distance(&p2, &[0, 0], &[2, 1], Norm::Inf, false).unwrap(), r(1, 2));
        assert_eq!(pair_distance(&p2, &[0, 0], &[2, 1], Norm::L1, false).unwrap(), r(3, 4));
        assert_eq!(pair_distance(&p2, &[0, 0], &[2, 1], Norm::L2, false).unwrap(), r(5, 16));
        assert!(pair_distance(&p2, &[0], &[2, 1], Norm::L2, false).is_err());
    }

    #[test]
    fn separation_examples() {
        let q = separation_radius(&pts(2, 1, 1, &[0, 1]), Norm::Inf, false, SEQ).unwrap();
        assert_eq!(q.q, r(1, 4));
        for m in 1..8 {
            let v = generate_points(&vdc_matrices(2, m).unwrap(), None, SEQ).unwrap();
            assert_eq!(
                separation_radius(&v, Norm::Inf, false, SEQ).unwrap().q,
                r(1, 1 << (m + 1))
            );
        }
        let h = generate_points(&hammersley_matrices(2, 4).unwrap(), None, SEQ).unwrap();
        // values from an independent all-pairs scan of the radical-inverse pairs
        let s = separation_radius(&h, Norm::Inf, false, SEQ).unwrap();
        assert_eq!((s.q, s.witness), (r(1, 16), (2, 4)));
        assert_eq!(
            pair_distance(&h, h.point(9), h.point(6), Norm::Inf, false).unwrap(),
            r(3, 16)
        );
        assert!(separation_radius(&pts(2, 1, 1, &[0]), Norm::Inf, false, SEQ).is_err());
        let dup = separation_radius(&pts(3, 1, 2, &[1, 1, 0, 2, 1, 1]), Norm::L1, true, SEQ).unwrap();
        assert_eq!((dup.q, dup.witness), (r(0, 1), (0, 2)));
    }

    #[test]
    fn sweep_matches_bruteforce() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..120 {
            let b = [2u64, 3, 5][trial % 3];
            let m = rng.random_range(1..5);
            let d = rng.random_range(1..4);
            let n = rng.random_range(2..60);
            let p = random_points(&mut rng, b, m, d, n);
            for norm in [Norm::L1, Norm::L2, Norm::Inf] {
                for tor in [false, true] {
                    let fast = separation_radius(&p, norm, tor, Execution::Parallel).unwrap();
                    let slow = separation_radius_bruteforce(&p, norm, tor, SEQ).unwrap();
                    assert_eq!(fast, slow, "trial {trial} {norm} toroidal={tor}");
                }
            }
        }
    }

    #[test]
    fn toroidal_and_norm_orderings() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..50 {
            let p = random_points(&mut rng, 2, 5, 2, 20);
            let q = |n, t| separation_radius(&p, n, t, SEQ).unwrap().q;
            for n in [Norm::L1, Norm::Inf] {
                assert!(q(n, true) <= q(n, false));
            }
            // compare l2 through its square
            let (qi, q2, q1) = (q(Norm::Inf, false), q(Norm::L2, false), q(Norm::L1, false));
            assert!(qi * qi <= q2 && q2 <= q1 * q1);
            let h = |t| covering_radius_bracket(&p, Norm::Inf, t, 6, SEQ).unwrap();
            // plain covering radius dominates the toroidal one
            assert!(h(true).h_lower <= h(false).h_upper);
        }
    }

    /// Exact 1-d covering radius from sorted gaps.
    fn exact_h_1d(xs: &[u64], scale: u64) -> Rational {
        let mut v = xs.to_vec();
        v.sort_unstable();
        let mut best = r(v[0] as i128, scale as i128).max(r((scale - v[v.len() - 1]) as i128, scale as i128));
        for w in v.windows(2) {
            best = best.max(r((w[1] - w[0]) as i128, 2 * scale as i128));
        }
        best
    }

    #[test]
    fn covering_bracket_contains_exact_1d() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let m = rng.random_range(1..7);
            let n = rng.random_range(1..20);
            let p = random_points(&mut rng, 2, m, 1, n);
            let exact = exact_h_1d(p.coords(), p.scale());
            let mut width = None;
            for res in 1..(m as u32 + 4) {
                let c = covering_radius_bracket(&p, Norm::Inf, false, res, Execution::Parallel).unwrap();
                assert!(c.h_lower <= exact && exact <= c.h_upper, "res {res}");
                let w = c.h_upper - c.h_lower;
                assert!(w <= r(1, 2i128.pow(res + 1)));
                if let Some(prev) = width {
                    assert!(w <= prev);
                }
                width = Some(w);
            }
        }
    }

    #[test]
    fn covering_examples() {
        let one = pts(2, 3, 1, &[0]);
        let c = covering_radius_bracket(&one, Norm::Inf, false, 3, SEQ).unwrap();
        assert!(c.h_lower <= r(1, 1) && r(1, 1) <= c.h_upper);
        for m in 1..9 {
            let v = generate_points(&vdc_matrices(2, m).unwrap(), None, SEQ).unwrap();
            let c = covering_radius_bracket(&v, Norm::Inf, false, m as u32 + 2, SEQ).unwrap();
            let h = r(1, 1 << m);
            assert!(c.h_lower <= h && h <= c.h_upper);
        }
        assert!(covering_radius_bracket(&one, Norm::Inf, false, 0, SEQ).is_err());
        let big = pts(2, 2, 3, &[0, 0, 0]);
        assert!(matches!(
            covering_radius_bracket(&big, Norm::Inf, false, 9, SEQ),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn covering_grid_search_matches_full_scan() {
        // nearest_distance with bucket rings against the direct minimum
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for trial in 0..40 {
            let d = 1 + trial % 3;
            let n = rng.random_range(1..40);
            let p = random_points(&mut rng, 3, 3, d, n);
            let grid = BucketGrid::new(&p);
            for norm in [Norm::L1, Norm::L2, Norm::Inf] {
                for tor in [false, true] {
                    for _ in 0..30 {
                        let target: Vec<u128> = (0..d).map(|_| rng.random_range(0..2 * 27)).collect();
                        let fast = nearest_distance(&p, &grid, &target, 2, norm, tor);
                        let slow = p
                            .points()
                            .map(|x| {
                                let gaps = target.iter().zip(x).map(|(&t, &xv)| {
                                    let g = t.abs_diff(2 * xv as u128);
                                    if tor {
                                        g.min(54 - g)
                                    } else {
                                        g
                                    }
                                });
                                match norm {
                                    Norm::Inf => gaps.max().unwrap(),
                                    Norm::L1 => gaps.sum(),
                                    Norm::L2 => gaps.map(|g| g * g).sum(),
                                }
                            })
                            .min()
                            .unwrap();
                        assert_eq!(fast, slow);
                    }
                }
            }
        }
    }

    #[test]
    fn prefix_monotonicity() {
        let v = generate_points(&vdc_matrices(2, 7).unwrap(), None, SEQ).unwrap();
        let s = generate_points(&faure_matrices(2, 7).unwrap(), None, SEQ).unwrap();
        for net in [v, s] {
            let mut prev: Option<(Rational, Rational)> = None;
            for i in (2..=net.len()).step_by(3) {
                let p = net.prefix(i).unwrap();
                let q = separation_radius(&p, Norm::Inf, false, SEQ).unwrap().q;
                let c = covering_radius_bracket(&p, Norm::Inf, false, 9, SEQ).unwrap();
                if let Some((pq, ph)) = prev {
                    assert!(q <= pq);
                    assert!(c.h_lower <= ph);
                }
                prev = Some((q, c.h_upper));
            }
        }
    }

    #[test]
    fn volume_bound_examples() {
        let v = volume_bounds(4, 2, Norm::Inf).unwrap();
        assert!((v.h_volume_lower - 0.25).abs() < 1e-12);
        assert!((v.q_volume_upper.unwrap() - 0.5).abs() < 1e-12);
        for n in [2u64, 10, 1000] {
            for d in 1..5 {
                let v = volume_bounds(n, d, Norm::Inf).unwrap();
                assert!((v.h_volume_lower - (n as f64).powf(-1.0 / d as f64) / 2.0).abs() < 1e-12);
            }
        }
        // l2 in d = 2: unit disc area pi, so h >= 1/sqrt(pi N)
        let v = volume_bounds(100, 2, Norm::L2).unwrap();
        assert!((v.h_volume_lower - 1.0 / (std::f64::consts::PI * 100.0).sqrt()).abs() < 1e-12);
        assert!((gamma_half(5) - 0.75 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(volume_bounds(2, 2, Norm::L1).unwrap().q_volume_upper.is_none());
    }

    #[test]
    fn tmd_bound_examples() {
        assert_eq!(tmd_net_covering_bound(2, 3, 1, 0).unwrap(), r(1, 8));
        assert_eq!(tmd_net_covering_bound(2, 4, 2, 0).unwrap(), r(3, 8));
        assert_eq!(tmd_net_covering_bound(3, 4, 2, 1).unwrap(), r(1, 3));
        for b in [2u32, 3, 5] {
            for m in 1..12 {
                for d in 1..4 {
                    let v = tmd_net_covering_bound(b, m, d, 0).unwrap();
                    let exact = (b as f64).powf((d as f64 - 1.0 - m as f64) / d as f64);
                    assert!(ratio_f64(&v) >= exact - 1e-15);
                    assert!(ratio_f64(&v) <= exact * 1.5 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn growth() {
        let (up, down) = growth_ratios(&[1, 2, 4, 8, 12]);
        assert_eq!((up, down), (r(2, 1), r(2, 3)));
    }
}
