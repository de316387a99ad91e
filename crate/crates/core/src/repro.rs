//! Named reproduction scenarios. Each one instantiates a published bound or
//! identity for concrete parameters, measures the exact value and reports
//! whether the stated relation holds.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::construct::{
    faure_matrices, fibonacci_lattice_matrices, hammersley_matrices, lp_matrices, random_lower_unit, sobol2_scrambled,
    vdc_matrices, NetSpec, ScrambleVariant,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::FieldMatrix;
use crate::geometry::{
    covering_radius_bracket, growth_ratios, pair_distance, ratio_string, separation_radius, Norm, Rational,
};
use crate::pointgen::{digital_shift, generate_points, point_digits, point_of_index, NetPoints, ShiftVector};
use crate::separation::{
    criterion_check, is_c_separated_bruteforce, min_kappa_bruteforce, q_lower_from_kappa, t_value, CriterionOutcome,
};

/// One verified relation inside a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub claimed: String,
    pub measured: String,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, claimed: impl Into<String>, measured: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            claimed: claimed.into(),
            measured: measured.into(),
            pass,
        }
    }

    fn le(name: &str, measured: &Rational, bound: &Rational) -> Self {
        Self::new(
            name,
            format!("<= {}", ratio_string(bound)),
            ratio_string(measured),
            measured <= bound,
        )
    }

    fn ge(name: &str, measured: &Rational, bound: &Rational) -> Self {
        Self::new(
            name,
            format!(">= {}", ratio_string(bound)),
            ratio_string(measured),
            measured >= bound,
        )
    }

    fn eq(name: &str, measured: &Rational, expected: &Rational) -> Self {
        Self::new(
            name,
            format!("= {}", ratio_string(expected)),
            ratio_string(measured),
            measured == expected,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproResult {
    pub scenario: String,
    pub params: BTreeMap<String, Value>,
    /// The relation being reproduced, in words.
    pub claimed: String,
    /// Headline measured value (exact).
    pub measured: String,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub runtime_ms: u64,
    pub seed: Option<u64>,
}

struct Builder {
    scenario: &'static str,
    params: BTreeMap<String, Value>,
    claimed: String,
    seed: Option<u64>,
    started: Instant,
}

impl Builder {
    fn new(scenario: &'static str, claimed: impl Into<String>) -> Self {
        Self {
            scenario,
            params: BTreeMap::new(),
            claimed: claimed.into(),
            seed: None,
            started: Instant::now(),
        }
    }

    fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self.params.insert("seed".into(), seed.into());
        self
    }

    fn finish(self, measured: impl Into<String>, checks: Vec<Check>) -> ReproResult {
        ReproResult {
            scenario: self.scenario.into(),
            params: self.params,
            claimed: self.claimed,
            measured: measured.into(),
            pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
            checks,
            runtime_ms: self.started.elapsed().as_millis() as u64,
            seed: self.seed,
        }
    }
}

fn pow_ratio(b: u32, e: i64) -> Rational {
    let p = (b as i128).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(1, p)
    }
}

fn is_power_of(mut n: usize, b: usize) -> bool {
    while n > 1 && n % b == 0 {
        n /= b;
    }
    n == 1
}

/// Smallest `m` with `b^m >= n`.
fn digits_for(b: u32, n: u64) -> usize {
    let mut m = 0;
    while (b as u64).pow(m as u32) < n {
        m += 1;
    }
    m
}

/// Mesh ratio of every prefix `2 <= i <= i_max` of the van der Corput sequence
/// stays at most `2b`.
pub fn repro_vdc_mesh(b: u32, i_max: u64, exec: Execution) -> Result<ReproResult> {
    if !(2..=1 << 14).contains(&i_max) {
        return Err(Error::invalid("i_max must lie in [2, 2^14]"));
    }
    let build = Builder::new("vdc", "mesh ratio of every prefix <= 2b")
        .param("b", b)
        .param("i_max", i_max);
    let m = digits_for(b, i_max).max(1);
    let net = generate_points(&vdc_matrices(b as u64, m)?, Some(i_max), exec)?;
    // one extra digit keeps the upper bracket below 2b (interior gaps are at most b times the smallest)
    let r = m as u32 + 1;
    let rows = exec.map_collect(2..i_max as usize + 1, |i| -> Result<(Rational, usize)> {
        let p = net.prefix(i)?;
        let q = separation_radius(&p, Norm::Inf, false, Execution::Sequential)?.q;
        let h = covering_radius_bracket(&p, Norm::Inf, false, r, Execution::Sequential)?;
        Ok((h.h_upper / q, i))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let (worst, at) = rows.iter().max().cloned().expect("at least one prefix");
    let bound = Rational::from_integer(2 * b as i128);
    let mut checks = vec![Check::le(
        &format!("max rho_upper over prefixes (attained at i = {at})"),
        &worst,
        &bound,
    )];
    // at i = b^k the prefix is a full grid and rho is exactly 2
    let two = Rational::from_integer(2);
    for (rho, i) in rows.iter().filter(|(_, i)| is_power_of(*i, b as usize)) {
        let p = net.prefix(*i)?;
        let q = separation_radius(&p, Norm::Inf, false, exec)?.q;
        let lower = covering_radius_bracket(&p, Norm::Inf, false, r, exec)?.h_lower / q;
        checks.push(Check::new(
            format!("rho at i = {i} brackets 2"),
            "2",
            ratio_string(rho),
            lower <= two && two <= *rho,
        ));
    }
    Ok(build.finish(ratio_string(&worst), checks))
}

/// Hammersley net: `q_inf <= (b-1)/(2 b^m)` and the pair
/// `(b^{m-1}+1, b^{m-1}-b)` at distance exactly `(b-1)/b^m`.
pub fn repro_hammersley(b: u32, m: usize, exec: Execution) -> Result<ReproResult> {
    if m < 2 || (b as u64).pow(m as u32) < b as u64 + 1 {
        return Err(Error::invalid("need m >= 2 so that b^{m-1} - b >= 0"));
    }
    if (b as u64).pow(m as u32) > 1 << 14 {
        return Err(Error::TooLarge("Hammersley scan limited to b^m <= 2^14".into()));
    }
    let build = Builder::new(
        "hammersley",
        "q_inf <= (b-1)/(2 b^m); pair (b^{m-1}+1, b^{m-1}-b) at distance (b-1)/b^m",
    )
    .param("b", b)
    .param("m", m);
    let pts = generate_points(&hammersley_matrices(b as u64, m)?, None, exec)?;
    let sep = separation_radius(&pts, Norm::Inf, false, exec)?;
    let scale = (b as i128).pow(m as u32);
    let n = (b as usize).pow(m as u32 - 1) + 1;
    let k = (b as usize).pow(m as u32 - 1) - b as usize;
    let dist = pair_distance(&pts, pts.point(n), pts.point(k), Norm::Inf, false)?;
    let checks = vec![
        Check::le("q_inf", &sep.q, &Rational::new(b as i128 - 1, 2 * scale)),
        Check::eq(
            &format!("distance of points {n} and {k}"),
            &dist,
            &Rational::new(b as i128 - 1, scale),
        ),
        Check::new(
            "closest pair",
            "-",
            format!(
                "({}, {}) at {}",
                sep.witness.0,
                sep.witness.1,
                ratio_string(&(sep.q * 2))
            ),
            true,
        ),
    ];
    Ok(build.finish(ratio_string(&sep.q), checks))
}

/// Scrambled base-2 Sobol' pair with `m = 2^w`: the pair `(1, k)` is within
/// `2^{1-m}`, hence `q_inf <= 2^-m`.
pub fn repro_sobol_scrambled(
    w: u32,
    variant: ScrambleVariant,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<ReproResult> {
    let m = 1usize << w;
    if m > 16 || w == 0 {
        return Err(Error::invalid("need 1 <= w and m = 2^w <= 16"));
    }
    let k = match variant {
        ScrambleVariant::LP => (1usize << (m - 1)) + 1,
        ScrambleVariant::ILP => (1usize << m) - 2,
    };
    let build = Builder::new(
        "sobol",
        format!("||x_1 - x_{k}||_inf <= 2^(1-m) and q_inf <= 2^-m for random L"),
    )
    .param("w", w)
    .param("m", m)
    .param("variant", variant.name())
    .param("trials", trials)
    .seed(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair_bound = pow_ratio(2, 1 - m as i64);
    let q_bound = pow_ratio(2, -(m as i64));
    let mut worst_pair = Rational::zero();
    let mut worst_q = Rational::zero();
    let mut failures = Vec::new();
    for trial in 0..trials {
        let l = random_lower_unit(2, m, &mut rng)?;
        let spec = sobol2_scrambled(m, &l, variant)?;
        let x1 = point_of_index(&spec, 1)?;
        let xk = point_of_index(&spec, k as u64)?;
        let pts = generate_points(&spec, None, exec)?;
        let d = pair_distance(&pts, &x1, &xk, Norm::Inf, false)?;
        let q = separation_radius(&pts, Norm::Inf, false, exec)?.q;
        if d > pair_bound || q > q_bound {
            failures.push(trial);
        }
        worst_pair = worst_pair.max(d);
        worst_q = worst_q.max(q);
    }
    let checks = vec![
        Check::le(
            &format!("max ||x_1 - x_{k}||_inf over trials"),
            &worst_pair,
            &pair_bound,
        ),
        Check::le("max q_inf over trials", &worst_q, &q_bound),
        Check::new("failing trials", "none", format!("{failures:?}"), failures.is_empty()),
    ];
    Ok(build.finish(ratio_string(&worst_q), checks))
}

fn big_fraction(digits: &[u32], b: u32) -> BigRational {
    let bb = BigInt::from(b);
    let num = digits
        .iter()
        .fold(BigInt::zero(), |acc, &x| acc * &bb + BigInt::from(x));
    BigRational::new(num, bb.pow(digits.len() as u32))
}

fn big_pow_inv(b: u32, e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(b).pow(e))
}

fn big_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Faure net in base `b` with `m = (b-1) b^w` and `n = b^m - b`:
/// `||x_1 - x_n||_inf <= b^{-(b^w - 1)}` plus the per-coordinate facts.
pub fn repro_faure(b: u32, w: u32) -> Result<ReproResult> {
    let bw = (b as usize)
        .checked_pow(w)
        .ok_or_else(|| Error::TooLarge("b^w".into()))?;
    let m = (b as usize - 1) * bw;
    if m > 128 || w == 0 {
        return Err(Error::invalid("need w >= 1 and m = (b-1) b^w <= 128"));
    }
    let build = Builder::new(
        "faure",
        "||x_1 - x_n||_inf <= b^-(b^w - 1) with m = (b-1) b^w, n = b^m - b",
    )
    .param("b", b)
    .param("w", w)
    .param("m", m);
    let spec = faure_matrices(b as u64, m)?;
    let bb = num_bigint::BigUint::from(b);
    let n = bb.pow(m as u32) - &bb;
    let xn: Vec<BigRational> = point_digits(&spec, &n)?.iter().map(|d| big_fraction(d, b)).collect();
    let x1: Vec<BigRational> = point_digits(&spec, &num_bigint::BigUint::one())?
        .iter()
        .map(|d| big_fraction(d, b))
        .collect();
    let inv_b = big_pow_inv(b, 1);
    let dist = x1
        .iter()
        .zip(&xn)
        .map(|(a, c)| (a - c).abs())
        .max()
        .expect("b >= 2 coordinates");
    let bound = big_pow_inv(b, bw as u32 - 1);
    let mut checks = vec![Check::new(
        "||x_1 - x_n||_inf",
        format!("<= {}", big_string(&bound)),
        big_string(&dist),
        dist <= bound,
    )];
    checks.push(Check::new(
        "x_1",
        format!("all coordinates {}", big_string(&inv_b)),
        x1.iter().map(big_string).collect::<Vec<_>>().join(", "),
        x1.iter().all(|x| *x == inv_b),
    ));
    let first = &inv_b - big_pow_inv(b, m as u32);
    checks.push(Check::new(
        "x_n, coordinate 1",
        format!("= {}", big_string(&first)),
        big_string(&xn[0]),
        xn[0] == first,
    ));
    for (j, x) in xn.iter().enumerate().skip(1) {
        // coordinate generated by P^j
        let width = if j == 1 {
            big_pow_inv(b, bw as u32 - 1)
        } else {
            big_pow_inv(b, bw as u32)
        };
        let upper = &inv_b + &width;
        checks.push(Check::new(
            format!("x_n, coordinate {}", j + 1),
            format!("in [{}, {})", big_string(&inv_b), big_string(&upper)),
            big_string(x),
            *x >= inv_b && *x < upper,
        ));
    }
    Ok(build.finish(big_string(&dist), checks))
}

/// Fibonacci polynomial lattice with `m = 2^k - 1`: the pair
/// `n, n' = 2^{m-m'-2} -/+ 2^{m'-1}` is exactly `2^{-m+m'}` apart.
pub fn repro_fibonacci(k: u32, exec: Execution) -> Result<ReproResult> {
    if !(4..=6).contains(&k) {
        return Err(Error::invalid("k must lie in 4..=6"));
    }
    let m = (1usize << k) - 1;
    let mp = (1usize << (k - 3)) - 1;
    let n = (1u64 << (m - mp - 2)) - (1u64 << (mp - 1));
    let np = (1u64 << (m - mp - 2)) + (1u64 << (mp - 1));
    let build = Builder::new(
        "fibonacci",
        "||x_n - x_n'||_inf = 2^(-m+m'); q_inf <= 2^(-m+m'-1) = 2^(-15/8) N^(-7/8)",
    )
    .param("k", k)
    .param("m", m)
    .param("m_prime", mp)
    .param("n", n)
    .param("n_prime", np);
    let spec = fibonacci_lattice_matrices(m)?;
    let (x, y) = (point_of_index(&spec, n)?, point_of_index(&spec, np)?);
    let scale = 1i128 << m;
    let raw = x.iter().zip(&y).map(|(a, c)| a.abs_diff(*c)).max().unwrap_or(0);
    let dist = Rational::new(raw as i128, scale);
    let expected = pow_ratio(2, mp as i64 - m as i64);
    let mut checks = vec![Check::eq(&format!("||x_{n} - x_{np}||_inf"), &dist, &expected)];
    let q_bound = pow_ratio(2, mp as i64 - m as i64 - 1);
    // 2^(-m+m'-1) and 2^(-15/8) N^(-7/8) agree exactly when 8(-m+m'-1) = -15 - 7m
    let same_rate = 8 * (mp as i64 - m as i64 - 1) == -15 - 7 * m as i64;
    checks.push(Check::new(
        "exponent of 2^(-m+m'-1) vs 2^(-15/8) N^(-7/8)",
        format!("{} = -(15 + 7m)/8", mp as i64 - m as i64 - 1),
        format!("{}/8", -15 - 7 * m as i64),
        same_rate,
    ));
    if m <= 20 {
        let pts = generate_points(&spec, None, exec)?;
        let q = separation_radius(&pts, Norm::Inf, false, exec)?.q;
        checks.push(Check::le("q_inf by full scan", &q, &q_bound));
    }
    Ok(build.finish(ratio_string(&dist), checks))
}

/// The separation level `c = (ceil(m/2)+1, floor(m/2)+1)` for LP nets.
pub fn lp_level(m: usize) -> Vec<u32> {
    vec![m.div_ceil(2) as u32 + 1, (m / 2) as u32 + 1]
}

/// LP nets under random digital shifts: toroidal separation at the level
/// `(ceil(m/2)+1, floor(m/2)+1)`, the implied separation-radius bound and
/// a bounded mesh ratio.
pub fn repro_lp(b: u32, m: usize, shifts: usize, seed: u64, exec: Execution) -> Result<ReproResult> {
    if (b as u64).pow(m as u32) > 1 << 20 {
        return Err(Error::TooLarge("LP reproduction limited to b^m <= 2^20".into()));
    }
    let c = lp_level(m);
    let kappa = c[0];
    let build = Builder::new(
        "lp",
        "toroidally separated at (ceil(m/2)+1, floor(m/2)+1) under every shift",
    )
    .param("b", b)
    .param("m", m)
    .param("shifts", shifts)
    .param("c", c.clone())
    .seed(seed);
    let spec = lp_matrices(b as u64, m)?;
    let base = generate_points(&spec, None, exec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q_bound = q_lower_from_kappa(b, kappa).expect("small kappa");
    // h <= b^{1/2 - m/2} and 1/q <= 2 b^{kappa+1}/(b-1): (2 b^{kappa - m/2 + 3/2} / (b-1))^2 against rho^2
    let rho_sq_bound = Rational::new(4, (b as i128 - 1).pow(2)) * pow_ratio(b, 2 * kappa as i64 - m as i64 + 3);
    let mut separated = 0;
    let mut agree = 0;
    let mut compared = 0;
    let mut min_q = None::<Rational>;
    let mut max_rho = Rational::zero();
    for _ in 0..shifts {
        let shift = ShiftVector::random(b, m, 2, &mut rng);
        let outcome = criterion_check(&spec, &shift, &c, true, exec)?;
        let is_sep = outcome == CriterionOutcome::Separated;
        separated += usize::from(is_sep);
        let pts = digital_shift(&base, &shift)?;
        if pts.len() <= 1 << 14 {
            compared += 1;
            agree += usize::from(is_c_separated_bruteforce(&pts, &c, true, exec)?.is_none() == is_sep);
        }
        let qt = separation_radius(&pts, Norm::Inf, true, exec)?.q;
        min_q = Some(min_q.map_or(qt, |v| v.min(qt)));
        let q = separation_radius(&pts, Norm::Inf, false, exec)?.q;
        let r = crate::geometry::default_resolution(m, 2);
        let h = covering_radius_bracket(&pts, Norm::Inf, false, r, exec)?;
        max_rho = max_rho.max(h.h_upper / q);
    }
    let min_q = min_q.unwrap_or_else(Rational::zero);
    let checks = vec![
        Check::new(
            "criterion separated",
            format!("{shifts}/{shifts}"),
            format!("{separated}/{shifts}"),
            separated == shifts,
        ),
        Check::new(
            "criterion agrees with pairwise test",
            format!("{compared}/{compared}"),
            format!("{agree}/{compared}"),
            agree == compared,
        ),
        Check::ge("min toroidal q_inf", &min_q, &q_bound),
        Check::le("max rho_upper squared", &(max_rho * max_rho), &rho_sq_bound),
    ];
    Ok(build.finish(format!("{separated}/{shifts}"), checks))
}

/// Replaces the rows of the LP matrices below the separation level with
/// random rows (keeping a (0,m,2)-net) and re-runs the criterion.
pub fn repro_lp_generalization(b: u32, m: usize, trials: usize, seed: u64, exec: Execution) -> Result<ReproResult> {
    let c = lp_level(m);
    let build = Builder::new(
        "lp-generalized",
        "rows below the separation level do not affect separation",
    )
    .param("b", b)
    .param("m", m)
    .param("trials", trials)
    .seed(seed);
    let lp = lp_matrices(b as u64, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tested = 0;
    let mut separated = 0;
    let mut attempts = 0;
    while tested < trials && attempts < 200 * trials.max(1) {
        attempts += 1;
        let mats = lp
            .matrices
            .iter()
            .zip(&c)
            .map(|(f, &cj)| {
                FieldMatrix::from_fn(b as u64, m, m, |i, j| {
                    if i <= cj as usize {
                        f.get(i, j) as u64
                    } else {
                        rng.random_range(0..b) as u64
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = NetSpec::custom(mats, "lp-modified")?;
        if t_value(&spec)? != 0 {
            continue;
        }
        tested += 1;
        let shift = ShiftVector::random(b, m, 2, &mut rng);
        separated += usize::from(criterion_check(&spec, &shift, &c, true, exec)? == CriterionOutcome::Separated);
    }
    let checks = vec![Check::new(
        "modified (0,m,2)-nets separated",
        format!("{trials}/{trials}"),
        format!("{separated}/{tested}"),
        tested == trials && separated == trials,
    )];
    Ok(build.finish(format!("{separated}/{tested}"), checks))
}

/// Mesh-ratio profile of the prefixes of a digital sequence (data only).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrefixRow {
    pub size: u64,
    pub q: String,
    pub h_upper: String,
    pub rho_upper: Option<String>,
    pub rho_upper_approx: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrefixProfile {
    pub label: String,
    pub rows: Vec<PrefixRow>,
    /// `max |P_{i+1}| / |P_i|`
    pub growth_next_over_prev: String,
    /// `max |P_i| / |P_{i+1}|`
    pub growth_prev_over_next: String,
}

pub fn prefix_profile(spec: &NetSpec, sizes: &[u64], exec: Execution) -> Result<PrefixProfile> {
    let total = sizes
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Error::invalid("no prefix sizes given"))?;
    let net = generate_points(spec, Some(total), exec)?;
    let r = crate::geometry::default_resolution(spec.m, spec.d());
    let rows = sizes
        .iter()
        .map(|&size| {
            let p = net.prefix(size as usize)?;
            let q = separation_radius(&p, Norm::Inf, false, exec)?.q;
            let h = covering_radius_bracket(&p, Norm::Inf, false, r, exec)?.h_upper;
            let rho = (!q.is_zero()).then(|| h / q);
            Ok(PrefixRow {
                size,
                q: ratio_string(&q),
                h_upper: ratio_string(&h),
                rho_upper_approx: rho.as_ref().map(crate::geometry::ratio_f64),
                rho_upper: rho.as_ref().map(ratio_string),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (up, down) = growth_ratios(sizes);
    Ok(PrefixProfile {
        label: spec.label.clone(),
        rows,
        growth_next_over_prev: ratio_string(&up),
        growth_prev_over_next: ratio_string(&down),
    })
}

/// Randomized search over scrambles `(L_1, L_2 P)` of the base-2 Sobol' pair
/// for the smallest kappa. No completeness claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScrambleSearch {
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub best_kappa: Option<u32>,
    pub best_trial: Option<usize>,
    pub kappa_counts: BTreeMap<u32, usize>,
}

pub fn scramble_search(m: usize, trials: usize, seed: u64, exec: Execution) -> Result<ScrambleSearch> {
    if m > 14 {
        return Err(Error::TooLarge("scramble search limited to m <= 14".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = crate::construct::pascal_power_matrix(2, m, 1)?;
    let mut counts = BTreeMap::new();
    let mut best: Option<(u32, usize)> = None;
    for trial in 0..trials {
        let l1 = random_lower_unit(2, m, &mut rng)?;
        let l2 = random_lower_unit(2, m, &mut rng)?;
        let spec = NetSpec::custom(vec![l1, l2.mul(&p)?], "sobol2[L1,L2P]")?;
        let pts = generate_points(&spec, None, exec)?;
        if let Some(k) = min_kappa_bruteforce(&pts, false, exec)?.kappa {
            *counts.entry(k).or_insert(0) += 1;
            if best.is_none_or(|(bk, _)| k < bk) {
                best = Some((k, trial));
            }
        }
    }
    Ok(ScrambleSearch {
        m,
        trials,
        seed,
        best_kappa: best.map(|b| b.0),
        best_trial: best.map(|b| b.1),
        kappa_counts: counts,
    })
}

/// Scenario names accepted by [`reproduce`].
pub const SCENARIOS: [&str; 6] = ["vdc", "hammersley", "sobol", "faure", "fibonacci", "lp"];

/// Runs one named scenario (or `all`) at the default parameters, or over the
/// wider ranges when `sweep` is set. Results are ordered by scenario name.
pub fn reproduce(name: &str, sweep: bool, seed: u64, exec: Execution) -> Result<Vec<ReproResult>> {
    let names: Vec<&str> = match name {
        "all" => SCENARIOS.to_vec(),
        n if SCENARIOS.contains(&n) => vec![n],
        other => {
            return Err(Error::invalid(format!(
                "unknown scenario {other:?}; use all or one of {SCENARIOS:?}"
            )))
        }
    };
    let mut out = Vec::new();
    for n in names {
        match n {
            "vdc" => {
                let cases: &[(u32, u64)] = if sweep {
                    &[(2, 4096), (3, 4096)]
                } else {
                    &[(2, 4096), (3, 2187)]
                };
                for &(b, i) in cases {
                    out.push(repro_vdc_mesh(b, i, exec)?);
                }
            }
            "hammersley" => {
                if sweep {
                    for b in [2u32, 3, 5] {
                        for m in 3..=8 {
                            if (b as u64).pow(m) <= 1 << 14 {
                                out.push(repro_hammersley(b, m as usize, exec)?);
                            }
                        }
                    }
                } else {
                    out.push(repro_hammersley(2, 4, exec)?);
                }
            }
            "sobol" => {
                let (ws, trials): (&[u32], usize) = if sweep { (&[2, 3, 4], 50) } else { (&[2, 3], 20) };
                for &w in ws {
                    for v in [ScrambleVariant::LP, ScrambleVariant::ILP] {
                        out.push(repro_sobol_scrambled(w, v, trials, seed, exec)?);
                    }
                }
            }
            "faure" => {
                let cases: &[(u32, u32)] = if sweep {
                    &[(2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1)]
                } else {
                    &[(2, 2), (3, 1)]
                };
                for &(b, w) in cases {
                    out.push(repro_faure(b, w)?);
                }
            }
            "fibonacci" => {
                for k in if sweep { 4..=6 } else { 4..=4 } {
                    out.push(repro_fibonacci(k, exec)?);
                }
            }
            "lp" => {
                let cases: Vec<(u32, usize)> = if sweep {
                    (4..=12).map(|m| (2, m)).chain((4..=8).map(|m| (3, m))).collect()
                } else {
                    vec![(2, 6), (3, 4)]
                };
                for (b, m) in cases {
                    out.push(repro_lp(b, m, 20, seed, exec)?);
                }
                out.push(repro_lp_generalization(2, 8, if sweep { 20 } else { 5 }, seed, exec)?);
            }
            _ => unreachable!(),
        }
    }
    out.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    Ok(out)
}

/// `{"key": value}` summary of a result list for machine consumption.
pub fn summary(results: &[ReproResult]) -> Value {
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.scenario.as_str())
        .collect();
    json!({ "total": results.len(), "failed": failed.len(), "failed_scenarios": failed })
}

/// Points of a net, shifted if a shift is given; shared by CLI and tests.
pub fn shifted_points(spec: &NetSpec, shift: Option<&ShiftVector>, exec: Execution) -> Result<NetPoints> {
    let pts = generate_points(spec, None, exec)?;
    match shift {
        Some(s) => digital_shift(&pts, s),
        None => Ok(pts),
    }
}
