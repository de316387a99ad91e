use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qunet::construct::{self, NetSpec, ScrambleVariant};
use qunet::geometry::{analyze, ratio_f64, ratio_string, tmd_net_covering_bound, volume_bounds};
use qunet::pointgen::{digital_shift, generate_points};
use qunet::repro::{self, ReproResult};
use qunet::separation::{
    criterion_check, is_c_separated_bruteforce, min_kappa_bruteforce, min_kappa_criterion, t_value, CriterionOutcome,
};
use qunet::{report, Error, Execution, FieldMatrix, NetPoints, Norm, PolyFb, ShiftVector};

#[derive(Parser)]
#[command(
    name = "qunet",
    version,
    about = "Digital nets over prime fields: construction, radii and separation"
)]
struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for random scrambles and shifts.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Run every kernel on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the points of a (shifted) net to a point file.
    Generate {
        construction: Construction,
        #[command(flatten)]
        net: NetArgs,
        /// Only the first COUNT points.
        #[arg(long)]
        count: Option<u64>,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Separation radius, covering bracket and mesh ratio of a point file.
    Analyze {
        file: PathBuf,
        /// Norm: 1, 2 or inf (l2 values are squared).
        #[arg(long = "p", default_value = "inf")]
        norm: Norm,
        #[arg(long)]
        toroidal: bool,
        /// Grid exponent r of the covering bracket (cells of side b^-r).
        #[arg(long)]
        grid_res: Option<u32>,
        /// t-value to evaluate the (t,m,d)-net covering bound with.
        #[arg(long)]
        t: Option<u32>,
    },
    /// Decide kappa-separation of a (shifted) net.
    CheckSep {
        #[arg(long)]
        construction: Construction,
        #[command(flatten)]
        net: NetArgs,
        #[arg(long, value_enum, default_value_t = Method::Criterion)]
        method: Method,
        #[arg(long)]
        toroidal: bool,
        /// Largest kappa tried by the search (default m).
        #[arg(long)]
        kappa_budget: Option<u32>,
        /// Check one level c (comma separated) instead of searching.
        #[arg(long, value_delimiter = ',')]
        c: Option<Vec<u32>>,
    },
    /// t-value of a construction.
    Tvalue {
        construction: Construction,
        #[command(flatten)]
        net: NetArgs,
    },
    /// Run reproduction scenarios.
    Reproduce {
        /// all, vdc, hammersley, sobol, faure, fibonacci or lp.
        scenario: String,
        /// Extend to the wider parameter ranges.
        #[arg(long)]
        sweep: bool,
        #[command(flatten)]
        params: ReproArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Vdc,
    Hammersley,
    Lp,
    Faure,
    Sobol2,
    Polylattice,
    Fiblattice,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Criterion,
    Bruteforce,
}

#[derive(Args)]
struct NetArgs {
    /// Prime base.
    #[arg(long, default_value_t = 2)]
    b: u64,
    /// Depth: the net has b^m points.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Apply a random digital shift drawn from this seed.
    #[arg(long)]
    shift_seed: Option<u64>,
    /// Scramble variant for sobol2.
    #[arg(long, value_parser = parse_variant, default_value = "L,P")]
    variant: ScrambleVariant,
    /// Draw a random lower-triangular scramble for sobol2 from the global seed
    /// (identity otherwise).
    #[arg(long)]
    scramble: bool,
    /// Denominator polynomial "b: c0 c1 ..." for polylattice.
    #[arg(long = "p")]
    poly_p: Option<String>,
    /// Numerator polynomials for polylattice, one per coordinate.
    #[arg(long = "q")]
    poly_q: Vec<String>,
    /// Matrix file for custom nets.
    #[arg(long)]
    matrices: Option<PathBuf>,
}

#[derive(Args)]
struct ReproArgs {
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    w: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_parser = parse_variant)]
    variant: Option<ScrambleVariant>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    shifts: Option<usize>,
    #[arg(long)]
    i_max: Option<u64>,
}

impl ReproArgs {
    fn any(&self) -> bool {
        self.b.is_some()
            || self.m.is_some()
            || self.w.is_some()
            || self.k.is_some()
            || self.variant.is_some()
            || self.trials.is_some()
            || self.shifts.is_some()
            || self.i_max.is_some()
    }
}

fn parse_variant(s: &str) -> Result<ScrambleVariant, String> {
    match s {
        "L,P" | "LP" | "lp" => Ok(ScrambleVariant::LP),
        "I,LP" | "ILP" | "ilp" => Ok(ScrambleVariant::ILP),
        _ => Err(format!("unknown variant {s:?}; use L,P or I,LP")),
    }
}

enum Format {
    Text,
    Json,
    Csv,
}

fn build_spec(kind: Construction, net: &NetArgs, seed: u64) -> qunet::Result<NetSpec> {
    let (b, m) = (net.b, net.m);
    match kind {
        Construction::Vdc => construct::vdc_matrices(b, m),
        Construction::Hammersley => construct::hammersley_matrices(b, m),
        Construction::Lp => construct::lp_matrices(b, m),
        Construction::Faure => construct::faure_matrices(b, m),
        Construction::Fiblattice => construct::fibonacci_lattice_matrices(m),
        Construction::Sobol2 => {
            if b != 2 {
                return Err(Error::InvalidArgument("sobol2 is defined over base 2 only".into()));
            }
            let l = if net.scramble {
                construct::random_lower_unit(2, m, &mut ChaCha8Rng::seed_from_u64(seed))?
            } else {
                FieldMatrix::identity(2, m)?
            };
            construct::sobol2_scrambled(m, &l, net.variant)
        }
        Construction::Polylattice => {
            let p = net
                .poly_p
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("polylattice needs --p \"b: c0 c1 ...\"".into()))?;
            if net.poly_q.is_empty() {
                return Err(Error::InvalidArgument(
                    "polylattice needs at least one --q polynomial".into(),
                ));
            }
            let qs = net
                .poly_q
                .iter()
                .map(|q| PolyFb::parse(q))
                .collect::<qunet::Result<Vec<_>>>()?;
            construct::polylattice_matrices(&PolyFb::parse(p)?, &qs)
        }
        Construction::Custom => {
            let path = net
                .matrices
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("custom nets need --matrices FILE".into()))?;
            NetSpec::custom(FieldMatrix::parse_blocks(&fs::read_to_string(path)?)?, "custom")
        }
    }
}

fn shift_for(spec: &NetSpec, net: &NetArgs) -> Option<ShiftVector> {
    net.shift_seed
        .map(|s| ShiftVector::random(spec.b, spec.m, spec.d(), &mut ChaCha8Rng::seed_from_u64(s)))
}

fn emit(out: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{out}");
}

fn run(cli: Cli) -> qunet::Result<ExitCode> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    match cli.command {
        Command::Generate {
            construction,
            net,
            count,
            out,
        } => {
            let spec = build_spec(construction, &net, cli.seed)?;
            let mut pts = generate_points(&spec, count, exec)?;
            if let Some(shift) = shift_for(&spec, &net) {
                let mut full = generate_points(&spec, None, exec)?;
                full = digital_shift(&full, &shift)?;
                pts = full.prefix(pts.len())?;
            }
            let text = pts.to_text();
            match &out {
                Some(path) => fs::write(path, &text)?,
                None => print!("{text}"),
            }
            let summary = json!({
                "label": pts.label, "b": pts.b, "m": pts.m, "d": pts.d, "n": pts.len(),
                "out": out.as_ref().map(|p| p.display().to_string()),
            });
            if out.is_some() {
                match format {
                    Format::Json => emit(&summary.to_string()),
                    Format::Csv => emit(&format!(
                        "label,b,m,d,n\n{},{},{},{},{}",
                        pts.label,
                        pts.b,
                        pts.m,
                        pts.d,
                        pts.len()
                    )),
                    Format::Text => emit(&format!(
                        "wrote {} points ({}, b={}, m={}, d={})",
                        pts.len(),
                        pts.label,
                        pts.b,
                        pts.m,
                        pts.d
                    )),
                }
            }
        }
        Command::Analyze {
            file,
            norm,
            toroidal,
            grid_res,
            t,
        } => {
            let pts = NetPoints::parse(&fs::read_to_string(&file)?)?;
            let rep = analyze(&pts, norm, toroidal, grid_res, exec)?;
            let bounds = volume_bounds(pts.len() as u64, pts.d, norm).ok();
            let net_bound = t.map(|t| tmd_net_covering_bound(pts.b, pts.m, pts.d, t)).transpose()?;
            match format {
                Format::Json => emit(&report::radius_json(&rep, bounds.as_ref(), net_bound.as_ref()).to_string()),
                Format::Csv => emit(&format!(
                    "{}\n{}",
                    report::RADIUS_CSV_HEADER,
                    report::radius_csv_row(&rep)
                )),
                Format::Text => {
                    let sq = if norm.squared() { " (squared)" } else { "" };
                    let show = |name: &str, r: &Option<qunet::Rational>| match r {
                        Some(v) => format!("{name} = {} (approx {:.6}){sq}", ratio_string(v), ratio_f64(v)),
                        None => format!("{name} = undefined (q = 0)"),
                    };
                    emit(&format!(
                        "points: {} ({}, b={}, m={}, d={})",
                        pts.len(),
                        pts.label,
                        pts.b,
                        pts.m,
                        pts.d
                    ));
                    emit(&format!(
                        "norm: {norm}, toroidal: {toroidal}, grid: b^-{}",
                        rep.resolution
                    ));
                    emit(&show("q", &Some(rep.q)));
                    emit(&format!("q witness: ({}, {})", rep.q_witness.0, rep.q_witness.1));
                    emit(&show("h_lower", &Some(rep.h_lower)));
                    emit(&show("h_upper", &Some(rep.h_upper)));
                    emit(&show("rho_lower", &rep.rho_lower));
                    emit(&show("rho_upper", &rep.rho_upper));
                    if let Some(v) = net_bound {
                        emit(&format!("(t,m,d)-net covering bound: {}", ratio_string(&v)));
                    }
                }
            }
        }
        Command::CheckSep {
            construction,
            net,
            method,
            toroidal,
            kappa_budget,
            c,
        } => {
            let spec = build_spec(construction, &net, cli.seed)?;
            let shift = shift_for(&spec, &net).unwrap_or_else(|| ShiftVector::zero(spec.b, spec.m, spec.d()));
            let points = || -> qunet::Result<NetPoints> { digital_shift(&generate_points(&spec, None, exec)?, &shift) };
            if let Some(c) = c {
                let (outcome, violation) = match method {
                    Method::Criterion => match criterion_check(&spec, &shift, &c, toroidal, exec)? {
                        CriterionOutcome::Separated => ("separated".to_string(), None),
                        CriterionOutcome::Violated(v) => ("violated".to_string(), Some(v)),
                        CriterionOutcome::Inapplicable(why) => (format!("inapplicable: {why}"), None),
                    },
                    Method::Bruteforce => match is_c_separated_bruteforce(&points()?, &c, toroidal, exec)? {
                        None => ("separated".to_string(), None),
                        Some(v) => ("violated".to_string(), Some(v)),
                    },
                };
                let v = json!({
                    "c": c, "toroidal": toroidal, "outcome": outcome,
                    "method": match method { Method::Criterion => "criterion", Method::Bruteforce => "bruteforce" },
                    "violation": violation.as_ref().map_or(serde_json::Value::Null, report::violation_json),
                });
                match format {
                    Format::Json => emit(&v.to_string()),
                    Format::Csv => emit(&format!(
                        "c,toroidal,outcome\n{},{},{}",
                        c.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
                        toroidal,
                        outcome
                    )),
                    Format::Text => {
                        emit(&format!("c = {c:?}: {outcome}"));
                        if let Some(v) = violation {
                            emit(&format!(
                                "interval a = {:?}, e = {:?}; points {} and {}",
                                v.interval.a, v.interval.e, v.pair.0, v.pair.1
                            ));
                        }
                    }
                }
                return Ok(ExitCode::SUCCESS);
            }
            let budget = kappa_budget.unwrap_or(spec.m as u32);
            let rep = match method {
                Method::Criterion => min_kappa_criterion(&spec, &shift, budget, toroidal, exec)?,
                Method::Bruteforce => min_kappa_bruteforce(&points()?, toroidal, exec)?,
            };
            match format {
                Format::Json => emit(&report::separation_json(&rep).to_string()),
                Format::Csv => emit(&format!(
                    "{}\n{}",
                    report::SEPARATION_CSV_HEADER,
                    report::separation_csv_row(&rep)
                )),
                Format::Text => {
                    match rep.kappa {
                        Some(k) => emit(&format!(
                            "kappa = {k} (c = {:?}, {})",
                            rep.c_witness.as_deref().unwrap_or(&[]),
                            rep.method.name()
                        )),
                        None if rep.budget_exhausted => {
                            emit(&format!("kappa unknown: not separated up to budget {budget}"))
                        }
                        None => emit("never separated (coincident points)"),
                    }
                    if let Some(q) = &rep.q_lower_from_kappa {
                        emit(&format!("q_inf >= {} (approx {:.6})", ratio_string(q), ratio_f64(q)));
                    }
                    if let Some(v) = &rep.violation {
                        emit(&format!(
                            "violation at c = {:?}: points {} and {}",
                            v.interval.c, v.pair.0, v.pair.1
                        ));
                    }
                    for (c, why) in &rep.inapplicable {
                        emit(&format!("criterion inapplicable at c = {c:?}: {why}"));
                    }
                }
            }
        }
        Command::Tvalue { construction, net } => {
            let spec = build_spec(construction, &net, cli.seed)?;
            let t = t_value(&spec)?;
            match format {
                Format::Json => emit(
                    &json!({"label": spec.label, "b": spec.b, "m": spec.m, "d": spec.d(), "t": t, "t_claimed": spec.t_claimed})
                        .to_string(),
                ),
                Format::Csv => emit(&format!("label,b,m,d,t\n{},{},{},{},{t}", spec.label, spec.b, spec.m, spec.d())),
                Format::Text => emit(&format!("t = {t} ({}, b={}, m={}, d={})", spec.label, spec.b, spec.m, spec.d())),
            }
        }
        Command::Reproduce {
            scenario,
            sweep,
            params,
        } => {
            let results = if params.any() {
                vec![single_scenario(&scenario, &params, cli.seed, exec)?]
            } else {
                repro::reproduce(&scenario, sweep, cli.seed, exec)?
            };
            print_results(&results, &format);
            if results.iter().any(|r| !r.pass) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn single_scenario(name: &str, p: &ReproArgs, seed: u64, exec: Execution) -> qunet::Result<ReproResult> {
    match name {
        "vdc" => repro::repro_vdc_mesh(p.b.unwrap_or(2), p.i_max.unwrap_or(4096), exec),
        "hammersley" => repro::repro_hammersley(p.b.unwrap_or(2), p.m.unwrap_or(4), exec),
        "sobol" => repro::repro_sobol_scrambled(
            p.w.unwrap_or(2),
            p.variant.unwrap_or(ScrambleVariant::LP),
            p.trials.unwrap_or(20),
            seed,
            exec,
        ),
        "faure" => repro::repro_faure(p.b.unwrap_or(3), p.w.unwrap_or(1)),
        "fibonacci" => repro::repro_fibonacci(p.k.unwrap_or(4), exec),
        "lp" => repro::repro_lp(p.b.unwrap_or(2), p.m.unwrap_or(6), p.shifts.unwrap_or(20), seed, exec),
        other => Err(Error::InvalidArgument(format!(
            "scenario parameters need a single scenario, got {other:?}"
        ))),
    }
}

fn print_results(results: &[ReproResult], format: &Format) {
    match format {
        Format::Json => emit(&json!({ "results": results, "summary": repro::summary(results) }).to_string()),
        Format::Csv => {
            emit(report::REPRO_CSV_HEADER);
            for r in results {
                emit(&report::repro_csv_row(r));
            }
        }
        Format::Text => {
            for r in results {
                let verdict = if r.pass { "PASS" } else { "FAIL" };
                emit(&format!(
                    "[{verdict}] {} {} ({} ms)",
                    r.scenario,
                    serde_json::to_string(&r.params).unwrap_or_default(),
                    r.runtime_ms
                ));
                emit(&format!("       claim: {}", r.claimed));
                for c in &r.checks {
                    let mark = if c.pass { "ok " } else { "BAD" };
                    emit(&format!(
                        "       {mark} {}: {} (claimed {})",
                        c.name, c.measured, c.claimed
                    ));
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
