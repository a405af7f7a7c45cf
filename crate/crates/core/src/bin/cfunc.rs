use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use cfunc_core::acceptance::{self, Level};
use cfunc_core::config::{Format, RunConfig, SEED_ENV};
use cfunc_core::cyclotomic::{jacobi_sum_exact, ratio_is_root_of_unity, stickelberger_reduce};
use cfunc_core::geometry::{
    all_character_instances, certify_anisotropy, classify_setup, differential_at_zero, family_reports,
    perturbation_split, transversality_at_character, EquivariantSpace, SubgroupChar, RANK_TOL,
};
use cfunc_core::group_fourier::{CyclicFn, DirichletChar, GroupCtx};
use cfunc_core::orbit::{find_representative, scan_all_pairs};
use cfunc_core::solver::{
    biunimodular_search, certify_new, chebotarev_minor, solve_odd_cfunctions, start_fiber, uncertainty_check, Family,
    Method, SolutionSet,
};
use cfunc_core::Error;

#[derive(Parser)]
#[command(name = "cfunc", version, about = "C-functions and biunimodular functions on cyclic groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi sum J(ω^j1, ω^j2) modulo p.
    Jacobi {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j1: i64,
        #[arg(long)]
        j2: i64,
        /// Also print the exact element of Z[ζ_{p−1}].
        #[arg(long)]
        exact: bool,
    },
    /// Whether J(χ̄1, χ2)/J(χ1, χ2) is a root of unity, and the matching case.
    ClassifyRatio {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j1: i64,
        #[arg(long)]
        j2: i64,
    },
    /// The Jacobi sum J_{j,k} modulo p, directly and by binomial coefficient.
    Stickelberger {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        k: u64,
    },
    /// Orbit representatives of exponent pairs modulo d.
    OrbitScan {
        #[arg(long)]
        d: u64,
        /// Classify the single pair (j, k) instead of scanning.
        #[arg(long, num_args = 2, value_names = ["J", "K"])]
        pair: Option<Vec<u64>>,
    },
    /// Transversality at every character of every equivariant space, and at the
    /// gaussian and Björck–Saffari points.
    Transversality {
        #[arg(long)]
        p: u64,
    },
    /// Hessian anisotropy certificate and perturbation experiment (p ≡ 3 mod 4).
    Hessian {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// All odd C-functions on C_d with multiplicities.
    Solve {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value = "fiber", value_parser = parse_method)]
        method: Method,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: Format,
    },
    /// Random-start search for biunimodular functions on F_p.
    Biunimodular {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Certify every NEW find.
        #[arg(long)]
        certify: bool,
        /// Include every distinct function found.
        #[arg(long)]
        list: bool,
    },
    /// Support sizes of f and f̂ for random values on a given support, or for
    /// every kernel function of the explicit fiber.
    Uncertainty {
        #[arg(long)]
        p: u64,
        /// Comma-separated residues.
        #[arg(long, value_delimiter = ',', conflicts_with = "fiber")]
        support: Vec<u64>,
        #[arg(long)]
        fiber: bool,
    },
    /// Determinant of the minor (ζ_p^{jk}) with rows A and columns B.
    Chebotarev {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        rows: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        cols: Vec<u64>,
    },
    /// Run the acceptance criteria.
    Verify {
        #[arg(long, default_value = "fast", value_parser = parse_level)]
        level: Level,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_level(s: &str) -> Result<Level, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Result of a subcommand: its report and whether its invariants held.
struct Outcome {
    text: String,
    ok: bool,
}

fn json_out<T: Serialize>(value: &T, ok: bool) -> Outcome {
    Outcome { text: serde_json::to_string_pretty(value).expect("serializable"), ok }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = RunConfig { seed: cli.global.seed, workers: cli.global.workers, ..RunConfig::default() };
    if let Some(n) = config.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Command::Solve { format, .. } = &cli.command {
        config.format = *format;
    }
    match run(cli.command, &config) {
        Ok(out) => {
            println!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, config: &RunConfig) -> Result<Outcome, Error> {
    match command {
        Command::Jacobi { p, j1, j2, exact } => {
            let ctx = GroupCtx::prime(p)?;
            let j = jacobi_sum_exact(&DirichletChar::new(&ctx, j1)?, &DirichletChar::new(&ctx, j2)?)?;
            let z = j.to_complex();
            let value = if exact {
                json!({ "complex": [z.re, z.im], "cycint": j })
            } else {
                json!({ "complex": [z.re, z.im] })
            };
            Ok(json_out(&value, true))
        }
        Command::ClassifyRatio { p, j1, j2 } => {
            let ctx = GroupCtx::prime(p)?;
            let r = ratio_is_root_of_unity(&DirichletChar::new(&ctx, j1)?, &DirichletChar::new(&ctx, j2)?)?;
            Ok(json_out(&r, r.is_root_of_unity() == r.refined_case.is_some()))
        }
        Command::Stickelberger { p, j, k } => {
            let r = stickelberger_reduce(p, j, k)?;
            Ok(json_out(&r, r.consistent()))
        }
        Command::OrbitScan { d, pair } => match pair.as_deref() {
            Some(&[j, k]) => {
                let r = find_representative(d, j, k)?;
                Ok(json_out(&r, r.is_consistent()))
            }
            _ => {
                let s = scan_all_pairs(d)?;
                Ok(json_out(&s, s.is_clean()))
            }
        },
        Command::Transversality { p } => transversality(p),
        Command::Hessian { p, trials } => {
            eprintln!("hessian: {trials} starts at p={p}");
            let certificate = certify_anisotropy(p, trials, config.seed)?;
            let perturbation = perturbation_split(p, config.seed)?;
            let differential = differential_at_zero(p, 1e-5)?;
            let ok = certificate.fiber_count == certificate.expected_fiber
                && certificate.min_norm > 0.0
                && perturbation.split_holds()
                && differential < 1e-6;
            let value =
                json!({ "anisotropy": certificate, "perturbation": perturbation, "differential_norm": differential });
            Ok(json_out(&value, ok))
        }
        Command::Solve { d, method, format } => {
            eprintln!("solve: d={d} method={method:?}");
            let set = solve_odd_cfunctions(d, method, &config.solve_config())?;
            let ok = set.paths_balance() && set.max_residual() <= 1e-8;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&set).expect("serializable"),
                Format::Csv => solutions_csv(&set).trim_end().to_string(),
                Format::Table => solutions_table(&set),
            };
            Ok(Outcome { text, ok })
        }
        Command::Biunimodular { p, trials, certify, list } => {
            eprintln!("biunimodular: {trials} starts at p={p}");
            let report = biunimodular_search(p, trials, config.seed)?;
            let counts = report.family_counts();
            let mut failed = 0usize;
            if certify {
                for f in report.finds.iter().filter(|f| f.family == Family::New) {
                    if !certify_new(&f.f)?.holds {
                        failed += 1;
                    }
                }
            }
            let mut value = json!({
                "p": p,
                "seed": report.seed,
                "starts": report.starts,
                "converged": report.converged,
                "distinct": report.finds.len(),
                "families": counts,
                "certified": certify,
                "uncertified_new": failed,
            });
            if list {
                value["finds"] = serde_json::to_value(&report.finds).expect("serializable");
            }
            Ok(json_out(&value, failed == 0))
        }
        Command::Uncertainty { p, support, fiber } => {
            let ctx = GroupCtx::prime(p)?;
            if fiber {
                let space = EquivariantSpace::new(SubgroupChar::odd(p)?);
                let mut reports = Vec::new();
                for s in start_fiber(&space)? {
                    reports.push(json!({ "a": s.a, "b": s.b, "f": uncertainty_check(&s.f, 1e-9)?, "g": uncertainty_check(&s.g, 1e-9)? }));
                }
                let ok = reports.iter().all(|r| r["f"]["equality"] == true && r["g"]["equality"] == true);
                return Ok(json_out(&reports, ok));
            }
            if let Some(&bad) = support.iter().find(|&&x| x >= p) {
                return Err(Error::OutOfRange(format!("residue {bad} is not below {p}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let values = (0..p)
                .map(|x| {
                    if support.contains(&x) {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            let f = CyclicFn::new(ctx, values)?;
            let r = uncertainty_check(&f, 1e-9)?;
            Ok(json_out(&r, r.holds))
        }
        Command::Chebotarev { p, rows, cols } => {
            let r = chebotarev_minor(p, &rows, &cols)?;
            Ok(json_out(&r, r.nonzero))
        }
        Command::Verify { level, only } => {
            let ids: Vec<u8> = if only.is_empty() { (1..=10).collect() } else { only };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=10).contains(&i)) {
                return Err(Error::OutOfRange(format!("no criterion {bad}")));
            }
            let mut lines = Vec::new();
            let mut ok = true;
            for id in ids {
                let r = acceptance::run_criterion(id, level, config.seed);
                eprintln!("{}", r.line());
                lines.push(r.line());
                for c in r.checks.iter().filter(|c| !c.passed) {
                    let tag = if c.literal { "literal" } else { "failed" };
                    lines.push(format!("    [{tag}] {}: {}", c.name, c.detail));
                }
                ok &= r.unexpected_failures().is_empty();
            }
            Ok(Outcome { text: lines.join("\n"), ok })
        }
    }
}

fn transversality(p: u64) -> Result<Outcome, Error> {
    let mut characters = Vec::new();
    let mut ok = true;
    for (space, chi) in all_character_instances(p)? {
        let r = transversality_at_character(&chi, &space, RANK_TOL)?;
        ok &= r.agrees();
        characters.push(json!({ "n": space.base.n, "c_exponent": space.base.c_exponent, "report": r }));
    }
    let families = family_reports(p, RANK_TOL)?;
    ok &= families.iter().all(|r| r.numeric_verdict);
    let setup = if p >= 11 { Some(classify_setup(p)?) } else { None };
    Ok(json_out(&json!({ "p": p, "characters": characters, "families": families, "setup": setup }), ok))
}

fn format_value(v: Complex64) -> String {
    format!("{:.10}{:+.10}i", v.re, v.im)
}

fn solutions_csv(set: &SolutionSet) -> String {
    let mut out = String::from("index,multiplicity,residual,dirichlet,unimodular,real_valued,f\n");
    for (i, s) in set.solutions.iter().enumerate() {
        let f: Vec<String> = s.f.values().iter().map(|v| format_value(*v)).collect();
        let dirichlet = s.tags.dirichlet.map_or(String::new(), |t| t.to_string());
        out.push_str(&format!(
            "{i},{},{:.3e},{dirichlet},{},{},{}\n",
            s.multiplicity,
            s.residual,
            s.tags.unimodular,
            s.tags.real_valued,
            f.join(";")
        ));
    }
    out
}

fn solutions_table(set: &SolutionSet) -> String {
    let c = set.counts();
    let mut out = format!(
        "d={} method={:?} paths={} diverged={} failed={}\ntotal={} distinct={} unimodular={} dirichlet={} real={}\n",
        set.d,
        set.method,
        set.total_paths,
        set.diverged,
        set.failed,
        c.total,
        c.distinct,
        c.unimodular,
        c.dirichlet,
        c.real_valued
    );
    out.push_str(&format!(
        "{:>5} {:>4} {:>10} {:>9} {:>4} {:>4}  f(1)\n",
        "index", "mult", "residual", "dirichlet", "unim", "real"
    ));
    for (i, s) in set.solutions.iter().enumerate() {
        let dirichlet = s.tags.dirichlet.map_or("-".to_string(), |t| format!("ω^{t}"));
        out.push_str(&format!(
            "{i:>5} {:>4} {:>10.2e} {dirichlet:>9} {:>4} {:>4}  {}\n",
            s.multiplicity,
            s.residual,
            if s.tags.unimodular { "yes" } else { "no" },
            if s.tags.real_valued { "yes" } else { "no" },
            format_value(s.f.at(1))
        ));
    }
    out
}
