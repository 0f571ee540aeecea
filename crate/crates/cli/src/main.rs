use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use repzeta::arith::{artin_density, congruence_quotient, langweil_fit, reductive_degree_fit, AffineVarietySpec, ArtinSetSpec};
use repzeta::dirichlet::{empirical_abscissa, euler_abscissa, AbscissaEstimate, BisectionConfig, EulerProductSpec};
use repzeta::groupcore::{zeta_of_group, GroupSpec, DEFAULT_GROUP_CAP};
use repzeta::liering::NilpotentLieRing;
use repzeta::localzeta::{
    cone_geometric_sum, vfunction_integral, vfunction_integral_exact, vfunction_to_jaikin, Cone, VFunctionDesc,
};
use repzeta::numtheory::primes_up_to;
use repzeta::orbit::{coadjoint_orbits, compare_with_table, orbit_census, zeta_of_orbits};
use repzeta::rational::{format_q, parse_q, to_f64, Q};
use repzeta::suites::{run_suite, SUITES};
use repzeta::Error;

#[derive(Parser)]
#[command(name = "repzeta", version, about = "Representation zeta functions: batch JSON jobs")]
struct Cli {
    /// Size cap: group order, point-count box, or brute-force cross-check order.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized fuzz corpora.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Prime bound for densities, fits and bisection.
    #[arg(long, global = true)]
    prime_bound: Option<u64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zeta function of a finite group.
    ZetaGroup { file: PathBuf },
    /// Orbit census and zeta of a nilpotent Lie ring, cross-checked against the group.
    OrbitZeta { file: PathBuf },
    /// Rational generating function of a lattice cone.
    ConeSum { file: PathBuf },
    /// Truncated integral of a V-function and its closed form.
    VfIntegral { file: PathBuf },
    /// Abscissa of an Euler product, with optional empirical bisection.
    Abscissa {
        file: PathBuf,
        /// Also bisect the truncated product over primes up to --prime-bound.
        #[arg(long)]
        bisect: bool,
    },
    /// Natural density of an Artin set.
    ArtinDensity { file: PathBuf },
    /// Lang-Weil fit of point counts of an affine variety.
    LangweilFit { file: PathBuf },
    /// Zeta function of a congruence quotient, with an optional degree-family fit.
    CongruenceZeta { file: PathBuf },
    /// Run an invariant suite.
    Verify { suite: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeSumJob {
    cone: Cone,
    nbar: Vec<i64>,
    mbar: Vec<i64>,
    #[serde(default)]
    eval: Option<EvalPoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalPoint {
    p: u64,
    s: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VfJob {
    vfunction: VFunctionDesc,
    p: u64,
    s: String,
    k: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CongruenceJob {
    n: usize,
    gens: Vec<Vec<i64>>,
    p: u64,
    k: u32,
    #[serde(default)]
    fit: Option<FitJob>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FitJob {
    residue_class: (u64, u64),
    fit_primes: Vec<u64>,
    verify_primes: Vec<u64>,
}

#[derive(Serialize)]
struct OrbitReport {
    census: repzeta::orbit::OrbitCensus,
    zeta: repzeta::dirichlet::DirichletPoly,
    cross_check: &'static str,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(Error::from)?)
}

fn rational(s: &str) -> anyhow::Result<Q> {
    Ok(parse_q(s)?)
}

fn integer_s(s: &Q) -> Option<i64> {
    s.is_integer().then(|| s.to_integer().try_into().ok()).flatten()
}

/// Result and whether it counts as a pass (only `verify` can fail softly).
fn run(cli: &Cli) -> anyhow::Result<(Value, bool)> {
    let cap = cli.budget.map(|b| b as usize);
    let out = match &cli.command {
        Command::ZetaGroup { file } => {
            let g = read_json::<GroupSpec>(file)?.build(cap.unwrap_or(DEFAULT_GROUP_CAP))?;
            serde_json::to_value(zeta_of_group(&g)?)?
        }
        Command::OrbitZeta { file } => {
            let ring = NilpotentLieRing::from_json(&fs::read_to_string(file)?)?;
            let orbits = coadjoint_orbits(&ring)?;
            let zeta = zeta_of_orbits(&orbits);
            let within = ring.order().is_some_and(|o| o <= cli.budget.unwrap_or(20_000));
            let cross_check = if !within {
                "SKIPPED"
            } else if compare_with_table(&ring)?.holds() {
                "MATCH"
            } else {
                "MISMATCH"
            };
            serde_json::to_value(OrbitReport { census: orbit_census(&orbits), zeta, cross_check })?
        }
        Command::ConeSum { file } => {
            let job: ConeSumJob = read_json(file)?;
            let form = cone_geometric_sum(&job.cone, &job.nbar, &job.mbar)?;
            let value = match &job.eval {
                Some(pt) => {
                    let s = rational(&pt.s)?;
                    match integer_s(&s) {
                        Some(si) => json!(format_q(&form.eval_exact(pt.p, si)?)),
                        None => json!(form.eval(pt.p, to_f64(&s))?),
                    }
                }
                None => Value::Null,
            };
            json!({ "form": form, "value": value })
        }
        Command::VfIntegral { file } => {
            let job: VfJob = read_json(file)?;
            let s = rational(&job.s)?;
            let form = vfunction_to_jaikin(&job.vfunction)?;
            let (integral, closed) = match integer_s(&s) {
                Some(si) => (
                    json!(format_q(&vfunction_integral_exact(&job.vfunction, job.p, si, job.k)?)),
                    json!(format_q(&form.eval_exact(job.p, si)?)),
                ),
                None => (
                    json!(vfunction_integral(&job.vfunction, job.p, &s, job.k)?),
                    json!(form.eval(job.p, &s)?),
                ),
            };
            json!({ "integral": integral, "closed_form": closed, "form": form })
        }
        Command::Abscissa { file, bisect } => {
            let spec: EulerProductSpec = read_json(file)?;
            let exact = euler_abscissa(&spec)?;
            let mut out = json!({ "abscissa": exact.as_ref().map_or("-inf".to_string(), format_q) });
            if *bisect {
                out["bisection"] = serde_json::to_value(bisect_product(&spec, cli.prime_bound.unwrap_or(1_000_000))?)?;
            }
            out
        }
        Command::ArtinDensity { file } => {
            let spec: ArtinSetSpec = read_json(file)?;
            serde_json::to_value(artin_density(&spec, cli.prime_bound.unwrap_or(1_000_000))?)?
        }
        Command::LangweilFit { file } => {
            let v: AffineVarietySpec = read_json(file)?;
            let primes = primes_up_to(cli.prime_bound.unwrap_or(200));
            serde_json::to_value(langweil_fit(&v, &primes, cli.budget.unwrap_or(1 << 24))?)?
        }
        Command::CongruenceZeta { file } => {
            let job: CongruenceJob = read_json(file)?;
            let cq = congruence_quotient(&job.gens, job.n, job.p, job.k, cap.unwrap_or(DEFAULT_GROUP_CAP))?;
            let mut out = json!({
                "group_order": cq.group.order(),
                "kernel_order": cq.kernel.order(),
                "zeta": zeta_of_group(&cq.group)?,
            });
            if let Some(fit) = &job.fit {
                let r = reductive_degree_fit(&job.gens, job.n, fit.residue_class, &fit.fit_primes, &fit.verify_primes)?;
                out["fit"] = serde_json::to_value(r)?;
            }
            out
        }
        Command::Verify { suite } => {
            if !SUITES.contains(&suite.as_str()) {
                anyhow::bail!("unknown suite {suite:?}; expected one of {}", SUITES.join(", "));
            }
            let report = run_suite(suite, cli.seed)?;
            let passed = report.passed;
            return Ok((serde_json::to_value(report)?, passed));
        }
    };
    Ok((out, true))
}

/// Empirical abscissa of the finite part: each prime takes the local term of
/// the part whose Artin set contains it.
fn bisect_product(spec: &EulerProductSpec, bound: u64) -> anyhow::Result<AbscissaEstimate> {
    for part in &spec.local_parts {
        part.family.validate()?;
    }
    let mut owners = Vec::new();
    for p in primes_up_to(bound) {
        let owner = spec.local_parts.iter().position(|part| part.primes.contains(p).unwrap_or(false));
        owners.push((p, owner));
    }
    let primes: Vec<u64> = owners.iter().map(|&(p, _)| p).collect();
    let lookup: std::collections::HashMap<u64, usize> =
        owners.iter().filter_map(|&(p, o)| o.map(|o| (p, o))).collect();
    let a = |p: u64, s: f64| lookup.get(&p).map_or(0.0, |&i| spec.local_parts[i].family.local_term(p, s));
    Ok(empirical_abscissa(&primes, &a, &BisectionConfig::default()))
}

fn emit(value: &Value, output: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) if err.is_internal() => 2,
        Some(_) => 1,
        None if e.downcast_ref::<std::io::Error>().is_some() => 1,
        // usage errors outside the library, such as an unknown suite
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|(value, passed)| {
        emit(&value, cli.output.as_deref())?;
        Ok(passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            match e.downcast_ref::<Error>() {
                Some(err) => eprintln!("error: {err}"),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
