use std::fmt::Display;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cumulant_core::counts::{bell, cyclic_count, g_count, nested_count};
use cumulant_core::cumulant::{verify_thm1, verify_thm2, verify_thm3, verify_thm4, verify_thm5, verify_thm6, verify_thm7};
use cumulant_core::cyclic::{enumerate_cyclic, enumerate_g, enumerate_nested, enumerate_nested_finer, enumerate_nested_indecomposable};
use cumulant_core::die::{build_instance, TheoremParams};
use cumulant_core::oracle::DistributionOracle;
use cumulant_core::partition::{enumerate_finer, enumerate_partitions, vars};
use cumulant_core::{kappa, ConditionalOracle, Error, Exec, FiniteDistribution, GridShape, Partition, VarSelection, VerificationReport};
use serde::Serialize;

use crate::args::{CumulantArgs, EnumerateArgs, Format, Kind, TheoremArgs};

pub const CAP_ENV: &str = "CUMULANT_MAX_N";

/// A failed command and its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const VERIFY_FAILED: u8 = 1;
pub const USAGE: u8 = 2;
pub const PARSE: u8 = 3;

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: if e.is_parse() { PARSE } else { USAGE }, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: USAGE, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Partitions,
    Cyclic,
    Nested,
    G,
}

impl Family {
    fn default_cap(self) -> u32 {
        match self {
            Family::Partitions | Family::Cyclic => 7,
            Family::Nested => 5,
            Family::G => 4,
        }
    }

    fn estimate(self, n: u32) -> String {
        let n = n as usize;
        match self {
            Family::Partitions => bell(n),
            Family::Cyclic => cyclic_count(n),
            Family::Nested => nested_count(n),
            Family::G => g_count(n),
        }
        .to_string()
    }

    fn name(self) -> &'static str {
        match self {
            Family::Partitions => "partitions",
            Family::Cyclic => "cyclic",
            Family::Nested => "nested",
            Family::G => "g",
        }
    }
}

fn cap(family: Family) -> Result<u32, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::usage(format!("{CAP_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(family.default_cap()),
    }
}

/// Reject `n` outside `1..=cap` unless forced; forcing prints the estimated object count.
fn guard(family: Family, n: u32, force: bool) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::usage("n must be at least 1"));
    }
    let cap = cap(family)?;
    if n > cap {
        if !force {
            return Err(Failure::usage(format!("n = {n} exceeds the {} size cap of {cap}; pass --force or set {CAP_ENV}", family.name())));
        }
        eprintln!("estimated {} objects: {}", family.name(), family.estimate(n));
    }
    Ok(())
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("missing --{flag}")))
}

fn parse_shape(text: &str) -> Result<GridShape, Failure> {
    text.parse().map_err(Failure::from)
}

fn parse_tau(text: &str) -> Result<Partition, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::usage(format!("invalid --tau: {e}")))
}

/// Any failure to load a distribution is an input error.
fn load(path: &Path) -> Result<FiniteDistribution, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure { code: PARSE, message: format!("{}: {e}", path.display()) })?;
    FiniteDistribution::from_json_str(&text).map_err(|e| Failure { code: PARSE, message: format!("{}: {e}", path.display()) })
}

fn split_vars(list: &str) -> Vec<String> {
    list.split(',').map(|s| s.trim().to_string()).collect()
}

fn emit<T: Serialize + Display>(items: impl Iterator<Item = T>, format: Format) -> Outcome {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match format {
        Format::Count => writeln!(out, "{}", items.count())?,
        Format::Json => {
            for item in items {
                writeln!(out, "{}", serde_json::to_string(&item).expect("objects serialize"))?;
            }
        }
        Format::Pretty => {
            for item in items {
                writeln!(out, "{item}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn enumerate(args: EnumerateArgs) -> Outcome {
    let n = || need(args.n, "n");
    match args.kind {
        Kind::Partitions => {
            let n = n()?;
            guard(Family::Partitions, n, args.force)?;
            emit(enumerate_partitions(&vars(n))?, args.format)
        }
        Kind::Cyclic => {
            let n = n()?;
            guard(Family::Cyclic, n, args.force)?;
            emit(enumerate_cyclic(&vars(n))?, args.format)
        }
        Kind::Nested => {
            let n = n()?;
            guard(Family::Nested, n, args.force)?;
            emit(enumerate_nested(&vars(n))?, args.format)
        }
        Kind::G => {
            let n = n()?;
            guard(Family::G, n, args.force)?;
            emit(enumerate_g(&vars(n))?, args.format)
        }
        Kind::Finer => {
            let tau = parse_tau(&need(args.tau, "tau")?)?;
            guard(Family::Partitions, tau.ground().len() as u32, args.force)?;
            emit(enumerate_finer(&tau), args.format)
        }
        Kind::NestedFiner => {
            let tau = parse_tau(&need(args.tau, "tau")?)?;
            guard(Family::Nested, tau.ground().len() as u32, args.force)?;
            emit(enumerate_nested_finer(&tau), args.format)
        }
        Kind::NestedIndecomposable => {
            let shape = parse_shape(&need(args.shape, "shape")?)?;
            guard(Family::Nested, shape.size() as u32, args.force)?;
            let objects = enumerate_nested_indecomposable(&shape)?;
            emit(objects, args.format)
        }
    }
}

pub fn cumulant(args: CumulantArgs) -> Outcome {
    let dist = load(&args.dist)?;
    let sel = VarSelection::parse(&dist, &args.vars)?;
    guard(Family::Partitions, sel.len() as u32, false)?;
    let value = kappa(&sel.ground(), &DistributionOracle::new(&dist, &sel))?;
    println!("{value}");
    Ok(())
}

fn report<V: cumulant_core::Value>(report: VerificationReport<V>) -> Outcome {
    println!("{}", serde_json::to_string(&report).expect("reports serialize"));
    if report.equal {
        Ok(())
    } else {
        Err(Failure { code: VERIFY_FAILED, message: format!("identity does not hold; residual {}", report.residual()) })
    }
}

fn conditioned(args: &TheoremArgs) -> Result<ConditionalOracle, Failure> {
    let dist = load(need(args.dist.as_deref(), "dist")?)?;
    Ok(ConditionalOracle::new(dist, need(args.y.as_deref(), "y")?)?)
}

fn exec(args: &TheoremArgs) -> Exec {
    if args.parallel {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

/// Size check for the family each identity enumerates.
fn guard_theorem(args: &TheoremArgs, size: u32, for_die: bool) -> Outcome {
    let family = match (args.theorem, for_die) {
        (1..=3, _) => Family::Cyclic,
        (4..=6, true) => Family::Nested,
        (7, true) => Family::G,
        _ => Family::Partitions,
    };
    guard(family, size, args.force)
}

pub fn verify(args: TheoremArgs) -> Outcome {
    let exec = exec(&args);
    match args.theorem {
        1 | 2 | 4 => {
            let n = need(args.n, "n")?;
            guard_theorem(&args, n, false)?;
            match args.theorem {
                1 => report(verify_thm1(n, exec)?),
                2 => report(verify_thm2(n, exec)?),
                _ => report(verify_thm4(n, exec)?),
            }
        }
        3 => {
            let m = load(need(args.dist_m.as_deref(), "dist-m")?)?;
            let d = load(need(args.dist_n.as_deref(), "dist-n")?)?;
            let sel = split_vars(&need(args.vars.clone(), "vars")?);
            guard_theorem(&args, sel.len() as u32, false)?;
            report(verify_thm3(&m, &d, &sel, exec)?)
        }
        5 => {
            let tau = parse_tau(&need(args.tau.clone(), "tau")?)?;
            guard_theorem(&args, tau.ground().len() as u32, false)?;
            report(verify_thm5(&tau, exec)?)
        }
        6 => {
            let shape = parse_shape(&need(args.shape.clone(), "shape")?)?;
            guard_theorem(&args, shape.size() as u32, false)?;
            report(verify_thm6(&shape, exec)?)
        }
        _ => {
            let cond = conditioned(&args)?;
            let sel = VarSelection::parse(cond.distribution(), &need(args.vars.clone(), "vars")?)?;
            guard_theorem(&args, sel.len() as u32, false)?;
            report(verify_thm7(&cond, &sel, exec)?)
        }
    }
}

pub fn die_check(args: TheoremArgs) -> Outcome {
    let mut params = TheoremParams { n: args.n, ..Default::default() };
    let size = match args.theorem {
        3 => {
            params.dist_m = Some(load(need(args.dist_m.as_deref(), "dist-m")?)?);
            params.dist_n = Some(load(need(args.dist_n.as_deref(), "dist-n")?)?);
            let sel = split_vars(&need(args.vars.clone(), "vars")?);
            let size = sel.len() as u32;
            params.vars = Some(sel);
            size
        }
        5 => {
            let tau = parse_tau(&need(args.tau.clone(), "tau")?)?;
            let size = tau.ground().len() as u32;
            params.tau = Some(tau);
            size
        }
        6 => {
            let shape = parse_shape(&need(args.shape.clone(), "shape")?)?;
            let size = shape.size() as u32;
            params.shape = Some(shape);
            size
        }
        7 => {
            params.cond = Some(conditioned(&args)?);
            let sel = split_vars(&need(args.vars.clone(), "vars")?);
            let size = sel.len() as u32;
            params.vars = Some(sel);
            size
        }
        _ => need(args.n, "n")?,
    };
    guard_theorem(&args, size, true)?;
    let instance = build_instance(args.theorem, &params)?;
    let result = instance.check(exec(&args))?;
    println!("{}", serde_json::to_string(&result).expect("reports serialize"));
    if result.passed() {
        Ok(())
    } else {
        Err(Failure { code: VERIFY_FAILED, message: "involution check failed".into() })
    }
}
