//! `hypercone`: command-line front end for the verification toolkit.
//!
//! JSON goes to stdout, everything else to stderr. Exit codes: 0 holds / in /
//! ok, 1 fails / out, 2 parse error, 3 invalid input (dimension, range,
//! precondition), 4 inconclusive / ambiguous.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use hypercone::autgroup::{check_automorphism, check_deriv_automorphism, garding_check, FloatTier};
use hypercone::cones::Membership;
use hypercone::error::HyperError;
use hypercone::faces::{self, build_chain, rog_check, GeneratedFaceModel};
use hypercone::gallery::{parse_cone_id, GalleryCone};
use hypercone::linalg::LinearMap;
use hypercone::num::RationalVector;
use hypercone::report::{CheckReport, Verdict};
use hypercone::sampling::DEFAULT_SEED;
use hypercone::spectrum::{eigenvalues, eigenvalues_exact, SpectrumOptions};
use hypercone::suite::run_suite;

#[derive(Parser)]
#[command(name = "hypercone", version, about = "Hyperbolicity cones, derivative relaxations and their automorphisms")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Numerical tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for every sampled check
    #[arg(long, global = true, env = "HYPERCONE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Compact single-line JSON instead of pretty-printed
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperbolic eigenvalues of a point
    Eig {
        /// Cone id such as orthant:3, psd:3:k=1, soc:3, l1
        cone: String,
        /// Comma-separated rationals, e.g. 1,2/3,0.5
        #[arg(allow_hyphen_values = true)]
        point: String,
        /// Use the exact square-free path
        #[arg(long)]
        exact: bool,
    },
    /// Membership of a point in a cone or relaxation
    Member {
        cone: String,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Print the k-th directional derivative D_e^k p
    Deriv {
        cone: String,
        #[arg(long, short)]
        k: usize,
    },
    /// Certify or refute a linear map as a cone automorphism
    Autcheck {
        cone: String,
        /// JSON file with an array of rows of rational strings
        matrix: String,
        /// Check the k-th relaxation (also read from a cone id ending in :k=)
        #[arg(long, short)]
        k: Option<usize>,
        /// Sample budget of the float tier
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Chain of faces with unit rank increments
    Chain {
        /// Generator model: orthant:n, psd:n, soc:n, l1, orthant-tilde
        model: String,
        /// Index of the first generator
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Shuffle the candidate order with --seed
        #[arg(long)]
        shuffle: bool,
    },
    /// Rank-one generation check of a generator model
    Rogcheck { model: String },
    /// Gårding inequality for d interior points
    Garding {
        cone: String,
        /// d comma-separated points
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Run the acceptance suite
    Suite {
        /// Criterion number or name fragment
        #[arg(long)]
        filter: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<HyperError> for Failure {
    fn from(e: HyperError) -> Self {
        let code = match e {
            HyperError::Parse(_) => 2,
            HyperError::Inconclusive(_) => 4,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(g: &Global, value: &impl Serialize) {
    let text = if g.json {
        serde_json::to_string(value)
    } else {
        serde_json::to_string_pretty(value)
    };
    println!("{}", text.expect("output serializes"));
}

fn verdict_code(r: &CheckReport) -> u8 {
    match r.verdict {
        Verdict::Holds => 0,
        Verdict::FailsWithWitness => 1,
        Verdict::Inconclusive => 4,
    }
}

fn warn_all(r: &CheckReport) {
    for w in &r.regime_warnings {
        eprintln!("warning: {w}");
    }
    if r.theorem_violation {
        eprintln!("theorem violation: {}", r.diagnostics.get("theorem_violation").unwrap_or(&Value::Null));
    }
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Eig { cone, point, exact } => eig(g, cone, point, *exact),
        Command::Member { cone, point } => member(g, cone, point),
        Command::Deriv { cone, k } => deriv(g, cone, *k),
        Command::Autcheck { cone, matrix, k, samples } => autcheck(g, cone, matrix, *k, *samples),
        Command::Chain { model, start, shuffle } => chain(g, model, *start, *shuffle),
        Command::Rogcheck { model } => rogcheck(g, model),
        Command::Garding { cone, points } => garding(g, cone, points),
        Command::Suite { filter } => suite(g, filter.as_deref()),
    }
}

fn eig(g: &Global, id: &str, point: &str, exact: bool) -> CmdResult {
    let cone = parse_cone_id(id)?.target()?;
    let x = RationalVector::parse_list(point)?;
    if x.len() != cone.dim() {
        return Err(HyperError::DimensionMismatch { expected: cone.dim(), got: x.len() }.into());
    }
    let opts = SpectrumOptions {
        zero_tol: g.tol,
        ..SpectrumOptions::default()
    };
    let s = if exact {
        eigenvalues_exact(&cone, &x, &opts)?
    } else {
        eigenvalues(&cone, &x.to_f64(), &opts)?
    };
    emit(g, &s);
    Ok(0)
}

fn member(g: &Global, id: &str, point: &str) -> CmdResult {
    let gc = parse_cone_id(id)?;
    let x = RationalVector::parse_list(point)?.to_f64();
    let m = match gc.k {
        Some(_) => gc.derived()?.contains(&x, g.tol)?,
        None => gc.base.contains(&x, g.tol)?,
    };
    emit(g, &json!({ "cone": id, "membership": m }));
    Ok(match m {
        Membership::In => 0,
        Membership::Out => 1,
        Membership::BoundaryAmbiguous => 4,
    })
}

fn deriv(g: &Global, id: &str, k: usize) -> CmdResult {
    let cone = parse_cone_id(id)?.base;
    if k > cone.degree() {
        return Err(HyperError::DerivativeOrder { k, degree: cone.degree() }.into());
    }
    let p = &cone.derivative_chain()[k];
    let poly: Value = serde_json::from_str(&p.to_json()).expect("polynomial JSON parses");
    emit(g, &json!({ "cone": id, "k": k, "polynomial": poly }));
    Ok(0)
}

fn autcheck(g: &Global, id: &str, path: &str, k: Option<usize>, samples: usize) -> CmdResult {
    let gc: GalleryCone = parse_cone_id(id)?;
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{path}: {e}"),
    })?;
    let a = LinearMap::parse_json(&text)?;
    let tier = FloatTier {
        samples,
        seed: g.seed,
        tol: g.tol,
    };
    let report = match k.or(gc.k) {
        Some(k) => check_deriv_automorphism(&gc.base, k, &a, &tier)?,
        None => check_automorphism(&gc.base, &a)?,
    };
    warn_all(&report);
    emit(g, &report);
    Ok(verdict_code(&report))
}

fn model(id: &str, seed: u64) -> Result<GeneratedFaceModel, Failure> {
    let size = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Failure::from(HyperError::parse(format!("bad size in {id:?}"))))
    };
    let m = match id.split_once(':') {
        Some(("orthant", n)) => faces::orthant_model(size(n)?)?,
        Some(("psd", n)) => {
            let n = size(n)?;
            faces::psd_model(n, n, seed)?
        }
        Some(("soc", n)) => faces::soc_model(size(n)?)?,
        None if id == "l1" => faces::l1_model()?,
        None if id == "orthant-tilde" => faces::tilde_model()?,
        _ => return Err(HyperError::parse(format!("unknown model {id:?}")).into()),
    };
    Ok(m)
}

fn chain(g: &Global, id: &str, start: usize, shuffle: bool) -> CmdResult {
    let m = model(id, g.seed)?;
    let c = build_chain(&m, start, shuffle.then_some(g.seed))?;
    emit(g, &c);
    Ok(0)
}

fn rogcheck(g: &Global, id: &str) -> CmdResult {
    let m = model(id, g.seed)?;
    let r = rog_check(&m, g.tol.max(1e-7))?;
    warn_all(&r);
    emit(g, &r);
    Ok(verdict_code(&r))
}

fn garding(g: &Global, id: &str, points: &[String]) -> CmdResult {
    let cone = parse_cone_id(id)?.target()?;
    let xs = points
        .iter()
        .map(|p| RationalVector::parse_list(p).map(|v| v.0))
        .collect::<Result<Vec<_>, _>>()?;
    let r = garding_check(&cone, &xs, g.tol)?;
    emit(g, &r);
    Ok(verdict_code(&r))
}

fn suite(g: &Global, filter: Option<&str>) -> CmdResult {
    let result = run_suite(g.seed, filter)?;
    for c in &result.criteria {
        eprintln!("{} ({:.2}s)", c.summary_line(), c.elapsed.as_secs_f64());
    }
    let (pass, fail, inconclusive) = result.counts();
    eprintln!("{pass} passed, {fail} failed, {inconclusive} inconclusive");
    emit(g, &result);
    Ok(if result.passed { 0 } else { 1 })
}
