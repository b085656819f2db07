use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use schurhopf::verifier::{verify_with_trace, Report};
use schurhopf::wow::{catalog, compose};
use schurhopf::{
    coproduct, detect_wow, monomial_expansion, schur_expand, verify_corollary, verify_main_theorem,
    Error, Partition, SkewShape, WowStructure,
};

const EQUAL: u8 = 0;
const UNEQUAL: u8 = 1;
const USAGE: u8 = 2;
const HYPOTHESES: u8 = 3;

#[derive(Parser)]
#[command(
    name = "schurhopf",
    version,
    about = "Skew Schur function identities from W-compositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a skew Schur function in the Schur basis
    Expand {
        shape: String,
        /// Also compare against the filling oracle in this many variables
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Coproduct of a shape in the shape Hopf algebra
    Coproduct {
        shape: String,
        #[arg(long)]
        json: bool,
    },
    /// List the W-O-W structures of a connected skew shape
    Detect {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        json: bool,
    },
    /// Compose a shape with gamma along one of its structures
    Compose {
        /// The outer shape (any skew shape)
        #[arg(long)]
        beta: String,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        json: bool,
    },
    /// Compare beta o gamma with beta* o gamma
    Verify {
        #[arg(long)]
        beta: String,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        json: bool,
        /// Fail with exit code 3 unless the hypotheses hold
        #[arg(long)]
        strict: bool,
        /// Compare beta o gamma with beta o gamma* instead
        #[arg(long, conflicts_with = "trace")]
        corollary: bool,
        /// Attach the coproduct proof trace
        #[arg(long)]
        trace: bool,
    },
    /// Scan every structure on gamma up to a size bound
    Search {
        #[arg(long, default_value_t = 8)]
        max_size: usize,
        /// Repeatable; defaults to 2,1
        #[arg(long)]
        beta: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    gamma: String,
    /// Index into the detected structures
    #[arg(long, default_value_t = 0)]
    w: usize,
}

struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::HypothesesFail(_) | Error::BadBeta(_) => HYPOTHESES,
            _ => USAGE,
        };
        Failure(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn shape(s: &str) -> Result<SkewShape, Failure> {
    Ok(s.parse::<SkewShape>()?)
}

fn partition(s: &str) -> Result<Partition, Failure> {
    Ok(s.parse::<Partition>()?)
}

fn structure(t: &Target) -> Result<WowStructure, Failure> {
    let gamma = shape(&t.gamma)?;
    let mut found = detect_wow(&gamma);
    if found.is_empty() {
        return Err(Failure(USAGE, format!("{gamma} has no W-O-W structure")));
    }
    if t.w >= found.len() {
        return Err(Failure(
            USAGE,
            format!(
                "--w {} out of range: {gamma} has {} structures",
                t.w,
                found.len()
            ),
        ));
    }
    Ok(found.swap_remove(t.w))
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

fn expand(s: &str, vars: Option<usize>, as_json: bool) -> Outcome {
    let sh = shape(s)?;
    let f = schur_expand(&sh);
    let agrees = vars.map(|k| f.to_monomials(k) == monomial_expansion(&sh, k));
    if as_json {
        let mut v = json!({"schema": 1, "shape": sh.to_string(), "expansion": f.to_json()});
        if let (Some(k), Some(ok)) = (vars, agrees) {
            v["oracle"] = json!({"vars": k, "agrees": ok});
        }
        print_json(&v);
    } else {
        println!("{f}");
        if let (Some(k), Some(ok)) = (vars, agrees) {
            println!(
                "oracle in {k} variables: {}",
                if ok { "agrees" } else { "disagrees" }
            );
        }
    }
    Ok(if agrees == Some(false) {
        UNEQUAL
    } else {
        EQUAL
    })
}

fn show_coproduct(s: &str, as_json: bool) -> Outcome {
    let sh = shape(s)?;
    let d = coproduct(&sh);
    if as_json {
        print_json(&json!({"schema": 1, "shape": sh.to_string(), "coproduct": d.to_json()}));
    } else {
        println!("{d}");
    }
    Ok(EQUAL)
}

fn detect(g: &str, as_json: bool) -> Outcome {
    let gamma = shape(g)?;
    let found = detect_wow(&gamma);
    if as_json {
        let list: Vec<Value> = found.iter().map(WowStructure::to_json).collect();
        print_json(&json!({"schema": 1, "gamma": gamma.to_string(), "structures": list}));
    } else if found.is_empty() {
        println!("no structures");
    } else {
        for (i, s) in found.iter().enumerate() {
            println!("[{i}] {s}");
        }
    }
    Ok(EQUAL)
}

fn show_compose(b: &str, t: &Target, as_json: bool) -> Outcome {
    let alpha = shape(b)?;
    let s = structure(t)?;
    let c = compose(&alpha, &s)?;
    if as_json {
        print_json(&json!({
            "schema": 1,
            "alpha": alpha.to_string(),
            "structure": s.to_json(),
            "shape": c.shape.to_string(),
            "size": c.shape.size(),
        }));
    } else {
        println!("{}", c.shape);
    }
    Ok(EQUAL)
}

fn verify(
    b: &str,
    t: &Target,
    as_json: bool,
    strict: bool,
    corollary: bool,
    trace: bool,
) -> Outcome {
    let beta = partition(b)?;
    let s = structure(t)?;
    let report: Report = if corollary {
        verify_corollary(&beta, &s, strict)?
    } else if trace {
        verify_with_trace(&beta, &s, strict)?
    } else {
        verify_main_theorem(&beta, &s, strict)?
    };
    if as_json {
        print_json(&report.to_json());
    } else {
        println!("{report}");
    }
    Ok(if report.equal { EQUAL } else { UNEQUAL })
}

fn search(max_size: usize, betas: &[String], as_json: bool) -> Outcome {
    if max_size == 0 {
        return Err(Failure(USAGE, "--max-size must be at least 1".into()));
    }
    let betas: Vec<Partition> = if betas.is_empty() {
        vec![partition("2,1")?]
    } else {
        betas
            .iter()
            .map(|b| partition(b))
            .collect::<Result<_, _>>()?
    };
    let structures = catalog(max_size);
    let rows: Vec<Report> = structures
        .par_iter()
        .flat_map_iter(|s| betas.iter().map(move |b| (s, b)))
        .map(|(s, b)| verify_main_theorem(b, s, false))
        .collect::<Result<_, _>>()?;
    let violations = rows
        .iter()
        .filter(|r| r.hypotheses_hold() && !r.equal)
        .count();
    if as_json {
        let list: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "beta": r.beta.to_string(),
                    "structure": r.structure.to_json(),
                    "looseEnds": r.loose_end.is_some(),
                    "withinTheorem": r.hypotheses_hold(),
                    "equal": r.equal,
                })
            })
            .collect();
        print_json(&json!({
            "schema": 1,
            "maxSize": max_size,
            "instances": list,
            "violations": violations,
        }));
    } else {
        println!(
            "{:<8} {:<8} {:<6} {:<8} structure",
            "beta", "hyp", "loose", "verdict"
        );
        for r in &rows {
            println!(
                "{:<8} {:<8} {:<6} {:<8} {}",
                r.beta.to_string(),
                if r.hypotheses_hold() {
                    "hold"
                } else {
                    "outside"
                },
                if r.loose_end.is_some() { "yes" } else { "no" },
                if r.equal { "equal" } else { "unequal" },
                r.structure,
            );
        }
        let within = rows.iter().filter(|r| r.hypotheses_hold()).count();
        println!(
            "{} instances, {within} within the theorem, {violations} violations",
            rows.len()
        );
    }
    Ok(if violations == 0 { EQUAL } else { UNEQUAL })
}

fn configure_threads() {
    if let Some(n) = std::env::var("SCHURHOPF_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { EQUAL });
        }
    };
    configure_threads();
    let outcome = match &cli.command {
        Command::Expand { shape, vars, json } => expand(shape, *vars, *json),
        Command::Coproduct { shape, json } => show_coproduct(shape, *json),
        Command::Detect { gamma, json } => detect(gamma, *json),
        Command::Compose { beta, target, json } => show_compose(beta, target, *json),
        Command::Verify {
            beta,
            target,
            json,
            strict,
            corollary,
            trace,
        } => verify(beta, target, *json, *strict, *corollary, *trace),
        Command::Search {
            max_size,
            beta,
            json,
        } => search(*max_size, beta, *json),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
