//! `ls-crystal`: generate LS-path crystals of level-zero shape and run the structural checks.
//!
//! JSON goes to stdout, a one-line summary to stderr. Exit status is 0 when a check passes,
//! 1 when it finds a violation and 2 for usage errors.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ls_crystal::affinization::{default_nbound, Affinization};
use ls_crystal::chain_order::{has_sigma_chain, sigma_chain_criterion};
use ls_crystal::crystal_graph::{generate_closure, generate_depth_bounded, ClPathCrystal, PathCrystal};
use ls_crystal::ls_crystal::{canonical_extremal, turn_set, valid_signatures, LsCrystal};
use ls_crystal::weights::{d_lambda, from_shape};
use ls_crystal::{AffineCartanDatum, ClPath, DominantShape, Error, Path, Q};

#[derive(Parser)]
#[command(name = "ls-crystal", version, about = "Crystals of level-zero LS paths for affine Lie algebras")]
struct Cli {
    /// Worker threads; overrides LS_CRYSTAL_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Cartan datum of an affine type.
    Datum {
        #[arg(long = "type")]
        ty: String,
    },
    #[command(subcommand)]
    Crystal(CrystalCommand),
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Write a crystal graph as JSON or DOT.
    Export {
        #[command(flatten)]
        target: Target,
        /// Generate a depth-bounded piece of B(λ) instead of the classical crystal.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value = "json")]
        format: String,
        /// Destination file; stdout if absent.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum CrystalCommand {
    /// Generate B(λ)_cl, or a depth-bounded piece of B(λ) with --depth.
    Gen {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = ls_crystal::crystal_graph::DEFAULT_CAP)]
        cap: usize,
    },
    /// List component signatures and their extremal representatives.
    Components {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 4)]
        nmax: i64,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Compare the chain search with the monoid criterion at every turning point.
    Chains {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 6)]
        nmax: i64,
    },
    /// Check the component law on depth-bounded components.
    Comps {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 6)]
        nmax: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that B(λ)_cl is connected with a unique vertex of weight cl(λ).
    Simple {
        #[command(flatten)]
        target: Target,
    },
    /// Check the map from the affinization onto components of B(λ).
    Theta {
        #[command(flatten)]
        target: Target,
        /// Exponent bound |n| ≤ B; defaults to 3·d_λ.
        #[arg(long)]
        nbound: Option<i64>,
    },
}

#[derive(Args)]
struct Target {
    /// Affine type label such as A2~1 or A4~2.
    #[arg(long = "type")]
    ty: String,
    /// Multiplicities over the finite nodes, comma separated.
    #[arg(long)]
    shape: String,
}

impl Target {
    fn resolve(&self) -> Result<(AffineCartanDatum, DominantShape), Error> {
        let datum = AffineCartanDatum::from_label(&self.ty)?;
        let shape: DominantShape = self.shape.parse()?;
        shape.check(&datum)?;
        Ok((datum, shape))
    }
}

enum Failure {
    Usage(String),
    Violations(Value, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Success {
    stdout: String,
    summary: String,
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn verdict<T: Serialize>(report: &T, violations: usize, what: &str) -> Result<Success, Failure> {
    let value = serde_json::to_value(report).expect("serializable");
    if violations == 0 {
        Ok(Success { stdout: pretty(&value), summary: format!("{what}: pass") })
    } else {
        Err(Failure::Violations(value, format!("{what}: {violations} violation(s)")))
    }
}

fn graph_output(target: &Target, depth: Option<usize>, cap: usize, format: &str) -> Result<(String, String), Failure> {
    let (datum, shape) = target.resolve()?;
    let lambda = from_shape(&datum, &shape);
    match depth {
        Some(depth) => {
            let g = generate_depth_bounded(&PathCrystal { datum: &datum }, Path::straight(lambda), depth)?;
            let partial = g.graph.incomplete.iter().filter(|&&x| x).count();
            let summary = format!("{} vertices to depth {depth}, {partial} with unexplored edges", g.graph.len());
            Ok((g.graph.export(format)?, summary))
        }
        None => match generate_closure(&ClPathCrystal { datum: &datum }, ClPath::straight(lambda.cl()), cap) {
            Ok(g) => {
                let summary = format!("{} vertices, {} edges", g.graph.len(), g.graph.edge_count());
                Ok((g.graph.export(format)?, summary))
            }
            Err(Error::CapExceeded { cap, found }) => Err(Failure::Violations(
                json!({ "partial": true, "cap": cap, "found": found }),
                format!("stopped after {found} vertices at cap {cap}"),
            )),
            Err(e) => Err(e.into()),
        },
    }
}

fn chains(target: &Target, nmax: i64) -> Result<Success, Failure> {
    let (datum, shape) = target.resolve()?;
    let lambda = from_shape(&datum, &shape);
    let mut rows = Vec::new();
    let mut disagreements = 0;
    for tau in turn_set(&shape) {
        let p: u32 = tau.denom().try_into().expect("small denominator");
        let qn: u32 = tau.numer().try_into().expect("small numerator");
        for n in 0..=nmax {
            let nu = lambda.shift_delta(&Q::from_integer(n.into()));
            let found = has_sigma_chain(&datum, &lambda, &nu, &tau)?;
            let criterion = sigma_chain_criterion(&datum, &shape, p, qn, n);
            let agree = found.is_some() == criterion;
            disagreements += !agree as usize;
            rows.push(json!({
                "tau": tau.to_string(),
                "n": n,
                "oracle": found.is_some(),
                "criterion": criterion,
                "agree": agree,
                "certificate": found.map(|c| c.to_json()),
            }));
        }
    }
    let report = json!({
        "type": datum.ty.to_string(),
        "shape": shape.to_string(),
        "rows": rows,
        "disagreements": disagreements,
    });
    verdict(&report, disagreements, &format!("{} cases", rows_len(&report)))
}

fn rows_len(v: &Value) -> usize {
    v["rows"].as_array().map_or(0, |r| r.len())
}

fn components(target: &Target, nmax: i64) -> Result<Success, Failure> {
    let (datum, shape) = target.resolve()?;
    let sigs = valid_signatures(&datum, &shape, nmax);
    let mut out = Vec::new();
    for sig in &sigs {
        let p = canonical_extremal(&datum, &shape, sig)?;
        out.push(json!({ "signature": sig, "extremal": serde_json::to_value(&p).expect("serializable") }));
    }
    let report = json!({
        "type": datum.ty.to_string(),
        "shape": shape.to_string(),
        "turn": turn_set(&shape).iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "d_lambda": d_lambda(&datum, &shape)?,
        "components": out,
    });
    Ok(Success { stdout: pretty(&report), summary: format!("{} components with entries ≤ {nmax}", sigs.len()) })
}

fn execute(command: &Command) -> Result<Success, Failure> {
    match command {
        Command::Datum { ty } => {
            let datum = AffineCartanDatum::from_label(ty)?;
            Ok(Success { stdout: pretty(&datum.to_json()), summary: format!("{ty}: rank {}", datum.rank()) })
        }
        Command::Crystal(CrystalCommand::Gen { target, depth, cap }) => {
            let (stdout, summary) = graph_output(target, *depth, *cap, "json")?;
            Ok(Success { stdout, summary })
        }
        Command::Crystal(CrystalCommand::Components { target, nmax }) => components(target, *nmax),
        Command::Export { target, depth, format, out } => {
            let (text, summary) = graph_output(target, *depth, ls_crystal::crystal_graph::DEFAULT_CAP, format)?;
            match out {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
                    Ok(Success { stdout: String::new(), summary: format!("{summary}; written to {path}") })
                }
                None => Ok(Success { stdout: text, summary }),
            }
        }
        Command::Verify(VerifyCommand::Chains { target, nmax }) => chains(target, *nmax),
        Command::Verify(VerifyCommand::Comps { target, depth, nmax, seed }) => {
            let (datum, shape) = target.resolve()?;
            let ls = LsCrystal::new(&datum, &shape)?;
            let r = ls.verify_theorem_comps(*depth, *nmax, *seed);
            let what = format!("{} components checked", r.signatures.len());
            verdict(&r, r.violations.len(), &what)
        }
        Command::Verify(VerifyCommand::Simple { target }) => {
            let (datum, shape) = target.resolve()?;
            let ls = LsCrystal::new(&datum, &shape)?;
            let r = ls.verify_simple();
            let what = format!("{} vertices, {} of weight cl(λ)", r.vertices, r.weight_lambda_vertices);
            verdict(&r, r.violations.len(), &what)
        }
        Command::Verify(VerifyCommand::Theta { target, nbound }) => {
            let (datum, shape) = target.resolve()?;
            let ls = LsCrystal::new(&datum, &shape)?;
            let aff = Affinization::new(&ls)?;
            let r = aff.verify_theta(nbound.unwrap_or_else(|| default_nbound(&ls)));
            let what = format!("{} elements", r.elements);
            verdict(&r, r.violations.len(), &what)
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), String> {
    let requested = match flag {
        Some(n) => Some(n),
        None => match std::env::var("LS_CRYSTAL_THREADS") {
            Ok(v) => Some(v.parse::<usize>().map_err(|_| format!("LS_CRYSTAL_THREADS={v} is not a number"))?),
            Err(_) => None,
        },
    };
    #[cfg(feature = "parallel")]
    if let Some(n) = requested {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = requested;
    Ok(())
}

/// Writes to stdout, ending with one newline. A closed pipe is not an error worth reporting.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads(cli.threads) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match execute(&cli.command) {
        Ok(s) => {
            if !s.stdout.is_empty() {
                emit(&s.stdout);
            }
            eprintln!("{}", s.summary);
            ExitCode::SUCCESS
        }
        Err(Failure::Violations(report, summary)) => {
            emit(&pretty(&report));
            eprintln!("{summary}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
