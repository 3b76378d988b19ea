//! `goodstein`: run, verify and inspect fractal Goodstein processes.

mod trace;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use goodstein_core::interpretations::{PsiInterp, ThetaInterp};
use goodstein_core::ordinal_terms::{step_down, Cofinality};
use goodstein_core::runner::{
    lower_bound_chain, run, verify_trace, Caps, Certify, ChainStop, Outcome,
};
use goodstein_core::successors::{ouroboros_stage, HierarchySpec};
use goodstein_core::{BaseHierarchy, Budget, Error, Nat, OrdTerm};
use serde_json::json;

use crate::trace::{read_trace, write_trace, TraceError};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("malformed trace: {0}")]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("rejected at step {at}: {msg}")]
    Rejected { at: u64, msg: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 3,
            CliError::Core(e) if e.is_budget() => 2,
            CliError::Core(Error::Spec(_) | Error::Parse { .. }) => 3,
            CliError::Core(_) | CliError::Trace(_) | CliError::Rejected { .. } => 1,
        }
    }
}

type CliResult = Result<ExitCode, CliError>;

#[derive(Parser)]
#[command(
    name = "goodstein",
    version,
    about = "Fractal Goodstein processes with ordinal certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sequence and emit its trace as JSON lines.
    Run {
        #[arg(long)]
        hierarchy: String,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 100)]
        max_steps: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value = "theta")]
        certify: String,
        /// Write the trace here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck every record of a trace file.
    Verify { trace: PathBuf },
    /// Evaluate ordinal terms.
    Ordinal {
        #[command(subcommand)]
        op: OrdinalOp,
    },
    Hierarchy {
        #[command(subcommand)]
        op: HierarchyOp,
    },
    /// Print the ϑ- or ψ-interpretation of a number.
    Interp {
        kind: InterpKind,
        #[arg(long)]
        hierarchy: String,
        #[arg(long)]
        n: String,
    },
    /// Lower-bound witness chain on the ouroboros hierarchy from `2^^(k+1)`.
    Chain {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 8)]
        max_steps: u64,
    },
}

#[derive(clap::Args)]
struct BudgetArgs {
    /// Largest intermediate number, in bits.
    #[arg(long)]
    bit_budget: Option<u64>,
    #[arg(long)]
    work_budget: Option<u64>,
    /// Largest ordinal term, in nodes.
    #[arg(long)]
    node_budget: Option<usize>,
    #[arg(long)]
    depth_budget: Option<usize>,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            bits: self.bit_budget.unwrap_or(d.bits),
            work: self.work_budget.unwrap_or(d.work),
            nodes: self.node_budget.unwrap_or(d.nodes),
            depth: self.depth_budget.unwrap_or(d.depth),
        }
    }
}

#[derive(Subcommand)]
enum OrdinalOp {
    /// Canonical form, pretty form and cofinality.
    Eval {
        term: String,
    },
    /// `term[index]`.
    Fs {
        term: String,
        index: String,
    },
    /// The descent `α⟦0⟧, α⟦1⟧, …` until zero.
    Stepdown {
        term: String,
        #[arg(long, default_value_t = 1000)]
        upto: u64,
    },
    Compare {
        left: String,
        right: String,
    },
}

#[derive(Subcommand)]
enum HierarchyOp {
    /// Bases of the ouroboros stage `B^n_{+i}`.
    Stage {
        #[arg(long)]
        base: String,
        #[arg(long)]
        i: u64,
        #[arg(long)]
        n: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum InterpKind {
    O,
    U,
}

fn nat(field: &str, s: &str) -> Result<Nat, CliError> {
    Nat::from_str(s.trim())
        .map_err(|_| CliError::Usage(format!("{field}: {s:?} is not a natural number")))
}

fn term(s: &str) -> Result<OrdTerm, CliError> {
    Ok(OrdTerm::from_str(s)?)
}

/// A finite hierarchy given either as a spec string or as a bare list.
fn finite_hierarchy(s: &str) -> Result<BaseHierarchy, CliError> {
    let spec = match HierarchySpec::from_str(s) {
        Ok(spec) => spec,
        Err(_) => HierarchySpec::from_str(&format!("finite: {s}"))?,
    };
    match spec {
        HierarchySpec::Finite(v) => Ok(BaseHierarchy::validate(v)?),
        other => Err(CliError::Usage(format!(
            "{other} is not a finite hierarchy"
        ))),
    }
}

fn print_json(v: &serde_json::Value) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)
}

fn cmd_run(
    hierarchy: &str,
    seed: &str,
    max_steps: u64,
    budget: Budget,
    certify: &str,
    out: Option<PathBuf>,
) -> CliResult {
    let spec = HierarchySpec::from_str(hierarchy)?;
    let seed = nat("seed", seed)?;
    let certify = Certify::from_str(certify).map_err(|e| CliError::Usage(e.to_string()))?;
    let caps = Caps {
        max_steps,
        budget,
        certify,
    };
    let trace = run(&spec, &seed, caps)?;
    let summary = match &trace.outcome {
        Outcome::Terminated { at } => format!("terminated at step {at}"),
        Outcome::StepCap { at } => format!("step cap reached at step {at}"),
        Outcome::Budget { at, reason } => format!("budget exceeded after step {at}: {reason}"),
        Outcome::Failed { at, reason } => format!("failed at step {at}: {reason}"),
    };
    match out {
        Some(path) => {
            write_trace(&trace, BufWriter::new(File::create(path)?))?;
            println!("{summary}");
        }
        None => {
            write_trace(&trace, io::stdout().lock())?;
            eprintln!("{summary}");
        }
    }
    if let Some((at, reason)) = &trace.witness_stop {
        eprintln!("witness chain stopped at step {at}: {reason}");
    }
    Ok(match trace.outcome {
        Outcome::Terminated { .. } | Outcome::StepCap { .. } => ExitCode::SUCCESS,
        Outcome::Budget { .. } => ExitCode::from(2),
        Outcome::Failed { .. } => ExitCode::from(1),
    })
}

fn cmd_verify(path: PathBuf) -> CliResult {
    let file =
        File::open(&path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let trace = read_trace(BufReader::new(file))?;
    let report = verify_trace(&trace);
    match report.failure {
        None => {
            println!("ok: {} steps checked", report.checked);
            Ok(ExitCode::SUCCESS)
        }
        Some((at, msg)) => Err(CliError::Rejected { at, msg }),
    }
}

fn cofinality_name(c: Cofinality) -> &'static str {
    match c {
        Cofinality::Zero => "zero",
        Cofinality::Successor => "successor",
        Cofinality::Omega => "omega",
        Cofinality::BigOmega => "Omega",
    }
}

fn cmd_ordinal(op: OrdinalOp) -> CliResult {
    match op {
        OrdinalOp::Eval { term: t } => {
            let x = term(&t)?;
            print_json(&json!({
                "term": x.to_string(),
                "pretty": x.pretty(),
                "cofinality": cofinality_name(x.cofinality()?),
            }))?;
        }
        OrdinalOp::Fs { term: t, index } => {
            let x = term(&t)?;
            let i = term(&index)?;
            let Some(i) = i.as_countable() else {
                return Err(Error::BadIndex { term: t, index }.into());
            };
            println!("{}", x.fund_seq(i)?);
        }
        OrdinalOp::Stepdown { term: t, upto } => {
            let seq = step_down(&term(&t)?, upto, &Budget::default())?;
            let mut out = io::stdout().lock();
            for x in &seq {
                writeln!(out, "{x}")?;
            }
        }
        OrdinalOp::Compare { left, right } => {
            let ord = term(&left)?.compare(&term(&right)?)?;
            println!(
                "{}",
                match ord {
                    std::cmp::Ordering::Less => "<",
                    std::cmp::Ordering::Equal => "=",
                    std::cmp::Ordering::Greater => ">",
                }
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stage(base: &str, i: u64, n: &str) -> CliResult {
    let b = finite_hierarchy(base)?;
    let n = nat("n", n)?;
    let stage = ouroboros_stage(&b, i, &n, Budget::default())?;
    let bases: Vec<String> = stage.bases.iter().map(ToString::to_string).collect();
    print_json(&json!(bases))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_interp(kind: InterpKind, hierarchy: &str, n: &str) -> CliResult {
    let h = finite_hierarchy(hierarchy)?;
    let n = nat("n", n)?;
    let text = |c: goodstein_core::Cnt| OrdTerm::from(c).to_string();
    let v = match kind {
        InterpKind::O => {
            let v = ThetaInterp::new(h, Budget::default()).value(&n)?;
            json!({
                "n": n.to_string(),
                "O": v.big.to_string(),
                "o_star": text(v.star),
                "o": text(v.little),
            })
        }
        InterpKind::U => {
            let mut u = PsiInterp::new(h, Budget::default());
            json!({
                "n": n.to_string(),
                "U": u.big_u(&n)?.to_string(),
                "u": text(u.little_u(&n)?),
                "u_normal_form": u.is_u_normal_form(&n)?,
            })
        }
    };
    print_json(&v)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_chain(k: u64, max_steps: u64) -> CliResult {
    let caps = Caps {
        max_steps,
        ..Caps::default()
    };
    let report = lower_bound_chain(k, caps)?;
    for l in &report.links {
        print_json(&json!({
            "i": l.i.to_string(),
            "m": l.m.to_string(),
            "n": l.n.to_string(),
            "u": OrdTerm::from(l.u_term.clone()).to_string(),
        }))?;
    }
    let stop = match &report.stop {
        ChainStop::Zero => json!({"stop": "zero"}),
        ChainStop::StepCap(at) => json!({"stop": "step_cap", "at": at.to_string()}),
        ChainStop::Error { at, error } => {
            json!({"stop": "error", "at": at.to_string(), "reason": error.to_string()})
        }
    };
    print_json(&stop)?;
    Ok(match &report.stop {
        ChainStop::Error { error, .. } if error.is_budget() => ExitCode::from(2),
        ChainStop::Error { .. } => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Run {
            hierarchy,
            seed,
            max_steps,
            budget,
            certify,
            out,
        } => cmd_run(&hierarchy, &seed, max_steps, budget.budget(), &certify, out),
        Command::Verify { trace } => cmd_verify(trace),
        Command::Ordinal { op } => cmd_ordinal(op),
        Command::Hierarchy {
            op: HierarchyOp::Stage { base, i, n },
        } => cmd_stage(&base, i, &n),
        Command::Interp { kind, hierarchy, n } => cmd_interp(kind, &hierarchy, &n),
        Command::Chain { k, max_steps } => cmd_chain(k, max_steps),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("goodstein: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
