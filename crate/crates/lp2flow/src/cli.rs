//! Command-line interface.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::arith::{parse_int, parse_rat, Rat};
use crate::error::{Error, Result};
use crate::io::{self, Document};
use crate::mapback::{map_back, map_back_chain};
use crate::model::{Class, Instance, Solution};
use crate::oracle::{lp_feasible_exact, optimize_by_bisection, twocf_solve_exact, Verdict};
use crate::pipeline::{compile_with, instance_stats};
use crate::reduce::{reduce, Stage, Trace};
use crate::verify::check;
use crate::witness::{construct_witness, witness_chain};

/// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser, Debug)]
#[command(
    name = "lp2flow",
    version,
    about = "Exact reduction of linear programs to two-commodity flow"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Which {
    /// One stage: lp-len, len-2len, 2len-1len, 1len-fhf, fhf-fphf, fphf-sff, sff-2cff, 2cff-2cfr, 2cfr-2cf.
    #[arg(long)]
    stage: Option<String>,
    /// All nine stages.
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce an instance by one stage or through the whole chain.
    Reduce {
        #[command(flatten)]
        which: Which,
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Where to write the trace.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Build the exact target solution from an exact source solution.
    Witness {
        #[command(flatten)]
        which: Which,
        input: PathBuf,
        solution: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Map a target solution back to the source of a stage, or to the LP.
    Mapback {
        #[command(flatten)]
        which: Which,
        input: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check a solution against a class at a given error; exit 1 on failure.
    Verify {
        #[arg(long)]
        class: String,
        #[arg(long)]
        eps: String,
        input: PathBuf,
        solution: PathBuf,
    },
    /// Exact reference solvers for small instances.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Compile an LP into a 2CF instance.
    Pipeline {
        #[arg(long = "eps-lp")]
        eps_lp: String,
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        budget: Option<PathBuf>,
    },
    /// Print size statistics; for an LP, the full compile report and audits.
    Stats {
        input: PathBuf,
        #[arg(long = "eps-lp", default_value = "0")]
        eps_lp: String,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Feasibility of an LP by Fourier–Motzkin elimination.
    Lp {
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Feasibility of a 2CF instance through its LP encoding.
    #[command(name = "2cf")]
    TwoCf {
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Largest integer K in a range for which the LP is feasible.
    Optimize {
        input: PathBuf,
        #[arg(long = "k-lo", allow_hyphen_values = true)]
        k_lo: String,
        #[arg(long = "k-hi", allow_hyphen_values = true)]
        k_hi: String,
    },
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Fail,
}

/// Runs the tool and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(Status::Ok) => 0,
        Ok(Status::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TriviallyInfeasible { .. } | Error::NotExact(_) => 1,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::format(format!("{}: {e}", path.display())))
}

fn read_doc(path: &Path) -> Result<Document> {
    io::parse(&read(path)?).map_err(|e| Error::format(format!("{}: {}", path.display(), strip(e))))
}

fn strip(e: Error) -> String {
    match e {
        Error::Format(m) => m,
        other => other.to_string(),
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    match read_doc(path)? {
        Document::Instance(i) => Ok(i),
        d => Err(Error::format(format!(
            "{}: expected an instance, found {:?}",
            path.display(),
            d.schema()
        ))),
    }
}

fn read_solution(path: &Path) -> Result<Solution> {
    match read_doc(path)? {
        Document::Solution(s) => Ok(s),
        d => Err(Error::format(format!(
            "{}: expected a solution, found {:?}",
            path.display(),
            d.schema()
        ))),
    }
}

fn read_traces(path: &Path) -> Result<Vec<Trace>> {
    match read_doc(path)? {
        Document::Traces(t) => Ok(t),
        d => Err(Error::format(format!(
            "{}: expected a trace, found {:?}",
            path.display(),
            d.schema()
        ))),
    }
}

fn write(path: Option<&Path>, doc: &Document) -> Result<()> {
    let text = io::serialize(doc);
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::format(format!("{}: {e}", p.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn stage_arg(which: &Which) -> Result<Option<Stage>> {
    match &which.stage {
        None => Ok(None),
        Some(s) => Stage::parse(s)
            .map(Some)
            .ok_or_else(|| Error::format(format!("unknown stage {s:?}"))),
    }
}

fn rational_arg(name: &str, s: &str) -> Result<Rat> {
    parse_rat(s).map_err(|e| Error::format(format!("{name}: {}", strip(e))))
}

fn lp_of(inst: Instance) -> Result<crate::model::LpInstance> {
    match inst {
        Instance::Lp(lp) => Ok(lp),
        other => Err(Error::format(format!(
            "expected an lp instance, found {}",
            other.class().schema()
        ))),
    }
}

fn execute(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Reduce {
            which,
            input,
            output,
            trace,
        } => {
            let inst = read_instance(&input)?;
            let (out, traces) = match stage_arg(&which)? {
                Some(stage) => {
                    let (out, t) = reduce(stage, &inst)?;
                    (out, vec![t])
                }
                None => {
                    let c = compile_with(&lp_of(inst)?, &Rat::from_integer(0.into()), false)?;
                    (Instance::TwoCf(c.instance), c.traces)
                }
            };
            write(output.as_deref(), &Document::Instance(out))?;
            if let Some(t) = trace {
                write(Some(&t), &Document::Traces(traces))?;
            }
            Ok(Status::Ok)
        }
        Command::Witness {
            which,
            input,
            solution,
            output,
        } => {
            let inst = read_instance(&input)?;
            let sol = read_solution(&solution)?;
            let out = match stage_arg(&which)? {
                Some(stage) => {
                    let (_, trace) = reduce(stage, &inst)?;
                    construct_witness(stage, &inst, &sol, &trace)?
                }
                None => {
                    let x = match sol {
                        Solution::Vector(x) => x,
                        Solution::Flow(_) => {
                            return Err(Error::KeyMismatch("--all needs an LP vector solution".into()))
                        }
                    };
                    let c = compile_with(&lp_of(inst)?, &Rat::from_integer(0.into()), true)?;
                    Solution::Flow(witness_chain(&c.sources, &c.traces, &x)?)
                }
            };
            write(output.as_deref(), &Document::Solution(out))?;
            Ok(Status::Ok)
        }
        Command::Mapback {
            which,
            input,
            solution,
            trace,
            output,
        } => {
            let inst = read_instance(&input)?;
            let sol = read_solution(&solution)?;
            let traces = read_traces(&trace)?;
            let out = match stage_arg(&which)? {
                Some(stage) => {
                    let t = traces
                        .iter()
                        .find(|t| t.stage() == stage)
                        .ok_or_else(|| Error::KeyMismatch(format!("trace file has no {} stage", stage.name())))?;
                    map_back(stage, &inst, &sol, t)?
                }
                None => {
                    if inst.class() != Class::TwoCf {
                        return Err(Error::KeyMismatch("--all maps back from a 2cf instance".into()));
                    }
                    let f = match sol {
                        Solution::Flow(f) => f,
                        Solution::Vector(_) => return Err(Error::KeyMismatch("expected a flow solution".into())),
                    };
                    let g = inst.graph().expect("flow instance");
                    f.check_shape(g.num_edges(), 2)?;
                    Solution::Vector(map_back_chain(&f, &traces)?.0)
                }
            };
            write(output.as_deref(), &Document::Solution(out))?;
            Ok(Status::Ok)
        }
        Command::Verify {
            class,
            eps,
            input,
            solution,
        } => {
            let class = Class::parse(&class).ok_or_else(|| Error::format(format!("unknown class {class:?}")))?;
            let eps = rational_arg("--eps", &eps)?;
            let inst = read_instance(&input)?;
            let sol = read_solution(&solution)?;
            let rep = check(class, &inst, &sol, &eps)?;
            out!("{rep}");
            Ok(if rep.pass() { Status::Ok } else { Status::Fail })
        }
        Command::Oracle { which } => match which {
            OracleCommand::Lp { input, output } => {
                let lp = lp_of(read_instance(&input)?)?;
                verdict(lp_feasible_exact(&lp)?.map(Solution::Vector), output.as_deref())
            }
            OracleCommand::TwoCf { input, output } => {
                let cf = match read_instance(&input)? {
                    Instance::TwoCf(c) => c,
                    other => {
                        return Err(Error::format(format!(
                            "expected a 2cf instance, found {}",
                            other.class().schema()
                        )))
                    }
                };
                verdict(twocf_solve_exact(&cf)?.map(Solution::Flow), output.as_deref())
            }
            OracleCommand::Optimize { input, k_lo, k_hi } => {
                let lp = lp_of(read_instance(&input)?)?;
                let lo = parse_int(&k_lo).map_err(|e| Error::format(format!("--k-lo: {}", strip(e))))?;
                let hi = parse_int(&k_hi).map_err(|e| Error::format(format!("--k-hi: {}", strip(e))))?;
                match optimize_by_bisection(&lp.a, &lp.b, &lp.c, &lp.r, &lo, &hi)? {
                    Some(k) => {
                        outln!("optimal K = {k}");
                        Ok(Status::Ok)
                    }
                    None => {
                        outln!("no feasible K in [{lo}, {hi}]");
                        Ok(Status::Fail)
                    }
                }
            }
        },
        Command::Pipeline {
            eps_lp,
            input,
            output,
            report,
            trace,
            budget,
        } => {
            let eps = rational_arg("--eps-lp", &eps_lp)?;
            let c = compile_with(&lp_of(read_instance(&input)?)?, &eps, false)?;
            write(
                output.as_deref(),
                &Document::Instance(Instance::TwoCf(c.instance.clone())),
            )?;
            if let Some(p) = report {
                write(Some(&p), &Document::Report(c.report.clone()))?;
            }
            if let Some(p) = trace {
                write(Some(&p), &Document::Traces(c.traces.clone()))?;
            }
            if let Some(p) = budget {
                write(Some(&p), &Document::Budget(c.budget.clone()))?;
            }
            Ok(if c.report.all_audits_hold() {
                Status::Ok
            } else {
                Status::Fail
            })
        }
        Command::Stats { input, eps_lp } => {
            let inst = read_instance(&input)?;
            if let Instance::Lp(lp) = &inst {
                let c = compile_with(lp, &rational_arg("--eps-lp", &eps_lp)?, false)?;
                out!("{}", c.report);
                return Ok(if c.report.all_audits_hold() {
                    Status::Ok
                } else {
                    Status::Fail
                });
            }
            out!("{}", inst.class().schema());
            for (k, v) in instance_stats(&inst) {
                out!(" {k}={v}");
            }
            outln!();
            Ok(Status::Ok)
        }
    }
}

fn verdict(v: Verdict<Solution>, output: Option<&Path>) -> Result<Status> {
    match v {
        Verdict::Feasible(sol) => {
            outln!("feasible");
            if let Some(p) = output {
                write(Some(p), &Document::Solution(sol))?;
            }
            Ok(Status::Ok)
        }
        Verdict::Infeasible => {
            outln!("infeasible");
            Ok(Status::Fail)
        }
    }
}
