use std::{
    fs,
    io::{self, BufWriter, Write},
    path::{Path, PathBuf},
    process::ExitCode,
};

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use satkit::{
    instances::{EncodingConfig, SatInstance},
    io::{dimacs, Diagnostic},
    solvers::{DpllSolver, ExternalSolver, Solve},
};
use satkit_tools::{
    convert::{self, ConvertError, Format},
    count::{self, RangeMode, Selector},
    enumerate, parse_range, verify, SolverChoice,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NOT_VERIFIED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "satkit", version, about = "SAT and MaxSAT utilities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print total models of a CNF, one `v` line each
    Enumerate {
        cnf: PathBuf,
        /// Stop after this many models
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        limit: Option<u64>,
        /// `ref` or `bin:<path>`
        #[arg(long, default_value = "ref")]
        solver: SolverChoice,
    },
    /// Check an assignment against a CNF
    Verify { cnf: PathBuf, assignment: PathBuf },
    /// Convert between CNF, WCNF and OPB
    Convert {
        input: PathBuf,
        output: PathBuf,
        /// Input format, guessed from the extension if absent
        #[arg(long)]
        from: Option<Format>,
        /// Output format, guessed from the extension if absent
        #[arg(long)]
        to: Option<Format>,
        /// `totalizer` or `adder`
        #[arg(long, value_parser = convert::parse_card_encoding)]
        card_enc: Option<satkit::instances::CardEncoding>,
        /// `gte`, `adder`, `dpw` or `card`
        #[arg(long, value_parser = convert::parse_pb_encoding)]
        pb_enc: Option<satkit::instances::PbEncoding>,
    },
    /// Clause and auxiliary variable counts of an encoding per bound
    CountClauses {
        #[arg(long)]
        enc: Selector,
        #[arg(long)]
        n: usize,
        /// Random weights drawn from `lo..hi`, unit weights if absent
        #[arg(long, value_parser = parse_range)]
        weights: Option<(usize, usize)>,
        #[arg(long, default_value_t = count::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_parser = parse_range)]
        bounds: (usize, usize),
        /// `cumulative` encodes every bound up to the row's bound, `single`
        /// only the row's bound
        #[arg(long, default_value = "cumulative")]
        mode: RangeMode,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Csv,
    Table,
}

enum Failure {
    Usage(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure::Input(err)
    }
}

fn report_warnings(path: &Path, warnings: &[Diagnostic]) {
    for w in warnings {
        eprintln!("{}: {w}", path.display());
    }
}

fn read_cnf(path: &Path) -> anyhow::Result<SatInstance> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed = dimacs::parse_cnf_bytes(&bytes).with_context(|| format!("cannot parse {}", path.display()))?;
    report_warnings(path, &parsed.warnings);
    Ok(parsed.value)
}

fn run_enumerate<S: Solve>(inst: &SatInstance, solver: &mut S, limit: Option<u64>) -> anyhow::Result<u8> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut write_err = None;
    let limit = limit.map(|l| usize::try_from(l).unwrap_or(usize::MAX));
    let summary = enumerate::enumerate(inst, solver, limit, |model| {
        if write_err.is_none() {
            if let Err(err) = writeln!(out, "{}", enumerate::v_line(model)) {
                write_err = Some(err);
            }
        }
    })?;
    if let Some(err) = write_err {
        return Err(err.into());
    }
    let status = if summary.exhaustive { "exhaustive" } else { "not exhaustive" };
    writeln!(out, "c {} models, {status}", summary.n_models)?;
    out.flush()?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Enumerate { cnf, limit, solver } => {
            let inst = read_cnf(&cnf)?;
            Ok(match solver {
                SolverChoice::Reference => run_enumerate(&inst, &mut DpllSolver::new(), limit)?,
                SolverChoice::Binary(path) => run_enumerate(&inst, &mut ExternalSolver::new(path), limit)?,
            })
        }
        Command::Verify { cnf, assignment } => {
            let inst = read_cnf(&cnf)?;
            let text = fs::read_to_string(&assignment)
                .with_context(|| format!("cannot read {}", assignment.display()))?;
            let parsed = verify::parse_assignment(&text, inst.n_vars())
                .with_context(|| format!("cannot parse {}", assignment.display()))?;
            for val in &parsed.ignored {
                eprintln!("warning: literal {val} is outside the instance and ignored");
            }
            let verdict = verify::verify(&inst, &parsed.assignment);
            println!("{verdict}");
            Ok(if verdict == verify::Verdict::Ok { 0 } else { EXIT_NOT_VERIFIED })
        }
        Command::Convert {
            input,
            output,
            from,
            to,
            card_enc,
            pb_enc,
        } => {
            let guess = |flag: Option<Format>, path: &Path| {
                flag.or_else(|| Format::from_path(path))
                    .ok_or_else(|| Failure::Usage(format!("cannot infer the format of {}", path.display())))
            };
            let from = guess(from, &input)?;
            let to = guess(to, &output)?;
            let mut config = EncodingConfig::default();
            if let Some(card) = card_enc {
                config.card = card;
            }
            if let Some(pb) = pb_enc {
                config.pb = pb;
            }
            let bytes = fs::read(&input).with_context(|| format!("cannot read {}", input.display()))?;
            let mut buf = vec![];
            match convert::convert(&bytes, from, to, config, &mut buf) {
                Ok(warnings) => report_warnings(&input, &warnings),
                Err(err @ ConvertError::UnsupportedPair(..)) => return Err(Failure::Usage(err.to_string())),
                Err(err) => return Err(anyhow::Error::from(err).context(format!("cannot convert {}", input.display())).into()),
            }
            fs::write(&output, buf).with_context(|| format!("cannot write {}", output.display()))?;
            Ok(0)
        }
        Command::CountClauses {
            enc,
            n,
            weights,
            seed,
            bounds,
            mode,
            out,
        } => {
            if weights.is_some_and(|(lo, _)| lo == 0) {
                return Err(Failure::Usage("weights must be positive".to_string()));
            }
            let ws = count::weights(n, weights, seed);
            let rows = count::count_clauses(enc, &ws, bounds, mode);
            match out {
                OutFormat::Csv => print!("{}", count::to_csv(&rows)),
                OutFormat::Table => {
                    println!("{:>8} {:>10} {:>8}", "bound", "clauses", "vars");
                    for r in rows {
                        println!("{:>8} {:>10} {:>8}", r.bound, r.clauses, r.vars);
                    }
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Input(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
