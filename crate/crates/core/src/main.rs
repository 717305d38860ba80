use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bnint::engine::{Case, Engine, Ledger};
use bnint::report::{
    cmd_audit, cmd_classify, cmd_lines, cmd_schubert, cmd_table, cmd_verify_all, default_d_max, parse_case, Exit,
    Fixtures, Outcome, UsageError,
};

/// Classify hyperplane and quadric sections of general Brill–Noether curves.
#[derive(Parser, Debug)]
#[command(name = "bnint", version)]
struct Cli {
    /// Emit the versioned JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Replace the bundled base-case ledger with this TOML file.
    #[arg(long, global = true, value_name = "PATH")]
    ledger: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Query {
    #[arg(long, allow_negative_numbers = true)]
    r: i64,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[arg(long, allow_negative_numbers = true)]
    d: i64,
    #[arg(long, allow_negative_numbers = true)]
    g: i64,
}

impl From<Query> for Case {
    fn from(q: Query) -> Case {
        Case::new(q.r, q.n, q.d, q.g)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one case; exit 2 if it is not a Brill–Noether case.
    Classify(Query),
    /// Like classify, listing every node of the derivation.
    Trace(Query),
    /// Sweep table of verdicts with the frontier list.
    Table {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        g_max: i64,
        /// Defaults to g_max + r + 1.
        #[arg(long)]
        d_max: Option<i64>,
    },
    /// Non-generality evidence for exceptional cases.
    Audit {
        /// Case as r,n,d,g.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        case: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Evaluate a Schubert expression such as "s[2]^3" in G(1,n).
    Schubert {
        #[arg(long)]
        n: i64,
        expr: String,
    },
    /// List the lines on the blowup of the plane at k points.
    Lines {
        #[arg(long)]
        k: usize,
    },
    /// Run every numeric check; exit 3 if any fails.
    VerifyAll,
}

fn load_ledger(path: Option<&PathBuf>) -> Result<Ledger, (Exit, String)> {
    let Some(path) = path else {
        return Ok(Ledger::bundled());
    };
    let text = std::fs::read_to_string(path).map_err(|e| (Exit::Usage, format!("cannot read {}: {e}", path.display())))?;
    Ledger::from_toml_str(&text).map_err(|e| (Exit::VerificationFailure, format!("{}: {e}", path.display())))
}

fn run(cli: &Cli, echo: &str) -> Result<Outcome, (Exit, String)> {
    let ledger = load_ledger(cli.ledger.as_ref())?;
    let usage = |e: UsageError| (Exit::Usage, e.0);
    match &cli.command {
        Command::Classify(q) => cmd_classify(&Engine::new(ledger), (*q).into(), echo, false).map_err(usage),
        Command::Trace(q) => cmd_classify(&Engine::new(ledger), (*q).into(), echo, true).map_err(usage),
        Command::Table { r, n, g_max, d_max } => {
            let d_max = d_max.unwrap_or_else(|| default_d_max(*r, *g_max));
            cmd_table(&Engine::new(ledger), *r, *n, d_max, *g_max, echo).map_err(usage)
        }
        Command::Audit { case, all: _ } => {
            let q = case.as_deref().map(parse_case).transpose().map_err(usage)?;
            cmd_audit(q, echo).map_err(usage)
        }
        Command::Schubert { n, expr } => cmd_schubert(*n, expr, echo).map_err(usage),
        Command::Lines { k } => cmd_lines(*k, echo).map_err(usage),
        Command::VerifyAll => Ok(cmd_verify_all(&Fixtures::with_ledger(ledger), echo)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Success };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    match run(&cli, &echo) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.render(cli.json).as_bytes());
            let _ = out.flush();
            ExitCode::from(outcome.exit as u8)
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
