//! `hz`: command-line access to the hz-core computations.
//!
//! Exit codes: 0 success, 1 bad input or failed computation, 2 usage error,
//! 3 sieve found no admissible prime, 4 a `--verify` oracle disagreed.

mod asai_cmd;
mod hecke_cmd;
mod qexp_cmd;
mod sieve_cmd;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "hz", version, about = "p-adic q-expansions, Hecke projections, Asai data and a prime sieve")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run independent checks on the result and fail with exit code 4 on mismatch.
    #[arg(long, global = true)]
    verify: bool,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Default p-adic precision m for commands that take one.
    #[arg(long, global = true, env = "HZ_PRECISION_DEFAULT", default_value_t = 10)]
    precision: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search a range of primes for ones satisfying every checkable assumption.
    Sieve(sieve_cmd::Args),
    /// Restrict a Hilbert expansion to the diagonal.
    DiagRestrict(qexp_cmd::RestrictArgs),
    /// Apply an operator to a stored expansion.
    QexpOp(qexp_cmd::OpArgs),
    /// Weight two p-adic L-value from a problem file or a synthetic instance.
    Lvalue(hecke_cmd::LvalueArgs),
    /// Euler factors at p from the stabilisation roots.
    Euler(hecke_cmd::EulerArgs),
    /// Frobenius data of the Asai representation, or a tensor induction of a supplied representation.
    Asai(asai_cmd::Args),
    /// Hodge-Tate weights of the Asai filtration pieces at weight l.
    HtTable(asai_cmd::HtArgs),
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
pub enum Fail {
    Input(anyhow::Error),
    NoneFound,
    Verify(String),
}

/// An oracle mismatch raised inside code that returns `anyhow::Result`.
#[derive(Debug)]
pub struct VerifyError(pub String);

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerifyError {}

impl<E: Into<anyhow::Error>> From<E> for Fail {
    fn from(e: E) -> Self {
        let e = e.into();
        match e.downcast::<VerifyError>() {
            Ok(v) => Fail::Verify(v.0),
            Err(e) => Fail::Input(e),
        }
    }
}

pub type CmdResult = Result<(), Fail>;

/// Shared options passed to every command.
pub struct Ctx {
    pub format: Format,
    pub verify: bool,
    pub precision: u32,
}

impl Ctx {
    /// Print a JSON value or the text lines, depending on the format.
    pub fn emit(&self, json: serde_json::Value, text: impl FnOnce() -> String) {
        match self.format {
            Format::Json => println!("{json}"),
            Format::Text => print!("{}", text()),
        }
    }
}

pub fn read_input(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}

/// Check an oracle: record a mismatch message or do nothing.
pub fn check(ok: bool, what: impl FnOnce() -> String) -> CmdResult {
    if ok {
        Ok(())
    } else {
        Err(Fail::Verify(what()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("hz {}", env!("CARGO_PKG_VERSION"));
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let ctx = Ctx { format: cli.format, verify: cli.verify, precision: cli.precision };
    let r = match cli.cmd {
        Cmd::Sieve(a) => sieve_cmd::run(&ctx, a),
        Cmd::DiagRestrict(a) => qexp_cmd::restrict(&ctx, a),
        Cmd::QexpOp(a) => qexp_cmd::op(&ctx, a),
        Cmd::Lvalue(a) => hecke_cmd::lvalue(&ctx, a),
        Cmd::Euler(a) => hecke_cmd::euler(&ctx, a),
        Cmd::Asai(a) => asai_cmd::run(&ctx, a),
        Cmd::HtTable(a) => asai_cmd::ht(&ctx, a),
    };
    match r {
        Ok(()) => {
            if ctx.verify {
                eprintln!("verify: ok");
            }
            ExitCode::SUCCESS
        }
        Err(Fail::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Fail::NoneFound) => ExitCode::from(3),
        Err(Fail::Verify(msg)) => {
            eprintln!("verify failed: {msg}");
            ExitCode::from(4)
        }
    }
}
