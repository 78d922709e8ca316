use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use steinberg::harness::{Method, DEFAULT_CAP};
use steinberg::{Family, Field, GroupDescriptor};
use steinberg_cli::Report;

/// Elimination, spinor norms and Siegel double cosets in classical groups.
#[derive(Parser)]
#[command(name = "steinberg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a matrix as L · D · R with L, R words in elementary tokens.
    Decompose { file: PathBuf },
    /// Check that a word, or decompose output, multiplies out to a matrix.
    Verify { word: PathBuf, matrix: PathBuf },
    /// Spinor norm of an orthogonal isometry.
    Spinor { file: PathBuf },
    /// Siegel double coset label.
    Coset { file: PathBuf },
    /// A random group member as a matrix file.
    Random {
        #[command(flatten)]
        group: GroupFlags,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        len: usize,
        /// Skip the random torus factor.
        #[arg(long)]
        no_torus: bool,
    },
    /// Count elements per double coset label over a tiny group.
    Census {
        #[command(flatten)]
        group: GroupFlags,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
}

#[derive(Args)]
struct GroupFlags {
    /// GL, GSp, GOplus, GOodd or GOminus.
    #[arg(long)]
    group: Family,
    #[arg(long)]
    l: usize,
    /// An odd prime, or Q.
    #[arg(long)]
    field: Field,
    #[arg(long)]
    similitude: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    Closure,
}

fn read(path: &PathBuf) -> Result<String, Report> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map(|_| s).map_err(|e| Report {
        stdout: String::new(),
        stderr: format!("error: {}: {e}\n", path.display()),
        code: 1,
    })
}

fn descriptor(g: &GroupFlags) -> Result<GroupDescriptor, Report> {
    GroupDescriptor::new(g.group, g.l, g.field, g.similitude).map_err(|e| Report {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: 1,
    })
}

fn run(cli: Cli) -> Result<Report, Report> {
    Ok(match cli.command {
        Command::Decompose { file } => steinberg_cli::decompose_cmd(&read(&file)?),
        Command::Verify { word, matrix } => steinberg_cli::verify_cmd(&read(&word)?, &read(&matrix)?),
        Command::Spinor { file } => steinberg_cli::spinor_cmd(&read(&file)?),
        Command::Coset { file } => steinberg_cli::coset_cmd(&read(&file)?),
        Command::Random { group, seed, len, no_torus } => {
            steinberg_cli::random_cmd(&descriptor(&group)?, seed, len, !no_torus)
        }
        Command::Census { group, cap, method } => {
            let method = method.map(|m| match m {
                MethodArg::Brute => Method::BruteForce,
                MethodArg::Closure => Method::GeneratorClosure,
            });
            steinberg_cli::census_cmd(&descriptor(&group)?, cap, method)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let report = run(cli).unwrap_or_else(|r| r);
    let _ = io::stdout().write_all(report.stdout.as_bytes());
    let _ = io::stderr().write_all(report.stderr.as_bytes());
    ExitCode::from(report.code)
}
