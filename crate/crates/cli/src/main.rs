use clap::{Parser, Subcommand};
use parchi_cli::commands::{self, Format, Rendered};
use parchi_cli::spec::{read_document, Mode};
use parchi_cli::{CliError, CliResult};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact Euler characteristics on moduli of parabolic bundles.
///
/// Exit codes: 0 success, 1 a check failed, 2 invalid input,
/// 3 window instability or internal error.
#[derive(Parser, Debug)]
#[command(name = "parchi", version)]
struct Cli {
    /// Output format; csv is only available for sweep.
    #[arg(long, value_enum, default_value = "json", global = true)]
    output: Format,
    /// Directory for cached weight tables (also PARCHI_CACHE_DIR).
    #[arg(long, env = "PARCHI_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate one Euler characteristic.
    Chi {
        /// JSON query, @file, or - for stdin.
        spec: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// JSON list of ordered trees to use instead of the default basis.
        #[arg(long)]
        basis_file: Option<PathBuf>,
        /// Record wall-clock time per evaluation.
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate a grid of queries.
    Sweep {
        spec: Option<String>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        basis_file: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// Compare the jump across a wall with its residue formula.
    Wallcross {
        spec: Option<String>,
        #[arg(long)]
        basis_file: Option<PathBuf>,
    },
    /// Print or certify a diagonal basis.
    Diagonal {
        r: usize,
        #[arg(long)]
        basis_file: Option<PathBuf>,
    },
    /// Run a named verification suite, or "all".
    Verify { suite: String },
}

fn run(cli: Cli) -> CliResult<Rendered> {
    if let Some(dir) = cli.cache_dir {
        parchi::characters::set_cache_dir(Some(dir));
    }
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::internal(e.to_string()))?;
    }
    let fmt = cli.output;
    match cli.cmd {
        Cmd::Chi {
            spec,
            mode,
            basis_file,
            timing,
        } => commands::chi(&read_document(spec.as_deref())?, mode, basis_file.as_deref(), fmt, timing),
        Cmd::Sweep {
            spec,
            mode,
            basis_file,
            timing,
        } => commands::sweep(&read_document(spec.as_deref())?, mode, basis_file.as_deref(), fmt, timing),
        Cmd::Wallcross { spec, basis_file } => {
            commands::wallcross(&read_document(spec.as_deref())?, basis_file.as_deref(), fmt)
        }
        Cmd::Diagonal { r, basis_file } => commands::diagonal(r, basis_file.as_deref(), fmt),
        Cmd::Verify { suite } => commands::verify(&suite, fmt),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(r.text.as_bytes());
            if !r.text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            ExitCode::from(r.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
