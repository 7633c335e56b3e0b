use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use opfactor::C64;
use opfactor_cli::{run, CliError, Command, ProblemFile, Settings, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK};

#[derive(Parser)]
#[command(name = "opfactor", version, about = "Factorization and multiplicity of analytic operator functions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Forward and reversed Howland factorization at z0.
    Factorize(WithFile),
    /// Multiplicity of a zero or index of a pole, by every applicable method.
    Multiplicity(WithFile),
    /// Birman-Schwinger identities at every eigenvalue of H (or at z0).
    VerifyBs(WithFile),
    /// Index, traces, determinant and spectral shift of a projection pair.
    Projections(WithFile),
    /// The two built-in 2x2 examples. FILE only supplies tolerances.
    PaperExamples(OptionalFile),
}

#[derive(Args)]
struct Flags {
    /// Point of interest, as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z0: Option<C64>,
    /// Contour radius.
    #[arg(long)]
    eps: Option<f64>,
    /// Relative rank tolerance.
    #[arg(long)]
    rtol: Option<f64>,
    /// Seed for randomly generated projection pairs.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Include per-stage wall times.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct WithFile {
    #[command(flatten)]
    flags: Flags,
    file: PathBuf,
}

#[derive(Args)]
struct OptionalFile {
    #[command(flatten)]
    flags: Flags,
    file: Option<PathBuf>,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected RE,IM, got `{s}`")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", serde_json::to_string(&err.record()).expect("error records serialize"));
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_OK);
        }
        Err(e) => return fail(&CliError::Input(e.to_string().trim_end().to_string())),
    };
    let (command, flags, path) = match cli.command {
        Cmd::Factorize(a) => (Command::Factorize, a.flags, Some(a.file)),
        Cmd::Multiplicity(a) => (Command::Multiplicity, a.flags, Some(a.file)),
        Cmd::VerifyBs(a) => (Command::VerifyBs, a.flags, Some(a.file)),
        Cmd::Projections(a) => (Command::Projections, a.flags, Some(a.file)),
        Cmd::PaperExamples(a) => (Command::PaperExamples, a.flags, a.file),
    };
    let file = match path.as_deref().map(ProblemFile::read).transpose() {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let settings = Settings {
        z0: flags.z0,
        eps: flags.eps,
        rtol: flags.rtol,
        seed: flags.seed,
        timings: flags.timings,
    };
    match run(command, file.as_ref(), &settings) {
        Ok(report) => {
            let text = if flags.json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            };
            // a closed pipe downstream is not an error of the run
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if report.ok { EXIT_OK } else { EXIT_NUMERICAL })
        }
        Err(e) => {
            debug_assert!(e.exit_code() == EXIT_INPUT || e.exit_code() == EXIT_NUMERICAL);
            fail(&e)
        }
    }
}
