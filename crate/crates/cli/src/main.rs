use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tilting_cli::{parse_cartan, parse_pair, parse_parabolic, run, CliError, Format, JobSpec, Task, Truncation};
use tilting_core::CoxeterDescriptor;

const INDEXING: &str = "\
Words are comma-separated generator labels, e.g. \"1,2,1\"; \"e\" is the identity.
Non-reduced words are accepted and normalized. Finite types use Bourbaki labels
1..n; affine types use 0..n with 0 the affine node; an explicit --cartan matrix
uses 0..n-1 in row order. Output is ordered by length, then ShortLex.

Exit status: 0 success, 1 verification failure, 2 usage or internal error
(a JSON error record is written to stderr).";

#[derive(Parser)]
#[command(name = "tiltweights", version, about = "Weight polynomials of mixed tilting sheaves on (affine) flag varieties", after_help = INDEXING)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kazhdan-Lusztig table h_{x,y}, or one pair with --pair
    Kl(Args),
    /// Tilting weight matrix (self-dual solve)
    Tilting(Args),
    /// IC weight matrix
    Ic(Args),
    /// Tilting matrix by inverting the dual IC matrix at t^-1
    Invert(Args),
    /// Pushforward of tilting weights to partial flag varieties
    Push(Args),
    /// Cross-validate all methods; exits 1 on any discrepancy
    Verify(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(clap::Args)]
struct Args {
    /// Type label: A3, B2, "affine A2", ~C2, ...
    #[arg(long = "type", value_name = "TYPE", conflicts_with = "cartan", required_unless_present = "cartan")]
    kind: Option<String>,
    /// Generalized Cartan matrix, rows separated by ';', e.g. "2,-1;-1,2"
    #[arg(long, allow_hyphen_values = true)]
    cartan: Option<String>,
    /// Truncate to elements of length at most N
    #[arg(long, value_name = "N", conflicts_with = "ideal")]
    max_length: Option<usize>,
    /// Truncate to the Bruhat interval below WORD
    #[arg(long, value_name = "WORD")]
    ideal: Option<String>,
    /// Pair of words x y (or "x;y") for kl
    #[arg(long, num_args = 1..=2, value_names = ["X", "Y"])]
    pair: Option<Vec<String>>,
    /// Restrict to the column of one element
    #[arg(long, value_name = "WORD")]
    top: Option<String>,
    /// Parabolic subset: "all", "none" or labels like "1,3"
    #[arg(long, value_name = "SUBSET")]
    parabolic: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Directory of the persistent table cache
    #[arg(long, env = "TILTWEIGHTS_CACHE_DIR", value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache even if a directory is configured
    #[arg(long)]
    no_cache: bool,
}

fn job_of(task: Task, a: Args) -> Result<JobSpec, CliError> {
    let system = match (a.kind, a.cartan) {
        (Some(t), _) => t.parse::<CoxeterDescriptor>()?,
        (None, Some(c)) => CoxeterDescriptor::Cartan(parse_cartan(&c)?),
        (None, None) => return Err(CliError::Usage("one of --type or --cartan is required".into())),
    };
    let truncation = match (a.max_length, a.ideal) {
        (Some(n), _) => Truncation::MaxLength(n),
        (None, Some(w)) => Truncation::Ideal(w),
        (None, None) => Truncation::Full,
    };
    let mut job = JobSpec::new(system, truncation, task);
    job.pair = a.pair.as_deref().map(parse_pair).transpose()?;
    job.top = a.top;
    job.parabolic = a.parabolic.as_deref().map(parse_parabolic).transpose()?;
    job.format = match a.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Text => Format::Text,
    };
    job.cache_dir = if a.no_cache { None } else { a.cache_dir };
    Ok(job)
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.record());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(&CliError::Usage(e.kind().to_string() + ": " + &e.to_string().trim().replace('\n', " ")))
        }
    };
    let (task, args) = match cli.command {
        Command::Kl(a) => (Task::Kl, a),
        Command::Tilting(a) => (Task::Tilting, a),
        Command::Ic(a) => (Task::Ic, a),
        Command::Invert(a) => (Task::Invert, a),
        Command::Push(a) => (Task::Push, a),
        Command::Verify(a) => (Task::Verify, a),
    };
    let outcome = match job_of(task, args).and_then(|job| run(&job)) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code as u8)
}
