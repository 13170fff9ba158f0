//! Command-line front end: one job per invocation, JSON or text reports on
//! stdout, diagnostics on stderr. Exit codes: 0 success, 2 bad job,
//! 3 precision insufficient, 4 budget exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use adlv::job::{execute_job, exit_code, render_text, BSpec, Format, GroupSpec, Job, JobKind};

#[derive(Parser)]
#[command(name = "adlv", version, about = "Affine Deligne-Lusztig variety invariants and lattice oracle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// group spec, e.g. GL:5, PGL:4, SL:2, B:3:adjoint
    #[arg(long)]
    group: Option<String>,
    /// sigma-conjugacy class spec, e.g. blocks:1/2,1/3
    #[arg(long)]
    b: Option<String>,
    /// dominant coweight, comma separated, e.g. 2,0,0,0,0
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// use the closed stratum (union over mu' below mu)
    #[arg(long)]
    closed: bool,
    /// determinant valuation of the enumeration region
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<i64>,
    /// base field order (a prime power at most 9)
    #[arg(long)]
    q: Option<u32>,
    /// extension degrees, comma separated, e.g. 1,2
    #[arg(long)]
    s: Option<String>,
    /// pivot region LO:HI (half open)
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// candidate budget (default 1000000; env ADLV_BUDGET overrides)
    #[arg(long)]
    budget: Option<u64>,
    /// restrict to one pivot profile, comma separated
    #[arg(long, allow_hyphen_values = true)]
    profile: Option<String>,
    /// output format: json or text
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Nonemptiness, indecomposability, components, dimension facts
    Classify(Common),
    /// The minimal dominant mu with a nonempty stratum
    MuMin(Common),
    /// Dimension of the superbasic stratum for a single block
    Dim(Common),
    /// Enumerate window lattices in a stratum
    OracleEnumerate(Common),
    /// Reduce enumerated members to shift lattices
    OracleReduce(Common),
    /// Point counts over a tower of field degrees
    OracleCount(Common),
    /// The canned GL_5 verification of the worked family
    VerifyGl5(Common),
    /// Run a job described by a JSON file
    Job { file: PathBuf },
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|p| p.trim().parse().map_err(|e| format!("bad integer '{p}': {e}"))).collect()
}

fn build_job(kind: JobKind, c: &Common) -> Result<Job, String> {
    let group = c.group.as_deref().map(GroupSpec::parse_compact).transpose().map_err(|e| e.to_string())?;
    let b = c.b.as_deref().map(BSpec::parse_compact).transpose().map_err(|e| e.to_string())?;
    let mu = c.mu.as_deref().map(parse_i64_list).transpose()?;
    let s = match c.s.as_deref() {
        None => Vec::new(),
        Some(text) => text
            .split(',')
            .map(|p| p.trim().parse().map_err(|e| format!("bad degree '{p}': {e}")))
            .collect::<Result<Vec<u32>, String>>()?,
    };
    let window = c
        .window
        .as_deref()
        .map(|w| -> Result<(i32, i32), String> {
            let (lo, hi) = w.split_once(':').ok_or_else(|| format!("window '{w}' is not LO:HI"))?;
            Ok((
                lo.trim().parse().map_err(|e| format!("bad window low: {e}"))?,
                hi.trim().parse().map_err(|e| format!("bad window high: {e}"))?,
            ))
        })
        .transpose()?;
    let profile = c
        .profile
        .as_deref()
        .map(|p| {
            p.split(',')
                .map(|x| x.trim().parse().map_err(|e| format!("bad profile entry '{x}': {e}")))
                .collect::<Result<Vec<i32>, String>>()
        })
        .transpose()?;
    let format = match c.format.as_str() {
        "json" => Format::Json,
        "text" => Format::Text,
        other => return Err(format!("unknown format '{other}'")),
    };
    Ok(Job {
        kind,
        group,
        b,
        mu,
        closed: c.closed,
        kappa: c.kappa,
        q: c.q,
        s,
        window,
        budget: c.budget,
        profile,
        format,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let job = match &cli.command {
        Command::Classify(c) => build_job(JobKind::Classify, c),
        Command::MuMin(c) => build_job(JobKind::MuMin, c),
        Command::Dim(c) => build_job(JobKind::Dim, c),
        Command::OracleEnumerate(c) => build_job(JobKind::OracleEnumerate, c),
        Command::OracleReduce(c) => build_job(JobKind::OracleReduce, c),
        Command::OracleCount(c) => build_job(JobKind::OracleCount, c),
        Command::VerifyGl5(c) => build_job(JobKind::VerifyGl5, c),
        Command::Job { file } => std::fs::read_to_string(file)
            .map_err(|e| format!("cannot read {}: {e}", file.display()))
            .and_then(|text| serde_json::from_str::<Job>(&text).map_err(|e| format!("bad job file: {e}"))),
    };
    let job = match job {
        Ok(job) => job,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match execute_job(&job) {
        Ok(doc) => {
            match job.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("serializable")),
                Format::Text => print!("{}", render_text(&doc)),
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
