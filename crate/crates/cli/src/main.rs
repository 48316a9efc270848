mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use acm_core::AcmError;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "acm", version, about = "Hilbert series and CM verdicts for symmetric subspace arrangements")]
pub struct Cli {
    /// Only print warnings and errors on stderr.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graded dimensions and Hilbert series numerators.
    #[command(subcommand)]
    Hilbert(HilbertCmd),
    /// Decide CM-ness of an arrangement or of a Newton subalgebra by computation.
    CmCheck(CmCheckArgs),
    /// Rule-based verdicts for X_lambda and X_lambda/S_n.
    Classify(ClassifyArgs),
    /// Dimension sweeps over a rational parameter.
    Sweep(SweepArgs),
    /// Build and verify a freeness certificate.
    Freeness(FreenessArgs),
    /// Re-verify a certificate written by `freeness --json`.
    VerifyCertificate(VerifyArgs),
    /// Dimensions of the isotypic module over the (b+1,b,1) slice algebra.
    ModuleHilbert(ModuleArgs),
    /// Compare the sweep drop set with the predicted bad set.
    BsetReport(BsetArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// `q` for the rationals or `gfp:<p>`; defaults to gfp with ACM_PRIME or 32003.
    #[arg(long)]
    pub field: Option<String>,
    /// Write JSON to the given file, or to stdout when no file is given.
    #[arg(long, num_args = 0..=1, default_missing_value = "-")]
    pub json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum HilbertCmd {
    /// Coordinate ring of X_lambda, numerator over (1-t)^r.
    Arrangement {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 12)]
        max_deg: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Invariant ring of X_lambda, generated by the Newton lambda-sums.
    Invariants {
        #[arg(long)]
        lambda: String,
        /// Restrict to P_1 = 0.
        #[arg(long)]
        slice: bool,
        #[arg(long, default_value_t = 12)]
        max_deg: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Newton-sum subalgebras with rational weights.
    Subalgebra {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 12)]
        max_deg: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Deformed Newton sums a(y_1^i+..+y_r^i)+(z_1^i+..+z_s^i).
    Deformed {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Parameter value; random when omitted.
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_deg: u32,
        /// Compare with the closed-form generic Hilbert series.
        #[arg(long)]
        compare_closed_form: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

/// Selects a Newton family.
#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// slice-newton (weights a,b,1 on P_1=0), bplus1 (b+1,b,1 slice),
    /// bplus1-1 (b+1,b,1,1 slice), equal (a,a,1 slice), deformed, or newton (--weights).
    #[arg(long, default_value = "slice-newton")]
    pub family: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Comma-separated rational weights for `--family newton`.
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Restrict `--family newton` to P_1 = 0.
    #[arg(long)]
    pub slice: bool,
}

#[derive(Args, Debug)]
pub struct CmCheckArgs {
    /// Partition for the arrangement check.
    #[arg(long, conflicts_with = "family")]
    pub lambda: Option<String>,
    /// Newton family for the subalgebra check (see `hilbert subalgebra`).
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    #[arg(long)]
    pub slice: bool,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    #[arg(long)]
    pub max_deg: Option<u32>,
    /// q, two-primes or single.
    #[arg(long, default_value = "two-primes")]
    pub certify: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub lambda: String,
    /// Annotate with predictions of unproved conjectures.
    #[arg(long)]
    pub conjectures: bool,
    #[arg(long, num_args = 0..=1, default_missing_value = "-")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// deformed or slice-newton-line.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// `auto` or a comma-separated list of rationals.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub candidates: String,
    /// Only `a=b+1` is supported.
    #[arg(long, default_value = "a=b+1")]
    pub line: String,
    /// Random points on and off the line.
    #[arg(long, default_value_t = 3)]
    pub points: usize,
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 12)]
    pub max_deg: u32,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "two-primes")]
    pub certify: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct FreenessArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// `auto` or a list such as `1,P4,P5,P4^2`.
    #[arg(long, default_value = "auto")]
    pub gens: String,
    /// Explicit recursion checks for n up to this bound.
    #[arg(long, default_value_t = 4)]
    pub check_up_to: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Certificate JSON, or a report containing one.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub check_up_to: u32,
    /// Extra recursion indices to check explicitly.
    #[arg(long, value_delimiter = ',')]
    pub spot: Vec<u32>,
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, default_value_t = 8)]
    pub max_deg: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct BsetArgs {
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long, default_value_t = 12)]
    pub max_deg: u32,
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "two-primes")]
    pub certify: String,
    #[command(flatten)]
    pub common: Common,
}

/// Exit status for an error: 2 for inconsistencies, 1 for bad input.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<AcmError>() {
        Some(AcmError::Inconsistency(_)) | Some(AcmError::CertificateFailed(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
