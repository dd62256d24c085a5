//! Command-line harness for the early-work scheduling laboratory.
//!
//! Every subcommand produces its output as a string so the binary and the
//! tests share one code path. Exit codes carry success and failure: 2 for
//! unparsable input, 3 for validation failures, 4 for an exact bound
//! violation and 1 for I/O and resource limits.

mod render;
pub mod stress;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ewl_core::exactnum::set_start_precision_bits;
use ewl_core::oracle::{self, OracleResult};
use ewl_core::report::{BoundCheck, ReportInput};
use ewl_core::{
    play, random_instance, AdversaryKind, Hint, HintKind, InstanceFile, Player, PolicyKind, Profile, Rational,
    RunReport,
};
use thiserror::Error;

pub use stress::{run_stress, StressConfig, StressSummary, Trial};

/// Overrides the starting precision of exact sign determination.
pub const PRECISION_ENV: &str = "EWL_PRECISION_BITS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("bound violation: {0}")]
    BoundViolation(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::BoundViolation(_) => 4,
            CliError::Io { .. } | CliError::Failed(_) => 1,
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ewl",
    version,
    about = "Exact early-work scheduling on two hierarchical machines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a policy on an instance file and check its guarantee against the optimum
    Run(RunArgs),
    /// Offline optimum of an instance file
    Oracle(OracleArgs),
    /// Play an adaptive lower-bound adversary against a policy or decider
    Adversary(AdversaryArgs),
    /// Check a policy's guarantee on many seeded random instances
    Stress(StressArgs),
    /// Write an instance file, random or built in
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub policy: PolicyKind,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMethod {
    /// Enumeration up to the cap, DP beyond it
    Auto,
    Bruteforce,
    Dp,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleMethod::Auto)]
    pub method: OracleMethod,
    /// Largest number of hierarchy-2 jobs brute force will enumerate
    #[arg(long, default_value_t = oracle::DEFAULT_BRUTEFORCE_CAP)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    /// thm2, thm4, thm6 or thm8
    #[arg(long)]
    pub kind: AdversaryKind,
    /// alg1..alg4, greedy1, greedy2 or random:<seed>
    #[arg(long)]
    pub policy: Player,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Random-instance parameters shared by `gen` and `stress`.
#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    /// Common due date, `p` or `p/q`
    #[arg(long, default_value = "1")]
    pub d: Rational,
    /// Job lengths are `d·k/denominator`
    #[arg(long, default_value_t = 24)]
    pub denominator: u32,
    /// Probability of a hierarchy-1 job
    #[arg(long, default_value_t = 0.5)]
    pub low_prob: f64,
    /// Probability of an irrational job length (brute-force oracle only)
    #[arg(long, default_value_t = 0.0)]
    pub irrational_rate: f64,
}

impl ProfileArgs {
    pub fn to_profile(&self) -> Result<Profile, CliError> {
        if self.d.signum() <= 0 {
            return Err(CliError::Parse(format!("--d must be positive, got {}", self.d)));
        }
        if self.denominator == 0 {
            return Err(CliError::Parse("--denominator must be at least 1".into()));
        }
        for (name, v) in [
            ("--low-prob", self.low_prob),
            ("--irrational-rate", self.irrational_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::Parse(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(Profile {
            d: self.d.clone(),
            denominator: self.denominator,
            low_prob: self.low_prob,
            irrational_rate: self.irrational_rate,
            path_seed: None,
        })
    }
}

#[derive(Debug, Args)]
pub struct StressArgs {
    #[arg(long)]
    pub policy: PolicyKind,
    /// Trial i uses seed `seed + i`
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Job counts are drawn uniformly from 1..=max-n
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_n: u64,
    /// Hint kind given to the policy; defaults to the one it needs
    #[arg(long)]
    pub hint: Option<HintKind>,
    /// Share of trials started from the matching adversary's worst-case path
    #[arg(long, default_value_t = 0.1)]
    pub near_worst_rate: f64,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hint kind written into the file (computed truthfully)
    #[arg(long, default_value_t = HintKind::None)]
    pub hint: HintKind,
    /// Emit an adversary's realized worst-case path instead of a random instance
    #[arg(long)]
    pub builtin: Option<AdversaryKind>,
    /// Policy whose trace the built-in path follows; defaults to the matching one
    #[arg(long, requires = "builtin")]
    pub policy: Option<PolicyKind>,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Text produced by a command, plus an optional diagnostic for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub note: Option<String>,
    /// Set when an exact check failed; the body is still written.
    pub violation: Option<String>,
}

impl Outcome {
    fn new(body: String) -> Self {
        Outcome {
            body,
            note: None,
            violation: None,
        }
    }
}

/// Largest accepted starting precision; the loop doubles from there anyway.
const MAX_PRECISION_BITS: u32 = 1 << 16;

/// Reads [`PRECISION_ENV`] if set.
pub fn apply_precision_env() -> Result<(), CliError> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => {
            let bits: u32 = v
                .trim()
                .parse()
                .ok()
                .filter(|b| (1..=MAX_PRECISION_BITS).contains(b))
                .ok_or_else(|| {
                    CliError::Parse(format!(
                        "{PRECISION_ENV} must be an integer in 1..={MAX_PRECISION_BITS}, got `{v}`"
                    ))
                })?;
            set_start_precision_bits(bits);
            Ok(())
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(CliError::Parse(format!("{PRECISION_ENV}: {e}"))),
    }
}

/// Runs one parsed command, writing its output.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let (outcome, out) = match &cli.command {
        Command::Run(a) => (cmd_run(a)?, a.out.as_deref()),
        Command::Oracle(a) => (cmd_oracle(a)?, a.out.as_deref()),
        Command::Adversary(a) => (cmd_adversary(a)?, a.out.as_deref()),
        Command::Stress(a) => (cmd_stress(a)?, a.out.as_deref()),
        Command::Gen(a) => (cmd_gen(a)?, a.out.as_deref()),
    };
    write_output(out, &outcome.body)?;
    if let Some(note) = &outcome.note {
        eprintln!("{note}");
    }
    match outcome.violation {
        Some(v) => Err(CliError::BoundViolation(v)),
        None => Ok(()),
    }
}

fn write_output(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

pub fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    InstanceFile::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn report_violation(report: &RunReport) -> Option<String> {
    let mut failed = Vec::new();
    if !report.bound_holds {
        failed.push("policy bound");
    }
    if !report.opt_bound_holds {
        failed.push("optimum upper bound");
    }
    if !report.consistent() {
        failed.push("c_alg ≤ c_opt");
    }
    (!failed.is_empty()).then(|| {
        format!(
            "{} failed for {} (c_alg = {}, c_opt = {})",
            failed.join(", "),
            report.decider,
            report.c_alg,
            report.c_opt
        )
    })
}

fn render_report(report: &RunReport, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => report.to_json() + "\n",
        Format::Pretty => render::report(report),
        Format::Csv => render::report_csv(report)?,
    })
}

pub fn cmd_run(args: &RunArgs) -> Result<Outcome, CliError> {
    let (instance, hint) = load_instance(&args.instance)?.split();
    let (schedule, c_alg) =
        ewl_core::run_policy(args.policy, &instance, &hint).map_err(|e| CliError::Invalid(e.to_string()))?;
    let c_opt = oracle::optimal_value(&instance).map_err(|e| CliError::Failed(e.to_string()))?;
    let report = RunReport::build(ReportInput {
        decider: args.policy.name().to_string(),
        adversary: None,
        instance: &instance,
        hint: &hint,
        assignments: &schedule.assignments,
        c_alg,
        c_opt,
        check: BoundCheck::Upper,
        bound: args.policy.competitive_ratio(),
    });
    let mut outcome = Outcome::new(render_report(&report, args.format)?);
    outcome.violation = report_violation(&report);
    Ok(outcome)
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<Outcome, CliError> {
    let (instance, _) = load_instance(&args.instance)?.split();
    let violations = ewl_core::validate(&instance, &Hint::NoInfo);
    if !violations.is_empty() {
        let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(CliError::Invalid(format!("invalid instance: {}", msg.join("; "))));
    }
    let result: OracleResult = match args.method {
        OracleMethod::Auto if instance.high_indices().len() <= args.cap => {
            oracle::optimal_bruteforce_capped(&instance, args.cap)
        }
        OracleMethod::Auto => oracle::optimal(&instance),
        OracleMethod::Bruteforce => oracle::optimal_bruteforce_capped(&instance, args.cap),
        OracleMethod::Dp => oracle::optimal_dp_witness(&instance),
    }
    .map_err(|e| CliError::Failed(e.to_string()))?;

    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&result).expect("serializable") + "\n",
        Format::Pretty => render::oracle(&result),
        Format::Csv => render::oracle_csv(&result)?,
    };
    let mut outcome = Outcome::new(body);
    if !ewl_core::opt_sanity(&instance, &result.value) {
        outcome.violation = Some(format!("c_opt = {} exceeds min(T, 2d)", result.value));
    }
    Ok(outcome)
}

pub fn cmd_adversary(args: &AdversaryArgs) -> Result<Outcome, CliError> {
    let report = play(args.kind, args.policy).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut outcome = Outcome::new(render_report(&report, args.format)?);
    outcome.violation = report_violation(&report);
    Ok(outcome)
}

pub fn cmd_stress(args: &StressArgs) -> Result<Outcome, CliError> {
    let config = StressConfig::from_args(args)?;
    let (trials, summary) = run_stress(&config)?;
    let body = match args.format {
        Format::Csv => stress::to_csv(&trials)?,
        Format::Json => serde_json::to_string_pretty(&summary).expect("serializable") + "\n",
        Format::Pretty => render::stress_summary(&summary),
    };
    let mut outcome = Outcome::new(body);
    if args.format == Format::Csv {
        outcome.note = Some(render::stress_line(&summary));
    }
    if !summary.violations.is_empty() {
        let seeds: Vec<String> = summary.violations.iter().map(u64::to_string).collect();
        outcome.violation = Some(format!("{} failed on seeds {}", summary.policy, seeds.join(", ")));
    }
    Ok(outcome)
}

pub fn cmd_gen(args: &GenArgs) -> Result<Outcome, CliError> {
    let file = match args.builtin {
        Some(kind) => {
            let policy = args.policy.unwrap_or(kind.matching_policy());
            let (instance, hint) =
                ewl_core::adversary::worst_case_instance(kind, policy).map_err(|e| CliError::Failed(e.to_string()))?;
            InstanceFile::new(instance, hint)
        }
        None => {
            let profile = args.profile.to_profile()?;
            let (instance, hint) = random_instance(args.seed, args.n, &profile, args.hint);
            InstanceFile::new(instance, hint)
        }
    };
    Ok(Outcome::new(file.to_json() + "\n"))
}

/// Hint kind a stress run gives `policy`: the requested one if the policy
/// accepts it, else its natural kind.
pub fn stress_hint(policy: PolicyKind, requested: Option<HintKind>) -> Result<HintKind, CliError> {
    let kind = requested.unwrap_or(policy.natural_hint());
    match policy.required_hint() {
        Some(required) if required != kind => Err(CliError::Invalid(format!(
            "{policy} needs a `{required}` hint, not `{kind}`"
        ))),
        _ => Ok(kind),
    }
}
