//! `house-elicit`: generate instances, run elicitation, verify traces,
//! compute offline optima and benchmark competitive ratios.

mod bench;
mod format;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::bail;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use house_elicit::{Algorithm, Criterion, Model};

#[derive(Parser, Debug)]
#[command(name = "house-elicit", version, about = "Preference elicitation for house allocation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write an instance file.
    Gen(GenArgs),
    /// Run one elicitation algorithm on an instance and write its trace.
    Run(RunArgs),
    /// Replay a trace and check that its matching is necessarily optimal.
    Verify(VerifyArgs),
    /// Fewest queries needed by an algorithm that knows the profile.
    Opt(OptArgs),
    /// Run a family x algorithm matrix and report query counts and ratios.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Uniformly random lists.
    Random,
    /// Chained two-agent blocks plus one spare house; needs --k.
    BlockCycle,
    /// Special houses hidden in short windows; n must be a cube.
    SpecialHouse,
}

impl FamilyArg {
    pub fn name(self) -> &'static str {
        match self {
            FamilyArg::Random => "random",
            FamilyArg::BlockCycle => "block-cycle",
            FamilyArg::SpecialHouse => "special-house",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    NextBest,
    Hybrid,
    SetCompare,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::NextBest => Model::NextBest,
            ModelArg::Hybrid => Model::Hybrid,
            ModelArg::SetCompare => Model::SetCompare,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Npo,
    Nrm,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Criterion {
        match c {
            CriterionArg::Npo => Criterion::Npo,
            CriterionArg::Nrm => Criterion::Nrm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum AlgArg {
    PoSetcompare,
    PoSetcompareK,
    PoHybrid,
    RmNextbest,
    RmHybrid,
}

impl AlgArg {
    pub fn resolve(self, set_size: usize) -> Algorithm {
        match self {
            AlgArg::PoSetcompare => Algorithm::PoSetCompare,
            AlgArg::PoSetcompareK => Algorithm::PoSetCompareK(set_size),
            AlgArg::PoHybrid => Algorithm::PoHybrid,
            AlgArg::RmNextbest => Algorithm::RmNextBest,
            AlgArg::RmHybrid => Algorithm::RmHybrid,
        }
    }
}

/// Options shared by `run` and `bench`.
#[derive(Args, Debug, Clone)]
pub struct AlgOptions {
    /// Comparison-set size for po-setcompare-k.
    #[arg(long, default_value_t = 2)]
    pub set_size: usize,
    /// Starting exponent of the po-hybrid checkpoint schedule, as p/q.
    #[arg(long, value_parser = parse_ratio, default_value = "7/20")]
    pub c0: Ratio<i64>,
    /// Let po-hybrid stop as soon as the current matching is certified.
    #[arg(long)]
    pub early_exit: bool,
    /// Answer from the instance's preferences even if it names an adversary.
    #[arg(long)]
    pub truthful: bool,
    /// Refuse exhaustive searches past this many states.
    #[arg(long, default_value_t = house_elicit::baseline::DEFAULT_STATE_LIMIT)]
    pub state_limit: u64,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Number of agents (random, special-house).
    #[arg(long)]
    n: Option<usize>,
    /// Number of blocks (block-cycle); n = 2k + 1.
    #[arg(long)]
    k: Option<usize>,
    /// Agent ranking the spare house third (block-cycle); defaults to the last agent.
    #[arg(long)]
    special: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    alg: AlgArg,
    /// Must match the algorithm's model when given.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Must match the algorithm's criterion when given.
    #[arg(long, value_enum)]
    criterion: Option<CriterionArg>,
    #[command(flatten)]
    opts: AlgOptions,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Trace written by `run`.
    trace: PathBuf,
    /// Also run the exhaustive completion check (small n only).
    #[arg(long)]
    bruteforce: bool,
}

#[derive(Args, Debug)]
struct OptArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long, value_enum)]
    criterion: CriterionArg,
    #[arg(long, default_value_t = house_elicit::baseline::DEFAULT_STATE_LIMIT)]
    state_limit: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Agent counts: `4`, `3,4` or `3..5` (inclusive).
    #[arg(long, value_parser = parse_list)]
    pub n: Option<List>,
    /// Block counts for block-cycle, same syntax as --n.
    #[arg(long, value_parser = parse_list)]
    pub k: Option<List>,
    /// Algorithms, comma separated; all of them by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub alg: Vec<AlgArg>,
    /// First seed for random and special-house instances.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of seeds per size.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Skip the offline optimum.
    #[arg(long)]
    pub no_opt: bool,
    #[command(flatten)]
    pub opts: AlgOptions,
    /// Directory for bench.csv, bench.json and traces/.
    #[arg(long, default_value = "bench-out")]
    pub out: PathBuf,
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, String> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: i64 = p.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
    let q: i64 = q.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
    if q == 0 {
        return Err("zero denominator".into());
    }
    Ok(Ratio::new(p, q))
}

/// Sizes given as `4`, `3,4` or `3..5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct List(pub Vec<usize>);

fn parse_list(s: &str) -> Result<List, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = a.parse().map_err(|e| format!("{part}: {e}"))?;
            let b: usize = b.trim_start_matches('=').parse().map_err(|e| format!("{part}: {e}"))?;
            if a > b {
                return Err(format!("empty range {part}"));
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|e| format!("{part}: {e}"))?);
        }
    }
    Ok(List(out))
}

/// Failure with a specific exit status.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Certification(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Certification(m) => write!(f, "certification failed: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Failure::Usage(msg.into()).into()
}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return match f {
                Failure::Usage(_) => 1,
                Failure::Certification(_) => 2,
            };
        }
        if let Some(house_elicit::Error::BoundExceeded { .. }) = cause.downcast_ref::<house_elicit::Error>() {
            return 3;
        }
    }
    1
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.cmd {
        Cmd::Gen(a) => {
            let inst = run::generate(a.family, a.n, a.k, a.special, a.seed)?;
            format::write_json(&inst, a.out.as_deref())
        }
        Cmd::Run(a) => {
            let inst: format::Instance = format::read_json(&a.instance)?;
            let alg = a.alg.resolve(a.opts.set_size);
            if let Some(m) = a.model {
                if Model::from(m) != alg.model() {
                    bail!(usage(format!("{alg} works in the {} model", format::model_name(alg.model()))));
                }
            }
            if let Some(c) = a.criterion {
                if Criterion::from(c) != alg.criterion() {
                    bail!(usage(format!("{alg} elicits {}", format::criterion_name(alg.criterion()))));
                }
            }
            let trace = run::run_instance(&inst, alg, &a.opts)?;
            eprintln!("{}: {} queries ({} wasted) on n = {}", trace.algorithm, trace.queries, trace.wasted, trace.n);
            format::write_json(&trace, a.out.as_deref())
        }
        Cmd::Verify(a) => {
            let trace: format::TraceFile = format::read_json(&a.trace)?;
            let verdict = run::verify_trace(&trace, a.bruteforce)?;
            format::write_json(&verdict, None)?;
            if !verdict.certified {
                bail!(Failure::Certification(verdict.reason.unwrap_or_default()));
            }
            Ok(())
        }
        Cmd::Opt(a) => {
            let inst: format::Instance = format::read_json(&a.instance)?;
            let r = run::optimum(&inst.profile()?, a.model.into(), a.criterion.into(), a.state_limit)?;
            format::write_json(&format::OptFile::new(&r, a.criterion.into()), a.out.as_deref())
        }
        Cmd::Bench(a) => bench::bench(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ratios() {
        assert_eq!(parse_list("2..6").unwrap().0, vec![2, 3, 4, 5, 6]);
        assert_eq!(parse_list("3,5..6").unwrap().0, vec![3, 5, 6]);
        assert!(parse_list("4..2").is_err());
        assert_eq!(parse_ratio("7/20").unwrap(), Ratio::new(7, 20));
        assert!(parse_ratio("1/0").is_err());
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
