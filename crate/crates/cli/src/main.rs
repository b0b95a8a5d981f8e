use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use subspace_codes::bounds::{self, McConfig, TradeoffQuery};
use subspace_codes::channel::{self, ChannelSpec};
use subspace_codes::experiment::{self, CodeParams, Family, RoundtripConfig};
use subspace_codes::{Error, ErrorClass, Result, Subspace};

/// Subspace codes for the operator channel.
#[derive(Parser)]
#[command(name = "subspace-codec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a validated parameter file.
    GenParams(GenArgs),
    /// Encode a message into a subspace.
    Encode(EncodeArgs),
    /// Pass a subspace through the operator channel.
    Transmit(TransmitArgs),
    /// List-decode a received subspace.
    Decode(DecodeArgs),
    /// Encode, transmit and decode random messages; prints a JSON report.
    Roundtrip(RoundtripArgs),
    /// The random-coding trade-off.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Linearized folded Reed-Solomon codes.
    #[command(subcommand)]
    Lfrs(FamilyCommand),
    /// Restricted KK codes (insertions only).
    #[command(subcommand)]
    Kk(FamilyCommand),
    /// The MV variant (insertions only).
    #[command(subcommand)]
    Mv(FamilyCommand),
}

#[derive(Subcommand)]
enum FamilyCommand {
    #[command(alias = "build-params")]
    GenParams(CodeShape),
    Encode(EncodeArgs),
    Decode(DecodeArgs),
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Evaluate the trade-off inequality exactly.
    Check(CheckArgs),
    /// Monte-Carlo search for list-size violations.
    Mc(McArgs),
}

#[derive(Args)]
struct CodeShape {
    #[arg(long)]
    q: u64,
    /// Extension degree; for mv, the subfield degree.
    #[arg(long)]
    m: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, visible_alias = "folding", default_value_t = 1)]
    s: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    family: String,
    #[command(flatten)]
    shape: CodeShape,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    params: PathBuf,
    /// Comma-separated base-field digits.
    #[arg(long)]
    message: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransmitArgs {
    /// Subspace JSON file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    deletions: usize,
    #[arg(long, default_value_t = 0)]
    insertions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON `{"h": subspace, "e": subspace}` replacing the random choice.
    #[arg(long)]
    adversarial_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    params: PathBuf,
    /// Received subspace JSON file.
    #[arg(long)]
    received: PathBuf,
    /// Claimed insertions; omit both counts to try every claim (lfrs only).
    #[arg(long)]
    insertions: Option<usize>,
    #[arg(long)]
    deletions: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RoundtripArgs {
    #[arg(long)]
    params: PathBuf,
    /// `t,r` channel point; repeatable. Defaults to the whole region.
    #[arg(long = "channel")]
    channels: Vec<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock timings (reports stop being reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// t/ℓ as a rational, e.g. 1/3.
    #[arg(long)]
    tau: String,
    #[arg(long)]
    rho: String,
    #[arg(long = "L")]
    list_size: i64,
    #[arg(long = "R")]
    rate: String,
    #[arg(long)]
    sharp: bool,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long = "M")]
    code_size: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    r: usize,
    #[arg(long = "L")]
    list_size: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Deserialize)]
struct AdversarialFile {
    h: Subspace,
    e: Subspace,
}

#[derive(Serialize)]
struct CheckReport {
    tau: String,
    rho: String,
    list_size: i64,
    rate: String,
    sharp: bool,
    radius_ok: bool,
}

#[derive(Serialize)]
struct AnyReport {
    verified: Vec<Vec<u32>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Usage => 1,
                ErrorClass::Regime => 2,
                ErrorClass::Internal => 3,
            })
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::GenParams(a) => gen_params(a.family.parse()?, &a.shape),
        Command::Encode(a) => encode(&a, None),
        Command::Transmit(a) => transmit(&a),
        Command::Decode(a) => decode(&a, None),
        Command::Roundtrip(a) => roundtrip(&a),
        Command::Bounds(BoundsCommand::Check(a)) => check(&a),
        Command::Bounds(BoundsCommand::Mc(a)) => mc(&a),
        Command::Lfrs(c) => family(Family::Lfrs, c),
        Command::Kk(c) => family(Family::Kk, c),
        Command::Mv(c) => family(Family::Mv, c),
    }
}

fn family(fam: Family, command: FamilyCommand) -> Result<()> {
    match command {
        FamilyCommand::GenParams(shape) => gen_params(fam, &shape),
        FamilyCommand::Encode(a) => encode(&a, Some(fam)),
        FamilyCommand::Decode(a) => decode(&a, Some(fam)),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn load_params(path: &Path, expected: Option<Family>) -> Result<CodeParams> {
    let params = CodeParams::load(path)?;
    if let Some(fam) = expected {
        if params.family() != fam {
            return Err(Error::InvalidParams(format!(
                "parameter file holds a {:?} code, expected {fam:?}",
                params.family()
            )));
        }
    }
    Ok(params)
}

fn load_subspace(path: &Path) -> Result<Subspace> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn parse_message(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad message digit '{s}'")))
        })
        .collect()
}

fn parse_ratio(text: &str) -> Result<Ratio<i64>> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational '{text}'")))
}

fn gen_params(fam: Family, shape: &CodeShape) -> Result<()> {
    let params = experiment::gen_params(fam, shape.q, shape.m, shape.ell, shape.k, shape.s, shape.seed)?;
    emit(&params.to_json(), shape.out.as_deref())
}

fn encode(a: &EncodeArgs, fam: Option<Family>) -> Result<()> {
    let params = load_params(&a.params, fam)?;
    let v = params.encode(&parse_message(&a.message)?)?;
    emit(&to_json(&v)?, a.out.as_deref())
}

fn transmit(a: &TransmitArgs) -> Result<()> {
    let v = load_subspace(&a.input)?;
    let spec = match &a.adversarial_file {
        Some(p) => {
            let adv: AdversarialFile = serde_json::from_str(&std::fs::read_to_string(p)?)?;
            let spec = ChannelSpec::adversarial(adv.h, adv.e, v.dim());
            if (spec.deletions, spec.insertions) != (a.deletions, a.insertions) {
                return Err(Error::InfeasibleChannel(format!(
                    "adversarial file realizes {} deletions and {} insertions",
                    spec.deletions, spec.insertions
                )));
            }
            spec
        }
        None => ChannelSpec::random(a.deletions, a.insertions),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let outcome = channel::transmit(&v, &spec, &mut rng)?;
    emit(&to_json(&outcome)?, a.out.as_deref())
}

fn decode(a: &DecodeArgs, fam: Option<Family>) -> Result<()> {
    let params = load_params(&a.params, fam)?;
    let received = load_subspace(&a.received)?;
    let text = match (&params, a.insertions, a.deletions) {
        (CodeParams::Lfrs(p), None, None) => to_json(&AnyReport {
            verified: p.decode_any(&received)?,
        })?,
        (_, t, r) => {
            // One count is enough: the other follows from dim T = ℓ + t − r.
            let dim = received.dim() as i64 - params.ell() as i64;
            let (t, r) = match (t, r) {
                (Some(t), Some(r)) => (t, r),
                (Some(t), None) => (t, (t as i64 - dim).max(0) as usize),
                (None, Some(r)) => ((dim + r as i64).max(0) as usize, r),
                (None, None) => (dim.max(0) as usize, 0),
            };
            to_json(&params.decode(&received, t, r)?)?
        }
    };
    emit(&text, a.out.as_deref())
}

fn roundtrip(a: &RoundtripArgs) -> Result<()> {
    let params = load_params(&a.params, None)?;
    let channels = a
        .channels
        .iter()
        .map(|c| {
            let (t, r) = c
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("channel '{c}' is not 't,r'")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("channel '{c}' is not 't,r'")))
            };
            Ok((parse(t)?, parse(r)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let cfg = RoundtripConfig {
        params,
        channels,
        trials: a.trials,
        seed: a.seed,
        timing: a.timing,
    };
    emit(&to_json(&experiment::run_roundtrip(&cfg)?)?, a.out.as_deref())
}

fn check(a: &CheckArgs) -> Result<()> {
    let query = TradeoffQuery::new(parse_ratio(&a.tau)?, parse_ratio(&a.rho)?, a.list_size, parse_ratio(&a.rate)?)?;
    let report = CheckReport {
        tau: query.tau.to_string(),
        rho: query.rho.to_string(),
        list_size: query.list_size,
        rate: query.rate.to_string(),
        sharp: a.sharp,
        radius_ok: bounds::radius_ok(&query, a.sharp),
    };
    emit(&to_json(&report)?, None)
}

fn mc(a: &McArgs) -> Result<()> {
    let cfg = McConfig {
        q: a.q,
        n: a.n,
        ell: a.ell,
        code_size: a.code_size,
        insertions: a.t,
        deletions: a.r,
        list_size: a.list_size,
        trials: a.trials,
        seed: a.seed,
    };
    let pool = experiment::thread_pool()?;
    let report = pool.install(|| bounds::mc_check(&cfg))?;
    emit(&to_json(&report)?, a.out.as_deref())
}
