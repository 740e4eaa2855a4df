//! `endoq`: cooperative queueing games with an endogenous number of machines.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use endoq_core::claims::{property_config, verify_paper, Fixtures};
use endoq_core::games::{
    private_requeueing_game, public_requeueing_game, queueing_cost_game, reduced_cost_game, relaxed_public_game,
};
use endoq_core::io::{load_problem, ProblemFile};
use endoq_core::oracle::{run_oracle_checks, OracleConfig};
use endoq_core::solutions::{classify_regimes, core_nonempty, CoreCertificate};
use endoq_core::{Error, GameTable, RearrangementVariant};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_EMPTY_CORE: u8 = 10;

#[derive(Parser)]
#[command(name = "endoq", version, about = "Core analysis of queueing games with endogenous machine counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the characteristic function of a game.
    Game(GameArgs),
    /// Decide core non-emptiness, with a witness or a balanced collection.
    Core(GameArgs),
    /// Split the machine-cost axis by core verdict.
    Regimes(ProblemArgs),
    /// Re-check the worked examples and the closed-form core results.
    VerifyPaper(VerifyArgs),
    /// Compare closed forms with brute force on seeded random instances.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of standard output (replaced atomically).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ProblemArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Refuse problems with more agents than this.
    #[arg(long)]
    max_n: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct GameArgs {
    #[command(flatten)]
    input: ProblemArgs,
    #[arg(long, value_enum, default_value_t = Family::Queueing)]
    family: Family,
    #[arg(long, value_enum, default_value_t = Variant::Swaps)]
    variant: Variant,
}

#[derive(Args)]
struct VerifyArgs {
    /// Directory holding example1.json, example2.json and example3.json.
    #[arg(long)]
    fixtures: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    max_n: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    #[arg(long, default_value_t = 20)]
    max_weight: i64,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Queueing,
    Private,
    Public,
    Reduced,
    Relaxed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Swaps,
    NoSwaps,
}

impl From<Variant> for RearrangementVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Swaps => RearrangementVariant::Swaps,
            Variant::NoSwaps => RearrangementVariant::NoSwaps,
        }
    }
}

/// A finished report and the exit status that goes with it.
struct Report {
    json: String,
    text: String,
    code: u8,
}

fn fail(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_INPUT,
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn load(args: &ProblemArgs) -> Result<ProblemFile, Error> {
    let file = load_problem(&args.problem)?;
    if let Some(cap) = args.max_n {
        let n = file.problem.n();
        if n > cap {
            return Err(Error::CapExceeded { what: "problem size", n, cap });
        }
    }
    Ok(file)
}

fn build_game(args: &GameArgs) -> Result<GameTable, Error> {
    let file = load(&args.input)?;
    let variant = args.variant.into();
    match args.family {
        Family::Queueing => queueing_cost_game(&file.problem),
        Family::Reduced => reduced_cost_game(&file.problem).map(|r| r.table),
        Family::Private => private_requeueing_game(file.requeueing()?, variant),
        Family::Public => public_requeueing_game(file.requeueing()?, variant),
        Family::Relaxed => relaxed_public_game(file.requeueing()?),
    }
}

fn game_text(game: &GameTable) -> String {
    let mut out = format!("{} game, n = {}\n", game.kind(), game.n());
    for (c, w) in game.iter() {
        let _ = writeln!(out, "{{{c}}}\t{w}");
    }
    out
}

fn cmd_game(args: &GameArgs) -> Result<Report, Error> {
    let game = build_game(args)?;
    Ok(Report { json: json(&game), text: game_text(&game), code: 0 })
}

fn certificate_text(cert: &CoreCertificate) -> String {
    match cert {
        CoreCertificate::Nonempty { allocation } => {
            let y: Vec<String> = allocation.iter().map(ToString::to_string).collect();
            format!("core non-empty\nallocation ({})\n", y.join(", "))
        }
        CoreCertificate::Empty { collection } => {
            let c = collection.integer_form();
            let mut out = String::from("core empty\nbalanced collection:\n");
            for e in &c.coalitions {
                let _ = writeln!(out, "  {} x {{{}}}", e.weight, e.coalition);
            }
            let rel = match c.kind {
                endoq_core::GameKind::Cost => "<",
                endoq_core::GameKind::Value => ">",
            };
            let _ = writeln!(out, "{} {rel} {} = {} x worth(N)", c.weighted_worth, c.grand_total, c.copies);
            out
        }
    }
}

fn cmd_core(args: &GameArgs) -> Result<Report, Error> {
    let game = build_game(args)?;
    let cert = core_nonempty(&game)?;
    let code = if cert.is_nonempty() { 0 } else { EXIT_EMPTY_CORE };
    Ok(Report { json: json(&cert), text: certificate_text(&cert), code })
}

fn cmd_regimes(args: &ProblemArgs) -> Result<Report, Error> {
    let file = load(args)?;
    let report = classify_regimes(&file.problem)?;
    Ok(Report { json: json(&report), text: report.render_text(), code: 0 })
}

fn cmd_verify_paper(args: &VerifyArgs) -> Result<Report, Error> {
    let fixtures = match &args.fixtures {
        Some(dir) => Fixtures::from_dir(dir)?,
        None => Fixtures::bundled()?,
    };
    let d = property_config();
    let cfg = OracleConfig {
        seed: args.seed.unwrap_or(d.seed),
        instances: args.instances.unwrap_or(d.instances),
        max_n: args.max_n.unwrap_or(d.max_n),
        ..d
    };
    check_oracle_caps(&cfg)?;
    let report = verify_paper(&fixtures, &cfg)?;
    let code = if report.all_pass() { 0 } else { EXIT_MISMATCH };
    Ok(Report { json: json(&report), text: report.render_text(), code })
}

fn check_oracle_caps(cfg: &OracleConfig) -> Result<(), Error> {
    let cap = endoq_core::scheduling::BRUTE_FORCE_CAP;
    if cfg.max_n > cap {
        return Err(Error::CapExceeded { what: "random instance size", n: cfg.max_n, cap });
    }
    if cfg.max_n == 0 || cfg.max_weight < 1 {
        return Err(Error::InvalidProblem("need --max-n >= 1 and --max-weight >= 1".into()));
    }
    Ok(())
}

fn cmd_oracle_check(args: &OracleArgs) -> Result<Report, Error> {
    let cfg = OracleConfig { seed: args.seed, instances: args.instances, max_n: args.max_n, max_weight: args.max_weight };
    check_oracle_caps(&cfg)?;
    let report = run_oracle_checks(&cfg);
    let code = if report.passed() { 0 } else { EXIT_MISMATCH };
    Ok(Report { json: json(&report), text: report.render_text(), code })
}

fn write_atomically(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

fn emit(out: &Output, report: Report) -> ExitCode {
    let body = match out.format {
        Format::Json => report.json,
        Format::Text => report.text,
    };
    let written = match &out.output {
        Some(path) => write_atomically(path, body.as_bytes()),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::from(report.code),
        Err(e) => {
            eprintln!("endoq: cannot write output: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, result) = match &cli.command {
        Command::Game(a) => (&a.input.out, cmd_game(a)),
        Command::Core(a) => (&a.input.out, cmd_core(a)),
        Command::Regimes(a) => (&a.out, cmd_regimes(a)),
        Command::VerifyPaper(a) => (&a.out, cmd_verify_paper(a)),
        Command::OracleCheck(a) => (&a.out, cmd_oracle_check(a)),
    };
    match result {
        Ok(report) => emit(out, report),
        Err(e) => {
            eprintln!("endoq: {e}");
            ExitCode::from(fail(&e))
        }
    }
}
