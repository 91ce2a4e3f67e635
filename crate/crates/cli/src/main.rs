use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use koszul_cli::report::render_text;
use koszul_cli::{run, Command, WindowSpec};

#[derive(Parser, Debug)]
#[command(name = "koszul", version, about = "Exact checks for curved Koszul duality over the rationals")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Input JSON file (a path, or a name inside the fixture directory)
    #[arg(long, global = true)]
    input: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 3)]
    max_arity: usize,
    #[arg(long, global = true, default_value_t = 3)]
    max_weight: usize,
    /// Inclusive degree range, written lo..hi
    #[arg(long, global = true, default_value = "-4..4", allow_hyphen_values = true, value_parser = parse_range)]
    degree_range: (i64, i64),
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Koszul dual cooperad of a presentation
    KoszulDual,
    /// Bar construction of a presented operad
    BarOperad,
    /// Cobar construction of the Koszul dual cooperad
    CobarOperad,
    /// Check a candidate twisting morphism
    CheckTwisting,
    /// Bar construction of a unital algebra
    BarAlg,
    /// Cobar of the bar construction of an algebra
    CobarCoalg,
    /// Check the uA-infinity relations
    CheckUainf,
    /// Check a curved Lie coalgebra
    CheckCurvedLie,
    /// Curved Lie bar construction of a commutative algebra
    BarLie,
    /// Commutative cobar of the Lie bar construction
    CobarCom,
    /// Homology of a chain complex
    Homology,
    /// Koszul complex acyclicity for a presentation
    VerifyKoszul,
    /// Decompose a cocommutative coalgebra into irreducible components
    DecomposeCocom,
    /// Run the built-in verification suite
    VerifySuite,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::KoszulDual => Command::KoszulDual,
            Cmd::BarOperad => Command::BarOperad,
            Cmd::CobarOperad => Command::CobarOperad,
            Cmd::CheckTwisting => Command::CheckTwisting,
            Cmd::BarAlg => Command::BarAlg,
            Cmd::CobarCoalg => Command::CobarCoalg,
            Cmd::CheckUainf => Command::CheckUainf,
            Cmd::CheckCurvedLie => Command::CheckCurvedLie,
            Cmd::BarLie => Command::BarLie,
            Cmd::CobarCom => Command::CobarCom,
            Cmd::Homology => Command::Homology,
            Cmd::VerifyKoszul => Command::VerifyKoszul,
            Cmd::DecomposeCocom => Command::DecomposeCocom,
            Cmd::VerifySuite => Command::VerifySuite,
        }
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let w = WindowSpec { max_arity: cli.max_arity, max_weight: cli.max_weight, degree_min: cli.degree_range.0, degree_max: cli.degree_range.1 };
    let (doc, code) = run(cli.command.into(), cli.input.as_deref(), &w);
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("report serializes") + "\n",
        Format::Text => render_text(&doc),
    };
    match cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("koszul: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}
