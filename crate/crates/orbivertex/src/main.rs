//! Command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use orbivertex::correspondence::SignMode;
use orbivertex::io::{load_group_spec, to_json_string};
use orbivertex::job::{run, write_artifacts, ErrorReport, JobConfig, Subcommand, TriangulationSelector};
use orbivertex::scalar::parse_q;
use orbivertex::{Error, Result};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Group,
    Lattice,
    Triangulate,
    Charges,
    MirrorMap,
    Superpotential,
    OrbifoldPotential,
    Compare,
    Conjecture,
    All,
}

impl From<Command> for Subcommand {
    fn from(c: Command) -> Self {
        match c {
            Command::Group => Subcommand::Group,
            Command::Lattice => Subcommand::Lattice,
            Command::Triangulate => Subcommand::Triangulate,
            Command::Charges => Subcommand::Charges,
            Command::MirrorMap => Subcommand::MirrorMap,
            Command::Superpotential => Subcommand::Superpotential,
            Command::OrbifoldPotential => Subcommand::OrbifoldPotential,
            Command::Compare => Subcommand::Compare,
            Command::Conjecture => Subcommand::Conjecture,
            Command::All => Subcommand::All,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Signs {
    Auto,
    None,
}

/// Crepant resolutions of C³/G, their open–closed mirror data, and the comparison of
/// the resolution superpotential with the orbifold disc potential.
#[derive(Debug, Parser)]
#[command(name = "orbivertex", version)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,
    /// Group spec: a JSON file or shorthand such as "Z3(1,1,1)" or "Z2(1,0,1)xZ2(1,1,0)".
    #[arg(long)]
    group: String,
    /// Triangulation index, or "all".
    #[arg(long, default_value = "all")]
    triangulation: String,
    /// Only regular triangulations (overrides --triangulation all).
    #[arg(long)]
    regular_only: bool,
    /// Brane segment on v1v2 as two point names or indices, e.g. "2g1,2".
    #[arg(long)]
    segment: Option<String>,
    /// Integer framing f.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    framing: i64,
    /// Total degree bound D.
    #[arg(long, default_value_t = 6)]
    degree: i64,
    /// Output directory; artifacts go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sign-twist search in comparisons.
    #[arg(long, value_enum, default_value = "auto")]
    signs: Signs,
    /// Override the orbifold framing parameter a (as p/q).
    #[arg(long, allow_hyphen_values = true)]
    framing_a: Option<String>,
    /// Also export DOT graphs.
    #[arg(long)]
    dot: bool,
}

fn config(cli: &Cli) -> Result<JobConfig> {
    let mut cfg = JobConfig::new(load_group_spec(&cli.group)?);
    cfg.triangulation = if cli.regular_only {
        TriangulationSelector::RegularOnly
    } else if cli.triangulation == "all" {
        TriangulationSelector::All
    } else {
        TriangulationSelector::Index(
            cli.triangulation.parse().map_err(|_| Error::Parse(format!("bad triangulation {:?}", cli.triangulation)))?,
        )
    };
    if let Some(s) = &cli.segment {
        let (a, b) = s.split_once(',').ok_or_else(|| Error::Parse(format!("segment {s:?} needs the form a,b")))?;
        cfg.segment = Some((a.trim().to_string(), b.trim().to_string()));
    }
    cfg.framing = cli.framing;
    cfg.degree = cli.degree;
    cfg.dot = cli.dot;
    cfg.signs = match cli.signs {
        Signs::Auto => SignMode::Auto,
        Signs::None => SignMode::None,
    };
    cfg.framing_a = cli.framing_a.as_deref().map(parse_q).transpose()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(&cli).and_then(|cfg| run(cli.command.into(), &cfg)).and_then(|out| {
        match &cli.out {
            Some(dir) => write_artifacts(dir, &out.artifacts)?,
            None => {
                for (name, text) in &out.artifacts {
                    println!("== {name}");
                    print!("{text}");
                }
            }
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let body = to_json_string(&ErrorReport::from(&e)).unwrap_or_else(|_| format!("{e}\n"));
            eprint!("{body}");
            ExitCode::from(1)
        }
    }
}
