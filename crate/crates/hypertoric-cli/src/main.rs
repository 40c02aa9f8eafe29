//! `hypertoric`: exact data of hypertoric Deligne-Mumford stacks from an
//! arrangement document.

mod commands;
mod document;
mod envelope;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypertoric::quantum::SignConvention;

use crate::document::ArrangementDocument;
use crate::envelope::Envelope;

#[derive(Debug, Parser)]
#[command(
    name = "hypertoric",
    version,
    about = "Exact combinatorics, Chen-Ruan cohomology and quantum divisor products of hypertoric stacks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Arrangement document (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Use a catalog arrangement instead of --input.
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "input")]
    pub example: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Truncation order of Novikov series.
    #[arg(long, global = true, value_name = "N", default_value_t = 4)]
    pub max_q_order: u32,
    /// Fixed-point table used by `localize` and `steinberg`.
    #[arg(long, global = true, value_enum, default_value_t = TableChoice::Standard)]
    pub convention: TableChoice,
    #[arg(long, global = true, value_enum, default_value_t = SignChoice::ExampleCalibrated)]
    pub sign_convention: SignChoice,
    /// Also draw the arrangement (rank 2 only).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Leave the wall time out of the envelope, making output byte-identical across runs.
    #[arg(long, global = true)]
    pub omit_timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gale dual, kernel basis and the lifting psi.
    Gale,
    /// Circuits with splittings, weights and curve classes.
    Circuits,
    /// Box elements (twisted sectors) with ages and inverses.
    Box,
    /// Bounded chambers and their normal fans.
    Core,
    /// Lawrence fan: rays, maximal cones and the irrelevant ideal.
    Fan,
    /// Presentations of the equivariant and Chen-Ruan cohomology rings.
    Cohomology,
    /// Fixed-point data of T*P^n_w: sectors, restrictions, orbifold degrees.
    Localize,
    /// Steinberg operators on the generators.
    Steinberg,
    /// Quantum multiplication by a divisor u_i.
    QuantumDivisor {
        /// 1-based hyperplane index i.
        #[arg(long, default_value_t = 1)]
        divisor: usize,
        /// Compare every sign convention against the default.
        #[arg(long)]
        differential: bool,
    },
    /// Quantum Stanley-Reisner presentation and circuit relations.
    Qsr,
    /// The shipped example catalog.
    Examples {
        #[arg(long)]
        list: bool,
        /// Print one catalog document.
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gale => "gale",
            Command::Circuits => "circuits",
            Command::Box => "box",
            Command::Core => "core",
            Command::Fan => "fan",
            Command::Cohomology => "cohomology",
            Command::Localize => "localize",
            Command::Steinberg => "steinberg",
            Command::QuantumDivisor { .. } => "quantum-divisor",
            Command::Qsr => "qsr",
            Command::Examples { .. } => "examples",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableChoice {
    Standard,
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignChoice {
    ExampleCalibrated,
    TheoremLiteral,
    ClosedFormLiteral,
}

impl SignChoice {
    pub fn convention(self) -> SignConvention {
        match self {
            SignChoice::ExampleCalibrated => SignConvention::ExampleCalibrated,
            SignChoice::TheoremLiteral => SignConvention::TheoremLiteral,
            SignChoice::ClosedFormLiteral => SignConvention::ClosedFormLiteral,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad input; exit code 2.
    Validation { path: String, message: String },
    /// A computation failed on valid input; exit code 1.
    Internal { path: String, message: String },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Internal { .. } => 1,
        }
    }

    fn render(&self, format: Format) -> String {
        let (kind, path, message) = match self {
            CliError::Validation { path, message } => ("validation", path, message),
            CliError::Internal { path, message } => ("internal", path, message),
        };
        match format {
            Format::Json => serde_json::json!({
                "error": { "kind": kind, "path": path, "message": message }
            })
            .to_string(),
            Format::Text => format!("error ({kind}) at {path}: {message}"),
        }
    }
}

fn load(cli: &Cli) -> Result<(ArrangementDocument, String), CliError> {
    let text = match (&cli.input, &cli.example) {
        (Some(path), _) => std::fs::read_to_string(path).map_err(|e| CliError::Validation {
            path: "--input".into(),
            message: format!("cannot read {}: {e}", path.display()),
        })?,
        (None, Some(name)) => document::catalog_entry(name)
            .ok_or_else(|| CliError::Validation {
                path: "--example".into(),
                message: format!("unknown example {name:?}"),
            })?
            .to_string(),
        (None, None) => {
            return Err(CliError::Validation {
                path: "--input".into(),
                message: "an arrangement is required: pass --input PATH or --example NAME".into(),
            })
        }
    };
    let doc = ArrangementDocument::parse(&text)?;
    let canonical = doc.canonical();
    Ok((doc, canonical))
}

fn execute(cli: &Cli) -> Result<Envelope, CliError> {
    let started = std::time::Instant::now();
    if let Command::Examples { list, show } = &cli.command {
        let payload = commands::examples(*list, show.as_deref())?;
        return Ok(Envelope::new(cli, None, payload, started));
    }
    let (doc, canonical) = load(cli)?;
    let arr = doc.build()?;
    if let Some(path) = &cli.svg {
        svg::write_svg(&arr, path)?;
    }
    let payload = commands::run(cli, &arr)?;
    Ok(Envelope::new(cli, Some(&canonical), payload, started))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let err = CliError::Validation {
                path: "argv".into(),
                message: e.kind().to_string(),
            };
            eprintln!("{}", err.render(Format::Json));
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    match execute(&cli) {
        Ok(envelope) => {
            println!("{}", envelope.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.render(cli.format));
            ExitCode::from(err.exit_code())
        }
    }
}
