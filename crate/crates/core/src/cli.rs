//! The `latori` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{catalog_get, list};
use crate::classify::{Mode, RationalityLevel, SearchOptions};
use crate::error::{Error, Result};
use crate::format::LatticeFile;
use crate::lattice::GLattice;
use crate::report::{classify_document, cohomology_document, resolve_document, to_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNDETERMINED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "latori", version, about = "Cohomology and rationality of algebraic tori via their character lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Lattice file (JSON)
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,

    /// Built-in catalog entry instead of a file
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "input")]
    catalog: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Strict)]
    mode: ModeArg,

    #[arg(long, global = true, value_name = "N")]
    rank_bound: Option<usize>,

    #[arg(long, global = true, value_name = "N", default_value_t = 3)]
    coeff_bound: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Exit with status 1 when the rationality level is undetermined
    #[arg(long, global = true)]
    strict_exit: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// H^1 and H^-1 for every conjugacy class of subgroups
    Cohomology,
    /// Class verdicts and the rationality report
    Classify,
    /// Flabby resolution and its verification
    Resolve,
    /// Built-in tori
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Parse and validate a lattice file
    Validate,
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Show { name: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Strict,
    PaperLiteral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn load(cli: &Cli) -> Result<(String, GLattice)> {
    match (&cli.input, &cli.catalog) {
        (Some(path), _) => {
            let bytes = std::fs::read(path).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
            let file = LatticeFile::parse(&bytes)?;
            let m = file.to_lattice()?;
            Ok((file.name, m))
        }
        (None, Some(name)) => {
            let d = catalog_get(name)?;
            Ok((d.name.to_string(), d.character_lattice))
        }
        (None, None) => Err(Error::Parse("no lattice given; use --input FILE or --catalog NAME".into())),
    }
}

#[derive(Serialize)]
struct CatalogEntry<'a> {
    name: &'a str,
    narrative: &'a str,
    expected_level: RationalityLevel,
    lattice: LatticeFile,
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let options = SearchOptions {
        rank_bound: cli.rank_bound,
        coeff_bound: cli.coeff_bound,
        ..SearchOptions::default()
    };
    let mode = match cli.mode {
        ModeArg::Strict => Mode::Strict,
        ModeArg::PaperLiteral => Mode::PaperLiteral,
    };
    let json = cli.format == Format::Json;
    let text = match &cli.command {
        Command::Cohomology => {
            let (name, m) = load(cli)?;
            let doc = cohomology_document(&name, &m)?;
            if json { to_json(&doc) } else { doc.to_text() }
        }
        Command::Classify => {
            let (name, m) = load(cli)?;
            let doc = classify_document(&name, &m, mode, &options)?;
            let s = if json { to_json(&doc) } else { doc.to_text() };
            write_out(out, &s);
            if cli.strict_exit && doc.report.level == RationalityLevel::Undetermined {
                return Ok(EXIT_UNDETERMINED);
            }
            return Ok(EXIT_OK);
        }
        Command::Resolve => {
            let (name, m) = load(cli)?;
            let doc = resolve_document(&name, &m)?;
            if json { to_json(&doc) } else { doc.to_text() }
        }
        Command::Catalog { action: CatalogAction::List } => {
            let entries = list();
            if json {
                let names: Vec<&str> = entries.iter().map(|d| d.name).collect();
                to_json(&names)
            } else {
                entries.iter().map(|d| format!("{}\t{}\n", d.name, d.narrative)).collect()
            }
        }
        Command::Catalog { action: CatalogAction::Show { name } } => {
            let d = catalog_get(name)?;
            let entry = CatalogEntry {
                name: d.name,
                narrative: d.narrative,
                expected_level: d.expected_report.level,
                lattice: LatticeFile::from_lattice(d.name, &d.character_lattice),
            };
            if json {
                to_json(&entry)
            } else {
                format!(
                    "{}\n{}\nexpected: {}\n{}\n",
                    entry.name,
                    entry.narrative,
                    entry.expected_level,
                    entry.lattice.to_json()
                )
            }
        }
        Command::Validate => {
            let (name, m) = load(cli)?;
            if json {
                #[derive(Serialize)]
                struct Valid<'a> {
                    name: &'a str,
                    valid: bool,
                    rank: usize,
                    group_order: usize,
                }
                to_json(&Valid { name: &name, valid: true, rank: m.rank(), group_order: m.group().order() })
            } else {
                format!("ok: {} (rank {}, group order {})\n", name, m.rank(), m.group().order())
            }
        }
    };
    write_out(out, &text);
    Ok(EXIT_OK)
}

fn write_out(out: &mut dyn Write, s: &str) {
    let _ = out.write_all(s.as_bytes());
    let _ = out.flush();
}

/// Runs the tool on `argv` (including the program name), writing the report
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                write_out(out, &rendered);
            } else {
                write_out(err, &rendered);
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            write_out(err, &format!("error: {}\n", e));
            EXIT_INPUT
        }
    }
}

pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}
