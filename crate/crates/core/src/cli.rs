//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{ParamPoly, Rational};
use crate::bgw::{CorrelatorKind, CorrelatorTable, Multiset};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::wconstraints::{self, ConstantsDictionary, Method};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bgw", version, about = "Exact correlators and W-constraints of the generalized BGW tau-function")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Correlator table through a weight.
    Correlators(CorrelatorsArgs),
    /// Check the W-constraints and the string equation.
    Verify(VerifyArgs),
    /// Dictionaries between the parameter families.
    Constants(ConstantsArgs),
    /// Large-r limit of a connected correlator.
    Stabilized(StabilizedArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Alphabet {
    D,
    C,
    Sigma,
    Rho,
}

impl From<Alphabet> for Params {
    fn from(a: Alphabet) -> Params {
        match a {
            Alphabet::D => Params::D,
            Alphabet::C => Params::C,
            Alphabet::Sigma => Params::Sigma,
            Alphabet::Rho => Params::Rho,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Pde,
    Recursion,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub weight: u32,
    #[arg(long, value_enum, default_value = "c")]
    pub alphabet: Alphabet,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Fix a parameter, e.g. `--set c1=1/2`; repeatable.
    #[arg(long = "set", value_name = "PARAM=RATIONAL")]
    pub set: Vec<String>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CorrelatorsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Derivatives of log τ (the default).
    #[arg(long, conflicts_with = "disconnected")]
    pub connected: bool,
    /// Derivatives of τ.
    #[arg(long)]
    pub disconnected: bool,
    #[arg(long, value_enum, default_value = "pde")]
    pub method: MethodArg,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub weight: u32,
    /// Levels `q = alpha + 1, ..., alpha + qextra` checked beyond `q = alpha`.
    #[arg(long, default_value_t = 2)]
    pub qextra: u32,
    /// Perturb one coefficient of τ before checking.
    #[arg(long, hide = true)]
    pub corrupt_tau: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StabilizedArgs {
    /// Comma-separated indices, e.g. `2,2`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub indices: Vec<u32>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Text to emit and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
    pub out: Option<PathBuf>,
}

/// JSON form of a correlator table.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TableJson {
    pub r: u32,
    pub weight: u32,
    pub alphabet: String,
    pub kind: String,
    pub entries: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EntryJson {
    pub indices: Vec<u32>,
    pub value: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ConstantsJson {
    pub r: u32,
    pub maps: Vec<MapJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MapJson {
    pub name: String,
    pub entries: Vec<ParamJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ParamJson {
    pub param: String,
    pub value: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_)
        | Error::IndexDivisible { .. }
        | Error::WeightExceeded { .. }
        | Error::AlphabetMismatch { .. } => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::InvalidConfig(format!("not a rational number: {s:?}")))
}

fn parse_assignments(set: &[String], params: Params, r: u32) -> Result<Vec<(usize, Rational)>> {
    let alphabet = params.alphabet(r);
    set.iter()
        .map(|s| {
            let (name, value) =
                s.split_once('=').ok_or_else(|| Error::InvalidConfig(format!("expected PARAM=RATIONAL, got {s:?}")))?;
            let pos = alphabet
                .position(name.trim())
                .ok_or_else(|| Error::InvalidConfig(format!("{name:?} is not one of {:?}", alphabet.names())))?;
            Ok((pos, parse_rational(value)?))
        })
        .collect()
}

fn check_common(r: u32, weight: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidConfig(format!("--r must be at least 2, got {r}")));
    }
    if weight < 1 {
        return Err(Error::InvalidConfig(format!("--weight must be at least 1, got {weight}")));
    }
    Ok(())
}

fn latex_indices(m: &Multiset) -> String {
    m.counts()
        .into_iter()
        .map(|(i, n)| if n == 1 { format!("\\tau_{{{i}}}") } else { format!("\\tau_{{{i}}}^{{{n}}}") })
        .collect()
}

fn latex_param(name: &str) -> String {
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (head, idx) = name.split_at(split);
    let head = if head == "sigma" || head == "rho" { format!("\\{head}") } else { head.to_string() };
    format!("{head}_{{{idx}}}")
}

pub fn table_json(table: &CorrelatorTable) -> TableJson {
    TableJson {
        r: table.r(),
        weight: table.weight(),
        alphabet: table.params().prefix().to_string(),
        kind: table.kind().as_str().to_string(),
        entries: table
            .entries()
            .map(|(m, p)| EntryJson { indices: m.indices().to_vec(), value: p.to_string() })
            .collect(),
    }
}

pub fn render_table(table: &CorrelatorTable, format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Json => {
            s = serde_json::to_string_pretty(&table_json(table)).expect("serializable");
            s.push('\n');
        }
        Format::Csv => {
            s.push_str("indices;value\n");
            for (m, p) in table.entries() {
                let idx: Vec<String> = m.indices().iter().map(u32::to_string).collect();
                writeln!(s, "{};{p}", idx.join(",")).unwrap();
            }
        }
        Format::Latex => {
            let bullet = if table.kind() == CorrelatorKind::Disconnected { "^\\bullet" } else { "" };
            s.push_str("\\begin{align*}\n");
            for (m, p) in table.entries() {
                writeln!(s, "\\langle {} \\rangle{bullet} &= {} \\\\", latex_indices(m), p.to_latex()).unwrap();
            }
            s.push_str("\\end{align*}\n");
        }
        Format::Text => {
            for (m, p) in table.entries() {
                writeln!(s, "<{m}> = {p}").unwrap();
            }
        }
    }
    s
}

fn constants_maps(dict: &ConstantsDictionary) -> Result<Vec<(String, Params, Vec<ParamPoly>)>> {
    Ok(vec![
        ("sigma(c)".into(), Params::Sigma, dict.sigma_of_c().to_vec()),
        ("rho(sigma)".into(), Params::Rho, dict.rho_of_sigma()?),
        ("rho(c)".into(), Params::Rho, dict.rho_of_c().to_vec()),
        ("c(d)".into(), Params::C, dict.c_of_d().to_vec()),
        ("d(c)".into(), Params::D, dict.d_of_c().to_vec()),
    ])
}

pub fn render_constants(dict: &ConstantsDictionary, format: Format) -> Result<String> {
    let maps = constants_maps(dict)?;
    let r = dict.r();
    let mut s = String::new();
    match format {
        Format::Json => {
            let json = ConstantsJson {
                r,
                maps: maps
                    .iter()
                    .map(|(name, p, v)| MapJson {
                        name: name.clone(),
                        entries: v
                            .iter()
                            .enumerate()
                            .map(|(i, poly)| ParamJson {
                                param: format!("{}{}", p.prefix(), i + 1),
                                value: poly.to_string(),
                            })
                            .collect(),
                    })
                    .collect(),
            };
            s = serde_json::to_string_pretty(&json).expect("serializable");
            s.push('\n');
        }
        Format::Csv => {
            s.push_str("map;param;value\n");
            for (name, p, v) in &maps {
                for (i, poly) in v.iter().enumerate() {
                    writeln!(s, "{name};{}{};{poly}", p.prefix(), i + 1).unwrap();
                }
            }
        }
        Format::Latex => {
            s.push_str("\\begin{align*}\n");
            for (_, p, v) in &maps {
                for (i, poly) in v.iter().enumerate() {
                    writeln!(s, "{} &= {} \\\\", latex_param(&format!("{}{}", p.prefix(), i + 1)), poly.to_latex())
                        .unwrap();
                }
            }
            s.push_str("\\end{align*}\n");
        }
        Format::Text => {
            for (k, (name, p, v)) in maps.iter().enumerate() {
                if k > 0 {
                    s.push('\n');
                }
                writeln!(s, "# {name}").unwrap();
                for (i, poly) in v.iter().enumerate() {
                    writeln!(s, "{}{} = {poly}", p.prefix(), i + 1).unwrap();
                }
            }
        }
    }
    Ok(s)
}

fn cmd_correlators(args: &CorrelatorsArgs) -> Result<Outcome> {
    let c = &args.common;
    check_common(c.r, c.weight)?;
    let params: Params = c.alphabet.into();
    let assignments = parse_assignments(&c.set, params, c.r)?;
    let kind = if args.disconnected { CorrelatorKind::Disconnected } else { CorrelatorKind::Connected };
    let method = match args.method {
        MethodArg::Pde => Method::Pde,
        MethodArg::Recursion => Method::Recursion,
    };
    let dict = ConstantsDictionary::new(c.r)?;
    let mut table = wconstraints::correlators(c.r, c.weight, kind, params, method, &dict)?;
    if !assignments.is_empty() {
        table = table.assign(&assignments);
    }
    Ok(Outcome { output: render_table(&table, c.format), code: EXIT_OK, out: c.out.clone() })
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    check_common(args.r, args.weight)?;
    let dict = ConstantsDictionary::new(args.r)?;
    let mut tau = wconstraints::tau_for_verification(args.r, args.weight)?;
    if args.corrupt_tau {
        tau = wconstraints::corrupt(&tau);
    }
    let report = wconstraints::verify_series(&tau, args.weight, args.qextra, &dict.rho_of_d()?)?;
    Ok(Outcome {
        output: report.to_string(),
        code: if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED },
        out: args.out.clone(),
    })
}

fn cmd_constants(args: &ConstantsArgs) -> Result<Outcome> {
    check_common(args.r, 1)?;
    let dict = ConstantsDictionary::new(args.r)?;
    Ok(Outcome { output: render_constants(&dict, args.format)?, code: EXIT_OK, out: args.out.clone() })
}

fn cmd_stabilized(args: &StabilizedArgs) -> Result<Outcome> {
    let value = wconstraints::stabilized_correlator(&args.indices)?;
    let m = Multiset::new(args.indices.clone());
    let output = match args.format {
        Format::Text => format!("{value}\n"),
        Format::Csv => {
            let idx: Vec<String> = m.indices().iter().map(u32::to_string).collect();
            format!("indices;value\n{};{value}\n", idx.join(","))
        }
        Format::Latex => format!("\\langle {} \\rangle_\\infty = {}\n", latex_indices(&m), value.to_latex()),
        Format::Json => {
            let entry = EntryJson { indices: m.indices().to_vec(), value: value.to_string() };
            let mut s = serde_json::to_string_pretty(&entry).expect("serializable");
            s.push('\n');
            s
        }
    };
    Ok(Outcome { output, code: EXIT_OK, out: args.out.clone() })
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Correlators(a) => cmd_correlators(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Constants(a) => cmd_constants(a),
        Command::Stabilized(a) => cmd_stabilized(a),
    }
}

/// Parses arguments, runs the command, writes its output, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &outcome.out {
                Some(path) => std::fs::write(path, &outcome.output).map_err(|e| e.to_string()),
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.code,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
