//! The `rd` command line: named checks over one or more rings, emitted as
//! JSON, CSV or plain text.
//!
//! Exit status is 0 when every report carries its expected verdict, 1 when
//! some verdict fails, 2 for bad input, 3 when an enumeration guard is hit
//! and 4 on an internal inconsistency.

mod checks;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::chainring::{ChainRing, CharChoice};
use crate::error::{Error, Result};
use crate::macwilliams::CodeFile;
use crate::rankspace::{Side, DEFAULT_SPACE_GUARD};

pub use checks::run_check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum CheckName {
    /// Torsion counts, isomorphism types, preimages and cyclic counts over the lattice.
    #[value(name = "lemma2.4")]
    Lemma2_4,
    /// Hamming support and weight sums.
    #[value(name = "ex2.1")]
    Ex2_1,
    /// Field Möbius values and field Krawtchouk entries.
    #[value(name = "ex3.2")]
    Ex3_2,
    /// Support-class closed form against the Krawtchouk matrix.
    #[value(name = "prop3.1")]
    Prop3_1,
    /// The support partitions are mutually dual and reflexive.
    #[value(name = "thm3.1")]
    Thm3_1,
    /// The isomorphism-type partitions are mutually dual and reflexive.
    #[value(name = "thm3.2")]
    Thm3_2,
    /// Three-case rank-1 sums.
    #[value(name = "lemma4.1")]
    Lemma4_1,
    /// Total rank-1 sum from the torsion profile.
    #[value(name = "lemma4.2")]
    Lemma4_2,
    /// The dual of the rank-weight partition and its non-reflexivity.
    #[value(name = "thm4.1")]
    Thm4_1,
    /// Support isomorphism against rank sums, pair by pair.
    #[value(name = "thm4.2")]
    Thm4_2,
    /// Smith-class partition as the dual of the matrix rank partition.
    #[value(name = "thm5.1")]
    Thm5_1,
    /// Whether the matrix rank relations form an association scheme.
    #[value(name = "thm5.2")]
    Thm5_2,
    /// MacWilliams identity for a code file or for every cyclic code.
    #[value(name = "macwilliams")]
    MacWilliams,
    /// Krawtchouk matrix of a partition pair.
    #[value(name = "krawtchouk")]
    Krawtchouk,
    /// Submodule lattice of R^m.
    #[value(name = "lattice")]
    Lattice,
    /// Dual partition of Λ_i or Ψ_i.
    #[value(name = "duals")]
    Duals,
}

impl CheckName {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lemma2_4 => "lemma2.4",
            Self::Ex2_1 => "ex2.1",
            Self::Ex3_2 => "ex3.2",
            Self::Prop3_1 => "prop3.1",
            Self::Thm3_1 => "thm3.1",
            Self::Thm3_2 => "thm3.2",
            Self::Lemma4_1 => "lemma4.1",
            Self::Lemma4_2 => "lemma4.2",
            Self::Thm4_1 => "thm4.1",
            Self::Thm4_2 => "thm4.2",
            Self::Thm5_1 => "thm5.1",
            Self::Thm5_2 => "thm5.2",
            Self::MacWilliams => "macwilliams",
            Self::Krawtchouk => "krawtchouk",
            Self::Lattice => "lattice",
            Self::Duals => "duals",
        }
    }

    fn default_rings(self) -> &'static [&'static str] {
        match self {
            Self::Lemma2_4 | Self::Thm4_1 | Self::Thm4_2 => &["Z4", "F2u2"],
            Self::Ex3_2 => &["F2"],
            Self::Prop3_1 => &["Z4", "F2"],
            Self::Thm3_1 | Self::Thm3_2 => &["Z4", "F2u2", "F2", "F3"],
            Self::Thm5_2 => &["F2", "F3", "F4", "Z4", "Z9", "F2u2"],
            _ => &["Z4"],
        }
    }

    fn default_shape(self) -> (usize, usize) {
        match self {
            Self::Ex2_1 => (1, 3),
            _ => (2, 2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CharArg {
    Primary,
    Alt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Debug, Parser)]
#[command(
    name = "rd",
    version,
    about = "Exact dual partitions, Krawtchouk matrices and MacWilliams checks over finite chain rings"
)]
pub struct Args {
    pub check: CheckName,
    /// Ring spec such as Z4, Z9, F2, F4, F2u2 or F:p=2,r=2,s=2,g=1/1/1.
    /// Repeat to run several rings; each check has its own default list.
    #[arg(long = "ring")]
    pub rings: Vec<String>,
    /// Rows of the matrix space
    #[arg(long)]
    pub m: Option<usize>,
    /// Columns of the matrix space
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Add brute-force cross-checks (direct character sums, exhaustive scans).
    #[arg(long)]
    pub verify: bool,
    /// Include class members in partition dumps.
    #[arg(long)]
    pub members: bool,
    #[arg(long = "char", value_enum, default_value_t = CharArg::Primary)]
    pub character: CharArg,
    /// Largest space or ambient module that may be enumerated.
    #[arg(long, default_value_t = DEFAULT_SPACE_GUARD)]
    pub guard: u64,
    /// Seed for sampled pair scans.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Partition pair: 1 support, 2 isomorphism type, 3 rank weight.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub pair: u8,
    /// Left for ρ and l(·), right for ε and r(·).
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    /// JSON code file {ring, m, n, generators}; its ring and shape override --ring, --m, --n.
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Include the Möbius table in lattice dumps.
    #[arg(long)]
    pub moebius: bool,
}

/// Everything one check needs for one ring.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub check: CheckName,
    pub ring: Arc<ChainRing>,
    pub m: usize,
    pub n: usize,
    pub choice: CharChoice,
    pub verify: bool,
    pub members: bool,
    pub guard: u64,
    pub seed: u64,
    pub pair: u8,
    pub side: Side,
    pub code: Option<CodeFile>,
    pub moebius: bool,
}

/// Outcome of one check on one ring.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub check: &'static str,
    pub ring: String,
    pub m: usize,
    pub n: usize,
    /// The expected statement holds.
    pub verdict: bool,
    pub summary: String,
    pub evidence: Value,
    #[serde(skip)]
    pub csv: Option<String>,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERDICT: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_GUARD: u8 = 3;
pub const EXIT_INCONSISTENT: u8 = 4;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::GuardExceeded { .. } => EXIT_GUARD,
        Error::Inconsistency(_) | Error::RefinementViolated(_) => EXIT_INCONSISTENT,
        _ => EXIT_INPUT,
    }
}

/// Resolves rings, shape and the code file into one config per ring.
pub fn configs(args: &Args) -> Result<Vec<RunConfig>> {
    let code = match &args.code {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
            let file: CodeFile = serde_json::from_str(&text)
                .map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
            Some(file)
        }
        None => None,
    };
    let (dm, dn) = args.check.default_shape();
    let (specs, m, n): (Vec<String>, usize, usize) = match &code {
        Some(file) => (vec![file.ring.clone()], file.m, file.n),
        None if args.rings.is_empty() => (
            args.check
                .default_rings()
                .iter()
                .map(|s| s.to_string())
                .collect(),
            args.m.unwrap_or(dm),
            args.n.unwrap_or(dn),
        ),
        None => (
            args.rings.clone(),
            args.m.unwrap_or(dm),
            args.n.unwrap_or(dn),
        ),
    };
    if m == 0 || n == 0 {
        return Err(Error::Dimension("m and n must be positive".into()));
    }
    specs
        .iter()
        .map(|spec| {
            Ok(RunConfig {
                check: args.check,
                ring: ChainRing::parse(spec)?,
                m,
                n,
                choice: match args.character {
                    CharArg::Primary => CharChoice::Primary,
                    CharArg::Alt => CharChoice::Alternate,
                },
                verify: args.verify,
                members: args.members,
                guard: args.guard,
                seed: args.seed,
                pair: args.pair,
                side: match args.side {
                    SideArg::Left => Side::Left,
                    SideArg::Right => Side::Right,
                },
                code: code.clone(),
                moebius: args.moebius,
            })
        })
        .collect()
}

pub fn render(reports: &[Report], format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(reports)
            }
            .expect("reports serialize");
            out.push('\n');
            out
        }
        Format::Csv => {
            if reports.iter().all(|r| r.csv.is_some()) {
                // Tables with a common header are merged into one.
                let tables: Vec<&str> = reports.iter().filter_map(|r| r.csv.as_deref()).collect();
                let header = tables[0].lines().next().unwrap_or_default();
                let mut out = String::new();
                for (i, t) in tables.iter().enumerate() {
                    match t.split_once('\n') {
                        Some((first, rest)) if i > 0 && first == header => out.push_str(rest),
                        _ => out.push_str(t),
                    }
                }
                return out;
            }
            let mut out = String::from("check,ring,m,n,verdict,summary\n");
            for r in reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},\"{}\"",
                    r.check,
                    r.ring,
                    r.m,
                    r.n,
                    r.verdict,
                    r.summary.replace('"', "\"\"")
                );
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for r in reports {
                let _ = writeln!(
                    out,
                    "{} {} {} m={} n={}: {}",
                    if r.verdict { "PASS" } else { "FAIL" },
                    r.check,
                    r.ring,
                    r.m,
                    r.n,
                    r.summary
                );
                if let Some(csv) = &r.csv {
                    for line in csv.lines() {
                        let _ = writeln!(out, "    {line}");
                    }
                }
            }
            out
        }
    }
}

/// Runs every configured check; stops at the first error.
pub fn execute(args: &Args) -> Result<Vec<Report>> {
    configs(args)?.iter().map(run_check).collect()
}

/// Parses `argv`, runs the check and writes the report. Returns the exit code.
pub fn main_with<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let reports = match execute(&args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let text = render(&reports, args.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None => print!("{text}"),
    }
    if reports.iter().all(|r| r.verdict) {
        EXIT_OK
    } else {
        EXIT_VERDICT
    }
}
