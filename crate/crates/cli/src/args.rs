//! Command table and argument parsing.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use clap::{Arg, ArgAction};

use crate::error::CliError;
use crate::quantity::Kind;

pub const PROGRAM: &str = "tunnel-chrono";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Times,
    Hartman,
    FitIv,
    ExtractDwell,
    FitGap,
    BuCheck,
    SynthIv,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Times,
        Command::Hartman,
        Command::FitIv,
        Command::ExtractDwell,
        Command::FitGap,
        Command::BuCheck,
        Command::SynthIv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Times => "times",
            Command::Hartman => "hartman",
            Command::FitIv => "fit-iv",
            Command::ExtractDwell => "extract-dwell",
            Command::FitGap => "fit-gap",
            Command::BuCheck => "bu-check",
            Command::SynthIv => "synth-iv",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::Times => "Sweep all tunneling times over an energy grid",
            Command::Hartman => "Phase and dwell time of a rectangular barrier versus width",
            Command::FitIv => "Fit barrier width and height to I-V data (Simmons model)",
            Command::ExtractDwell => "Dwell time of a junction barrier at a fraction of its height",
            Command::FitGap => "Fit an Einstein-oscillator model to gap-versus-temperature data",
            Command::BuCheck => "Compare phase-shift and box-counted density of states",
            Command::SynthIv => "Generate synthetic Simmons I-V data",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    pub fn flags(self) -> &'static [Flag] {
        match self {
            Command::Times => TIMES,
            Command::Hartman => HARTMAN,
            Command::FitIv => FIT_IV,
            Command::ExtractDwell => EXTRACT_DWELL,
            Command::FitGap => FIT_GAP,
            Command::BuCheck => BU_CHECK,
            Command::SynthIv => SYNTH_IV,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Flag {
    pub name: &'static str,
    pub kind: Kind,
    pub required: bool,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn req(name: &'static str, kind: Kind, help: &'static str) -> Flag {
    Flag { name, kind, required: true, default: None, help }
}

const fn opt(name: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> Flag {
    Flag { name, kind, required: false, default, help }
}

const OUT: Flag = req("out", Kind::Path, "output file");

static TIMES: &[Flag] = &[
    opt("barrier", Kind::Barrier, None, "piecewise barrier, e.g. 1.8ev:20.8A"),
    opt("profile", Kind::Path, None, "profile file of `width height` lines (instead of --barrier)"),
    req("emin", Kind::Energy, "lowest energy"),
    req("emax", Kind::Energy, "highest energy"),
    req("n", Kind::Count, "number of energies"),
    OUT,
];

static HARTMAN: &[Flag] = &[
    req("height", Kind::Energy, "barrier height"),
    req("energy", Kind::Energy, "incident energy"),
    req("wmin", Kind::Length, "smallest width"),
    req("wmax", Kind::Length, "largest width"),
    opt("n", Kind::Count, Some("20"), "number of widths"),
    OUT,
];

static FIT_IV: &[Flag] = &[
    req("in", Kind::Path, "I-V CSV"),
    OUT,
    opt("params-out", Kind::Path, None, "per-temperature parameter CSV (default: <out>.params.csv)"),
    opt("init-width", Kind::Length, Some("20A"), "starting barrier width"),
    opt("init-phi0", Kind::Energy, Some("2ev"), "starting barrier height"),
];

static EXTRACT_DWELL: &[Flag] = &[
    req("width", Kind::Length, "barrier width"),
    req("phi0", Kind::Energy, "barrier height"),
    opt("fraction", Kind::Number, Some("0.5"), "incident energy as a fraction of phi0"),
    OUT,
];

static FIT_GAP: &[Flag] = &[
    req("in", Kind::Path, "gap CSV"),
    OUT,
    opt("init-gap0", Kind::Energy, None, "starting zero-temperature gap (default: lowest-T gap)"),
    opt("init-s", Kind::Number, Some("1"), "starting coupling S"),
    opt("init-omega", Kind::Frequency, Some("2e13/s"), "starting phonon frequency"),
];

static BU_CHECK: &[Flag] = &[
    req("strength", Kind::Energy, "well strength (negative attracts)"),
    req("radius", Kind::Length, "well radius"),
    req("energy", Kind::Energy, "energy"),
    opt("box", Kind::Length, Some("500A"), "hard-wall box radius"),
    opt("lmax", Kind::Count, Some("4"), "highest partial wave"),
    opt("window", Kind::Energy, None, "counting window (default: about 64 free states)"),
    OUT,
];

static SYNTH_IV: &[Flag] = &[
    req("width", Kind::Length, "barrier width"),
    req("phi0", Kind::Energy, "barrier height"),
    opt("temperature", Kind::Temperature, Some("300K"), "temperature label"),
    opt("vmin", Kind::Voltage, Some("0.02V"), "lowest bias"),
    opt("vmax", Kind::Voltage, Some("1V"), "highest bias"),
    opt("n", Kind::Count, Some("50"), "number of bias points"),
    opt("noise", Kind::Number, Some("0"), "relative Gaussian noise"),
    opt("seed", Kind::Count, Some("0"), "random seed"),
    OUT,
];

/// A validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub output_path: PathBuf,
    /// Remaining flags as given (defaults filled in), keyed by flag name.
    pub parameters: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.parameters.get(key).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Run(RunConfig),
    /// Help text requested explicitly; print and exit 0.
    Help(String),
}

fn clap_command(command: Command) -> clap::Command {
    let mut cmd = clap::Command::new(command.name())
        .bin_name(format!("{PROGRAM} {}", command.name()))
        .about(command.about())
        .disable_version_flag(true);
    for flag in command.flags() {
        let mut help = format!("{} [{}]", flag.help, flag.kind.unit_label());
        if let Some(d) = flag.default {
            help.push_str(&format!(" (default {d})"));
        }
        if flag.required {
            help.push_str(" (required)");
        }
        cmd = cmd.arg(
            Arg::new(flag.name)
                .long(flag.name)
                .value_name(flag.kind.unit_label())
                .num_args(1)
                .allow_hyphen_values(true)
                .action(ArgAction::Append)
                .help(help),
        );
    }
    cmd
}

pub fn usage() -> String {
    let mut out = format!("usage: {PROGRAM} <command> [flags]\n\ncommands:\n");
    for c in Command::ALL {
        out.push_str(&format!("  {:<14} {}\n", c.name(), c.about()));
    }
    out.push_str(&format!("\nrun `{PROGRAM} <command> --help` for the flags of a command\n"));
    out
}

/// Help text (flag table) for one command.
pub fn command_help(command: Command) -> String {
    clap_command(command).render_help().to_string()
}

/// Parses `argv` without the program name.
pub fn parse_args<S: AsRef<str>>(argv: &[S]) -> Result<Parsed, CliError> {
    let argv: Vec<&str> = argv.iter().map(AsRef::as_ref).collect();
    let Some((&name, rest)) = argv.split_first() else {
        return Err(CliError::Usage(usage()));
    };
    if matches!(name, "--help" | "-h" | "help") {
        return Ok(Parsed::Help(usage()));
    }
    let command = Command::from_name(name)
        .ok_or_else(|| CliError::Usage(format!("unknown command `{name}`\n\n{}", usage())))?;
    if rest.iter().any(|a| matches!(*a, "--help" | "-h")) {
        return Ok(Parsed::Help(command_help(command)));
    }

    // collect every offending flag before clap reports only the first one
    let known: Vec<&str> = command.flags().iter().map(|f| f.name).collect();
    let mut unknown = Vec::new();
    let mut expect_value = false;
    for arg in rest {
        if expect_value {
            expect_value = false;
            continue;
        }
        match arg.strip_prefix("--") {
            Some(body) => {
                let key = body.split_once('=').map_or(body, |(k, _)| k);
                if !known.contains(&key) {
                    unknown.push(format!("--{key}"));
                }
                expect_value = !body.contains('=');
            }
            None => unknown.push((*arg).to_string()),
        }
    }
    if !unknown.is_empty() {
        return Err(CliError::UnknownFlags { command: command.name().to_string(), flags: unknown });
    }

    let matches = clap_command(command)
        .no_binary_name(true)
        .try_get_matches_from(rest.iter().copied())
        .map_err(|e| CliError::Usage(e.render().to_string()))?;

    let mut parameters = BTreeMap::new();
    let mut missing = Vec::new();
    for flag in command.flags() {
        let values: Vec<&String> =
            matches.get_many::<String>(flag.name).map(Iterator::collect).unwrap_or_default();
        match values.as_slice() {
            [] => {
                if let Some(d) = flag.default {
                    parameters.insert(flag.name.to_string(), d.to_string());
                } else if flag.required {
                    missing.push(flag.name.to_string());
                }
            }
            [v] => {
                parameters.insert(flag.name.to_string(), (*v).clone());
            }
            _ => return Err(CliError::DuplicateFlag(flag.name.to_string())),
        }
    }
    if !missing.is_empty() {
        return Err(CliError::MissingFlags(missing));
    }
    let output_path = PathBuf::from(parameters.remove("out").expect("--out is required everywhere"));
    let input_path = parameters.remove("in").map(PathBuf::from);
    Ok(Parsed::Run(RunConfig { command, input_path, output_path, parameters }))
}
