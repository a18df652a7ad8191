//! Command-line front end for the partition wreath product engine.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};

use crate::config::{GroupSpec, RunConfig, Settings, Subcommand, Suite};
use crate::error::{CliError, CliResult};
use crate::report::{golden_compare, timestamp, Mismatch, Report};

#[derive(Debug, Parser)]
#[command(name = "pwreath", version, about = "Partition categories, wreath products and their invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Subcommand)]
pub enum Command {
    /// Count (and optionally list) partitions of a category.
    Enumerate(Invocation),
    /// Character moments of a partition wreath product, with free cumulants.
    Moments(Invocation),
    /// Free cumulants of a moment sequence or a character law.
    Cumulants(Invocation),
    /// Fusion set, fusion rules and decompositions of a block-stable category.
    Fusion(Invocation),
    /// Exact dimension of an intertwiner space.
    DimMor(Invocation),
    /// Operator identity suites.
    Verify(Invocation),
    /// Reports for a group action on a finite set.
    Actions(Invocation),
}

impl Command {
    pub fn parts(&self) -> (Subcommand, &Invocation) {
        match self {
            Command::Enumerate(i) => (Subcommand::Enumerate, i),
            Command::Moments(i) => (Subcommand::Moments, i),
            Command::Cumulants(i) => (Subcommand::Cumulants, i),
            Command::Fusion(i) => (Subcommand::Fusion, i),
            Command::DimMor(i) => (Subcommand::DimMor, i),
            Command::Verify(i) => (Subcommand::Verify, i),
            Command::Actions(i) => (Subcommand::Actions, i),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    #[default]
    Json,
    Csv,
    Both,
}

#[derive(Debug, Default, Args)]
pub struct Invocation {
    /// TOML configuration file; flags override its keys.
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
    /// Write `<subcommand>.json` / `<subcommand>.csv` here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare the JSON report with this file, ignoring the timestamp.
    #[arg(long)]
    pub golden: Option<PathBuf>,
    #[command(flatten)]
    pub flags: Flags,
}

/// Overrides for configuration keys.
#[derive(Debug, Default, Args)]
pub struct Flags {
    #[arg(long, visible_aliases = ["family", "spec"])]
    pub category: Option<String>,
    #[arg(long)]
    pub colouring: Option<String>,
    /// Group name such as Z2, Z2xZ3 or S3.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub max_points: Option<usize>,
    #[arg(long)]
    pub max_word_len: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub group_order: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["K", "L"])]
    pub points: Option<Vec<usize>>,
    #[arg(long)]
    pub list: bool,
    #[arg(long)]
    pub against_rank: bool,
    /// Colour words, comma separated; repeatable.
    #[arg(long = "word", value_delimiter = ',')]
    pub words: Vec<String>,
    #[arg(long)]
    pub decompose: bool,
    #[arg(long)]
    pub cross_check: bool,
    #[arg(long)]
    pub upper: Option<String>,
    #[arg(long)]
    pub lower: Option<String>,
    #[arg(long)]
    pub suite: Option<Suite>,
}

impl Flags {
    pub fn to_settings(&self) -> CliResult<Settings> {
        let colouring = match &self.colouring {
            Some(text) => Some(
                Settings::from_toml(&format!("colouring = {}", toml_string(text)))?
                    .colouring
                    .expect("parsed above"),
            ),
            None => None,
        };
        let set = |b: bool| b.then_some(true);
        Ok(Settings {
            category: self.category.clone(),
            colouring,
            group: self.group.clone().map(GroupSpec::Name),
            n: self.n,
            max_points: self.max_points,
            max_word_len: self.max_word_len,
            n_max: self.n_max,
            group_order: self.group_order,
            points: self.points.as_ref().map(|p| [p[0], p[1]]),
            list: set(self.list),
            against_rank: set(self.against_rank),
            words: (!self.words.is_empty()).then(|| self.words.clone()),
            decompose: set(self.decompose),
            cross_check: set(self.cross_check),
            upper: self.upper.clone(),
            lower: self.lower.clone(),
            suite: self.suite,
            ..Settings::default()
        })
    }
}

fn toml_string(text: &str) -> String {
    toml::Value::String(text.to_string()).to_string()
}

/// Environment defaults, then the config file, then the flags.
pub fn build_config(
    subcommand: Subcommand,
    invocation: &Invocation,
    env: impl Fn(&str) -> Option<String>,
) -> CliResult<RunConfig> {
    let mut settings = Settings::from_env(env)?;
    let mut base_dir = PathBuf::from(".");
    if let Some(path) = &invocation.config {
        settings = settings.overlay(Settings::from_file(path)?);
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            base_dir = parent.to_path_buf();
        }
    }
    settings = settings.overlay(invocation.flags.to_settings()?);
    RunConfig::resolve(subcommand, settings, base_dir)
}

/// Everything a finished run hands back to `main`.
#[derive(Debug)]
pub struct RunOutput {
    pub report: Report,
    /// Rendered documents, each with the file name it gets under `--out`.
    pub documents: Vec<(String, String)>,
    pub golden: Option<Mismatch>,
    pub exit_code: i32,
}

pub fn run(subcommand: Subcommand, invocation: &Invocation, env: impl Fn(&str) -> Option<String>) -> CliResult<RunOutput> {
    let config = build_config(subcommand, invocation, env)?;
    let outcome = commands::run(&config)?;
    let report = Report::new(config, outcome, timestamp());
    let json = report.to_json();
    let mut documents = Vec::new();
    if matches!(invocation.emit, Emit::Json | Emit::Both) {
        documents.push((format!("{}.json", subcommand.name()), json.clone()));
    }
    if matches!(invocation.emit, Emit::Csv | Emit::Both) {
        documents.push((format!("{}.csv", subcommand.name()), report.to_csv()?));
    }
    let golden = match &invocation.golden {
        Some(path) => golden_compare(&json, path)?,
        None => None,
    };
    let exit_code = if report.is_clean() && golden.is_none() { 0 } else { 1 };
    Ok(RunOutput {
        report,
        documents,
        golden,
        exit_code,
    })
}

/// Write documents to `dir`, or concatenate them to `stdout`.
pub fn write_documents(documents: &[(String, String)], dir: Option<&Path>, stdout: &mut impl std::io::Write) -> CliResult<()> {
    match dir {
        Some(dir) => {
            let io_err = |path: &Path, e: std::io::Error| CliError::Io {
                path: path.to_path_buf(),
                message: e.to_string(),
            };
            std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            for (name, text) in documents {
                let path = dir.join(name);
                std::fs::write(&path, text).map_err(|e| io_err(&path, e))?;
            }
        }
        None => {
            for (_, text) in documents {
                stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    message: e.to_string(),
                })?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("pwreath").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_parse() {
        let cli = parse(&["enumerate", "--family", "NC", "--points", "0", "4"]);
        let (sub, inv) = cli.command.parts();
        assert_eq!(sub, Subcommand::Enumerate);
        let config = build_config(sub, inv, |_| None).unwrap();
        assert_eq!(config.category, "NC");
        assert_eq!(config.points, Some([0, 4]));

        let cli = parse(&["fusion", "--spec", "NC2", "--word", "x,xx", "--word", "xxx", "--cross-check", "--N", "4"]);
        let config = build_config(Subcommand::Fusion, cli.command.parts().1, |_| None).unwrap();
        assert_eq!(config.words, vec!["x", "xx", "xxx"]);
        assert!(config.cross_check);
        assert_eq!(config.n, 4);
    }

    #[test]
    fn flags_beat_environment() {
        let cli = parse(&["moments", "--n-max", "3"]);
        let env = |k: &str| (k == config::ENV_N_MAX || k == config::ENV_MAX_WORD_LEN).then(|| "5".to_string());
        let config = build_config(Subcommand::Moments, cli.command.parts().1, env).unwrap();
        assert_eq!(config.n_max, 3);
        assert_eq!(config.max_word_len, 5);
    }

    #[test]
    fn exit_codes() {
        let cli = parse(&["verify", "--suite", "T", "--max-points", "3", "--N", "2"]);
        let out = run(Subcommand::Verify, cli.command.parts().1, |_| None).unwrap();
        assert_eq!(out.exit_code, 0);
        let cli = parse(&["enumerate", "--max-points", "99"]);
        let err = run(Subcommand::Enumerate, cli.command.parts().1, |_| None).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let cli = parse(&["enumerate", "--category", "NOPE"]);
        let err = run(Subcommand::Enumerate, cli.command.parts().1, |_| None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let cli = parse(&["enumerate", "--colouring", "stripes"]);
        assert!(build_config(Subcommand::Enumerate, cli.command.parts().1, |_| None).is_err());
    }
}
