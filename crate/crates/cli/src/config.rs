//! Run configuration: TOML schema, environment defaults, flag overrides and validation.
//!
//! Precedence, lowest first: built-in defaults, environment variables, the TOML
//! file, command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pwreath_core::actions::{GroupAction, MAX_ACTION_POINTS};
use pwreath_core::categories::{CategorySpec, GeneratedCategory, MAX_CLOSURE_POINTS};
use pwreath_core::freeprob::{MAX_CUMULANT_INDEX, MAX_MOMENT_INDEX};
use pwreath_core::fusion::{DEFAULT_WORD_LEN, MAX_WORD_LEN};
use pwreath_core::groups::FiniteGroup;
use pwreath_core::partitions::{ColouredPartition, DEFAULT_MAX_POINTS};

use crate::error::{CliError, CliResult};

pub const ENV_MAX_POINTS: &str = "PWREATH_MAX_POINTS";
pub const ENV_MAX_WORD_LEN: &str = "PWREATH_MAX_WORD_LEN";
pub const ENV_N_MAX: &str = "PWREATH_N_MAX";

/// Largest `N` accepted; operator sizes grow like `(N|G|)^points`.
pub const MAX_N: usize = 16;
/// Point bound of the operator identity sweeps.
pub const MAX_VERIFY_POINTS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    Enumerate,
    Moments,
    Cumulants,
    Fusion,
    DimMor,
    Verify,
    Actions,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Enumerate => "enumerate",
            Subcommand::Moments => "moments",
            Subcommand::Cumulants => "cumulants",
            Subcommand::Fusion => "fusion",
            Subcommand::DimMor => "dim-mor",
            Subcommand::Verify => "verify",
            Subcommand::Actions => "actions",
        }
    }

    fn default_max_points(self) -> usize {
        match self {
            Subcommand::Enumerate => 8,
            Subcommand::Verify => 3,
            Subcommand::Actions => 3,
            _ => 4,
        }
    }

    fn point_limit(self) -> usize {
        match self {
            Subcommand::Verify => MAX_VERIFY_POINTS,
            Subcommand::Actions => MAX_ACTION_POINTS,
            _ => DEFAULT_MAX_POINTS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Colouring {
    Group,
    Gamma,
    TwoColourModS,
}

/// `s = 3` or `s = "inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Modulus {
    Finite(usize),
    Text(String),
}

impl Modulus {
    fn value(&self) -> CliResult<Option<usize>> {
        match self {
            Modulus::Finite(0) => Err(CliError::Config("s must be positive".into())),
            Modulus::Finite(s) => Ok(Some(*s)),
            Modulus::Text(t) if t == "inf" => Ok(None),
            Modulus::Text(t) => t
                .parse::<usize>()
                .ok()
                .filter(|&s| s > 0)
                .map(Some)
                .ok_or_else(|| CliError::Config(format!("s must be a positive integer or \"inf\", got `{t}`"))),
        }
    }
}

/// `group = "S3"`, `group = { abelian = [2, 3] }` or `group = { table = "path" }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Abelian { abelian: Vec<usize> },
    Table { table: PathBuf },
}

impl GroupSpec {
    pub fn build(&self, base_dir: &Path) -> CliResult<FiniteGroup> {
        Ok(match self {
            GroupSpec::Name(name) => FiniteGroup::parse(name)?,
            GroupSpec::Abelian { abelian } => FiniteGroup::abelian(abelian)?,
            GroupSpec::Table { table } => {
                let path = base_dir.join(table);
                if !path.exists() {
                    return Err(CliError::Io {
                        path,
                        message: "group table not found".into(),
                    });
                }
                FiniteGroup::from_table_file(&path)?
            }
        })
    }
}

/// `action = { group = ..., set_size = n, map = [[...]] }` with row `g`, column `x` holding `g.x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub group: GroupSpec,
    pub set_size: usize,
    pub map: Vec<Vec<usize>>,
}

/// One generator of an irreducible representation: a group element index and its
/// matrix, entries written as cyclotomic numbers such as `"-1/2 + z3"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepGenerator {
    pub element: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepSpec {
    pub generators: Vec<IrrepGenerator>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    T,
    M,
    F,
    P,
    #[serde(rename = "equivariance")]
    Equivariance,
    #[serde(rename = "all")]
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "T" => Suite::T,
            "M" => Suite::M,
            "F" => Suite::F,
            "P" => Suite::P,
            "equivariance" => Suite::Equivariance,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite `{s}` (expected T, M, F, P, equivariance or all)")),
        })
    }
}

/// Everything a config file or the flags may set; unset keys are `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub category: Option<String>,
    pub colouring: Option<Colouring>,
    pub s: Option<Modulus>,
    pub generators: Option<Vec<String>>,
    pub group: Option<GroupSpec>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub max_points: Option<usize>,
    pub max_word_len: Option<usize>,
    pub n_max: Option<usize>,
    pub group_order: Option<usize>,
    pub points: Option<[usize; 2]>,
    pub list: Option<bool>,
    pub against_rank: Option<bool>,
    pub moments: Option<Vec<String>>,
    pub words: Option<Vec<String>>,
    pub decompose: Option<bool>,
    pub cross_check: Option<bool>,
    pub upper: Option<String>,
    pub lower: Option<String>,
    pub suite: Option<Suite>,
    pub action: Option<ActionSpec>,
    pub involution: Option<Vec<usize>>,
    pub irreps: Option<Vec<IrrepSpec>>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl Settings {
    /// Keys of `top` replace those of `self`.
    pub fn overlay(mut self, top: Settings) -> Settings {
        overlay!(self, top; category, colouring, s, generators, group, n, max_points, max_word_len, n_max,
            group_order, points, list, against_rank, moments, words, decompose, cross_check, upper, lower,
            suite, action, involution, irreps);
        self
    }

    pub fn from_toml(text: &str) -> CliResult<Settings> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> CliResult<Settings> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Settings::from_toml(&text)
    }

    /// Bound defaults from `PWREATH_MAX_POINTS`, `PWREATH_MAX_WORD_LEN` and `PWREATH_N_MAX`.
    pub fn from_env(lookup: impl Fn(&str) -> Option<String>) -> CliResult<Settings> {
        let read = |key: &str| -> CliResult<Option<usize>> {
            match lookup(key) {
                None => Ok(None),
                Some(v) => v
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|_| CliError::Config(format!("{key} must be a non-negative integer, got `{v}`"))),
            }
        };
        Ok(Settings {
            max_points: read(ENV_MAX_POINTS)?,
            max_word_len: read(ENV_MAX_WORD_LEN)?,
            n_max: read(ENV_N_MAX)?,
            ..Settings::default()
        })
    }
}

/// The validated configuration of one run, echoed verbatim in its report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub category: String,
    pub colouring: Option<Colouring>,
    pub s: Option<Modulus>,
    pub generators: Vec<String>,
    pub group: Option<GroupSpec>,
    #[serde(rename = "N")]
    pub n: usize,
    pub max_points: usize,
    pub max_word_len: usize,
    pub n_max: usize,
    pub group_order: Option<usize>,
    pub points: Option<[usize; 2]>,
    pub list: bool,
    pub against_rank: bool,
    pub moments: Vec<String>,
    pub words: Vec<String>,
    pub decompose: bool,
    pub cross_check: bool,
    pub upper: String,
    pub lower: String,
    pub suite: Suite,
    pub action: Option<ActionSpec>,
    pub involution: Option<Vec<usize>>,
    pub irreps: Vec<IrrepSpec>,
    /// Directory that relative paths in the config are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn bound(what: &'static str, requested: usize, limit: usize) -> CliResult<()> {
    if requested > limit {
        Err(CliError::Core(pwreath_core::Error::BoundExceeded { what, requested, limit }))
    } else {
        Ok(())
    }
}

impl RunConfig {
    /// Apply defaults to merged settings and validate every bound.
    pub fn resolve(subcommand: Subcommand, settings: Settings, base_dir: PathBuf) -> CliResult<RunConfig> {
        let config = RunConfig {
            subcommand,
            category: settings.category.unwrap_or_else(|| "NC".into()),
            colouring: settings.colouring,
            s: settings.s,
            generators: settings.generators.unwrap_or_default(),
            group: settings.group,
            n: settings.n.unwrap_or(if subcommand == Subcommand::Verify { 2 } else { 4 }),
            max_points: settings.max_points.unwrap_or(subcommand.default_max_points()),
            max_word_len: settings.max_word_len.unwrap_or(DEFAULT_WORD_LEN),
            n_max: settings.n_max.unwrap_or(6),
            group_order: settings.group_order,
            points: settings.points,
            list: settings.list.unwrap_or(false),
            against_rank: settings.against_rank.unwrap_or(false),
            moments: settings.moments.unwrap_or_default(),
            words: settings.words.unwrap_or_default(),
            decompose: settings.decompose.unwrap_or(false),
            cross_check: settings.cross_check.unwrap_or(false),
            upper: settings.upper.unwrap_or_default(),
            lower: settings.lower.unwrap_or_default(),
            suite: settings.suite.unwrap_or(Suite::All),
            action: settings.action,
            involution: settings.involution,
            irreps: settings.irreps.unwrap_or_default(),
            base_dir,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> CliResult<()> {
        if self.n == 0 {
            return Err(CliError::Config("N must be at least 1".into()));
        }
        if self.group_order == Some(0) {
            return Err(CliError::Config("group_order must be at least 1".into()));
        }
        if self.max_word_len == 0 {
            return Err(CliError::Config("max_word_len must be at least 1".into()));
        }
        if self.s.is_some() && self.colouring != Some(Colouring::TwoColourModS) {
            return Err(CliError::Config("s applies only to colouring = \"two-colour-mod-s\"".into()));
        }
        if let Some(s) = &self.s {
            s.value()?;
        }
        bound("N", self.n, MAX_N)?;
        bound("max_points", self.max_points, self.subcommand.point_limit())?;
        bound("max_word_len", self.max_word_len, MAX_WORD_LEN)?;
        let index_limit = if self.subcommand == Subcommand::Cumulants {
            MAX_CUMULANT_INDEX
        } else {
            MAX_MOMENT_INDEX
        };
        bound("n_max", self.n_max, index_limit)?;
        if let Some([k, l]) = self.points {
            bound("points", k + l, self.subcommand.point_limit())?;
        }
        Ok(())
    }

    pub fn group(&self) -> CliResult<Option<FiniteGroup>> {
        self.group.as_ref().map(|g| g.build(&self.base_dir)).transpose()
    }

    pub fn require_group(&self) -> CliResult<FiniteGroup> {
        self.group()?
            .ok_or_else(|| CliError::Config(format!("`{}` needs a group", self.subcommand.name())))
    }

    /// The category described by `category`, `colouring`, `s`, `group` and `generators`.
    pub fn category_spec(&self) -> CliResult<CategorySpec> {
        if !self.generators.is_empty() {
            let colours = match self.colouring {
                None => match self.category.parse::<CategorySpec>() {
                    Ok(spec) => spec.colour_set(),
                    Err(_) => pwreath_core::partitions::ColourSet::trivial(),
                },
                Some(Colouring::Group) => self.require_group()?.colour_set(),
                Some(Colouring::Gamma) => self.require_group()?.inverse_colour_set(),
                Some(Colouring::TwoColourModS) => pwreath_core::categories::two_colours(),
            };
            let generators = self
                .generators
                .iter()
                .map(|text| ColouredPartition::parse(text, &colours))
                .collect::<pwreath_core::Result<Vec<_>>>()?;
            let limit = self.max_points.min(MAX_CLOSURE_POINTS);
            return Ok(CategorySpec::Generated(GeneratedCategory::new(generators, colours, limit)?));
        }
        match self.colouring {
            None => Ok(self.category.parse()?),
            Some(Colouring::Group) => Ok(CategorySpec::GroupColoured(self.family()?, self.require_group()?)),
            Some(Colouring::Gamma) => {
                let group = self.require_group()?;
                if !group.is_commutative() {
                    return Err(pwreath_core::Error::NonAbelian.into());
                }
                Ok(CategorySpec::GammaColoured(self.family()?, group))
            }
            Some(Colouring::TwoColourModS) => {
                let s = match &self.s {
                    None => return Err(CliError::Config("two-colour-mod-s needs s".into())),
                    Some(s) => s.value()?,
                };
                Ok(CategorySpec::TwoColourModS(s))
            }
        }
    }

    /// `category` read as a plain family name.
    pub fn family(&self) -> CliResult<pwreath_core::partitions::Family> {
        self.category
            .parse()
            .map_err(|_| CliError::Config(format!("`{}` is not a partition family", self.category)))
    }

    pub fn action(&self) -> CliResult<GroupAction> {
        let spec = self
            .action
            .as_ref()
            .ok_or_else(|| CliError::Config("`actions` needs an `action` table".into()))?;
        if spec.map.len() != spec.group.build(&self.base_dir)?.order() {
            return Err(CliError::Config("action map needs one row per group element".into()));
        }
        if spec.map.iter().any(|row| row.len() != spec.set_size) {
            return Err(CliError::Config("every action map row needs set_size entries".into()));
        }
        Ok(GroupAction::new(spec.group.build(&self.base_dir)?, spec.map.clone())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve(sub: Subcommand, text: &str) -> CliResult<RunConfig> {
        RunConfig::resolve(sub, Settings::from_toml(text)?, PathBuf::from("."))
    }

    #[test]
    fn schema_parses() {
        let text = r#"
            category = "NC"
            colouring = "gamma"
            group = { abelian = [2, 2] }
            N = 4
            max_points = 4
            words = ["0,1"]
        "#;
        let config = resolve(Subcommand::Fusion, text).unwrap();
        assert_eq!(config.n, 4);
        assert_eq!(config.category_spec().unwrap().to_string(), "NC[Z2xZ2]");
        assert!(resolve(Subcommand::Fusion, "bogus = 1").is_err());
    }

    #[test]
    fn modulus_forms() {
        let inf = resolve(Subcommand::Enumerate, "colouring = \"two-colour-mod-s\"\ns = \"inf\"").unwrap();
        assert_eq!(inf.category_spec().unwrap(), CategorySpec::TwoColourModS(None));
        let two = resolve(Subcommand::Enumerate, "colouring = \"two-colour-mod-s\"\ns = 2").unwrap();
        assert_eq!(two.category_spec().unwrap(), CategorySpec::TwoColourModS(Some(2)));
        assert!(resolve(Subcommand::Enumerate, "colouring = \"two-colour-mod-s\"\ns = 0").is_err());
        assert!(resolve(Subcommand::Enumerate, "s = 2").is_err());
    }

    #[test]
    fn precedence() {
        let env = Settings::from_env(|k| (k == ENV_MAX_POINTS).then(|| "5".to_string())).unwrap();
        let file = Settings::from_toml("max_points = 6\nN = 3").unwrap();
        let flags = Settings {
            n: Some(2),
            ..Settings::default()
        };
        let merged = env.clone().overlay(file).overlay(flags);
        assert_eq!((merged.max_points, merged.n), (Some(6), Some(2)));
        let only_env = RunConfig::resolve(Subcommand::Enumerate, env, PathBuf::new()).unwrap();
        assert_eq!(only_env.max_points, 5);
        assert!(Settings::from_env(|_| Some("x".into())).is_err());
    }

    #[test]
    fn bounds_are_checked() {
        let err = resolve(Subcommand::Moments, "n_max = 11").unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = resolve(Subcommand::Verify, "max_points = 7").unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert_eq!(resolve(Subcommand::Verify, "N = 0").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn generated_categories() {
        let text = r#"
            generators = ["P(2,2) {u1 l2}{u2 l1}"]
            max_points = 4
        "#;
        let config = resolve(Subcommand::Enumerate, text).unwrap();
        assert!(matches!(config.category_spec().unwrap(), CategorySpec::Generated(_)));
    }

    #[test]
    fn actions_from_config() {
        let text = r#"
            action = { group = "Z2", set_size = 2, map = [[0, 1], [1, 0]] }
        "#;
        let config = resolve(Subcommand::Actions, text).unwrap();
        assert_eq!(config.action().unwrap().set_size(), 2);
        let bad = resolve(Subcommand::Actions, "action = { group = \"Z2\", set_size = 2, map = [[0, 1]] }").unwrap();
        assert!(bad.action().is_err());
    }
}
