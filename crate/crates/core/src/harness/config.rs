use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::env::{self, LabelledMdp};
use crate::fixtures;
use crate::learn::{DecayKind, EpsilonSchedule, LearnError, LearnerConfig};
use crate::ldba::{load_ldba, Ldba};
use crate::ltl::{atoms_of, parse_ltl, Ltl};
use crate::product::{DiscountMode, ProductError};

/// Configuration errors; every variant names the offending field path.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {msg}")]
    Io { path: String, msg: String },
    #[error("config syntax: {0}")]
    Syntax(String),
    #[error("{0}: missing field")]
    Missing(&'static str),
    #[error("{field}: {msg}")]
    Invalid { field: String, msg: String },
}

fn invalid(field: impl Into<String>, msg: impl ToString) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        msg: msg.to_string(),
    }
}

fn required<T>(v: Option<T>, field: &'static str) -> Result<T, ConfigError> {
    v.ok_or(ConfigError::Missing(field))
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: Option<RawExperiment>,
    environment: Option<RawEnvironment>,
    learner: Option<RawLearner>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    name: Option<String>,
    algorithm: Option<String>,
    variants: Option<String>,
    seeds: Option<Vec<u64>>,
    threshold: Option<f64>,
    out: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawEnvironment {
    name: Option<String>,
    param: Option<f64>,
    ldba: Option<String>,
    formula: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawLearner {
    gamma: Option<f64>,
    mode: Option<String>,
    lr: Option<f64>,
    batch_size: Option<usize>,
    k_steps: Option<usize>,
    horizon: Option<usize>,
    episodes: Option<usize>,
    replay_capacity: Option<usize>,
    baseline_rate: Option<f64>,
    epsilon: Option<RawEpsilon>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawEpsilon {
    initial: Option<f64>,
    min: Option<f64>,
    decay: Option<String>,
    rate: Option<f64>,
    freq: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    QLearn,
    Pg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Variant {
    Lcer,
    Baseline,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Lcer => "lcer",
            Variant::Baseline => "baseline",
        }
    }
}

/// A parsed and validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub algorithm: Algorithm,
    pub variants: Vec<Variant>,
    pub seeds: Vec<u64>,
    pub threshold: f64,
    pub out: Option<PathBuf>,
    pub env_name: String,
    pub env_param: Option<f64>,
    /// Where the automaton came from, as written in the file.
    pub ldba_source: String,
    pub ldba: Ldba,
    pub formula: Option<Ltl>,
    /// `lcer` and `seed` are set per run.
    pub learner: LearnerConfig,
    /// SHA-256 of the config text, hex.
    pub hash: String,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses a config; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let ex = raw.experiment.unwrap_or_default();
        let en = raw.environment.unwrap_or_default();
        let le = raw.learner.unwrap_or_default();

        let algorithm = match ex.algorithm.as_deref().unwrap_or("qlearn") {
            "qlearn" => Algorithm::QLearn,
            "pg" => Algorithm::Pg,
            other => return Err(invalid("experiment.algorithm", format!("unknown algorithm `{other}`"))),
        };
        let variants = match ex.variants.as_deref().unwrap_or("both") {
            "both" => vec![Variant::Lcer, Variant::Baseline],
            "lcer" => vec![Variant::Lcer],
            "baseline" => vec![Variant::Baseline],
            other => return Err(invalid("experiment.variants", format!("unknown variant set `{other}`"))),
        };
        let seeds = ex.seeds.unwrap_or_else(|| (0..10).collect());
        if seeds.is_empty() {
            return Err(invalid("experiment.seeds", "no seeds"));
        }
        let threshold = ex.threshold.unwrap_or(0.9);
        if !(0.0..=1.0).contains(&threshold) {
            return Err(invalid("experiment.threshold", "must lie in [0, 1]"));
        }

        let env_name = required(en.name, "environment.name")?;
        let environment = env::by_name(&env_name, en.param).map_err(|e| invalid("environment.name", e))?;
        let ldba_source = required(en.ldba, "environment.ldba")?;
        let ldba = load_automaton(&ldba_source, base)?;
        for atom in ldba.ap().atoms() {
            if environment.ap().index_of(atom.as_str()).is_none() {
                return Err(invalid(
                    "environment.ldba",
                    format!("atom `{atom}` is not produced by environment `{env_name}`"),
                ));
            }
        }
        let formula = match en.formula {
            None => None,
            Some(f) => {
                let phi = parse_ltl(&f).map_err(|e| invalid("environment.formula", e))?;
                for atom in atoms_of(&phi) {
                    if ldba.ap().index_of(atom.as_str()).is_none() {
                        return Err(invalid("environment.formula", format!("atom `{atom}` is not in the automaton")));
                    }
                }
                Some(phi)
            }
        };

        let learner = learner_config(le)?;
        let hash = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        Ok(ExperimentConfig {
            name: ex.name.unwrap_or_else(|| env_name.clone()),
            algorithm,
            variants,
            seeds,
            threshold,
            out: ex.out.map(|o| base.join(o)),
            env_name,
            env_param: en.param,
            ldba_source,
            ldba,
            formula,
            learner,
            hash,
        })
    }

    pub fn environment(&self) -> Box<dyn LabelledMdp> {
        env::by_name(&self.env_name, self.env_param).expect("validated at load")
    }
}

/// `builtin:<name>` names a shipped fixture; anything else is a file path.
pub fn load_automaton(source: &str, base: &Path) -> Result<Ldba, ConfigError> {
    let text = match source.strip_prefix("builtin:") {
        Some(name) => fixtures::by_name(name)
            .ok_or_else(|| invalid("environment.ldba", format!("no builtin automaton `{name}`")))?
            .0
            .to_string(),
        None => {
            let path = base.join(source);
            std::fs::read_to_string(&path)
                .map_err(|e| invalid("environment.ldba", format!("cannot read `{}`: {e}", path.display())))?
        }
    };
    load_ldba(&text).map_err(|e| invalid("environment.ldba", e))
}

fn learner_config(le: RawLearner) -> Result<LearnerConfig, ConfigError> {
    let d = LearnerConfig::default();
    let mode = match le.mode.as_deref().unwrap_or("eventual") {
        "eventual" => DiscountMode::Eventual,
        "standard" => DiscountMode::Standard,
        other => return Err(invalid("learner.mode", format!("unknown mode `{other}`"))),
    };
    let eps = le.epsilon.unwrap_or_default();
    let decay = match eps.decay.as_deref().unwrap_or("exponential") {
        "linear" => DecayKind::Linear,
        "exponential" => DecayKind::Exponential,
        other => return Err(invalid("learner.epsilon.decay", format!("unknown decay `{other}`"))),
    };
    let initial = eps.initial.unwrap_or(d.epsilon.initial);
    let epsilon = EpsilonSchedule {
        initial,
        min: eps.min.unwrap_or(initial.min(d.epsilon.min)),
        decay,
        rate: eps.rate.unwrap_or(1.0),
        freq: eps.freq.unwrap_or(1),
    };
    if epsilon.freq == 0 {
        return Err(invalid("learner.epsilon.freq", "must be positive"));
    }
    let cfg = LearnerConfig {
        gamma: required(le.gamma, "learner.gamma")?,
        mode,
        lr: le.lr.unwrap_or(d.lr),
        epsilon,
        batch_size: le.batch_size.unwrap_or(d.batch_size),
        k_steps: le.k_steps.unwrap_or(d.k_steps),
        horizon: required(le.horizon, "learner.horizon")?,
        episodes: required(le.episodes, "learner.episodes")?,
        replay_capacity: le.replay_capacity.unwrap_or(d.replay_capacity),
        baseline_rate: le.baseline_rate.unwrap_or(d.baseline_rate),
        ..d
    };
    cfg.validate().map_err(|e| match e {
        LearnError::Range { field, value } => invalid(format!("learner.{field}"), format!("{value} is out of range")),
        LearnError::Product(ProductError::Gamma(g)) => invalid("learner.gamma", format!("{g} must lie in (0, 1)")),
        other => invalid("learner", other),
    })?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[environment]
name = "flatworld"
ldba = "builtin:fgy"
formula = "FGy"

[learner]
gamma = 0.95
horizon = 20
episodes = 5
"#;

    #[test]
    fn minimal_config() {
        let c = ExperimentConfig::parse(MINIMAL, Path::new(".")).unwrap();
        assert_eq!(c.variants, vec![Variant::Lcer, Variant::Baseline]);
        assert_eq!(c.seeds.len(), 10);
        assert_eq!(c.algorithm, Algorithm::QLearn);
        assert_eq!(c.hash.len(), 64);
    }

    #[test]
    fn field_paths_in_errors() {
        let no_ldba = MINIMAL.replace("ldba = \"builtin:fgy\"\n", "");
        let e = ExperimentConfig::parse(&no_ldba, Path::new(".")).unwrap_err();
        assert_eq!(e, ConfigError::Missing("environment.ldba"));
        assert!(e.to_string().contains("environment.ldba"));

        let missing_file = MINIMAL.replace("builtin:fgy", "nowhere/none.ldba");
        let e = ExperimentConfig::parse(&missing_file, Path::new(".")).unwrap_err();
        assert!(e.to_string().starts_with("environment.ldba: cannot read"), "{e}");

        let bad_gamma = MINIMAL.replace("0.95", "1.5");
        let e = ExperimentConfig::parse(&bad_gamma, Path::new(".")).unwrap_err();
        assert!(e.to_string().starts_with("learner.gamma"), "{e}");

        let bad_atom = MINIMAL.replace("\"FGy\"", "\"F q\"");
        let e = ExperimentConfig::parse(&bad_atom, Path::new(".")).unwrap_err();
        assert!(e.to_string().starts_with("environment.formula"), "{e}");

        let unknown = format!("{MINIMAL}colour = 3\n");
        assert!(matches!(ExperimentConfig::parse(&unknown, Path::new(".")), Err(ConfigError::Syntax(_))));
    }

    #[test]
    fn automaton_atoms_checked_against_environment() {
        let text = MINIMAL.replace("flatworld", "two_choice");
        let e = ExperimentConfig::parse(&text, Path::new(".")).unwrap_err();
        assert!(e.to_string().contains("atom `y`"), "{e}");
    }

    #[test]
    fn shipped_configs_parse() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
        for name in ["flatworld1.toml", "minecraft.toml", "two_choice.toml"] {
            ExperimentConfig::load(&dir.join(name)).unwrap();
        }
    }
}
