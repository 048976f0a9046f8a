//! Experiment configuration and its TOML file form.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use gaplab_core::{EnsembleKind, EnsembleSpec, IntervalUnion};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GAPLAB_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "gaplab-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Gue,
    Lue,
    Jue,
}

impl Ensemble {
    pub fn kind(self) -> EnsembleKind {
        match self {
            Ensemble::Gue => EnsembleKind::Gue,
            Ensemble::Lue => EnsembleKind::Lue,
            Ensemble::Jue => EnsembleKind::Jue,
        }
    }

    pub fn spec(self) -> EnsembleSpec {
        EnsembleSpec::canonical(self.kind())
    }

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Gue => "gue",
            Ensemble::Lue => "lue",
            Ensemble::Jue => "jue",
        }
    }
}

/// `lo:hi` pairs separated by commas, e.g. `0.1:0.3,0.6:0.9`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSpec(pub Vec<(f64, f64)>);

impl IntervalSpec {
    pub fn union(&self) -> LabResult<IntervalUnion> {
        IntervalUnion::new(self.0.clone()).map_err(|e| LabError::Config(e.to_string()))
    }
}

impl FromStr for IntervalSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = Vec::new();
        for piece in s.split(',') {
            let (lo, hi) =
                piece.trim().split_once(':').ok_or_else(|| format!("interval `{piece}` is not of the form lo:hi"))?;
            let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("bad endpoint `{v}`: {e}"));
            parts.push((parse(lo)?, parse(hi)?));
        }
        Ok(IntervalSpec(parts))
    }
}

impl std::fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(|(lo, hi)| format!("{lo}:{hi}")).collect();
        f.write_str(&s.join(","))
    }
}

impl Serialize for IntervalSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntervalSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ensemble: Ensemble,
    pub n: usize,
    pub replicas: u64,
    pub interval: IntervalSpec,
    #[serde(default = "default_k_list")]
    pub k_list: Vec<u32>,
    #[serde(default = "default_x_list")]
    pub x_list: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_k_list() -> Vec<u32> {
    vec![1, 2, 3]
}

fn default_x_list() -> Vec<f64> {
    (-8..=8).map(|i| i as f64 * 0.25).collect()
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn default_output() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

impl ExperimentConfig {
    pub fn new(ensemble: Ensemble, n: usize, replicas: u64, interval: IntervalSpec) -> Self {
        ExperimentConfig {
            ensemble,
            n,
            replicas,
            interval,
            k_list: default_k_list(),
            x_list: default_x_list(),
            seed: 0,
            workers: default_workers(),
            output: default_output(),
        }
    }

    pub fn validate(&self) -> LabResult<IntervalUnion> {
        if self.replicas < 1 {
            return Err(LabError::Config("replicas must be at least 1".into()));
        }
        if self.n < 50 {
            return Err(LabError::Config("n must be at least 50".into()));
        }
        if self.workers < 1 {
            return Err(LabError::Config("workers must be at least 1".into()));
        }
        if self.k_list.is_empty() || self.k_list.contains(&0) {
            return Err(LabError::Config("k_list must hold positive gap orders".into()));
        }
        if self.x_list.is_empty() || self.x_list.iter().any(|x| !x.is_finite()) {
            return Err(LabError::Config("x_list must hold finite values".into()));
        }
        let union = self.interval.union()?;
        union.validate_for(&self.ensemble.spec()).map_err(|e| LabError::Config(e.to_string()))?;
        Ok(union)
    }
}

/// Numerical engine parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    #[serde(default = "default_order")]
    pub nystrom_order: usize,
}

fn default_order() -> usize {
    60
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { nystrom_order: default_order() }
    }
}

/// Whole configuration file: an `[experiment]` and an `[engine]` section.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub experiment: Option<ExperimentConfig>,
    #[serde(default)]
    pub engine: EngineConfig,
}

impl ConfigFile {
    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> LabResult<Self> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        if cfg.engine.nystrom_order == 0 {
            return Err(LabError::Config("engine.nystrom_order must be positive".into()));
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_syntax() {
        let i: IntervalSpec = "0.1:0.3, 0.6:0.9".parse().unwrap();
        assert_eq!(i.0, vec![(0.1, 0.3), (0.6, 0.9)]);
        assert_eq!(i.to_string(), "0.1:0.3,0.6:0.9");
        assert!("0.1-0.3".parse::<IntervalSpec>().is_err());
        assert!("a:1".parse::<IntervalSpec>().is_err());
    }

    #[test]
    fn file_round_trip() {
        let text = r#"
[experiment]
ensemble = "jue"
n = 100
replicas = 10
interval = "0.25:0.75"
seed = 9
workers = 2
output = "out"

[engine]
nystrom_order = 40
"#;
        let cfg = ConfigFile::parse(text).unwrap();
        let exp = cfg.experiment.clone().unwrap();
        assert_eq!(exp.ensemble, Ensemble::Jue);
        assert_eq!(exp.k_list, vec![1, 2, 3]);
        assert_eq!(cfg.engine.nystrom_order, 40);
        let again = ConfigFile::parse(&toml::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ConfigFile::parse(
            "[experiment]\nensemble = \"gue\"\nn = 100\nreplicas = 1\ninterval = \"0:1\"\ncolour = 3\n"
        )
        .is_err());
        assert!(ConfigFile::parse("[plots]\nx = 1\n").is_err());
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::new(Ensemble::Gue, 100, 5, "0.5:1".parse().unwrap());
        assert!(c.validate().is_ok());
        c.n = 10;
        assert!(c.validate().is_err());
        c.n = 100;
        c.interval = "1.5:2.5".parse().unwrap();
        assert!(matches!(c.validate(), Err(LabError::Config(_))));
    }
}
