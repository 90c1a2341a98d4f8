//! Flat `key=value` experiment configuration.
//!
//! One pair per line, `#` comments; unknown keys are errors. Command-line
//! flags (`--game`, `--seed`, `--jobs`) override the file.

use std::str::FromStr;

use soog::games::spec::parse_kv;
use soog::solver::CfrVariant;
use soog::{Result, SoogError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algorithm {
    /// Raw observation counts, no abstraction.
    None,
    Li,
    Paoi,
    Kroi,
    Froi,
    Ehs,
    Paaemd,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::None => "none",
            Algorithm::Li => "li",
            Algorithm::Paoi => "paoi",
            Algorithm::Kroi => "kroi",
            Algorithm::Froi => "froi",
            Algorithm::Ehs => "ehs",
            Algorithm::Paaemd => "paaemd",
        }
    }
}

impl FromStr for Algorithm {
    type Err = SoogError;

    fn from_str(s: &str) -> Result<Algorithm> {
        match s {
            "none" => Ok(Algorithm::None),
            "li" => Ok(Algorithm::Li),
            "paoi" => Ok(Algorithm::Paoi),
            "kroi" => Ok(Algorithm::Kroi),
            "froi" => Ok(Algorithm::Froi),
            "ehs" => Ok(Algorithm::Ehs),
            "paaemd" => Ok(Algorithm::Paaemd),
            _ => Err(SoogError::Parameter(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Scenario {
    Asymmetric,
    Symmetric,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Asymmetric => "asymmetric",
            Scenario::Symmetric => "symmetric",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub game: Option<String>,
    pub algorithm: Algorithm,
    pub scenario: Scenario,
    pub variant: CfrVariant,
    pub iterations: u64,
    /// Strictly increasing; defaults to `[iterations]`.
    pub checkpoints: Vec<u64>,
    pub seed: u64,
    pub jobs: usize,
    /// Per-phase recall depths (k-ROI only).
    pub k: Option<Vec<usize>>,
    /// Per-phase bucket counts, `none` keeping a phase lossless (EHS and
    /// PAAEMD only).
    pub buckets: Option<Vec<Option<usize>>>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            game: None,
            algorithm: Algorithm::Li,
            scenario: Scenario::Symmetric,
            variant: CfrVariant::Plus,
            iterations: 1000,
            checkpoints: Vec::new(),
            seed: 0,
            jobs: 1,
            k: None,
            buckets: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_text(text: &str) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        for (key, value) in parse_kv(text)? {
            match key.as_str() {
                "game" => cfg.game = Some(value),
                "algorithm" => cfg.algorithm = value.parse()?,
                "scenario" => {
                    cfg.scenario = match value.as_str() {
                        "asymmetric" => Scenario::Asymmetric,
                        "symmetric" => Scenario::Symmetric,
                        _ => {
                            return Err(SoogError::Parameter(format!(
                                "unknown scenario {value:?}"
                            )))
                        }
                    }
                }
                "variant" => {
                    cfg.variant = match value.as_str() {
                        "vanilla" => CfrVariant::Vanilla,
                        "plus" => CfrVariant::Plus,
                        _ => {
                            return Err(SoogError::Parameter(format!(
                                "unknown CFR variant {value:?}"
                            )))
                        }
                    }
                }
                "iterations" => cfg.iterations = num(&key, &value)?,
                "checkpoints" => {
                    cfg.checkpoints = value
                        .split(',')
                        .map(|v| num(&key, v.trim()))
                        .collect::<Result<_>>()?
                }
                "seed" => cfg.seed = num(&key, &value)?,
                "jobs" => cfg.jobs = num(&key, &value)? as usize,
                "k" => {
                    cfg.k = Some(
                        value
                            .split(',')
                            .map(|v| num(&key, v.trim()).map(|n| n as usize))
                            .collect::<Result<_>>()?,
                    )
                }
                "buckets" => {
                    cfg.buckets = Some(
                        value
                            .split(',')
                            .map(|v| {
                                let v = v.trim();
                                if v == "none" {
                                    Ok(None)
                                } else {
                                    num(&key, v).map(|n| Some(n as usize))
                                }
                            })
                            .collect::<Result<_>>()?,
                    )
                }
                _ => {
                    return Err(SoogError::Parameter(format!(
                        "unknown config key {key:?}"
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(SoogError::Parameter("iterations must be >= 1".into()));
        }
        if self.jobs == 0 {
            return Err(SoogError::Parameter("jobs must be >= 1".into()));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SoogError::Parameter(
                "checkpoints must be strictly increasing".into(),
            ));
        }
        if let Some(&last) = self.checkpoints.last() {
            if last > self.iterations {
                return Err(SoogError::Parameter(
                    "checkpoints must not exceed iterations".into(),
                ));
            }
        }
        Ok(())
    }

    /// The checkpoint schedule, defaulting to a single final checkpoint.
    pub fn schedule(&self) -> Vec<u64> {
        if self.checkpoints.is_empty() {
            vec![self.iterations]
        } else {
            self.checkpoints.clone()
        }
    }
}

fn num(key: &str, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| SoogError::Parameter(format!("key {key:?}: bad number {value:?}")))
}
