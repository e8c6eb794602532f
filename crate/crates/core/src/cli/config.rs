//! Experiment configurations. Every field has a default, so `{}` is a valid
//! config; unknown fields are rejected.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::limits::PassageFamily;
use crate::regime::MortalityRegime;

fn constant(c: f64) -> MortalityRegime {
    MortalityRegime::Constant { c }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub n: u64,
    pub regime: MortalityRegime,
    pub samples: usize,
    /// Censoring horizon; derived from the regime when absent.
    pub t_max: Option<u64>,
    pub seed: u64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            n: 100,
            regime: constant(0.3),
            samples: 10,
            t_max: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtinctConfig {
    pub n: u64,
    pub c: f64,
    /// CDF rows are reported for `t = 0..=t_end`.
    pub t_end: u64,
    pub samples: usize,
    pub t_max: Option<u64>,
    pub ratio_n: u64,
    pub ratio_c: f64,
    pub ratio_samples: usize,
    pub ratio_eps: f64,
    pub tolerance: f64,
    /// Family-wise confidence shared by all statistical rows.
    pub confidence: f64,
    pub seed: u64,
}

impl Default for ExtinctConfig {
    fn default() -> Self {
        ExtinctConfig {
            n: 20,
            c: 0.3,
            t_end: 60,
            samples: 100_000,
            t_max: None,
            ratio_n: 1_000_000,
            ratio_c: 0.1,
            ratio_samples: 10_000,
            ratio_eps: 0.1,
            tolerance: 1e-12,
            confidence: 0.99,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathConfig {
    pub n: u64,
    pub regime: MortalityRegime,
    pub samples: usize,
    pub joint_alpha: f64,
    pub joint_beta: f64,
    pub joint_sweep: Vec<u64>,
    pub tolerance: f64,
    pub confidence: f64,
    pub seed: u64,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig {
            n: 5,
            regime: constant(0.1),
            samples: 100_000,
            joint_alpha: 1.0,
            joint_beta: 4.0,
            joint_sweep: vec![10, 30, 100, 300, 1_000, 3_000, 10_000],
            tolerance: 1e-12,
            confidence: 0.99,
            seed: 0,
        }
    }
}

/// One scaled-limit experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitExperiment {
    pub family: PassageFamily,
    pub n: u64,
    pub k: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PassageConfig {
    pub k: Vec<u64>,
    pub c: Vec<f64>,
    /// pmf rows cover `j = 1..=pmf_terms`.
    pub pmf_terms: u64,
    /// Points `s` as fractions of the convergence boundary of the MGF.
    pub s_fractions: Vec<f64>,
    pub limits: Vec<LimitExperiment>,
    pub samples: usize,
    pub t_max: Option<u64>,
    pub tolerance: f64,
    /// Tolerance for MGF points at or beyond 99% of the boundary.
    pub edge_tolerance: f64,
    pub confidence: f64,
    pub seed: u64,
}

impl Default for PassageConfig {
    fn default() -> Self {
        PassageConfig {
            k: vec![1, 2, 3, 5, 10],
            c: vec![0.1, 0.3, 0.5],
            pmf_terms: 8,
            s_fractions: vec![-1.0, 0.0, 0.5, 0.99],
            limits: vec![
                LimitExperiment {
                    family: PassageFamily::InitialScaled {
                        a: 1.0,
                        gamma: 1.0,
                        lambda: 1.0,
                    },
                    n: 10_000,
                    k: vec![1, 3],
                },
                LimitExperiment {
                    family: PassageFamily::JointPower {
                        alpha: 1.0,
                        beta: 3.0,
                    },
                    n: 1_000,
                    k: vec![2],
                },
            ],
            samples: 20_000,
            t_max: None,
            tolerance: 1e-12,
            edge_tolerance: 1e-9,
            confidence: 0.99,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImplodeConfig {
    pub alpha: f64,
    /// Strictly increasing truncation levels `K`.
    pub truncations: Vec<u64>,
    pub runs: usize,
    pub bins: usize,
    /// Allowed deviation, in standard errors, of means and variances.
    pub sigmas: f64,
    pub seed: u64,
}

impl Default for ImplodeConfig {
    fn default() -> Self {
        ImplodeConfig {
            alpha: 1.0,
            truncations: vec![10, 100, 1_000, 10_000],
            runs: 100_000,
            bins: 50,
            sigmas: 3.0,
            seed: 0,
        }
    }
}

/// The aggregated suite. Sizes are kept small enough for a quick run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub extinct: ExtinctConfig,
    pub path: PathConfig,
    pub passage: PassageConfig,
    pub implode: ImplodeConfig,
    pub tolerance: Option<f64>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let mut passage = PassageConfig {
            samples: 10_000,
            ..PassageConfig::default()
        };
        for exp in &mut passage.limits {
            exp.k.truncate(1);
        }
        VerifyConfig {
            extinct: ExtinctConfig {
                samples: 20_000,
                ratio_samples: 5_000,
                confidence: 0.999,
                ..ExtinctConfig::default()
            },
            path: PathConfig {
                samples: 20_000,
                confidence: 0.999,
                ..PathConfig::default()
            },
            passage: PassageConfig {
                confidence: 0.999,
                ..passage
            },
            implode: ImplodeConfig {
                truncations: vec![10, 100, 1_000],
                runs: 20_000,
                sigmas: 4.0,
                ..ImplodeConfig::default()
            },
            tolerance: None,
            seed: 0,
        }
    }
}

/// Parses a config, reporting the offending field on failure.
pub fn parse_config<T: DeserializeOwned>(json: &str) -> Result<T> {
    serde_json::from_str(json).map_err(|e| Error::Domain(format!("invalid config: {e}")))
}

/// SHA-256 of the config's canonical JSON (object keys sorted).
pub fn config_hash<T: Serialize>(config: &T) -> (String, serde_json::Value) {
    let value = serde_json::to_value(config).expect("configs are plain data");
    let canonical = serde_json::to_string(&value).expect("values serialize");
    let digest = Sha256::digest(canonical.as_bytes());
    let hex = digest.iter().map(|b| format!("{b:02x}")).collect();
    (hex, value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let c: SimulateConfig = parse_config("{}").unwrap();
        assert_eq!(c, SimulateConfig::default());
        let v: VerifyConfig = parse_config("{}").unwrap();
        assert_eq!(v, VerifyConfig::default());
    }

    #[test]
    fn unknown_fields_are_named() {
        let err = parse_config::<SimulateConfig>(r#"{"n": 3, "sampels": 2}"#).unwrap_err();
        assert!(err.to_string().contains("sampels"));
        let err =
            parse_config::<SimulateConfig>(r#"{"regime": {"type": "constant", "cc": 0.3}}"#).unwrap_err();
        assert!(err.to_string().contains("cc"), "{err}");
    }

    #[test]
    fn hash_ignores_key_order() {
        let a: ExtinctConfig = parse_config(r#"{"n": 7, "c": 0.2}"#).unwrap();
        let b: ExtinctConfig = parse_config(r#"{"c": 0.2, "n": 7}"#).unwrap();
        assert_eq!(config_hash(&a).0, config_hash(&b).0);
        let c = ExtinctConfig { n: 8, ..a };
        assert_ne!(config_hash(&c).0, config_hash(&b).0);
        assert_eq!(config_hash(&c).0.len(), 64);
    }

    #[test]
    fn config_round_trips() {
        let p = PassageConfig::default();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(parse_config::<PassageConfig>(&json).unwrap(), p);
    }
}
