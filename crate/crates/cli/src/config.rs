use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use wgn_core::geometry::{Cone, Weight};
use wgn_core::{derive_params, Params};

fn default_resolution() -> usize {
    64
}

fn default_samples() -> usize {
    10_000
}

fn default_lambdas() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}

fn default_random_functions() -> usize {
    200
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum Suite {
    Gn,
    LogSobolev,
    FaberKrahn,
    Isoperimetric,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeSpec {
    OrthantMask(Vec<bool>),
    Halfspaces(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Monomial {
        exponents: Vec<f64>,
        #[serde(default = "one")]
        coefficient: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionSpec {
    pub c0: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// `|ratio − 1|` at extremals.
    pub equality: f64,
    /// Allowed excess of `ratio` over 1 for non-extremal functions.
    pub direction: f64,
    pub log_sobolev: f64,
    pub faber_krahn: f64,
    pub isoperimetric: f64,
    pub integrals: f64,
    pub rescaling: f64,
    pub duality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            equality: 1e-5,
            direction: 1e-6,
            log_sobolev: 1e-6,
            faber_krahn: 1e-6,
            isoperimetric: 1e-8,
            integrals: 1e-6,
            rescaling: 1e-8,
            duality: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub gammas: Vec<f64>,
    pub lambdas: Vec<f64>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            gammas: vec![0.7, 0.75, 0.8, 0.85, 0.9, 0.95],
            lambdas: default_lambdas(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub report: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub p: f64,
    pub gamma: f64,
    pub cone: ConeSpec,
    /// One weight is reused for all three slots; two leave ω₃ absent.
    pub weights: Vec<WeightSpec>,
    #[serde(default = "default_suite")]
    pub suite: Suite,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub condition: Option<ConditionSpec>,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<f64>,
    #[serde(default = "default_random_functions")]
    pub random_functions: usize,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_suite() -> Suite {
    Suite::All
}

/// Flag values that win over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub gamma: Option<f64>,
    pub p: Option<f64>,
    pub resolution: Option<usize>,
    pub seed: Option<u64>,
    pub suite: Option<Suite>,
    pub out: Option<String>,
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let mut config: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        config.apply(overrides);
        config.validate()?;
        Ok(config)
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.gamma {
            self.gamma = v;
        }
        if let Some(v) = o.p {
            self.p = v;
        }
        if let Some(v) = o.resolution {
            self.resolution = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.suite {
            self.suite = v;
        }
        if let Some(v) = &o.out {
            self.outputs.report = Some(v.clone());
        }
    }

    fn validate(&self) -> Result<()> {
        if self.weights.is_empty() || self.weights.len() > 3 {
            bail!("weights: expected 1 to 3 entries, got {}", self.weights.len());
        }
        if self.resolution < 4 {
            bail!("resolution must be at least 4 (got {})", self.resolution);
        }
        if self.samples == 0 {
            bail!("samples must be positive");
        }
        if self.lambdas.iter().any(|l| !(*l > 0.0)) {
            bail!("lambdas must be positive");
        }
        Ok(())
    }

    /// Compact JSON with every default spelled out; parsing it yields the
    /// same config.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn params(&self) -> wgn_core::Result<Params> {
        derive_params(self.n, self.p, self.gamma)
    }

    pub fn params_at(&self, gamma: f64) -> wgn_core::Result<Params> {
        derive_params(self.n, self.p, gamma)
    }

    pub fn cone(&self) -> wgn_core::Result<Cone> {
        match &self.cone {
            ConeSpec::OrthantMask(mask) => {
                if mask.len() != self.n {
                    return Err(wgn_core::Error::Config(format!(
                        "orthant_mask has {} entries for n = {}",
                        mask.len(),
                        self.n
                    )));
                }
                Cone::orthant_mask(mask.clone())
            }
            ConeSpec::Halfspaces(normals) => Cone::halfspaces(self.n, normals.clone()),
        }
    }

    pub fn weights(&self) -> wgn_core::Result<Vec<Weight>> {
        self.weights
            .iter()
            .map(|spec| match spec {
                WeightSpec::Monomial { exponents, coefficient } => {
                    if exponents.len() != self.n {
                        return Err(wgn_core::Error::Config(format!(
                            "monomial has {} exponents for n = {}",
                            exponents.len(),
                            self.n
                        )));
                    }
                    Weight::scaled_monomial(exponents.clone(), *coefficient)
                }
            })
            .collect()
    }

    /// `(ω₁, ω₂, ω₃)`; a single weight fills every slot.
    pub fn triplet(&self) -> wgn_core::Result<(Weight, Weight, Option<Weight>)> {
        let w = self.weights()?;
        Ok(match w.len() {
            1 => (w[0].clone(), w[0].clone(), Some(w[0].clone())),
            2 => (w[0].clone(), w[1].clone(), None),
            _ => (w[0].clone(), w[1].clone(), Some(w[2].clone())),
        })
    }

    pub fn monomial_exponents(&self) -> Vec<Vec<f64>> {
        self.weights
            .iter()
            .map(|WeightSpec::Monomial { exponents, .. }| exponents.clone())
            .collect()
    }

    /// True when every slot holds the same weight.
    pub fn equal_weights(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] == w[1]) && self.weights.len() != 2
    }
}
