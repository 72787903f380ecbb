//! Run configuration files.
//!
//! A config is a TOML document. Probability tables are flat row-major lists
//! whose shapes follow from the declared alphabet sizes; the last variable of
//! a table varies fastest.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use vmcascade_core::broadcast::RateWeights;
use vmcascade_core::model::{Budget, BroadcastModel, CascadeModel, DistortionTable, SwitchingModel};
use vmcascade_core::SearchConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Cascade,
    BroadcastLossless,
    Switching,
    Cr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// Binary symmetric `(X, W)`, actions 1 and 2 at unit cost.
    BscExample,
    /// S-channel `(X, W)`, action 1 at unit cost, action 2 free.
    SChannelExample,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub nz: Option<usize>,
    pub nw: Option<usize>,
    /// Cascade source `p(x, y)`.
    pub pxy: Option<Vec<f64>>,
    /// Broadcast source `p(x)`.
    pub px: Option<Vec<f64>>,
    /// Switching source `p(x, w)`.
    pub pxw: Option<Vec<f64>>,
    /// Cascade: `p(z | a, y)`; broadcast: `p(y, z | a, x)`.
    pub side_info: Option<Vec<f64>>,
    pub cost: Option<Vec<f64>>,
    pub lambdas: Option<Vec<f64>>,
    /// Distortion matrices `d[x][xhat]`; Hamming when absent.
    pub d1: Option<Vec<f64>>,
    pub d2: Option<Vec<f64>>,
    pub nxhat1: Option<usize>,
    pub nxhat2: Option<usize>,
    #[serde(default)]
    pub degraded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    #[serde(default = "infinite")]
    pub gamma: f64,
    #[serde(default = "infinite")]
    pub d1: f64,
    #[serde(default = "infinite")]
    pub d2: f64,
}

fn infinite() -> f64 {
    f64::INFINITY
}

impl Default for BudgetSection {
    fn default() -> Self {
        BudgetSection {
            gamma: f64::INFINITY,
            d1: f64::INFINITY,
            d2: f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub eta: Option<Vec<f64>>,
    pub q: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub beta: Option<Vec<f64>>,
    pub delta: Option<Vec<f64>>,
    pub rb: Option<f64>,
    pub gamma: Option<Vec<f64>>,
    pub steps: Option<usize>,
    pub refine_steps: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSection {
    /// Action channels: `p(a | x, y)` for the cascade, `p(a | x)` otherwise.
    #[serde(default)]
    pub actions: Vec<Vec<f64>>,
    /// Cascade test channels `p(xhat1, a, u | x, y)`, decoded optimally.
    #[serde(default)]
    pub channels: Vec<Vec<f64>>,
    pub aux: Option<usize>,
    /// Lossy reconstructions `p(xhat1, xhat2 | x, a)`, paired with `actions`.
    #[serde(default)]
    pub recons: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub starts: Option<usize>,
    pub sweeps: Option<usize>,
    pub warm_sweeps: Option<usize>,
    pub aux_size: Option<usize>,
    pub quantization: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSection {
    pub r1: f64,
    pub r2: f64,
    pub rb: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub topology: Option<Topology>,
    pub builtin: Option<Builtin>,
    #[serde(default)]
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub model: Option<ModelSection>,
    #[serde(default)]
    pub budget: BudgetSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub eval: EvalSection,
    #[serde(default)]
    pub search: SearchSection,
    #[serde(default)]
    pub weights: Vec<WeightsSection>,
}

/// A configuration error, reported with exit status 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

macro_rules! invalid {
    ($($t:tt)*) => { return Err(Invalid(format!($($t)*)).into()) };
}

/// The model a config resolves to.
#[derive(Clone, Debug)]
pub enum Model {
    Cascade(CascadeModel),
    Broadcast(BroadcastModel),
    Switching(SwitchingModel),
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Invalid(format!("config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    fn check(&self) -> Result<()> {
        if let Some(b) = self.builtin {
            match self.topology {
                None | Some(Topology::Switching) => {}
                Some(t) => invalid!("built-in {b:?} is a switching model, not {t:?}"),
            }
            if self.model.is_some() {
                invalid!("built-in models take no [model] table overrides");
            }
        } else if self.topology.is_none() {
            invalid!("config needs a topology or a built-in model");
        }
        Ok(())
    }

    pub fn topology(&self) -> Topology {
        self.topology.unwrap_or(Topology::Switching)
    }

    /// Short SHA-256 digest of the resolved config.
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn budget(&self) -> Result<Budget> {
        let b = &self.budget;
        Budget::new(b.gamma, b.d1, b.d2).map_err(|e| Invalid(format!("budget: {e}")).into())
    }

    pub fn search(&self) -> SearchConfig {
        let s = &self.search;
        let d = SearchConfig::default();
        SearchConfig {
            starts: s.starts.unwrap_or(d.starts),
            sweeps: s.sweeps.unwrap_or(d.sweeps),
            warm_sweeps: s.warm_sweeps.unwrap_or(d.warm_sweeps),
            seed: self.seed,
            aux_size: s.aux_size,
            quantization: s.quantization,
        }
    }

    pub fn weights(&self) -> Result<Vec<RateWeights>> {
        if self.weights.is_empty() {
            return Ok(vec![RateWeights::new(1.0, 1.0, 1.0)?]);
        }
        self.weights
            .iter()
            .map(|w| RateWeights::new(w.r1, w.r2, w.rb).map_err(|e| Invalid(format!("weights: {e}")).into()))
            .collect()
    }

    pub fn etas(&self) -> Vec<f64> {
        self.sweep.eta.clone().unwrap_or_else(|| vec![1.0])
    }

    pub fn deltas(&self) -> Vec<f64> {
        self.sweep.delta.clone().unwrap_or_else(|| vec![0.6])
    }

    /// The model for a non-built-in config, or the built-in at `delta`.
    pub fn model(&self, delta: f64) -> Result<Model> {
        if let Some(b) = self.builtin {
            let m = match b {
                Builtin::BscExample => SwitchingModel::bsc(delta),
                Builtin::SChannelExample => SwitchingModel::s_channel(delta),
            };
            return Ok(Model::Switching(m.map_err(|e| Invalid(format!("built-in: {e}")))?));
        }
        let Some(m) = &self.model else {
            invalid!("config has no [model] table");
        };
        let need = |v: Option<usize>, name: &str| -> Result<usize> {
            v.ok_or_else(|| Invalid(format!("[model] needs `{name}`")).into())
        };
        let table = |v: &Option<Vec<f64>>, name: &str| -> Result<Vec<f64>> {
            v.clone().ok_or_else(|| Invalid(format!("[model] needs `{name}`")).into())
        };
        let wrap = |e: vmcascade_core::Error| -> anyhow::Error { Invalid(format!("model: {e}")).into() };
        let distortion = |d: &Option<Vec<f64>>, nx: usize, nh: Option<usize>| -> Result<DistortionTable> {
            match d {
                None => Ok(DistortionTable::hamming(nx)),
                Some(v) => {
                    let nh = nh.unwrap_or(nx);
                    DistortionTable::new(nx, nh, v.clone()).map_err(wrap)
                }
            }
        };
        Ok(match self.topology() {
            Topology::Cascade => {
                let (nx, ny, nz) = (need(m.nx, "nx")?, need(m.ny, "ny")?, need(m.nz, "nz")?);
                Model::Cascade(
                    CascadeModel::from_tables(
                        table(&m.pxy, "pxy")?,
                        (nx, ny, nz),
                        table(&m.side_info, "side_info")?,
                        &table(&m.cost, "cost")?,
                        distortion(&m.d1, nx, m.nxhat1)?,
                        distortion(&m.d2, nx, m.nxhat2)?,
                    )
                    .map_err(wrap)?,
                )
            }
            Topology::BroadcastLossless | Topology::Cr => {
                let px = table(&m.px, "px")?;
                let nx = px.len();
                Model::Broadcast(
                    BroadcastModel::from_tables(
                        px,
                        (need(m.ny, "ny")?, need(m.nz, "nz")?),
                        table(&m.side_info, "side_info")?,
                        &table(&m.cost, "cost")?,
                        distortion(&m.d1, nx, m.nxhat1)?,
                        distortion(&m.d2, nx, m.nxhat2)?,
                        m.degraded,
                    )
                    .map_err(wrap)?,
                )
            }
            Topology::Switching => {
                let lambdas = table(&m.lambdas, "lambdas")?;
                let Ok(lambdas) = <[f64; 4]>::try_from(lambdas) else {
                    invalid!("`lambdas` needs four entries");
                };
                Model::Switching(
                    SwitchingModel::from_tables(
                        table(&m.pxw, "pxw")?,
                        (need(m.nx, "nx")?, need(m.nw, "nw")?),
                        lambdas,
                    )
                    .map_err(wrap)?,
                )
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_reject_table_overrides() {
        let err = RunConfig::parse("builtin = \"bsc-example\"\n[model]\npxw = [0.5, 0.5]\n").unwrap_err();
        assert!(err.downcast_ref::<Invalid>().is_some());
        assert!(RunConfig::parse("builtin = \"bsc-example\"\ntopology = \"cascade\"\n").is_err());
        assert!(RunConfig::parse("seed = 1\n").is_err());
        assert!(RunConfig::parse("builtin = \"s-channel-example\"\n").is_ok());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::parse("builtin = \"bsc-example\"\n").unwrap();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.seed = 3;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn forbidden_costs_parse_as_infinity() {
        let cfg = RunConfig::parse(
            "topology = \"switching\"\n[model]\nnx = 2\nnw = 2\npxw = [0.45, 0.05, 0.05, 0.45]\nlambdas = [inf, 1, 1, inf]\n",
        )
        .unwrap();
        let Model::Switching(m) = cfg.model(0.0).unwrap() else { panic!() };
        assert!(m.lambdas().is_forbidden(0));
    }
}
