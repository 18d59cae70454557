use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentId {
    Drift,
    TmLaw,
    CmLimit,
    TailExponents,
    FluctuationScaling,
    HitZero,
    OneJump,
    InterfaceLength,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 8] = [
        ExperimentId::Drift,
        ExperimentId::TmLaw,
        ExperimentId::CmLimit,
        ExperimentId::TailExponents,
        ExperimentId::FluctuationScaling,
        ExperimentId::HitZero,
        ExperimentId::OneJump,
        ExperimentId::InterfaceLength,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::Drift => "drift",
            ExperimentId::TmLaw => "tm_law",
            ExperimentId::CmLimit => "cm_limit",
            ExperimentId::TailExponents => "tail_exponents",
            ExperimentId::FluctuationScaling => "fluctuation_scaling",
            ExperimentId::HitZero => "hit_zero",
            ExperimentId::OneJump => "one_jump",
            ExperimentId::InterfaceLength => "interface_length",
        }
    }

    /// Whether the experiment draws random numbers (and so needs a seed).
    pub fn randomized(self) -> bool {
        !matches!(self, ExperimentId::CmLimit | ExperimentId::TailExponents)
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        ExperimentId::ALL
            .into_iter()
            .find(|e| e.name() == key)
            .ok_or_else(|| Error::Invalid(format!("unknown experiment {s:?}")))
    }
}

/// Parameters of one experiment. Every field is optional; unset fields take
/// the experiment's defaults. Read from a flat `key = value` file (TOML
/// syntax, no tables).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<ExperimentId>,
    pub seed: Option<u64>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub m: Option<u64>,
    pub eps: Option<f64>,
    pub n_paths: Option<u64>,
    pub n_steps: Option<u64>,
    pub k_lo: Option<u64>,
    pub k_hi: Option<u64>,
    /// Smallest m used in the c_m extrapolation fit.
    pub fit_lo: Option<u64>,
    pub x_grid: Option<Vec<f64>>,
    pub m_grid: Option<Vec<u64>>,
    pub lambdas: Option<Vec<f64>>,
    /// Path lengths (fluctuation scaling) or face counts (interface length).
    pub n_grid: Option<Vec<u64>>,
    pub t_max: Option<f64>,
    pub tolerance: Option<f64>,
    pub guard: Option<u64>,
    pub nu: Option<f64>,
    pub precision_bits: Option<usize>,
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $(if $src.$f.is_some() { $dst.$f = $src.$f.clone(); })*
    };
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Invalid(format!("config: {e}")))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Invalid(format!("config: {e}")))
    }

    /// Fields set in `o` replace those of `self`.
    pub fn overlaid(mut self, o: &ExperimentConfig) -> Self {
        overlay!(self, o, experiment, seed, p, q, m, eps, n_paths, n_steps, k_lo, k_hi, fit_lo, x_grid, m_grid, lambdas, n_grid, t_max, tolerance, guard, nu, precision_bits, out);
        self
    }

    /// The experiment together with its seed, when it needs one.
    pub fn identify(&self) -> Result<(ExperimentId, Option<u64>)> {
        let id = self.experiment.ok_or_else(|| Error::Invalid("no experiment named".into()))?;
        if id.randomized() && self.seed.is_none() {
            return Err(Error::Invalid(format!("experiment {id} needs a seed")));
        }
        Ok((id, self.seed))
    }
}

/// Resolved parameters, recorded in every result.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params(pub BTreeMap<String, f64>);

impl Params {
    pub fn set(&mut self, key: &str, v: f64) -> f64 {
        self.0.insert(key.into(), v);
        v
    }

    /// A positive integer parameter.
    pub fn count(&mut self, key: &str, v: Option<u64>, default: u64) -> Result<u64> {
        let v = v.unwrap_or(default);
        if v == 0 {
            return Err(Error::Invalid(format!("{key} must be positive")));
        }
        self.set(key, v as f64);
        Ok(v)
    }

    pub fn positive(&mut self, key: &str, v: Option<f64>, default: f64) -> Result<f64> {
        let v = v.unwrap_or(default);
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Invalid(format!("{key} must be positive, got {v}")));
        }
        Ok(self.set(key, v))
    }

    pub fn floats(&mut self, key: &str, v: &Option<Vec<f64>>, default: &[f64]) -> Result<Vec<f64>> {
        let v = v.clone().unwrap_or_else(|| default.to_vec());
        self.record_list(key, v.iter().copied())?;
        Ok(v)
    }

    pub fn ints(&mut self, key: &str, v: &Option<Vec<u64>>, default: &[u64]) -> Result<Vec<u64>> {
        let v = v.clone().unwrap_or_else(|| default.to_vec());
        self.record_list(key, v.iter().map(|&x| x as f64))?;
        Ok(v)
    }

    fn record_list(&mut self, key: &str, v: impl Iterator<Item = f64>) -> Result<()> {
        let mut n = 0;
        for (i, x) in v.enumerate() {
            self.set(&format!("{key}[{i}]"), x);
            n += 1;
        }
        if n == 0 {
            return Err(Error::Invalid(format!("{key} is empty")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overlay_and_names() {
        let c = ExperimentConfig::from_toml_str("experiment = \"tm_law\"\nseed = 3\np = 500\nx_grid = [0.5, 1.0]\n").unwrap();
        assert_eq!(c.experiment, Some(ExperimentId::TmLaw));
        assert_eq!(c.x_grid.as_deref(), Some(&[0.5, 1.0][..]));
        let flags = ExperimentConfig { p: Some(800), ..Default::default() };
        let merged = c.clone().overlaid(&flags);
        assert_eq!((merged.p, merged.seed), (Some(800), Some(3)));
        assert_eq!(ExperimentConfig::from_toml_str(&merged.to_toml_string().unwrap()).unwrap(), merged);
        assert!(ExperimentConfig::from_toml_str("bogus = 1").is_err());
        for id in ExperimentId::ALL {
            assert_eq!(id.name().parse::<ExperimentId>().unwrap(), id);
        }
        assert_eq!("hit-zero".parse::<ExperimentId>().unwrap(), ExperimentId::HitZero);
        let no_seed = ExperimentConfig { experiment: Some(ExperimentId::Drift), ..Default::default() };
        assert!(no_seed.identify().is_err());
    }

    #[test]
    fn params_validate() {
        let mut p = Params::default();
        assert!(p.count("n_paths", Some(0), 5).is_err());
        assert_eq!(p.count("n_paths", None, 5).unwrap(), 5);
        assert!(p.positive("eps", Some(-1.0), 0.5).is_err());
        assert!(p.floats("x", &Some(vec![]), &[1.0]).is_err());
        assert_eq!(p.0["n_paths"], 5.0);
    }
}
