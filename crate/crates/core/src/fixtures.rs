//! Parameter sets stored as TOML.
//!
//! A set holds the jump weights, jump rates and `sigma`; the drift follows
//! from the rate through `psi(1) = r`. The two built-in sets are embedded,
//! and `HYPERLEV_FIXTURES` points the loader at another directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::HyperExpParams;

pub const FIXTURE_ENV: &str = "HYPERLEV_FIXTURES";

const SET1: &str = include_str!("../fixtures/set1.toml");
const SET2: &str = include_str!("../fixtures/set2.toml");

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ParameterSet {
    pub name: String,
    pub sigma: f64,
    pub pos_weights: Vec<f64>,
    pub pos_rates: Vec<f64>,
    pub neg_weights: Vec<f64>,
    pub neg_rates: Vec<f64>,
}

impl ParameterSet {
    pub fn parse(text: &str) -> Result<Self> {
        let set: Self = toml::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
        if set.pos_weights.len() != set.pos_rates.len() || set.neg_weights.len() != set.neg_rates.len() {
            return Err(Error::Fixture(format!(
                "{}: weights and rates differ in length",
                set.name
            )));
        }
        Ok(set)
    }

    /// Risk-neutral parameters at rate `r`, optionally with another `sigma`.
    pub fn params(&self, sigma: Option<f64>, r: f64) -> Result<HyperExpParams> {
        let zip = |w: &[f64], rho: &[f64]| w.iter().copied().zip(rho.iter().copied()).collect();
        HyperExpParams::risk_neutral(
            sigma.unwrap_or(self.sigma),
            zip(&self.pos_weights, &self.pos_rates),
            zip(&self.neg_weights, &self.neg_rates),
            r,
        )
    }
}

fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "1" | "set1" => Some(SET1),
        "2" | "set2" => Some(SET2),
        _ => None,
    }
}

fn canonical(name: &str) -> String {
    match name {
        "1" => "set1".into(),
        "2" => "set2".into(),
        other => other.into(),
    }
}

fn read(path: &Path) -> Result<ParameterSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
    ParameterSet::parse(&text)
}

/// Loads a set by name (`1`, `set1`, ...) or by path to a `.toml` file.
///
/// With `HYPERLEV_FIXTURES` set, names resolve to `<dir>/<name>.toml` there.
pub fn load_set(name: &str) -> Result<ParameterSet> {
    let path = Path::new(name);
    if path.extension().is_some_and(|e| e == "toml") {
        return read(path);
    }
    if let Ok(dir) = std::env::var(FIXTURE_ENV) {
        let file: PathBuf = Path::new(&dir).join(format!("{}.toml", canonical(name)));
        return read(&file);
    }
    let text = builtin(name).ok_or_else(|| Error::Fixture(format!("unknown parameter set {name:?}")))?;
    ParameterSet::parse(text)
}
