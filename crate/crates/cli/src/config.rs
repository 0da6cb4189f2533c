//! TOML run configuration and flag merging.
//!
//! Each subcommand's flags are all optional. The resolved options are the
//! config file's `[<command>]` table overlaid with the flags that were given,
//! so flags win over the file and the file wins over built-in defaults.

use std::path::Path;

use anyhow::{bail, Context, Result};
use qcorr::Tolerances;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Contents of a `--config` file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Fallback seed for every command.
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub tolerances: toml::Table,
    #[serde(default)]
    pub measure: toml::Table,
    #[serde(default)]
    pub sweep: toml::Table,
    #[serde(default)]
    pub bounds: toml::Table,
    #[serde(default)]
    pub capacity: toml::Table,
    #[serde(default)]
    pub recover: toml::Table,
    #[serde(default)]
    pub fuzz: toml::Table,
    #[serde(default)]
    pub gen: toml::Table,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn table(&self, command: &str) -> &toml::Table {
        match command {
            "measure" => &self.measure,
            "sweep" => &self.sweep,
            "bounds" => &self.bounds,
            "capacity" => &self.capacity,
            "recover" => &self.recover,
            "fuzz" => &self.fuzz,
            _ => &self.gen,
        }
    }

    /// Defaults, then `[tolerances]`, then `--tol key=value` flags.
    pub fn tolerances(&self, overrides: &[String]) -> Result<Tolerances> {
        let mut map = match serde_json::to_value(Tolerances::default())? {
            Value::Object(m) => m,
            _ => unreachable!("tolerances serialize to an object"),
        };
        let mut set = |key: &str, value: f64| -> Result<()> {
            match map.get_mut(key) {
                Some(slot) => *slot = value.into(),
                None => bail!("unknown tolerance `{key}`"),
            }
            Ok(())
        };
        for (k, v) in &self.tolerances {
            let value = v
                .as_float()
                .or_else(|| v.as_integer().map(|i| i as f64))
                .with_context(|| format!("tolerance `{k}` is not a number"))?;
            set(k, value)?;
        }
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .with_context(|| format!("expected key=value, got `{o}`"))?;
            set(
                k.trim(),
                v.trim()
                    .parse()
                    .with_context(|| format!("tolerance `{k}`"))?,
            )?;
        }
        Ok(serde_json::from_value(Value::Object(map))?)
    }
}

fn strip_nulls(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m.into_iter().filter(|(_, v)| !v.is_null()).collect(),
        _ => Map::new(),
    }
}

/// Overlays the given flags on the command's config table (and the global seed).
pub fn resolve<A: Serialize + DeserializeOwned>(
    flags: &A,
    config: &RunConfig,
    command: &str,
) -> Result<A> {
    let mut merged = strip_nulls(serde_json::to_value(config.table(command))?);
    if let Some(seed) = config.seed {
        merged.entry("seed").or_insert(seed.into());
    }
    merged.extend(strip_nulls(serde_json::to_value(flags)?));
    serde_json::from_value(Value::Object(merged))
        .with_context(|| format!("invalid [{command}] options"))
}
