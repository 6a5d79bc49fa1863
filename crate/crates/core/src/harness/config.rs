use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::fixtures::Fixture;
use super::lookup;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::flows::{FlowSystem, PointSpec, SystemSpec};

pub const SCHEMA_VERSION: u32 = 1;

/// Batch configuration: systems, theorem bindings, grids and caps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default)]
    pub systems: Vec<SystemEntry>,
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
    /// Also write a markdown rendering next to the JSON report.
    #[serde(default = "yes")]
    pub markdown: bool,
}

fn yes() -> bool {
    true
}

/// A system defined in the config. Checks may also name registry systems
/// such as `odometer` or `mcmahon(8)` without defining them here.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemEntry {
    pub id: String,
    #[serde(flatten)]
    pub spec: SystemSpec,
    #[serde(default)]
    pub description: String,
    /// Properties declared for the system; a certified `Fails` of any of them is a violation.
    #[serde(default)]
    pub expect: BTreeSet<String>,
    /// Hypotheses recorded in reports rather than computed.
    #[serde(default)]
    pub assertions: Vec<String>,
    /// Sample points; the system's defaults are used when empty.
    #[serde(default)]
    pub points: Vec<PointEntry>,
}

/// A point as a short form (`"single-one(3)"`) or a full object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointEntry {
    Short(String),
    Full(PointSpec),
}

impl PointEntry {
    pub fn spec(&self) -> Result<PointSpec> {
        match self {
            PointEntry::Short(s) => PointSpec::parse(s),
            PointEntry::Full(p) => Ok(p.clone()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PointEntry::Short(s) => s.clone(),
            PointEntry::Full(p) => serde_json::to_string(p).expect("point specs serialize"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    pub theorem: String,
    /// Systems to run on; the registry defaults when empty.
    #[serde(default)]
    pub systems: Vec<String>,
    #[serde(default)]
    pub grid: Option<Grid>,
}

/// Depths and horizons to evaluate; empty lists take the check's defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    #[serde(default)]
    pub depths: Vec<usize>,
    #[serde(default)]
    pub horizons: Vec<usize>,
}

impl Grid {
    pub(crate) fn or_defaults(mut self, depths: &[usize], horizons: &[usize]) -> Grid {
        if self.depths.is_empty() {
            self.depths = depths.to_vec();
        }
        if self.horizons.is_empty() {
            self.horizons = horizons.to_vec();
        }
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.depths.iter().any(|&d| d == 0 || d > 16) {
            return Err(Error::Invalid("grid depths must lie in 1..=16".into()));
        }
        if self.horizons.iter().any(|&h| h == 0 || h > 4096) {
            return Err(Error::Invalid("grid horizons must lie in 1..=4096".into()));
        }
        Ok(())
    }

    pub fn max_horizon(&self) -> usize {
        self.horizons.iter().copied().max().unwrap_or(1)
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config> {
        let config: Config = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn empty() -> Config {
        Config {
            schema_version: SCHEMA_VERSION,
            seed: 0,
            caps: Caps::default(),
            systems: Vec::new(),
            checks: Vec::new(),
            markdown: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Invalid(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let c = &self.caps;
        if c.ball_elements == 0 || c.window == 0 || c.patterns == 0 || c.word_length == 0 {
            return Err(Error::Invalid("caps must be positive".into()));
        }
        let mut ids = BTreeSet::new();
        for s in &self.systems {
            if !ids.insert(s.id.as_str()) {
                return Err(Error::Invalid(format!("system id {} defined twice", s.id)));
            }
        }
        for entry in &self.checks {
            lookup(&entry.theorem)?;
            for name in &entry.systems {
                if !ids.contains(name.as_str()) {
                    FlowSystem::named(name)?;
                }
            }
            if let Some(g) = &entry.grid {
                g.validate()?;
            }
        }
        Ok(())
    }

    /// Resolve a system id: config definitions first, then the registry.
    pub fn fixture(&self, name: &str) -> Result<Fixture> {
        match self.systems.iter().find(|s| s.id == name) {
            Some(entry) => Fixture::from_entry(entry),
            None => Fixture::named(name),
        }
    }
}
