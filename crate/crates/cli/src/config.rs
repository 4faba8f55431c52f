//! Experiment configuration: one TOML schema shared by every command.

use std::fmt;
use std::path::{Path, PathBuf};

use firebreak_core::graph::{ball, parse_vertices, GraphProvider, VertexId, DEFAULT_VERTEX_CAP};
use firebreak_core::strategies::{
    CutVertexStrategy, ExhaustiveConfig, GreedyFrontier, GreedyWeight, NullStrategy, RandomLegal,
    Scripted, SphereBarricade, Strategy,
};
use firebreak_core::{BudgetSchedule, GraphSpec};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const DEFAULT_HORIZON: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub graph: GraphSpec,
    #[serde(default)]
    pub fire: FireSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<BudgetSchedule>,
    #[serde(default)]
    pub strategy: StrategyConfig,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify: Option<CertifyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub containment: Vec<ContainmentRun>,
    /// Where files go. Not part of the config hash.
    #[serde(default, skip_serializing)]
    pub output: OutputConfig,
}

fn default_horizon() -> usize {
    DEFAULT_HORIZON
}

/// The initial fire: `"ball(r)"` around the basepoint, or explicit ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FireSpec {
    Ball(usize),
    Vertices(Vec<String>),
}

impl Default for FireSpec {
    fn default() -> Self {
        FireSpec::Ball(0)
    }
}

impl fmt::Display for FireSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FireSpec::Ball(r) => write!(f, "ball({r})"),
            FireSpec::Vertices(v) => write!(f, "{{{}}}", v.join("; ")),
        }
    }
}

impl FireSpec {
    fn parse(text: &str) -> Result<Self, String> {
        text.trim()
            .strip_prefix("ball(")
            .and_then(|rest| rest.strip_suffix(')'))
            .and_then(|r| r.trim().parse().ok())
            .map(FireSpec::Ball)
            .ok_or_else(|| format!("expected `ball(r)` or a list of vertex ids, found `{text}`"))
    }

    pub fn resolve(&self, g: &dyn GraphProvider, cap: usize) -> Result<Vec<VertexId>, CliError> {
        match self {
            FireSpec::Ball(r) => {
                let b =
                    ball(g, &[g.basepoint()], *r, cap).map_err(|e| CliError::graph("fire", e))?;
                Ok(b.vertices.into_iter().map(|(v, _)| v).collect())
            }
            FireSpec::Vertices(ids) => {
                if ids.is_empty() {
                    return Err(CliError::config("fire", "the initial fire is empty"));
                }
                parse_vertices(g, ids).map_err(|e| CliError::graph("fire", e))
            }
        }
    }
}

impl Serialize for FireSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FireSpec::Ball(r) => s.serialize_str(&format!("ball({r})")),
            FireSpec::Vertices(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for FireSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            List(Vec<String>),
        }
        match Raw::deserialize(d)
            .map_err(|_| de::Error::custom("expected `ball(r)` or a list of vertex ids"))?
        {
            Raw::Text(t) => FireSpec::parse(&t).map_err(de::Error::custom),
            Raw::List(v) => Ok(FireSpec::Vertices(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StrategyConfig {
    Null,
    GreedyFrontier {
        #[serde(default)]
        weight: GreedyWeight,
    },
    SphereBarricade {
        #[serde(default = "default_r_max")]
        r_max: usize,
    },
    CutVertex,
    RandomLegal {
        /// Defaults to the experiment seed.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// `turns[n - 1]` is the set protected at turn `n`.
    Scripted {
        turns: Vec<Vec<String>>,
    },
}

fn default_r_max() -> usize {
    SphereBarricade::DEFAULT_MAX_RADIUS
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig::GreedyFrontier {
            weight: GreedyWeight::default(),
        }
    }
}

impl StrategyConfig {
    pub fn build(
        &self,
        g: &dyn GraphProvider,
        x0: &[VertexId],
        schedule: BudgetSchedule,
        seed: u64,
        cap: usize,
    ) -> Result<Box<dyn Strategy>, CliError> {
        Ok(match self {
            StrategyConfig::Null => Box::new(NullStrategy),
            StrategyConfig::GreedyFrontier { weight } => Box::new(GreedyFrontier::new(*weight)),
            StrategyConfig::SphereBarricade { r_max } => Box::new(
                SphereBarricade::new(g, x0, schedule, *r_max, cap).map_err(CliError::from)?,
            ),
            StrategyConfig::CutVertex => Box::new(CutVertexStrategy::new(g)?),
            StrategyConfig::RandomLegal { seed: s } => {
                Box::new(RandomLegal::new(s.unwrap_or(seed)))
            }
            StrategyConfig::Scripted { turns } => {
                let parsed = turns
                    .iter()
                    .map(|t| parse_vertices(g, t))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| CliError::graph("strategy.turns", e))?;
                Box::new(Scripted::new(parsed))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    /// Vertices any single exploration may visit.
    pub vertices: usize,
    /// Largest truncated ball the exhaustive search accepts.
    pub exhaustive_vertices: usize,
    /// Search nodes before the exhaustive search gives up.
    pub nodes: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            vertices: DEFAULT_VERTEX_CAP,
            exhaustive_vertices: ExhaustiveConfig::DEFAULT_VERTEX_CAP,
            nodes: ExhaustiveConfig::DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthConfig {
    pub max_radius: usize,
    /// Radii `[lo, hi]` for the degree fit; default is the upper half.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(usize, usize)>,
    /// Largest Følner radius; defaults to `max_radius`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folner_radius: Option<usize>,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            max_radius: 10,
            window: None,
            folner_radius: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyConfig {
    pub depth: usize,
    /// Defaults to `depth`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    /// Defaults to the top-level schedule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<BudgetSchedule>,
    #[serde(default = "yes")]
    pub replay: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupConfig {
    /// Both `u` and `v` given: test that pair. Otherwise search short pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_word_length")]
    pub max_word_length: usize,
    #[serde(default)]
    pub export_tree: bool,
}

fn default_depth() -> usize {
    8
}

fn default_word_length() -> usize {
    3
}

/// One containment run of the suite. Unset fields fall back to the
/// top-level ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContainmentRun {
    pub schedule: BudgetSchedule,
    #[serde(default)]
    pub strategy: StrategyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fire: Option<FireSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

/// Command-line values that replace config fields before hashing.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub horizon: Option<usize>,
    pub cap_vertices: Option<usize>,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config {
            location: origin.to_string(),
            message: e.to_string().trim_end().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(h) = o.horizon {
            self.horizon = h;
        }
        if let Some(c) = o.cap_vertices {
            self.caps.vertices = c;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
    }

    /// SHA-256 of the effective config as compact JSON, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("configs serialize");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Stem for output file names.
    pub fn stem(&self) -> &str {
        self.name.as_deref().unwrap_or("experiment")
    }

    pub fn require_schedule(&self) -> Result<BudgetSchedule, CliError> {
        self.schedule.ok_or_else(|| {
            CliError::config(
                "schedule",
                "this command needs a schedule, e.g. `schedule = { c = 2, d = 0 }`",
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        graph = { kind = "grid", dim = 2 }
        schedule = { c = "3/2", d = 1 }
    "#;

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::parse(MINIMAL, "inline").unwrap();
        assert_eq!(c.fire, FireSpec::Ball(0));
        assert_eq!(c.horizon, DEFAULT_HORIZON);
        assert_eq!(c.strategy, StrategyConfig::default());
        assert_eq!(c.schedule.unwrap().to_string(), "C=3/2 d=1");
    }

    #[test]
    fn fire_forms() {
        let c = ExperimentConfig::parse(&format!("{MINIMAL}\nfire = \"ball(3)\""), "x").unwrap();
        assert_eq!(c.fire, FireSpec::Ball(3));
        let c =
            ExperimentConfig::parse(&format!("{MINIMAL}\nfire = [\"0,0\", \"1,0\"]"), "x").unwrap();
        assert_eq!(c.fire, FireSpec::Vertices(vec!["0,0".into(), "1,0".into()]));
        assert!(ExperimentConfig::parse(&format!("{MINIMAL}\nfire = \"ring(3)\""), "x").is_err());
    }

    #[test]
    fn unknown_fields_are_rejected_with_a_location() {
        let err =
            ExperimentConfig::parse(&format!("{MINIMAL}\nhorizn = 3"), "cfg.toml").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("cfg.toml"), "{text}");
        assert!(text.contains("line 5") && text.contains("horizn"), "{text}");
        let bad_strategy =
            format!("{MINIMAL}\nstrategy = {{ name = \"sphere-barricade\", radius = 3 }}");
        assert!(ExperimentConfig::parse(&bad_strategy, "x").is_err());
    }

    #[test]
    fn hash_tracks_overrides_but_not_output() {
        let mut c = ExperimentConfig::parse(MINIMAL, "x").unwrap();
        let h = c.hash();
        c.output.dir = Some("elsewhere".into());
        assert_eq!(c.hash(), h);
        c.apply(&Overrides {
            horizon: Some(7),
            ..Default::default()
        });
        assert_ne!(c.hash(), h);
        assert_eq!(h.len(), 64);
    }

    #[test]
    fn serialization_round_trips() {
        let text = r#"
            name = "all"
            graph = { kind = "free", rank = 2, generators = ["a", "b"] }
            fire = ["a"]
            schedule = { c = 1, d = 0 }
            strategy = { name = "scripted", turns = [["b"], []] }
            growth = { max_radius = 6, window = [3, 6] }
            certify = { depth = 3 }
            semigroup = { u = "a", v = "b", export_tree = true }
            [[containment]]
            schedule = { c = 8, d = 0 }
            strategy = { name = "sphere-barricade" }
            fire = "ball(1)"
        "#;
        let c = ExperimentConfig::parse(text, "x").unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
