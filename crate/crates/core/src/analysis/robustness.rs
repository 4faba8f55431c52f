use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::game::BudgetSchedule;
use crate::graph::{GraphProvider, DEFAULT_VERTEX_CAP};
use crate::groups::GroupSpec;
use crate::play::{play, ContainmentReport, Outcome};
use crate::strategies::{GreedyFrontier, NullStrategy, SphereBarricade, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ExperimentStrategy {
    Null,
    GreedyFrontier,
    SphereBarricade { r_max: usize },
}

impl ExperimentStrategy {
    fn build(
        &self,
        g: &dyn GraphProvider,
        x0: &[crate::graph::VertexId],
        schedule: BudgetSchedule,
    ) -> Result<Box<dyn Strategy>, AnalysisError> {
        Ok(match *self {
            ExperimentStrategy::Null => Box::new(NullStrategy),
            ExperimentStrategy::GreedyFrontier => Box::new(GreedyFrontier::default()),
            ExperimentStrategy::SphereBarricade { r_max } => Box::new(SphereBarricade::new(
                g,
                x0,
                schedule,
                r_max,
                DEFAULT_VERTEX_CAP,
            )?),
        })
    }
}

/// A containment experiment from a single-vertex fire at the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustnessExperiment {
    pub strategy: ExperimentStrategy,
    pub schedule: BudgetSchedule,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub graph: String,
    pub outcome: Outcome,
    pub contained_at: Option<usize>,
    pub final_fire_size: usize,
    pub total_protected: usize,
}

impl From<&ContainmentReport> for RunSummary {
    fn from(r: &ContainmentReport) -> Self {
        RunSummary {
            graph: r.graph.clone(),
            outcome: r.outcome,
            contained_at: r.contained_at,
            final_fire_size: r.final_fire_size,
            total_protected: r.total_protected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustnessRecord {
    pub a: RunSummary,
    pub b: RunSummary,
    /// Containment outcomes differ. Quasi-isometric Cayley graphs should not
    /// disagree, so this points at a bug or constants that are too small.
    pub disagree: bool,
    /// Both runs produced identical traces.
    pub identical_traces: bool,
}

/// Runs the same experiment on the Cayley graphs of one group under two
/// generating sets and compares the outcomes.
pub fn generating_set_robustness(
    group: &GroupSpec,
    gens_a: Option<Vec<String>>,
    gens_b: Option<Vec<String>>,
    experiment: &RobustnessExperiment,
) -> Result<RobustnessRecord, AnalysisError> {
    let run = |gens: Option<Vec<String>>| -> Result<ContainmentReport, AnalysisError> {
        let spec = GroupSpec {
            kind: group.kind.clone(),
            generators: gens,
        };
        let g = spec
            .cayley()
            .map_err(|e| AnalysisError::InvalidParameter(e.to_string()))?;
        let x0 = vec![g.basepoint()];
        let mut s = experiment.strategy.build(&*g, &x0, experiment.schedule)?;
        Ok(play(
            &*g,
            &x0,
            experiment.schedule,
            &mut *s,
            experiment.horizon,
        )?)
    };
    let ra = run(gens_a)?;
    let rb = run(gens_b)?;
    let contained = |r: &ContainmentReport| r.outcome == Outcome::Contained;
    Ok(RobustnessRecord {
        disagree: contained(&ra) != contained(&rb),
        identical_traces: ra.trace == rb.trace,
        a: RunSummary::from(&ra),
        b: RunSummary::from(&rb),
    })
}
