//! Line-delimited JSON traces and a replay validator.
//!
//! A trace is a header line, one line per committed turn, and an end line:
//!
//! ```text
//! {"record":"header","format":"firebreak-trace/1",...}
//! {"record":"turn","n":1,"protected":["1,0"],"fire":4,"budget":1}
//! {"record":"end","outcome":"undetermined",...}
//! ```
//!
//! The validator re-derives every turn from the header alone, with its own
//! budget arithmetic and a full recomputation of the burning set each turn.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{BudgetSchedule, FireState, TurnRecord};
use crate::graph::{GraphProvider, VertexId};
use crate::groups::GraphSpec;
use crate::play::{ContainmentReport, Outcome};

pub const TRACE_FORMAT: &str = "firebreak-trace/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub format: String,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    pub graph: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph_spec: Option<GraphSpec>,
    pub strategy: String,
    pub schedule: BudgetSchedule,
    pub initial_fire: Vec<VertexId>,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEnd {
    pub outcome: Outcome,
    pub contained_at: Option<usize>,
    pub final_fire_size: usize,
    pub total_protected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
enum Line {
    Header(TraceHeader),
    Turn(TurnRecord),
    End(TraceEnd),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub header: TraceHeader,
    pub turns: Vec<TurnRecord>,
    pub end: TraceEnd,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("turn {turn}: {message}")]
    Invalid { turn: usize, message: String },
    #[error("{0}")]
    Setup(String),
}

fn invalid(turn: usize, message: impl Into<String>) -> TraceError {
    TraceError::Invalid {
        turn,
        message: message.into(),
    }
}

impl Trace {
    pub fn from_report(
        report: &ContainmentReport,
        graph_spec: Option<GraphSpec>,
        config_hash: Option<String>,
    ) -> Self {
        Trace {
            header: TraceHeader {
                format: TRACE_FORMAT.into(),
                tool_version: env!("CARGO_PKG_VERSION").into(),
                config_hash,
                graph: report.graph.clone(),
                graph_spec,
                strategy: report.strategy.clone(),
                schedule: report.schedule,
                initial_fire: report.initial_fire.clone(),
                horizon: report.horizon,
            },
            turns: report.trace.clone(),
            end: TraceEnd {
                outcome: report.outcome,
                contained_at: report.contained_at,
                final_fire_size: report.final_fire_size,
                total_protected: report.total_protected,
            },
        }
    }

    /// Trace of a game in progress, with the current time as horizon.
    pub fn from_state(
        graph: &dyn GraphProvider,
        state: &FireState,
        graph_spec: Option<GraphSpec>,
        strategy: &str,
    ) -> Self {
        Trace {
            header: TraceHeader {
                format: TRACE_FORMAT.into(),
                tool_version: env!("CARGO_PKG_VERSION").into(),
                config_hash: None,
                graph: graph.name(),
                graph_spec,
                strategy: strategy.into(),
                schedule: state.schedule(),
                initial_fire: state.initial_fire().to_vec(),
                horizon: state.time(),
            },
            turns: state.turns().to_vec(),
            end: TraceEnd {
                outcome: if state.is_contained() {
                    Outcome::Contained
                } else {
                    Outcome::Undetermined
                },
                contained_at: state.contained_at(),
                final_fire_size: state.burning().len(),
                total_protected: state.protected().len(),
            },
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |line: &Line| {
            out.push_str(&serde_json::to_string(line).expect("trace records serialize"));
            out.push('\n');
        };
        push(&Line::Header(self.header.clone()));
        for t in &self.turns {
            push(&Line::Turn(t.clone()));
        }
        push(&Line::End(self.end.clone()));
        out
    }

    pub fn parse_jsonl(text: &str) -> Result<Self, TraceError> {
        let mut header = None;
        let mut turns = Vec::new();
        let mut end = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let err = |message: String| TraceError::Parse { line, message };
            if end.is_some() {
                return Err(err("record after end".into()));
            }
            match serde_json::from_str::<Line>(raw).map_err(|e| err(e.to_string()))? {
                Line::Header(h) if header.is_none() => header = Some(h),
                Line::Header(_) => return Err(err("duplicate header".into())),
                _ if header.is_none() => return Err(err("missing header".into())),
                Line::Turn(t) => turns.push(t),
                Line::End(e) => end = Some(e),
            }
        }
        let header = header.ok_or(TraceError::Parse {
            line: 1,
            message: "empty trace".into(),
        })?;
        if header.format != TRACE_FORMAT {
            return Err(TraceError::Parse {
                line: 1,
                message: format!("unsupported format `{}`", header.format),
            });
        }
        let end = end.ok_or(TraceError::Parse {
            line: text.lines().count(),
            message: "missing end record".into(),
        })?;
        Ok(Trace { header, turns, end })
    }
}

/// Summary of a successful validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub turns: usize,
    pub contained_at: Option<usize>,
    pub final_fire_size: usize,
}

/// `⌊C · n^d⌋` in arbitrary precision.
fn budget_exact(schedule: &BudgetSchedule, n: usize) -> BigUint {
    let c = schedule.c();
    let mut pow = BigUint::one();
    for _ in 0..schedule.d() {
        pow *= BigUint::from(n);
    }
    pow * BigUint::from(*c.numer()) / BigUint::from(*c.denom())
}

/// Replays a trace against `g` and checks every rule of the game: budgets,
/// disjointness of protections from the fire and from earlier protections,
/// the recorded fire sizes, and the containment time and outcome.
pub fn validate_trace(g: &dyn GraphProvider, trace: &Trace) -> Result<Validation, TraceError> {
    let h = &trace.header;
    if h.graph != g.name() {
        return Err(TraceError::Setup(format!(
            "trace is for `{}`, graph is `{}`",
            h.graph,
            g.name()
        )));
    }
    if h.initial_fire.is_empty() {
        return Err(TraceError::Setup("empty initial fire".into()));
    }
    let mut burning: HashSet<String> = HashSet::new();
    for v in &h.initial_fire {
        let canon = g
            .parse_vertex(v.as_str())
            .map_err(|e| TraceError::Setup(e.to_string()))?;
        if canon != *v {
            return Err(TraceError::Setup(format!("`{v}` is not canonical")));
        }
        burning.insert(v.to_string());
    }
    let mut protected: HashSet<String> = HashSet::new();

    let has_open =
        |burning: &HashSet<String>, protected: &HashSet<String>| -> Result<bool, TraceError> {
            for v in burning {
                for w in g
                    .neighbors(&VertexId::new(v.as_str()))
                    .map_err(|e| TraceError::Setup(e.to_string()))?
                {
                    if !burning.contains(w.as_str()) && !protected.contains(w.as_str()) {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        };

    let mut contained_at = if has_open(&burning, &protected)? {
        None
    } else {
        Some(0)
    };
    let mut sizes = vec![burning.len()];
    for (i, t) in trace.turns.iter().enumerate() {
        let n = i + 1;
        if t.n != n {
            return Err(invalid(n, format!("turn numbered {}", t.n)));
        }
        if contained_at.is_some() {
            return Err(invalid(n, "turn recorded after containment"));
        }
        let budget = budget_exact(&h.schedule, n);
        if BigUint::from(t.budget) != budget
            && !(t.budget == usize::MAX && budget > BigUint::from(usize::MAX))
        {
            return Err(invalid(
                n,
                format!("recorded budget {} but f({n}) = {budget}", t.budget),
            ));
        }
        if BigUint::from(t.protected.len()) > budget {
            return Err(invalid(
                n,
                format!("{} protections exceed f({n}) = {budget}", t.protected.len()),
            ));
        }
        let mut this_turn = HashSet::new();
        for w in &t.protected {
            let canon = g
                .parse_vertex(w.as_str())
                .map_err(|_| invalid(n, format!("unknown vertex `{w}`")))?;
            if canon != *w {
                return Err(invalid(n, format!("`{w}` is not canonical")));
            }
            if burning.contains(w.as_str()) {
                return Err(invalid(n, format!("protected burning vertex `{w}`")));
            }
            if protected.contains(w.as_str()) || !this_turn.insert(w.as_str()) {
                return Err(invalid(n, format!("`{w}` protected twice")));
            }
        }
        protected.extend(this_turn.into_iter().map(str::to_string));

        // Closed neighborhood of the whole fire, minus everything protected.
        let mut next = burning.clone();
        for v in &burning {
            for w in g
                .neighbors(&VertexId::new(v.as_str()))
                .map_err(|e| TraceError::Setup(e.to_string()))?
            {
                if !protected.contains(w.as_str()) {
                    next.insert(w.to_string());
                }
            }
        }
        if next.len() != t.fire {
            return Err(invalid(
                n,
                format!(
                    "recorded fire size {} but replay gives {}",
                    t.fire,
                    next.len()
                ),
            ));
        }
        burning = next;
        sizes.push(burning.len());
        if !has_open(&burning, &protected)? {
            contained_at = Some(n);
        }
    }

    let turns = trace.turns.len();
    let end = &trace.end;
    if end.contained_at != contained_at {
        return Err(invalid(
            turns,
            format!(
                "recorded containment time {:?} but replay gives {contained_at:?}",
                end.contained_at
            ),
        ));
    }
    if let Some(t) = contained_at {
        if sizes[t..].iter().any(|&s| s != sizes[t]) {
            return Err(invalid(turns, "fire grew after containment"));
        }
        if end.outcome != Outcome::Contained {
            return Err(invalid(turns, "contained game not reported as contained"));
        }
    } else {
        if end.outcome == Outcome::Contained {
            return Err(invalid(
                turns,
                "reported contained but the fire can still spread",
            ));
        }
        if turns != h.horizon {
            return Err(invalid(
                turns,
                format!("stopped after {turns} turns, horizon is {}", h.horizon),
            ));
        }
    }
    if end.final_fire_size != burning.len() || end.total_protected != protected.len() {
        return Err(invalid(turns, "end totals disagree with replay"));
    }
    if turns > h.horizon {
        return Err(invalid(turns, "turns recorded beyond the horizon"));
    }
    Ok(Validation {
        turns,
        contained_at,
        final_fire_size: burning.len(),
    })
}

/// Parses and validates a trace, rebuilding the graph from its header.
pub fn validate_jsonl(text: &str) -> Result<Validation, TraceError> {
    let trace = Trace::parse_jsonl(text)?;
    let spec = trace
        .header
        .graph_spec
        .as_ref()
        .ok_or_else(|| TraceError::Setup("trace header has no graph spec".into()))?;
    let g = spec.build().map_err(|e| TraceError::Setup(e.to_string()))?;
    validate_trace(&*g, &trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::play::play;
    use crate::strategies::{GreedyFrontier, SphereBarricade};

    fn grid_report() -> (GraphSpec, ContainmentReport) {
        let spec = GraphSpec::Grid { dim: 2 };
        let g = spec.build().unwrap();
        let x0 = vec![g.basepoint()];
        let sched = BudgetSchedule::constant(4);
        let mut s = SphereBarricade::new(&*g, &x0, sched, 64, 1 << 20).unwrap();
        (spec, play(&*g, &x0, sched, &mut s, 20).unwrap())
    }

    #[test]
    fn round_trip_and_validate() {
        let (spec, report) = grid_report();
        assert_eq!(report.outcome, Outcome::Contained);
        let text = Trace::from_report(&report, Some(spec), None).to_jsonl();
        assert!(text.starts_with(r#"{"record":"header","format":"firebreak-trace/1""#));
        let v = validate_jsonl(&text).unwrap();
        assert_eq!(v.contained_at, report.contained_at);
        assert_eq!(Trace::parse_jsonl(&text).unwrap().to_jsonl(), text);
    }

    #[test]
    fn tampering_is_detected() {
        let (spec, report) = grid_report();
        let g = spec.build().unwrap();
        let good = Trace::from_report(&report, Some(spec), None);

        let mut t = good.clone();
        t.turns[0].fire += 1;
        assert!(validate_trace(&*g, &t).is_err());

        let mut t = good.clone();
        t.turns[0].protected.push(VertexId::new("0,0"));
        assert!(validate_trace(&*g, &t).is_err());

        let mut t = good.clone();
        t.turns[0].budget = 3;
        assert!(validate_trace(&*g, &t).is_err());

        let mut t = good.clone();
        t.end.contained_at = Some(5);
        assert!(validate_trace(&*g, &t).is_err());

        let mut t = good;
        t.end.outcome = Outcome::Undetermined;
        assert!(validate_trace(&*g, &t).is_err());
    }

    #[test]
    fn undetermined_runs_validate() {
        let spec = GraphSpec::Grid { dim: 2 };
        let g = spec.build().unwrap();
        let r = play(
            &*g,
            &[g.basepoint()],
            BudgetSchedule::constant(1),
            &mut GreedyFrontier::default(),
            12,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::Undetermined);
        validate_jsonl(&Trace::from_report(&r, Some(spec), None).to_jsonl()).unwrap();
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Trace::parse_jsonl("{\"record\":\"turn\"}\n").unwrap_err();
        assert!(matches!(err, TraceError::Parse { line: 1, .. }));
        let (spec, report) = grid_report();
        let mut text = Trace::from_report(&report, Some(spec), None).to_jsonl();
        text.push_str("garbage\n");
        assert!(matches!(
            Trace::parse_jsonl(&text),
            Err(TraceError::Parse { .. })
        ));
    }

    #[test]
    fn exact_budget_handles_rationals() {
        let s = BudgetSchedule::new(num_rational::Ratio::new(7, 3), 2);
        for n in 0..50 {
            assert_eq!(budget_exact(&s, n), BigUint::from(s.budget(n)));
        }
    }
}
