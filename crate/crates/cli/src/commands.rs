//! The experiment commands. Each returns an [`Output`]; nothing here touches
//! stdout or the file system.

use std::path::Path;

use firebreak_core::analysis::{
    folner_profile, growth_profile, FolnerRow, FolnerTrend, GrowthProfile,
};
use firebreak_core::graph::GraphProvider;
use firebreak_core::groups::{
    search_free_pair, semigroup_tree, GraphSpec, PairSearch, SemigroupTree,
};
use firebreak_core::play::{play_with, ContainmentReport, PlayOptions};
use firebreak_core::strategies::{
    exhaustive_no_containment, replay_certificate, verify_confining, ExhaustiveConfig,
    SearchOutcome,
};
use firebreak_core::trace::{validate_jsonl, Trace};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{
    ContainmentRun, ExperimentConfig, FireSpec, GrowthConfig, Overrides, SemigroupConfig,
};
use crate::error::CliError;
use crate::output::{json_line, json_pretty, ratio, Meta, Output, Table};

fn with_meta(meta: &Meta, body: &Value) -> Value {
    let mut v = serde_json::to_value(meta).expect("meta serializes");
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.remove("record");
        m.extend(b.clone());
    }
    v
}

fn run_containment(
    cfg: &ExperimentConfig,
    g: &dyn GraphProvider,
    run: &ContainmentRun,
) -> Result<(ContainmentReport, FireSpec), CliError> {
    let fire = run.fire.clone().unwrap_or_else(|| cfg.fire.clone());
    let x0 = fire.resolve(g, cfg.caps.vertices)?;
    let mut strategy = run
        .strategy
        .build(g, &x0, run.schedule, cfg.seed, cfg.caps.vertices)?;
    let options = PlayOptions {
        vertex_cap: cfg.caps.vertices,
        ..Default::default()
    };
    let horizon = run.horizon.unwrap_or(cfg.horizon);
    let report = play_with(g, &x0, run.schedule, &mut *strategy, horizon, options)?;
    Ok((report, fire))
}

fn report_record(r: &ContainmentReport, fire: &FireSpec) -> Value {
    json!({
        "record": "report",
        "graph": r.graph,
        "strategy": r.strategy,
        "schedule": r.schedule,
        "fire": fire.to_string(),
        "initial_fire_size": r.initial_fire.len(),
        "outcome": r.outcome,
        "contained_at": r.contained_at,
        "final_fire_size": r.final_fire_size,
        "total_protected": r.total_protected,
        "horizon": r.horizon,
    })
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let hash = cfg.hash();
    let g = cfg.graph.build()?;
    let run = ContainmentRun {
        schedule: cfg.require_schedule()?,
        strategy: cfg.strategy.clone(),
        fire: None,
        horizon: None,
    };
    let (report, fire) = run_containment(cfg, &*g, &run)?;
    let meta = Meta::new("simulate", Some(hash.clone()));

    let mut summary = Table::new(["field", "value"]);
    summary.row(["graph".to_string(), report.graph.clone()]);
    summary.row(["strategy".to_string(), report.strategy.clone()]);
    summary.row(["schedule".to_string(), report.schedule.to_string()]);
    summary.row([
        "fire".to_string(),
        format!("{fire} ({} vertices)", report.initial_fire.len()),
    ]);
    summary.row(["horizon".to_string(), report.horizon.to_string()]);
    summary.row(["outcome".to_string(), report.outcome.as_str().to_string()]);
    summary.row([
        "contained_at".to_string(),
        report.contained_at.map_or("-".into(), |t| t.to_string()),
    ]);
    summary.row([
        "final_fire_size".to_string(),
        report.final_fire_size.to_string(),
    ]);
    summary.row([
        "total_protected".to_string(),
        report.total_protected.to_string(),
    ]);
    let mut turns = Table::new(["n", "budget", "protected", "fire"]);
    for t in &report.trace {
        turns.row([
            t.n.to_string(),
            t.budget.to_string(),
            t.protected.len().to_string(),
            t.fire.to_string(),
        ]);
    }

    let head = report_record(&report, &fire);
    let mut records = vec![head.clone()];
    for t in &report.trace {
        let mut v = serde_json::to_value(t).expect("turns serialize");
        v["record"] = "turn".into();
        records.push(v);
    }
    let trace = Trace::from_report(&report, Some(cfg.graph.clone()), Some(hash));
    let mut full = with_meta(&meta, &head);
    full["initial_fire"] = serde_json::to_value(&report.initial_fire).expect("ids serialize");
    full["turns"] = serde_json::to_value(&report.trace).expect("turns serialize");
    Ok(Output {
        files: vec![
            (format!("{}.trace.jsonl", cfg.stem()), trace.to_jsonl()),
            (format!("{}.report.json", cfg.stem()), json_pretty(&full)),
        ],
        meta,
        table: format!("{}\n{}", summary.render(), turns.render()),
        records,
    })
}

struct Growth {
    profile: GrowthProfile,
    folner: Vec<FolnerRow>,
    trend: FolnerTrend,
}

fn compute_growth(
    g: &dyn GraphProvider,
    gc: &GrowthConfig,
    cap: usize,
) -> Result<Growth, CliError> {
    let center = [g.basepoint()];
    let profile = growth_profile(g, &center, gc.max_radius, gc.window, cap)?;
    let folner = folner_profile(g, &center, gc.folner_radius.unwrap_or(gc.max_radius), cap)?;
    let trend = FolnerTrend::of(&folner);
    Ok(Growth {
        profile,
        folner,
        trend,
    })
}

fn fit_text(p: &GrowthProfile) -> String {
    match &p.fit {
        Some(f) => match f.half_width {
            Some(h) => format!("{:.3} ± {:.3}", f.degree, h),
            None => format!("{:.3}", f.degree),
        },
        None => "-".into(),
    }
}

pub fn growth(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let hash = cfg.hash();
    let g = cfg.graph.build()?;
    let gc = cfg.growth.unwrap_or_default();
    let Growth {
        profile,
        folner,
        trend,
    } = compute_growth(&*g, &gc, cfg.caps.vertices)?;
    let meta = Meta::new("growth", Some(hash));

    let slopes: Vec<String> = profile
        .window_slopes
        .iter()
        .map(|s| format!("{s:.3}"))
        .collect();
    let mut summary = Table::new(["field", "value"]);
    summary.row(["graph".to_string(), profile.graph.clone()]);
    summary.row(["max_radius".to_string(), gc.max_radius.to_string()]);
    summary.row(["fitted_degree".to_string(), fit_text(&profile)]);
    if let Some(f) = &profile.fit {
        summary.row([
            "fit_window".to_string(),
            format!("{}..={}", f.window.0, f.window.1),
        ]);
    }
    summary.row(["window_slopes".to_string(), slopes.join(" ")]);
    summary.row([
        "not_polynomial".to_string(),
        profile.not_polynomial.to_string(),
    ]);
    summary.row(["folner_trend".to_string(), trend.as_str().to_string()]);

    let mut rows = Table::new(["radius", "sphere", "ball", "boundary", "folner_ratio"]);
    let mut records = vec![json!({
        "record": "fit",
        "graph": profile.graph,
        "max_radius": gc.max_radius,
        "fit": profile.fit,
        "window_slopes": profile.window_slopes,
        "not_polynomial": profile.not_polynomial,
        "folner_trend": trend,
    })];
    for &n in &profile.radii {
        let f = folner.get(n);
        rows.row([
            n.to_string(),
            profile.sphere_sizes[n].to_string(),
            profile.ball_sizes[n].to_string(),
            f.map_or("-".into(), |f| f.boundary_edges.to_string()),
            f.map_or("-".into(), |f| ratio(&f.ratio)),
        ]);
        records.push(json!({
            "record": "radius",
            "radius": n,
            "sphere": profile.sphere_sizes[n],
            "ball": profile.ball_sizes[n],
            "boundary_edges": f.map(|f| f.boundary_edges),
            "folner_ratio": f.map(|f| ratio(&f.ratio)),
        }));
    }
    let mut file = json_line(&meta);
    for r in &records {
        file.push_str(&json_line(r));
    }
    Ok(Output {
        files: vec![(format!("{}.growth.jsonl", cfg.stem()), file)],
        meta,
        table: format!("{}\n{}", summary.render(), rows.render()),
        records,
    })
}

struct Certified {
    outcome: SearchOutcome,
    replayed: Option<bool>,
}

fn compute_certificate(
    cfg: &ExperimentConfig,
    g: &dyn GraphProvider,
) -> Result<Certified, CliError> {
    let cc = cfg
        .certify
        .ok_or_else(|| CliError::config("certify", "missing [certify] section"))?;
    let schedule = match cc.schedule {
        Some(s) => s,
        None => cfg.require_schedule()?,
    };
    let x0 = cfg.fire.resolve(g, cfg.caps.vertices)?;
    let search = ExhaustiveConfig {
        truncation_depth: cc.depth,
        horizon: cc.horizon.unwrap_or(cc.depth),
        vertex_cap: cfg.caps.exhaustive_vertices,
        node_limit: cfg.caps.nodes,
    };
    let mut outcome = exhaustive_no_containment(g, &x0, schedule, &search)?;
    let replayed = match &mut outcome {
        SearchOutcome::Escape(c) => {
            c.graph_spec = Some(cfg.graph.clone());
            cc.replay
                .then(|| replay_certificate(g, c, cfg.caps.nodes))
                .transpose()?
        }
        SearchOutcome::Confining(s) => {
            s.graph_spec = Some(cfg.graph.clone());
            cc.replay.then(|| verify_confining(g, s)).transpose()?
        }
    };
    if replayed == Some(false) {
        return Err(CliError::Verification(
            "independent replay disagrees with the search".into(),
        ));
    }
    Ok(Certified { outcome, replayed })
}

fn verdict(o: &SearchOutcome) -> &'static str {
    match o {
        SearchOutcome::Escape(_) => "escape",
        SearchOutcome::Confining(_) => "confining",
    }
}

pub fn certify(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let hash = cfg.hash();
    let g = cfg.graph.build()?;
    let Certified { outcome, replayed } = compute_certificate(cfg, &*g)?;
    let meta = Meta::new("certify", Some(hash));

    let (graph, schedule, depth, horizon, stats) = match &outcome {
        SearchOutcome::Escape(c) => (
            &c.graph,
            c.schedule,
            c.truncation_depth,
            c.horizon,
            &c.search_stats,
        ),
        SearchOutcome::Confining(s) => (
            &s.graph,
            s.schedule,
            s.truncation_depth,
            s.horizon,
            &s.search_stats,
        ),
    };
    let mut t = Table::new(["field", "value"]);
    t.row(["verdict".to_string(), verdict(&outcome).to_string()]);
    t.row(["graph".to_string(), graph.clone()]);
    t.row(["fire".to_string(), cfg.fire.to_string()]);
    t.row(["schedule".to_string(), schedule.to_string()]);
    t.row(["truncation_depth".to_string(), depth.to_string()]);
    t.row(["horizon".to_string(), horizon.to_string()]);
    t.row(["ball_vertices".to_string(), stats.ball_vertices.to_string()]);
    t.row([
        "sphere_vertices".to_string(),
        stats.sphere_vertices.to_string(),
    ]);
    t.row(["search_nodes".to_string(), stats.nodes.to_string()]);
    t.row(["memo_entries".to_string(), stats.memo_entries.to_string()]);
    t.row([
        "replayed".to_string(),
        replayed.map_or("skipped".into(), |r| r.to_string()),
    ]);
    let mut table = t.render();
    match &outcome {
        SearchOutcome::Escape(c) => {
            table.push('\n');
            table.push_str(&c.statement);
            table.push('\n');
        }
        SearchOutcome::Confining(s) => {
            let mut turns = Table::new(["n", "protect"]);
            for (i, w) in s.turns.iter().enumerate() {
                let ids: Vec<&str> = w.iter().map(|v| v.as_str()).collect();
                turns.row([(i + 1).to_string(), ids.join(" ")]);
            }
            table.push('\n');
            table.push_str(&turns.render());
        }
    }

    let mut body = serde_json::to_value(&outcome).expect("outcomes serialize");
    body["record"] = "certificate".into();
    body["replayed"] = json!(replayed);
    Ok(Output {
        files: vec![(
            format!("{}.certificate.json", cfg.stem()),
            json_pretty(&with_meta(&meta, &body)),
        )],
        meta,
        table,
        records: vec![body],
    })
}

enum Semigroup {
    Pair(SemigroupTree),
    Search(PairSearch),
}

impl Semigroup {
    fn tree(&self) -> Option<&SemigroupTree> {
        match self {
            Semigroup::Pair(t) => Some(t),
            Semigroup::Search(s) => s.found.as_ref(),
        }
    }

    fn verdict(&self) -> &'static str {
        match self.tree() {
            Some(t) if t.free_up_to_depth => "free",
            Some(_) => "collision",
            None => "none-found",
        }
    }
}

fn compute_semigroup(
    spec: &GraphSpec,
    sc: &SemigroupConfig,
    cap: usize,
) -> Result<Semigroup, CliError> {
    let group = spec.as_group().ok_or_else(|| {
        CliError::config(
            "graph",
            "the semigroup command needs a group, not a graph family",
        )
    })?;
    let g = group.cayley()?;
    match (&sc.u, &sc.v) {
        (Some(u), Some(v)) => {
            let u = g.parse_element(u)?;
            let v = g.parse_element(v)?;
            Ok(Semigroup::Pair(semigroup_tree(&*g, &u, &v, sc.depth, cap)?))
        }
        (None, None) => Ok(Semigroup::Search(search_free_pair(
            &*g,
            sc.max_word_length,
            sc.depth,
            cap,
        )?)),
        _ => Err(CliError::config(
            "semigroup",
            "give both `u` and `v`, or neither to search",
        )),
    }
}

fn semigroup_record(s: &Semigroup, sc: &SemigroupConfig) -> Value {
    let tree = s.tree();
    let mut v = json!({
        "record": "semigroup",
        "mode": match s { Semigroup::Pair(_) => "pair", Semigroup::Search(_) => "search" },
        "verdict": s.verdict(),
        "depth": sc.depth,
        "u": tree.map(|t| t.u.as_str()),
        "v": tree.map(|t| t.v.as_str()),
        "words": tree.map(|t| t.nodes.len()),
        "distinct": tree.map(|t| t.distinct),
        "collision": tree.and_then(|t| t.collision.clone()),
    });
    if let Semigroup::Search(p) = s {
        v["max_word_length"] = p.max_word_length.into();
        v["candidates"] = p.candidates.into();
        v["pairs_tested"] = p.pairs_tested.into();
    }
    v
}

pub fn semigroup(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let hash = cfg.hash();
    let sc = cfg.semigroup.clone().unwrap_or(SemigroupConfig {
        u: None,
        v: None,
        depth: 8,
        max_word_length: 3,
        export_tree: false,
    });
    let result = compute_semigroup(&cfg.graph, &sc, cfg.caps.vertices)?;
    let meta = Meta::new("semigroup", Some(hash));
    let record = semigroup_record(&result, &sc);

    let mut t = Table::new(["field", "value"]);
    let cell = |k: &str| match &record[k] {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    for k in [
        "mode",
        "verdict",
        "u",
        "v",
        "depth",
        "words",
        "distinct",
        "max_word_length",
        "candidates",
        "pairs_tested",
    ] {
        if record.get(k).is_some() {
            t.row([k.to_string(), cell(k)]);
        }
    }
    if let Some((a, b)) = result.tree().and_then(|t| t.collision.as_ref()) {
        t.row(["collision".to_string(), format!("{a} = {b}")]);
    }

    let mut files = vec![(
        format!("{}.semigroup.json", cfg.stem()),
        json_pretty(&with_meta(&meta, &record)),
    )];
    if sc.export_tree {
        if let Some(tree) = result.tree() {
            let body = json!({ "record": "semigroup-tree", "tree": tree });
            files.push((
                format!("{}.semigroup-tree.json", cfg.stem()),
                json_pretty(&with_meta(&meta, &body)),
            ));
        }
    }
    Ok(Output {
        files,
        meta,
        table: t.render(),
        records: vec![record],
    })
}

pub fn validate(path: &Path) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let v = validate_jsonl(&text)?;
    let header = Trace::parse_jsonl(&text)?.header;
    let meta = Meta::new("validate", header.config_hash.clone());
    let record = json!({
        "record": "validation",
        "valid": true,
        "graph": header.graph,
        "turns": v.turns,
        "contained_at": v.contained_at,
        "final_fire_size": v.final_fire_size,
    });
    let mut t = Table::new(["field", "value"]);
    t.row(["valid", "true"]);
    t.row(["graph".to_string(), header.graph]);
    t.row(["turns".to_string(), v.turns.to_string()]);
    t.row([
        "contained_at".to_string(),
        v.contained_at.map_or("-".into(), |c| c.to_string()),
    ]);
    t.row(["final_fire_size".to_string(), v.final_fire_size.to_string()]);
    Ok(Output {
        meta,
        table: t.render(),
        records: vec![record],
        files: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub max_radius: usize,
    pub degree: Option<f64>,
    pub half_width: Option<f64>,
    pub not_polynomial: bool,
    pub folner_trend: FolnerTrend,
    pub last_folner_ratio: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupSummary {
    pub verdict: String,
    pub u: Option<String>,
    pub v: Option<String>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub verdict: String,
    pub schedule: String,
    pub truncation_depth: usize,
    pub horizon: usize,
    pub replayed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub schedule: String,
    pub strategy: String,
    pub fire: String,
    pub horizon: usize,
    pub outcome: String,
    pub contained_at: Option<usize>,
    pub final_fire_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowError {
    pub code: String,
    pub message: String,
}

/// One line of the suite table: everything the config asked for, up to the
/// first failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub config: String,
    pub name: Option<String>,
    pub config_hash: Option<String>,
    pub graph: Option<String>,
    pub growth: Option<GrowthSummary>,
    pub semigroup: Option<SemigroupSummary>,
    pub certificate: Option<CertificateSummary>,
    pub containment: Vec<RunSummary>,
    pub error: Option<RowError>,
}

impl SuiteRow {
    fn fill(&mut self, cfg: &ExperimentConfig) -> Result<(), CliError> {
        let g = cfg.graph.build()?;
        self.graph = Some(g.name());
        if let Some(gc) = &cfg.growth {
            let gr = compute_growth(&*g, gc, cfg.caps.vertices)?;
            self.growth = Some(GrowthSummary {
                max_radius: gc.max_radius,
                degree: gr.profile.fit.map(|f| f.degree),
                half_width: gr.profile.fit.and_then(|f| f.half_width),
                not_polynomial: gr.profile.not_polynomial,
                folner_trend: gr.trend,
                last_folner_ratio: gr.folner.last().map(|r| ratio(&r.ratio)),
            });
        }
        if let Some(sc) = &cfg.semigroup {
            let s = compute_semigroup(&cfg.graph, sc, cfg.caps.vertices)?;
            let tree = s.tree();
            self.semigroup = Some(SemigroupSummary {
                verdict: s.verdict().into(),
                u: tree.map(|t| t.u.to_string()),
                v: tree.map(|t| t.v.to_string()),
                depth: sc.depth,
            });
        }
        if cfg.certify.is_some() {
            let c = compute_certificate(cfg, &*g)?;
            let (schedule, truncation_depth, horizon) = match &c.outcome {
                SearchOutcome::Escape(e) => (e.schedule, e.truncation_depth, e.horizon),
                SearchOutcome::Confining(s) => (s.schedule, s.truncation_depth, s.horizon),
            };
            self.certificate = Some(CertificateSummary {
                verdict: verdict(&c.outcome).into(),
                schedule: schedule.to_string(),
                truncation_depth,
                horizon,
                replayed: c.replayed,
            });
        }
        for run in &cfg.containment {
            let (r, fire) = run_containment(cfg, &*g, run)?;
            self.containment.push(RunSummary {
                schedule: r.schedule.to_string(),
                strategy: r.strategy,
                fire: fire.to_string(),
                horizon: r.horizon,
                outcome: r.outcome.as_str().into(),
                contained_at: r.contained_at,
                final_fire_size: r.final_fire_size,
            });
        }
        Ok(())
    }

    fn cells(&self) -> Vec<String> {
        let dash = || "-".to_string();
        let growth = self.growth.as_ref();
        let runs: Vec<String> = self
            .containment
            .iter()
            .map(|r| {
                let at = r.contained_at.map_or(String::new(), |t| format!("@{t}"));
                format!(
                    "{} {} {}: {}{at}",
                    r.schedule, r.strategy, r.fire, r.outcome
                )
            })
            .collect();
        vec![
            self.config.clone(),
            self.graph.clone().unwrap_or_else(dash),
            growth
                .and_then(|g| g.degree)
                .map_or_else(dash, |d| format!("{d:.2}")),
            growth.map_or_else(dash, |g| {
                if g.not_polynomial {
                    "not-polynomial"
                } else {
                    "polynomial"
                }
                .into()
            }),
            growth.map_or_else(dash, |g| g.folner_trend.as_str().into()),
            self.semigroup
                .as_ref()
                .map_or_else(dash, |s| match (&s.u, &s.v) {
                    (Some(u), Some(v)) => format!("{} ({u}, {v}) depth {}", s.verdict, s.depth),
                    _ => format!("{} depth {}", s.verdict, s.depth),
                }),
            self.certificate.as_ref().map_or_else(dash, |c| {
                format!("{} R={} {}", c.verdict, c.truncation_depth, c.schedule)
            }),
            if runs.is_empty() {
                dash()
            } else {
                runs.join("; ")
            },
            self.error.as_ref().map_or_else(dash, |e| {
                format!("{}: {}", e.code, e.message.replace('\n', " "))
            }),
        ]
    }
}

pub fn suite_row(path: &Path, overrides: &Overrides) -> SuiteRow {
    let mut row = SuiteRow {
        config: path.file_name().map_or_else(
            || path.display().to_string(),
            |f| f.to_string_lossy().into_owned(),
        ),
        name: None,
        config_hash: None,
        graph: None,
        growth: None,
        semigroup: None,
        certificate: None,
        containment: Vec::new(),
        error: None,
    };
    let result = ExperimentConfig::load(path).and_then(|mut cfg| {
        cfg.apply(overrides);
        row.name = cfg.name.clone();
        row.config_hash = Some(cfg.hash());
        row.fill(&cfg)
    });
    if let Err(e) = result {
        row.error = Some(RowError {
            code: e.code().into(),
            message: e.to_string(),
        });
    }
    row
}

/// Runs every `*.toml` in `dir` concurrently; rows come back in file-name
/// order and failures become error rows.
pub fn suite(dir: &Path, overrides: &Overrides) -> Result<Output, CliError> {
    let io = |e: std::io::Error| CliError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let p = entry.map_err(io)?.path();
        if p.is_file() && p.extension().is_some_and(|e| e == "toml") {
            paths.push(p);
        }
    }
    paths.sort();
    let rows: Vec<SuiteRow> = paths.par_iter().map(|p| suite_row(p, overrides)).collect();

    let mut hasher = Sha256::new();
    for r in &rows {
        hasher.update(r.config.as_bytes());
        hasher.update(r.config_hash.as_deref().unwrap_or("-").as_bytes());
    }
    let meta = Meta::new("suite", Some(hex::encode(hasher.finalize())));
    let errors = rows.iter().filter(|r| r.error.is_some()).count();

    let mut t = Table::new([
        "config",
        "graph",
        "degree",
        "growth",
        "folner",
        "semigroup",
        "certificate",
        "containment",
        "error",
    ]);
    let mut records = Vec::new();
    for r in &rows {
        t.row(r.cells());
        let mut v = serde_json::to_value(r).expect("rows serialize");
        v["record"] = "row".into();
        records.push(v);
    }
    records.push(json!({ "record": "summary", "rows": rows.len(), "errors": errors }));
    let table = format!("{}\nrows: {}  errors: {}\n", t.render(), rows.len(), errors);

    let mut file = json_line(&meta);
    for r in &records {
        file.push_str(&json_line(r));
    }
    Ok(Output {
        meta,
        table,
        records,
        files: vec![("suite.jsonl".into(), file)],
    })
}
