//! Growth, isoperimetry and generating-set diagnostics.
//!
//! Ratios are exact; the log-log degree fit is the only floating-point
//! computation here.

mod cheeger;
mod robustness;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::graph::{ball, GraphError, GraphProvider, VertexId};
use crate::play::PlayError;
use crate::strategies::StrategyError;

pub use cheeger::{
    ball_sweep, calibrate_local_search, cheeger_exact_small, cheeger_local_search, CheegerEstimate,
    CheegerMode, SubsetFamily, DEFAULT_EXACT_CAP,
};
pub use robustness::{
    generating_set_robustness, ExperimentStrategy, RobustnessExperiment, RobustnessRecord,
    RunSummary,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("graph has {size} vertices, more than the cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Play(#[from] PlayError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// Least-squares slope of `log β(n)` against `log n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeFit {
    pub degree: f64,
    /// Half-width of the 95% confidence interval; absent with fewer than
    /// three points.
    pub half_width: Option<f64>,
    pub window: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub graph: String,
    pub radii: Vec<usize>,
    pub ball_sizes: Vec<u64>,
    pub sphere_sizes: Vec<u64>,
    pub fit: Option<DegreeFit>,
    /// Slopes over successively larger doubling windows, smallest radii first.
    pub window_slopes: Vec<f64>,
    /// Heuristic: the slope rose by more than [`NOT_POLYNOMIAL_DRIFT`] from
    /// each doubling window to the next.
    pub not_polynomial: bool,
}

pub const NOT_POLYNOMIAL_DRIFT: f64 = 0.5;

/// Fits `log β` against `log n` over radii `lo..=hi` (all positive).
pub fn fit_degree(ball_sizes: &[u64], lo: usize, hi: usize) -> Option<DegreeFit> {
    if lo == 0 || hi <= lo || hi >= ball_sizes.len() {
        return None;
    }
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|n| ((n as f64).ln(), (ball_sizes[n] as f64).ln()))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let half_width = if pts.len() >= 3 {
        let intercept = my - slope * mx;
        let sse: f64 = pts
            .iter()
            .map(|p| (p.1 - intercept - slope * p.0).powi(2))
            .sum();
        let se = (sse / (m - 2.0) / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, m - 2.0)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        Some(t * se)
    } else {
        None
    };
    Some(DegreeFit {
        degree: slope,
        half_width,
        window: (lo, hi),
    })
}

/// Exact ball and sphere sizes around `center` up to `max_radius`, with a
/// degree fit over `window` (default: the upper half of the radii).
pub fn growth_profile(
    g: &dyn GraphProvider,
    center: &[VertexId],
    max_radius: usize,
    window: Option<(usize, usize)>,
    cap: usize,
) -> Result<GrowthProfile, AnalysisError> {
    let spheres: Vec<u64> = crate::graph::sphere_sizes(g, center, max_radius, cap)?
        .into_iter()
        .map(|s| s as u64)
        .collect();
    let mut balls = Vec::with_capacity(spheres.len());
    let mut acc = 0u64;
    for s in &spheres {
        acc += s;
        balls.push(acc);
    }
    let top = balls.len() - 1;
    let (lo, hi) = window.unwrap_or((top.div_ceil(2).max(1), top));
    let fit = fit_degree(&balls, lo, hi);

    let mut window_slopes = Vec::new();
    for k in (0..3).rev() {
        let hi = top >> k;
        let lo = top >> (k + 1);
        if let Some(f) = fit_degree(&balls, lo, hi) {
            window_slopes.push(f.degree);
        }
    }
    let not_polynomial = window_slopes.len() >= 2
        && window_slopes
            .windows(2)
            .all(|w| w[1] - w[0] > NOT_POLYNOMIAL_DRIFT);

    Ok(GrowthProfile {
        graph: g.name(),
        radii: (0..=top).collect(),
        ball_sizes: balls,
        sphere_sizes: spheres,
        fit,
        window_slopes,
        not_polynomial,
    })
}

/// `|∂B(n)| / |B(n)|` for one radius, with the edge boundary counted in the
/// ambient graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerRow {
    pub radius: usize,
    pub ball_size: u64,
    pub boundary_edges: u64,
    pub ratio: Ratio<u64>,
}

pub fn folner_profile(
    g: &dyn GraphProvider,
    center: &[VertexId],
    max_radius: usize,
    cap: usize,
) -> Result<Vec<FolnerRow>, AnalysisError> {
    let b = ball(g, center, max_radius, cap)?;
    let reached = b.vertices.last().map_or(0, |v| v.1);
    let mut sizes = vec![0u64; max_radius + 1];
    let mut crossing = vec![0u64; max_radius + 1];
    for (_, d) in &b.vertices {
        sizes[*d] += 1;
    }
    for &(i, j) in &b.edges {
        let (di, dj) = (b.vertices[i].1, b.vertices[j].1);
        if di != dj {
            crossing[di.min(dj)] += 1;
        }
    }
    for (i, (_, d)) in b.vertices.iter().enumerate() {
        crossing[*d] += b.external_degree[i] as u64;
    }
    let mut rows = Vec::new();
    let mut total = 0u64;
    for n in 0..=max_radius.min(reached) {
        total += sizes[n];
        rows.push(FolnerRow {
            radius: n,
            ball_size: total,
            boundary_edges: crossing[n],
            ratio: Ratio::new(crossing[n], total),
        });
    }
    Ok(rows)
}

/// Amenability evidence from a Følner sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FolnerTrend {
    /// The last ratio is under three quarters of the ratio at half the radius.
    Decreasing,
    Flat,
    TooShort,
}

impl FolnerTrend {
    pub fn of(rows: &[FolnerRow]) -> Self {
        if rows.len() < 3 {
            return FolnerTrend::TooShort;
        }
        let last = rows[rows.len() - 1].ratio;
        let mid = rows[(rows.len() - 1) / 2].ratio;
        if last * Ratio::from_integer(4) < mid * Ratio::from_integer(3) {
            FolnerTrend::Decreasing
        } else {
            FolnerTrend::Flat
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            FolnerTrend::Decreasing => "decreasing",
            FolnerTrend::Flat => "flat",
            FolnerTrend::TooShort => "too-short",
        }
    }
}
