use std::collections::HashSet;

use super::{Strategy, StrategyError};
use crate::game::{BudgetSchedule, FireState};
use crate::graph::{GraphError, GraphProvider, VertexId};

/// Protects the whole sphere `S_R` around the initial fire, for the smallest
/// `R` whose cumulative budget `f(1) + … + f(R)` covers `|S_R|`.
///
/// Every vertex of `S_R` is at distance exactly `R` from the fire, so the fire
/// cannot reach the sphere before time `R`, by which point it is protected.
#[derive(Debug, Clone)]
pub struct SphereBarricade {
    radius: usize,
    sphere: Vec<VertexId>,
    sphere_sizes: Vec<usize>,
}

impl SphereBarricade {
    pub const DEFAULT_MAX_RADIUS: usize = 64;

    /// Only two consecutive spheres are held in memory; `cap` bounds the size
    /// of any single sphere.
    pub fn new(
        g: &dyn GraphProvider,
        x0: &[VertexId],
        schedule: BudgetSchedule,
        r_max: usize,
        cap: usize,
    ) -> Result<Self, StrategyError> {
        if x0.is_empty() {
            return Err(GraphError::EmptyCenter.into());
        }
        let mut prev: HashSet<VertexId> = HashSet::new();
        let mut cur: HashSet<VertexId> = x0.iter().cloned().collect();
        let mut sphere_sizes = vec![cur.len()];
        let mut cumulative = 0usize;
        for r in 1..=r_max {
            let mut next = HashSet::new();
            for v in &cur {
                for w in g.neighbors(v)? {
                    if !prev.contains(&w) && !cur.contains(&w) && next.insert(w) && next.len() > cap
                    {
                        return Err(GraphError::CapExceeded { cap }.into());
                    }
                }
            }
            sphere_sizes.push(next.len());
            cumulative = cumulative.saturating_add(schedule.budget(r));
            if next.len() <= cumulative {
                let mut sphere: Vec<VertexId> = next.into_iter().collect();
                sphere.sort();
                return Ok(SphereBarricade {
                    radius: r,
                    sphere,
                    sphere_sizes,
                });
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Err(StrategyError::NoFeasibleRadius { r_max })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// The barricade sphere in protection order.
    pub fn sphere(&self) -> &[VertexId] {
        &self.sphere
    }

    /// `|S_0|, …, |S_R|` as computed during the radius search.
    pub fn sphere_sizes(&self) -> &[usize] {
        &self.sphere_sizes
    }
}

impl Strategy for SphereBarricade {
    fn name(&self) -> String {
        "sphere-barricade".into()
    }

    fn choose(
        &mut self,
        state: &FireState,
        _: &dyn GraphProvider,
        budget: usize,
    ) -> Result<Vec<VertexId>, StrategyError> {
        Ok(self
            .sphere
            .iter()
            .filter(|v| state.is_open(v))
            .take(budget)
            .cloned()
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DEFAULT_VERTEX_CAP;
    use crate::groups::{GraphSpec, RegularTree};
    use crate::play::{play, Outcome};

    #[test]
    fn z2_constant_six() {
        let g = GraphSpec::Grid { dim: 2 }.build().unwrap();
        let x0 = vec![g.basepoint()];
        let sched = BudgetSchedule::constant(6);
        let mut s = SphereBarricade::new(&*g, &x0, sched, 64, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(s.radius(), 1);
        let r = play(&*g, &x0, sched, &mut s, 20).unwrap();
        assert_eq!(r.outcome, Outcome::Contained);
        assert_eq!(r.contained_at, Some(1));
    }

    #[test]
    fn line_budget_one_needs_radius_two() {
        let g = GraphSpec::Grid { dim: 1 }.build().unwrap();
        let x0 = vec![g.parse_vertex("0").unwrap()];
        let sched = BudgetSchedule::constant(1);
        let mut s = SphereBarricade::new(&*g, &x0, sched, 64, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(s.radius(), 2);
        assert_eq!(s.sphere_sizes(), &[1, 2, 2]);
        let r = play(&*g, &x0, sched, &mut s, 20).unwrap();
        assert_eq!(r.outcome, Outcome::Contained);
        assert!(r.contained_at.unwrap() <= 2);
        assert_eq!(r.final_fire_size, 3);
    }

    #[test]
    fn tree_has_no_feasible_radius() {
        let g = RegularTree::new(3).unwrap();
        let err = SphereBarricade::new(
            &g,
            &[g.basepoint()],
            BudgetSchedule::constant(1),
            20,
            DEFAULT_VERTEX_CAP,
        )
        .unwrap_err();
        assert_eq!(err, StrategyError::NoFeasibleRadius { r_max: 20 });
    }
}
