use firebreak_core::analysis::{
    calibrate_local_search, cheeger_exact_small, cheeger_local_search, folner_profile,
    generating_set_robustness, growth_profile, ExperimentStrategy, RobustnessExperiment,
    SubsetFamily,
};
use firebreak_core::game::BudgetSchedule;
use firebreak_core::graph::{ball, sphere_sizes, GraphProvider, DEFAULT_VERTEX_CAP};
use firebreak_core::groups::{GraphSpec, GroupKind, GroupSpec};
use firebreak_core::play::Outcome;
use num_rational::Ratio;
use proptest::prelude::*;

fn catalog() -> Vec<GraphSpec> {
    vec![
        GraphSpec::Grid { dim: 1 },
        GraphSpec::Grid { dim: 2 },
        GraphSpec::Grid { dim: 3 },
        GraphSpec::Heisenberg { generators: None },
        GraphSpec::Free {
            rank: 2,
            generators: None,
        },
        GraphSpec::Lamplighter { generators: None },
        GraphSpec::Bs12 { generators: None },
        GraphSpec::Grigorchuk { generators: None },
        GraphSpec::RegularTree { degree: 3 },
        GraphSpec::BeadChain {
            profile: Default::default(),
        },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn balls_are_sums_of_spheres(k in 0usize..10, r in 0usize..7) {
        let g = catalog()[k].build().unwrap();
        let p = growth_profile(&*g, &[g.basepoint()], r, None, DEFAULT_VERTEX_CAP).unwrap();
        let spheres = sphere_sizes(&*g, &[g.basepoint()], r, DEFAULT_VERTEX_CAP).unwrap();
        let mut acc = 0u64;
        for (n, s) in spheres.iter().enumerate() {
            acc += *s as u64;
            prop_assert_eq!(p.ball_sizes[n], acc);
        }
        prop_assert_eq!(p.ball_sizes[0], 1);
        prop_assert!(p.ball_sizes.windows(2).all(|w| w[0] < w[1]));
    }
}

/// exact <= local search <= the ball's own ratio, all with the ambient
/// boundary.
#[test]
fn cheeger_upper_bounds_chain() {
    for (spec, r) in [
        (GraphSpec::Grid { dim: 1 }, 5),
        (GraphSpec::Grid { dim: 2 }, 2),
        (GraphSpec::RegularTree { degree: 3 }, 2),
        (
            GraphSpec::Free {
                rank: 2,
                generators: None,
            },
            1,
        ),
        (GraphSpec::Heisenberg { generators: None }, 1),
        (GraphSpec::Lamplighter { generators: None }, 2),
    ] {
        let g = spec.build().unwrap();
        let b = ball(&*g, &[g.basepoint()], r, DEFAULT_VERTEX_CAP).unwrap();
        let fg = b.to_graph();
        let exact = cheeger_exact_small(&fg, SubsetFamily::AllNonEmpty, 20).unwrap();
        let local = cheeger_local_search(&fg, SubsetFamily::AllNonEmpty, 200, 4, 9).unwrap();
        let folner = Ratio::new(b.boundary_edges() as u64, b.len() as u64);
        assert!(exact.best_ratio <= local.best_ratio, "{}", g.name());
        assert!(local.best_ratio <= folner, "{}", g.name());
    }
}

#[test]
fn z2_folner_ratios_fall_below_a_fifth() {
    let g = GraphSpec::Grid { dim: 2 }.build().unwrap();
    let rows = folner_profile(&*g, &[g.basepoint()], 25, DEFAULT_VERTEX_CAP).unwrap();
    assert!(rows.windows(2).all(|w| w[1].ratio < w[0].ratio));
    assert!(rows[25].ratio < Ratio::new(1, 5));
}

#[test]
fn tree_ball_ratios_stay_at_least_one() {
    let g = GraphSpec::RegularTree { degree: 3 }.build().unwrap();
    let rows = folner_profile(&*g, &[g.basepoint()], 10, DEFAULT_VERTEX_CAP).unwrap();
    for r in rows {
        // A subtree with k vertices has k + 2 boundary edges.
        assert_eq!(r.boundary_edges, r.ball_size + 2);
        assert!(r.ratio >= Ratio::from_integer(1));
    }
}

#[test]
fn tree_local_search_stays_near_one() {
    let g = GraphSpec::RegularTree { degree: 3 }.build().unwrap();
    let small = ball(&*g, &[g.basepoint()], 2, DEFAULT_VERTEX_CAP)
        .unwrap()
        .to_graph();
    let eps = calibrate_local_search(&small, SubsetFamily::AllNonEmpty, 500, 8, 5).unwrap();
    let big = ball(&*g, &[g.basepoint()], 5, DEFAULT_VERTEX_CAP)
        .unwrap()
        .to_graph();
    let e = cheeger_local_search(&big, SubsetFamily::AllNonEmpty, 2000, 8, 5).unwrap();
    assert!(e.best_ratio + eps >= Ratio::from_integer(1));
}

#[test]
fn free_group_redundant_generators_agree() {
    let f2 = GroupSpec::new(GroupKind::Free { rank: 2 });
    let redundant = ["a", "A", "b", "B", "ab", "BA"].map(String::from).to_vec();
    let exp = RobustnessExperiment {
        strategy: ExperimentStrategy::GreedyFrontier,
        schedule: BudgetSchedule::constant(1),
        horizon: 10,
    };
    let r = generating_set_robustness(&f2, None, Some(redundant), &exp).unwrap();
    assert_eq!(r.a.outcome, Outcome::Undetermined);
    assert_eq!(r.b.outcome, Outcome::Undetermined);
    assert!(!r.disagree);
}
