use std::sync::Arc;

use sr2fista::ode::{integrate_from, OdeState};
use sr2fista::solver::{sr2fista_step, SolverState};
use sr2fista::zoo::{build_two_block, two_block_start, quadratic_mcp};
use sr2fista::*;

fn unit_quadratic() -> ProblemSpec {
    let g = Arc::new(DiagonalQuadratic::new(vec![1.0], vec![0.0]).unwrap());
    ProblemSpec::new(g, Arc::new(Regularizer::Zero), 1)
        .unwrap()
        .with_optimum(vec![0.0])
        .unwrap()
}

#[test]
fn one_step_tracks_the_flow_to_second_order() {
    // A = sinh²(√m t)/m, so the increment A → A⁺ spans t(A) → t(A⁺).
    let p = unit_quadratic();
    let m: f64 = 0.5;
    let t_of = |a: f64| (m * a).sqrt().asinh() / m.sqrt();
    let mut constants = Vec::new();
    for alpha in [1e3, 1e4, 1e5, 1e6, 1e7] {
        let sp = ScheduleParams::new(alpha, m, 0.0).unwrap();
        let s = SolverState {
            k: 5,
            x: vec![1.0],
            v: vec![0.5],
            a: 1.0,
            lipschitz: alpha,
        };
        let next = sr2fista_step(&s, &p, &sp).unwrap().state;
        let start = OdeState {
            t: t_of(1.0),
            x: vec![1.0],
            v: vec![0.5],
        };
        let flow = integrate_from(&p, m, start, t_of(next.a), 200).unwrap();
        let err = (next.x[0] - flow.x[0]).hypot(next.v[0] - flow.v[0]);
        let da = next.a - 1.0;
        assert!(err <= da * da, "alpha = {alpha}: err {err:e}, dA {da:e}");
        constants.push(err / (da * da));
    }
    let (lo, hi) = constants
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
    assert!(hi / lo < 1.2, "{constants:?}");
}

#[test]
fn two_block_first_step_decreases_objective() {
    let p = build_two_block();
    let sp = ScheduleParams::for_problem(&p, BetaMode::Compromised).unwrap();
    let s = SolverState::new(two_block_start(), p.lipschitz());
    let next = sr2fista_step(&s, &p, &sp).unwrap().state;
    assert!(next.x.iter().all(|x| x.is_finite()));
    assert!(p.evaluate_f(&next.x).unwrap() < p.evaluate_f(&s.x).unwrap());
}

#[test]
fn two_block_accelerated_beats_ista() {
    let p = build_two_block();
    let cfg = SolverConfig {
        max_iters: 100,
        ..Default::default()
    };
    let fast = solve(&p, &cfg, two_block_start(), Algorithm::Sr2Fista).unwrap();
    let slow = solve(&p, &cfg, two_block_start(), Algorithm::Ista).unwrap();
    let gap = |o: &SolveOutput| o.trace.last().unwrap().f_gap;
    assert!(gap(&slow) > gap(&fast));
}

#[test]
fn two_block_converges_in_2000_iterations() {
    let p = build_two_block();
    let cfg = SolverConfig {
        max_iters: 2000,
        trace_every: 2000,
        ..Default::default()
    };
    let out = solve(&p, &cfg, two_block_start(), Algorithm::Sr2Fista).unwrap();
    let (first, last) = (out.trace.first().unwrap(), out.trace.last().unwrap());
    assert_eq!(last.k, 2000);
    assert!(last.f_gap <= 1e-6 * first.f_gap);
}

#[test]
fn two_block_backtracking_overshoots_at_most_twice() {
    let p = build_two_block();
    let cfg = SolverConfig {
        max_iters: 200,
        backtracking: Some(Backtracking {
            increase_factor: 2.0,
            initial_lipschitz: 1.0,
        }),
        ..Default::default()
    };
    let out = solve(&p, &cfg, two_block_start(), Algorithm::Sr2Fista).unwrap();
    assert!(out.state.lipschitz <= 2.0 * 5000.0);
    assert!(out.trace.last().unwrap().f_gap < out.trace[0].f_gap);
}

#[test]
fn solve_is_deterministic() {
    let p = quadratic_mcp(20, 1.0, 100.0, McpParams::new(1.0, 2.0).unwrap(), 5).unwrap();
    let cfg = SolverConfig {
        max_iters: 300,
        trace_every: 7,
        ..Default::default()
    };
    for algorithm in [Algorithm::Sr2Fista, Algorithm::Ista] {
        let a = solve(&p, &cfg, vec![1.0; 20], algorithm).unwrap();
        let b = solve(&p, &cfg, vec![1.0; 20], algorithm).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.state.x, b.state.x);
    }
}
