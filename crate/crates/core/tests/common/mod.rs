//! Shared helpers for the integration suites: exhaustive plan enumeration
//! (the optimality oracle) and an independently assembled curtailment LP.
//!
//! The enumeration oracle deliberately goes through `Evaluator::evaluate`
//! only — never through the master/MILP machinery it is used to check — and
//! the hand-built LP below goes through neither.

use gridplan_core::feasibility::{Evaluator, ExpansionPlan, Scenario};
use gridplan_core::lp::{self, LinearProgram, Relation};
use gridplan_core::network::Topology;

/// Cheapest plan with at most `max_additions` built circuits that clears
/// every scenario, by brute force over all candidate subsets. Returns the
/// plan and its cost.
pub fn enumerate_optimal(
    evaluator: &Evaluator,
    scenarios: &[Scenario],
    max_additions: usize,
) -> Option<(ExpansionPlan, f64)> {
    let topo = evaluator.topology();
    let nc = topo.n_candidates();
    assert!(nc <= 24, "enumeration oracle is for desk-scale instances");
    let mut best: Option<(ExpansionPlan, f64)> = None;
    for mask in 0u32..(1 << nc) {
        if (mask.count_ones() as usize) > max_additions {
            continue;
        }
        let decisions: Vec<bool> = (0..nc).map(|k| mask & (1 << k) != 0).collect();
        let plan = ExpansionPlan::new(topo, decisions);
        if let Some((_, cost)) = &best {
            if plan.total_cost() >= *cost {
                continue;
            }
        }
        let feasible = scenarios.iter().all(|sc| {
            evaluator
                .evaluate(&plan, sc)
                .map(|r| r.is_feasible())
                .unwrap_or(false)
        });
        if feasible {
            let cost = plan.total_cost();
            best = Some((plan, cost));
        }
    }
    best
}

/// All overload-free plans (no addition cap), as decision masks. Used by the
/// cut-validity checks.
pub fn feasible_masks(evaluator: &Evaluator, scenario: &Scenario) -> Vec<u32> {
    let topo = evaluator.topology();
    let nc = topo.n_candidates();
    assert!(nc <= 24);
    let mut out = Vec::new();
    for mask in 0u32..(1 << nc) {
        let decisions: Vec<bool> = (0..nc).map(|k| mask & (1 << k) != 0).collect();
        let plan = ExpansionPlan::new(topo, decisions);
        if evaluator.evaluate(&plan, scenario).map(|r| r.is_feasible()).unwrap_or(false) {
            out.push(mask);
        }
    }
    out
}

pub fn plan_from_mask(topo: &Topology, mask: u32) -> ExpansionPlan {
    let nc = topo.n_candidates();
    ExpansionPlan::new(topo, (0..nc).map(|k| mask & (1 << k) != 0).collect())
}

/// Straightforward curtailment LP written out by hand, independent of the
/// production assembly: explicit flow-limit and curtailment rows, reference
/// angles pinned, disjunction handled by simply omitting unbuilt candidates.
/// Returns the minimum total curtailment.
pub fn hand_built_curtailment(
    topo: &Topology,
    plan: &ExpansionPlan,
    scenario: &Scenario,
) -> f64 {
    let nb = topo.n_buses();
    // circuits in service: existing plus built candidates
    let mut in_service: Vec<usize> = topo.existing_positions().to_vec();
    for (k, &p) in topo.candidate_positions().iter().enumerate() {
        if plan.is_built(k) {
            in_service.push(p);
        }
    }
    let nf = in_service.len();
    // variables: flows, angles, curtailment, spill
    let var_f = 0;
    let var_t = nf;
    let var_r = nf + nb;
    let var_s = nf + 2 * nb;
    let mut prob = LinearProgram::new(nf + 3 * nb);
    let d = scenario.effective_load();
    let g = scenario.effective_generation();
    for b in 0..nb {
        prob.set_bounds(var_t + b, -1e5, 1e5);
        prob.set_bounds(var_r + b, 0.0, d[b]);
        prob.set_objective(var_r + b, 1.0);
        prob.set_bounds(var_s + b, 0.0, g[b]);
    }
    // pin the lowest bus of every in-service component
    {
        let mut parent: Vec<usize> = (0..nb).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for &p in &in_service {
            let (u, v) = topo.endpoints(p);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
        let mut seen = vec![false; nb];
        for b in 0..nb {
            let r = find(&mut parent, b);
            if !seen[r] {
                seen[r] = true;
                prob.set_bounds(var_t + b, 0.0, 0.0);
            }
        }
    }
    for (i, &p) in in_service.iter().enumerate() {
        let cap = topo.circuit(p).effective_limit();
        let gamma = topo.susceptance_mw(p);
        let (u, v) = topo.endpoints(p);
        // f = gamma (tu - tv)
        prob.add_row(
            &[(var_f + i, 1.0), (var_t + u, -gamma), (var_t + v, gamma)],
            Relation::Eq,
            0.0,
        );
        if cap.is_finite() {
            prob.add_row(&[(var_f + i, 1.0)], Relation::Le, cap);
            prob.add_row(&[(var_f + i, 1.0)], Relation::Ge, -cap);
        }
    }
    for b in 0..nb {
        let mut terms: Vec<(usize, f64)> = Vec::new();
        for (i, &p) in in_service.iter().enumerate() {
            let (u, v) = topo.endpoints(p);
            if u == b {
                terms.push((var_f + i, 1.0));
            } else if v == b {
                terms.push((var_f + i, -1.0));
            }
        }
        terms.push((var_s + b, 1.0));
        terms.push((var_r + b, -1.0));
        prob.add_row(&terms, Relation::Eq, g[b] - d[b]);
    }
    let sol = lp::solve_lp(&prob).expect("well-formed LP");
    assert!(sol.is_optimal(), "hand-built LP must solve: {:?}", sol.status);
    sol.objective.max(0.0)
}
