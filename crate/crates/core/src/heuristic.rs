//! Greedy severity-ranked expansion heuristic.
//!
//! Each round evaluates every scenario at the current plan, ranks the
//! overloaded ones by total MW of circuit violations with a diversity filter
//! on their overload sets, and solves one MILP that must clear the K worst
//! while keeping previously chosen reinforcements. Chosen circuits accrete
//! until no scenario overloads; a final pass drops reinforcements whose
//! removal overloads nothing, costliest first.
//!
//! Every overloaded evaluation along the way yields a feasibility cut for
//! free; the pool is returned for warm-starting the exact decomposition and
//! is also added to each MILP as strengthening rows.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::benders::{derive_cut, evaluate_all, BendersError, CutOrigin, FeasibilityCut};
use crate::feasibility::{
    Evaluator, ExpansionPlan, FeasibilityError, FeasibilityResult, Scenario, Z_TOL_MW,
};
use crate::lp::{self, LinearProgram, LpStatus, Relation, SolverOptions};

/// Number of worst scenarios per MILP when not configured.
pub const DEFAULT_K: usize = 5;

/// Jaccard similarity threshold for the diversity filter.
pub const DEFAULT_DIVERSITY: f64 = 0.5;

/// Iteration cap per planning year.
pub const MAX_ITERATIONS: usize = 50;

const ANGLE_BOX: f64 = 1.0e4;

#[derive(Debug, Clone)]
pub struct HeuristicOptions {
    /// Scenarios per MILP; `None` means [`DEFAULT_K`].
    pub k: Option<usize>,
    pub diversity_threshold: f64,
    pub max_iterations: usize,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        Self { k: None, diversity_threshold: DEFAULT_DIVERSITY, max_iterations: MAX_ITERATIONS }
    }
}

/// One ranked overloaded scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankEntry {
    pub scenario_index: usize,
    pub scenario_id: String,
    pub severity_mw: f64,
    pub overloaded_circuits: Vec<String>,
}

/// Severity ranking with the diversity-filtered selection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioRanking {
    /// Overloaded scenarios, severity nonincreasing (ties by scenario id).
    pub ranked: Vec<RankEntry>,
    /// Indices (into the scenario slice) of the chosen K.
    pub selection: Vec<usize>,
}

/// Per-iteration record of the accretion loop.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub overloaded_scenarios: usize,
    pub selected: Vec<String>,
    pub milp_objective: f64,
    pub reinforcements_added: Vec<String>,
}

/// Outcome of one tentative removal in the redundancy pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RedundancyRecord {
    pub candidate: String,
    pub cost: f64,
    pub removed: bool,
    /// First scenario that overloads when the circuit is dropped.
    pub blocking_scenario: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct HeuristicTrace {
    pub iterations: Vec<IterationRecord>,
    pub redundancy: Vec<RedundancyRecord>,
    /// Investment before the redundancy pass.
    pub cost_before_elimination: f64,
}

#[derive(Debug, Clone)]
pub struct HeuristicOutcome {
    pub plan: ExpansionPlan,
    pub trace: HeuristicTrace,
    /// Cuts harvested from overloaded evaluations, for warm-starting.
    pub cuts: Vec<FeasibilityCut>,
}

#[derive(Debug, Error)]
pub enum HeuristicError {
    #[error("candidate set cannot clear scenarios {scenarios:?} even fully built")]
    InsufficientCandidates { scenarios: Vec<String> },
    #[error("no overload-free plan after {iterations} iterations ({overloaded} scenarios still overloaded)")]
    IterationCap { iterations: usize, overloaded: usize, trace: Box<HeuristicTrace> },
    #[error("redundancy elimination requires an overload-free input plan; scenario '{scenario}' has z = {z}")]
    InfeasibleInput { scenario: String, z: f64 },
    #[error("scenario MILP reported {status:?}")]
    MilpFailed { status: LpStatus },
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error(transparent)]
    Cut(#[from] BendersError),
    #[error(transparent)]
    Lp(#[from] lp::LpError),
}

fn jaccard(a: &[String], b: &[String]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let inter = a.iter().filter(|x| b.contains(x)).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Ranks already-evaluated scenarios and picks `min(k, overloaded)` of them:
/// greedy by severity, admitting a scenario only when its overload set has
/// Jaccard similarity at most `threshold` with everything already selected;
/// the threshold doubles whenever no scenario qualifies.
pub fn rank_from_results(
    results: &[FeasibilityResult],
    k: usize,
    threshold: f64,
) -> ScenarioRanking {
    let mut ranked: Vec<RankEntry> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| r.z_value > Z_TOL_MW)
        .map(|(i, r)| RankEntry {
            scenario_index: i,
            scenario_id: r.scenario.clone(),
            severity_mw: r.severity_mw,
            overloaded_circuits: r.violation_ids(),
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.severity_mw
            .total_cmp(&a.severity_mw)
            .then_with(|| a.scenario_id.cmp(&b.scenario_id))
    });

    let want = k.min(ranked.len());
    let mut selection: Vec<usize> = Vec::with_capacity(want);
    let mut chosen_sets: Vec<&RankEntry> = Vec::with_capacity(want);
    let mut theta = threshold;
    while selection.len() < want {
        let pick = ranked.iter().find(|e| {
            !selection.contains(&e.scenario_index)
                && chosen_sets
                    .iter()
                    .all(|s| jaccard(&e.overloaded_circuits, &s.overloaded_circuits) <= theta)
        });
        match pick {
            Some(e) => {
                selection.push(e.scenario_index);
                chosen_sets.push(e);
            }
            None => theta *= 2.0,
        }
    }
    ScenarioRanking { ranked, selection }
}

/// Evaluates all scenarios at `plan` and ranks them.
pub fn rank_scenarios(
    evaluator: &Evaluator,
    plan: &ExpansionPlan,
    scenarios: &[Scenario],
    k: usize,
) -> Result<ScenarioRanking, HeuristicError> {
    let results = evaluate_all(evaluator, plan, scenarios)?;
    Ok(rank_from_results(&results, k, DEFAULT_DIVERSITY))
}

/// Solves the robust MILP for a scenario subset: minimize investment cost
/// such that each selected scenario runs overload-free (no curtailment) and
/// every circuit of `fixed` stays built. Returns the optimal plan plus
/// feasibility cuts derived from the selected scenarios at `fixed`.
pub fn solve_k_milp(
    evaluator: &Evaluator,
    scenarios: &[Scenario],
    selection: &[usize],
    fixed: &ExpansionPlan,
    warm_cuts: &[FeasibilityCut],
) -> Result<(ExpansionPlan, Vec<FeasibilityCut>), HeuristicError> {
    let topo = evaluator.topology();
    let nc = topo.n_candidates();

    // cuts for the selected scenarios at the incoming plan; they also
    // strengthen the MILP below
    let mut exported: Vec<FeasibilityCut> = Vec::new();
    for &s in selection {
        let r = evaluator.evaluate(fixed, &scenarios[s])?;
        if !r.is_feasible() {
            exported.push(derive_cut(
                evaluator,
                &r,
                fixed,
                CutOrigin::HeuristicExport { scenario: r.scenario.clone() },
            )?);
        }
    }

    let prob = assemble_k_milp(evaluator, scenarios, selection, fixed, warm_cuts, &exported);
    let sol = lp::solve_mip_with(&prob, &SolverOptions::default())?;
    log::debug!(
        "scenario MILP: {} rows, {} vars, {} nodes, {} simplex iterations",
        prob.n_rows(),
        prob.n_vars(),
        sol.nodes,
        sol.iterations
    );
    if std::env::var_os("GRIDPLAN_MILP_STATS").is_some() {
        eprintln!(
            "scenario MILP: {} rows, {} vars, {} nodes, {} simplex iterations",
            prob.n_rows(), prob.n_vars(), sol.nodes, sol.iterations
        );
    }
    match sol.status {
        LpStatus::Optimal => {
            let decisions = (0..nc).map(|k| sol.primal[k] > 0.5).collect();
            Ok((ExpansionPlan::new(topo, decisions), exported))
        }
        LpStatus::Infeasible => {
            let all = ExpansionPlan::all_built(topo);
            let mut bad = Vec::new();
            for &s in selection {
                let r = evaluator.evaluate(&all, &scenarios[s])?;
                if !r.is_feasible() {
                    bad.push(r.scenario);
                }
            }
            Err(HeuristicError::InsufficientCandidates { scenarios: bad })
        }
        status => Err(HeuristicError::MilpFailed { status }),
    }
}

/// One investment vector, plus a no-curtailment operating block per selected
/// scenario. Spill stays available so exports can be dumped; curtailment is
/// not, which forces the overloads to zero.
fn assemble_k_milp(
    evaluator: &Evaluator,
    scenarios: &[Scenario],
    selection: &[usize],
    fixed: &ExpansionPlan,
    warm_cuts: &[FeasibilityCut],
    exported: &[FeasibilityCut],
) -> LinearProgram {
    let topo = evaluator.topology();
    let nb = topo.n_buses();
    let ne = topo.n_existing();
    let nc = topo.n_candidates();
    let block = ne + nc + 2 * nb; // flows, angles, spill
    let mut prob = LinearProgram::new(nc + selection.len() * block);

    for k in 0..nc {
        prob.set_objective(k, topo.candidate_cost(k));
        prob.mark_binary(k);
        if fixed.is_built(k) {
            prob.set_bounds(k, 1.0, 1.0);
        }
    }

    for (si, &s) in selection.iter().enumerate() {
        let sc = &scenarios[s];
        let base = nc + si * block;
        let var_fe = base;
        let var_fc = base + ne;
        let var_angle = base + ne + nc;
        let var_spill = base + ne + nc + nb;
        let d_eff = sc.effective_load();
        let g_eff = sc.effective_generation();

        for (e, &p) in topo.existing_positions().iter().enumerate() {
            let cap = topo.circuit(p).effective_limit();
            prob.set_bounds(var_fe + e, -cap, cap);
        }
        for (k, &p) in topo.candidate_positions().iter().enumerate() {
            let cap = topo.circuit(p).effective_limit();
            prob.set_bounds(var_fc + k, -cap, cap);
        }
        for b in 0..nb {
            prob.set_bounds(var_angle + b, -ANGLE_BOX, ANGLE_BOX);
            prob.set_bounds(var_spill + b, 0.0, g_eff[b]);
        }
        for &r in &topo.references {
            prob.set_bounds(var_angle + r, 0.0, 0.0);
        }

        let mut balance: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nb];
        for (e, &p) in topo.existing_positions().iter().enumerate() {
            let (u, v) = topo.endpoints(p);
            balance[u].push((var_fe + e, 1.0));
            balance[v].push((var_fe + e, -1.0));
        }
        for (k, &p) in topo.candidate_positions().iter().enumerate() {
            let (u, v) = topo.endpoints(p);
            balance[u].push((var_fc + k, 1.0));
            balance[v].push((var_fc + k, -1.0));
        }
        for b in 0..nb {
            let mut terms = std::mem::take(&mut balance[b]);
            terms.push((var_spill + b, 1.0));
            let row = prob.add_row(&terms, Relation::Eq, g_eff[b] - d_eff[b]);
            prob.hint_basis(row, var_spill + b);
        }
        for (e, &p) in topo.existing_positions().iter().enumerate() {
            let (u, v) = topo.endpoints(p);
            let gamma = topo.susceptance_mw(p);
            prob.add_row(
                &[(var_fe + e, 1.0), (var_angle + u, -gamma), (var_angle + v, gamma)],
                Relation::Eq,
                0.0,
            );
        }
        for (k, &p) in topo.candidate_positions().iter().enumerate() {
            let (u, v) = topo.endpoints(p);
            let gamma = topo.susceptance_mw(p);
            let m = evaluator.big_m(k);
            // |f - gamma dtheta| <= M (1 - x)
            for sign in [1.0, -1.0] {
                prob.add_row(
                    &[
                        (var_fc + k, sign),
                        (var_angle + u, -sign * gamma),
                        (var_angle + v, sign * gamma),
                        (k, m),
                    ],
                    Relation::Le,
                    m,
                );
            }
            // |f| <= cap * x
            let cap = topo.circuit(p).effective_limit();
            if cap.is_finite() {
                prob.add_row(&[(var_fc + k, 1.0), (k, -cap)], Relation::Le, 0.0);
                prob.add_row(&[(var_fc + k, -1.0), (k, -cap)], Relation::Le, 0.0);
            }
        }
    }

    for cut in warm_cuts.iter().chain(exported) {
        let terms: Vec<(usize, f64)> = cut
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > 0.0)
            .map(|(k, c)| (k, *c))
            .collect();
        prob.add_row(&terms, Relation::Le, -cut.constant);
    }

    prob
}

/// Removes invested circuits whose simulated removal leaves every scenario
/// overload-free, in strictly decreasing cost order (equal costs: higher id
/// first). The result is feasible and never costlier than the input.
pub fn eliminate_redundancy(
    evaluator: &Evaluator,
    plan: &ExpansionPlan,
    scenarios: &[Scenario],
) -> Result<(ExpansionPlan, Vec<RedundancyRecord>), HeuristicError> {
    let topo = evaluator.topology();
    for sc in scenarios {
        let r = evaluator.evaluate(plan, sc)?;
        if !r.is_feasible() {
            return Err(HeuristicError::InfeasibleInput { scenario: r.scenario, z: r.z_value });
        }
    }

    let mut built: Vec<(usize, f64, String)> = plan
        .decisions()
        .iter()
        .enumerate()
        .filter(|(_, b)| **b)
        .map(|(k, _)| {
            let id = topo.circuit_ids()[topo.candidate_positions()[k]].clone();
            (k, topo.candidate_cost(k), id)
        })
        .collect();
    built.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| b.2.cmp(&a.2)));

    let mut current = plan.clone();
    let mut records = Vec::with_capacity(built.len());
    for (k, cost, id) in built {
        let trial = current.with_decision(topo, k, false);
        let blocking = scenarios
            .par_iter()
            .map(|sc| evaluator.evaluate(&trial, sc))
            .find_map_first(|res| match res {
                Ok(r) if !r.is_feasible() => Some(Ok(r.scenario)),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            })
            .transpose()?;
        match blocking {
            None => {
                current = trial;
                records.push(RedundancyRecord { candidate: id, cost, removed: true, blocking_scenario: None });
            }
            Some(scenario) => {
                records.push(RedundancyRecord {
                    candidate: id,
                    cost,
                    removed: false,
                    blocking_scenario: Some(scenario),
                });
            }
        }
    }
    Ok((current, records))
}

/// Runs the full heuristic for one planning year.
pub fn plan_year(
    evaluator: &Evaluator,
    scenarios: &[Scenario],
    options: &HeuristicOptions,
) -> Result<HeuristicOutcome, HeuristicError> {
    let k = options.k.unwrap_or(DEFAULT_K);
    let mut plan = ExpansionPlan::empty(evaluator.topology());
    let mut trace = HeuristicTrace::default();
    let mut cuts: Vec<FeasibilityCut> = Vec::new();

    let mut iteration = 0;
    loop {
        let results = evaluate_all(evaluator, &plan, scenarios)?;
        for r in &results {
            if !r.is_feasible() {
                let cut = derive_cut(
                    evaluator,
                    r,
                    &plan,
                    CutOrigin::HeuristicExport { scenario: r.scenario.clone() },
                )?;
                if !cuts.contains(&cut) {
                    cuts.push(cut);
                }
            }
        }
        let overloaded = results.iter().filter(|r| !r.is_feasible()).count();
        if overloaded == 0 {
            break;
        }
        if iteration >= options.max_iterations {
            return Err(HeuristicError::IterationCap {
                iterations: iteration,
                overloaded,
                trace: Box::new(trace),
            });
        }
        iteration += 1;

        let ranking = rank_from_results(&results, k, options.diversity_threshold);
        let selected_ids: Vec<String> = ranking
            .selection
            .iter()
            .map(|&s| scenarios[s].id.clone())
            .collect();
        let (next, exported) =
            solve_k_milp(evaluator, scenarios, &ranking.selection, &plan, &cuts)?;
        for cut in exported {
            if !cuts.contains(&cut) {
                cuts.push(cut);
            }
        }
        debug_assert!(plan.subset_of(&next), "reinforcements must accrete");
        let added: Vec<String> = next
            .built_ids(evaluator.topology())
            .into_iter()
            .filter(|id| !plan.built_ids(evaluator.topology()).contains(id))
            .collect();
        trace.iterations.push(IterationRecord {
            iteration,
            overloaded_scenarios: overloaded,
            selected: selected_ids,
            milp_objective: next.total_cost(),
            reinforcements_added: added,
        });
        plan = next;
    }

    trace.cost_before_elimination = plan.total_cost();
    let (pruned, records) = eliminate_redundancy(evaluator, &plan, scenarios)?;
    trace.redundancy = records;
    Ok(HeuristicOutcome { plan: pruned, trace, cuts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Bus, Circuit, Network};

    fn mini(cands: &[(&str, f64)]) -> (Evaluator, Vec<Scenario>) {
        let mut circuits = vec![Circuit::existing("e1", "A", "B", 1.0, 60.0)];
        for (id, cost) in cands {
            circuits.push(Circuit::candidate(*id, "A", "B", 1.0, 60.0, *cost));
        }
        let net = Network::new(vec![Bus::new("A"), Bus::new("B")], circuits);
        let ev = Evaluator::new(&net).unwrap();
        let sc = Scenario::from_bus_data(
            ev.topology(),
            "peak",
            [("A", 0.0, 100.0), ("B", 100.0, 0.0)],
        )
        .unwrap();
        (ev, vec![sc])
    }

    #[test]
    fn feasible_network_needs_no_iterations() {
        let (ev, _) = mini(&[("c1", 10.0)]);
        let calm = Scenario::from_bus_data(
            ev.topology(),
            "calm",
            [("A", 0.0, 50.0), ("B", 50.0, 0.0)],
        )
        .unwrap();
        let out = plan_year(&ev, &[calm], &HeuristicOptions::default()).unwrap();
        assert_eq!(out.plan.n_built(), 0);
        assert!(out.trace.iterations.is_empty());
        assert!(out.cuts.is_empty());
    }

    #[test]
    fn single_bottleneck_selects_the_single_candidate() {
        let (ev, scenarios) = mini(&[("c1", 10.0)]);
        let ranking = rank_scenarios(&ev, &ExpansionPlan::empty(ev.topology()), &scenarios, 5)
            .unwrap();
        assert_eq!(ranking.selection, vec![0]);
        let out = plan_year(&ev, &scenarios, &HeuristicOptions::default()).unwrap();
        assert_eq!(out.plan.built_ids(ev.topology()), vec!["c1"]);
        assert_eq!(out.trace.iterations.len(), 1);
        assert!(!out.cuts.is_empty());
    }

    #[test]
    fn all_scenarios_feasible_gives_empty_selection() {
        let results: Vec<FeasibilityResult> = Vec::new();
        let ranking = rank_from_results(&results, 5, DEFAULT_DIVERSITY);
        assert!(ranking.selection.is_empty());
        assert!(ranking.ranked.is_empty());
    }

    #[test]
    fn identical_overload_sets_need_threshold_relaxation() {
        // three synthetic results with identical overload sets, severities
        // 30/20/10; K = 2 must pick the top two after doubling the threshold
        let (ev, scenarios) = mini(&[("c1", 10.0)]);
        let base = ev.evaluate(&ExpansionPlan::empty(ev.topology()), &scenarios[0]).unwrap();
        let mut results = Vec::new();
        for (i, sev) in [30.0, 20.0, 10.0].into_iter().enumerate() {
            let mut r = base.clone();
            r.scenario = format!("s{i}");
            r.severity_mw = sev;
            results.push(r);
        }
        let ranking = rank_from_results(&results, 2, 0.5);
        assert_eq!(ranking.ranked.len(), 3);
        assert_eq!(ranking.selection, vec![0, 1]);
        assert_eq!(results[ranking.selection[0]].severity_mw, 30.0);
        assert_eq!(results[ranking.selection[1]].severity_mw, 20.0);
    }

    #[test]
    fn zero_cost_candidates_tie_break_lexicographically() {
        let (ev, scenarios) = mini(&[("c1", 0.0), ("c2", 0.0)]);
        let (plan, _) = solve_k_milp(
            &ev,
            &scenarios,
            &[0],
            &ExpansionPlan::empty(ev.topology()),
            &[],
        )
        .unwrap();
        // both candidates free and either suffices: the lexicographically
        // smallest decision vector builds the later one
        assert_eq!(plan.built_ids(ev.topology()), vec!["c2"]);
    }

    #[test]
    fn insufficient_candidates_name_the_stuck_scenarios() {
        let net = Network::new(
            vec![Bus::new("A"), Bus::new("B")],
            vec![
                Circuit::existing("e1", "A", "B", 1.0, 60.0),
                Circuit::candidate("c1", "A", "B", 1.0, 10.0, 5.0),
            ],
        );
        let ev = Evaluator::new(&net).unwrap();
        let sc = Scenario::from_bus_data(
            ev.topology(),
            "peak",
            [("A", 0.0, 100.0), ("B", 100.0, 0.0)],
        )
        .unwrap();
        let err = plan_year(&ev, &[sc], &HeuristicOptions::default());
        match err {
            Err(HeuristicError::InsufficientCandidates { scenarios }) => {
                assert_eq!(scenarios, vec!["peak"]);
            }
            other => panic!("expected InsufficientCandidates, got {other:?}"),
        }
    }

    #[test]
    fn redundant_duplicate_is_pruned_higher_id_first() {
        // two identical parallel candidates, one suffices; ties are broken by
        // removing the higher id
        let (ev, scenarios) = mini(&[("c1", 10.0), ("c2", 10.0)]);
        let both = ExpansionPlan::all_built(ev.topology());
        let (pruned, records) = eliminate_redundancy(&ev, &both, &scenarios).unwrap();
        assert_eq!(pruned.built_ids(ev.topology()), vec!["c1"]);
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].candidate, "c2");
        assert!(records[0].removed);
        assert_eq!(records[1].candidate, "c1");
        assert!(!records[1].removed);
        assert_eq!(records[1].blocking_scenario.as_deref(), Some("peak"));
        assert!(pruned.total_cost() <= both.total_cost());
    }

    #[test]
    fn unloaded_corridor_candidate_is_removed() {
        let net = Network::new(
            vec![Bus::new("A"), Bus::new("B"), Bus::new("C")],
            vec![
                Circuit::existing("e1", "A", "B", 1.0, 60.0),
                Circuit::existing("e2", "B", "C", 1.0, 100.0),
                Circuit::candidate("c1", "A", "B", 1.0, 60.0, 10.0),
                Circuit::candidate("c2", "B", "C", 1.0, 100.0, 1.0),
            ],
        );
        let ev = Evaluator::new(&net).unwrap();
        let sc = Scenario::from_bus_data(
            ev.topology(),
            "peak",
            [("A", 0.0, 100.0), ("B", 100.0, 0.0), ("C", 0.0, 0.0)],
        )
        .unwrap();
        let both = ExpansionPlan::all_built(ev.topology());
        let (pruned, _) = eliminate_redundancy(&ev, &both, &[sc]).unwrap();
        assert_eq!(pruned.built_ids(ev.topology()), vec!["c1"]);
    }

    #[test]
    fn redundancy_rejects_infeasible_input() {
        let (ev, scenarios) = mini(&[("c1", 10.0)]);
        let empty = ExpansionPlan::empty(ev.topology());
        let err = eliminate_redundancy(&ev, &empty, &scenarios);
        assert!(matches!(err, Err(HeuristicError::InfeasibleInput { .. })));
    }
}
