//! Benders feasibility-cut decomposition.
//!
//! The master MIP picks investments under the accumulated cut pool; every
//! iteration evaluates all scenarios at the master plan and turns each still
//! overloaded scenario into a feasibility cut. When the master plan clears
//! every scenario, it is optimal: the master is a relaxation of the full
//! problem, so its objective is a global lower bound throughout.
//!
//! Cuts are affine underestimators of the scenario curtailment `z` in the
//! investment variables. With duals taken at the evaluated plan, the
//! coefficient of candidate `j` aggregates the disjunction-row shadows
//! (weighted by the candidate's big-M) and the flow-cap shadows (weighted by
//! its capacity), clamped nonpositive: building circuits never increases `z`
//! on the instances this model targets, so only improving directions carry
//! information.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feasibility::{
    Evaluator, ExpansionPlan, FeasibilityError, FeasibilityResult, Scenario, Z_TOL_MW,
};
use crate::lp::{self, LinearProgram, LpStatus, Relation, SolverOptions};

/// New cuts admitted per iteration, most violated scenarios first.
pub const MAX_CUTS_PER_ITERATION: usize = 30;

/// Where a cut came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutOrigin {
    /// Generated inside the Benders loop.
    Scenario { scenario: String, iteration: usize },
    /// Harvested during the heuristic and imported as a warm start.
    HeuristicExport { scenario: String },
}

impl CutOrigin {
    pub fn scenario_id(&self) -> &str {
        match self {
            CutOrigin::Scenario { scenario, .. } => scenario,
            CutOrigin::HeuristicExport { scenario } => scenario,
        }
    }
}

/// Affine inequality in the investment variables: plans that clear the
/// originating scenario satisfy `constant + coefficients . x <= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityCut {
    /// Per-candidate coefficients in candidate id order; all nonpositive.
    pub coefficients: Vec<f64>,
    pub constant: f64,
    pub origin: CutOrigin,
}

impl FeasibilityCut {
    /// Cut value at a plan; positive means the plan is cut off.
    pub fn value_at(&self, plan: &ExpansionPlan) -> f64 {
        let mut v = self.constant;
        for (k, built) in plan.decisions().iter().enumerate() {
            if *built {
                v += self.coefficients[k];
            }
        }
        v
    }

    /// Structural sanity: finite data, nonpositive coefficients, and a
    /// positive constant (the generating plan was violated).
    pub fn is_structurally_valid(&self) -> bool {
        self.constant.is_finite()
            && self
                .coefficients
                .iter()
                .all(|c| c.is_finite() && *c <= 1e-9)
    }
}

#[derive(Debug, Error)]
pub enum BendersError {
    #[error("cut requested for scenario '{scenario}' with z = {z}; only overloaded scenarios produce cuts")]
    NotViolated { scenario: String, z: f64 },
    #[error("no overload-free plan exists even with every candidate built; irreparable scenarios: {scenarios:?}")]
    Irreparable { scenarios: Vec<String> },
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
    #[error(transparent)]
    Lp(#[from] lp::LpError),
}

/// Iteration/time budget for [`solve`].
#[derive(Debug, Clone)]
pub struct SolveBudget {
    pub max_iterations: usize,
    pub time_limit: Option<Duration>,
}

impl Default for SolveBudget {
    fn default() -> Self {
        Self { max_iterations: 200, time_limit: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BendersStatus {
    Converged,
    IterationLimit,
    TimeLimit,
}

/// Final state of a decomposition run.
#[derive(Debug, Clone)]
pub struct BendersState {
    pub status: BendersStatus,
    pub iterations: usize,
    /// Master objective; a global lower bound, nondecreasing over iterations.
    pub lower_bound: f64,
    pub cuts: Vec<FeasibilityCut>,
    /// Scenario evaluations performed.
    pub evaluations: usize,
}

/// Derives a feasibility cut from an overloaded evaluation at `plan`.
pub fn derive_cut(
    evaluator: &Evaluator,
    result: &FeasibilityResult,
    plan: &ExpansionPlan,
    origin: CutOrigin,
) -> Result<FeasibilityCut, BendersError> {
    if result.z_value <= Z_TOL_MW {
        return Err(BendersError::NotViolated {
            scenario: result.scenario.clone(),
            z: result.z_value,
        });
    }
    let topo = evaluator.topology();
    let nc = topo.n_candidates();
    let mut coefficients = vec![0.0; nc];
    for k in 0..nc {
        let p = topo.candidate_positions()[k];
        let m = evaluator.big_m(k);
        let disj = result.duals.disjunction_upper[k] + result.duals.disjunction_lower[k];
        let cap = topo.circuit(p).effective_limit();
        let flow = result.duals.flow_upper_candidate[k] + result.duals.flow_lower_candidate[k];
        let raw = -m * disj + if cap.is_finite() { cap * flow } else { 0.0 };
        coefficients[k] = raw.min(0.0);
    }
    let mut constant = result.z_value;
    for (k, built) in plan.decisions().iter().enumerate() {
        if *built {
            constant -= coefficients[k];
        }
    }
    Ok(FeasibilityCut { coefficients, constant, origin })
}

/// Builds and solves the master MIP over the cut pool.
fn solve_master(
    evaluator: &Evaluator,
    cuts: &[FeasibilityCut],
    options: &SolverOptions,
) -> Result<Option<ExpansionPlan>, BendersError> {
    let topo = evaluator.topology();
    let nc = topo.n_candidates();
    let mut prob = LinearProgram::new(nc);
    for k in 0..nc {
        prob.set_objective(k, topo.candidate_cost(k));
        prob.mark_binary(k);
    }
    for cut in cuts {
        let terms: Vec<(usize, f64)> = cut
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > 0.0)
            .map(|(k, c)| (k, *c))
            .collect();
        prob.add_row(&terms, Relation::Le, -cut.constant);
    }
    let sol = lp::solve_mip_with(&prob, options)?;
    match sol.status {
        LpStatus::Optimal => {
            let decisions = (0..nc).map(|k| sol.primal[k] > 0.5).collect();
            Ok(Some(ExpansionPlan::new(topo, decisions)))
        }
        LpStatus::Infeasible => Ok(None),
        other => Err(BendersError::Feasibility(FeasibilityError::InternalInfeasible {
            scenario: format!("master MIP ({other:?})"),
            status: other,
        })),
    }
}

/// Scenarios that stay overloaded even with every candidate built.
fn irreparable_scenarios(
    evaluator: &Evaluator,
    scenarios: &[Scenario],
) -> Result<Vec<String>, BendersError> {
    let all = ExpansionPlan::all_built(evaluator.topology());
    let results = evaluate_all(evaluator, &all, scenarios)?;
    Ok(results
        .iter()
        .filter(|r| !r.is_feasible())
        .map(|r| r.scenario.clone())
        .collect())
}

/// Evaluates every scenario at a plan, in parallel, preserving input order.
pub fn evaluate_all(
    evaluator: &Evaluator,
    plan: &ExpansionPlan,
    scenarios: &[Scenario],
) -> Result<Vec<FeasibilityResult>, FeasibilityError> {
    scenarios
        .par_iter()
        .map(|sc| evaluator.evaluate(plan, sc))
        .collect()
}

/// Runs the decomposition. `warm_cuts` seed the pool (structurally invalid
/// imports are dropped); `incumbent` is the fallback plan reported when the
/// budget runs out before convergence.
pub fn solve(
    evaluator: &Evaluator,
    scenarios: &[Scenario],
    warm_cuts: Vec<FeasibilityCut>,
    budget: &SolveBudget,
    incumbent: Option<ExpansionPlan>,
) -> Result<(ExpansionPlan, BendersState), BendersError> {
    let started = Instant::now();
    let options = SolverOptions::default();
    let topo = evaluator.topology();

    let mut cuts: Vec<FeasibilityCut> = Vec::new();
    for cut in warm_cuts {
        if cut.coefficients.len() == topo.n_candidates() && cut.is_structurally_valid() {
            if !cuts.contains(&cut) {
                cuts.push(cut);
            }
        } else {
            log::warn!("dropping structurally invalid warm cut from {:?}", cut.origin);
        }
    }

    let mut state = BendersState {
        status: BendersStatus::IterationLimit,
        iterations: 0,
        lower_bound: f64::NEG_INFINITY,
        cuts: Vec::new(),
        evaluations: 0,
    };

    if scenarios.is_empty() {
        state.status = BendersStatus::Converged;
        state.lower_bound = 0.0;
        state.cuts = cuts;
        return Ok((ExpansionPlan::empty(topo), state));
    }

    loop {
        if state.iterations >= budget.max_iterations {
            state.status = BendersStatus::IterationLimit;
            break;
        }
        if let Some(limit) = budget.time_limit {
            if started.elapsed() >= limit {
                state.status = BendersStatus::TimeLimit;
                break;
            }
        }
        state.iterations += 1;

        let master = match solve_master(evaluator, &cuts, &options)? {
            Some(plan) => plan,
            None => {
                let bad = irreparable_scenarios(evaluator, scenarios)?;
                return Err(BendersError::Irreparable { scenarios: bad });
            }
        };
        debug_assert!(
            master.total_cost() >= state.lower_bound - 1e-9,
            "master objective regressed: {} < {}",
            master.total_cost(),
            state.lower_bound
        );
        state.lower_bound = state.lower_bound.max(master.total_cost());

        let results = evaluate_all(evaluator, &master, scenarios)?;
        state.evaluations += results.len();
        let mut violated: Vec<&FeasibilityResult> =
            results.iter().filter(|r| !r.is_feasible()).collect();
        if violated.is_empty() {
            state.status = BendersStatus::Converged;
            state.cuts = cuts;
            return Ok((master, state));
        }
        violated.sort_by(|a, b| {
            b.z_value.total_cmp(&a.z_value).then_with(|| a.scenario.cmp(&b.scenario))
        });
        for r in violated.into_iter().take(MAX_CUTS_PER_ITERATION) {
            let cut = derive_cut(
                evaluator,
                r,
                &master,
                CutOrigin::Scenario { scenario: r.scenario.clone(), iteration: state.iterations },
            )?;
            if !cuts.contains(&cut) {
                cuts.push(cut);
            }
        }
    }

    // budget exhausted: fall back to the provided incumbent
    state.cuts = cuts;
    let plan = incumbent.unwrap_or_else(|| ExpansionPlan::empty(topo));
    Ok((plan, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Bus, Circuit, Network};

    fn bottleneck() -> (Evaluator, Vec<Scenario>) {
        // one overloaded corridor, one candidate that exactly relieves it
        let net = Network::new(
            vec![Bus::new("A"), Bus::new("B")],
            vec![
                Circuit::existing("e1", "A", "B", 1.0, 60.0),
                Circuit::candidate("c1", "A", "B", 1.0, 60.0, 10.0),
            ],
        );
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
    fn single_candidate_cut_forces_the_investment() {
        let (ev, scenarios) = bottleneck();
        let plan = ExpansionPlan::empty(ev.topology());
        let r = ev.evaluate(&plan, &scenarios[0]).unwrap();
        assert!((r.z_value - 40.0).abs() < 1e-7);
        let cut = derive_cut(
            &ev,
            &r,
            &plan,
            CutOrigin::Scenario { scenario: "peak".into(), iteration: 1 },
        )
        .unwrap();
        // violated at the generating plan
        assert!(cut.value_at(&plan) > 0.0);
        assert!((cut.value_at(&plan) - r.z_value).abs() < 1e-7);
        // the only way to satisfy it is building c1
        assert!(cut.coefficients[0] <= -r.z_value + 1e-7);
        let built = ExpansionPlan::all_built(ev.topology());
        assert!(cut.value_at(&built) <= 1e-7);
        assert!(cut.is_structurally_valid());
    }

    #[test]
    fn electrically_irrelevant_candidate_gets_zero_coefficient() {
        // two disjoint corridors; the overload sits on A-B, the candidate on C-D
        let net = Network::new(
            vec![Bus::new("A"), Bus::new("B"), Bus::new("C"), Bus::new("D")],
            vec![
                Circuit::existing("e1", "A", "B", 1.0, 60.0),
                Circuit::existing("e2", "C", "D", 1.0, 100.0),
                Circuit::candidate("c1", "C", "D", 1.0, 100.0, 5.0),
            ],
        );
        let ev = Evaluator::new(&net).unwrap();
        let sc = Scenario::from_bus_data(
            ev.topology(),
            "s",
            [("A", 0.0, 100.0), ("B", 100.0, 0.0), ("C", 0.0, 20.0), ("D", 20.0, 0.0)],
        )
        .unwrap();
        let plan = ExpansionPlan::empty(ev.topology());
        let r = ev.evaluate(&plan, &sc).unwrap();
        assert!(r.z_value > 0.0);
        let cut = derive_cut(
            &ev,
            &r,
            &plan,
            CutOrigin::Scenario { scenario: "s".into(), iteration: 1 },
        )
        .unwrap();
        assert_eq!(cut.coefficients[0], 0.0);
    }

    #[test]
    fn cut_from_feasible_result_is_a_contract_violation() {
        let (ev, scenarios) = bottleneck();
        let built = ExpansionPlan::all_built(ev.topology());
        let r = ev.evaluate(&built, &scenarios[0]).unwrap();
        assert!(r.is_feasible());
        let err = derive_cut(
            &ev,
            &r,
            &built,
            CutOrigin::Scenario { scenario: "peak".into(), iteration: 1 },
        );
        assert!(matches!(err, Err(BendersError::NotViolated { .. })));
    }

    #[test]
    fn decomposition_converges_on_the_bottleneck() {
        let (ev, scenarios) = bottleneck();
        let (plan, state) =
            solve(&ev, &scenarios, Vec::new(), &SolveBudget::default(), None).unwrap();
        assert_eq!(state.status, BendersStatus::Converged);
        assert_eq!(plan.built_ids(ev.topology()), vec!["c1"]);
        assert!((plan.total_cost() - 10.0).abs() < 1e-12);
        assert!((state.lower_bound - 10.0).abs() < 1e-12);
    }

    #[test]
    fn zero_scenarios_converges_to_the_empty_plan() {
        let (ev, _) = bottleneck();
        let (plan, state) = solve(&ev, &[], Vec::new(), &SolveBudget::default(), None).unwrap();
        assert_eq!(state.status, BendersStatus::Converged);
        assert_eq!(plan.n_built(), 0);
        assert_eq!(plan.total_cost(), 0.0);
    }

    #[test]
    fn irreparable_scenario_is_reported_by_name() {
        // no candidates at all: the overload cannot be fixed
        let net = Network::new(
            vec![Bus::new("A"), Bus::new("B")],
            vec![Circuit::existing("e1", "A", "B", 1.0, 60.0)],
        );
        let ev = Evaluator::new(&net).unwrap();
        let sc = Scenario::from_bus_data(
            ev.topology(),
            "hopeless",
            [("A", 0.0, 100.0), ("B", 100.0, 0.0)],
        )
        .unwrap();
        let err = solve(&ev, &[sc], Vec::new(), &SolveBudget::default(), None);
        match err {
            Err(BendersError::Irreparable { scenarios }) => {
                assert_eq!(scenarios, vec!["hopeless"]);
            }
            other => panic!("expected Irreparable, got {other:?}"),
        }
    }

    #[test]
    fn warm_cuts_converge_in_one_master_solve() {
        let (ev, scenarios) = bottleneck();
        // first run cold to harvest the cut pool
        let (_, cold) = solve(&ev, &scenarios, Vec::new(), &SolveBudget::default(), None).unwrap();
        assert!(cold.iterations > 1);
        let (plan, warm) =
            solve(&ev, &scenarios, cold.cuts.clone(), &SolveBudget::default(), None).unwrap();
        assert_eq!(warm.status, BendersStatus::Converged);
        assert_eq!(warm.iterations, 1);
        assert_eq!(plan.built_ids(ev.topology()), vec!["c1"]);
    }
}
