//! Minimum-load-curtailment feasibility oracle.
//!
//! For a network, an expansion plan, and one dispatch scenario, [`Evaluator`]
//! computes the least total load curtailment `z` that removes every circuit
//! overload under the DC flow model. `z = 0` means the plan serves the
//! scenario without overloads. The LP also yields the dual information the
//! Benders engine turns into feasibility cuts, and a separate elastic-limit
//! diagnosis localizes overload magnitudes per circuit.
//!
//! Candidate circuits enter disjunctively: when unbuilt, their flow is fixed
//! to zero and their angle law is relaxed by a per-candidate constant
//! (computed in [`compute_big_m`] from the angle spans the existing grid
//! permits at its flow limits).
//!
//! Two modeling slacks keep the LP feasible on any validated input:
//! curtailment `0 <= r <= d` prices unserved load, and a cost-free generation
//! spill `0 <= sigma <= g` absorbs surplus injections. Boundary (tie-line)
//! injections fold into effective load or generation by sign, so unserved
//! exports count as curtailment and surplus imports can be spilled.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LinearProgram, LpStatus, Relation, SolverOptions};
use crate::network::{CircuitStatus, Network, NetworkError, Topology};

/// Angle variables live in this box; wide enough never to bind on sane data
/// while keeping the LP bounded in every direction.
const ANGLE_BOX: f64 = 1.0e4;

/// Penalty per MW of curtailment in the elastic diagnosis, which prefers
/// reporting overflow on circuits over shedding load.
const ELASTIC_CURTAIL_PENALTY: f64 = 1.0e3;

/// Overflow below this many MW is reporting noise, not a violation.
const VIOLATION_TOL_MW: f64 = 1.0e-4;

/// `z` values at or below this many MW count as overload-free.
pub const Z_TOL_MW: f64 = 1.0e-6;

/// Default component-balance tolerance, as a fraction of component load.
pub const BALANCE_TOL_FRAC: f64 = 1.0e-4;

/// One operating point: fixed bus loads, bus generation, and signed boundary
/// injections (tie-line flows, positive into the bus). Vectors are aligned
/// with the topology bus order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub id: String,
    pub load: Vec<f64>,
    pub generation: Vec<f64>,
    pub boundary: Vec<f64>,
    pub weight: Option<f64>,
}

impl Scenario {
    pub fn new(topology: &Topology, id: impl Into<String>) -> Self {
        let n = topology.n_buses();
        Self {
            id: id.into(),
            load: vec![0.0; n],
            generation: vec![0.0; n],
            boundary: vec![0.0; n],
            weight: None,
        }
    }

    /// Builds a scenario from `(bus id, load, generation)` records.
    pub fn from_bus_data<'a>(
        topology: &Topology,
        id: impl Into<String>,
        records: impl IntoIterator<Item = (&'a str, f64, f64)>,
    ) -> Result<Self, NetworkError> {
        let mut s = Self::new(topology, id);
        for (bus, load, generation) in records {
            let b = topology.bus_position(bus)?;
            s.load[b] += load;
            s.generation[b] += generation;
        }
        Ok(s)
    }

    /// Effective load per bus: nominal load plus boundary exports.
    pub fn effective_load(&self) -> Vec<f64> {
        self.load
            .iter()
            .zip(&self.boundary)
            .map(|(d, inj)| d + (-inj).max(0.0))
            .collect()
    }

    /// Effective generation per bus: nominal generation plus boundary imports.
    pub fn effective_generation(&self) -> Vec<f64> {
        self.generation
            .iter()
            .zip(&self.boundary)
            .map(|(g, inj)| g + inj.max(0.0))
            .collect()
    }

    /// Net injection imbalance per connected component of the full graph.
    /// Components that do not balance within `tol_frac` of their load are
    /// reported so data problems surface at load time.
    pub fn balance_warnings(&self, topology: &Topology, tol_frac: f64) -> Vec<BalanceWarning> {
        let nc = topology.n_components;
        let mut net = vec![0.0; nc];
        let mut load = vec![0.0; nc];
        for b in 0..topology.n_buses() {
            let c = topology.component[b];
            net[c] += self.generation[b] + self.boundary[b] - self.load[b];
            load[c] += self.load[b];
        }
        (0..nc)
            .filter(|&c| net[c].abs() > tol_frac * load[c].max(1.0))
            .map(|c| BalanceWarning {
                scenario: self.id.clone(),
                component: c,
                imbalance_mw: net[c],
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceWarning {
    pub scenario: String,
    pub component: usize,
    pub imbalance_mw: f64,
}

/// Binary investment decisions over the candidate circuits, aligned with
/// [`Topology::candidate_positions`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionPlan {
    decisions: Vec<bool>,
    total_cost: f64,
}

impl ExpansionPlan {
    pub fn new(topology: &Topology, decisions: Vec<bool>) -> Self {
        assert_eq!(
            decisions.len(),
            topology.n_candidates(),
            "plan dimension does not match candidate count"
        );
        let total_cost = Self::cost_of(topology, &decisions);
        Self { decisions, total_cost }
    }

    pub fn empty(topology: &Topology) -> Self {
        Self::new(topology, vec![false; topology.n_candidates()])
    }

    pub fn all_built(topology: &Topology) -> Self {
        Self::new(topology, vec![true; topology.n_candidates()])
    }

    pub fn from_ids<S: AsRef<str>>(topology: &Topology, ids: &[S]) -> Result<Self, NetworkError> {
        let mut decisions = vec![false; topology.n_candidates()];
        for id in ids {
            let pos = topology.circuit_position(id.as_ref())?;
            let k = topology
                .candidate_positions()
                .iter()
                .position(|&p| p == pos)
                .ok_or_else(|| NetworkError::UnknownCircuit(id.as_ref().to_string()))?;
            decisions[k] = true;
        }
        Ok(Self::new(topology, decisions))
    }

    fn cost_of(topology: &Topology, decisions: &[bool]) -> f64 {
        let mut cost = 0.0;
        for (k, built) in decisions.iter().enumerate() {
            if *built {
                cost += topology.candidate_cost(k);
            }
        }
        cost
    }

    pub fn decisions(&self) -> &[bool] {
        &self.decisions
    }

    pub fn is_built(&self, k: usize) -> bool {
        self.decisions[k]
    }

    pub fn n_built(&self) -> usize {
        self.decisions.iter().filter(|b| **b).count()
    }

    pub fn total_cost(&self) -> f64 {
        self.total_cost
    }

    /// Candidate circuit ids selected by the plan, in id order.
    pub fn built_ids(&self, topology: &Topology) -> Vec<String> {
        self.decisions
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(k, _)| topology.circuit_ids()[topology.candidate_positions()[k]].clone())
            .collect()
    }

    /// Copy with candidate `k` set to `built`; cost is recomputed.
    pub fn with_decision(&self, topology: &Topology, k: usize, built: bool) -> Self {
        let mut decisions = self.decisions.clone();
        decisions[k] = built;
        Self::new(topology, decisions)
    }

    /// Componentwise `self <= other` (every circuit built here is built there).
    pub fn subset_of(&self, other: &Self) -> bool {
        self.decisions.iter().zip(&other.decisions).all(|(a, b)| !*a || *b)
    }

    /// Exact recomputation check for the stored total.
    pub fn verify_cost(&self, topology: &Topology) -> bool {
        Self::cost_of(topology, &self.decisions) == self.total_cost
    }
}

/// Shadow prices of the feasibility LP, reported as derivatives of `z` with
/// respect to each constraint's right-hand side. Bound constraints are priced
/// via reduced costs and normalized so every inequality dual is nonpositive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityDuals {
    /// Power balance per bus (equality; free sign).
    pub balance: Vec<f64>,
    /// Angle law per existing circuit (equality; free sign).
    pub angle: Vec<f64>,
    /// Upper/lower disjunction rows per candidate.
    pub disjunction_upper: Vec<f64>,
    pub disjunction_lower: Vec<f64>,
    /// Flow capacity rows per existing circuit.
    pub flow_upper_existing: Vec<f64>,
    pub flow_lower_existing: Vec<f64>,
    /// Flow capacity rows per candidate (their RHS scales with the decision).
    pub flow_upper_candidate: Vec<f64>,
    pub flow_lower_candidate: Vec<f64>,
    /// Curtailment cap `r <= d` per bus.
    pub curtail_upper: Vec<f64>,
}

/// Outcome of one feasibility evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityResult {
    pub scenario: String,
    /// Total curtailment in MW; zero means no overloads.
    pub z_value: f64,
    pub curtailment: Vec<f64>,
    pub spill: Vec<f64>,
    /// Flows per existing circuit, in existing-position order.
    pub flows_existing: Vec<f64>,
    /// Flows per candidate circuit (zero when unbuilt).
    pub flows_candidate: Vec<f64>,
    pub angles: Vec<f64>,
    /// Circuits whose flow limit is binding at the optimum (dual nonzero);
    /// empty when `z` is zero.
    pub binding: Vec<String>,
    /// Circuits whose limit-relaxed flow exceeds capacity, with the overflow
    /// magnitude in MW; empty when `z` is zero.
    pub violations: Vec<(String, f64)>,
    /// Total violation MW (the severity measure used for ranking).
    pub severity_mw: f64,
    pub duals: FeasibilityDuals,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.z_value <= Z_TOL_MW
    }

    pub fn violation_ids(&self) -> Vec<String> {
        self.violations.iter().map(|(id, _)| id.clone()).collect()
    }
}

/// Variable and row offsets of an assembled feasibility LP, used to read the
/// solution and duals back out.
#[derive(Debug, Clone, Copy)]
pub struct FeasibilityLayout {
    pub n_buses: usize,
    pub n_existing: usize,
    pub n_candidates: usize,
    pub var_flow_existing: usize,
    pub var_flow_candidate: usize,
    pub var_angle: usize,
    pub var_curtail: usize,
    pub var_spill: usize,
    pub row_balance: usize,
    pub row_angle: usize,
    pub row_disjunction_upper: usize,
    pub row_disjunction_lower: usize,
}

#[derive(Debug, Error)]
pub enum FeasibilityError {
    #[error("{vector} has {got} entries, expected {expected}")]
    DimensionMismatch { vector: String, expected: usize, got: usize },
    #[error(
        "feasibility LP for scenario '{scenario}' reported {status:?}; \
         full curtailment should always be feasible"
    )]
    InternalInfeasible { scenario: String, status: LpStatus },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Lp(#[from] lp::LpError),
}

/// Reusable evaluation context: validated topology plus per-candidate
/// disjunction constants. Evaluations are pure, so one evaluator can serve
/// any number of worker threads.
#[derive(Debug, Clone)]
pub struct Evaluator {
    topology: Topology,
    big_m: Vec<f64>,
    options: SolverOptions,
}

impl Evaluator {
    pub fn new(network: &Network) -> Result<Self, NetworkError> {
        let topology = network.topology()?;
        let big_m = topology
            .candidate_positions()
            .iter()
            .map(|&p| topology.circuit(p).big_m.unwrap_or_else(|| compute_big_m(&topology, p)))
            .collect();
        Ok(Self { topology, big_m, options: SolverOptions::default() })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn big_m(&self, candidate: usize) -> f64 {
        self.big_m[candidate]
    }

    fn check_dims(&self, plan: &ExpansionPlan, scenario: &Scenario) -> Result<(), FeasibilityError> {
        let nb = self.topology.n_buses();
        let nc = self.topology.n_candidates();
        if plan.decisions().len() != nc {
            return Err(FeasibilityError::DimensionMismatch {
                vector: "plan decisions".into(),
                expected: nc,
                got: plan.decisions().len(),
            });
        }
        for (name, v) in [
            ("scenario load", &scenario.load),
            ("scenario generation", &scenario.generation),
            ("scenario boundary", &scenario.boundary),
        ] {
            if v.len() != nb {
                return Err(FeasibilityError::DimensionMismatch {
                    vector: name.into(),
                    expected: nb,
                    got: v.len(),
                });
            }
        }
        Ok(())
    }

    /// Builds the curtailment LP for a fixed plan. Rows: power balance per
    /// bus, angle law per existing circuit, and the two disjunction rows per
    /// candidate. Flow, curtailment, and spill caps are variable bounds.
    pub fn assemble(
        &self,
        plan: &ExpansionPlan,
        scenario: &Scenario,
    ) -> Result<(LinearProgram, FeasibilityLayout), FeasibilityError> {
        self.check_dims(plan, scenario)?;
        let topo = &self.topology;
        let nb = topo.n_buses();
        let ne = topo.n_existing();
        let nc = topo.n_candidates();

        let layout = FeasibilityLayout {
            n_buses: nb,
            n_existing: ne,
            n_candidates: nc,
            var_flow_existing: 0,
            var_flow_candidate: ne,
            var_angle: ne + nc,
            var_curtail: ne + nc + nb,
            var_spill: ne + nc + 2 * nb,
            row_balance: 0,
            row_angle: nb,
            row_disjunction_upper: nb + ne,
            row_disjunction_lower: nb + ne + nc,
        };
        let mut prob = LinearProgram::new(ne + nc + 3 * nb);

        let d_eff = scenario.effective_load();
        let g_eff = scenario.effective_generation();

        for (e, &p) in topo.existing_positions().iter().enumerate() {
            let cap = topo.circuit(p).effective_limit();
            prob.set_bounds(layout.var_flow_existing + e, -cap, cap);
        }
        for (k, &p) in topo.candidate_positions().iter().enumerate() {
            let cap = if plan.is_built(k) { topo.circuit(p).effective_limit() } else { 0.0 };
            prob.set_bounds(layout.var_flow_candidate + k, -cap, cap);
        }
        for b in 0..nb {
            prob.set_bounds(layout.var_angle + b, -ANGLE_BOX, ANGLE_BOX);
            prob.set_bounds(layout.var_curtail + b, 0.0, d_eff[b]);
            prob.set_objective(layout.var_curtail + b, 1.0);
            prob.set_bounds(layout.var_spill + b, 0.0, g_eff[b]);
        }
        for &b in &built_graph_references(topo, plan) {
            prob.set_bounds(layout.var_angle + b, 0.0, 0.0);
        }

        // power balance: net outflow + spill - curtailment = gen - load
        let mut balance: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nb];
        for (e, &p) in topo.existing_positions().iter().enumerate() {
            let (u, v) = topo.endpoints(p);
            balance[u].push((layout.var_flow_existing + e, 1.0));
            balance[v].push((layout.var_flow_existing + e, -1.0));
        }
        for (k, &p) in topo.candidate_positions().iter().enumerate() {
            let (u, v) = topo.endpoints(p);
            balance[u].push((layout.var_flow_candidate + k, 1.0));
            balance[v].push((layout.var_flow_candidate + k, -1.0));
        }
        for b in 0..nb {
            let mut terms = std::mem::take(&mut balance[b]);
            terms.push((layout.var_spill + b, 1.0));
            terms.push((layout.var_curtail + b, -1.0));
            let row = prob.add_row(&terms, Relation::Eq, g_eff[b] - d_eff[b]);
            // full curtailment / full spill is always a feasible start
            prob.hint_basis(row, layout.var_curtail + b);
            prob.hint_basis(row, layout.var_spill + b);
        }

        // angle law for existing circuits: f = gamma * (theta_u - theta_v)
        for (e, &p) in topo.existing_positions().iter().enumerate() {
            let (u, v) = topo.endpoints(p);
            let gamma = topo.susceptance_mw(p);
            prob.add_row(
                &[
                    (layout.var_flow_existing + e, 1.0),
                    (layout.var_angle + u, -gamma),
                    (layout.var_angle + v, gamma),
                ],
                Relation::Eq,
                0.0,
            );
        }

        // candidate disjunction: |f - gamma * dtheta| <= M (1 - x)
        for pass in 0..2 {
            for (k, &p) in topo.candidate_positions().iter().enumerate() {
                let (u, v) = topo.endpoints(p);
                let gamma = topo.susceptance_mw(p);
                let slack = if plan.is_built(k) { 0.0 } else { self.big_m[k] };
                let sign = if pass == 0 { 1.0 } else { -1.0 };
                prob.add_row(
                    &[
                        (layout.var_flow_candidate + k, sign),
                        (layout.var_angle + u, -sign * gamma),
                        (layout.var_angle + v, sign * gamma),
                    ],
                    Relation::Le,
                    slack,
                );
            }
        }

        Ok((prob, layout))
    }

    /// Solves the curtailment LP and, when curtailment is needed, the elastic
    /// diagnosis that localizes overload magnitudes.
    pub fn evaluate(
        &self,
        plan: &ExpansionPlan,
        scenario: &Scenario,
    ) -> Result<FeasibilityResult, FeasibilityError> {
        let (prob, layout) = self.assemble(plan, scenario)?;
        let sol = lp::solve_lp_with(&prob, &self.options)?;
        if sol.status != LpStatus::Optimal {
            return Err(FeasibilityError::InternalInfeasible {
                scenario: scenario.id.clone(),
                status: sol.status,
            });
        }
        let topo = &self.topology;
        let nb = layout.n_buses;
        let ne = layout.n_existing;
        let nc = layout.n_candidates;
        let x = &sol.primal;

        let z_value = sol.objective.max(0.0);
        let flows_existing: Vec<f64> = (0..ne).map(|e| x[layout.var_flow_existing + e]).collect();
        let flows_candidate: Vec<f64> = (0..nc).map(|k| x[layout.var_flow_candidate + k]).collect();
        let angles: Vec<f64> = (0..nb).map(|b| x[layout.var_angle + b]).collect();
        let curtailment: Vec<f64> = (0..nb).map(|b| x[layout.var_curtail + b]).collect();
        let spill: Vec<f64> = (0..nb).map(|b| x[layout.var_spill + b]).collect();

        let duals = extract_duals(&sol, &layout);

        let mut binding = Vec::new();
        let mut violations = Vec::new();
        let mut severity_mw = 0.0;
        if z_value > Z_TOL_MW {
            const DUAL_TOL: f64 = 1e-7;
            for (e, &p) in topo.existing_positions().iter().enumerate() {
                if duals.flow_upper_existing[e].abs() > DUAL_TOL
                    || duals.flow_lower_existing[e].abs() > DUAL_TOL
                {
                    binding.push(topo.circuit_ids()[p].clone());
                }
            }
            for (k, &p) in topo.candidate_positions().iter().enumerate() {
                if plan.is_built(k)
                    && (duals.flow_upper_candidate[k].abs() > DUAL_TOL
                        || duals.flow_lower_candidate[k].abs() > DUAL_TOL)
                {
                    binding.push(topo.circuit_ids()[p].clone());
                }
            }
            binding.sort();
            violations = self.diagnose(plan, scenario)?;
            severity_mw = violations.iter().map(|(_, mw)| mw).sum();
        }

        Ok(FeasibilityResult {
            scenario: scenario.id.clone(),
            z_value,
            curtailment,
            spill,
            flows_existing,
            flows_candidate,
            angles,
            binding,
            violations,
            severity_mw,
            duals,
        })
    }

    /// Elastic diagnosis: relax every finite flow limit with a penalized
    /// overflow variable; load is served unless structurally impossible.
    /// Returns `(circuit id, overflow MW)` per violated circuit, id order.
    pub fn diagnose(
        &self,
        plan: &ExpansionPlan,
        scenario: &Scenario,
    ) -> Result<Vec<(String, f64)>, FeasibilityError> {
        self.check_dims(plan, scenario)?;
        let topo = &self.topology;
        let nb = topo.n_buses();
        let ne = topo.n_existing();
        let nc = topo.n_candidates();

        // circuits that get an overflow variable: finite-limit existing plus
        // built finite-limit candidates
        let mut elastic: Vec<usize> = Vec::new();
        for &p in topo.existing_positions() {
            if topo.circuit(p).effective_limit().is_finite() {
                elastic.push(p);
            }
        }
        for (k, &p) in topo.candidate_positions().iter().enumerate() {
            if plan.is_built(k) && topo.circuit(p).effective_limit().is_finite() {
                elastic.push(p);
            }
        }

        let var_flow_existing = 0;
        let var_flow_candidate = ne;
        let var_angle = ne + nc;
        let var_curtail = ne + nc + nb;
        let var_spill = ne + nc + 2 * nb;
        let var_overflow = ne + nc + 3 * nb;
        let mut prob = LinearProgram::new(var_overflow + elastic.len());

        let d_eff = scenario.effective_load();
        let g_eff = scenario.effective_generation();

        // flows are unrestricted here; limits move into the elastic rows
        for (k, _) in topo.candidate_positions().iter().enumerate() {
            if !plan.is_built(k) {
                prob.set_bounds(var_flow_candidate + k, 0.0, 0.0);
            }
        }
        for b in 0..nb {
            prob.set_bounds(var_angle + b, -ANGLE_BOX, ANGLE_BOX);
            prob.set_bounds(var_curtail + b, 0.0, d_eff[b]);
            prob.set_objective(var_curtail + b, ELASTIC_CURTAIL_PENALTY);
            prob.set_bounds(var_spill + b, 0.0, g_eff[b]);
        }
        for i in 0..elastic.len() {
            prob.set_bounds(var_overflow + i, 0.0, f64::INFINITY);
            prob.set_objective(var_overflow + i, 1.0);
        }
        for &b in &built_graph_references(topo, plan) {
            prob.set_bounds(var_angle + b, 0.0, 0.0);
        }

        let existing_index =
            |pos: usize| topo.existing_positions().iter().position(|&p| p == pos).unwrap();
        let candidate_index =
            |pos: usize| topo.candidate_positions().iter().position(|&p| p == pos).unwrap();
        let flow_var = |pos: usize| -> usize {
            match topo.circuit(pos).status {
                CircuitStatus::Existing => var_flow_existing + existing_index(pos),
                CircuitStatus::Candidate => var_flow_candidate + candidate_index(pos),
            }
        };

        let mut balance: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nb];
        for p in 0..topo.n_circuits() {
            let (u, v) = topo.endpoints(p);
            let fv = flow_var(p);
            balance[u].push((fv, 1.0));
            balance[v].push((fv, -1.0));
        }
        for b in 0..nb {
            let mut terms = std::mem::take(&mut balance[b]);
            terms.push((var_spill + b, 1.0));
            terms.push((var_curtail + b, -1.0));
            let row = prob.add_row(&terms, Relation::Eq, g_eff[b] - d_eff[b]);
            prob.hint_basis(row, var_curtail + b);
            prob.hint_basis(row, var_spill + b);
        }
        for &p in topo.existing_positions() {
            let (u, v) = topo.endpoints(p);
            let gamma = topo.susceptance_mw(p);
            prob.add_row(
                &[(flow_var(p), 1.0), (var_angle + u, -gamma), (var_angle + v, gamma)],
                Relation::Eq,
                0.0,
            );
        }
        // angle law only for built candidates; unbuilt flows are pinned to
        // zero and their disjunction bound is not valid once limits relax
        for (k, &p) in topo.candidate_positions().iter().enumerate() {
            if !plan.is_built(k) {
                continue;
            }
            let (u, v) = topo.endpoints(p);
            let gamma = topo.susceptance_mw(p);
            prob.add_row(
                &[(flow_var(p), 1.0), (var_angle + u, -gamma), (var_angle + v, gamma)],
                Relation::Eq,
                0.0,
            );
        }
        // |flow| <= cap + overflow
        for (i, &p) in elastic.iter().enumerate() {
            let cap = topo.circuit(p).effective_limit();
            let fv = flow_var(p);
            prob.add_row(&[(fv, 1.0), (var_overflow + i, -1.0)], Relation::Le, cap);
            prob.add_row(&[(fv, -1.0), (var_overflow + i, -1.0)], Relation::Le, cap);
        }

        let sol = lp::solve_lp_with(&prob, &self.options)?;
        if sol.status != LpStatus::Optimal {
            return Err(FeasibilityError::InternalInfeasible {
                scenario: scenario.id.clone(),
                status: sol.status,
            });
        }
        let mut out = Vec::new();
        for (i, &p) in elastic.iter().enumerate() {
            let mw = sol.primal[var_overflow + i];
            if mw > VIOLATION_TOL_MW {
                out.push((topo.circuit_ids()[p].clone(), mw));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}

fn extract_duals(sol: &lp::LpSolution, layout: &FeasibilityLayout) -> FeasibilityDuals {
    let nb = layout.n_buses;
    let ne = layout.n_existing;
    let nc = layout.n_candidates;
    let row = |r: usize| sol.duals[r];
    // A variable's reduced cost prices whichever bound it sits on. Split it
    // into the shadow of the upper row (w <= u) and of the lower row written
    // as (-w <= -l); both come out nonpositive for a minimization.
    let upper = |var: usize| sol.reduced_costs[var].min(0.0);
    let lower = |var: usize| (-sol.reduced_costs[var]).min(0.0);
    FeasibilityDuals {
        balance: (0..nb).map(|b| row(layout.row_balance + b)).collect(),
        angle: (0..ne).map(|e| row(layout.row_angle + e)).collect(),
        disjunction_upper: (0..nc).map(|k| row(layout.row_disjunction_upper + k)).collect(),
        disjunction_lower: (0..nc).map(|k| row(layout.row_disjunction_lower + k)).collect(),
        flow_upper_existing: (0..ne).map(|e| upper(layout.var_flow_existing + e)).collect(),
        flow_lower_existing: (0..ne).map(|e| lower(layout.var_flow_existing + e)).collect(),
        flow_upper_candidate: (0..nc).map(|k| upper(layout.var_flow_candidate + k)).collect(),
        flow_lower_candidate: (0..nc).map(|k| lower(layout.var_flow_candidate + k)).collect(),
        curtail_upper: (0..nb).map(|b| upper(layout.var_curtail + b)).collect(),
    }
}

/// Angle reference buses for the graph of existing circuits plus the plan's
/// built candidates: the topology's declared reference where it applies,
/// otherwise the lowest bus position of each component.
fn built_graph_references(topo: &Topology, plan: &ExpansionPlan) -> Vec<usize> {
    let n = topo.n_buses();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    fn join(parent: &mut [usize], a: usize, b: usize) {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    }
    for &p in topo.existing_positions() {
        let (u, v) = topo.endpoints(p);
        join(&mut parent, u, v);
    }
    for (k, &p) in topo.candidate_positions().iter().enumerate() {
        if plan.is_built(k) {
            let (u, v) = topo.endpoints(p);
            join(&mut parent, u, v);
        }
    }
    let mut refs: Vec<usize> = Vec::new();
    let mut seen = vec![false; n];
    for &r in &topo.references {
        let root = find(&mut parent, r);
        if !seen[root] {
            seen[root] = true;
            refs.push(r);
        }
    }
    for b in 0..n {
        let root = find(&mut parent, b);
        if !seen[root] {
            seen[root] = true;
            refs.push(b);
        }
    }
    refs.sort_unstable();
    refs
}

/// Disjunction constant for one candidate circuit, in MW.
///
/// The bound is the candidate's susceptance times the largest angle spread
/// its endpoints can see: the shortest-path distance between them in the
/// existing grid where each circuit contributes the angle span it permits at
/// its flow limit. When no finite-limit path connects the endpoints, the
/// fallback is the total span of all finite-limit existing circuits plus the
/// candidate's own span.
pub fn compute_big_m(topology: &Topology, candidate_pos: usize) -> f64 {
    let gamma_c = topology.susceptance_mw(candidate_pos);
    let (src, dst) = topology.endpoints(candidate_pos);

    let n = topology.n_buses();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut total_span = 0.0;
    for &p in topology.existing_positions() {
        let cap = topology.circuit(p).effective_limit();
        if !cap.is_finite() {
            continue;
        }
        let span = cap / topology.susceptance_mw(p);
        total_span += span;
        let (u, v) = topology.endpoints(p);
        adj[u].push((v, span));
        adj[v].push((u, span));
    }

    // linear-scan Dijkstra; networks here are small
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[src] = 0.0;
    loop {
        let mut best: Option<usize> = None;
        for b in 0..n {
            if !done[b] && dist[b].is_finite() {
                match best {
                    Some(cur) if dist[cur] <= dist[b] => {}
                    _ => best = Some(b),
                }
            }
        }
        let Some(b) = best else { break };
        if b == dst {
            break;
        }
        done[b] = true;
        for &(nb, w) in &adj[b] {
            if dist[b] + w < dist[nb] {
                dist[nb] = dist[b] + w;
            }
        }
    }

    let own_cap = topology.circuit(candidate_pos).effective_limit();
    let own_span = if own_cap.is_finite() { own_cap / gamma_c } else { 0.0 };
    let dtheta_max = if dist[dst].is_finite() { dist[dst] } else { total_span + own_span };
    let m = gamma_c * dtheta_max;
    if m > 0.0 {
        m
    } else {
        // no finite-limit circuit anywhere; any positive constant is valid
        gamma_c.max(1.0)
    }
}
