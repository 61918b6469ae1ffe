//! Robust transmission expansion planning over dispatch scenarios.
//!
//! The crate finds least-cost sets of candidate circuit investments that
//! eliminate overloads across a set of DC dispatch scenarios. Two methods are
//! provided: a greedy severity-ranked heuristic ([`heuristic`]) and an exact
//! Benders feasibility-cut decomposition ([`benders`]) that can be warm-started
//! with cuts harvested by the heuristic. A marginal-cost clustering
//! preprocessor ([`areas`]) splits large grids into connected planning areas
//! with fixed tie-line boundary injections.
//!
//! All optimization runs on the built-in bounded-variable simplex and
//! branch-and-bound core in [`lp`]; no external solver is required.

pub mod benders;
pub mod feasibility;
pub mod heuristic;
pub mod lp;
pub mod network;
pub mod synth;

pub use benders::{BendersState, BendersStatus, FeasibilityCut, SolveBudget};
pub use feasibility::{Evaluator, ExpansionPlan, FeasibilityResult, Scenario};
pub use heuristic::{HeuristicOutcome, HeuristicTrace, ScenarioRanking};
pub use lp::{LinearProgram, LpSolution, LpStatus, Relation};
pub use network::{Bus, Circuit, CircuitStatus, Network, Topology, ValidationReport};
