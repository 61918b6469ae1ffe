//! Best-bound branch-and-bound over LP relaxations.
//!
//! Branching picks the most fractional binary (ties to the lowest index);
//! nodes are explored in (bound, node id) order so runs are reproducible.
//! After the optimum is proven, a refinement pass fixes binaries in index
//! order to return the lexicographically smallest optimal decision vector.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::simplex::WarmBasis;
use super::{simplex, LinearProgram, LpSolution, LpStatus, SolverOptions};

struct Node {
    id: u64,
    bound: f64,
    lower: Vec<f64>,
    upper: Vec<f64>,
    warm: Option<WarmBasis>,
}

struct Entry {
    bound: f64,
    id: u64,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.id == other.id
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for best-bound-first, then oldest id
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.id.cmp(&self.id))
    }
}

enum CoreOutcome {
    Optimal { objective: f64, primal: Vec<f64> },
    Infeasible { farkas: Option<Vec<f64>> },
    Unbounded,
    Limit { incumbent: Option<(f64, Vec<f64>)>, open_bound: f64 },
}

struct Stats {
    nodes: usize,
    iterations: usize,
}

/// Plain best-bound search. Stops early once an incumbent reaches `target`
/// (used by the lexicographic refinement, which only asks whether the
/// optimum under extra fixings still attains a known value).
fn bb_core(
    lp: &LinearProgram,
    binaries: &[usize],
    lower: Vec<f64>,
    upper: Vec<f64>,
    options: &SolverOptions,
    target: Option<f64>,
    stats: &mut Stats,
) -> CoreOutcome {
    let mut nodes_stored: Vec<Node> = Vec::new();
    let mut heap: BinaryHeap<Entry> = BinaryHeap::new();
    let mut next_id: u64 = 0;
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut root_farkas: Option<Vec<f64>> = None;

    nodes_stored.push(Node { id: 0, bound: f64::NEG_INFINITY, lower, upper, warm: None });
    heap.push(Entry { bound: f64::NEG_INFINITY, id: 0 });
    next_id += 1;

    let open_bound = |heap: &BinaryHeap<Entry>, inc: &Option<(f64, Vec<f64>)>| {
        let open = heap.iter().map(|e| e.bound).fold(f64::INFINITY, f64::min);
        match inc {
            Some((obj, _)) => open.min(*obj),
            None => open,
        }
    };

    while let Some(entry) = heap.pop() {
        if stats.nodes >= options.node_limit {
            let bound = open_bound(&heap, &incumbent);
            return CoreOutcome::Limit { incumbent, open_bound: bound };
        }
        if let Some((inc_obj, _)) = &incumbent {
            if entry.bound > inc_obj - options.gap_abs {
                continue;
            }
        }
        let node = &nodes_stored[entry.id as usize];
        let (relax, basis) =
            simplex::solve_warm(lp, &node.lower, &node.upper, options, node.warm.as_ref());
        stats.nodes += 1;
        stats.iterations += relax.iterations;
        match relax.status {
            LpStatus::Infeasible => {
                if entry.id == 0 {
                    root_farkas = relax.farkas;
                }
                continue;
            }
            LpStatus::Unbounded => {
                if entry.id == 0 {
                    return CoreOutcome::Unbounded;
                }
                continue;
            }
            LpStatus::IterationLimit => {
                let bound = open_bound(&heap, &incumbent);
                return CoreOutcome::Limit { incumbent, open_bound: bound };
            }
            LpStatus::Optimal => {}
        }
        let bound = relax.objective;
        if let Some((inc_obj, _)) = &incumbent {
            if bound > inc_obj - options.gap_abs {
                continue;
            }
        }

        // most fractional binary, ties by lowest index
        let mut branch_var: Option<(usize, f64)> = None;
        for &j in binaries {
            let v = relax.primal[j];
            if (v - v.round()).abs() > options.tol_int {
                let score = (v - v.floor() - 0.5).abs(); // smaller = more fractional
                match branch_var {
                    Some((_, best)) if score >= best => {}
                    _ => branch_var = Some((j, score)),
                }
            }
        }

        match branch_var {
            None => {
                let better = match &incumbent {
                    None => true,
                    Some((inc_obj, _)) => bound < inc_obj - options.gap_abs,
                };
                if better {
                    incumbent = Some((bound, relax.primal));
                    if let Some(t) = target {
                        if bound <= t {
                            let (obj, primal) = incumbent.unwrap();
                            return CoreOutcome::Optimal { objective: obj, primal };
                        }
                    }
                }
            }
            Some((j, _)) => {
                let node = &nodes_stored[entry.id as usize];
                let (parent_lower, parent_upper) = (node.lower.clone(), node.upper.clone());
                let mut down_upper = parent_upper.clone();
                down_upper[j] = 0.0;
                let down = Node {
                    id: next_id,
                    bound,
                    lower: parent_lower.clone(),
                    upper: down_upper,
                    warm: basis.clone(),
                };
                next_id += 1;
                let mut up_lower = parent_lower;
                up_lower[j] = 1.0;
                let up = Node { id: next_id, bound, lower: up_lower, upper: parent_upper, warm: basis };
                next_id += 1;
                heap.push(Entry { bound: down.bound, id: down.id });
                heap.push(Entry { bound: up.bound, id: up.id });
                nodes_stored.push(down);
                nodes_stored.push(up);
            }
        }
    }

    match incumbent {
        Some((objective, primal)) => CoreOutcome::Optimal { objective, primal },
        None => CoreOutcome::Infeasible { farkas: root_farkas },
    }
}

pub(super) fn branch_and_bound(lp: &LinearProgram, options: &SolverOptions) -> LpSolution {
    let binaries = lp.binary_vars();
    if binaries.is_empty() {
        return simplex::solve(lp, lp.lower_bounds(), lp.upper_bounds(), options);
    }
    let mut stats = Stats { nodes: 0, iterations: 0 };

    let outcome = bb_core(
        lp,
        &binaries,
        lp.lower_bounds().to_vec(),
        lp.upper_bounds().to_vec(),
        options,
        None,
        &mut stats,
    );

    let (objective, primal, hit_limit, gap) = match outcome {
        CoreOutcome::Optimal { objective, primal } => (objective, primal, false, 0.0),
        CoreOutcome::Unbounded => {
            return LpSolution {
                status: LpStatus::Unbounded,
                primal: vec![0.0; lp.n_vars()],
                duals: vec![0.0; lp.n_rows()],
                reduced_costs: vec![0.0; lp.n_vars()],
                objective: f64::NEG_INFINITY,
                farkas: None,
                gap: f64::INFINITY,
                iterations: stats.iterations,
                nodes: stats.nodes,
            };
        }
        CoreOutcome::Infeasible { farkas } => {
            return LpSolution {
                status: LpStatus::Infeasible,
                primal: vec![0.0; lp.n_vars()],
                duals: vec![0.0; lp.n_rows()],
                reduced_costs: vec![0.0; lp.n_vars()],
                objective: f64::INFINITY,
                farkas,
                gap: f64::INFINITY,
                iterations: stats.iterations,
                nodes: stats.nodes,
            };
        }
        CoreOutcome::Limit { incumbent, open_bound } => match incumbent {
            Some((obj, primal)) => (obj, primal, true, (obj - open_bound).max(0.0)),
            None => {
                return LpSolution {
                    status: LpStatus::IterationLimit,
                    primal: vec![0.0; lp.n_vars()],
                    duals: vec![0.0; lp.n_rows()],
                    reduced_costs: vec![0.0; lp.n_vars()],
                    objective: f64::INFINITY,
                    farkas: None,
                    gap: f64::INFINITY,
                    iterations: stats.iterations,
                    nodes: stats.nodes,
                };
            }
        },
    };

    // Lexicographic refinement: fix binaries to 0 in index order whenever the
    // proven optimum stays attainable, otherwise to 1. Skipped on limit hits.
    let mut lower = lp.lower_bounds().to_vec();
    let mut upper = lp.upper_bounds().to_vec();
    let mut final_primal = primal;
    if !hit_limit {
        for &j in &binaries {
            if upper[j] - lower[j] <= 0.5 {
                continue; // fixed by the model or a previous step
            }
            if final_primal[j] <= 0.5 {
                // current best completion already has 0 here
                upper[j] = 0.0;
                continue;
            }
            let saved = upper[j];
            upper[j] = 0.0;
            let probe = bb_core(
                lp,
                &binaries,
                lower.clone(),
                upper.clone(),
                options,
                Some(objective + options.gap_abs),
                &mut stats,
            );
            match probe {
                CoreOutcome::Optimal { objective: obj, primal: p }
                    if obj <= objective + options.gap_abs =>
                {
                    final_primal = p;
                }
                _ => {
                    upper[j] = saved;
                    lower[j] = 1.0;
                }
            }
        }
    }

    // Dual information from the LP with binaries pinned at the final vector.
    let mut fixed_lower = lp.lower_bounds().to_vec();
    let mut fixed_upper = lp.upper_bounds().to_vec();
    for &j in &binaries {
        let v = if final_primal[j] > 0.5 { 1.0 } else { 0.0 };
        final_primal[j] = v;
        fixed_lower[j] = v;
        fixed_upper[j] = v;
    }
    let fixed = simplex::solve_with_bounds(lp, &fixed_lower, &fixed_upper, options);
    let primal = if fixed.status == LpStatus::Optimal { fixed.primal } else { final_primal };

    LpSolution {
        status: if hit_limit { LpStatus::IterationLimit } else { LpStatus::Optimal },
        objective: lp.objective_value(&primal),
        primal,
        duals: fixed.duals,
        reduced_costs: fixed.reduced_costs,
        farkas: None,
        gap,
        iterations: stats.iterations,
        nodes: stats.nodes,
    }
}
