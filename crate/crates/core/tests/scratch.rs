mod common;

use gridplan_core::feasibility::{Evaluator, ExpansionPlan};
use gridplan_core::synth::{garver_network, garver_scenarios};

#[test]
#[ignore]
fn probe() {
    let net = garver_network();
    let ev = Evaluator::new(&net).unwrap();
    let scenarios = garver_scenarios(&net);
    for sc in &scenarios {
        let z0 = ev.evaluate(&ExpansionPlan::empty(ev.topology()), sc).unwrap();
        let z1 = ev.evaluate(&ExpansionPlan::all_built(ev.topology()), sc).unwrap();
        eprintln!(
            "{}: z(empty) = {:.2} viol={:?} | z(full) = {:.4}",
            sc.id, z0.z_value, z0.violations, z1.z_value
        );
    }
    {
        use gridplan_core::lp::{self, SolverOptions};
        // probe: assemble the monolithic MILP via the public heuristic path
        let t = std::time::Instant::now();
        let all: Vec<usize> = (0..scenarios.len()).collect();
        let (plan, _) = gridplan_core::heuristic::solve_k_milp(
            &ev, &scenarios, &all, &ExpansionPlan::empty(ev.topology()), &[]).unwrap();
        eprintln!("monolithic: cost {} in {:?}", plan.total_cost(), t.elapsed());
        let _ = SolverOptions::default();
        let _ = lp::solve_lp;
    }
    for cap in [3, 4, 5, 6, 7] {
        let t = std::time::Instant::now();
        match common::enumerate_optimal(&ev, &scenarios, cap) {
            Some((plan, cost)) => eprintln!(
                "<= {cap} additions: cost {cost} plan {:?} ({:?})",
                plan.built_ids(ev.topology()),
                t.elapsed()
            ),
            None => eprintln!("<= {cap} additions: infeasible ({:?})", t.elapsed()),
        }
    }
}


#[test]
#[ignore]
fn probe_random() {
    use gridplan_core::benders::{self, SolveBudget};
    use gridplan_core::heuristic::{self, HeuristicOptions};
    for seed in [1u64, 2, 3] {
        let inst = gridplan_core::synth::random_instance(seed, 10);
        let ev = Evaluator::new(&inst.network).unwrap();
        let topo = ev.topology();
        eprintln!(
            "seed {seed}: {} buses, {} existing, {} candidates, {} scenarios",
            topo.n_buses(), topo.n_existing(), topo.n_candidates(), inst.scenarios.len()
        );
        let t = std::time::Instant::now();
        let r = ev.evaluate(&ExpansionPlan::empty(topo), &inst.scenarios[0]).unwrap();
        eprintln!("  evaluate: {:?} (z = {:.2})", t.elapsed(), r.z_value);
        let t = std::time::Instant::now();
        let out = heuristic::plan_year(&ev, &inst.scenarios, &HeuristicOptions::default()).unwrap();
        eprintln!("  heuristic: {:?} (cost {}, {} iters, {} cuts)", t.elapsed(), out.plan.total_cost(), out.trace.iterations.len(), out.cuts.len());
        let t = std::time::Instant::now();
        let (bd, state) = benders::solve(&ev, &inst.scenarios, Vec::new(), &SolveBudget::default(), None).unwrap();
        eprintln!("  benders: {:?} (cost {}, {} iters)", t.elapsed(), bd.total_cost(), state.iterations);
        let t = std::time::Instant::now();
        let opt = common::enumerate_optimal(&ev, &inst.scenarios, topo.n_candidates());
        eprintln!("  enumeration: {:?} (cost {:?})", t.elapsed(), opt.map(|o| o.1));
    }
}
