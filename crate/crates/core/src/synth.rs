//! Built-in test systems: the classic Garver 6-bus expansion benchmark and a
//! seeded generator for small random instances.
//!
//! Random instances are built so that the fully reinforced network serves
//! every scenario without overloads (scenarios are sampled as exact DC
//! operating points of the all-built grid) while the existing grid alone
//! overloads in at least one scenario. Candidates are duplicates of existing
//! circuits, which is also how real candidate lists are dominated by corridor
//! duplications.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::feasibility::{Evaluator, ExpansionPlan, Scenario};
use crate::network::{Bus, Circuit, Network};

/// The Garver 6-bus system: 6 existing circuits, bus 6 initially isolated,
/// and one candidate per corridor.
pub fn garver_network() -> Network {
    let buses = (1..=6).map(|i| Bus::new(i.to_string())).collect();
    let mut circuits = vec![
        Circuit::existing("e12", "1", "2", 1.0 / 0.40, 100.0),
        Circuit::existing("e14", "1", "4", 1.0 / 0.60, 80.0),
        Circuit::existing("e15", "1", "5", 1.0 / 0.20, 100.0),
        Circuit::existing("e23", "2", "3", 1.0 / 0.20, 100.0),
        Circuit::existing("e24", "2", "4", 1.0 / 0.40, 100.0),
        Circuit::existing("e35", "3", "5", 1.0 / 0.20, 100.0),
    ];
    let corridors: [(&str, &str, f64, f64, f64); 15] = [
        ("1", "2", 0.40, 100.0, 40.0),
        ("1", "3", 0.38, 100.0, 38.0),
        ("1", "4", 0.60, 80.0, 60.0),
        ("1", "5", 0.20, 100.0, 20.0),
        ("1", "6", 0.68, 70.0, 68.0),
        ("2", "3", 0.20, 100.0, 20.0),
        ("2", "4", 0.40, 100.0, 40.0),
        ("2", "5", 0.31, 100.0, 31.0),
        ("2", "6", 0.30, 100.0, 30.0),
        ("3", "4", 0.59, 82.0, 59.0),
        ("3", "5", 0.20, 100.0, 20.0),
        ("3", "6", 0.48, 100.0, 48.0),
        ("4", "5", 0.63, 75.0, 63.0),
        ("4", "6", 0.30, 100.0, 30.0),
        ("5", "6", 0.61, 78.0, 61.0),
    ];
    for (from, to, x, cap, cost) in corridors {
        let id = format!("c{from}{to}");
        let mut c = Circuit::candidate(id, from, to, 1.0 / x, cap, cost);
        c.voltage_class = Some("230".to_string());
        circuits.push(c);
    }
    Network::new(buses, circuits)
}

/// Three synthetic balanced dispatch scenarios for the Garver system. Bus 6
/// generates in every scenario, so integrating it is always part of a
/// feasible plan; bus 3's surplus stresses the inner corridors differently
/// per scenario.
pub fn garver_scenarios(network: &Network) -> Vec<Scenario> {
    let topo = network.topology().expect("garver network is valid");
    let mk = |id: &str, load: [f64; 6], generation: [f64; 6]| {
        let mut s = Scenario::new(&topo, id);
        for i in 0..6 {
            let b = topo.bus_position(&(i + 1).to_string()).unwrap();
            s.load[b] = load[i];
            s.generation[b] = generation[i];
        }
        s
    };
    vec![
        mk(
            "peak",
            [80.0, 240.0, 40.0, 160.0, 240.0, 0.0],
            [330.0, 0.0, 250.0, 0.0, 0.0, 180.0],
        ),
        mk(
            "offpeak",
            [48.0, 144.0, 24.0, 96.0, 144.0, 0.0],
            [216.0, 0.0, 120.0, 0.0, 0.0, 120.0],
        ),
        mk(
            "export",
            [100.0, 220.0, 40.0, 130.0, 270.0, 0.0],
            [300.0, 0.0, 280.0, 0.0, 0.0, 180.0],
        ),
    ]
}

/// A random planning instance with its scenarios.
#[derive(Debug, Clone)]
pub struct SynthInstance {
    pub network: Network,
    pub scenarios: Vec<Scenario>,
    pub seed: u64,
}

/// Generates a connected random instance with `n_buses` buses (6 to 16 is the
/// intended range). Deterministic in `seed`.
pub fn random_instance(seed: u64, n_buses: usize) -> SynthInstance {
    assert!(n_buses >= 3, "need at least 3 buses");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let bus_id = |i: usize| format!("b{:02}", i + 1);
    let buses: Vec<Bus> = (0..n_buses).map(|i| Bus::new(bus_id(i))).collect();

    // spanning tree plus extra corridors
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 1..n_buses {
        let j = rng.random_range(0..i);
        pairs.push((j, i));
    }
    let extra = n_buses / 2;
    let mut guard = 0;
    while pairs.len() < n_buses - 1 + extra && guard < 100 {
        guard += 1;
        let a = rng.random_range(0..n_buses);
        let b = rng.random_range(0..n_buses);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if pairs.iter().any(|&(x, y)| (x.min(y), x.max(y)) == key) {
            continue;
        }
        pairs.push(key);
    }

    let mut circuits: Vec<Circuit> = Vec::new();
    for (e, &(u, v)) in pairs.iter().enumerate() {
        let gamma: f64 = rng.random_range(2.0..8.0); // per-unit on a 100 MVA base
        let span: f64 = rng.random_range(0.10..0.40); // radians at the flow limit
        let cap = (gamma * 100.0 * span).round();
        circuits.push(Circuit::existing(
            format!("e{:02}", e + 1),
            bus_id(u),
            bus_id(v),
            gamma,
            cap,
        ));
    }

    // candidates duplicate a subset of the existing corridors
    let n_existing = circuits.len();
    let n_candidates = n_existing.min(12).max(4);
    let mut order: Vec<usize> = (0..n_existing).collect();
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    for (k, &e) in order.iter().take(n_candidates).enumerate() {
        let base = circuits[e].clone();
        let cost = (base.flow_limit * rng.random_range(0.5..1.5)).round().max(1.0);
        circuits.push(Circuit::candidate(
            format!("x{:02}", k + 1),
            base.from_bus.clone(),
            base.to_bus.clone(),
            base.susceptance,
            base.flow_limit,
            cost,
        ));
    }

    let network = Network::new(buses, circuits);
    let evaluator = Evaluator::new(&network).expect("synthetic network is valid");
    let topo = evaluator.topology();
    let all_built = ExpansionPlan::all_built(topo);
    let nothing = ExpansionPlan::empty(topo);

    let n_scenarios = rng.random_range(3..=6);
    let mut scenarios = Vec::with_capacity(n_scenarios);
    let mut utilization = 0.65;
    let mut attempts = 0;
    while scenarios.len() < n_scenarios && attempts < 200 {
        attempts += 1;
        let sc = sample_scenario(
            &mut rng,
            topo,
            format!("s{:02}", scenarios.len() + 1),
            utilization,
        );
        let feasible_full = evaluator
            .evaluate(&all_built, &sc)
            .map(|r| r.is_feasible())
            .unwrap_or(false);
        if !feasible_full {
            utilization *= 0.9;
            continue;
        }
        // the first scenario must overload the existing grid so the instance
        // actually requires investment
        if scenarios.is_empty() {
            let overloaded = evaluator
                .evaluate(&nothing, &sc)
                .map(|r| !r.is_feasible())
                .unwrap_or(false);
            if !overloaded {
                utilization = (utilization * 1.2).min(0.95);
                continue;
            }
        }
        scenarios.push(sc);
    }
    assert!(
        scenarios.len() == n_scenarios,
        "scenario sampling failed for seed {seed} ({} of {n_scenarios})",
        scenarios.len()
    );

    SynthInstance { network, scenarios, seed }
}

/// Samples one exact DC operating point of the fully built grid: random
/// angles scaled so the most loaded circuit sits at `utilization` of its
/// capacity, injections read off the balance equations.
fn sample_scenario(
    rng: &mut ChaCha8Rng,
    topo: &crate::network::Topology,
    id: String,
    utilization: f64,
) -> Scenario {
    let n = topo.n_buses();
    let mut theta: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    for &r in &topo.references {
        theta[r] = 0.0;
    }

    // tightest capacity ratio over all circuits, existing and candidate
    let mut scale = f64::INFINITY;
    for p in 0..topo.n_circuits() {
        let (u, v) = topo.endpoints(p);
        let flow = topo.susceptance_mw(p) * (theta[u] - theta[v]);
        let cap = topo.circuit(p).effective_limit();
        if cap.is_finite() && flow.abs() > 1e-9 {
            scale = scale.min(cap / flow.abs());
        }
    }
    if !scale.is_finite() {
        scale = 1.0;
    }
    let s = scale * utilization;

    let mut injection = vec![0.0; n];
    for p in 0..topo.n_circuits() {
        let (u, v) = topo.endpoints(p);
        let flow = topo.susceptance_mw(p) * (theta[u] - theta[v]) * s;
        injection[u] += flow;
        injection[v] -= flow;
    }

    let mut sc = Scenario::new(topo, id);
    for b in 0..n {
        // round to keep the files tidy; rounding keeps per-bus balance exact
        // because generation and load split the same number
        let p = (injection[b] * 64.0).round() / 64.0;
        if p >= 0.0 {
            sc.generation[b] = p;
        } else {
            sc.load[b] = -p;
        }
    }
    sc
}
