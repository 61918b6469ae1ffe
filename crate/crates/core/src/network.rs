//! Electrical network data model: buses, circuits, incidence structure, and
//! validation shared by every planning stage.
//!
//! A [`Network`] is plain data; [`Network::topology`] checks it and builds the
//! indexed view ([`Topology`]) used by the solvers. Networks are immutable
//! after validation and safe to share across worker threads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Circuit role in the expansion problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitStatus {
    Existing,
    Candidate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bus {
    pub id: String,
    /// Area label assigned by clustering (or input data).
    pub area: Option<String>,
    /// Marks tie-line endpoints when the network is an extracted area.
    pub is_boundary: bool,
}

impl Bus {
    pub fn new(id: impl Into<String>) -> Self {
        Self { id: id.into(), area: None, is_boundary: false }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Circuit {
    pub id: String,
    pub from_bus: String,
    pub to_bus: String,
    /// Susceptance magnitude in per-unit on the network MVA base.
    pub susceptance: f64,
    /// Flow capacity in MW; `f64::INFINITY` for unmonitored circuits.
    pub flow_limit: f64,
    pub status: CircuitStatus,
    /// Investment cost; candidates only.
    pub cost: Option<f64>,
    /// Disjunction constant in MW; computed for candidates.
    pub big_m: Option<f64>,
    /// Unmonitored circuits get an infinite flow limit at model build time.
    pub monitored: bool,
    /// Free-form label used only for reporting (for example a voltage level).
    pub voltage_class: Option<String>,
}

impl Circuit {
    pub fn existing(
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        susceptance: f64,
        flow_limit: f64,
    ) -> Self {
        Self {
            id: id.into(),
            from_bus: from.into(),
            to_bus: to.into(),
            susceptance,
            flow_limit,
            status: CircuitStatus::Existing,
            cost: None,
            big_m: None,
            monitored: true,
            voltage_class: None,
        }
    }

    pub fn candidate(
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        susceptance: f64,
        flow_limit: f64,
        cost: f64,
    ) -> Self {
        Self {
            id: id.into(),
            from_bus: from.into(),
            to_bus: to.into(),
            susceptance,
            flow_limit,
            status: CircuitStatus::Candidate,
            cost: Some(cost),
            big_m: None,
            monitored: true,
            voltage_class: None,
        }
    }

    /// Capacity as seen by the planning model: unmonitored circuits are
    /// unconstrained.
    pub fn effective_limit(&self) -> f64 {
        if self.monitored {
            self.flow_limit
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Network {
    /// System MVA base for the per-unit susceptances.
    pub mva_base: f64,
    /// Explicit angle reference; when absent the lowest-id bus of each
    /// connected component is used.
    pub reference_bus: Option<String>,
    pub buses: Vec<Bus>,
    pub circuits: Vec<Circuit>,
}

impl Network {
    pub fn new(buses: Vec<Bus>, circuits: Vec<Circuit>) -> Self {
        Self { mva_base: 100.0, reference_bus: None, buses, circuits }
    }

    pub fn bus(&self, id: &str) -> Option<&Bus> {
        self.buses.iter().find(|b| b.id == id)
    }

    pub fn circuit(&self, id: &str) -> Option<&Circuit> {
        self.circuits.iter().find(|c| c.id == id)
    }

    /// Checks the network and reports every violation found. An empty report
    /// means the network is usable.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut seen_bus: HashMap<&str, usize> = HashMap::new();
        for (i, bus) in self.buses.iter().enumerate() {
            if let Some(&first) = seen_bus.get(bus.id.as_str()) {
                report.push(Violation::DuplicateBusId {
                    id: bus.id.clone(),
                    positions: (first, i),
                });
            } else {
                seen_bus.insert(&bus.id, i);
            }
        }
        let mut seen_circuit: HashMap<&str, usize> = HashMap::new();
        for (i, c) in self.circuits.iter().enumerate() {
            if let Some(&first) = seen_circuit.get(c.id.as_str()) {
                report.push(Violation::DuplicateCircuitId {
                    id: c.id.clone(),
                    positions: (first, i),
                });
            } else {
                seen_circuit.insert(&c.id, i);
            }
            if c.from_bus == c.to_bus {
                report.push(Violation::SelfLoop { circuit: c.id.clone() });
            }
            for end in [&c.from_bus, &c.to_bus] {
                if !seen_bus.contains_key(end.as_str()) && self.bus(end).is_none() {
                    report.push(Violation::DanglingBusRef {
                        circuit: c.id.clone(),
                        bus: end.clone(),
                    });
                }
            }
            if !(c.susceptance > 0.0) {
                report.push(Violation::NonpositiveSusceptance {
                    circuit: c.id.clone(),
                    value: c.susceptance,
                });
            }
            if c.flow_limit < 0.0 || c.flow_limit.is_nan() {
                report.push(Violation::NegativeFlowLimit {
                    circuit: c.id.clone(),
                    value: c.flow_limit,
                });
            }
            match (c.status, c.cost) {
                (CircuitStatus::Existing, Some(cost)) => {
                    report.push(Violation::ExistingWithCost { circuit: c.id.clone(), cost });
                }
                (CircuitStatus::Candidate, Some(cost)) if cost < 0.0 => {
                    report.push(Violation::NegativeCost { circuit: c.id.clone(), cost });
                }
                (CircuitStatus::Candidate, None) => {
                    report.push(Violation::CandidateWithoutCost { circuit: c.id.clone() });
                }
                _ => {}
            }
        }
        if !(self.mva_base > 0.0) {
            report.push(Violation::NonpositiveMvaBase { value: self.mva_base });
        }
        if let Some(r) = &self.reference_bus {
            if self.bus(r).is_none() {
                report.push(Violation::MissingReferenceBus { bus: r.clone() });
            }
        }
        report
    }

    /// Validates and builds the indexed topology. Buses and circuits are
    /// ordered by id so the structure is independent of input order.
    pub fn topology(&self) -> Result<Topology, NetworkError> {
        let report = self.validate();
        if !report.is_empty() {
            return Err(NetworkError::Invalid(report));
        }
        Ok(Topology::build(self))
    }
}

/// One validation finding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    DuplicateBusId { id: String, positions: (usize, usize) },
    DuplicateCircuitId { id: String, positions: (usize, usize) },
    DanglingBusRef { circuit: String, bus: String },
    SelfLoop { circuit: String },
    NonpositiveSusceptance { circuit: String, value: f64 },
    NegativeFlowLimit { circuit: String, value: f64 },
    ExistingWithCost { circuit: String, cost: f64 },
    NegativeCost { circuit: String, cost: f64 },
    CandidateWithoutCost { circuit: String },
    NonpositiveMvaBase { value: f64 },
    MissingReferenceBus { bus: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateBusId { id, positions } => {
                write!(f, "duplicate bus id '{id}' (positions {} and {})", positions.0, positions.1)
            }
            Violation::DuplicateCircuitId { id, positions } => {
                write!(f, "duplicate circuit id '{id}' (positions {} and {})", positions.0, positions.1)
            }
            Violation::DanglingBusRef { circuit, bus } => {
                write!(f, "circuit '{circuit}' references unknown bus '{bus}'")
            }
            Violation::SelfLoop { circuit } => {
                write!(f, "circuit '{circuit}' connects a bus to itself")
            }
            Violation::NonpositiveSusceptance { circuit, value } => {
                write!(f, "circuit '{circuit}': susceptance must be positive, got {value}")
            }
            Violation::NegativeFlowLimit { circuit, value } => {
                write!(f, "circuit '{circuit}': flow_limit must be nonnegative, got {value}")
            }
            Violation::ExistingWithCost { circuit, cost } => {
                write!(f, "existing circuit '{circuit}' carries investment cost {cost}")
            }
            Violation::NegativeCost { circuit, cost } => {
                write!(f, "candidate '{circuit}': cost must be nonnegative, got {cost}")
            }
            Violation::CandidateWithoutCost { circuit } => {
                write!(f, "candidate '{circuit}' has no investment cost")
            }
            Violation::NonpositiveMvaBase { value } => {
                write!(f, "mva base must be positive, got {value}")
            }
            Violation::MissingReferenceBus { bus } => {
                write!(f, "reference bus '{bus}' not found")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("network validation failed:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown bus id '{0}'")]
    UnknownBus(String),
    #[error("unknown circuit id '{0}'")]
    UnknownCircuit(String),
}

/// Indexed, validated view of a [`Network`]. Bus and circuit positions are
/// assigned in id order; candidate circuits get a dense secondary index used
/// for plan vectors.
#[derive(Debug, Clone)]
pub struct Topology {
    pub network: Network,
    /// Bus positions in id order.
    bus_index: BTreeMap<String, usize>,
    bus_ids: Vec<String>,
    /// All circuits in id order.
    circuit_ids: Vec<String>,
    circuit_index: BTreeMap<String, usize>,
    /// Positions (into `circuit_ids`) of existing and candidate circuits.
    existing: Vec<usize>,
    candidates: Vec<usize>,
    /// Endpoint bus positions per circuit.
    endpoints: Vec<(usize, usize)>,
    /// Connected component id per bus, over the full graph (existing plus
    /// all candidates).
    pub component: Vec<usize>,
    pub n_components: usize,
    /// Component id per bus over existing circuits only.
    pub existing_component: Vec<usize>,
    pub n_existing_components: usize,
    /// Angle reference bus positions, one per full-graph component.
    pub references: Vec<usize>,
}

impl Topology {
    fn build(network: &Network) -> Self {
        let mut buses = network.buses.clone();
        buses.sort_by(|a, b| a.id.cmp(&b.id));
        let mut circuits = network.circuits.clone();
        circuits.sort_by(|a, b| a.id.cmp(&b.id));
        let network = Network {
            mva_base: network.mva_base,
            reference_bus: network.reference_bus.clone(),
            buses,
            circuits,
        };

        let bus_ids: Vec<String> = network.buses.iter().map(|b| b.id.clone()).collect();
        let bus_index: BTreeMap<String, usize> =
            bus_ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let circuit_ids: Vec<String> = network.circuits.iter().map(|c| c.id.clone()).collect();
        let circuit_index: BTreeMap<String, usize> =
            circuit_ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();

        let endpoints: Vec<(usize, usize)> = network
            .circuits
            .iter()
            .map(|c| (bus_index[&c.from_bus], bus_index[&c.to_bus]))
            .collect();
        let existing: Vec<usize> = network
            .circuits
            .iter()
            .enumerate()
            .filter(|(_, c)| c.status == CircuitStatus::Existing)
            .map(|(i, _)| i)
            .collect();
        let candidates: Vec<usize> = network
            .circuits
            .iter()
            .enumerate()
            .filter(|(_, c)| c.status == CircuitStatus::Candidate)
            .map(|(i, _)| i)
            .collect();

        let n = bus_ids.len();
        let (component, n_components) =
            components(n, endpoints.iter().copied());
        let (existing_component, n_existing_components) =
            components(n, existing.iter().map(|&e| endpoints[e]));

        // one angle reference per full-graph component: the explicit
        // reference bus for its component, lowest bus position elsewhere
        let mut references = vec![usize::MAX; n_components];
        for b in 0..n {
            let c = component[b];
            if references[c] == usize::MAX {
                references[c] = b;
            }
        }
        if let Some(r) = &network.reference_bus {
            let b = bus_index[r];
            references[component[b]] = b;
        }

        Self {
            network,
            bus_index,
            bus_ids,
            circuit_ids,
            circuit_index,
            existing,
            candidates,
            endpoints,
            component,
            n_components,
            existing_component,
            n_existing_components,
            references,
        }
    }

    pub fn n_buses(&self) -> usize {
        self.bus_ids.len()
    }

    pub fn n_circuits(&self) -> usize {
        self.circuit_ids.len()
    }

    pub fn n_existing(&self) -> usize {
        self.existing.len()
    }

    pub fn n_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn bus_ids(&self) -> &[String] {
        &self.bus_ids
    }

    pub fn bus_position(&self, id: &str) -> Result<usize, NetworkError> {
        self.bus_index.get(id).copied().ok_or_else(|| NetworkError::UnknownBus(id.to_string()))
    }

    pub fn circuit_position(&self, id: &str) -> Result<usize, NetworkError> {
        self.circuit_index
            .get(id)
            .copied()
            .ok_or_else(|| NetworkError::UnknownCircuit(id.to_string()))
    }

    pub fn circuit_ids(&self) -> &[String] {
        &self.circuit_ids
    }

    pub fn circuit(&self, pos: usize) -> &Circuit {
        &self.network.circuits[pos]
    }

    pub fn endpoints(&self, pos: usize) -> (usize, usize) {
        self.endpoints[pos]
    }

    /// Positions (into the circuit list) of existing circuits, id order.
    pub fn existing_positions(&self) -> &[usize] {
        &self.existing
    }

    /// Positions of candidate circuits, id order. Plan decision vectors are
    /// aligned with this slice.
    pub fn candidate_positions(&self) -> &[usize] {
        &self.candidates
    }

    pub fn candidate_ids(&self) -> Vec<String> {
        self.candidates.iter().map(|&p| self.circuit_ids[p].clone()).collect()
    }

    pub fn candidate_cost(&self, k: usize) -> f64 {
        self.circuit(self.candidates[k]).cost.unwrap_or(0.0)
    }

    /// Susceptance in MW per radian (per-unit susceptance times MVA base).
    pub fn susceptance_mw(&self, pos: usize) -> f64 {
        self.circuit(pos).susceptance * self.network.mva_base
    }

    /// Branch-node incidence structure: one row per circuit in id order,
    /// `+1` at the from bus, `-1` at the to bus.
    pub fn incidence(&self) -> Vec<[(usize, f64); 2]> {
        self.endpoints
            .iter()
            .map(|&(f, t)| [(f, 1.0), (t, -1.0)])
            .collect()
    }

    /// Dense incidence rows, mostly for inspection and tests.
    pub fn incidence_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n_buses();
        self.endpoints
            .iter()
            .map(|&(f, t)| {
                let mut row = vec![0.0; n];
                row[f] += 1.0;
                row[t] -= 1.0;
                row
            })
            .collect()
    }
}

/// Union-find connected components; returns (component id per node, count)
/// with component ids numbered by first appearance in node order.
fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> (Vec<usize>, usize) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            parent[hi] = lo;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut out = vec![0; n];
    for b in 0..n {
        let root = find(&mut parent, b);
        if label[root] == usize::MAX {
            label[root] = count;
            count += 1;
        }
        out[b] = label[root];
    }
    (out, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_bus() -> Network {
        Network::new(
            vec![Bus::new("A"), Bus::new("B")],
            vec![Circuit::existing("e1", "A", "B", 2.0, 100.0)],
        )
    }

    #[test]
    fn incidence_single_circuit() {
        let topo = two_bus().topology().unwrap();
        let rows = topo.incidence_dense();
        assert_eq!(rows, vec![vec![1.0, -1.0]]);
    }

    #[test]
    fn incidence_triangle() {
        let net = Network::new(
            vec![Bus::new("A"), Bus::new("B"), Bus::new("C")],
            vec![
                Circuit::existing("e1", "A", "B", 1.0, 10.0),
                Circuit::existing("e2", "B", "C", 1.0, 10.0),
                Circuit::existing("e3", "A", "C", 1.0, 10.0),
            ],
        );
        let topo = net.topology().unwrap();
        let rows = topo.incidence_dense();
        assert_eq!(
            rows,
            vec![
                vec![1.0, -1.0, 0.0],
                vec![0.0, 1.0, -1.0],
                vec![1.0, 0.0, -1.0],
            ]
        );
        for row in rows {
            assert_eq!(row.iter().sum::<f64>(), 0.0);
            assert_eq!(row.iter().filter(|v| **v != 0.0).count(), 2);
        }
    }

    #[test]
    fn well_formed_network_has_empty_report() {
        assert!(two_bus().validate().is_empty());
    }

    #[test]
    fn zero_susceptance_is_reported_with_circuit_and_field() {
        let mut net = two_bus();
        net.circuits[0].susceptance = 0.0;
        let report = net.validate();
        assert_eq!(report.violations.len(), 1);
        match &report.violations[0] {
            Violation::NonpositiveSusceptance { circuit, value } => {
                assert_eq!(circuit, "e1");
                assert_eq!(*value, 0.0);
            }
            other => panic!("unexpected violation {other:?}"),
        }
    }

    #[test]
    fn duplicate_circuit_id_reports_both_occurrences() {
        let mut net = two_bus();
        net.circuits.push(Circuit::existing("e1", "B", "A", 1.0, 50.0));
        let report = net.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateCircuitId { id, positions: (0, 1) } if id == "e1")));
    }

    #[test]
    fn dangling_bus_reference_names_the_circuit() {
        let mut net = two_bus();
        net.circuits.push(Circuit::existing("e9", "A", "Z", 1.0, 50.0));
        let report = net.validate();
        assert!(report.violations.iter().any(
            |v| matches!(v, Violation::DanglingBusRef { circuit, bus } if circuit == "e9" && bus == "Z")
        ));
        assert!(net.topology().is_err());
    }

    #[test]
    fn topology_is_input_order_independent() {
        let a = Network::new(
            vec![Bus::new("B"), Bus::new("A"), Bus::new("C")],
            vec![
                Circuit::existing("e2", "B", "C", 1.0, 10.0),
                Circuit::existing("e1", "A", "B", 1.0, 10.0),
            ],
        );
        let b = Network::new(
            vec![Bus::new("A"), Bus::new("C"), Bus::new("B")],
            vec![
                Circuit::existing("e1", "A", "B", 1.0, 10.0),
                Circuit::existing("e2", "B", "C", 1.0, 10.0),
            ],
        );
        let ta = a.topology().unwrap();
        let tb = b.topology().unwrap();
        assert_eq!(ta.bus_ids(), tb.bus_ids());
        assert_eq!(ta.incidence_dense(), tb.incidence_dense());
    }

    #[test]
    fn component_references_pick_lowest_bus_id() {
        let net = Network::new(
            vec![Bus::new("1"), Bus::new("2"), Bus::new("6")],
            vec![Circuit::existing("e1", "1", "2", 1.0, 10.0)],
        );
        let topo = net.topology().unwrap();
        assert_eq!(topo.n_components, 2);
        let refs: Vec<&str> =
            topo.references.iter().map(|&b| topo.bus_ids()[b].as_str()).collect();
        assert_eq!(refs, vec!["1", "6"]);
    }
}
