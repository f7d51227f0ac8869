//! Error models, expected probability of success, and the noise-adaptive
//! routing variant.

use serde::Serialize;

use crate::circuit::{Circuit, GateKind};
use crate::dag::build_dag;
use crate::error::{Error, Result};
use crate::router::foresight::{route_prepared, ForesightParams, NoiseGuidance, RouterStats};
use crate::router::heuristic::SinglePenalties;
use crate::router::mapping::initial_mapping;
use crate::router::schedule::RoutedSchedule;
use crate::topology::{compute_distance_matrix, CouplingGraph};

/// Error rates and timings used by [`eps`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorModel {
    /// Aligned with the graph's edge list.
    pub cnot_error: Vec<f64>,
    pub one_qubit_error: Vec<f64>,
    pub measure_error: Vec<f64>,
    pub coherence_time_us: Vec<f64>,
    pub one_qubit_time_ns: f64,
    pub two_qubit_time_ns: f64,
    /// The graph had no calibration data and a uniform model was used.
    pub uniform_fallback: bool,
    edges: Vec<(usize, usize)>,
}

/// Uniform error rate assumed when a device carries no calibration data.
pub const FALLBACK_ERROR: f64 = 1e-2;

impl ErrorModel {
    pub fn from_graph(graph: &CouplingGraph) -> Self {
        if !graph.has_error_data() {
            let mut m = Self::uniform(graph, FALLBACK_ERROR);
            m.uniform_fallback = true;
            return m;
        }
        let n = graph.num_qubits();
        ErrorModel {
            cnot_error: (0..graph.edges().len()).map(|e| graph.cnot_error(e)).collect(),
            one_qubit_error: (0..n).map(|q| graph.one_qubit_error(q)).collect(),
            measure_error: (0..n).map(|q| graph.measure_error(q)).collect(),
            coherence_time_us: (0..n).map(|q| graph.coherence_time_us(q)).collect(),
            one_qubit_time_ns: graph.one_qubit_time_ns(),
            two_qubit_time_ns: graph.two_qubit_time_ns(),
            uniform_fallback: false,
            edges: graph.edges().to_vec(),
        }
    }

    /// Every edge and qubit gets `error`; coherence is infinite.
    pub fn uniform(graph: &CouplingGraph, error: f64) -> Self {
        let n = graph.num_qubits();
        ErrorModel {
            cnot_error: vec![error; graph.edges().len()],
            one_qubit_error: vec![error; n],
            measure_error: vec![error; n],
            coherence_time_us: vec![f64::INFINITY; n],
            one_qubit_time_ns: graph.one_qubit_time_ns(),
            two_qubit_time_ns: graph.two_qubit_time_ns(),
            uniform_fallback: false,
            edges: graph.edges().to_vec(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.one_qubit_error.len()
    }

    fn edge_error(&self, a: usize, b: usize) -> f64 {
        let key = (a.min(b), a.max(b));
        match self.edges.binary_search(&key) {
            Ok(i) => self.cnot_error[i],
            Err(_) => self.cnot_error.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Applies the model's rates to a copy of `graph`.
    pub fn apply_to(&self, graph: &CouplingGraph) -> Result<CouplingGraph> {
        graph
            .clone()
            .with_cnot_errors(self.cnot_error.clone())?
            .with_one_qubit_errors(self.one_qubit_error.clone())?
            .with_measure_errors(self.measure_error.clone())?
            .with_coherence_times_us(self.coherence_time_us.clone())?
            .with_gate_times_ns(self.one_qubit_time_ns, self.two_qubit_time_ns)
    }
}

/// Product of per-operation success probabilities and per-qubit
/// decoherence survival over each qubit's first-to-last busy span, with
/// as-soon-as-possible timing. A SWAP counts as three CNOTs in both error
/// and duration.
pub fn eps(schedule: &RoutedSchedule, model: &ErrorModel) -> f64 {
    eps_circuit(&schedule.circuit, model)
}

pub fn eps_circuit(circuit: &Circuit, model: &ErrorModel) -> f64 {
    let n = circuit.num_qubits.max(model.num_qubits());
    let mut ready = vec![0.0f64; n];
    let mut first = vec![f64::INFINITY; n];
    let mut log_p = 0.0f64;
    for g in &circuit.gates {
        let (err, dur) = match &g.kind {
            GateKind::OneQubit { .. } => (
                model.one_qubit_error[g.qubits[0]],
                model.one_qubit_time_ns,
            ),
            GateKind::Measure => (model.measure_error[g.qubits[0]], model.one_qubit_time_ns),
            GateKind::Cx => (
                model.edge_error(g.qubits[0], g.qubits[1]),
                model.two_qubit_time_ns,
            ),
            GateKind::Swap => {
                let e = model.edge_error(g.qubits[0], g.qubits[1]);
                (1.0 - (1.0 - e).powi(3), 3.0 * model.two_qubit_time_ns)
            }
            GateKind::Barrier => {
                let t = g.qubits.iter().map(|&q| ready[q]).fold(0.0, f64::max);
                for &q in &g.qubits {
                    ready[q] = t;
                }
                continue;
            }
        };
        log_p += (1.0 - err).ln();
        let start = g.qubits.iter().map(|&q| ready[q]).fold(0.0, f64::max);
        for &q in &g.qubits {
            first[q] = first[q].min(start);
            ready[q] = start + dur;
        }
    }
    for q in 0..n {
        if first[q].is_finite() {
            let t2 = model.coherence_time_us.get(q).copied().unwrap_or(f64::INFINITY) * 1000.0;
            log_p -= (ready[q] - first[q]) / t2;
        }
    }
    log_p.exp()
}

/// Additive edge weights `-ln(1 - e)` scaled so the most reliable edge has
/// weight 1.
pub fn edge_weights(model: &ErrorModel) -> Vec<f64> {
    let raw: Vec<f64> = model.cnot_error.iter().map(|&e| reliability_weight(e)).collect();
    let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
    raw.iter().map(|w| w / min).collect()
}

fn reliability_weight(e: f64) -> f64 {
    -(1.0 - e.clamp(1e-12, 1.0 - 1e-12)).ln()
}

/// One-qubit and measurement costs relative to the cheapest qubit, in units
/// of the most reliable edge weight.
pub fn single_penalties(model: &ErrorModel) -> SinglePenalties {
    let unit = model
        .cnot_error
        .iter()
        .map(|&e| reliability_weight(e))
        .fold(f64::INFINITY, f64::min);
    let rel = |errs: &[f64]| -> Vec<f64> {
        let w: Vec<f64> = errs.iter().map(|&e| reliability_weight(e)).collect();
        let min = w.iter().cloned().fold(f64::INFINITY, f64::min);
        w.iter().map(|x| (x - min) / unit).collect()
    };
    SinglePenalties {
        one_qubit: rel(&model.one_qubit_error),
        measure: rel(&model.measure_error),
    }
}

#[derive(Debug, Clone)]
pub struct NoiseOutcome {
    pub schedule: RoutedSchedule,
    pub stats: RouterStats,
    pub uniform_fallback: bool,
}

/// ForeSight with reliability-weighted paths, one-qubit and measurement
/// gates in the lookahead, and final selection by maximum EPS.
pub fn route_noise_adaptive(
    circuit: &Circuit,
    graph: &CouplingGraph,
    params: &ForesightParams,
) -> Result<NoiseOutcome> {
    let model = ErrorModel::from_graph(graph);
    route_with_model(circuit, graph, params, &model)
}

pub fn route_with_model(
    circuit: &Circuit,
    graph: &CouplingGraph,
    params: &ForesightParams,
    model: &ErrorModel,
) -> Result<NoiseOutcome> {
    circuit.validate()?;
    if model.num_qubits() != graph.num_qubits() || model.cnot_error.len() != graph.edges().len() {
        return Err(Error::InvalidArgument("error model does not match the device".into()));
    }
    let initial = initial_mapping(circuit, graph, params.initial_mapping, params.seed)?;
    let dmat = compute_distance_matrix(graph, params.delta, params.max_paths_per_pair)?
        .with_weights(edge_weights(model))?;
    let dag = build_dag(circuit);
    let guidance = NoiseGuidance {
        penalties: single_penalties(model),
        model,
    };
    let out = route_prepared(circuit, &dag, &dmat, initial, params, Some(&guidance))?;
    Ok(NoiseOutcome {
        schedule: out.schedule,
        stats: out.stats,
        uniform_fallback: model.uniform_fallback,
    })
}

/// Six-qubit ring with one unreliable edge and a circuit whose only gate
/// can be routed around either side.
pub fn two_route_fixture() -> (CouplingGraph, Circuit) {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)];
    let errors: Vec<f64> = {
        let g = CouplingGraph::new("two-route", 6, edges).expect("fixture");
        g.edges()
            .iter()
            .map(|&e| if e == (1, 2) { 0.1 } else { 0.001 })
            .collect()
    };
    let graph = CouplingGraph::new("two-route", 6, edges)
        .and_then(|g| g.with_cnot_errors(errors))
        .and_then(|g| g.with_one_qubit_errors(vec![0.001; 6]))
        .and_then(|g| g.with_measure_errors(vec![0.001; 6]))
        .expect("fixture");
    let mut c = Circuit::new(6, 0).with_name("two-route");
    c.push(crate::circuit::Gate::cx(0, 3));
    (graph, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::router::mapping::{Mapping, MappingPolicy};
    use crate::router::route_foresight;
    use crate::topology::{builtin_topology, BuiltinTopology};

    fn line(n: usize) -> CouplingGraph {
        builtin_topology(&BuiltinTopology::Line(n)).unwrap()
    }

    fn sched(c: Circuit, n: usize) -> RoutedSchedule {
        let m = Mapping::identity(n, n);
        RoutedSchedule {
            inserted_swap: vec![false; c.gates.len()],
            depth: c.depth(),
            circuit: c,
            initial_mapping: m.clone(),
            final_mapping: m,
            swap_count: 0,
            swap_overhead_cnots: 0,
            eps: None,
        }
    }

    #[test]
    fn two_cnots() {
        let g = line(2);
        let m = ErrorModel::uniform(&g, 0.01);
        let mut c = Circuit::new(2, 0);
        c.push(Gate::cx(0, 1));
        c.push(Gate::cx(0, 1));
        assert!((eps(&sched(c, 2), &m) - 0.9801).abs() < 1e-12);
    }

    #[test]
    fn empty_is_one() {
        let g = line(3);
        let m = ErrorModel::uniform(&g, 0.05);
        assert_eq!(eps(&sched(Circuit::new(3, 0), 3), &m), 1.0);
    }

    #[test]
    fn decoherence() {
        let g = line(2)
            .with_cnot_errors(vec![0.01])
            .unwrap()
            .with_coherence_times_us(vec![15.0, 15.0])
            .unwrap();
        let m = ErrorModel::from_graph(&g);
        let mut c = Circuit::new(2, 0);
        c.push(Gate::cx(0, 1));
        let want = 0.99 * (-32.0f64 / 15000.0).exp().powi(2);
        assert!((eps(&sched(c, 2), &m) - want).abs() < 1e-12);
        assert!((want - 0.9858).abs() < 1e-4);
    }

    #[test]
    fn idle_prefix_is_not_charged() {
        let g = line(3)
            .with_cnot_errors(vec![0.0, 0.0])
            .unwrap()
            .with_coherence_times_us(vec![1.0; 3])
            .unwrap();
        let m = ErrorModel::from_graph(&g);
        let mut c = Circuit::new(3, 0);
        c.push(Gate::cx(0, 1));
        c.push(Gate::cx(1, 2));
        // q0 busy 0..32, q1 0..64, q2 32..64.
        let want = (-(32.0 + 64.0 + 32.0) / 1000.0f64).exp();
        assert!((eps(&sched(c, 3), &m) - want).abs() < 1e-12);
    }

    #[test]
    fn swap_counts_three_times() {
        let g = line(2);
        let m = ErrorModel::uniform(&g, 0.02);
        let mut c = Circuit::new(2, 0);
        c.push(Gate::swap(0, 1));
        assert!((eps(&sched(c, 2), &m) - 0.98f64.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn missing_data_falls_back() {
        let m = ErrorModel::from_graph(&line(3));
        assert!(m.uniform_fallback);
        assert!(m.cnot_error.iter().all(|&e| e == FALLBACK_ERROR));
    }

    #[test]
    fn uniform_weights_are_one() {
        let g = builtin_topology(&BuiltinTopology::Ring(5)).unwrap();
        let m = ErrorModel::uniform(&g, 0.03);
        assert!(edge_weights(&m).iter().all(|&w| w == 1.0));
        let p = single_penalties(&m);
        assert!(p.one_qubit.iter().chain(&p.measure).all(|&x| x == 0.0));
    }

    #[test]
    fn two_route_fixture_prefers_reliable_side() {
        let (g, c) = two_route_fixture();
        let model = ErrorModel::from_graph(&g);
        let params = ForesightParams {
            initial_mapping: MappingPolicy::Identity,
            ..Default::default()
        };
        // Both equal-hop candidates, built by hand.
        let via = |swaps: [(usize, usize); 2], meet: (usize, usize)| {
            let mut k = Circuit::new(6, 0);
            k.push(Gate::swap(swaps[0].0, swaps[0].1));
            k.push(Gate::swap(swaps[1].0, swaps[1].1));
            k.push(Gate::cx(meet.0, meet.1));
            eps_circuit(&k, &model)
        };
        let upper = via([(0, 1), (3, 2)], (1, 2));
        let lower = via([(0, 5), (3, 4)], (5, 4));
        assert!(lower > upper);

        let adaptive = route_noise_adaptive(&c, &g, &params).unwrap().schedule;
        let agnostic = route_foresight(&c, &g, &params).unwrap();
        let e_adaptive = eps(&adaptive, &model);
        assert!((e_adaptive - lower).abs() < 1e-12);
        assert!(e_adaptive > eps(&agnostic, &model));
    }
}
