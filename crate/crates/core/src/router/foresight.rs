//! The multi-candidate routing loop.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::heuristic::{build_post, build_post_with_singles, PostArray, Scorer, SinglePenalties};
use super::mapping::{initial_mapping, Mapping, MappingPolicy};
use super::pool::{generate_candidate_pool, PoolLimits};
use super::schedule::{assemble, Event, RoutedSchedule};
use super::tree::{NodeId, PruneRecord, SolutionTree};
use crate::circuit::Circuit;
use crate::dag::{build_dag, CircuitDag};
use crate::error::{Error, Result};
use crate::noise::{eps, ErrorModel};
use crate::topology::{compute_distance_matrix, routing_capacity, CouplingGraph, DistanceMatrix};

/// Nodes kept before the tree is compacted.
const COMPACT_THRESHOLD: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForesightParams {
    /// Extra hops a candidate route may take beyond the shortest.
    pub delta: usize,
    /// Frontier size that triggers a prune.
    pub max_solutions: usize,
    pub seed: u64,
    pub noise_adaptive: bool,
    pub max_paths_per_pair: usize,
    pub initial_mapping: MappingPolicy,
}

impl Default for ForesightParams {
    fn default() -> Self {
        ForesightParams {
            delta: 2,
            max_solutions: 64,
            seed: 0,
            noise_adaptive: false,
            max_paths_per_pair: crate::topology::DEFAULT_MAX_PATHS,
            initial_mapping: MappingPolicy::DegreeMatched,
        }
    }
}

/// Instrumentation gathered during one routing run.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RouterStats {
    pub layers: usize,
    /// Frontier size at the end of each DAG layer (after any prune).
    pub frontier_after_layer: Vec<usize>,
    pub max_frontier: usize,
    pub prunes: Vec<PruneRecord>,
    /// Frontier held more than one node with the same mapping right after a
    /// prune.
    pub duplicate_mappings_after_prune: bool,
    pub peak_tree_nodes: usize,
    pub pool_calls: usize,
    pub candidates_generated: usize,
    /// Paths looked up across all pool calls.
    pub paths_considered: usize,
    /// Expansions that neither scheduled a gate nor reduced front distance.
    pub progress_violations: usize,
}

/// Extra inputs of the noise-adaptive variant.
#[derive(Debug, Clone)]
pub struct NoiseGuidance<'a> {
    pub penalties: SinglePenalties,
    pub model: &'a ErrorModel,
}

#[derive(Debug, Clone)]
pub struct ForesightOutcome {
    pub schedule: RoutedSchedule,
    pub stats: RouterStats,
    pub tree: SolutionTree,
}

pub fn route_foresight(
    circuit: &Circuit,
    graph: &CouplingGraph,
    params: &ForesightParams,
) -> Result<RoutedSchedule> {
    if params.noise_adaptive {
        return crate::noise::route_noise_adaptive(circuit, graph, params).map(|r| r.schedule);
    }
    route_foresight_detailed(circuit, graph, params).map(|o| o.schedule)
}

/// Noise-agnostic run returning the final tree and instrumentation.
pub fn route_foresight_detailed(
    circuit: &Circuit,
    graph: &CouplingGraph,
    params: &ForesightParams,
) -> Result<ForesightOutcome> {
    circuit.validate()?;
    let initial = initial_mapping(circuit, graph, params.initial_mapping, params.seed)?;
    let dmat = compute_distance_matrix(graph, params.delta, params.max_paths_per_pair)?;
    let dag = build_dag(circuit);
    route_prepared(circuit, &dag, &dmat, initial, params, None)
}

/// Core loop over a prebuilt DAG and distance table.
pub fn route_prepared(
    circuit: &Circuit,
    dag: &CircuitDag,
    dmat: &DistanceMatrix,
    initial: Mapping,
    params: &ForesightParams,
    noise: Option<&NoiseGuidance<'_>>,
) -> Result<ForesightOutcome> {
    if params.max_solutions == 0 {
        return Err(Error::InvalidArgument("max_solutions must be >= 1".into()));
    }
    if initial.num_program() != circuit.num_qubits || initial.num_physical() != dmat.num_qubits() {
        return Err(Error::InvalidArgument("initial mapping does not fit circuit/device".into()));
    }
    let mu_g = routing_capacity(dmat.graph());
    let scorer = Scorer {
        dmat,
        mu_g,
        penalties: noise.map(|n| &n.penalties),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut tree = SolutionTree::new(initial.clone(), params.max_solutions, params.seed);
    let mut stats = RouterStats {
        layers: dag.num_layers(),
        ..RouterStats::default()
    };
    let limits = PoolLimits {
        beam: params.max_solutions,
    };

    for layer in 0..dag.num_layers() {
        let post = if noise.is_some() {
            build_post_with_singles(dag, layer, mu_g)
        } else {
            build_post(dag, layer, mu_g)
        };
        let frontier = std::mem::take(&mut tree.layer_frontier);
        let mut next = Vec::new();
        for leaf in frontier {
            let mapping = tree.nodes[leaf].mapping.take().expect("frontier mapping");
            expand_leaf(
                &mut tree, &mut stats, dag, &scorer, &post, limits, layer, leaf, mapping, &mut next,
            );
        }
        tree.layer_frontier = next;
        if tree.layer_frontier.len() > params.max_solutions {
            let rec = tree.prune(layer, &mut rng);
            let distinct: std::collections::HashSet<&Mapping> = tree
                .layer_frontier
                .iter()
                .map(|&id| tree.nodes[id].mapping.as_ref().unwrap())
                .collect();
            if distinct.len() != tree.layer_frontier.len() {
                stats.duplicate_mappings_after_prune = true;
            }
            stats.prunes.push(rec);
        }
        stats.frontier_after_layer.push(tree.layer_frontier.len());
        stats.max_frontier = stats.max_frontier.max(tree.layer_frontier.len());
        if tree.nodes.len() > COMPACT_THRESHOLD {
            tree.compact();
        }
    }
    stats.peak_tree_nodes = tree.peak_nodes;

    let schedule = select_leaf(&tree, dag, circuit.num_clbits, &initial, noise);
    Ok(ForesightOutcome {
        schedule,
        stats,
        tree,
    })
}

#[allow(clippy::too_many_arguments)]
fn expand_leaf(
    tree: &mut SolutionTree,
    stats: &mut RouterStats,
    dag: &CircuitDag,
    scorer: &Scorer<'_>,
    post: &PostArray,
    limits: PoolLimits,
    layer: usize,
    leaf: NodeId,
    mapping: Mapping,
    out: &mut Vec<NodeId>,
) {
    let graph = scorer.dmat.graph();
    let cap = limits.beam.max(1);
    let mut produced = 0usize;
    let mut work: VecDeque<(NodeId, Mapping, Vec<usize>)> = VecDeque::new();
    work.push_back((leaf, mapping, dag.layers[layer].clone()));

    while let Some((parent, map, pending)) = work.pop_front() {
        let (ready, blocked): (Vec<usize>, Vec<usize>) = pending.into_iter().partition(|&g| {
            let (a, b) = dag.pair(g);
            graph.has_edge(map.physical(a), map.physical(b))
        });
        let ready_events: Vec<Event> = ready.iter().map(|&g| Event::Gate(g)).collect();
        let ready_cnots: usize = ready.iter().map(|&g| dag.gates[g].cnot_count()).sum();
        if blocked.is_empty() {
            let id = tree.add(parent, ready_events, ready_cnots, layer);
            tree.nodes[id].mapping = Some(map);
            out.push(id);
            produced += 1;
            continue;
        }

        let front_distance = |m: &Mapping, gates: &[usize]| -> u64 {
            gates
                .iter()
                .map(|&g| {
                    let (a, b) = dag.pair(g);
                    scorer.dmat.shortest(m.physical(a), m.physical(b)) as u64
                })
                .sum()
        };
        let before = front_distance(&map, &blocked);
        stats.pool_calls += 1;
        stats.paths_considered += blocked
            .iter()
            .map(|&g| {
                let (a, b) = dag.pair(g);
                scorer.dmat.paths(map.physical(a), map.physical(b)).len()
            })
            .sum::<usize>();
        let pool = generate_candidate_pool(&blocked, dag, &map, scorer, post, limits);
        stats.candidates_generated += pool.len();

        let room = cap.saturating_sub(produced + work.len()).max(1);
        for cand in pool.into_iter().take(room) {
            if cand.satisfied_gates.is_empty()
                && front_distance(&cand.resulting_mapping, &cand.deferred_gates) >= before
            {
                stats.progress_violations += 1;
            }
            let mut events = ready_events.clone();
            events.extend(cand.swaps.iter().map(|&(a, b)| Event::Swap(a, b)));
            events.extend(cand.satisfied_gates.iter().map(|&g| Event::Gate(g)));
            let cnots = ready_cnots
                + cand.cnot_cost
                + cand
                    .satisfied_gates
                    .iter()
                    .map(|&g| dag.gates[g].cnot_count())
                    .sum::<usize>();
            let id = tree.add(parent, events, cnots, layer);
            if cand.deferred_gates.is_empty() {
                tree.nodes[id].mapping = Some(cand.resulting_mapping);
                out.push(id);
                produced += 1;
            } else {
                work.push_back((id, cand.resulting_mapping, cand.deferred_gates));
            }
        }
    }
}

/// Minimum (CNOT cost, depth) leaf, or maximum EPS in noise-adaptive mode;
/// remaining ties go to the lowest node id.
fn select_leaf(
    tree: &SolutionTree,
    dag: &CircuitDag,
    num_clbits: usize,
    initial: &Mapping,
    noise: Option<&NoiseGuidance<'_>>,
) -> RoutedSchedule {
    let mut best: Option<(RoutedSchedule, usize, f64)> = None;
    for &leaf in &tree.layer_frontier {
        let mut sched = assemble(dag, num_clbits, initial, &tree.trace(leaf));
        let cost = tree.nodes[leaf].cnot_cost;
        let e = noise.map_or(0.0, |n| eps(&sched, n.model));
        if noise.is_some() {
            sched.eps = Some(e);
        }
        let better = match &best {
            None => true,
            Some((b, bcost, beps)) => {
                if noise.is_some() && (e - beps).abs() > 1e-12 * beps.max(1e-300) {
                    e > *beps
                } else {
                    (cost, sched.depth) < (*bcost, b.depth)
                }
            }
        };
        if better {
            best = Some((sched, cost, e));
        }
    }
    best.expect("frontier is never empty").0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::topology::{builtin_topology, BuiltinTopology};

    #[test]
    fn routable_circuit_needs_no_swaps() {
        let g = builtin_topology(&BuiltinTopology::Line(4)).unwrap();
        let mut c = Circuit::new(4, 0);
        c.push(Gate::one_qubit("h", vec![], 0));
        c.push(Gate::cx(0, 1));
        c.push(Gate::cx(1, 2));
        c.push(Gate::cx(2, 3));
        let p = ForesightParams {
            initial_mapping: MappingPolicy::Identity,
            ..Default::default()
        };
        let s = route_foresight(&c, &g, &p).unwrap();
        assert_eq!(s.swap_count, 0);
        assert!(s.circuit.same_structure(&Circuit {
            num_qubits: 4,
            ..c.clone()
        }));
    }

    #[test]
    fn far_gate_on_a_line() {
        let g = builtin_topology(&BuiltinTopology::Line(5)).unwrap();
        let mut c = Circuit::new(5, 0);
        c.push(Gate::cx(0, 4));
        let p = ForesightParams {
            initial_mapping: MappingPolicy::Identity,
            ..Default::default()
        };
        let s = route_foresight(&c, &g, &p).unwrap();
        assert_eq!(s.swap_count, 3);
        let (a, b) = (s.final_mapping.physical(0), s.final_mapping.physical(4));
        assert!(g.has_edge(a, b));
    }

    #[test]
    fn empty_circuit() {
        let g = builtin_topology(&BuiltinTopology::Ring(4)).unwrap();
        let c = Circuit::new(2, 0);
        let s = route_foresight(&c, &g, &ForesightParams::default()).unwrap();
        assert_eq!(s.circuit.gates.len(), 0);
        assert_eq!(s.circuit.num_qubits, 4);
    }
}
