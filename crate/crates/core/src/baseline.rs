//! One-SWAP-at-a-time greedy router and the hybrid selector.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::dag::{build_dag, CircuitDag};
use crate::error::Result;
use crate::router::foresight::{route_foresight, ForesightParams};
use crate::router::mapping::{initial_mapping, Mapping, MappingPolicy};
use crate::router::schedule::{assemble, Event, RoutedSchedule};
use crate::topology::{compute_distance_matrix, CouplingGraph, DistanceMatrix};

/// Two-qubit gates beyond the front considered by the score.
pub const EXTENDED_SET_SIZE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheduling {
    /// Any gate whose dependencies are resolved may execute.
    #[default]
    Asap,
    /// Only gates of the current DAG layer may execute.
    Alap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyParams {
    pub lookahead_weight: f64,
    pub seed: u64,
    pub scheduling: Scheduling,
    pub initial_mapping: MappingPolicy,
}

impl Default for GreedyParams {
    fn default() -> Self {
        GreedyParams {
            lookahead_weight: 0.5,
            seed: 0,
            scheduling: Scheduling::Asap,
            initial_mapping: MappingPolicy::DegreeMatched,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GreedyStats {
    /// SWAPs that strictly lowered the score.
    pub score_swaps: usize,
    /// SWAPs forced along a shortest path when no SWAP lowered the score.
    pub release_swaps: usize,
}

pub fn route_greedy(
    circuit: &Circuit,
    graph: &CouplingGraph,
    params: &GreedyParams,
) -> Result<RoutedSchedule> {
    route_greedy_detailed(circuit, graph, params).map(|(s, _)| s)
}

pub fn route_greedy_detailed(
    circuit: &Circuit,
    graph: &CouplingGraph,
    params: &GreedyParams,
) -> Result<(RoutedSchedule, GreedyStats)> {
    circuit.validate()?;
    let initial = initial_mapping(circuit, graph, params.initial_mapping, params.seed)?;
    let dmat = compute_distance_matrix(graph, 0, 1)?;
    let dag = build_dag(circuit);
    Ok(route_greedy_prepared(circuit, &dag, &dmat, initial, params))
}

pub fn route_greedy_prepared(
    circuit: &Circuit,
    dag: &CircuitDag,
    dmat: &DistanceMatrix,
    initial: Mapping,
    params: &GreedyParams,
) -> (RoutedSchedule, GreedyStats) {
    let graph = dmat.graph();
    let m = dag.gates.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut stats = GreedyStats::default();
    let mut mapping = initial.clone();
    let mut events = Vec::new();

    let mut succ = vec![Vec::new(); m];
    let mut waiting = vec![0usize; m];
    for g in dag.two_qubit_gates() {
        waiting[g] = dag.two_qubit_predecessors[g].len();
        for &p in &dag.two_qubit_predecessors[g] {
            succ[p].push(g);
        }
    }
    let mut done = vec![false; m];
    let mut ready: Vec<usize> = dag.two_qubit_gates().filter(|&g| waiting[g] == 0).collect();
    let mut layer = 0usize;
    let mut last_swap: Option<(usize, usize)> = None;
    let mut since_progress = 0usize;
    let stall_limit = 2 * graph.num_qubits() + 20;

    let dist = |mp: &Mapping, g: usize| -> f64 {
        let (a, b) = dag.pair(g);
        dmat.shortest(mp.physical(a), mp.physical(b)) as f64
    };

    loop {
        // Execute everything adjacent until nothing more is possible.
        loop {
            let front = front_of(&ready, dag, params.scheduling, layer);
            let exec: Vec<usize> = front
                .iter()
                .copied()
                .filter(|&g| {
                    let (a, b) = dag.pair(g);
                    graph.has_edge(mapping.physical(a), mapping.physical(b))
                })
                .collect();
            if exec.is_empty() {
                if params.scheduling == Scheduling::Alap
                    && front.is_empty()
                    && layer + 1 < dag.num_layers()
                {
                    layer += 1;
                    continue;
                }
                break;
            }
            for g in exec {
                events.push(Event::Gate(g));
                done[g] = true;
                ready.retain(|&r| r != g);
                for &s in &succ[g] {
                    waiting[s] -= 1;
                    if waiting[s] == 0 {
                        ready.push(s);
                    }
                }
            }
            since_progress = 0;
            last_swap = None;
        }
        let front = front_of(&ready, dag, params.scheduling, layer);
        if front.is_empty() {
            break;
        }

        let extended = extended_set(&front, &succ, &done);
        let score = |mp: &Mapping| -> f64 {
            let f: f64 = front.iter().map(|&g| dist(mp, g)).sum();
            let e = if extended.is_empty() {
                0.0
            } else {
                extended.iter().map(|&g| dist(mp, g)).sum::<f64>() / extended.len() as f64
            };
            f + params.lookahead_weight * e
        };
        let current = score(&mapping);

        let mut cands: Vec<(usize, usize)> = Vec::new();
        for &g in &front {
            let (a, b) = dag.pair(g);
            for p in [mapping.physical(a), mapping.physical(b)] {
                for &nb in graph.neighbors(p) {
                    let e = (p.min(nb), p.max(nb));
                    if Some(e) != last_swap && !cands.contains(&e) {
                        cands.push(e);
                    }
                }
            }
        }
        cands.sort_unstable();
        let mut best = f64::INFINITY;
        let mut ties: Vec<(usize, usize)> = Vec::new();
        for &(x, y) in &cands {
            mapping.swap_physical(x, y);
            let s = score(&mapping);
            mapping.swap_physical(x, y);
            if s < best - 1e-9 {
                best = s;
                ties.clear();
                ties.push((x, y));
            } else if (s - best).abs() <= 1e-9 {
                ties.push((x, y));
            }
        }

        let chosen = if best < current - 1e-9 && since_progress < stall_limit {
            stats.score_swaps += 1;
            ties[rng.gen_range(0..ties.len())]
        } else {
            stats.release_swaps += 1;
            let g = *front
                .iter()
                .min_by(|&&x, &&y| dist(&mapping, x).total_cmp(&dist(&mapping, y)).then(x.cmp(&y)))
                .unwrap();
            let (a, b) = dag.pair(g);
            let path = &dmat.paths(mapping.physical(a), mapping.physical(b))[0];
            (path[0].min(path[1]), path[0].max(path[1]))
        };
        mapping.swap_physical(chosen.0, chosen.1);
        events.push(Event::Swap(chosen.0, chosen.1));
        last_swap = Some(chosen);
        since_progress += 1;
    }

    (assemble(dag, circuit.num_clbits, &initial, &events), stats)
}

fn front_of(ready: &[usize], dag: &CircuitDag, scheduling: Scheduling, layer: usize) -> Vec<usize> {
    let mut f: Vec<usize> = match scheduling {
        Scheduling::Asap => ready.to_vec(),
        Scheduling::Alap => ready
            .iter()
            .copied()
            .filter(|&g| dag.layer_of[g] == Some(layer))
            .collect(),
    };
    f.sort_unstable();
    f
}

/// Breadth-first successors of the front, up to the extended-set size.
fn extended_set(front: &[usize], succ: &[Vec<usize>], done: &[bool]) -> Vec<usize> {
    let mut seen: std::collections::HashSet<usize> = front.iter().copied().collect();
    let mut queue: VecDeque<usize> = front.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        for &s in &succ[g] {
            if done[s] || !seen.insert(s) {
                continue;
            }
            out.push(s);
            if out.len() == EXTENDED_SET_SIZE {
                return out;
            }
            queue.push_back(s);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HybridWinner {
    Foresight,
    Greedy,
}

#[derive(Debug, Clone)]
pub struct HybridOutcome {
    pub schedule: RoutedSchedule,
    pub winner: HybridWinner,
    pub foresight: RoutedSchedule,
    pub greedy: RoutedSchedule,
}

/// Runs both routers concurrently and keeps the lower SWAP overhead, then
/// the lower depth, then ForeSight's schedule.
pub fn route_hybrid(
    circuit: &Circuit,
    graph: &CouplingGraph,
    foresight: &ForesightParams,
    greedy: &GreedyParams,
) -> Result<HybridOutcome> {
    let (f, g) = std::thread::scope(|s| {
        let h = s.spawn(|| route_greedy(circuit, graph, greedy));
        let f = route_foresight(circuit, graph, foresight);
        (f, h.join().expect("greedy router panicked"))
    });
    let (f, g) = (f?, g?);
    Ok(pick_hybrid(f, g))
}

pub fn pick_hybrid(foresight: RoutedSchedule, greedy: RoutedSchedule) -> HybridOutcome {
    let key = |s: &RoutedSchedule| (s.swap_overhead_cnots, s.depth);
    let winner = if key(&greedy) < key(&foresight) {
        HybridWinner::Greedy
    } else {
        HybridWinner::Foresight
    };
    let schedule = match winner {
        HybridWinner::Foresight => foresight.clone(),
        HybridWinner::Greedy => greedy.clone(),
    };
    HybridOutcome {
        schedule,
        winner,
        foresight,
        greedy,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::topology::{builtin_topology, BuiltinTopology};

    fn identity_params() -> GreedyParams {
        GreedyParams {
            initial_mapping: MappingPolicy::Identity,
            ..Default::default()
        }
    }

    #[test]
    fn routable_needs_nothing() {
        let g = builtin_topology(&BuiltinTopology::Line(3)).unwrap();
        let mut c = Circuit::new(3, 0);
        c.push(Gate::cx(0, 1));
        c.push(Gate::cx(2, 1));
        let s = route_greedy(&c, &g, &identity_params()).unwrap();
        assert_eq!(s.swap_count, 0);
    }

    #[test]
    fn far_gate_on_line_is_optimal() {
        // On a path graph the only way to make 0 and 4 adjacent is to move
        // the endpoints inward; any such sequence needs exactly 3 SWAPs.
        let g = builtin_topology(&BuiltinTopology::Line(5)).unwrap();
        let mut c = Circuit::new(5, 0);
        c.push(Gate::cx(0, 4));
        for seed in 0..5 {
            let p = GreedyParams {
                seed,
                ..identity_params()
            };
            let (s, st) = route_greedy_detailed(&c, &g, &p).unwrap();
            assert_eq!(s.swap_count, brute_force_min_swaps(&g, 0, 4));
            assert_eq!(st.release_swaps, 0);
            for (gate, &ins) in s.circuit.gates.iter().zip(&s.inserted_swap) {
                if ins {
                    assert!(g.has_edge(gate.qubits[0], gate.qubits[1]));
                }
            }
        }
    }

    /// Breadth-first search over placements of two tokens.
    fn brute_force_min_swaps(g: &CouplingGraph, a: usize, b: usize) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut q = VecDeque::from([((a, b), 0usize)]);
        while let Some(((x, y), d)) = q.pop_front() {
            if g.has_edge(x, y) {
                return d;
            }
            if !seen.insert((x, y)) {
                continue;
            }
            for &nx in g.neighbors(x) {
                let ny = if nx == y { x } else { y };
                q.push_back(((nx, ny), d + 1));
            }
            for &ny in g.neighbors(y) {
                let nx = if ny == x { y } else { x };
                q.push_back(((nx, ny), d + 1));
            }
        }
        unreachable!()
    }

    #[test]
    fn hybrid_picks_minimum() {
        let g = builtin_topology(&BuiltinTopology::Grid { rows: 2, cols: 3 }).unwrap();
        let mut c = Circuit::new(6, 0);
        for (a, b) in [(0, 5), (1, 4), (2, 3), (0, 3), (1, 5)] {
            c.push(Gate::cx(a, b));
        }
        let h = route_hybrid(&c, &g, &ForesightParams::default(), &GreedyParams::default()).unwrap();
        let best = h.foresight.swap_overhead_cnots.min(h.greedy.swap_overhead_cnots);
        assert_eq!(h.schedule.swap_overhead_cnots, best);
    }
}
