//! Path folding and SWAP-candidate pool generation.

use super::heuristic::{Positions, PostArray, Scorer};
use super::mapping::Mapping;
use crate::dag::CircuitDag;
use crate::error::{Error, Result};
use crate::topology::DistanceMatrix;

/// Absolute score slack under which candidates count as tied.
pub const SCORE_TIE_EPS: f64 = 1e-9;

/// SWAP sequence produced by folding one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub swaps: Vec<(usize, usize)>,
    /// Sequential SWAP steps when the two halves run in parallel.
    pub critical_path: usize,
    /// Where the endpoints end up adjacent.
    pub meeting_edge: (usize, usize),
}

/// Folds `path` at edge `fold_edge_index`: the first endpoint walks to
/// `path[m]`, the last to `path[m + 1]`.
pub fn fold_path(path: &[usize], fold_edge_index: usize) -> Result<Fold> {
    if path.len() < 2 {
        return Err(Error::InvalidArgument("a path needs two endpoints".into()));
    }
    let k = path.len() - 1;
    let m = fold_edge_index;
    if m >= k {
        return Err(Error::FoldOutOfRange {
            index: m,
            edges: k,
        });
    }
    let mut swaps = Vec::with_capacity(k - 1);
    for t in 0..m {
        swaps.push((path[t], path[t + 1]));
    }
    for t in (m + 2..=k).rev() {
        swaps.push((path[t], path[t - 1]));
    }
    Ok(Fold {
        swaps,
        critical_path: m.max(k - 1 - m),
        meeting_edge: (path[m], path[m + 1]),
    })
}

/// The midway fold edge of a path with `k` edges.
pub fn default_fold_index(k: usize) -> usize {
    k.saturating_sub(1) / 2
}

/// Fold edges evaluated per path: both ends and the midpoint +-1.
pub fn fold_positions(k: usize) -> Vec<usize> {
    if k == 0 {
        return Vec::new();
    }
    let mid = default_fold_index(k);
    let mut v = vec![0, k - 1, mid, mid.saturating_sub(1), (mid + 1).min(k - 1)];
    v.sort_unstable();
    v.dedup();
    v
}

/// A way of satisfying (part of) the front layer with a list of SWAPs.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapCandidate {
    pub swaps: Vec<(usize, usize)>,
    pub resulting_mapping: Mapping,
    pub cnot_cost: usize,
    pub satisfied_gates: Vec<usize>,
    /// Front gates left for a later sub-layer because their folded paths
    /// intersected the chosen ones.
    pub deferred_gates: Vec<usize>,
    pub score: f64,
}

/// Positions of program qubits after a set of folds, without cloning the
/// base mapping.
struct Overlay<'a> {
    base: &'a Mapping,
    slot: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl<'a> Overlay<'a> {
    fn new(base: &'a Mapping) -> Self {
        let n = base.num_program();
        Overlay {
            base,
            slot: vec![0; n],
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    fn load(&mut self, moves: &[(usize, usize)]) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        for &(q, p) in moves {
            self.slot[q] = p as u32;
            self.stamp[q] = self.epoch;
        }
    }
}

impl Positions for Overlay<'_> {
    #[inline]
    fn position(&self, q: usize) -> usize {
        if self.stamp[q] == self.epoch {
            self.slot[q] as usize
        } else {
            self.base.physical(q)
        }
    }
}

/// Program-qubit moves caused by folding `path` at `m` under `mapping`.
fn fold_moves(path: &[usize], m: usize, mapping: &Mapping, out: &mut Vec<(usize, usize)>) {
    let k = path.len() - 1;
    if let Some(q) = mapping.program(path[0]) {
        out.push((q, path[m]));
    }
    for t in 1..=m {
        if let Some(q) = mapping.program(path[t]) {
            out.push((q, path[t - 1]));
        }
    }
    if let Some(q) = mapping.program(path[k]) {
        out.push((q, path[m + 1]));
    }
    for t in m + 1..k {
        if let Some(q) = mapping.program(path[t]) {
            out.push((q, path[t + 1]));
        }
    }
}

#[derive(Clone)]
struct Partial {
    swaps: Vec<(usize, usize)>,
    swap_weight: f64,
    /// Sorted (program, physical) moves; equal lists mean equal mappings.
    moves: Vec<(usize, usize)>,
    vertices: Vec<usize>,
    gates: Vec<usize>,
    score: f64,
}

/// Knobs for [`generate_candidate_pool`].
#[derive(Debug, Clone, Copy)]
pub struct PoolLimits {
    /// Maximum partial combinations carried between front gates.
    pub beam: usize,
}

impl Default for PoolLimits {
    fn default() -> Self {
        PoolLimits { beam: 64 }
    }
}

/// Paths looked up for each unsatisfied front gate under `mapping`.
pub fn candidate_paths<'d>(
    front: &[usize],
    dag: &CircuitDag,
    mapping: &Mapping,
    dmat: &'d DistanceMatrix,
) -> Vec<(usize, &'d [Vec<usize>])> {
    front
        .iter()
        .map(|&g| {
            let (a, b) = dag.pair(g);
            (g, dmat.paths(mapping.physical(a), mapping.physical(b)))
        })
        .collect()
}

/// Builds the SWAP-candidate pool for the unsatisfied gates in `front`.
///
/// Gates are packed longest-first. For each gate every stored path is folded
/// at every evaluated position; a fold joins a partial combination only if
/// its path is vertex-disjoint from the paths already in it. Each round keeps
/// the combinations tied at the minimum total score (capped at
/// `limits.beam`). A gate that fits no combination is deferred to the next
/// sub-layer. The returned pool holds every surviving minimum-score
/// candidate, one per resulting mapping, in deterministic order.
pub fn generate_candidate_pool(
    front: &[usize],
    dag: &CircuitDag,
    mapping: &Mapping,
    scorer: &Scorer<'_>,
    post: &PostArray,
    limits: PoolLimits,
) -> Vec<SwapCandidate> {
    let dmat = scorer.dmat;
    let mut order: Vec<(u32, usize)> = front
        .iter()
        .map(|&g| {
            let (a, b) = dag.pair(g);
            (dmat.shortest(mapping.physical(a), mapping.physical(b)), g)
        })
        .collect();
    order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut overlay = Overlay::new(mapping);
    let mut combos = vec![Partial {
        swaps: Vec::new(),
        swap_weight: 0.0,
        moves: Vec::new(),
        vertices: Vec::new(),
        gates: Vec::new(),
        score: f64::INFINITY,
    }];
    let mut deferred = Vec::new();
    let mut scratch = Vec::new();

    for &(_, g) in &order {
        let (a, b) = dag.pair(g);
        let paths = dmat.paths(mapping.physical(a), mapping.physical(b));
        let mut next: Vec<Partial> = Vec::new();
        let mut best = f64::INFINITY;
        for combo in &combos {
            for path in paths {
                if path.iter().any(|v| combo.vertices.binary_search(v).is_ok()) {
                    continue;
                }
                let k = path.len() - 1;
                for m in fold_positions(k) {
                    scratch.clear();
                    scratch.extend_from_slice(&combo.moves);
                    fold_moves(path, m, mapping, &mut scratch);
                    overlay.load(&scratch);
                    let fold = fold_path(path, m).expect("valid fold index");
                    let weight = combo.swap_weight
                        + fold
                            .swaps
                            .iter()
                            .map(|&(x, y)| 3.0 * dmat.edge_weight(x, y))
                            .sum::<f64>();
                    let score = scorer.total(&overlay, weight, post);
                    if score > best + SCORE_TIE_EPS {
                        continue;
                    }
                    if score < best {
                        best = score;
                    }
                    let mut moves = scratch.clone();
                    moves.sort_unstable();
                    let mut vertices = combo.vertices.clone();
                    vertices.extend_from_slice(path);
                    vertices.sort_unstable();
                    let mut swaps = combo.swaps.clone();
                    swaps.extend(fold.swaps);
                    let mut gates = combo.gates.clone();
                    gates.push(g);
                    next.push(Partial {
                        swaps,
                        swap_weight: weight,
                        moves,
                        vertices,
                        gates,
                        score,
                    });
                }
            }
        }
        if next.is_empty() {
            deferred.push(g);
            continue;
        }
        next.retain(|p| p.score <= best + SCORE_TIE_EPS);
        next.sort_by(|x, y| {
            x.score
                .total_cmp(&y.score)
                .then_with(|| x.swaps.len().cmp(&y.swaps.len()))
                .then_with(|| x.swaps.cmp(&y.swaps))
        });
        let mut seen = std::collections::HashSet::new();
        next.retain(|p| seen.insert(p.moves.clone()));
        next.truncate(limits.beam.max(1));
        combos = next;
    }

    deferred.sort_unstable();
    combos
        .into_iter()
        .map(|c| {
            let mut m = mapping.clone();
            for &(x, y) in &c.swaps {
                m.swap_physical(x, y);
            }
            let mut satisfied = c.gates;
            satisfied.sort_unstable();
            SwapCandidate {
                cnot_cost: 3 * c.swaps.len(),
                swaps: c.swaps,
                resulting_mapping: m,
                satisfied_gates: satisfied,
                deferred_gates: deferred.clone(),
                score: c.score,
            }
        })
        .collect()
}
