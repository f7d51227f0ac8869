//! Lookahead set construction and the candidate scoring functions.

use super::mapping::Mapping;
use crate::circuit::GateKind;
use crate::dag::CircuitDag;
use crate::topology::DistanceMatrix;

/// A two-qubit gate in the lookahead window and its layer distance from the
/// front layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostEntry {
    pub gate: usize,
    pub qubits: (usize, usize),
    pub delta: usize,
}

/// A one-qubit gate or measure in the lookahead window (noise-adaptive mode
/// only). `delta` is the layer distance of its anchor, 0 for gates anchored
/// in the front layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostSingle {
    pub gate: usize,
    pub qubit: usize,
    pub delta: usize,
    pub is_measure: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PostArray {
    pub entries: Vec<PostEntry>,
    pub singles: Vec<PostSingle>,
    pub horizon: usize,
}

/// Number of layers examined past the front: `ceil(10 * mu_g)`.
pub fn lookahead_horizon(mu_g: f64) -> usize {
    (10.0 * mu_g).ceil() as usize
}

/// Collects the two-qubit gates of the layers following `front_index`, up to
/// the horizon (clamped at the end of the DAG). Layers are disjoint, so each
/// gate appears exactly once.
pub fn build_post(dag: &CircuitDag, front_index: usize, mu_g: f64) -> PostArray {
    let horizon = lookahead_horizon(mu_g);
    let mut entries = Vec::new();
    let end = dag.num_layers().min(front_index + 1 + horizon);
    for (k, layer) in dag.layers.iter().enumerate().take(end).skip(front_index + 1) {
        for &g in layer {
            entries.push(PostEntry {
                gate: g,
                qubits: dag.pair(g),
                delta: k - front_index,
            });
        }
    }
    PostArray {
        entries,
        singles: Vec::new(),
        horizon,
    }
}

/// [`build_post`] plus the one-qubit gates and measures anchored in the
/// front layer or the lookahead window.
pub fn build_post_with_singles(dag: &CircuitDag, front_index: usize, mu_g: f64) -> PostArray {
    let mut post = build_post(dag, front_index, mu_g);
    let end = dag.num_layers().min(front_index + 1 + post.horizon);
    for (i, g) in dag.gates.iter().enumerate() {
        let is_measure = match g.kind {
            GateKind::OneQubit { .. } => false,
            GateKind::Measure => true,
            _ => continue,
        };
        let Some(anchor) = dag.anchor[i] else { continue };
        let layer = dag.layer_of[anchor].expect("anchors are two-qubit gates");
        if layer >= front_index && layer < end {
            post.singles.push(PostSingle {
                gate: i,
                qubit: g.qubits[0],
                delta: layer - front_index,
                is_measure,
            });
        }
    }
    post
}

impl PostArray {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The per-qubit view: `(gate, delta)` for every entry touching `q`.
    pub fn for_qubit(&self, q: usize) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|e| e.qubits.0 == q || e.qubits.1 == q)
            .map(|e| (e.gate, e.delta))
            .collect()
    }
}

/// Anything that can report where a program qubit currently sits.
pub trait Positions {
    fn position(&self, q: usize) -> usize;
}

impl Positions for Mapping {
    #[inline]
    fn position(&self, q: usize) -> usize {
        self.physical(q)
    }
}

/// Extra per-physical-qubit cost of one-qubit gates and measures, expressed
/// in units of the cheapest edge weight. Zero everywhere under a uniform
/// error model.
#[derive(Debug, Clone, Default)]
pub struct SinglePenalties {
    pub one_qubit: Vec<f64>,
    pub measure: Vec<f64>,
}

/// Scoring context shared by every candidate evaluated for one front layer.
#[derive(Debug, Clone)]
pub struct Scorer<'a> {
    pub dmat: &'a DistanceMatrix,
    pub mu_g: f64,
    pub penalties: Option<&'a SinglePenalties>,
}

#[inline]
fn decay(delta: usize, mu_g: f64) -> f64 {
    let x = delta as f64 / mu_g;
    (-x * x).exp()
}

impl<'a> Scorer<'a> {
    /// Distances are hop counts even on a weighted matrix; edge weights act
    /// through path ranking, SWAP cost and the single-gate penalties.
    pub fn lookahead(&self, pos: &impl Positions, post: &PostArray) -> f64 {
        if post.entries.is_empty() {
            return 0.0;
        }
        let mut sum = 0.0;
        for e in &post.entries {
            let d = self
                .dmat
                .shortest(pos.position(e.qubits.0), pos.position(e.qubits.1)) as f64;
            sum += d * decay(e.delta, self.mu_g);
        }
        if let Some(pen) = self.penalties {
            for s in &post.singles {
                let p = pos.position(s.qubit);
                let extra = if s.is_measure {
                    pen.measure[p]
                } else {
                    pen.one_qubit[p]
                };
                sum += extra * decay(s.delta, self.mu_g);
            }
        }
        sum / post.entries.len() as f64
    }

    /// Scale applied to the candidate's own SWAP cost.
    pub fn cost_scale(&self, post: &PostArray) -> f64 {
        decay(post.entries.len(), self.mu_g)
    }

    pub fn total(&self, pos: &impl Positions, swap_cost: f64, post: &PostArray) -> f64 {
        self.lookahead(pos, post) + swap_cost * self.cost_scale(post)
    }
}

/// Mean decayed distance of the lookahead gates under `mapping`.
pub fn h_lookahead(mapping: &Mapping, post: &PostArray, mu_g: f64, dmat: &DistanceMatrix) -> f64 {
    Scorer {
        dmat,
        mu_g,
        penalties: None,
    }
    .lookahead(mapping, post)
}

/// Lookahead plus the candidate's CNOT cost, the latter damped by the size
/// of the lookahead window relative to the routing capacity.
pub fn h_total(
    candidate: &super::SwapCandidate,
    post: &PostArray,
    mu_g: f64,
    dmat: &DistanceMatrix,
) -> f64 {
    let s = Scorer {
        dmat,
        mu_g,
        penalties: None,
    };
    s.total(&candidate.resulting_mapping, candidate.cnot_cost as f64, post)
}
