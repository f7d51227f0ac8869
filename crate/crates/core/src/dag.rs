//! Dependency DAG and two-qubit layering of a circuit.

use crate::circuit::{Circuit, Gate, GateKind};

/// Data-dependency DAG over the gates of a circuit.
///
/// `layers` holds only two-qubit gates (CX and SWAP), assigned to the
/// earliest level permitted by their qubits. Every other gate is attached
/// to a two-qubit anchor (or to the virtual source when `anchor` is `None`)
/// and follows it when layers are replayed in order.
#[derive(Debug, Clone)]
pub struct CircuitDag {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    pub successors: Vec<Vec<usize>>,
    pub predecessors: Vec<Vec<usize>>,
    pub layers: Vec<Vec<usize>>,
    pub layer_of: Vec<Option<usize>>,
    pub anchor: Vec<Option<usize>>,
    /// For each two-qubit gate, the two-qubit gates it directly depends on,
    /// looking through one-qubit gates, measures and barriers.
    pub two_qubit_predecessors: Vec<Vec<usize>>,
    /// Gate indices touching each qubit, in circuit order.
    pub qubit_streams: Vec<Vec<usize>>,
}

pub fn build_dag(circuit: &Circuit) -> CircuitDag {
    let n = circuit.num_qubits;
    let m = circuit.gates.len();
    let mut successors = vec![Vec::new(); m];
    let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut last_on_qubit: Vec<Option<usize>> = vec![None; n];
    let mut qubit_streams = vec![Vec::new(); n];

    let mut next_level = vec![0usize; n];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut layer_of = vec![None; m];
    let mut anchor: Vec<Option<usize>> = vec![None; m];
    // Two-qubit gates visible through the most recent gate on each qubit.
    let mut frontier_2q: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut two_qubit_predecessors = vec![Vec::new(); m];

    for (i, g) in circuit.gates.iter().enumerate() {
        for &q in &g.qubits {
            qubit_streams[q].push(i);
            if let Some(p) = last_on_qubit[q] {
                if !predecessors[i].contains(&p) {
                    predecessors[i].push(p);
                    successors[p].push(i);
                }
            }
            last_on_qubit[q] = Some(i);
        }

        let mut visible: Vec<usize> = Vec::new();
        for &q in &g.qubits {
            for &p in &frontier_2q[q] {
                if !visible.contains(&p) {
                    visible.push(p);
                }
            }
        }
        visible.sort_unstable();

        if g.is_two_qubit() {
            let (a, b) = (g.qubits[0], g.qubits[1]);
            let level = next_level[a].max(next_level[b]);
            if level == layers.len() {
                layers.push(Vec::new());
            }
            layers[level].push(i);
            layer_of[i] = Some(level);
            next_level[a] = level + 1;
            next_level[b] = level + 1;
            two_qubit_predecessors[i] = visible;
            frontier_2q[a] = vec![i];
            frontier_2q[b] = vec![i];
        } else {
            if g.kind == GateKind::Barrier {
                let level = g.qubits.iter().map(|&q| next_level[q]).max().unwrap_or(0);
                for &q in &g.qubits {
                    next_level[q] = level;
                }
            }
            for &q in &g.qubits {
                frontier_2q[q] = visible.clone();
            }
        }
    }

    // Anchors: the latest (layer, position) among two-qubit gates reachable
    // backwards, so replaying layers keeps every per-qubit order intact.
    let mut position = vec![0usize; m];
    for layer in &layers {
        for (k, &g) in layer.iter().enumerate() {
            position[g] = k;
        }
    }
    let key = |g: usize, layer_of: &[Option<usize>]| (layer_of[g].unwrap(), position[g]);
    for i in 0..m {
        if circuit.gates[i].is_two_qubit() {
            continue;
        }
        let mut best: Option<usize> = None;
        for &p in &predecessors[i] {
            let cand = if circuit.gates[p].is_two_qubit() {
                Some(p)
            } else {
                anchor[p]
            };
            if let Some(c) = cand {
                if best.is_none_or(|b| key(c, &layer_of) > key(b, &layer_of)) {
                    best = Some(c);
                }
            }
        }
        anchor[i] = best;
    }

    CircuitDag {
        num_qubits: n,
        gates: circuit.gates.clone(),
        successors,
        predecessors,
        layers,
        layer_of,
        anchor,
        two_qubit_predecessors,
        qubit_streams,
    }
}

impl CircuitDag {
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Program qubits of a two-qubit gate.
    pub fn pair(&self, gate: usize) -> (usize, usize) {
        let q = &self.gates[gate].qubits;
        (q[0], q[1])
    }

    pub fn two_qubit_gates(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.gates.len()).filter(|&i| self.gates[i].is_two_qubit())
    }

    /// Non-two-qubit gates attached to `anchor` (`None` = virtual source), in
    /// circuit order.
    pub fn attached(&self, anchor: Option<usize>) -> Vec<usize> {
        (0..self.gates.len())
            .filter(|&i| !self.gates[i].is_two_qubit() && self.anchor[i] == anchor)
            .collect()
    }

    /// Gate order obtained by replaying layers with attached gates after
    /// their anchors.
    pub fn layered_order(&self) -> Vec<usize> {
        let mut by_anchor: std::collections::HashMap<Option<usize>, Vec<usize>> =
            std::collections::HashMap::new();
        for i in 0..self.gates.len() {
            if !self.gates[i].is_two_qubit() {
                by_anchor.entry(self.anchor[i]).or_default().push(i);
            }
        }
        let mut out = by_anchor.remove(&None).unwrap_or_default();
        for layer in &self.layers {
            for &g in layer {
                out.push(g);
                out.extend(by_anchor.remove(&Some(g)).unwrap_or_default());
            }
        }
        out
    }

    /// Longest chain of two-qubit gates linked through shared qubits.
    pub fn longest_two_qubit_chain(&self) -> usize {
        let mut chain = vec![0usize; self.gates.len()];
        let mut best = 0;
        for i in 0..self.gates.len() {
            if !self.gates[i].is_two_qubit() {
                continue;
            }
            let c = 1 + self.two_qubit_predecessors[i]
                .iter()
                .map(|&p| chain[p])
                .max()
                .unwrap_or(0);
            chain[i] = c;
            best = best.max(c);
        }
        best
    }
}

/// True when `order` is a permutation of the gates that preserves the
/// relative order of gates on every qubit.
pub fn is_valid_order(circuit: &Circuit, order: &[usize]) -> bool {
    if order.len() != circuit.gates.len() {
        return false;
    }
    let mut seen = vec![false; order.len()];
    let mut last = vec![None::<usize>; circuit.num_qubits];
    for &g in order {
        if g >= seen.len() || seen[g] {
            return false;
        }
        seen[g] = true;
        for &q in &circuit.gates[g].qubits {
            if last[q].is_some_and(|l| l > g) {
                return false;
            }
            last[q] = Some(g);
        }
    }
    true
}
