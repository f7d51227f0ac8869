//! Turning a routed event stream into an output circuit, plus metrics.

use serde::Serialize;

use super::mapping::Mapping;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::dag::CircuitDag;

/// One step of a routing decision: execute an original two-qubit gate, or
/// insert a SWAP between two physical qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    Gate(usize),
    Swap(usize, usize),
}

/// A routed circuit over physical qubits with its mappings and metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct RoutedSchedule {
    pub circuit: Circuit,
    /// `inserted_swap[i]` marks output gate `i` as a routing SWAP rather
    /// than a SWAP present in the input program.
    pub inserted_swap: Vec<bool>,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub swap_count: usize,
    pub swap_overhead_cnots: usize,
    pub depth: usize,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub original_cnots: usize,
    pub compiled_cnots: usize,
    pub swap_overhead: usize,
    pub swap_count: usize,
    pub depth: usize,
    pub total_gates: usize,
}

/// Compiled-minus-original CNOT count (SWAP = 3 CNOTs) and unit-step depth.
pub fn extract_metrics(schedule: &RoutedSchedule, original: &Circuit) -> Metrics {
    let compiled = schedule.circuit.cnot_count();
    let orig = original.cnot_count();
    Metrics {
        original_cnots: orig,
        compiled_cnots: compiled,
        swap_overhead: compiled.saturating_sub(orig),
        swap_count: schedule.inserted_swap.iter().filter(|&&s| s).count(),
        depth: schedule.circuit.depth(),
        total_gates: schedule.circuit.gates.len(),
    }
}

/// Replays `events` against the DAG, emitting every one-qubit gate, measure
/// and barrier as soon as all of its predecessors have been emitted. Each
/// program gate lands on the physical qubits its program qubits occupy at
/// that point.
pub fn assemble(dag: &CircuitDag, num_clbits: usize, initial: &Mapping, events: &[Event]) -> RoutedSchedule {
    let mut em = Emitter::new(dag, num_clbits, initial.clone());
    for q in 0..dag.num_qubits {
        em.flush(q);
    }
    for &ev in events {
        match ev {
            Event::Gate(g) => em.gate(g),
            Event::Swap(a, b) => em.swap(a, b),
        }
    }
    for q in 0..dag.num_qubits {
        em.flush(q);
    }
    debug_assert!(
        (0..dag.num_qubits).all(|q| em.ptr[q] == dag.qubit_streams[q].len()),
        "events did not cover every gate"
    );
    em.finish(initial.clone())
}

struct Emitter<'a> {
    dag: &'a CircuitDag,
    mapping: Mapping,
    ptr: Vec<usize>,
    out: Circuit,
    inserted: Vec<bool>,
    swaps: usize,
}

impl<'a> Emitter<'a> {
    fn new(dag: &'a CircuitDag, num_clbits: usize, mapping: Mapping) -> Self {
        Emitter {
            dag,
            out: Circuit::new(mapping.num_physical(), num_clbits),
            mapping,
            ptr: vec![0; dag.num_qubits],
            inserted: Vec::new(),
            swaps: 0,
        }
    }

    fn push(&mut self, g: usize) {
        let m = &self.mapping;
        self.out
            .push(self.dag.gates[g].remapped(|q| m.physical(q)));
        self.inserted.push(false);
    }

    fn gate(&mut self, g: usize) {
        let (a, b) = self.dag.pair(g);
        debug_assert_eq!(self.dag.qubit_streams[a].get(self.ptr[a]), Some(&g));
        debug_assert_eq!(self.dag.qubit_streams[b].get(self.ptr[b]), Some(&g));
        self.push(g);
        self.ptr[a] += 1;
        self.ptr[b] += 1;
        self.flush(a);
        self.flush(b);
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.out.push(Gate::swap(a, b));
        self.inserted.push(true);
        self.swaps += 1;
        self.mapping.swap_physical(a, b);
    }

    /// Emits ready non-two-qubit gates at the head of qubit `q`'s stream.
    fn flush(&mut self, q: usize) {
        let mut work = vec![q];
        while let Some(q) = work.pop() {
            while let Some(&g) = self.dag.qubit_streams[q].get(self.ptr[q]) {
                let gate = &self.dag.gates[g];
                match gate.kind {
                    GateKind::Cx | GateKind::Swap => break,
                    GateKind::Barrier => {
                        let ready = gate
                            .qubits
                            .iter()
                            .all(|&r| self.dag.qubit_streams[r].get(self.ptr[r]) == Some(&g));
                        if !ready {
                            break;
                        }
                        self.push(g);
                        for &r in &self.dag.gates[g].qubits {
                            self.ptr[r] += 1;
                            if r != q {
                                work.push(r);
                            }
                        }
                    }
                    _ => {
                        self.push(g);
                        self.ptr[q] += 1;
                    }
                }
            }
        }
    }

    fn finish(self, initial: Mapping) -> RoutedSchedule {
        let depth = self.out.depth();
        RoutedSchedule {
            circuit: self.out,
            inserted_swap: self.inserted,
            initial_mapping: initial,
            final_mapping: self.mapping,
            swap_count: self.swaps,
            swap_overhead_cnots: 3 * self.swaps,
            depth,
            eps: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::build_dag;

    #[test]
    fn overhead_counts_three_cnots_per_swap() {
        let mut c = Circuit::new(3, 1);
        c.push(Gate::one_qubit("h", vec![], 0));
        c.push(Gate::cx(0, 2));
        c.push(Gate::measure(2, 0));
        let dag = build_dag(&c);
        let init = Mapping::identity(3, 3);
        let s = assemble(&dag, 1, &init, &[Event::Swap(0, 1), Event::Gate(1)]);
        assert_eq!(s.swap_count, 1);
        assert_eq!(s.swap_overhead_cnots, 3);
        let m = extract_metrics(&s, &c);
        assert_eq!(m.swap_overhead, 3);
        assert_eq!(s.circuit.gates[0], Gate::one_qubit("h", vec![], 0));
        assert_eq!(s.circuit.gates[2], Gate::cx(1, 2));
        assert_eq!(s.circuit.gates[3], Gate::measure(2, 0));
        assert_eq!(s.final_mapping.physical(0), 1);
    }

    #[test]
    fn zero_swaps_zero_overhead() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::cx(0, 1));
        let dag = build_dag(&c);
        let s = assemble(&dag, 0, &Mapping::identity(2, 2), &[Event::Gate(0)]);
        assert_eq!(extract_metrics(&s, &c).swap_overhead, 0);
    }

    #[test]
    fn seven_versus_three_swaps() {
        let c = Circuit::new(2, 0);
        let dag = build_dag(&c);
        let many: Vec<Event> = (0..7).map(|_| Event::Swap(0, 1)).collect();
        let few: Vec<Event> = (0..3).map(|_| Event::Swap(0, 1)).collect();
        let init = Mapping::identity(2, 2);
        assert_eq!(extract_metrics(&assemble(&dag, 0, &init, &many), &c).swap_overhead, 21);
        assert_eq!(extract_metrics(&assemble(&dag, 0, &init, &few), &c).swap_overhead, 9);
    }

    #[test]
    fn barrier_waits_for_all_qubits() {
        let mut c = Circuit::new(3, 0);
        c.push(Gate::cx(0, 1));
        c.push(Gate::barrier(vec![1, 2]));
        c.push(Gate::one_qubit("x", vec![], 2));
        let dag = build_dag(&c);
        let s = assemble(&dag, 0, &Mapping::identity(3, 3), &[Event::Gate(0)]);
        assert_eq!(s.circuit.gates[0], Gate::cx(0, 1));
        assert_eq!(s.circuit.gates[1].kind, GateKind::Barrier);
        assert_eq!(s.circuit.gates[2], Gate::one_qubit("x", vec![], 2));
    }
}
