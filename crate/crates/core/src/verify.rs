//! Correctness checks for routed schedules: connectivity, mapping
//! bookkeeping, measurement placement and small-scale state equivalence.

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::router::mapping::Mapping;
use crate::router::schedule::RoutedSchedule;
use crate::topology::CouplingGraph;

/// Largest register simulated.
pub const MAX_SIM_QUBITS: usize = 12;
pub const FIDELITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub gate_index: usize,
    pub qubits: (usize, usize),
}

/// Every two-qubit gate acting on a pair that is not a device edge.
pub fn check_connectivity(schedule: &RoutedSchedule, graph: &CouplingGraph) -> Vec<Violation> {
    schedule
        .circuit
        .gates
        .iter()
        .enumerate()
        .filter(|(_, g)| g.is_two_qubit() && !graph.has_edge(g.qubits[0], g.qubits[1]))
        .map(|(i, g)| Violation {
            gate_index: i,
            qubits: (g.qubits[0], g.qubits[1]),
        })
        .collect()
}

/// Replaying the inserted SWAPs from the initial mapping lands exactly on
/// the reported final mapping.
pub fn check_permutation(schedule: &RoutedSchedule) -> bool {
    let mut m = schedule.initial_mapping.clone();
    for (g, &ins) in schedule.circuit.gates.iter().zip(&schedule.inserted_swap) {
        if ins {
            m.swap_physical(g.qubits[0], g.qubits[1]);
        }
    }
    m == schedule.final_mapping
}

/// Outcome of translating every non-routing gate back to program qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// Gate multiset and per-qubit order match the original program.
    pub program_order: bool,
    /// Each measurement reads the physical qubit holding its program qubit
    /// at that point, into the original classical bit.
    pub measures: bool,
}

pub fn check_structure(original: &Circuit, schedule: &RoutedSchedule) -> StructureReport {
    let mut m = schedule.initial_mapping.clone();
    let mut translated: Vec<Gate> = Vec::new();
    let mut program_ok = true;
    let mut measured: Vec<(usize, usize)> = Vec::new();
    for (g, &ins) in schedule.circuit.gates.iter().zip(&schedule.inserted_swap) {
        if ins {
            m.swap_physical(g.qubits[0], g.qubits[1]);
            continue;
        }
        let mut qs = Vec::with_capacity(g.qubits.len());
        for &p in &g.qubits {
            match m.program(p) {
                Some(q) => qs.push(q),
                None => program_ok = false,
            }
        }
        if qs.len() != g.qubits.len() {
            continue;
        }
        if g.kind == GateKind::Measure {
            measured.push((qs[0], g.clbits[0]));
        }
        translated.push(Gate {
            kind: g.kind.clone(),
            qubits: qs,
            clbits: g.clbits.clone(),
        });
    }
    let mut want: Vec<(usize, usize)> = original
        .gates
        .iter()
        .filter(|g| g.kind == GateKind::Measure)
        .map(|g| (g.qubits[0], g.clbits[0]))
        .collect();
    want.sort_unstable();
    measured.sort_unstable();
    let measures = program_ok && want == measured;
    StructureReport {
        program_order: program_ok && same_per_qubit_order(original, &translated),
        measures,
    }
}

fn same_per_qubit_order(original: &Circuit, translated: &[Gate]) -> bool {
    if original.gates.len() != translated.len() {
        return false;
    }
    fn streams(n: usize, gates: &[Gate]) -> Option<Vec<Vec<&Gate>>> {
        let mut s = vec![Vec::new(); n];
        for g in gates {
            for &q in &g.qubits {
                s.get_mut(q)?.push(g);
            }
        }
        Some(s)
    }
    let a = streams(original.num_qubits, &original.gates);
    let b = streams(original.num_qubits, translated);
    a.is_some() && a == b
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    pub amplitudes: Vec<Complex64>,
}

impl Statevector {
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Statevector { amplitudes }
    }

    pub fn num_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &Statevector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    fn apply_1q(&mut self, q: usize, u: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amplitudes[i | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    fn apply_cx(&mut self, c: usize, t: usize) {
        let (cb, tb) = (1usize << c, 1usize << t);
        for i in 0..self.amplitudes.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amplitudes.swap(i, i | tb);
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amplitudes.len() {
            if i & ab != 0 && i & bb == 0 {
                self.amplitudes.swap(i, i ^ ab ^ bb);
            }
        }
    }

    /// Moves the amplitude of qubit `q` to qubit `perm[q]`.
    fn permuted(&self, perm: &[usize]) -> Statevector {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (i, &a) in self.amplitudes.iter().enumerate() {
            let mut j = 0;
            for (q, &p) in perm.iter().enumerate() {
                if i >> q & 1 == 1 {
                    j |= 1 << p;
                }
            }
            out[j] = a;
        }
        Statevector { amplitudes: out }
    }
}

fn one_qubit_matrix(name: &str, params: &[f64]) -> Result<[[Complex64; 2]; 2]> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let phase = |t: f64| Complex64::from_polar(1.0, t);
    let u3 = |theta: f64, phi: f64, lambda: f64| {
        let (s, co) = ((theta / 2.0).sin(), (theta / 2.0).cos());
        [
            [c(co, 0.0), -phase(lambda) * s],
            [phase(phi) * s, phase(phi + lambda) * co],
        ]
    };
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let p = |i: usize| params.get(i).copied();
    let m = match (name, params.len()) {
        ("u3", 3) => u3(params[0], params[1], params[2]),
        ("u2", 2) => u3(std::f64::consts::FRAC_PI_2, params[0], params[1]),
        ("u1", 1) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), phase(params[0])]],
        ("rx", 1) => {
            let t = p(0).unwrap() / 2.0;
            [[c(t.cos(), 0.0), c(0.0, -t.sin())], [c(0.0, -t.sin()), c(t.cos(), 0.0)]]
        }
        ("ry", 1) => {
            let t = p(0).unwrap() / 2.0;
            [[c(t.cos(), 0.0), c(-t.sin(), 0.0)], [c(t.sin(), 0.0), c(t.cos(), 0.0)]]
        }
        ("rz", 1) => {
            let t = p(0).unwrap() / 2.0;
            [[phase(-t), c(0.0, 0.0)], [c(0.0, 0.0), phase(t)]]
        }
        ("h", 0) => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        ("x", 0) => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        ("y", 0) => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        ("z", 0) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        ("s", 0) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        ("sdg", 0) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
        ("t", 0) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), phase(std::f64::consts::FRAC_PI_4)]],
        ("tdg", 0) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), phase(-std::f64::consts::FRAC_PI_4)]],
        ("id", 0) => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        _ => {
            return Err(Error::InvalidCircuit(format!(
                "cannot simulate `{name}` with {} parameters",
                params.len()
            )))
        }
    };
    Ok(m)
}

fn apply(state: &mut Statevector, g: &Gate, slot: impl Fn(usize) -> usize) -> Result<()> {
    match &g.kind {
        GateKind::OneQubit { name, params } => {
            state.apply_1q(slot(g.qubits[0]), one_qubit_matrix(name, params)?)
        }
        GateKind::Cx => state.apply_cx(slot(g.qubits[0]), slot(g.qubits[1])),
        GateKind::Swap => state.apply_swap(slot(g.qubits[0]), slot(g.qubits[1])),
        GateKind::Barrier => {}
        GateKind::Measure => {
            return Err(Error::InvalidCircuit("measurements must be stripped before simulation".into()))
        }
    }
    Ok(())
}

/// Applies the circuit's unitaries to |0...0>. Qubit `q` is bit `q` of the
/// amplitude index.
pub fn simulate(circuit: &Circuit) -> Result<Statevector> {
    if circuit.num_qubits > MAX_SIM_QUBITS {
        return Err(Error::SimulationTooLarge {
            qubits: circuit.num_qubits,
            max: MAX_SIM_QUBITS,
        });
    }
    let mut s = Statevector::zero(circuit.num_qubits);
    for g in &circuit.gates {
        apply(&mut s, g, |q| q)?;
    }
    Ok(s)
}

pub fn strip_measurements(circuit: &Circuit) -> Circuit {
    Circuit {
        gates: circuit
            .gates
            .iter()
            .filter(|g| g.kind != GateKind::Measure)
            .cloned()
            .collect(),
        ..circuit.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Equivalence {
    Checked { fidelity: f64, pass: bool },
    Skipped { skipped: String },
}

impl Equivalence {
    pub fn passed(&self) -> Option<bool> {
        match self {
            Equivalence::Checked { pass, .. } => Some(*pass),
            Equivalence::Skipped { .. } => None,
        }
    }
}

/// Simulates the original program and the routed circuit, relabels the
/// routed output through the final mapping and compares the states.
///
/// The routed circuit is simulated over one slot per program qubit: a
/// routing SWAP moves a slot to another physical qubit, and a physical qubit
/// holding no slot stays in |0>. Any gate on such a qubit other than a
/// routing SWAP makes the check fail.
pub fn check_equivalence(original: &Circuit, schedule: &RoutedSchedule) -> Equivalence {
    let n = original.num_qubits;
    if n > MAX_SIM_QUBITS {
        return Equivalence::Skipped {
            skipped: format!("{n} qubits exceeds the simulation limit of {MAX_SIM_QUBITS}"),
        };
    }
    let reference = match simulate(&strip_measurements(original)) {
        Ok(s) => s,
        Err(e) => return Equivalence::Skipped { skipped: e.to_string() },
    };
    let fail = Equivalence::Checked {
        fidelity: 0.0,
        pass: false,
    };
    let phys = schedule.initial_mapping.num_physical();
    let mut slot_at: Vec<Option<usize>> = vec![None; phys];
    for q in 0..n {
        slot_at[schedule.initial_mapping.physical(q)] = Some(q);
    }
    let mut state = Statevector::zero(n);
    for (g, &ins) in schedule.circuit.gates.iter().zip(&schedule.inserted_swap) {
        if g.qubits.iter().any(|&p| p >= phys) {
            return fail;
        }
        if ins {
            slot_at.swap(g.qubits[0], g.qubits[1]);
            continue;
        }
        if matches!(g.kind, GateKind::Measure | GateKind::Barrier) {
            continue;
        }
        if g.qubits.iter().any(|&p| slot_at[p].is_none()) {
            return fail;
        }
        if let Err(e) = apply(&mut state, g, |p| slot_at[p].unwrap()) {
            return Equivalence::Skipped { skipped: e.to_string() };
        }
    }
    // Slot s sits on some physical qubit; the final mapping says which
    // program qubit that physical qubit carries.
    let mut perm = vec![0usize; n];
    for (p, s) in slot_at.iter().enumerate() {
        if let Some(s) = *s {
            match schedule.final_mapping.program(p) {
                Some(q) => perm[s] = q,
                None => return fail,
            }
        }
    }
    let routed = state.permuted(&perm);
    let fidelity = reference.fidelity(&routed);
    Equivalence::Checked {
        fidelity,
        pass: fidelity >= 1.0 - FIDELITY_TOLERANCE,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
    pub permutation_ok: bool,
    pub structure: StructureReport,
    pub equivalence: Equivalence,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.permutation_ok
            && self.structure.program_order
            && self.structure.measures
            && self.equivalence.passed() != Some(false)
    }
}

pub fn verify_schedule(
    original: &Circuit,
    schedule: &RoutedSchedule,
    graph: &CouplingGraph,
) -> VerifyReport {
    VerifyReport {
        violations: check_connectivity(schedule, graph),
        permutation_ok: check_permutation(schedule),
        structure: check_structure(original, schedule),
        equivalence: check_equivalence(original, schedule),
    }
}

/// Mapping after replaying only the inserted SWAPs.
pub fn replay_mapping(schedule: &RoutedSchedule) -> Mapping {
    let mut m = schedule.initial_mapping.clone();
    for (g, &ins) in schedule.circuit.gates.iter().zip(&schedule.inserted_swap) {
        if ins {
            m.swap_physical(g.qubits[0], g.qubits[1]);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::router::{route_foresight, ForesightParams, MappingPolicy};
    use crate::topology::{builtin_topology, BuiltinTopology};

    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &Statevector, want: &[(f64, f64)]) -> bool {
        a.amplitudes
            .iter()
            .zip(want)
            .all(|(x, &(re, im))| (x.re - re).abs() < 1e-12 && (x.im - im).abs() < 1e-12)
    }

    #[test]
    fn hadamard() {
        let mut c = Circuit::new(1, 0);
        c.push(Gate::one_qubit("h", vec![], 0));
        assert!(close(&simulate(&c).unwrap(), &[(R, 0.0), (R, 0.0)]));
    }

    #[test]
    fn bell() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::one_qubit("h", vec![], 0));
        c.push(Gate::cx(0, 1));
        let s = simulate(&c).unwrap();
        assert!(close(&s, &[(R, 0.0), (0.0, 0.0), (0.0, 0.0), (R, 0.0)]));
    }

    #[test]
    fn swap_moves_excitation() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::one_qubit("x", vec![], 0));
        c.push(Gate::swap(0, 1));
        let s = simulate(&c).unwrap();
        assert!(close(&s, &[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]));
    }

    #[test]
    fn size_cap() {
        let c = Circuit::new(13, 0);
        assert!(matches!(simulate(&c), Err(Error::SimulationTooLarge { .. })));
    }

    #[test]
    fn named_gates_agree_with_u3() {
        use std::f64::consts::PI;
        let pairs: [(&str, Vec<f64>, [f64; 3]); 4] = [
            ("h", vec![], [PI / 2.0, 0.0, PI]),
            ("x", vec![], [PI, 0.0, PI]),
            ("ry", vec![0.7], [0.7, 0.0, 0.0]),
            ("u2", vec![0.3, 0.9], [PI / 2.0, 0.3, 0.9]),
        ];
        for (name, params, u) in pairs {
            let mut a = Circuit::new(1, 0);
            a.push(Gate::one_qubit("ry", vec![0.4], 0));
            a.push(Gate::one_qubit(name, params, 0));
            let mut b = Circuit::new(1, 0);
            b.push(Gate::one_qubit("ry", vec![0.4], 0));
            b.push(Gate::one_qubit("u3", u.to_vec(), 0));
            let f = simulate(&a).unwrap().fidelity(&simulate(&b).unwrap());
            assert!((f - 1.0).abs() < 1e-12, "{name}");
        }
    }

    fn ghz3() -> Circuit {
        let mut c = Circuit::new(3, 3);
        c.push(Gate::one_qubit("h", vec![], 0));
        c.push(Gate::cx(0, 1));
        c.push(Gate::cx(0, 2));
        for q in 0..3 {
            c.push(Gate::measure(q, q));
        }
        c
    }

    #[test]
    fn ghz_on_a_line_needs_one_swap() {
        let g = builtin_topology(&BuiltinTopology::Line(3)).unwrap();
        let c = ghz3();
        let p = ForesightParams {
            initial_mapping: MappingPolicy::Identity,
            ..Default::default()
        };
        let s = route_foresight(&c, &g, &p).unwrap();
        assert_eq!(s.swap_count, 1);
        let r = verify_schedule(&c, &s, &g);
        assert!(r.passed(), "{r:?}");
        assert!(matches!(r.equivalence, Equivalence::Checked { fidelity, .. } if (fidelity - 1.0).abs() < 1e-12));
    }

    #[test]
    fn hand_built_violation() {
        let g = builtin_topology(&BuiltinTopology::Line(3)).unwrap();
        let mut c = Circuit::new(3, 0);
        c.push(Gate::cx(0, 2));
        let m = Mapping::identity(3, 3);
        let s = RoutedSchedule {
            inserted_swap: vec![false],
            depth: 1,
            circuit: c,
            initial_mapping: m.clone(),
            final_mapping: m,
            swap_count: 0,
            swap_overhead_cnots: 0,
            eps: None,
        };
        assert_eq!(check_connectivity(&s, &g).len(), 1);
    }

    #[test]
    fn dropped_swap_is_caught() {
        let g = builtin_topology(&BuiltinTopology::Line(4)).unwrap();
        let mut c = Circuit::new(4, 0);
        c.push(Gate::one_qubit("h", vec![], 0));
        c.push(Gate::one_qubit("x", vec![], 1));
        c.push(Gate::cx(0, 3));
        c.push(Gate::one_qubit("ry", vec![0.3], 2));
        c.push(Gate::cx(2, 0));
        let p = ForesightParams {
            initial_mapping: MappingPolicy::Identity,
            ..Default::default()
        };
        let s = route_foresight(&c, &g, &p).unwrap();
        assert!(s.swap_count > 0);
        assert!(verify_schedule(&c, &s, &g).passed());

        let k = s.inserted_swap.iter().position(|&b| b).unwrap();
        let mut bad = s.clone();
        bad.circuit.gates.remove(k);
        bad.inserted_swap.remove(k);
        assert!(!check_permutation(&bad));
        assert_eq!(check_equivalence(&c, &bad).passed(), Some(false));
    }

    #[test]
    fn skipped_when_too_large() {
        let g = builtin_topology(&BuiltinTopology::Line(14)).unwrap();
        let c = Circuit::new(14, 0);
        let s = route_foresight(&c, &g, &ForesightParams::default()).unwrap();
        assert!(matches!(check_equivalence(&c, &s), Equivalence::Skipped { .. }));
    }
}
