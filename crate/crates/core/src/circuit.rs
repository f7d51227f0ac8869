//! Gate-list circuit representation shared by the parser, the routers and the
//! simulator.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    /// Any standard single-qubit gate, kept by name with evaluated parameters.
    OneQubit { name: String, params: Vec<f64> },
    Cx,
    Swap,
    Measure,
    Barrier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    /// Classical targets; only populated for `Measure`.
    pub clbits: Vec<usize>,
}

impl Gate {
    pub fn one_qubit(name: impl Into<String>, params: Vec<f64>, qubit: usize) -> Self {
        Gate {
            kind: GateKind::OneQubit {
                name: name.into(),
                params,
            },
            qubits: vec![qubit],
            clbits: Vec::new(),
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate {
            kind: GateKind::Cx,
            qubits: vec![control, target],
            clbits: Vec::new(),
        }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate {
            kind: GateKind::Swap,
            qubits: vec![a, b],
            clbits: Vec::new(),
        }
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Gate {
            kind: GateKind::Measure,
            qubits: vec![qubit],
            clbits: vec![clbit],
        }
    }

    pub fn barrier(qubits: Vec<usize>) -> Self {
        Gate {
            kind: GateKind::Barrier,
            qubits,
            clbits: Vec::new(),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self.kind, GateKind::Cx | GateKind::Swap)
    }

    /// CNOT-equivalent count: a SWAP decomposes into three CNOTs.
    pub fn cnot_count(&self) -> usize {
        match self.kind {
            GateKind::Cx => 1,
            GateKind::Swap => 3,
            _ => 0,
        }
    }

    /// Same gate with every qubit index passed through `f`.
    pub fn remapped(&self, f: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind.clone(),
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
            clbits: self.clbits.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    pub name: String,
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub one_qubit: usize,
    pub cx: usize,
    pub swap: usize,
    pub measure: usize,
    pub barrier: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            name: String::new(),
            num_qubits,
            num_clbits,
            gates: Vec::new(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Equality of everything except the name.
    pub fn same_structure(&self, other: &Circuit) -> bool {
        self.num_qubits == other.num_qubits
            && self.num_clbits == other.num_clbits
            && self.gates == other.gates
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g.kind {
                GateKind::OneQubit { .. } => c.one_qubit += 1,
                GateKind::Cx => c.cx += 1,
                GateKind::Swap => c.swap += 1,
                GateKind::Measure => c.measure += 1,
                GateKind::Barrier => c.barrier += 1,
            }
        }
        c
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().map(Gate::cnot_count).sum()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Critical-path length with every gate taking one step. Barriers
    /// synchronise their qubits without consuming a step.
    pub fn depth(&self) -> usize {
        let mut t = vec![0usize; self.num_qubits];
        for g in &self.gates {
            let start = g.qubits.iter().map(|&q| t[q]).max().unwrap_or(0);
            let end = if g.kind == GateKind::Barrier {
                start
            } else {
                start + 1
            };
            for &q in &g.qubits {
                t[q] = end;
            }
        }
        t.into_iter().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            if let Some(&q) = g.qubits.iter().find(|&&q| q >= self.num_qubits) {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} uses qubit {q} but the circuit has {} qubits",
                    self.num_qubits
                )));
            }
            let arity_ok = match g.kind {
                GateKind::Cx | GateKind::Swap => g.qubits.len() == 2 && g.qubits[0] != g.qubits[1],
                GateKind::OneQubit { .. } => g.qubits.len() == 1,
                GateKind::Measure => {
                    g.qubits.len() == 1 && g.clbits.len() == 1 && g.clbits[0] < self.num_clbits
                }
                GateKind::Barrier => !g.qubits.is_empty(),
            };
            if !arity_ok {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} ({:?}) has invalid operands",
                    g.kind
                )));
            }
        }
        Ok(())
    }
}
