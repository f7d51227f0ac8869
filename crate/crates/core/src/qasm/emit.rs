use std::fmt::Write;

use crate::circuit::{Circuit, GateKind};

/// Renders a circuit as OpenQASM 2.0 over a single `q` and `c` register.
/// Parameters are written with shortest round-trip float formatting so that
/// re-parsing yields bit-identical values.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if circuit.num_qubits > 0 {
        let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits);
    }
    if circuit.num_clbits > 0 {
        let _ = writeln!(out, "creg c[{}];", circuit.num_clbits);
    }
    for g in &circuit.gates {
        match &g.kind {
            GateKind::OneQubit { name, params } => {
                out.push_str(name);
                if !params.is_empty() {
                    let ps: Vec<String> = params.iter().map(|p| format!("{p}")).collect();
                    let _ = write!(out, "({})", ps.join(","));
                }
                let _ = writeln!(out, " q[{}];", g.qubits[0]);
            }
            GateKind::Cx => {
                let _ = writeln!(out, "cx q[{}],q[{}];", g.qubits[0], g.qubits[1]);
            }
            GateKind::Swap => {
                let _ = writeln!(out, "swap q[{}],q[{}];", g.qubits[0], g.qubits[1]);
            }
            GateKind::Measure => {
                let _ = writeln!(out, "measure q[{}] -> c[{}];", g.qubits[0], g.clbits[0]);
            }
            GateKind::Barrier => {
                let qs: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
                let _ = writeln!(out, "barrier {};", qs.join(","));
            }
        }
    }
    out
}
