//! OpenQASM 2.0 subset: parsing into [`Circuit`](crate::circuit::Circuit) and
//! emission back to text.

mod emit;
mod expr;
mod lexer;
mod parser;

pub use emit::emit_qasm;
pub use parser::parse_qasm;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};
    use crate::error::Error;

    const HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

    #[test]
    fn minimal_cx_program() {
        let c = parse_qasm("qreg q[2]; cx q[0],q[1];").unwrap();
        assert_eq!(c.num_qubits, 2);
        assert_eq!(c.gates, vec![Gate::cx(0, 1)]);
    }

    #[test]
    fn hadamard_and_measure() {
        let c = parse_qasm("qreg q[1]; creg c[1]; h q[0]; measure q[0]->c[0];").unwrap();
        assert_eq!(c.num_qubits, 1);
        assert_eq!(
            c.gates,
            vec![Gate::one_qubit("h", vec![], 0), Gate::measure(0, 0)]
        );
    }

    #[test]
    fn three_qubit_gate_is_unsupported() {
        let err = parse_qasm(&format!("{HEADER}qreg q[3]; ccx q[0],q[1],q[2];")).unwrap_err();
        assert!(matches!(err, Error::UnsupportedGate { ref name, .. } if name == "ccx"));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_qasm("qreg q[2];\ncx q[0] q[1];").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 9);
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn out_of_range_index() {
        let err = parse_qasm("qreg q[2]; h q[2];").unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 2, size: 2, .. }));
    }

    #[test]
    fn conditionals_rejected() {
        let err = parse_qasm("qreg q[1]; creg c[1]; if(c==1) x q[0];").unwrap_err();
        assert!(matches!(err, Error::Unsupported { .. }));
    }

    #[test]
    fn registers_flatten_in_declaration_order() {
        let c = parse_qasm("qreg a[2]; qreg b[3]; creg m[1]; creg n[2]; cx a[1],b[0]; measure b[2] -> n[1];")
            .unwrap();
        assert_eq!(c.num_qubits, 5);
        assert_eq!(c.num_clbits, 3);
        assert_eq!(c.gates, vec![Gate::cx(1, 2), Gate::measure(4, 2)]);
    }

    #[test]
    fn broadcast_over_registers() {
        let c = parse_qasm("qreg a[2]; qreg b[2]; creg c[2]; h a; cx a,b; measure b -> c;").unwrap();
        assert_eq!(c.gates.len(), 6);
        assert_eq!(c.gates[2], Gate::cx(0, 2));
        assert_eq!(c.gates[3], Gate::cx(1, 3));
        assert_eq!(c.gates[5], Gate::measure(3, 1));
    }

    #[test]
    fn parameter_expressions() {
        let c = parse_qasm("qreg q[1]; u3(pi/2, -pi/4, 2*0.5^2) q[0]; rz(-(pi)) q[0];").unwrap();
        let GateKind::OneQubit { params, .. } = &c.gates[0].kind else {
            panic!()
        };
        assert_eq!(params[0], std::f64::consts::FRAC_PI_2);
        assert_eq!(params[1], -std::f64::consts::FRAC_PI_4);
        assert_eq!(params[2], 0.5);
    }

    #[test]
    fn custom_gate_is_inlined() {
        let src = format!(
            "{HEADER}gate cp(theta) a,b {{ u1(theta/2) a; cx a,b; u1(-theta/2) b; cx a,b; u1(theta/2) b; }}\n\
             qreg q[2]; cp(pi) q[1],q[0];"
        );
        let c = parse_qasm(&src).unwrap();
        assert_eq!(c.gates.len(), 5);
        assert_eq!(c.gates[1], Gate::cx(1, 0));
        assert_eq!(c.gates[0], Gate::one_qubit("u1", vec![std::f64::consts::FRAC_PI_2], 1));
    }

    #[test]
    fn custom_gate_with_unsupported_body_rejected() {
        let src = format!("{HEADER}gate foo a,b {{ cz a,b; }}\nqreg q[2];");
        assert!(matches!(
            parse_qasm(&src).unwrap_err(),
            Error::UnsupportedGate { ref name, .. } if name == "cz"
        ));
    }

    #[test]
    fn emit_contains_cx_line() {
        let c = parse_qasm("qreg q[2]; cx q[0],q[1];").unwrap();
        assert!(emit_qasm(&c).contains("cx q[0],q[1];"));
    }

    #[test]
    fn empty_circuit_emits_header_only() {
        let c = crate::circuit::Circuit::default();
        assert_eq!(emit_qasm(&c), HEADER);
        assert!(parse_qasm(&emit_qasm(&c)).unwrap().same_structure(&c));
    }

    #[test]
    fn round_trip_with_barrier_and_params() {
        let src = "qreg q[3]; creg c[3]; u2(0.1,1e-7) q[0]; barrier q; swap q[2],q[0]; measure q -> c;";
        let c = parse_qasm(src).unwrap();
        let again = parse_qasm(&emit_qasm(&c)).unwrap();
        assert!(again.same_structure(&c));
    }
}
