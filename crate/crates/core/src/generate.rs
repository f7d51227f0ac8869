//! Benchmark circuit generators.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Bv,
    Ghz,
    QaoaSk,
    Qft,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bv" => Ok(Family::Bv),
            "ghz" => Ok(Family::Ghz),
            "qaoa-sk" => Ok(Family::QaoaSk),
            "qft" => Ok(Family::Qft),
            _ => Err(Error::InvalidArgument(format!("unknown family `{s}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Bv => "bv",
            Family::Ghz => "ghz",
            Family::QaoaSk => "qaoa-sk",
            Family::Qft => "qft",
        })
    }
}

pub fn generate(family: Family, n: usize, seed: u64) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least 2 qubits".into()));
    }
    Ok(match family {
        Family::Bv => bernstein_vazirani(n),
        Family::Ghz => ghz(n),
        Family::QaoaSk => qaoa_sk(n, seed),
        Family::Qft => qft(n),
    })
}

fn h(q: usize) -> Gate {
    Gate::one_qubit("h", vec![], q)
}

/// All-ones key on `n - 1` qubits; the last qubit is the oracle ancilla.
pub fn bernstein_vazirani(n: usize) -> Circuit {
    let anc = n - 1;
    let mut c = Circuit::new(n, n - 1).with_name(format!("bv_{n}"));
    c.push(Gate::one_qubit("x", vec![], anc));
    for q in 0..n {
        c.push(h(q));
    }
    for q in 0..anc {
        c.push(Gate::cx(q, anc));
    }
    for q in 0..anc {
        c.push(h(q));
        c.push(Gate::measure(q, q));
    }
    c
}

pub fn ghz(n: usize) -> Circuit {
    let mut c = Circuit::new(n, n).with_name(format!("ghz_{n}"));
    c.push(h(0));
    for q in 1..n {
        c.push(Gate::cx(q - 1, q));
    }
    for q in 0..n {
        c.push(Gate::measure(q, q));
    }
    c
}

/// One QAOA layer on a Sherrington-Kirkpatrick instance with random
/// ±1 couplings.
pub fn qaoa_sk(n: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (gamma, beta) = (0.4, 0.7);
    let mut c = Circuit::new(n, n).with_name(format!("qaoa_sk_{n}"));
    for q in 0..n {
        c.push(h(q));
    }
    for i in 0..n {
        for j in i + 1..n {
            let jij = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            c.push(Gate::cx(i, j));
            c.push(Gate::one_qubit("rz", vec![2.0 * gamma * jij], j));
            c.push(Gate::cx(i, j));
        }
    }
    for q in 0..n {
        c.push(Gate::one_qubit("rx", vec![2.0 * beta], q));
        c.push(Gate::measure(q, q));
    }
    c
}

/// Textbook QFT without the final qubit reversal; each controlled phase is
/// two CNOTs and three `u1` rotations.
pub fn qft(n: usize) -> Circuit {
    let mut c = Circuit::new(n, n).with_name(format!("qft_{n}"));
    for j in 0..n {
        c.push(h(j));
        for k in j + 1..n {
            controlled_phase(&mut c, PI / (1u64 << (k - j)) as f64, k, j);
        }
    }
    for q in 0..n {
        c.push(Gate::measure(q, q));
    }
    c
}

pub fn controlled_phase(c: &mut Circuit, lambda: f64, a: usize, b: usize) {
    c.push(Gate::one_qubit("u1", vec![lambda / 2.0], a));
    c.push(Gate::cx(a, b));
    c.push(Gate::one_qubit("u1", vec![-lambda / 2.0], b));
    c.push(Gate::cx(a, b));
    c.push(Gate::one_qubit("u1", vec![lambda / 2.0], b));
}
