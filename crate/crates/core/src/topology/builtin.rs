use std::fmt;
use std::str::FromStr;

use super::CouplingGraph;
use crate::error::{Error, Result};

const TOKYO: &str = include_str!("../../data/topologies/tokyo.json");
const SYCAMORE53: &str = include_str!("../../data/topologies/sycamore53.json");
const ASPEN32: &str = include_str!("../../data/topologies/aspen32.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinTopology {
    Tokyo,
    Sycamore53,
    Aspen32,
    Grid { rows: usize, cols: usize },
    Ring(usize),
    Line(usize),
}

impl FromStr for BuiltinTopology {
    type Err = Error;

    /// Accepts `tokyo`, `sycamore53`, `aspen32`, `grid(m,n)`, `ring(k)` and
    /// `line(k)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownTopology(s.clone());
        match s.as_str() {
            "tokyo" => return Ok(BuiltinTopology::Tokyo),
            "sycamore53" | "sycamore" => return Ok(BuiltinTopology::Sycamore53),
            "aspen32" | "aspen" => return Ok(BuiltinTopology::Aspen32),
            _ => {}
        }
        let (head, rest) = s.split_once('(').ok_or_else(unknown)?;
        let args: Vec<usize> = rest
            .strip_suffix(')')
            .ok_or_else(unknown)?
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| unknown())?;
        match (head, args.as_slice()) {
            ("grid", [rows, cols]) => Ok(BuiltinTopology::Grid {
                rows: *rows,
                cols: *cols,
            }),
            ("ring", [k]) => Ok(BuiltinTopology::Ring(*k)),
            ("line", [k]) => Ok(BuiltinTopology::Line(*k)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for BuiltinTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinTopology::Tokyo => write!(f, "tokyo"),
            BuiltinTopology::Sycamore53 => write!(f, "sycamore53"),
            BuiltinTopology::Aspen32 => write!(f, "aspen32"),
            BuiltinTopology::Grid { rows, cols } => write!(f, "grid({rows},{cols})"),
            BuiltinTopology::Ring(k) => write!(f, "ring({k})"),
            BuiltinTopology::Line(k) => write!(f, "line({k})"),
        }
    }
}

pub fn builtin_topology(which: &BuiltinTopology) -> Result<CouplingGraph> {
    let name = which.to_string();
    match *which {
        BuiltinTopology::Tokyo => CouplingGraph::from_json(TOKYO),
        BuiltinTopology::Sycamore53 => CouplingGraph::from_json(SYCAMORE53),
        BuiltinTopology::Aspen32 => CouplingGraph::from_json(ASPEN32),
        BuiltinTopology::Grid { rows, cols } => {
            if rows < 2 || cols < 2 {
                return Err(Error::InvalidArgument(format!(
                    "grid dimensions must be at least 2, got {rows}x{cols}"
                )));
            }
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            CouplingGraph::new(name, rows * cols, edges)
        }
        BuiltinTopology::Ring(k) => {
            // ring(2) would need a doubled edge.
            if k < 3 {
                return Err(Error::InvalidArgument(format!(
                    "ring needs at least 3 qubits, got {k}"
                )));
            }
            CouplingGraph::new(name, k, (0..k).map(|i| (i, (i + 1) % k)))
        }
        BuiltinTopology::Line(k) => {
            if k < 2 {
                return Err(Error::InvalidArgument(format!(
                    "line needs at least 2 qubits, got {k}"
                )));
            }
            CouplingGraph::new(name, k, (0..k - 1).map(|i| (i, i + 1)))
        }
    }
}

/// Resolves a builtin name or, failing that, a topology JSON file path.
pub fn resolve_topology(spec: &str) -> Result<CouplingGraph> {
    match spec.parse::<BuiltinTopology>() {
        Ok(b) => builtin_topology(&b),
        Err(e) => {
            let path = std::path::Path::new(spec);
            if path.exists() {
                super::load_topology(path)
            } else {
                Err(e)
            }
        }
    }
}
