//! Device coupling graphs, routing capacity and the relaxed path table.

mod builtin;
mod distance;

use std::collections::{BTreeMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builtin::{builtin_topology, resolve_topology, BuiltinTopology};
pub use distance::{compute_distance_matrix, DistanceMatrix, PathWeights, DEFAULT_MAX_PATHS};

/// Default gate durations in nanoseconds.
pub const DEFAULT_ONE_QUBIT_TIME_NS: f64 = 25.0;
pub const DEFAULT_TWO_QUBIT_TIME_NS: f64 = 32.0;

/// Undirected device topology with optional calibration data.
///
/// Edges are stored normalised as `(lo, hi)` and sorted. Calibration fields
/// stay `None` when absent so that serialisation round-trips exactly; the
/// accessors supply defaults (zero error, infinite coherence).
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGraph {
    name: String,
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    cnot_error: Option<Vec<f64>>,
    one_qubit_error: Option<Vec<f64>>,
    measure_error: Option<Vec<f64>>,
    coherence_time_us: Option<Vec<f64>>,
    one_qubit_time_ns: Option<f64>,
    two_qubit_time_ns: Option<f64>,
}

impl CouplingGraph {
    pub fn new(
        name: impl Into<String>,
        num_qubits: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidTopology("a device needs at least one qubit".into()));
        }
        let mut norm = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidTopology(format!("self-loop on qubit {a}")));
            }
            if a >= num_qubits || b >= num_qubits {
                return Err(Error::InvalidTopology(format!(
                    "edge ({a},{b}) out of range for {num_qubits} qubits"
                )));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTopology(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        let mut adjacency = vec![Vec::new(); num_qubits];
        for &(a, b) in &norm {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let g = CouplingGraph {
            name: name.into(),
            num_qubits,
            edges: norm,
            adjacency,
            cnot_error: None,
            one_qubit_error: None,
            measure_error: None,
            coherence_time_us: None,
            one_qubit_time_ns: None,
            two_qubit_time_ns: None,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adjacency[a].binary_search(&b).is_ok()
    }

    fn is_connected(&self) -> bool {
        bfs(self, 0).iter().all(|&d| d != u32::MAX)
    }

    /// True if every vertex can be two-coloured.
    pub fn is_bipartite(&self) -> bool {
        let d = bfs(self, 0);
        self.edges.iter().all(|&(a, b)| d[a] % 2 != d[b] % 2)
    }

    pub fn has_error_data(&self) -> bool {
        self.cnot_error.is_some()
    }

    pub fn cnot_error(&self, edge: usize) -> f64 {
        self.cnot_error.as_ref().map_or(0.0, |e| e[edge])
    }

    pub fn one_qubit_error(&self, q: usize) -> f64 {
        self.one_qubit_error.as_ref().map_or(0.0, |e| e[q])
    }

    pub fn measure_error(&self, q: usize) -> f64 {
        self.measure_error.as_ref().map_or(0.0, |e| e[q])
    }

    pub fn coherence_time_us(&self, q: usize) -> f64 {
        self.coherence_time_us
            .as_ref()
            .map_or(f64::INFINITY, |e| e[q])
    }

    pub fn one_qubit_time_ns(&self) -> f64 {
        self.one_qubit_time_ns.unwrap_or(DEFAULT_ONE_QUBIT_TIME_NS)
    }

    pub fn two_qubit_time_ns(&self) -> f64 {
        self.two_qubit_time_ns.unwrap_or(DEFAULT_TWO_QUBIT_TIME_NS)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Attaches per-edge CNOT error rates, aligned with [`edges`](Self::edges).
    pub fn with_cnot_errors(mut self, errors: Vec<f64>) -> Result<Self> {
        if errors.len() != self.edges.len() {
            return Err(Error::InvalidTopology("cnot_error length mismatch".into()));
        }
        check_probabilities("cnot_error", &errors)?;
        self.cnot_error = Some(errors);
        Ok(self)
    }

    pub fn with_one_qubit_errors(mut self, errors: Vec<f64>) -> Result<Self> {
        self.check_len("one_qubit_error", errors.len())?;
        check_probabilities("one_qubit_error", &errors)?;
        self.one_qubit_error = Some(errors);
        Ok(self)
    }

    pub fn with_measure_errors(mut self, errors: Vec<f64>) -> Result<Self> {
        self.check_len("measure_error", errors.len())?;
        check_probabilities("measure_error", &errors)?;
        self.measure_error = Some(errors);
        Ok(self)
    }

    pub fn with_coherence_times_us(mut self, times: Vec<f64>) -> Result<Self> {
        self.check_len("coherence_time_us", times.len())?;
        if times.iter().any(|&t| t.is_nan() || t <= 0.0) {
            return Err(Error::InvalidTopology("coherence times must be > 0".into()));
        }
        self.coherence_time_us = Some(times);
        Ok(self)
    }

    pub fn with_gate_times_ns(mut self, one_qubit: f64, two_qubit: f64) -> Result<Self> {
        if one_qubit.is_nan() || one_qubit <= 0.0 || two_qubit.is_nan() || two_qubit <= 0.0 {
            return Err(Error::InvalidTopology("gate durations must be > 0".into()));
        }
        self.one_qubit_time_ns = Some(one_qubit);
        self.two_qubit_time_ns = Some(two_qubit);
        Ok(self)
    }

    fn check_len(&self, field: &str, len: usize) -> Result<()> {
        if len != self.num_qubits {
            return Err(Error::InvalidTopology(format!(
                "{field} has {len} entries for {} qubits",
                self.num_qubits
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TopologyFile = serde_json::from_str(text)?;
        file.into_graph()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TopologyFile::from_graph(self)).expect("serialisable")
    }
}

fn check_probabilities(field: &str, values: &[f64]) -> Result<()> {
    if values.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::InvalidTopology(format!(
            "{field} values must lie in [0,1]"
        )));
    }
    Ok(())
}

/// Hop distances from `src`; unreachable vertices hold `u32::MAX`.
pub(crate) fn bfs(g: &CouplingGraph, src: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.num_qubits];
    let mut queue = VecDeque::new();
    dist[src] = 0;
    queue.push_back(src);
    while let Some(v) = queue.pop_front() {
        for &w in &g.adjacency[v] {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Links per physical qubit.
pub fn routing_capacity(graph: &CouplingGraph) -> f64 {
    graph.edges.len() as f64 / graph.num_qubits as f64
}

/// On-disk topology schema.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyFile {
    #[serde(default)]
    name: String,
    num_qubits: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cnot_error: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    one_qubit_error: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measure_error: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coherence_time_us: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    one_qubit_time_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    two_qubit_time_ns: Option<f64>,
}

impl TopologyFile {
    fn into_graph(self) -> Result<CouplingGraph> {
        let mut g = CouplingGraph::new(
            self.name,
            self.num_qubits,
            self.edges.iter().map(|e| (e[0], e[1])),
        )?;
        if let Some(map) = self.cnot_error {
            let mut errs = vec![None; g.edges.len()];
            for (key, value) in map {
                let (a, b) = key
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .ok_or_else(|| Error::InvalidTopology(format!("bad cnot_error key `{key}`")))?;
                let idx = g.edge_index(a, b).ok_or_else(|| {
                    Error::InvalidTopology(format!("cnot_error for non-edge `{key}`"))
                })?;
                if errs[idx].replace(value).is_some() {
                    return Err(Error::InvalidTopology(format!(
                        "cnot_error given twice for `{key}`"
                    )));
                }
            }
            let errs = errs
                .into_iter()
                .enumerate()
                .map(|(i, e)| {
                    e.ok_or_else(|| {
                        let (a, b) = g.edges[i];
                        Error::InvalidTopology(format!("cnot_error missing for edge {a}-{b}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            g = g.with_cnot_errors(errs)?;
        }
        if let Some(v) = self.one_qubit_error {
            g = g.with_one_qubit_errors(v)?;
        }
        if let Some(v) = self.measure_error {
            g = g.with_measure_errors(v)?;
        }
        if let Some(v) = self.coherence_time_us {
            g = g.with_coherence_times_us(v)?;
        }
        match (self.one_qubit_time_ns, self.two_qubit_time_ns) {
            (None, None) => {}
            (a, b) => {
                let (a, b) = (
                    a.unwrap_or(DEFAULT_ONE_QUBIT_TIME_NS),
                    b.unwrap_or(DEFAULT_TWO_QUBIT_TIME_NS),
                );
                g = g.with_gate_times_ns(a, b)?;
                g.one_qubit_time_ns = self.one_qubit_time_ns;
                g.two_qubit_time_ns = self.two_qubit_time_ns;
            }
        }
        Ok(g)
    }

    fn from_graph(g: &CouplingGraph) -> Self {
        TopologyFile {
            name: g.name.clone(),
            num_qubits: g.num_qubits,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            cnot_error: g.cnot_error.as_ref().map(|errs| {
                g.edges
                    .iter()
                    .zip(errs)
                    .map(|(&(a, b), &e)| (format!("{a}-{b}"), e))
                    .collect()
            }),
            one_qubit_error: g.one_qubit_error.clone(),
            measure_error: g.measure_error.clone(),
            coherence_time_us: g.coherence_time_us.clone(),
            one_qubit_time_ns: g.one_qubit_time_ns,
            two_qubit_time_ns: g.two_qubit_time_ns,
        }
    }
}

pub fn load_topology(path: impl AsRef<Path>) -> Result<CouplingGraph> {
    CouplingGraph::from_json(&std::fs::read_to_string(path)?)
}

pub fn save_topology(graph: &CouplingGraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, graph.to_json())?;
    Ok(())
}
