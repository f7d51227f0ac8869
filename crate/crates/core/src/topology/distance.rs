use std::sync::OnceLock;

use super::{bfs, CouplingGraph};
use crate::error::{Error, Result};

/// Default cap on stored paths per ordered pair.
pub const DEFAULT_MAX_PATHS: usize = 32;

/// Upper bound on DFS node expansions per (pair, path length). Only reachable
/// on large graphs with very long relaxed paths; the paths found so far are
/// kept in order.
const EXPANSION_BUDGET: usize = 2_000_000;

/// Per-edge additive weights and the all-pairs weighted distances they
/// induce, used to rank low-error routes ahead of equal-hop alternatives.
#[derive(Debug, Clone)]
pub struct PathWeights {
    pub edge: Vec<f64>,
    dist: Vec<f64>,
}

/// All-pairs hop distances plus, for every ordered pair, the simple paths
/// whose length lies within `delta` of the shortest.
///
/// Hop distances are computed eagerly. Path lists are enumerated on first
/// access and cached; every entry is a deterministic function of
/// `(graph, delta, max_paths)`, so lazily and eagerly built tables are
/// indistinguishable. This keeps 500-qubit devices tractable where most pairs
/// are never queried.
#[derive(Debug)]
pub struct DistanceMatrix {
    graph: CouplingGraph,
    delta: usize,
    max_paths: usize,
    bipartite: bool,
    shortest: Vec<u32>,
    weights: Option<PathWeights>,
    paths: Vec<OnceLock<Vec<Vec<usize>>>>,
}

pub fn compute_distance_matrix(
    graph: &CouplingGraph,
    delta: usize,
    max_paths_per_pair: usize,
) -> Result<DistanceMatrix> {
    if max_paths_per_pair == 0 {
        return Err(Error::InvalidArgument("max_paths_per_pair must be >= 1".into()));
    }
    let n = graph.num_qubits();
    let mut shortest = Vec::with_capacity(n * n);
    for v in 0..n {
        let d = bfs(graph, v);
        if d.contains(&u32::MAX) {
            return Err(Error::Disconnected);
        }
        shortest.extend(d);
    }
    Ok(DistanceMatrix {
        graph: graph.clone(),
        delta,
        max_paths: max_paths_per_pair,
        bipartite: graph.is_bipartite(),
        shortest,
        weights: None,
        paths: (0..n * n).map(|_| OnceLock::new()).collect(),
    })
}

impl DistanceMatrix {
    pub fn num_qubits(&self) -> usize {
        self.graph.num_qubits()
    }

    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn max_paths(&self) -> usize {
        self.max_paths
    }

    pub fn shortest(&self, i: usize, j: usize) -> u32 {
        self.shortest[i * self.num_qubits() + j]
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Routing distance: weighted when edge weights are attached, hop count
    /// otherwise.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.weights {
            Some(w) => w.dist[i * self.num_qubits() + j],
            None => self.shortest(i, j) as f64,
        }
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> f64 {
        match &self.weights {
            Some(w) => w.edge[self.graph.edge_index(a, b).expect("edge")],
            None => 1.0,
        }
    }

    pub fn path_weight(&self, path: &[usize]) -> f64 {
        path.windows(2).map(|w| self.edge_weight(w[0], w[1])).sum()
    }

    /// Attaches edge weights (aligned with `graph.edges()`); distances become
    /// weighted shortest paths and path lists are ranked by weight first.
    pub fn with_weights(mut self, edge: Vec<f64>) -> Result<Self> {
        let n = self.num_qubits();
        if edge.len() != self.graph.edges().len() || edge.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(Error::InvalidArgument(
                "edge weights must be positive and one per edge".into(),
            ));
        }
        let mut dist = vec![f64::INFINITY; n * n];
        for v in 0..n {
            dist[v * n + v] = 0.0;
        }
        for (k, &(a, b)) in self.graph.edges().iter().enumerate() {
            dist[a * n + b] = dist[a * n + b].min(edge[k]);
            dist[b * n + a] = dist[a * n + b];
        }
        // Floyd-Warshall over the weighted graph.
        for k in 0..n {
            for i in 0..n {
                let ik = dist[i * n + k];
                if ik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let cand = ik + dist[k * n + j];
                    if cand < dist[i * n + j] {
                        dist[i * n + j] = cand;
                    }
                }
            }
        }
        self.weights = Some(PathWeights { edge, dist });
        self.paths = (0..n * n).map(|_| OnceLock::new()).collect();
        Ok(self)
    }

    /// Stored paths from `i` to `j`, sorted by (length, vertex sequence), or
    /// by (weight, length, vertex sequence) when weighted.
    pub fn paths(&self, i: usize, j: usize) -> &[Vec<usize>] {
        self.paths[i * self.num_qubits() + j].get_or_init(|| self.enumerate(i, j))
    }

    /// Forces every entry; mostly useful for small graphs and tests.
    pub fn materialize(&self) {
        let n = self.num_qubits();
        for i in 0..n {
            for j in 0..n {
                self.paths(i, j);
            }
        }
    }

    fn enumerate(&self, i: usize, j: usize) -> Vec<Vec<usize>> {
        if i == j {
            return vec![vec![i]];
        }
        let limit = match self.weights {
            // Over-collect so that re-ranking by weight sees alternatives.
            Some(_) => self.max_paths.saturating_mul(4),
            None => self.max_paths,
        };
        let base = self.shortest(i, j) as usize;
        let n = self.num_qubits();
        let mut out = Vec::new();
        let mut visited = vec![false; n];
        let mut path = vec![i];
        visited[i] = true;
        for len in base..=base + self.delta {
            if out.len() >= limit {
                break;
            }
            if self.bipartite && (len - base) % 2 == 1 {
                continue;
            }
            let mut budget = EXPANSION_BUDGET;
            self.dfs(i, j, len, &mut visited, &mut path, &mut out, limit, &mut budget);
        }
        if let Some(w) = &self.weights {
            let mut keyed: Vec<(f64, Vec<usize>)> = out
                .into_iter()
                .map(|p| {
                    let wt = p.windows(2).map(|e| w.edge[self.graph.edge_index(e[0], e[1]).unwrap()]).sum();
                    (wt, p)
                })
                .collect();
            // Stable sort keeps (length, lexicographic) order among equal weights.
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
            out = keyed.into_iter().map(|(_, p)| p).take(self.max_paths).collect();
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        v: usize,
        target: usize,
        remaining: usize,
        visited: &mut [bool],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
        budget: &mut usize,
    ) {
        if remaining == 0 {
            if v == target {
                out.push(path.clone());
            }
            return;
        }
        for &w in self.graph.neighbors(v) {
            if out.len() >= limit || *budget == 0 {
                return;
            }
            if visited[w] || (w == target && remaining != 1) {
                continue;
            }
            let d = self.shortest(w, target) as usize;
            if d > remaining - 1 || (self.bipartite && (remaining - 1 - d) % 2 == 1) {
                continue;
            }
            *budget -= 1;
            visited[w] = true;
            path.push(w);
            self.dfs(w, target, remaining - 1, visited, path, out, limit, budget);
            path.pop();
            visited[w] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{builtin_topology, BuiltinTopology};

    /// Unpruned enumeration of every simple path, the reference for the
    /// pruned DFS.
    pub(crate) fn brute_force_paths(g: &CouplingGraph, i: usize, j: usize) -> Vec<Vec<usize>> {
        fn go(g: &CouplingGraph, v: usize, t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if v == t {
                out.push(path.clone());
                return;
            }
            for &w in g.neighbors(v) {
                if !path.contains(&w) {
                    path.push(w);
                    go(g, w, t, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(g, i, j, &mut vec![i], &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Q0 and Q5 at distance 2, with simple detours of length 3, 4 and 6.
    fn detour_graph() -> CouplingGraph {
        CouplingGraph::new(
            "detours",
            10,
            [
                (0, 4),
                (4, 5),
                (0, 8),
                (8, 9),
                (9, 5),
                (0, 1),
                (1, 2),
                (2, 6),
                (6, 5),
                (2, 3),
                (3, 7),
                (7, 6),
            ],
        )
        .unwrap()
    }

    #[test]
    fn relaxed_paths_exclude_the_long_detour() {
        let g = detour_graph();
        let d = compute_distance_matrix(&g, 2, usize::MAX).unwrap();
        assert_eq!(d.shortest(0, 5), 2);
        let paths = d.paths(0, 5);
        assert_eq!(
            paths,
            &[vec![0, 4, 5], vec![0, 8, 9, 5], vec![0, 1, 2, 6, 5]]
        );
        let all = brute_force_paths(&g, 0, 5);
        assert!(all.contains(&vec![0, 1, 2, 3, 7, 6, 5]));
    }

    #[test]
    fn adjacent_pair_without_relaxation() {
        let g = detour_graph();
        let d = compute_distance_matrix(&g, 0, DEFAULT_MAX_PATHS).unwrap();
        assert_eq!(d.paths(0, 4), &[vec![0, 4]]);
    }

    #[test]
    fn five_ring_stores_both_directions() {
        let g = builtin_topology(&BuiltinTopology::Ring(5)).unwrap();
        let d = compute_distance_matrix(&g, 2, DEFAULT_MAX_PATHS).unwrap();
        assert_eq!(d.paths(0, 2), &[vec![0, 1, 2], vec![0, 4, 3, 2]]);
        assert_eq!(d.paths(0, 2), brute_force_paths(&g, 0, 2).as_slice());
    }

    #[test]
    fn truncation_keeps_shortest_first() {
        let g = builtin_topology(&BuiltinTopology::Grid { rows: 4, cols: 4 }).unwrap();
        let full = compute_distance_matrix(&g, 2, usize::MAX).unwrap();
        let capped = compute_distance_matrix(&g, 2, 5).unwrap();
        assert_eq!(capped.paths(0, 15), &full.paths(0, 15)[..5]);
        assert!(capped.paths(0, 15).iter().all(|p| p.len() == 7));
    }

    #[test]
    fn uniform_weights_preserve_order() {
        let g = builtin_topology(&BuiltinTopology::Tokyo).unwrap();
        let plain = compute_distance_matrix(&g, 2, 8).unwrap();
        let weighted = compute_distance_matrix(&g, 2, 8)
            .unwrap()
            .with_weights(vec![1.0; g.edges().len()])
            .unwrap();
        for (i, j) in [(0, 19), (3, 15), (7, 8)] {
            assert_eq!(plain.paths(i, j), weighted.paths(i, j));
            assert_eq!(plain.distance(i, j), weighted.distance(i, j));
        }
    }

    #[test]
    fn weights_promote_reliable_route() {
        let g = builtin_topology(&BuiltinTopology::Ring(6)).unwrap();
        let mut w = vec![1.0; g.edges().len()];
        w[g.edge_index(0, 1).unwrap()] = 10.0;
        let d = compute_distance_matrix(&g, 2, 4).unwrap().with_weights(w).unwrap();
        // 0->2 via 1 costs 11, the other way round costs 4.
        assert_eq!(d.paths(0, 2)[0], vec![0, 5, 4, 3, 2]);
        assert_eq!(d.distance(0, 2), 4.0);
    }

    #[test]
    fn large_grid_is_lazy_and_fast() {
        let g = builtin_topology(&BuiltinTopology::Grid { rows: 25, cols: 20 }).unwrap();
        let d = compute_distance_matrix(&g, 2, DEFAULT_MAX_PATHS).unwrap();
        let p = d.paths(0, 499);
        assert_eq!(p.len(), DEFAULT_MAX_PATHS);
        assert!(p.iter().all(|p| p.len() == 44));
    }
}
