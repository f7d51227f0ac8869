//! Solution tree with parent pointers, cumulative CNOT cost and continuous
//! pruning.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::mapping::Mapping;
use super::schedule::Event;

pub type NodeId = usize;

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub parent: Option<NodeId>,
    /// Gates and SWAPs appended at this node, in execution order.
    pub executed: Vec<Event>,
    /// CNOTs executed from the root up to and including this node.
    pub cnot_cost: usize,
    pub front_layer_index: usize,
    /// Held only while the node sits on the frontier.
    pub mapping: Option<Mapping>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PruneRecord {
    pub layer: usize,
    pub before: usize,
    pub min_cost_nodes: usize,
    pub distinct_mappings: usize,
    pub after: usize,
}

#[derive(Debug, Clone)]
pub struct SolutionTree {
    pub nodes: Vec<TreeNode>,
    pub layer_frontier: Vec<NodeId>,
    pub max_solutions: usize,
    pub rng_seed: u64,
    pub peak_nodes: usize,
}

impl SolutionTree {
    pub fn new(root_mapping: Mapping, max_solutions: usize, rng_seed: u64) -> Self {
        SolutionTree {
            nodes: vec![TreeNode {
                parent: None,
                executed: Vec::new(),
                cnot_cost: 0,
                front_layer_index: 0,
                mapping: Some(root_mapping),
            }],
            layer_frontier: vec![0],
            max_solutions,
            rng_seed,
            peak_nodes: 1,
        }
    }

    pub fn add(&mut self, parent: NodeId, executed: Vec<Event>, cnots: usize, layer: usize) -> NodeId {
        let cnot_cost = self.nodes[parent].cnot_cost + cnots;
        self.nodes.push(TreeNode {
            parent: Some(parent),
            executed,
            cnot_cost,
            front_layer_index: layer,
            mapping: None,
        });
        self.peak_nodes = self.peak_nodes.max(self.nodes.len());
        self.nodes.len() - 1
    }

    /// Events from the root down to `node`.
    pub fn trace(&self, node: NodeId) -> Vec<Event> {
        let mut chain = Vec::new();
        let mut cur = Some(node);
        while let Some(id) = cur {
            chain.push(id);
            cur = self.nodes[id].parent;
        }
        chain
            .into_iter()
            .rev()
            .flat_map(|id| self.nodes[id].executed.iter().copied())
            .collect()
    }

    /// Keeps only minimum-cost frontier nodes, one per distinct mapping, and
    /// then at most `max_solutions / 2` of them chosen by `rng`. Survivors
    /// keep node-id order.
    pub fn prune(&mut self, layer: usize, rng: &mut ChaCha8Rng) -> PruneRecord {
        let before = self.layer_frontier.len();
        let min = self
            .layer_frontier
            .iter()
            .map(|&id| self.nodes[id].cnot_cost)
            .min()
            .unwrap_or(0);
        let cheapest: Vec<NodeId> = self
            .layer_frontier
            .iter()
            .copied()
            .filter(|&id| self.nodes[id].cnot_cost == min)
            .collect();
        let min_cost_nodes = cheapest.len();
        let mut seen: HashSet<&Mapping> = HashSet::new();
        let mut distinct = Vec::new();
        for &id in &cheapest {
            if seen.insert(self.nodes[id].mapping.as_ref().expect("frontier mapping")) {
                distinct.push(id);
            }
        }
        let distinct_mappings = distinct.len();
        let cap = (self.max_solutions / 2).max(1);
        let survivors = if distinct.len() > cap {
            let mut picked: Vec<NodeId> = sample(rng, distinct.len(), cap)
                .into_iter()
                .map(|i| distinct[i])
                .collect();
            picked.sort_unstable();
            picked
        } else {
            distinct
        };
        let keep: HashSet<NodeId> = survivors.iter().copied().collect();
        for &id in &self.layer_frontier {
            if !keep.contains(&id) {
                self.nodes[id].mapping = None;
            }
        }
        self.layer_frontier = survivors;
        PruneRecord {
            layer,
            before,
            min_cost_nodes,
            distinct_mappings,
            after: self.layer_frontier.len(),
        }
    }

    /// Drops nodes with no frontier descendant, renumbering the rest in
    /// their original relative order.
    pub fn compact(&mut self) {
        let mut alive = vec![false; self.nodes.len()];
        for &leaf in &self.layer_frontier {
            let mut cur = Some(leaf);
            while let Some(id) = cur {
                if alive[id] {
                    break;
                }
                alive[id] = true;
                cur = self.nodes[id].parent;
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut next = 0;
        for (id, &a) in alive.iter().enumerate() {
            if a {
                remap[id] = next;
                next += 1;
            }
        }
        let old = std::mem::take(&mut self.nodes);
        self.nodes = old
            .into_iter()
            .enumerate()
            .filter(|(id, _)| alive[*id])
            .map(|(_, mut n)| {
                n.parent = n.parent.map(|p| remap[p]);
                n
            })
            .collect();
        for id in &mut self.layer_frontier {
            *id = remap[*id];
        }
    }

    /// Recomputes a node's cost by folding CNOT counts over its parent chain.
    pub fn recomputed_cost(&self, node: NodeId, cnots: impl Fn(&Event) -> usize) -> usize {
        let mut total = 0;
        let mut cur = Some(node);
        while let Some(id) = cur {
            total += self.nodes[id].executed.iter().map(&cnots).sum::<usize>();
            cur = self.nodes[id].parent;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn tree_with_frontier(costs: &[usize], mappings: &[Vec<usize>]) -> SolutionTree {
        let mut t = SolutionTree::new(Mapping::identity(3, 3), 4, 0);
        t.layer_frontier.clear();
        for (c, m) in costs.iter().zip(mappings) {
            let id = t.add(0, vec![Event::Swap(0, 1); *c / 3], *c, 1);
            t.nodes[id].mapping = Some(Mapping::from_assignment(m.clone(), 3).unwrap());
            t.layer_frontier.push(id);
        }
        t
    }

    #[test]
    fn prune_keeps_min_cost_distinct_mappings() {
        let maps = vec![
            vec![0, 1, 2],
            vec![1, 0, 2],
            vec![0, 1, 2],
            vec![2, 1, 0],
            vec![0, 2, 1],
        ];
        let mut t = tree_with_frontier(&[3, 3, 3, 6, 3], &maps);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rec = t.prune(4, &mut rng);
        assert_eq!(rec.before, 5);
        assert_eq!(rec.min_cost_nodes, 4);
        assert_eq!(rec.distinct_mappings, 3);
        assert_eq!(rec.after, 2);
        let ms: HashSet<_> = t
            .layer_frontier
            .iter()
            .map(|&id| t.nodes[id].mapping.clone().unwrap())
            .collect();
        assert_eq!(ms.len(), 2);
        assert!(t.layer_frontier.iter().all(|&id| t.nodes[id].cnot_cost == 3));
    }

    #[test]
    fn trace_and_compact_preserve_events() {
        let mut t = SolutionTree::new(Mapping::identity(2, 2), 4, 0);
        let a = t.add(0, vec![Event::Gate(0)], 1, 0);
        let b = t.add(a, vec![Event::Swap(0, 1)], 3, 1);
        let dead = t.add(a, vec![Event::Gate(5)], 1, 1);
        let _ = dead;
        t.layer_frontier = vec![b];
        let before = t.trace(b);
        t.compact();
        assert_eq!(t.nodes.len(), 3);
        assert_eq!(t.trace(t.layer_frontier[0]), before);
        assert_eq!(t.nodes[t.layer_frontier[0]].cnot_cost, 4);
    }
}
