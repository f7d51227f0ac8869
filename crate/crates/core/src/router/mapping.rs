use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::topology::CouplingGraph;

const EMPTY: u32 = u32::MAX;

/// Injective placement of program qubits onto physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping {
    pi: Vec<u32>,
    inverse: Vec<u32>,
}

impl Mapping {
    pub fn identity(num_program: usize, num_physical: usize) -> Self {
        assert!(num_program <= num_physical);
        let mut inverse = vec![EMPTY; num_physical];
        for (q, slot) in inverse.iter_mut().enumerate().take(num_program) {
            *slot = q as u32;
        }
        Mapping {
            pi: (0..num_program as u32).collect(),
            inverse,
        }
    }

    pub fn from_assignment(pi: Vec<usize>, num_physical: usize) -> Result<Self> {
        let mut inverse = vec![EMPTY; num_physical];
        for (q, &p) in pi.iter().enumerate() {
            if p >= num_physical || inverse[p] != EMPTY {
                return Err(Error::InvalidArgument(format!(
                    "mapping is not injective into {num_physical} qubits"
                )));
            }
            inverse[p] = q as u32;
        }
        Ok(Mapping {
            pi: pi.into_iter().map(|p| p as u32).collect(),
            inverse,
        })
    }

    pub fn num_program(&self) -> usize {
        self.pi.len()
    }

    pub fn num_physical(&self) -> usize {
        self.inverse.len()
    }

    #[inline]
    pub fn physical(&self, q: usize) -> usize {
        self.pi[q] as usize
    }

    #[inline]
    pub fn program(&self, p: usize) -> Option<usize> {
        match self.inverse[p] {
            EMPTY => None,
            q => Some(q as usize),
        }
    }

    pub fn assignment(&self) -> Vec<usize> {
        self.pi.iter().map(|&p| p as usize).collect()
    }

    /// Exchanges whatever occupies physical qubits `a` and `b`.
    pub fn swap_physical(&mut self, a: usize, b: usize) {
        self.inverse.swap(a, b);
        if self.inverse[a] != EMPTY {
            self.pi[self.inverse[a] as usize] = a as u32;
        }
        if self.inverse[b] != EMPTY {
            self.pi[self.inverse[b] as usize] = b as u32;
        }
    }

    pub fn is_consistent(&self) -> bool {
        let mut seen = 0;
        for (p, &q) in self.inverse.iter().enumerate() {
            if q != EMPTY {
                seen += 1;
                if self.pi.get(q as usize) != Some(&(p as u32)) {
                    return false;
                }
            }
        }
        seen == self.pi.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingPolicy {
    Identity,
    #[default]
    DegreeMatched,
}

/// Initial placement.
///
/// `DegreeMatched` grows the placement outward: program qubits are taken in
/// order of two-qubit gate count and each is put on the free physical qubit
/// that is closest to its already-placed interaction partners, preferring
/// high degree. The first (busiest) qubit lands on a maximum-degree vertex.
/// Ties are broken by a seeded shuffle.
pub fn initial_mapping(
    circuit: &Circuit,
    graph: &CouplingGraph,
    policy: MappingPolicy,
    seed: u64,
) -> Result<Mapping> {
    let n = circuit.num_qubits;
    let big_n = graph.num_qubits();
    if n > big_n {
        return Err(Error::TooManyQubits {
            needed: n,
            available: big_n,
        });
    }
    if policy == MappingPolicy::Identity {
        return Ok(Mapping::identity(n, big_n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut weight = vec![vec![0usize; n]; n];
    let mut activity = vec![0usize; n];
    let mut first_use = vec![usize::MAX; n];
    for (i, g) in circuit.gates.iter().filter(|g| g.is_two_qubit()).enumerate() {
        for &q in &g.qubits {
            first_use[q] = first_use[q].min(i);
        }
        let (a, b) = (g.qubits[0], g.qubits[1]);
        weight[a][b] += 1;
        weight[b][a] += 1;
        activity[a] += 1;
        activity[b] += 1;
    }
    let dist: Vec<Vec<u32>> = (0..big_n).map(|v| crate::topology::bfs(graph, v)).collect();

    // Program order: busiest first, random among equals.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    order.sort_by_key(|&q| std::cmp::Reverse(activity[q]));
    // Physical tie-break order.
    let mut phys_order: Vec<usize> = (0..big_n).collect();
    phys_order.shuffle(&mut rng);

    let mut pi = vec![usize::MAX; n];
    let mut used = vec![false; big_n];
    let mut placed: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = order;
    // Interaction weight between each unplaced qubit and the placed set.
    let mut tie = vec![0usize; n];
    while !remaining.is_empty() {
        let mut pick = 0;
        let mut pick_key = (0usize, 0usize, std::cmp::Reverse(usize::MAX));
        for (k, &q) in remaining.iter().enumerate() {
            let key = (tie[q], activity[q], std::cmp::Reverse(first_use[q]));
            if key > pick_key {
                pick_key = key;
                pick = k;
            }
        }
        let q = remaining.remove(pick);
        for &r in &remaining {
            tie[r] += weight[r][q];
        }
        let partners: Vec<(usize, usize)> = placed
            .iter()
            .filter(|&&p| weight[q][p] > 0)
            .map(|&p| (pi[p], weight[q][p]))
            .collect();
        let mut best_phys = usize::MAX;
        let mut best_key = (u64::MAX, 0i64);
        for &v in &phys_order {
            if used[v] {
                continue;
            }
            let cost: u64 = partners
                .iter()
                .map(|&(pv, w)| dist[v][pv] as u64 * w as u64)
                .sum();
            let key = (cost, -(graph.degree(v) as i64));
            if key < best_key {
                best_key = key;
                best_phys = v;
            }
        }
        pi[q] = best_phys;
        used[best_phys] = true;
        placed.push(q);
    }
    Mapping::from_assignment(pi, big_n)
}
