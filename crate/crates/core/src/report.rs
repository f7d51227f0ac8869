//! Run records, suite aggregates, benchmarking and parameter sweeps.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline::{pick_hybrid, route_greedy, GreedyParams, HybridWinner};
use crate::circuit::Circuit;
use crate::dag::build_dag;
use crate::error::{Error, Result};
use crate::noise::{eps, route_noise_adaptive, ErrorModel};
use crate::qasm::parse_qasm;
use crate::router::foresight::{route_foresight_detailed, ForesightParams};
use crate::router::mapping::initial_mapping;
use crate::router::schedule::RoutedSchedule;
use crate::topology::{compute_distance_matrix, CouplingGraph};
use crate::verify::{verify_schedule, VerifyReport};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouterKind {
    Foresight,
    Greedy,
    Hybrid,
}

impl FromStr for RouterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "foresight" => Ok(RouterKind::Foresight),
            "greedy" => Ok(RouterKind::Greedy),
            "hybrid" => Ok(RouterKind::Hybrid),
            _ => Err(Error::InvalidArgument(format!("unknown router `{s}`"))),
        }
    }
}

impl fmt::Display for RouterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RouterKind::Foresight => "foresight",
            RouterKind::Greedy => "greedy",
            RouterKind::Hybrid => "hybrid",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecordParams {
    pub delta: usize,
    pub max_solutions: usize,
    pub noise_adaptive: bool,
    pub lookahead_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub name: String,
    pub num_qubits: usize,
    pub original_cnots: usize,
    pub router: RouterKind,
    /// Constituent chosen by the hybrid router.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<HybridWinner>,
    pub swap_count: usize,
    pub swap_overhead_cnots: usize,
    pub depth: usize,
    pub total_gates: usize,
    pub eps: f64,
    pub wall_time_ms: f64,
    pub seed: u64,
    pub peak_tree_nodes: usize,
    pub params: RecordParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyReport>,
}

/// Geometric-mean SWAP-overhead ratio of one router against a baseline,
/// over (circuit, seed) pairs where the baseline overhead is positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub router: RouterKind,
    pub baseline: RouterKind,
    /// Pairs with positive baseline overhead.
    pub pairs: usize,
    /// Geometric mean over pairs where both overheads are positive.
    pub mean_overhead_ratio: Option<f64>,
    /// Pairs where the router needed no SWAPs but the baseline did.
    pub zero_overhead_pairs: usize,
    /// `1 - min ratio` over all pairs.
    pub best_case_reduction: Option<f64>,
    /// Pairs where the router's overhead is strictly lower / higher.
    pub wins: usize,
    pub losses: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub name: String,
    pub delta: usize,
    pub max_solutions: usize,
    pub wall_time_ms: f64,
    pub peak_tree_nodes: usize,
    pub max_frontier: usize,
    pub swap_overhead_cnots: usize,
    pub depth: usize,
    /// Stored relaxed paths summed over every two-qubit gate, looked up
    /// under the initial mapping.
    pub initial_pool_paths: usize,
    pub paths_considered: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub report_version: u32,
    pub topology: String,
    pub records: Vec<RunRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub aggregates: Vec<Aggregate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepPoint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(topology: &str) -> Self {
        RunReport {
            report_version: REPORT_VERSION,
            topology: topology.to_string(),
            records: Vec::new(),
            aggregates: Vec::new(),
            sweep: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Result of routing one circuit with one router.
#[derive(Debug, Clone)]
pub struct RouteRun {
    pub schedule: RoutedSchedule,
    pub record: RunRecord,
    pub noise_fallback: bool,
}

pub fn run_router(
    circuit: &Circuit,
    graph: &CouplingGraph,
    router: RouterKind,
    foresight: &ForesightParams,
    greedy: &GreedyParams,
    verify: bool,
) -> Result<RouteRun> {
    let model = ErrorModel::from_graph(graph);
    let start = Instant::now();
    let mut peak = 0;
    let mut winner = None;
    let mut fallback = false;
    let mut run_foresight = || -> Result<(RoutedSchedule, usize)> {
        if foresight.noise_adaptive {
            let o = route_noise_adaptive(circuit, graph, foresight)?;
            fallback = o.uniform_fallback;
            Ok((o.schedule, o.stats.peak_tree_nodes))
        } else {
            let o = route_foresight_detailed(circuit, graph, foresight)?;
            Ok((o.schedule, o.stats.peak_tree_nodes))
        }
    };
    let schedule = match router {
        RouterKind::Foresight => {
            let (s, p) = run_foresight()?;
            peak = p;
            s
        }
        RouterKind::Greedy => route_greedy(circuit, graph, greedy)?,
        RouterKind::Hybrid => {
            let (f, g) = std::thread::scope(|sc| {
                let h = sc.spawn(|| route_greedy(circuit, graph, greedy));
                let f = run_foresight();
                (f, h.join().expect("greedy router panicked"))
            });
            let ((f, p), g) = (f?, g?);
            peak = p;
            let h = pick_hybrid(f, g);
            winner = Some(h.winner);
            h.schedule
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let e = eps(&schedule, &model);
    let record = RunRecord {
        name: circuit.name.clone(),
        num_qubits: circuit.num_qubits,
        original_cnots: circuit.cnot_count(),
        router,
        winner,
        swap_count: schedule.swap_count,
        swap_overhead_cnots: schedule.swap_overhead_cnots,
        depth: schedule.depth,
        total_gates: schedule.circuit.gates.len(),
        eps: e,
        wall_time_ms,
        seed: foresight.seed,
        peak_tree_nodes: peak,
        params: RecordParams {
            delta: foresight.delta,
            max_solutions: foresight.max_solutions,
            noise_adaptive: foresight.noise_adaptive,
            lookahead_weight: greedy.lookahead_weight,
        },
        verify: verify.then(|| verify_schedule(circuit, &schedule, graph)),
    };
    let mut schedule = schedule;
    schedule.eps = Some(e);
    Ok(RouteRun {
        schedule,
        record,
        noise_fallback: fallback,
    })
}

/// Reads every `.qasm` file in `dir`, sorted by file name; circuits are
/// named after the file stem.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<Circuit>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir.as_ref())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "qasm"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no .qasm files in {}",
            dir.as_ref().display()
        )));
    }
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p)?;
            let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
            Ok(parse_qasm(&text)?.with_name(stem))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub routers: Vec<RouterKind>,
    pub seeds: Vec<u64>,
    pub foresight: ForesightParams,
    pub greedy: GreedyParams,
    pub verify: bool,
}

/// One record per (circuit, router, seed), computed in parallel and
/// returned in that order.
pub fn bench(circuits: &[Circuit], graph: &CouplingGraph, cfg: &BenchConfig) -> Result<RunReport> {
    if circuits.is_empty() {
        return Err(Error::InvalidArgument("empty corpus".into()));
    }
    let jobs: Vec<(usize, RouterKind, u64)> = (0..circuits.len())
        .flat_map(|c| {
            cfg.routers
                .iter()
                .flat_map(move |&r| cfg.seeds.iter().map(move |&s| (c, r, s)))
        })
        .collect();
    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(c, r, seed)| {
            let fp = ForesightParams {
                seed,
                ..cfg.foresight.clone()
            };
            let gp = GreedyParams {
                seed,
                ..cfg.greedy.clone()
            };
            run_router(&circuits[c], graph, r, &fp, &gp, cfg.verify).map(|run| run.record)
        })
        .collect::<Result<_>>()?;
    let mut report = RunReport::new(graph.name());
    report.aggregates = aggregate(&records, RouterKind::Greedy);
    if ErrorModel::from_graph(graph).uniform_fallback {
        report
            .warnings
            .push("device has no error data; EPS uses a uniform error model".into());
    }
    report.records = records;
    Ok(report)
}

pub fn geometric_mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() || values.iter().any(|&v| v <= 0.0) {
        return None;
    }
    Some((values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64).exp())
}

/// Overhead ratios of every non-baseline router against `baseline`, paired
/// by (circuit, seed).
pub fn aggregate(records: &[RunRecord], baseline: RouterKind) -> Vec<Aggregate> {
    let mut routers: Vec<RouterKind> = records.iter().map(|r| r.router).collect();
    routers.sort();
    routers.dedup();
    let mut out = Vec::new();
    for router in routers.into_iter().filter(|&r| r != baseline) {
        let mut ratios = Vec::new();
        let (mut wins, mut losses) = (0, 0);
        for rec in records.iter().filter(|r| r.router == router) {
            let Some(base) = records
                .iter()
                .find(|b| b.router == baseline && b.name == rec.name && b.seed == rec.seed)
            else {
                continue;
            };
            if rec.swap_overhead_cnots < base.swap_overhead_cnots {
                wins += 1;
            } else if rec.swap_overhead_cnots > base.swap_overhead_cnots {
                losses += 1;
            }
            if base.swap_overhead_cnots > 0 {
                ratios.push(rec.swap_overhead_cnots as f64 / base.swap_overhead_cnots as f64);
            }
        }
        if ratios.is_empty() && wins + losses == 0 {
            continue;
        }
        let positive: Vec<f64> = ratios.iter().copied().filter(|&r| r > 0.0).collect();
        out.push(Aggregate {
            router,
            baseline,
            pairs: ratios.len(),
            mean_overhead_ratio: geometric_mean(&positive),
            zero_overhead_pairs: ratios.len() - positive.len(),
            best_case_reduction: ratios.iter().cloned().reduce(f64::min).map(|m| 1.0 - m),
            wins,
            losses,
        });
    }
    out
}

/// Routes `circuit` with ForeSight over the grid of relaxation factors and
/// solution caps, sequentially. Wall time is the minimum over `repeats`
/// runs.
pub fn sweep(
    circuit: &Circuit,
    graph: &CouplingGraph,
    deltas: &[usize],
    max_solutions: &[usize],
    base: &ForesightParams,
    repeats: usize,
) -> Result<Vec<SweepPoint>> {
    let dag = build_dag(circuit);
    let initial = initial_mapping(circuit, graph, base.initial_mapping, base.seed)?;
    let mut out = Vec::new();
    for &delta in deltas {
        let dmat = compute_distance_matrix(graph, delta, base.max_paths_per_pair)?;
        let initial_pool_paths = dag
            .two_qubit_gates()
            .map(|g| {
                let (a, b) = dag.pair(g);
                dmat.paths(initial.physical(a), initial.physical(b)).len()
            })
            .sum();
        for &s in max_solutions {
            let params = ForesightParams {
                delta,
                max_solutions: s,
                ..base.clone()
            };
            let mut best_ms = f64::INFINITY;
            let mut outcome = None;
            for _ in 0..repeats.max(1) {
                let t = Instant::now();
                let o = route_foresight_detailed(circuit, graph, &params)?;
                best_ms = best_ms.min(t.elapsed().as_secs_f64() * 1e3);
                outcome = Some(o);
            }
            let o = outcome.unwrap();
            out.push(SweepPoint {
                name: circuit.name.clone(),
                delta,
                max_solutions: s,
                wall_time_ms: best_ms,
                peak_tree_nodes: o.stats.peak_tree_nodes,
                max_frontier: o.stats.max_frontier,
                swap_overhead_cnots: o.schedule.swap_overhead_cnots,
                depth: o.schedule.depth,
                initial_pool_paths,
                paths_considered: o.stats.paths_considered,
            });
        }
    }
    Ok(out)
}
