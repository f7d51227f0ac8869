//! Command-line interface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::baseline::GreedyParams;
use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::generate::{generate, Family};
use crate::qasm::{emit_qasm, parse_qasm};
use crate::report::{bench, load_corpus, run_router, sweep, BenchConfig, RouterKind, RunReport};
use crate::router::foresight::ForesightParams;
use crate::router::{Mapping, RoutedSchedule};
use crate::topology::resolve_topology;
use crate::verify::verify_schedule;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "foresight", version, about = "Qubit routing for connectivity-limited devices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Route one OpenQASM 2.0 circuit.
    Route(RouteArgs),
    /// Route a directory of circuits and aggregate the results.
    Bench(BenchArgs),
    /// Write a generated benchmark circuit.
    Gen(GenArgs),
    /// Check a routed QASM file (as written by `route`) against its source.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct RouterOpts {
    /// Extra hops allowed beyond the shortest route.
    #[arg(long, default_value_t = 2)]
    pub delta: usize,
    /// Solution-tree frontier size that triggers pruning.
    #[arg(long, default_value_t = 64)]
    pub max_solutions: usize,
    /// Weight paths by CNOT error and pick the final schedule by EPS.
    #[arg(long)]
    pub noise_adaptive: bool,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Builtin name (tokyo, sycamore53, aspen32, grid(m,n), ring(k), line(k)) or JSON file.
    #[arg(long)]
    pub topology: String,
    #[arg(long, default_value = "foresight")]
    pub router: RouterKind,
    #[command(flatten)]
    pub opts: RouterOpts,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Check connectivity, mapping bookkeeping and equivalence.
    #[arg(long)]
    pub verify: bool,
    /// Routed QASM destination; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub topology: String,
    #[arg(long, value_delimiter = ',', default_value = "foresight,greedy")]
    pub routers: Vec<RouterKind>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    #[command(flatten)]
    pub opts: RouterOpts,
    #[arg(long)]
    pub verify: bool,
    /// Sweep these relaxation factors (ForeSight only).
    #[arg(long, value_delimiter = ',')]
    pub sweep_delta: Vec<usize>,
    /// Sweep these solution caps (ForeSight only).
    #[arg(long, value_delimiter = ',')]
    pub sweep_max_solutions: Vec<usize>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub qubits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// The unrouted circuit.
    #[arg(long)]
    pub input: PathBuf,
    /// Routed output of `route`, including its mapping header.
    #[arg(long)]
    pub routed: PathBuf,
    #[arg(long)]
    pub topology: String,
}

const TAG_INITIAL: &str = "// initial_mapping:";
const TAG_FINAL: &str = "// final_mapping:";
const TAG_SWAPS: &str = "// routing_swaps:";

fn join(xs: impl IntoIterator<Item = usize>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Routed QASM preceded by comment lines recording both mappings and the
/// indices of the inserted SWAPs.
pub fn annotated_qasm(schedule: &RoutedSchedule) -> String {
    let swaps = (0..schedule.inserted_swap.len()).filter(|&i| schedule.inserted_swap[i]);
    format!(
        "{TAG_INITIAL} {}\n{TAG_FINAL} {}\n{TAG_SWAPS} {}\n{}",
        join(schedule.initial_mapping.assignment()),
        join(schedule.final_mapping.assignment()),
        join(swaps),
        emit_qasm(&schedule.circuit)
    )
}

/// Rebuilds a schedule from [`annotated_qasm`] output.
pub fn read_annotated(text: &str, original: &Circuit, num_physical: usize) -> Result<RoutedSchedule> {
    let field = |tag: &str| -> Result<Vec<usize>> {
        let line = text
            .lines()
            .find_map(|l| l.trim().strip_prefix(tag))
            .ok_or_else(|| Error::InvalidArgument(format!("routed file lacks `{tag}` header")))?;
        line.split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad entry `{t}` in `{tag}` header")))
            })
            .collect()
    };
    let circuit = parse_qasm(text)?;
    if circuit.num_qubits != num_physical {
        return Err(Error::InvalidArgument(format!(
            "routed circuit has {} qubits but the device has {num_physical}",
            circuit.num_qubits
        )));
    }
    let initial = Mapping::from_assignment(field(TAG_INITIAL)?, num_physical)?;
    let final_mapping = Mapping::from_assignment(field(TAG_FINAL)?, num_physical)?;
    let mut inserted_swap = vec![false; circuit.gates.len()];
    for i in field(TAG_SWAPS)? {
        let ok = circuit.gates.get(i).is_some_and(|g| g.kind == GateKind::Swap);
        if !ok {
            return Err(Error::InvalidArgument(format!("routing_swaps entry {i} is not a swap")));
        }
        inserted_swap[i] = true;
    }
    let swap_count = inserted_swap.iter().filter(|&&s| s).count();
    Ok(RoutedSchedule {
        swap_overhead_cnots: circuit.cnot_count().saturating_sub(original.cnot_count()),
        depth: circuit.depth(),
        circuit,
        inserted_swap,
        initial_mapping: initial,
        final_mapping,
        swap_count,
        eps: None,
    })
}

fn foresight_params(opts: &RouterOpts, seed: u64) -> ForesightParams {
    ForesightParams {
        delta: opts.delta,
        max_solutions: opts.max_solutions,
        seed,
        noise_adaptive: opts.noise_adaptive,
        ..ForesightParams::default()
    }
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_route(a: &RouteArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&a.input)?;
    let name = a
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let circuit = parse_qasm(&text)?.with_name(name);
    let graph = resolve_topology(&a.topology)?;
    let fp = foresight_params(&a.opts, a.seed);
    let gp = GreedyParams {
        seed: a.seed,
        ..GreedyParams::default()
    };
    let run = run_router(&circuit, &graph, a.router, &fp, &gp, a.verify)?;
    write_or_print(a.output.as_ref(), &annotated_qasm(&run.schedule))?;
    if let Some(path) = &a.report {
        let mut report = RunReport::new(graph.name());
        if run.noise_fallback {
            report
                .warnings
                .push("device has no error data; noise-adaptive routing used a uniform model".into());
        }
        report.records.push(run.record.clone());
        std::fs::write(path, report.to_json())?;
    }
    if let Some(v) = &run.record.verify {
        if !v.passed() {
            eprintln!("verification failed: {}", serde_json::to_string(v)?);
            return Ok(EXIT_VERIFY_FAILED);
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bench(a: &BenchArgs) -> Result<i32> {
    let circuits = load_corpus(&a.corpus)?;
    let graph = resolve_topology(&a.topology)?;
    let fp = foresight_params(&a.opts, a.seeds.first().copied().unwrap_or(0));
    let mut report = if a.sweep_delta.is_empty() && a.sweep_max_solutions.is_empty() {
        let cfg = BenchConfig {
            routers: a.routers.clone(),
            seeds: a.seeds.clone(),
            foresight: fp,
            greedy: GreedyParams::default(),
            verify: a.verify,
        };
        bench(&circuits, &graph, &cfg)?
    } else {
        let deltas = if a.sweep_delta.is_empty() { vec![a.opts.delta] } else { a.sweep_delta.clone() };
        let caps = if a.sweep_max_solutions.is_empty() {
            vec![a.opts.max_solutions]
        } else {
            a.sweep_max_solutions.clone()
        };
        let mut r = RunReport::new(graph.name());
        for c in &circuits {
            r.sweep.extend(sweep(c, &graph, &deltas, &caps, &fp, 1)?);
        }
        r
    };
    let failed = report
        .records
        .iter()
        .any(|r| r.verify.as_ref().is_some_and(|v| !v.passed()));
    report.records.sort_by(|x, y| (&x.name, x.router, x.seed).cmp(&(&y.name, y.router, y.seed)));
    write_or_print(a.report.as_ref(), &(report.to_json() + "\n"))?;
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

fn cmd_gen(a: &GenArgs) -> Result<i32> {
    let c = generate(a.family, a.qubits, a.seed)?;
    write_or_print(a.output.as_ref(), &emit_qasm(&c))?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let original = parse_qasm(&std::fs::read_to_string(&a.input)?)?;
    let graph = resolve_topology(&a.topology)?;
    let routed = std::fs::read_to_string(&a.routed)?;
    let schedule = read_annotated(&routed, &original, graph.num_qubits())?;
    let report = verify_schedule(&original, &schedule, &graph);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Route(a) => cmd_route(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
