//! ForeSight qubit routing: maps quantum circuits onto devices with limited
//! connectivity by inserting SWAP gates.

pub mod baseline;
pub mod circuit;
pub mod cli;
pub mod dag;
pub mod error;
pub mod generate;
pub mod noise;
pub mod qasm;
pub mod report;
pub mod router;
pub mod topology;
pub mod verify;

pub use baseline::{route_greedy, route_hybrid, GreedyParams, HybridWinner, Scheduling};
pub use circuit::{Circuit, Gate, GateKind};
pub use error::{Error, Result};
pub use noise::{eps, route_noise_adaptive, ErrorModel};
pub use qasm::{emit_qasm, parse_qasm};
pub use router::{route_foresight, ForesightParams, Mapping, MappingPolicy, RoutedSchedule};
pub use topology::{builtin_topology, compute_distance_matrix, resolve_topology, CouplingGraph};
