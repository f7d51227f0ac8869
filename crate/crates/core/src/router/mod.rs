//! Multi-candidate qubit routing: lookahead scoring, path folding, the
//! solution tree and the schedule it produces.

pub mod foresight;
pub mod heuristic;
pub mod mapping;
pub mod pool;
pub mod schedule;
pub mod tree;

pub use foresight::{
    route_foresight, route_foresight_detailed, route_prepared, ForesightOutcome, ForesightParams,
    NoiseGuidance, RouterStats,
};
pub use heuristic::{
    build_post, build_post_with_singles, h_lookahead, h_total, lookahead_horizon, PostArray,
    PostEntry, Scorer, SinglePenalties,
};
pub use mapping::{initial_mapping, Mapping, MappingPolicy};
pub use pool::{
    candidate_paths, default_fold_index, fold_path, fold_positions, generate_candidate_pool, Fold,
    PoolLimits, SwapCandidate,
};
pub use schedule::{assemble, extract_metrics, Event, Metrics, RoutedSchedule};
pub use tree::{NodeId, PruneRecord, SolutionTree, TreeNode};
