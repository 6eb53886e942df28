//! Coalition manipulation of weighted three-candidate veto elections.
//!
//! Deciding whether a coalition can make its candidate win reduces to
//! two-way number partitioning, solved here with the complete
//! Karmarkar-Karp search. The [`experiments`] module estimates how often
//! random elections are manipulable and how much search that takes.

pub mod election;
pub mod experiments;
pub mod generators;
pub mod partition;

pub use election::{
    classify_case, decide_manipulation, reduce_to_partition, verify_assignment, CaseLabel,
    ManipulationInstance, ManipulationResult, VetoTarget,
};
pub use generators::{GeneratorSpec, WeightModel};
pub use partition::{ckk_decide, ckk_optimize, kk_heuristic, Bag, PartitionOutcome, PartitionProblem, SearchStats};
