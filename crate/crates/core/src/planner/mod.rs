//! Per-target online planning: the black-box generator, the POMCP search
//! tree, and the unweighted particle-filter belief.

mod belief;
mod generator;
mod pomcp;

pub use belief::{hop_angle, predict_mean, spread, update_belief, BeliefSet};
pub use generator::{Action, GeneratorState, Transition};
pub use pomcp::{plan, ActionStats, Planner, SearchConfig, SearchNode, SearchTree};
