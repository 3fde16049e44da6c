//! p-trees, tilted p-trees with surplus edges, and Norros–Reittu graphs.

mod annotate;
mod nr;
pub mod oracle;
mod prob;
mod ptree;
mod tilted;

pub use annotate::{annotate, AnnotatedPTree};
pub use nr::{sample_nr, two_stage_parameters, BlockParameters};
pub use prob::ProbVector;
pub use ptree::{ptree_weight, randomize_child_order, sample_ptree, sample_ptree_from, PTree};
pub use tilted::{
    log_envelope, sample_tilted_connected, ConnectedSample, Route, SurplusEdge, TiltedSampler,
    TiltedStats,
};
