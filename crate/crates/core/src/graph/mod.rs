//! Half-edge multigraphs: sampling, percolation, components and exploration.

mod components;
mod multigraph;
mod sampling;
mod walk;

pub use components::{
    bfs_distances, component_labels, components_and_stats, largest_component_distances,
    ComponentOptions, ComponentStats, SusceptibilityReport,
};
pub use multigraph::{Adjacency, MultiGraph};
pub use sampling::{percolate, sample_cm, sample_matching, sample_simple, SimpleSample};
pub use walk::{explore_degrees, explore_graph, ExplorationWalk, StartRule, WalkComponent};
