//! Simulation toolkit for critical percolation on configuration models with
//! heavy-tailed degrees.
//!
//! The crate covers the whole pipeline used by the experiments in the
//! `heavytail-lab` runner:
//!
//! * [`degrees`] builds and checks power-law degree sequences and the
//!   critical-window parameters derived from them.
//! * [`graph`] holds the half-edge multigraph, configuration-model and
//!   percolation samplers, component statistics and the exploration walk.
//! * [`dynamic`] runs the exponential-clock pairing process, its blob
//!   snapshots, the modified (exact multiplicative coalescent) process and
//!   half-edge thinning.
//! * [`rank_one`] samples p-trees, tilted p-trees with surplus edges and
//!   Norros–Reittu graphs, plus exact enumeration oracles for small sizes.
//! * [`metric`] assembles blob super graphs and estimates distance-matrix
//!   functionals of measured metric spaces.
//! * [`limit`] simulates thinned Lévy processes, their excursions and marks,
//!   and finite proxies of the limiting spaces.
//! * [`harness`] wires everything into reproducible, seeded experiments.

pub mod degrees;
pub mod dynamic;
pub mod error;
mod fenwick;
pub mod graph;
pub mod harness;
pub mod limit;
pub mod metric;
pub mod rank_one;
pub mod rng;

pub use degrees::{DegreeSequence, TauExponents};
pub use error::{Error, Result};
pub use graph::{ComponentStats, ExplorationWalk, MultiGraph, SusceptibilityReport};
pub use rng::SimRng;
pub use rank_one::{AnnotatedPTree, ConnectedSample, ProbVector};
pub use metric::MeasuredMetricSpace;
