//! Nonhamiltonian graphs with any prescribed rational toughness below 9/4.
//!
//! [`synth::plan`] picks a construction for a target `t`, [`synth::build`]
//! produces the graph and a [`synth::Certificate`], and
//! [`verify::check_certificate`] re-checks the pair using exact oracles when
//! the graph is small and structural arguments otherwise.

pub mod blocks;
pub mod graph;
pub mod oracles;
pub mod rational;
pub mod synth;
pub mod verify;

pub use graph::{Graph, VertexSet};
pub use rational::Rational;
