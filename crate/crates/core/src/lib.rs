//! Multiverses on oriented surfaces with boundary, their states, and the two
//! generalized clock lattices on those states.

pub mod combmap;
pub mod corpus;
pub mod dual_lattice;
pub mod generate;
pub mod lattice;
pub mod multiverse;
pub mod planar_lattice;
pub mod sketch;
pub mod spine;
pub mod suite;
