//! Finite symmetry groups, their actions and linear representations, and
//! certification of disentangled representations of a symmetric world.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, dataset
//! export and the command-line tool live in the `symcert` crate.

#![no_std]
extern crate alloc;

pub mod action;
pub mod certify;
pub mod group;
pub mod linalg;
pub mod rep;
pub mod world;

pub use action::{FiniteAction, ProductStructure};
pub use certify::{certify, CertificationReport, CertifyOptions, RepresentationTable, Tolerances};
pub use group::{DirectProductDecomposition, FiniteGroup, Subgroup};
pub use rep::{Field, LinearRepresentation};
pub use world::{GridWorld, GridWorldSpec, WorldState};
