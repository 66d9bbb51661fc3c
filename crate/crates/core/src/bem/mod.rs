//! Galerkin boundary elements for the modified Helmholtz operator
//! `-Δ + κ²` with `κ = s/c`.

mod space;

pub use space::{BoundarySpaces, PanelGeom};

pub mod bessel;
mod operators;
pub mod pairs;
mod potential;

pub use bessel::k0_k1;
pub use operators::{wavenumber, CalderonBlock};
pub use potential::{eval_potentials, PotentialEval};
