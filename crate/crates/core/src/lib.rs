//! Transient interaction of acoustic waves with piezoelectric solids in two
//! dimensions: FEM for the solid, Galerkin BEM for the exterior fluid and
//! convolution quadrature in time.

pub mod bem;
pub mod coupled;
pub mod cq;
pub mod error;
pub mod fem;
pub mod materials;
pub mod mesh;
pub mod par;
pub mod quadrature;
pub mod sparse;
pub mod verify;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
