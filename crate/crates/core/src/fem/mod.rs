//! Continuous Lagrange finite elements of degree 1 and 2 for the
//! piezoelectric block.

mod assembly;
mod space;

pub use assembly::{
    assemble_dielectric, assemble_elastic_stiffness, assemble_mass, assemble_normal_trace, assemble_piezo_coupling,
    assemble_scalar_mass, boundary_load_scalar, boundary_load_vector, load_scalar, load_vector, FemBlock,
};
pub use space::{dirichlet_lift, shape, Element, FeSpace, QuadPoint};
