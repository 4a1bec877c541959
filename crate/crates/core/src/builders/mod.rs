//! Discretization matrices and the case registry.

mod case;
pub mod fd;
pub mod fe;
mod grid;
mod registry;
mod toeplitz;

pub use case::*;
pub use grid::{fd_node_grid, mapped_grid, uniform_grid, Grid, GridMap};
pub use registry::{
    canonical_name, case_from_spec, default_resolver, list_cases, registry, CaseSpec, CASE_NAMES,
};
pub use toeplitz::{arrow_hadamard_toeplitz, arrow_sampling, diag_sampling, toeplitz, toeplitz_parts};
