//! Finite orthoalgebras, test spaces, finite topologies and a few
//! continuum models.

pub mod continuum;
pub mod corpus;
pub mod dot;
pub mod oa;
pub mod testspace;
pub mod topo;
