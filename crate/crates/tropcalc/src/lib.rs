//! Exact δ-form calculus on affine spaces.

pub mod linalg;
pub mod polyhedra;
pub mod superforms;
pub mod deltaforms;
pub mod integration;
pub mod morphisms;
pub mod products;
pub mod random;
pub mod cli;
