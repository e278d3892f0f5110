//! Exact variational-equation analysis of planar polynomial gradient
//! systems, plus the numeric side: gradient-flow integration and empirical
//! component-count experiments on the resulting trajectories.

pub mod algebra;
pub mod expr;
pub mod flow;
pub mod galois;
pub mod lift;
pub mod tame;
pub mod variational;
