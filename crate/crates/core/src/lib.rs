//! Hierarchical quantum states.
//!
//! Tree-structured wave functions with a symmetry group per level, SU(2)
//! representation algebra used to decide which hierarchical basis states are
//! physical, a generalized Pauli checker, symmetry-breaking/repair cascades,
//! a toy two-level hierarchical Hamiltonian integrator and a description-length
//! proxy for classifying evolution-operator time series.
//!
//! Interchangeable algorithms (integrators, description coders, group
//! backends for physicality checks) sit behind traits and are selected by
//! name from a registry.

pub mod bundled;
pub mod complexity;
pub mod dynamics;
pub mod half;
pub mod physicality;
pub mod repair;
pub mod rep_theory;
pub mod state_tree;

pub use complexity::{ComplexityReport, MatrixElementSeries, Verdict};
pub use dynamics::{SimConfig, Trajectory};
pub use physicality::{CoupledLabel, PhysicalityReport, Reason};
pub use rep_theory::{IrrepLabel, IrrepSum};
pub use state_tree::{BasisLabel, GroupTag, HierState, HierarchyLevel, NodeWave, Statistics};
