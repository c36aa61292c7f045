//! Exact rational and integer linear algebra, exterior powers and formal reals.

pub mod formal;
pub mod matrix;
pub mod rational;
pub mod snf;
pub mod subspace;
pub mod wedge;

pub use formal::{formal_real_sign, Basis, BasisElement, FormalReal, Refinement, Sign, DEFAULT_INTERVAL_DEPTH};
pub use rational::{IVec, QVec, Rational};
pub use snf::{smith_normal_form, SmithForm};
pub use subspace::{subspace_algebra, QSubspace, SubspaceOp};
pub use wedge::{wedge_power, WedgeBasis, WedgeIndex};
