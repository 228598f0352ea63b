pub mod error;
pub mod kernel;
pub mod matrix;
pub mod random;
pub mod semi_space;
pub mod a_adjoint;
pub mod tilde;
pub mod radius;
pub mod block;
pub mod suite;

pub use a_adjoint::{classify, membership, sharp, Membership, OperatorClassFlags};
pub use error::{Error, Result};
pub use matrix::{CMatrix, CVector, C64};
pub use radius::{crawford, numerical_radius, op_seminorm, OracleBounds, RadiusMethod, RadiusResult, SweepConfig};
pub use semi_space::{SemiInnerSpace, Tolerances};
pub use suite::{CheckResult, InstanceSpec, OpClass, Report};
pub use tilde::TildeOperator;
