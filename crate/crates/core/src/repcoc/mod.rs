//! Representations, sparse value vectors, and cocycles.

mod cocycle;
mod rep;
mod sparse;

pub use cocycle::{
    check_cocycle_identity, haagerup_chain, lipschitz_check, CocycleJson, CocycleKind, CocycleSpec,
    CocycleState, LipschitzReport,
};
pub use rep::{from_dense, to_dense, Entry, NestedMatrix, RepJson, RepKind, RepSpec, MAX_DIM};
pub use sparse::{BasisKey, Coefficient, EdgeKey, SparseVector};
