//! Capability of two-generator 2-groups of nilpotency class two.
//!
//! [`hall`] does exact arithmetic in the free class-3 group on `a`, `b`;
//! [`nilprod`] builds class-3 products of cyclic 2-groups and their central
//! quotients; [`class2`] validates classification parameters and models the
//! class-2 groups; [`capability`] decides capability and builds and checks
//! witnesses. [`oracle`] is an independent brute-force referee.

pub mod capability;
pub mod class2;
pub mod hall;
pub mod lattice;
pub mod nilprod;
pub mod oracle;

pub use capability::{
    build_witness, decide, verify, verify_witness, Clause, Report, Verdict, WitnessSpec,
};
pub use class2::{model, validate, Class2Group, GroupType, ParamError, RawParams, TypeParams};
pub use hall::FreeElt;
pub use lattice::CommLattice;
pub use nilprod::{GroupSpec, NilElt, NilGroup};
