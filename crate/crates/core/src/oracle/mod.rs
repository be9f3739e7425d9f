//! Brute-force referee: word collection, explicit group tables, subgroup
//! machinery and isomorphism search for two-generator groups.
//!
//! Nothing here relies on the closed-form multiplication of [`crate::hall`]
//! beyond what a group's own `op` provides.

mod iso;
mod table;
mod word;

use thiserror::Error;

pub use iso::{iso_2gen, Isomorphism};
pub use table::{
    brute_center, closure, coset_map, derived_subgroup, enumerate, fingerprint, lcs,
    normal_closure, quotient_central, quotient_normal, Fingerprint, FiniteGroup, GroupTable,
    Subgroup, DEFAULT_MAX_ORDER,
};
pub use word::{collect_word, parse_word, word_of, DisplayWord, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },
    #[error("subgroup is not central")]
    NotCentral,
    #[error("subgroup is not normal")]
    NotNormal,
}
