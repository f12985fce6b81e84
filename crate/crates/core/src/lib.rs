//! Finite and predicate-defined locality semigroups.
//!
//! A locality set is a set with a relation `⊤` marking which ordered pairs
//! may be multiplied. This crate represents finite partial magmas whose
//! product is defined exactly on `⊤`, checks them against the locality,
//! strong, refined, partial-semigroup and transitivity axioms with concrete
//! witnesses, and builds identity/zero adjunctions, zero completions, quiver
//! path semigroups and free extensions. Small carriers can be enumerated
//! exhaustively.
//!
//! ```
//! use locality_core::{classify, FinitePartialMagma};
//!
//! let m: FinitePartialMagma = "elements: 0 1\nop: 0 0 -> 0\nop: 0 1 -> 0\nop: 1 0 -> 1\n"
//!     .parse()
//!     .unwrap();
//! let report = classify(&m);
//! assert!(report.locality.holds());
//! assert!(!report.partial_semigroup.holds());
//! ```
//!
//! The positive reals under division, related when the quotient is
//! defined, is the motivating infinite example; it is not modelled here.

pub mod check;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod model;
pub mod predicate;
pub mod quiver;

pub use check::{
    classify, classify_flags, find_units, is_locality_semigroup, is_partial_semigroup, is_refined_locality_semigroup,
    is_strong_locality_semigroup, is_transitive, Axiom, ClassReport, Flags, LocalityStructure, Units, Verdict, Witness,
};
pub use construct::{
    adjoin_identity, adjoin_zero, complete_to_semigroup_with_zero, generated_sub_locality_semigroup,
    is_strong_semigroup_with_zero, partial_from_semigroup, SemigroupWithZero,
};
pub use enumerate::{census, find_witness, Census, CensusOptions, CensusRow, FlagPattern};
pub use error::{Error, Result};
pub use format::{parse_document, parse_magma, serialize_magma, MagmaDocument};
pub use model::{ElementId, FinitePartialMagma, LocalityRelation};
pub use predicate::{PredicateMagma, SampledReport};
pub use quiver::{verify_free_property, FreeExtension, Path, PathMagma, Quiver};
