//! Exact machinery for repairing almost-actions of amalgamated free products
//! and HNN extensions over finite subgroups into genuine permutation actions.
//!
//! The crate is layered bottom-up:
//!
//! * [`perm`]: permutations, the normalized Hamming metric, restriction to
//!   subsets, word evaluation and the metric toolkit in [`toolkit`].
//! * [`group`]: finite groups as multiplication tables, subgroup classes,
//!   coset actions and the Burnside semiring.
//! * [`burnside`]: restriction maps between Burnside semirings, restriction
//!   cones, decomposing maps, and the extension/alteration properties.
//! * [`cone`]: integer cones, relation lattices, the density vector, matching
//!   in cones, and kernel projection for primitive cones.
//! * [`conjugator`]: conjugating two close actions of equal type by a
//!   small-support permutation.
//! * [`oracle`]: repairing almost-actions of finite groups and reshaping an
//!   action to a prescribed nearby type.
//! * [`amalgam`]: the strict and flexible stabilization pipelines.

pub mod amalgam;
pub mod burnside;
pub mod cone;
pub mod conjugator;
pub mod group;
pub mod oracle;
pub mod perm;
pub mod toolkit;

pub use num_rational::Rational64;

pub use group::{BurnsideVector, FiniteGroup, GroupAction, Subgroup};
pub use perm::{hamming, GenMap, Perm, Word};

/// Rational helper used throughout tests and reports.
pub fn ratio(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}
