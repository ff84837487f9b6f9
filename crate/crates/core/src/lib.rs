//! Finite-group computation library.
//!
//! Everything here works on small, fully explicit groups: permutation groups
//! with a stabilizer chain for order/membership, and dense multiplication
//! tables once a group is small enough to enumerate.  On top of that sit
//! subgroup lattice utilities, chief series and the characteristic subgroups
//! G0/G1 cut out by centralizers of chief factors, fixed-point statistics for
//! module and factor actions, set-product width profiles, exact character
//! tables, a twisted-commutator calculus, and conjugacy-growth (lambda)
//! measurements including the SU(2) model case.

pub mod action;
pub mod autos;
pub mod chief;
pub mod chartable;
pub mod constructions;
pub mod cyclotomic;
pub mod elset;
pub mod error;
pub mod fpmod;
pub mod fpp;
pub mod group;
pub mod groupfile;
pub mod lambda;
pub mod perm;
pub mod rng;
pub mod stabchain;
pub mod su2;
pub mod subgroup;
pub mod table;
pub mod twisted;
pub mod width;
pub mod words;

pub use error::{Error, Result};
pub use group::Group;
pub use perm::Perm;
pub use table::GroupTable;
