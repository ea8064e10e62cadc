//! Finite covering combinatorics for uniform spaces and their automorphism
//! groups: refinement algebra, uniform complexity, bipartite matchings,
//! matching and complexity invariants of group actions, covering numbers of
//! finite metric spaces, and word-count entropy of subshifts.

pub mod covering;
pub mod dynamics;
pub mod error;
pub mod guards;
pub mod matching;
pub mod metric;
pub mod oracle;
pub mod perm;
pub mod rational;
pub mod sample;
pub mod setcover;
pub mod subset;
pub mod symbolic;
pub mod uniformity;

pub use covering::{Covering, GroundSet, PartialMap};
pub use error::{Error, Result};
pub use guards::Guards;
pub use perm::Perm;
pub use rational::Rational;
pub use subset::Subset;
pub use uniformity::{Partition, UniformStructure};
