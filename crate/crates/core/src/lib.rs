//! Finite laboratory for interlacing graphs and the concentration, cut-stability
//! and tree constructions built on top of them.
//!
//! Everything here works on finite windows of positive integers. Indices that
//! appear in public interfaces (subset entries, cut positions, permutation
//! images) are 1-based.

pub mod combinatorics;
pub mod concentration;
pub mod cut_stability;
mod error;
pub mod interlacing;
pub mod spaces;
pub mod trees;

pub use combinatorics::{Cut, KSubset, OrderPreservingPermutation, Window};
pub use concentration::{ConcentrationReport, ModulusTable, PairMode, Ratio, Strategy};
pub use cut_stability::CutRatioReport;
pub use error::{Error, Result};
pub use spaces::{MapRule, Point, PointMap, Space};
pub use trees::{DecompositionResult, Tree};

/// Default cap on the number of states an exhaustive enumeration may visit.
pub const DEFAULT_STATE_CAP: u128 = 1_000_000;
