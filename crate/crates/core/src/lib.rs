//! Exact evaluation of iterated-residue formulas for Euler characteristics
//! of bundles on moduli spaces of parabolic bundles of rank r over a curve
//! with one marked point.

pub mod characters;
pub mod diagonal_trees;
pub mod euler_formulas;
pub mod error;
pub mod laurent_engine;
pub mod oracle;
pub mod rational;
pub mod root_system;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Q;

pub use characters::{character, CharacterSum, HighestWeight};
pub use diagonal_trees::{DiagonalBasis, OrderedTree};
pub use euler_formulas::{ChiResult, EulerQuery, EvalOptions};
pub use root_system::{CoVector, LatticePoint, Root, Vector, WallSpec};

/// Engine version recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
