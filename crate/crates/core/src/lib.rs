//! A workbench for permutation-invariant query problems: type profiles and
//! sampling algorithms, the row-chopping hybrid construction, exact adversary
//! bounds on explicit relations, a small phase-oracle quantum query simulator
//! with polynomial extraction, influence-driven classical simulation, and the
//! Hamming-weight Boolean case.

pub mod adversary;
pub mod boolean;
pub mod chopper;
pub mod derand;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod poly;
pub mod qsim;
pub mod rng;
pub mod stats;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use exact::Exponent;
pub use types::{InputWord, RowArray, SymmetricFunction, TypeProfile};
