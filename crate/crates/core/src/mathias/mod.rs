//! Growth-rate machinery: superexponential bounds as power-tower integers,
//! growth profiles of hereditarily finite sets, the fruitful-class closure
//! clauses, and the Zermelo tower with its substitution and descent test.

mod growth;
mod tower;
mod zermelo;

pub use growth::{
    fruitful_closure_check, growth_profile, min_depth, min_depth_vstage, FruitfulReport,
    FruitfulViolation, GrowthProfile,
};
pub use tower::{tower_b, tower_cmp, vcard, TowerCap, TowerInt};
pub use zermelo::{in_tower, terminal_descents, tower_sub, zermelo_stage};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MathiasError {
    #[error("sample member {0} is not transitive")]
    SampleNotTransitive(String),
    #[error("sample member {0} has rank above 4, outside V5")]
    SampleOutsideV5(String),
    #[error("descent count {count} exceeds the cap {cap}")]
    DescentCap { count: u64, cap: u64 },
}

/// Default cap on enumerated terminal descents.
pub const DEFAULT_DESCENT_CAP: u64 = 100_000;
