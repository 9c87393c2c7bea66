//! Free groups, Stallings graphs, and fixed subgroups of endomorphisms.

pub mod constructions;
pub mod error;
pub mod factor_systems;
pub mod fixed_points;
pub mod morphisms;
pub mod stallings;
pub mod word;

pub use error::{Error, Result};
pub use morphisms::Endomorphism;
pub use stallings::{fold, SubgroupGraph};
pub use word::{Letter, Word};
