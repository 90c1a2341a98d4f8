//! Abstracted-game construction and CFR solving.

pub mod cfr;
pub mod public;
pub mod strategy;
pub mod values;

pub use cfr::{CfrSolver, CfrVariant};
pub use public::{BetEdge, BetNode, BoardNode, PublicGame};
pub use strategy::StrategyProfile;
