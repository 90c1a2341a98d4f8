//! Signal-observation game engine.
//!
//! The crate models two-player zero-sum betting games whose chance actions
//! reveal card "signals" (Leduc, Numeral211 Hold'em, and the HULH card
//! layer), builds hand abstractions over the players' signal observations
//! (lossless isomorphism, outcome isomorphisms, equity and EMD bucketing),
//! solves the abstracted games with CFR, and measures exploitability of the
//! lifted strategies in the original game.

pub mod abstraction;
pub mod canonical;
pub mod cards;
pub mod error;
pub mod evaluator;
pub mod games;
pub mod model;
pub mod solver;

pub use error::{Result, SoogError};
