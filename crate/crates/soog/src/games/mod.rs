pub mod betting;
pub mod chance;
pub mod engine;
pub mod eval;
pub mod spec;

pub use betting::{BetState, BetStep};
pub use engine::{
    game_step, legal_actions, showdown_order, state_of, GameState, NextActor, ShowdownOrder,
    StepResult, TerminalPayoff,
};
pub use eval::{evaluate_hand, HandRank};
pub use spec::{EvalRule, GameSpec, IsoGroup};
