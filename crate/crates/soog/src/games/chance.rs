//! The uniform chance model: all games deal uniformly at random, so
//! transition weights ξ and reach weights π_c are exact rationals with
//! counting denominators.

use num_rational::Ratio;

use crate::canonical::binom;
use crate::error::{Result, SoogError};
use crate::games::spec::GameSpec;
use crate::model::Signal;

/// Number of legal composite deals at the chance node entering `phase`
/// (phase 1 is the joint hole deal).
pub fn outcome_count(game: &GameSpec, phase: usize) -> u64 {
    let d = game.deck.size() as u64;
    let h = game.holes as u64;
    if phase == 1 {
        return binom(d, h) * binom(d - h, h);
    }
    let dealt = 2 * h + game.board_sizes_at(phase - 1).iter().sum::<usize>() as u64;
    binom(d - dealt, game.board_per_phase[phase - 2] as u64)
}

/// ξ(θ, θ′): uniform over the legal one-phase extensions.
pub fn xi(game: &GameSpec, theta: &Signal, ext: &Signal) -> Result<Ratio<u64>> {
    if ext.phase() != theta.phase() + 1 || ext.deals[..theta.phase()] != theta.deals[..] {
        return Err(SoogError::Domain(
            "xi needs a one-phase extension of theta".into(),
        ));
    }
    Ok(Ratio::new(1, outcome_count(game, ext.phase())))
}

/// π_c(θ): the product of ξ along θ's prefix chain.
pub fn pi_c(game: &GameSpec, theta: &Signal) -> Ratio<u64> {
    let mut p = Ratio::new(1u64, 1);
    for phase in 1..=theta.phase() {
        p /= Ratio::from_integer(outcome_count(game, phase));
    }
    p
}

/// Number of full-length signals of the game.
pub fn full_signal_count(game: &GameSpec) -> u64 {
    (1..=game.phases()).map(|p| outcome_count(game, p)).product()
}
