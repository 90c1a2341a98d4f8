//! A deliberately simple best-response oracle for Leduc-sized games.
//!
//! This walks the raw game tree card by card with none of the vectorized
//! machinery — no canonical boards, no card-removal tricks — so it serves as
//! an independent cross-check of the fast evaluator. The opponent is an
//! arbitrary policy given as a closure over (observation, betting line).

use crate::cards::Card;
use crate::games::betting::{BetState, BetStep};
use crate::games::evaluate_hand;
use crate::games::spec::GameSpec;
use crate::model::ObservationInfoset;

/// Opponent policy: action probabilities in the order of
/// `BetState::legal_tokens`.
pub type Policy<'a> = dyn Fn(&ObservationInfoset, &str) -> Vec<f64> + 'a;

/// Best-response value for `responder` (seat index) against `opp` by
/// exhaustive enumeration. Only single-hole-card, single-board-phase games
/// (Leduc) are supported.
pub fn naive_best_response(game: &GameSpec, responder: u8, opp: &Policy) -> f64 {
    assert_eq!(game.holes, 1, "naive oracle covers single-hole games");
    assert_eq!(game.board_per_phase, vec![1]);
    let deck: Vec<Card> = game.deck.cards().collect();
    let n = deck.len() as f64;
    let mut total = 0.0;
    for &rc in &deck {
        // Joint deal probability folded into the opponent reach.
        let reach: Vec<f64> = deck
            .iter()
            .map(|&oc| if oc == rc { 0.0 } else { 1.0 / (n * (n - 1.0)) })
            .collect();
        total += value(
            game,
            responder,
            opp,
            BetState::opening(game),
            String::new(),
            rc,
            None,
            &deck,
            &reach,
        );
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn value(
    game: &GameSpec,
    responder: u8,
    opp: &Policy,
    state: BetState,
    line: String,
    rc: Card,
    board: Option<Card>,
    deck: &[Card],
    reach: &[f64],
) -> f64 {
    let tokens = state.legal_tokens(game);
    let acting_responder = state.to_act == responder;
    let mut best = f64::NEG_INFINITY;
    let mut total = 0.0;
    for (a, &t) in tokens.iter().enumerate() {
        let mut next_line = line.clone();
        next_line.push(t.letter());
        // Opponent reach after this action: the opponent's probability of
        // taking it depends on their card.
        let next_reach: Vec<f64> = if acting_responder {
            reach.to_vec()
        } else {
            deck.iter()
                .zip(reach)
                .map(|(&oc, &r)| {
                    if r == 0.0 {
                        0.0
                    } else {
                        let obs = ObservationInfoset {
                            owner: state.to_act,
                            own: vec![oc],
                            board: board.iter().map(|&b| vec![b]).collect(),
                            phase: state.phase,
                        };
                        r * opp(&obs, &line)[a]
                    }
                })
                .collect()
        };
        let v = match state.step(t, game).unwrap() {
            BetStep::Continue(next) => value(
                game, responder, opp, next, next_line, rc, board, deck, &next_reach,
            ),
            BetStep::Fold { folder, committed } => {
                let amount = committed[folder as usize] as f64;
                let sign = if folder == responder { -amount } else { amount };
                sign * next_reach.iter().sum::<f64>()
            }
            BetStep::PhaseEnd(next) => {
                if state.phase < game.phases() {
                    // Deal each possible board card; opponent hands equal to
                    // it become impossible.
                    let mut next_line = next_line;
                    next_line.push('/');
                    let xi = 1.0 / (deck.len() - 2) as f64;
                    deck.iter()
                        .filter(|&&bc| bc != rc)
                        .map(|&bc| {
                            let mut r = next_reach.clone();
                            r[deck.iter().position(|&c| c == bc).unwrap()] = 0.0;
                            xi * value(
                                game,
                                responder,
                                opp,
                                next.next_phase(),
                                next_line.clone(),
                                rc,
                                Some(bc),
                                deck,
                                &r,
                            )
                        })
                        .sum()
                } else {
                    let pot = next.committed[0] as f64;
                    let bc = board.expect("showdown without a board");
                    let mine = evaluate_hand(&[rc], &[bc], game).unwrap();
                    deck.iter()
                        .zip(&next_reach)
                        .filter(|(_, &r)| r != 0.0)
                        .map(|(&oc, &r)| {
                            let theirs = evaluate_hand(&[oc], &[bc], game).unwrap();
                            pot * r
                                * match mine.cmp(&theirs) {
                                    std::cmp::Ordering::Greater => 1.0,
                                    std::cmp::Ordering::Equal => 0.0,
                                    std::cmp::Ordering::Less => -1.0,
                                }
                        })
                        .sum()
                }
            }
        };
        best = best.max(v);
        total += v;
    }
    if acting_responder {
        best
    } else {
        total
    }
}
