//! Invariant suites shared by the standalone invariant tests and the gate
//! test: each function checks one family of structural properties and
//! returns a message describing the first violation, if any.

use num_rational::Ratio;

use soog::abstraction::{
    build_froi, build_kroi, check_refinement, transition_histogram, winrate_outcome_feature,
    AbstractionMap, FeatureContext,
};
use soog::canonical::Indexer;
use soog::games::engine::{game_step, legal_actions, showdown_order, state_of, StepResult};
use soog::games::{evaluate_hand, GameSpec, TerminalPayoff};
use soog::model::{extract_trace, splice, Actor, CanonicalIndex, History, Keep};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Equity in [0,1] for every class of every phase; winrate outcome counts and
/// transition histograms sum to their denominators (histograms normalize to
/// 1 exactly).
pub fn features_and_histograms_normalize(
    ctx: &FeatureContext,
    paoi: &AbstractionMap,
) -> Check {
    let ix = ctx.ix;
    let phases = ix.game.phases();
    for phase in 1..=phases {
        let eq = ctx.equity_table(phase);
        ensure(eq.len() == ix.count(phase), || {
            format!("phase {phase}: equity table covers {} classes", eq.len())
        })?;
        let (zero, one) = (Ratio::from_integer(0u64), Ratio::from_integer(1u64));
        for (i, e) in eq.iter().enumerate() {
            ensure(*e >= zero && *e <= one, || {
                format!("phase {phase} class {i}: equity {e} outside [0,1]")
            })?;
        }
    }
    for index in 0..ix.count(phases) as u32 {
        let f = winrate_outcome_feature(
            ctx,
            CanonicalIndex {
                phase: phases,
                index,
            },
        )
        .map_err(|e| e.to_string())?;
        ensure(
            f.counts.len() == 3 && f.denom > 0 && f.counts.iter().sum::<u64>() == f.denom,
            || format!("final-phase class {index}: outcome {:?}/{}", f.counts, f.denom),
        )?;
    }
    for phase in 1..phases {
        let next = &paoi.phases[phase];
        for index in 0..ix.count(phase) as u32 {
            let h = transition_histogram(ctx, CanonicalIndex { phase, index }, next)
                .map_err(|e| e.to_string())?;
            ensure(
                h.denom > 0 && h.counts.iter().sum::<u64>() == h.denom,
                || format!("phase {phase} class {index}: histogram {:?}/{}", h.counts, h.denom),
            )?;
            let total: f64 = h.to_f64().iter().sum();
            ensure((total - 1.0).abs() < 1e-12, || {
                format!("phase {phase} class {index}: histogram mass {total}")
            })?;
        }
    }
    Ok(())
}

/// k-ROI with larger recall refines k-ROI with smaller recall, phase by
/// phase, up to full recall (FROI).
pub fn kroi_refinement_monotone(ctx: &FeatureContext, paoi: &AbstractionMap) -> Check {
    let phases = ctx.ix.game.phases();
    let mut prev: Option<AbstractionMap> = None;
    for level in 0..phases {
        let k: Vec<usize> = (0..phases).map(|j| j.min(level)).collect();
        let map = build_kroi(ctx, paoi, &k).map_err(|e| e.to_string())?;
        if let Some(coarser) = &prev {
            let refines = check_refinement(&map, coarser).map_err(|e| e.to_string())?;
            ensure(refines.iter().all(|&r| r), || {
                format!("recall {k:?} does not refine the previous level: {refines:?}")
            })?;
        }
        prev = Some(map);
    }
    let froi = build_froi(ctx, paoi).map_err(|e| e.to_string())?;
    let last = prev.expect("at least one recall level");
    ensure(froi == last, || {
        "maximal recall vector does not reproduce full recall".into()
    })
}

/// Representatives and canonical indices are mutually inverse, and orbit
/// sizes sum to the raw observation count of every enumerable phase.
pub fn canonical_index_bijection(ix: &Indexer) -> Check {
    for phase in 1..=ix.enumerable_phases() {
        let mut orbit_total = 0u64;
        for index in 0..ix.count(phase) as u32 {
            let idx = CanonicalIndex { phase, index };
            let rep = ix.representative(idx);
            ensure(rep.phase == phase, || {
                format!("phase {phase} class {index}: representative phase {}", rep.phase)
            })?;
            let back = ix.canonical_index(&rep).map_err(|e| e.to_string())?;
            ensure(back == idx, || {
                format!("phase {phase} class {index}: round-trips to {back:?}")
            })?;
            orbit_total += ix.orbit_size(idx) as u64;
        }
        ensure(orbit_total == ix.raw_count(phase), || {
            format!(
                "phase {phase}: orbit sizes sum to {orbit_total}, raw count {}",
                ix.raw_count(phase)
            )
        })?;
    }
    Ok(())
}

/// Every history of the game (terminal or not) splits into complementary
/// traces that splice back to the original, for several keep selectors.
pub fn splice_extract_round_trip(game: &GameSpec) -> Check {
    let histories = all_histories(game)?;
    ensure(histories.len() > 1000, || {
        format!("only {} histories enumerated", histories.len())
    })?;
    let keeps = [
        Keep::Chance,
        Keep::NonChance,
        Keep::Only(Actor::Player(0)),
        Keep::AllExcept(Actor::Player(1)),
    ];
    for (h, _) in &histories {
        for keep in keeps {
            let t1 = extract_trace(h, keep);
            let t2 = extract_trace(h, keep.complement());
            for (a, b) in [(&t1, &t2), (&t2, &t1)] {
                let back = splice(a, b).map_err(|e| e.to_string())?;
                ensure(&back == h, || {
                    format!("splice under {keep:?} altered a history of length {}", h.len())
                })?;
            }
        }
    }
    Ok(())
}

/// Exhaustive terminal check: zero-sum utilities, survival flags, fold
/// amounts, and showdown payoffs consistent with the hand-rank order.
pub fn terminal_zero_sum_and_order_consistency(game: &GameSpec) -> Check {
    let mut folds = 0usize;
    let mut wins = 0usize;
    let mut ties = 0usize;
    for (h, payoff) in all_histories(game)? {
        let Some(p) = payoff else { continue };
        ensure(p.utilities[0] + p.utilities[1] == 0, || {
            format!("terminal utilities {:?} not zero-sum", p.utilities)
        })?;
        let state = state_of(&h, game).map_err(|e| e.to_string())?;
        let committed = state.bet.committed;
        if let Some(folder) = (0..2).find(|&i| p.survival[i as usize] == 0) {
            folds += 1;
            let f = folder as usize;
            ensure(p.utilities[f] == -(committed[f] as i64), || {
                format!("fold utilities {:?} vs committed {committed:?}", p.utilities)
            })?;
        } else {
            let theta = h.signal();
            let board: Vec<_> = theta.board().iter().flatten().copied().collect();
            let r0 = evaluate_hand(theta.holes(0, game.holes), &board, game)
                .map_err(|e| e.to_string())?;
            let r1 = evaluate_hand(theta.holes(1, game.holes), &board, game)
                .map_err(|e| e.to_string())?;
            let order = showdown_order(&theta, game).map_err(|e| e.to_string())?;
            ensure(order.leq(0, 1) == (r0 <= r1) && order.leq(1, 0) == (r1 <= r0), || {
                "showdown order disagrees with direct hand evaluation".into()
            })?;
            ensure(committed[0] == committed[1], || {
                format!("showdown with unequal commitments {committed:?}")
            })?;
            let c = committed[0] as i64;
            let expect = match r0.cmp(&r1) {
                std::cmp::Ordering::Greater => [c, -c],
                std::cmp::Ordering::Less => [-c, c],
                std::cmp::Ordering::Equal => [0, 0],
            };
            if expect[0] == 0 {
                ties += 1;
            } else {
                wins += 1;
            }
            ensure(p.utilities == expect, || {
                format!("showdown utilities {:?}, expected {expect:?}", p.utilities)
            })?;
        }
    }
    ensure(folds > 0 && wins > 0 && ties > 0, || {
        format!("terminal coverage too thin: folds {folds}, wins {wins}, ties {ties}")
    })
}

/// All histories of the game, with the terminal payoff where one exists.
fn all_histories(game: &GameSpec) -> Result<Vec<(History, Option<TerminalPayoff>)>, String> {
    let mut out = Vec::new();
    let mut stack = vec![History::empty()];
    while let Some(h) = stack.pop() {
        for a in legal_actions(&h, game).map_err(|e| e.to_string())? {
            match game_step(&h, a, game).map_err(|e| e.to_string())? {
                StepResult::Ongoing(next) => {
                    out.push((next.clone(), None));
                    stack.push(next);
                }
                StepResult::Terminal(next, p) => out.push((next, Some(p))),
            }
        }
    }
    Ok(out)
}
