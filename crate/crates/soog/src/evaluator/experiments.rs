//! Asymmetric and symmetric abstraction experiments.
//!
//! An abstraction α is measured by solving abstracted games and evaluating
//! the lifted strategies in the original game at checkpoints:
//!
//! * asymmetric: seat 1 plays α against a lossless (LI) seat 2 in one solve,
//!   and the mirrored solve gives the α seat-2 strategy; the two kept
//!   strategies are concatenated into the profile that is evaluated. This
//!   isolates α's loss from the opponent's abstraction.
//! * symmetric: both seats play α in a single solve.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::abstraction::AbstractionMap;
use crate::error::{Result, SoogError};
use crate::evaluator::{exploitability, ExploitabilityReport};
use crate::solver::{CfrSolver, CfrVariant, PublicGame};

#[derive(Clone, Copy, Debug)]
pub struct Checkpoint {
    pub iteration: u64,
    pub report: ExploitabilityReport,
}

#[derive(Clone, Debug)]
pub struct ExperimentCurve {
    pub scenario: String,
    pub algorithm: String,
    pub seed: u64,
    pub points: Vec<Checkpoint>,
}

impl ExperimentCurve {
    pub fn final_eps(&self) -> f64 {
        self.points.last().expect("empty curve").report.eps_chips
    }
}

fn checked(checkpoints: &[u64]) -> Result<()> {
    if checkpoints.is_empty() || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SoogError::Parameter(
            "checkpoints must be strictly increasing and non-empty".into(),
        ));
    }
    Ok(())
}

/// Solves seat 1 and seat 2 under `alpha` in separate solves against a
/// lossless opponent, and evaluates the concatenated lifted profile.
pub fn run_asymmetric(
    pg: &PublicGame,
    li: &AbstractionMap,
    alpha: &AbstractionMap,
    variant: CfrVariant,
    checkpoints: &[u64],
    algorithm: &str,
    seed: u64,
) -> Result<ExperimentCurve> {
    checked(checkpoints)?;
    let mut solve_a = CfrSolver::new(pg, [alpha, li], variant, [true, false])?;
    let mut solve_b = CfrSolver::new(pg, [li, alpha], variant, [false, true])?;
    let mut points = Vec::new();
    let mut done = 0u64;
    for &t in checkpoints {
        solve_a.run(t - done);
        solve_b.run(t - done);
        done = t;
        let report = exploitability(pg, &solve_a.average_strategy(0), &solve_b.average_strategy(1))?;
        points.push(Checkpoint {
            iteration: t,
            report,
        });
    }
    Ok(ExperimentCurve {
        scenario: "asymmetric".into(),
        algorithm: algorithm.into(),
        seed,
        points,
    })
}

/// Solves both seats under `alpha` in one solve and evaluates the lifted
/// profile.
pub fn run_symmetric(
    pg: &PublicGame,
    alpha: &AbstractionMap,
    variant: CfrVariant,
    checkpoints: &[u64],
    algorithm: &str,
    seed: u64,
) -> Result<ExperimentCurve> {
    checked(checkpoints)?;
    let mut solver = CfrSolver::new(pg, [alpha, alpha], variant, [true, true])?;
    let mut points = Vec::new();
    let mut done = 0u64;
    for &t in checkpoints {
        solver.run(t - done);
        done = t;
        let report =
            exploitability(pg, &solver.average_strategy(0), &solver.average_strategy(1))?;
        points.push(Checkpoint {
            iteration: t,
            report,
        });
    }
    Ok(ExperimentCurve {
        scenario: "symmetric".into(),
        algorithm: algorithm.into(),
        seed,
        points,
    })
}

/// Writes curves as CSV:
/// `scenario,algorithm,seed,iteration,eps1_chips,eps2_chips,eps_chips,eps_milliante`.
pub fn write_curves(path: &Path, curves: &[ExperimentCurve], ante: u32) -> Result<()> {
    let file = File::create(path).map_err(SoogError::Io)?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "scenario,algorithm,seed,iteration,eps1_chips,eps2_chips,eps_chips,eps_milliante"
    )
    .map_err(SoogError::Io)?;
    for c in curves {
        for p in &c.points {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                c.scenario,
                c.algorithm,
                c.seed,
                p.iteration,
                // eps1 is how much a best responder earns against the seat-1
                // strategy, i.e. the responder plays seat 2.
                p.report.br[1],
                p.report.br[0],
                p.report.eps_chips,
                p.report.eps_milliante(ante),
            )
            .map_err(SoogError::Io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::build_li;
    use crate::canonical::Indexer;
    use crate::games::GameSpec;

    #[test]
    fn leduc_curves_have_one_point_per_checkpoint() {
        let ix = Indexer::build(&GameSpec::leduc());
        let pg = PublicGame::build(&ix);
        let li = build_li(&ix);
        let sym = run_symmetric(&pg, &li, CfrVariant::Plus, &[10, 100], "li", 0).unwrap();
        assert_eq!(sym.points.len(), 2);
        assert!(sym.points[1].report.eps_chips <= sym.points[0].report.eps_chips);
        let asym = run_asymmetric(&pg, &li, &li, CfrVariant::Plus, &[10, 100], "li", 0).unwrap();
        assert_eq!(asym.points.len(), 2);
        assert!(run_symmetric(&pg, &li, CfrVariant::Plus, &[], "li", 0).is_err());
        assert!(run_symmetric(&pg, &li, CfrVariant::Plus, &[5, 5], "li", 0).is_err());
    }

    #[test]
    fn curve_csv_round_trip_format() {
        let ix = Indexer::build(&GameSpec::leduc());
        let pg = PublicGame::build(&ix);
        let li = build_li(&ix);
        let curve = run_symmetric(&pg, &li, CfrVariant::Vanilla, &[5], "li", 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curves.csv");
        write_curves(&path, &[curve], pg.game.ante).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scenario,algorithm,seed,iteration,eps1_chips,eps2_chips,eps_chips,eps_milliante"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&row[..4], &["symmetric", "li", "3", "5"]);
        assert_eq!(row.len(), 8);
    }
}
