//! Pipeline commands: count, build, solve, eval, report.
//!
//! Artifacts live in the output directory under deterministic names derived
//! from the configuration, so downstream commands can locate upstream
//! outputs and fail with the expected path when one is missing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use soog::abstraction::io::{load_map, save_map};
use soog::abstraction::{
    build_ehs, build_froi, build_kroi, build_li, build_paaemd, build_paoi, AbstractionMap,
    FeatureContext,
};
use soog::canonical::{infoset_counts, Indexer};
use soog::evaluator::experiments::{write_curves, Checkpoint, ExperimentCurve};
use soog::evaluator::exploitability;
use soog::games::GameSpec;
use soog::solver::{CfrSolver, PublicGame, StrategyProfile};
use soog::{Result, SoogError};

use crate::config::{Algorithm, ExperimentConfig, Scenario};

pub const CURVE_HEADER: &str =
    "scenario,algorithm,seed,iteration,eps1_chips,eps2_chips,eps_chips,eps_milliante";

fn game_of(cfg: &ExperimentConfig) -> Result<GameSpec> {
    let id = cfg.game.as_deref().ok_or_else(|| {
        SoogError::Parameter("no game selected (use --game or a config file)".into())
    })?;
    GameSpec::by_id(id)
}

/// Builds the configured abstraction map.
pub fn build_abstraction(cfg: &ExperimentConfig, ix: &Indexer) -> Result<AbstractionMap> {
    let need_buckets = || {
        cfg.buckets.clone().ok_or_else(|| {
            SoogError::Parameter(format!(
                "algorithm {} needs buckets=<n,...|none> per phase",
                cfg.algorithm.name()
            ))
        })
    };
    match cfg.algorithm {
        Algorithm::None => Err(SoogError::Parameter(
            "algorithm \"none\" counts raw observations and has no abstraction map".into(),
        )),
        Algorithm::Li => Ok(build_li(ix)),
        Algorithm::Paoi => Ok(build_paoi(&FeatureContext::new(ix))),
        Algorithm::Kroi => {
            let k = cfg.k.clone().ok_or_else(|| {
                SoogError::Parameter("algorithm kroi needs k=<recall,...> per phase".into())
            })?;
            let ctx = FeatureContext::new(ix);
            let paoi = build_paoi(&ctx);
            build_kroi(&ctx, &paoi, &k)
        }
        Algorithm::Froi => {
            let ctx = FeatureContext::new(ix);
            let paoi = build_paoi(&ctx);
            build_froi(&ctx, &paoi)
        }
        Algorithm::Ehs => {
            let n: Vec<Option<u32>> = need_buckets()?
                .into_iter()
                .map(|b| b.map(|v| v as u32))
                .collect();
            build_ehs(&FeatureContext::new(ix), &n)
        }
        Algorithm::Paaemd => {
            build_paaemd(&FeatureContext::new(ix), &need_buckets()?, cfg.seed)
        }
    }
}

/// Per-phase class counts: raw observation counts for `none`, bucket counts
/// otherwise. Prints them space-separated and optionally writes a CSV.
pub fn cmd_count(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Vec<u64>> {
    let game = game_of(cfg)?;
    let ix = Indexer::build(&game);
    let counts: Vec<u64> = match cfg.algorithm {
        Algorithm::None => (1..=game.phases())
            .map(|p| infoset_counts(&ix, p).map(|(raw, _)| raw))
            .collect::<Result<_>>()?,
        _ => build_abstraction(cfg, &ix)?
            .bucket_counts()
            .into_iter()
            .map(u64::from)
            .collect(),
    };
    println!(
        "{}",
        counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    if let Some(out) = out {
        fs::create_dir_all(out)?;
        let path = out.join(format!(
            "counts-{}-{}.csv",
            game.id,
            cfg.algorithm.name()
        ));
        let mut w = fs::File::create(&path)?;
        writeln!(w, "phase,count")?;
        for (p, c) in counts.iter().enumerate() {
            writeln!(w, "{},{}", p + 1, c)?;
        }
    }
    Ok(counts)
}

fn map_path(out: &Path, game: &GameSpec, cfg: &ExperimentConfig) -> PathBuf {
    out.join(format!(
        "{}-{}-s{}.soab",
        game.id,
        cfg.algorithm.name(),
        cfg.seed
    ))
}

fn stem(game: &GameSpec, cfg: &ExperimentConfig) -> String {
    format!(
        "{}-{}-{}-s{}",
        game.id,
        cfg.algorithm.name(),
        cfg.scenario.name(),
        cfg.seed
    )
}

fn strategy_path(out: &Path, stem: &str, t: u64, seat: u8) -> PathBuf {
    out.join(format!("{stem}-t{t}-p{}.sost", seat + 1))
}

/// Builds the configured abstraction and persists it. Deterministic:
/// identical config and seed produce byte-identical files.
pub fn cmd_build(cfg: &ExperimentConfig, out: &Path) -> Result<PathBuf> {
    let game = game_of(cfg)?;
    let ix = Indexer::build(&game);
    let map = build_abstraction(cfg, &ix)?;
    map.validate()?;
    fs::create_dir_all(out)?;
    let path = map_path(out, &game, cfg);
    save_map(&map, &path)?;
    println!("wrote {}", path.display());
    Ok(path)
}

/// Solves the abstracted game and saves the lifted-ready strategies at every
/// checkpoint, plus a checkpoint log CSV.
pub fn cmd_solve(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let game = game_of(cfg)?;
    let ix = Indexer::build(&game);
    let pg = PublicGame::build(&ix);
    let map = load_map(&map_path(out, &game, cfg))?;
    let schedule = cfg.schedule();
    let stem = stem(&game, cfg);
    let mut paths = Vec::new();
    let mut save = |s: &StrategyProfile, t: u64| -> Result<()> {
        let path = strategy_path(out, &stem, t, s.player);
        s.save(&pg, &path)?;
        paths.push(path);
        Ok(())
    };
    match cfg.scenario {
        Scenario::Symmetric => {
            let mut solver = CfrSolver::new(&pg, [&map, &map], cfg.variant, [true, true])?;
            let mut done = 0u64;
            for &t in &schedule {
                solver.run(t - done);
                done = t;
                save(&solver.average_strategy(0), t)?;
                save(&solver.average_strategy(1), t)?;
            }
        }
        Scenario::Asymmetric => {
            // Each seat's strategy comes from its own solve against a
            // lossless opponent; only the abstracted seat is kept.
            let li = build_li(&ix);
            let mut solve_a = CfrSolver::new(&pg, [&map, &li], cfg.variant, [true, false])?;
            let mut solve_b = CfrSolver::new(&pg, [&li, &map], cfg.variant, [false, true])?;
            let mut done = 0u64;
            for &t in &schedule {
                solve_a.run(t - done);
                solve_b.run(t - done);
                done = t;
                save(&solve_a.average_strategy(0), t)?;
                save(&solve_b.average_strategy(1), t)?;
            }
        }
    }
    let log = out.join(format!("{stem}-solve.csv"));
    let mut w = fs::File::create(&log)?;
    writeln!(w, "scenario,algorithm,seed,iteration")?;
    for &t in &schedule {
        writeln!(
            w,
            "{},{},{},{t}",
            cfg.scenario.name(),
            cfg.algorithm.name(),
            cfg.seed
        )?;
    }
    println!("wrote {} strategies under {}", paths.len(), out.display());
    Ok(paths)
}

/// Evaluates the saved strategies in the original game at every checkpoint
/// and writes the exploitability curve CSV.
pub fn cmd_eval(cfg: &ExperimentConfig, out: &Path) -> Result<PathBuf> {
    let game = game_of(cfg)?;
    let ix = Indexer::build(&game);
    let pg = PublicGame::build(&ix);
    let stem = stem(&game, cfg);
    let mut points = Vec::new();
    for t in cfg.schedule() {
        let load = |seat: u8| -> Result<StrategyProfile> {
            let path = strategy_path(out, &stem, t, seat);
            StrategyProfile::load(&pg, &path).map_err(|e| {
                SoogError::Dependency(format!("strategy {}: {e}", path.display()))
            })
        };
        let report = exploitability(&pg, &load(0)?, &load(1)?)?;
        points.push(Checkpoint {
            iteration: t,
            report,
        });
    }
    let curve = ExperimentCurve {
        scenario: cfg.scenario.name().into(),
        algorithm: cfg.algorithm.name().into(),
        seed: cfg.seed,
        points,
    };
    let path = out.join(format!("{stem}-eval.csv"));
    write_curves(&path, &[curve], game.ante)?;
    println!("wrote {}", path.display());
    Ok(path)
}

/// Merges evaluation curve CSVs into one comparison CSV.
pub fn cmd_report(out: &Path, inputs: &[PathBuf]) -> Result<PathBuf> {
    if inputs.is_empty() {
        return Err(SoogError::Parameter(
            "report needs at least one eval CSV".into(),
        ));
    }
    let mut rows = Vec::new();
    for path in inputs {
        let text = fs::read_to_string(path).map_err(|e| {
            SoogError::Dependency(format!("eval curves {}: {e}", path.display()))
        })?;
        let mut lines = text.lines();
        if lines.next() != Some(CURVE_HEADER) {
            return Err(SoogError::Format(format!(
                "{}: unexpected curve header",
                path.display()
            )));
        }
        rows.extend(lines.map(str::to_string));
    }
    fs::create_dir_all(out)?;
    let path = out.join("report.csv");
    let mut w = fs::File::create(&path)?;
    writeln!(w, "{CURVE_HEADER}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    println!("wrote {}", path.display());
    Ok(path)
}
