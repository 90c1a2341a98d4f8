//! End-to-end pipeline tests against the library entry points.

use std::fs;

use soog::SoogError;
use soog_cli::commands::{cmd_build, cmd_count, cmd_eval, cmd_report, cmd_solve, CURVE_HEADER};
use soog_cli::config::ExperimentConfig;
use soog_cli::exit_code;

fn cfg(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_text(text).unwrap()
}

#[test]
fn leduc_counts_match_known_tables() {
    let raw = cmd_count(&cfg("game=leduc\nalgorithm=none"), None).unwrap();
    assert_eq!(raw, vec![6, 30]);
    let li = cmd_count(&cfg("game=leduc\nalgorithm=li"), None).unwrap();
    assert_eq!(li, vec![3, 9]);
    let paoi = cmd_count(&cfg("game=leduc\nalgorithm=paoi"), None).unwrap();
    assert_eq!(paoi, vec![3, 3]);
    let froi = cmd_count(&cfg("game=leduc\nalgorithm=froi"), None).unwrap();
    assert_eq!(froi, vec![3, 7]);
}

#[test]
fn count_writes_csv_when_out_given() {
    let dir = tempfile::tempdir().unwrap();
    cmd_count(&cfg("game=leduc\nalgorithm=li"), Some(dir.path())).unwrap();
    let text = fs::read_to_string(dir.path().join("counts-leduc-li.csv")).unwrap();
    assert_eq!(text, "phase,count\n1,3\n2,9\n");
}

#[test]
fn full_pipeline_on_leduc_identity_reaches_low_exploitability() {
    let dir = tempfile::tempdir().unwrap();
    let c = cfg(
        "game=leduc\nalgorithm=li\nscenario=symmetric\nvariant=plus\niterations=2000\n\
         checkpoints=500,2000",
    );
    cmd_build(&c, dir.path()).unwrap();
    cmd_solve(&c, dir.path()).unwrap();
    let eval = cmd_eval(&c, dir.path()).unwrap();
    let text = fs::read_to_string(&eval).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CURVE_HEADER);
    assert_eq!(lines.len(), 3);
    let last: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(&last[..4], &["symmetric", "li", "0", "2000"]);
    let eps: f64 = last[6].parse().unwrap();
    assert!(eps < 0.01, "final eps {eps}");
    let report = cmd_report(dir.path(), &[eval]).unwrap();
    let merged = fs::read_to_string(report).unwrap();
    assert_eq!(merged, text);
}

#[test]
fn asymmetric_solve_keeps_the_abstracted_seats() {
    let dir = tempfile::tempdir().unwrap();
    let c = cfg(
        "game=leduc\nalgorithm=paoi\nscenario=asymmetric\nvariant=vanilla\niterations=200",
    );
    cmd_build(&c, dir.path()).unwrap();
    let strategies = cmd_solve(&c, dir.path()).unwrap();
    assert_eq!(strategies.len(), 2);
    assert!(strategies[0].file_name().unwrap().to_str().unwrap().ends_with("p1.sost"));
    cmd_eval(&c, dir.path()).unwrap();
}

#[test]
fn build_and_solve_are_byte_deterministic() {
    let c = cfg("game=leduc\nalgorithm=paaemd\nbuckets=2,3\nseed=9\nvariant=vanilla\niterations=50");
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let pa = cmd_build(&c, a.path()).unwrap();
    let pb = cmd_build(&c, b.path()).unwrap();
    assert_eq!(fs::read(&pa).unwrap(), fs::read(&pb).unwrap());
    // Persisted maps round-trip to the in-memory value.
    let game = soog::games::GameSpec::leduc();
    let ix = soog::canonical::Indexer::build(&game);
    let built = soog_cli::commands::build_abstraction(&c, &ix).unwrap();
    assert_eq!(soog::abstraction::io::load_map(&pa).unwrap(), built);
    let sa = cmd_solve(&c, a.path()).unwrap();
    let sb = cmd_solve(&c, b.path()).unwrap();
    for (x, y) in sa.iter().zip(&sb) {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
}

#[test]
fn missing_upstream_artifacts_are_dependency_errors() {
    let dir = tempfile::tempdir().unwrap();
    let c = cfg("game=leduc\nalgorithm=li\niterations=10");
    let solve = cmd_solve(&c, dir.path()).unwrap_err();
    assert_eq!(exit_code(&solve), 3, "{solve}");
    let eval = cmd_eval(&c, dir.path()).unwrap_err();
    assert!(matches!(eval, SoogError::Dependency(_)));
    let report = cmd_report(dir.path(), &[dir.path().join("nope.csv")]).unwrap_err();
    assert!(matches!(report, SoogError::Dependency(_)));
}

#[test]
fn config_rejects_unknown_keys_and_bad_values() {
    for bad in [
        "frobnicate=1",
        "scenario=sideways",
        "algorithm=magic",
        "iterations=0",
        "checkpoints=5,5",
        "checkpoints=10,5",
    ] {
        let err = ExperimentConfig::from_text(&format!("game=leduc\n{bad}")).unwrap_err();
        assert_eq!(exit_code(&err), 1, "{bad}: {err}");
    }
    assert!(matches!(
        cmd_count(&cfg("algorithm=li"), None).unwrap_err(),
        SoogError::Parameter(_)
    ));
    assert!(cmd_count(&cfg("game=atlantis\nalgorithm=li"), None).is_err());
}

#[test]
fn parameterized_algorithms_require_their_parameters() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["game=leduc\nalgorithm=ehs", "game=leduc\nalgorithm=kroi"] {
        let err = cmd_build(&cfg(text), dir.path()).unwrap_err();
        assert!(matches!(err, SoogError::Parameter(_)), "{text}");
    }
    // With parameters, both build fine.
    cmd_build(&cfg("game=leduc\nalgorithm=ehs\nbuckets=none,4"), dir.path()).unwrap();
    cmd_build(&cfg("game=leduc\nalgorithm=kroi\nk=0,1"), dir.path()).unwrap();
}

#[test]
fn report_validates_headers_and_merges_rows() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("a-eval.csv");
    fs::write(&good, format!("{CURVE_HEADER}\nsymmetric,li,0,5,0.1,0.2,0.15,150\n")).unwrap();
    let bad = dir.path().join("b-eval.csv");
    fs::write(&bad, "nope\n").unwrap();
    let err = cmd_report(dir.path(), std::slice::from_ref(&bad)).unwrap_err();
    assert!(matches!(err, SoogError::Format(_)));
    let merged = cmd_report(dir.path(), &[good.clone(), good]).unwrap();
    let text = fs::read_to_string(merged).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(cmd_report(dir.path(), &[]).is_err());
}
