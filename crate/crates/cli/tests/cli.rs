mod common;

use common::normsym;
use normsym::allornothing::DichotomyReport;
use normsym::fixtures::ComparisonReport;
use normsym_cli::commands::{
    ChevalleyReport, IwasawaReport, LemmaReport, PredictReport, SimulationReport, TailReport,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn round_trip<T: DeserializeOwned + Serialize + PartialEq + std::fmt::Debug>(args: &[&str]) -> T {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let run = normsym(&full);
    let parsed: T = serde_json::from_str(&run.stdout).expect("valid report json");
    let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
    assert_eq!(again, run.stdout, "{args:?}");
    let reparsed: T = serde_json::from_str(&again).unwrap();
    assert_eq!(reparsed, parsed);
    parsed
}

#[test]
fn json_reports_round_trip() {
    let p: PredictReport = round_trip(&[
        "predict", "--ell", "3", "--t", "1", "--s", "1", "--n", "0..3",
    ]);
    assert_eq!(p.distributions.len(), 4);
    assert_eq!(p.reference.unwrap().table, 1);
    let c: ComparisonReport = round_trip(&["compare", "--table", "3"]);
    assert_eq!(c.rows.len(), 3);
    let s: Vec<DichotomyReport> = round_trip(&[
        "all-or-nothing",
        "--ell",
        "5",
        "--n",
        "3",
        "--sampled",
        "500",
    ]);
    assert_eq!(s.len(), 2);
    let _: Vec<DichotomyReport> = round_trip(&["all-or-nothing", "--ell", "7", "--n", "3"]);
    let _: LemmaReport = round_trip(&["lemmas", "--ell", "3,5,7", "--n", "3"]);
    let _: SimulationReport =
        round_trip(&["simulate", "--ell", "3", "--n", "2", "--samples", "100"]);
    let _: TailReport = round_trip(&["tail", "--ell", "5", "--t", "2", "--N", "3"]);
    let _: ChevalleyReport = round_trip(&["chevalley", "--ell", "3", "--e-exp", "4"]);
    let _: IwasawaReport = round_trip(&["iwasawa", "--e", "1,5,20", "--ell", "2", "--s", "1"]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["lemmas", "--ell", "8..10", "--n", "3"][..],
        &["lemmas", "--ell", "3", "--n", "5..3"],
        &["lemmas", "--ell", "3", "--n", "2"],
        &[
            "all-or-nothing",
            "--ell",
            "3",
            "--n",
            "3",
            "--exhaustive",
            "--sampled",
            "5",
        ],
        &["all-or-nothing", "--ell", "3", "--n", "1"],
        &["all-or-nothing", "--ell", "3", "--n", "3", "--sampled", "0"],
        &["predict", "--ell", "4", "--n", "1"],
        &["predict", "--ell", "3", "--t", "1", "--s", "2", "--n", "1"],
        &["compare", "--table", "7"],
        &["tail", "--ell", "3", "--N", "1"],
        &["iwasawa", "--e", "1", "--ell", "2", "--s", "1"],
        &["frobnicate"],
    ] {
        let run = normsym(args);
        assert_eq!(run.code, 2, "{args:?}");
        assert!(!run.stderr.is_empty());
    }
}

#[test]
fn budget_exceeded_suggests_sampling() {
    let run = normsym(&[
        "all-or-nothing",
        "--ell",
        "37",
        "--n",
        "4",
        "--budget",
        "1000",
    ]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--sampled"), "{}", run.stderr);
    assert!(run.stdout.is_empty());
}

#[test]
fn boundary_prime_is_annotated_not_failed() {
    let run = normsym(&["all-or-nothing", "--ell", "7", "--n", "3", "--exhaustive"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("boundary case"));
    assert!(run.stdout.contains("has rank 2"));
}

#[test]
fn lemmas_skip_out_of_scope_primes() {
    let run = normsym(&["lemmas", "--ell", "7,11", "--n", "3..4"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("ell=7: out of theorem scope"));
    assert!(run
        .stdout
        .contains("summary: 2 passed, 0 failed, 1 skipped"));
}

#[test]
fn verification_failures_exit_one() {
    assert_eq!(
        normsym(&["iwasawa", "--e", "1,2,6", "--ell", "2", "--s", "2"]).code,
        1
    );
    let run = normsym(&["chevalley", "--ell", "3", "--e-exp", "1", "--E-exp", "1"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("not an integer"));
}

#[test]
fn sampled_seed_changes_draws_but_not_verdict() {
    let a = normsym(&[
        "all-or-nothing",
        "--ell",
        "11",
        "--n",
        "4",
        "--sampled",
        "3000",
        "--seed",
        "1",
    ]);
    let b = normsym(&[
        "all-or-nothing",
        "--ell",
        "11",
        "--n",
        "4",
        "--sampled",
        "3000",
        "--seed",
        "2",
    ]);
    assert_eq!((a.code, b.code), (0, 0));
    assert!(a.stdout.contains("seed=1") && b.stdout.contains("seed=2"));
}
