//! End-to-end tests of the compiled binary: exact output bytes, exit codes,
//! and determinism across runs.

use std::process::{Command, Output};

fn patdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patdist"))
        .args(args)
        .env_remove("PATDIST_STATE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn stderr_str(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 diagnostics")
}

fn json_value(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout_str(output)).expect("json output")
}

#[test]
fn kmp_distribution_is_an_exact_point_mass() {
    for n in ["0", "100", "500"] {
        let out = patdist(&["dist", "--algo", "kmp", "--n", n]);
        assert!(out.status.success());
        assert_eq!(
            stdout_str(&out),
            format!("value,probability\n{n},1.0000000000000000e0\n")
        );
    }
}

#[test]
fn dist_output_is_deterministic() {
    let args = [
        "dist",
        "--algo",
        "bndm",
        "--pattern",
        "ACGT",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--n",
        "50",
    ];
    let first = patdist(&args);
    let second = patdist(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_str(&first);
    assert!(text.starts_with("value,probability\n"));
    assert!(
        text.lines().count() > 2,
        "a real distribution has many rows"
    );
}

#[test]
fn dist_json_carries_metadata_and_moments() {
    let out = patdist(&[
        "dist",
        "--algo",
        "horspool",
        "--pattern",
        "AAC",
        "--alphabet",
        "AC",
        "--iid",
        "A=0.7,C=0.3",
        "--n",
        "20",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc = json_value(&out);
    assert_eq!(doc["algorithm"], "horspool");
    assert_eq!(doc["pattern"], "AAC");
    assert_eq!(doc["alphabet"], "AC");
    assert_eq!(doc["model"], "iid:A=0.7,C=0.3");
    assert_eq!(doc["n"], 20);
    let pmf = doc["pmf"].as_array().unwrap();
    let mass: f64 = pmf.iter().map(|row| row[1].as_f64().unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-9);
    let mean: f64 = pmf
        .iter()
        .map(|row| row[0].as_f64().unwrap() * row[1].as_f64().unwrap())
        .sum();
    assert!((mean - doc["mean"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn dist_support_stays_inside_the_window_cost_bounds() {
    let out = patdist(&[
        "dist",
        "--algo",
        "horspool",
        "--pattern",
        "ACGTAC",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--n",
        "100",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc = json_value(&out);
    let pmf = doc["pmf"].as_array().unwrap();
    let min = pmf.first().unwrap()[0].as_i64().unwrap();
    let max = pmf.last().unwrap()[0].as_i64().unwrap();
    // 95 window positions, each read costing 1 to 6 characters, and at least
    // ceil(95/6) windows examined: support must stay inside [16, 570]. The
    // exact endpoints are frozen from the enumeration-validated pipeline.
    assert!((16..=570).contains(&min) && (16..=570).contains(&max));
    assert_eq!((min, max), (32, 146));
}

#[test]
fn comparing_an_algorithm_with_itself_gives_a_point_mass_at_zero() {
    let out = patdist(&[
        "compare",
        "--algo-a",
        "bom",
        "--algo-b",
        "bom",
        "--pattern",
        "ACGT",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--n",
        "30",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc = json_value(&out);
    assert_eq!(doc["algorithm"], "bom");
    assert_eq!(doc["algorithm_b"], "bom");
    assert_eq!(doc["p_equal"], 1.0);
    assert_eq!(doc["pmf"], serde_json::json!([[0, 1.0]]));
}

#[test]
fn compare_probabilities_partition_the_mass() {
    let out = patdist(&[
        "compare",
        "--algo-a",
        "horspool",
        "--algo-b",
        "bndm",
        "--pattern",
        "ACGTAC",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--n",
        "100",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc = json_value(&out);
    let total = doc["p_less"].as_f64().unwrap()
        + doc["p_equal"].as_f64().unwrap()
        + doc["p_greater"].as_f64().unwrap();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn sweep_reproduces_known_small_automaton_sizes() {
    let out = patdist(&["sweep", "--alphabet", "ACGT", "--m", "2"]);
    assert!(out.status.success());
    assert_eq!(
        stdout_str(&out),
        "algorithm,m,patterns,full_space,min_states,avg_states,max_states\n\
         horspool,2,16,48,4,4.750,5\n\
         bndm,2,16,48,4,4.750,5\n\
         bom,2,16,48,4,4.000,4\n"
    );
}

#[test]
fn sweep_refuses_long_patterns_without_allow_large() {
    let out = patdist(&["sweep", "--alphabet", "ACGT", "--m", "6"]);
    assert!(!out.status.success());
    assert!(stderr_str(&out).contains("--allow-large"));
}

#[test]
fn verify_passes_on_a_small_space() {
    let out = patdist(&["verify", "--alphabet", "AC", "--max-m", "2", "--max-n", "6"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("cost: 18 cases passed"));
    assert!(text.contains("difference: 36 cases passed"));
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn verify_rejects_oversized_enumerations() {
    let out = patdist(&["verify", "--alphabet", "ACGT", "--max-n", "60"]);
    assert!(!out.status.success());
    assert!(stderr_str(&out).contains("lower --max-n"));
}

#[test]
fn simulate_is_deterministic_and_consistent_with_the_exact_mean() {
    let args = [
        "simulate",
        "--algo",
        "horspool",
        "--pattern",
        "ACGTAC",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--n",
        "100",
        "--samples",
        "20000",
        "--seed",
        "7",
        "--check",
    ];
    let first = patdist(&args);
    assert!(
        first.status.success(),
        "check failed: {}",
        stderr_str(&first)
    );
    let second = patdist(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(stderr_str(&first).contains("z-score"));
}

#[test]
fn stats_round_trips_a_dist_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    let args = [
        "dist",
        "--algo",
        "bom",
        "--pattern",
        "ACGTAC",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--n",
        "100",
    ];
    let out = patdist(&[&args[..], &["--out", csv.to_str().unwrap()]].concat());
    assert!(out.status.success());

    let json = patdist(&[&args[..], &["--format", "json"]].concat());
    let expected = json_value(&json)["mean"].as_f64().unwrap();

    let stats = patdist(&["stats", "--input", csv.to_str().unwrap()]);
    assert!(stats.status.success());
    let doc = json_value(&stats);
    assert!((doc["mean"].as_f64().unwrap() - expected).abs() < 1e-9);
    assert!(doc["quantiles"]["0.5"].as_i64().is_some());
}

#[test]
fn stats_rejects_unnormalized_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "value,probability\n3,0.25\n4,0.25\n").unwrap();
    let out = patdist(&["stats", "--input", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr_str(&out).contains("not a probability distribution"));
}

#[test]
fn model_source_flags_are_mutually_exclusive_and_required() {
    let missing = patdist(&[
        "dist",
        "--algo",
        "horspool",
        "--pattern",
        "AC",
        "--alphabet",
        "ACGT",
        "--n",
        "10",
    ]);
    assert!(!missing.status.success());
    assert!(stderr_str(&missing).contains("exactly one model source"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, "{}").unwrap();
    let both = patdist(&[
        "dist",
        "--algo",
        "horspool",
        "--pattern",
        "AC",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--markov",
        path.to_str().unwrap(),
        "--n",
        "10",
    ]);
    assert!(!both.status.success());
    assert!(stderr_str(&both).contains("exactly one model source"));
}

#[test]
fn markov_model_files_load_and_change_the_answer() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("order1.json");
    std::fs::write(
        &path,
        r#"{
            "alphabet": "AC",
            "order": 1,
            "dists": {
                "": [0.5, 0.5],
                "A": [0.9, 0.1],
                "C": [0.2, 0.8]
            }
        }"#,
    )
    .unwrap();
    let markov = patdist(&[
        "dist",
        "--algo",
        "horspool",
        "--pattern",
        "AAC",
        "--markov",
        path.to_str().unwrap(),
        "--n",
        "30",
        "--format",
        "json",
    ]);
    assert!(markov.status.success(), "{}", stderr_str(&markov));
    let uniform = patdist(&[
        "dist",
        "--algo",
        "horspool",
        "--pattern",
        "AAC",
        "--alphabet",
        "AC",
        "--iid",
        "uniform",
        "--n",
        "30",
        "--format",
        "json",
    ]);
    let m_mean = json_value(&markov)["mean"].as_f64().unwrap();
    let u_mean = json_value(&uniform)["mean"].as_f64().unwrap();
    assert!(
        (m_mean - u_mean).abs() > 0.1,
        "correlated text shifts the mean"
    );
}

#[test]
fn state_cap_flag_and_environment_are_honored() {
    let base = [
        "dist",
        "--algo",
        "bndm",
        "--pattern",
        "ACGTAC",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--n",
        "10",
    ];
    let capped = patdist(&[&["--state-cap", "10"], &base[..]].concat());
    assert!(!capped.status.success());
    assert!(stderr_str(&capped).contains("exceeded the cap"));

    let env_capped = Command::new(env!("CARGO_BIN_EXE_patdist"))
        .args(base)
        .env("PATDIST_STATE_CAP", "10")
        .output()
        .unwrap();
    assert!(!env_capped.status.success());

    // The flag wins over the environment.
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_patdist"))
        .args([&["--state-cap", "100000"], &base[..]].concat())
        .env("PATDIST_STATE_CAP", "10")
        .output()
        .unwrap();
    assert!(flag_wins.status.success());
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args = [
        "dist",
        "--algo",
        "horspool",
        "--pattern",
        "ACG",
        "--alphabet",
        "ACGT",
        "--iid",
        "uniform",
        "--n",
        "25",
    ];
    let stdout_run = patdist(&args);
    let file_run = patdist(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(file_run.status.success());
    assert!(file_run.stdout.is_empty());
    assert_eq!(
        std::fs::read(&path).unwrap(),
        stdout_run.stdout,
        "file and stdout payloads agree"
    );
}
