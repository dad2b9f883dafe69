use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bmv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmv")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write_real(dir: &Path, name: &str, rows: &[&[f64]]) -> PathBuf {
    let n = rows.len();
    let re: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    let im = vec![vec![0.0; n]; n];
    let doc = serde_json::json!({"n": n, "re": re, "im": im, "classification": "hermitian"});
    let path = dir.join(name);
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().unwrap())
}

fn gen(dir: &Path, kind: &str, n: usize, seed: u64, name: &str) -> PathBuf {
    let path = dir.join(name);
    let o = bmv(&["gen", "--kind", kind, "--n", &n.to_string(), "--seed", &seed.to_string(), "--out", s(&path)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn identity_pair_coefficients() {
    let d = tempfile::tempdir().unwrap();
    let i = write_real(d.path(), "i.json", &[&[1.0, 0.0], &[0.0, 1.0]]);
    let o = bmv(&["coeffs", "--a", s(&i), "--b", s(&i), "--p", "3", "--engine", "all"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rows = v["coefficients"].as_array().unwrap();
    for (row, want) in rows.iter().zip([2.0, 6.0, 6.0, 2.0]) {
        for engine in ["dp", "brute", "necklace"] {
            assert_eq!(num(&row[engine]), want);
        }
    }
    assert_eq!(num(&v["max_rel_deviation"]), 0.0);
}

#[test]
fn complementary_projections() {
    let d = tempfile::tempdir().unwrap();
    let a = write_real(d.path(), "a.json", &[&[1.0, 0.0], &[0.0, 0.0]]);
    let b = write_real(d.path(), "b.json", &[&[0.0, 0.0], &[0.0, 1.0]]);
    let o = bmv(&["coeffs", "--a", s(&a), "--b", s(&b), "--p", "4", "--engine", "all", "--exact"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let got: Vec<f64> = v["coefficients"].as_array().unwrap().iter().map(|r| num(&r["dp"])).collect();
    assert_eq!(got, vec![1.0, 0.0, 0.0, 0.0, 1.0]);
    let exact: Vec<String> = v["exact"].as_array().unwrap().iter().map(|r| r["value"]["num"].as_str().unwrap().to_string()).collect();
    assert_eq!(exact, ["1", "0", "0", "0", "1"]);
}

#[test]
fn random_files_engines_agree() {
    let d = tempfile::tempdir().unwrap();
    let a = gen(d.path(), "psd", 3, 1, "a.json");
    let b = gen(d.path(), "psd", 3, 2, "b.json");
    let o = bmv(&["coeffs", "--a", s(&a), "--b", s(&b), "--p", "8", "--engine", "all"]);
    assert_eq!(code(&o), 0);
    assert!(num(&json(&o)["max_rel_deviation"]) <= 1e-9);
}

#[test]
fn exact_integer_gram_files() {
    let d = tempfile::tempdir().unwrap();
    let a = d.path().join("a.json");
    let b = d.path().join("b.json");
    for (p, seed) in [(&a, "5"), (&b, "6")] {
        let o = bmv(&["gen", "--kind", "integer-gram", "--n", "2", "--seed", seed, "--exact", "--out", s(p)]);
        assert_eq!(code(&o), 0);
    }
    let o = bmv(&["coeffs", "--a", s(&a), "--b", s(&b), "--p", "6", "--engine", "all", "--exact", "--terms"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["exact"].as_array().unwrap().len(), 7);
    // c_{6,3} splits into four necklace classes
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.iter().filter(|t| t["r"] == 3).count(), 4);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let d = tempfile::tempdir().unwrap();
    let a = gen(d.path(), "psd", 2, 3, "a.json");
    let b = gen(d.path(), "psd", 2, 4, "b.json");
    let j = json(&bmv(&["coeffs", "--a", s(&a), "--b", s(&b), "--p", "5"]));
    let c = bmv(&["coeffs", "--a", s(&a), "--b", s(&b), "--p", "5", "--format", "csv"]);
    let text = String::from_utf8(c.stdout).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    for (row, line) in j["coefficients"].as_array().unwrap().iter().zip(lines) {
        let dp: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(dp.to_bits(), num(&row["dp"]).to_bits());
    }
}

#[test]
fn corrupted_file_names_its_path() {
    let d = tempfile::tempdir().unwrap();
    let bad = d.path().join("broken.json");
    std::fs::write(&bad, "{\"n\": 2, \"re\": [[1, 0]").unwrap();
    let good = write_real(d.path(), "i.json", &[&[1.0, 0.0], &[0.0, 1.0]]);
    let o = bmv(&["coeffs", "--a", s(&bad), "--b", s(&good), "--p", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains(s(&bad)));
}

#[test]
fn dimension_mismatch_is_an_input_error() {
    let d = tempfile::tempdir().unwrap();
    let a = write_real(d.path(), "a.json", &[&[1.0]]);
    let b = write_real(d.path(), "b.json", &[&[1.0, 0.0], &[0.0, 1.0]]);
    assert_eq!(code(&bmv(&["coeffs", "--a", s(&a), "--b", s(&b), "--p", "2"])), 2);
}

#[test]
fn lemma1_scalar_and_zero_cases() {
    let d = tempfile::tempdir().unwrap();
    let a = write_real(d.path(), "a.json", &[&[2.0]]);
    let b = write_real(d.path(), "b.json", &[&[1.0]]);
    let o = bmv(&["verify-lemma1", "--a", s(&a), "--b", s(&b), "--p", "2", "--r", "1"]);
    assert_eq!(code(&o), 0);
    let case = &json(&o)["cases"][0];
    assert!((num(&case["lhs"]) + 0.25).abs() < 1e-15);
    assert!((num(&case["rhs"]) + 0.25).abs() < 1e-15);

    let a = gen(d.path(), "pd", 3, 9, "pd.json");
    let z = write_real(d.path(), "z.json", &[&[0.0; 3], &[0.0; 3], &[0.0; 3]]);
    let o = bmv(&["verify-lemma1", "--a", s(&a), "--b", s(&z), "--p", "2", "--r", "2"]);
    assert_eq!(code(&o), 0);
    let case = &json(&o)["cases"][0];
    assert_eq!(num(&case["lhs"]), 0.0);
    assert_eq!(num(&case["rhs"]), 0.0);
}

#[test]
fn lemma1_random_batch() {
    let o = bmv(&["verify-lemma1", "--random", "50", "--dim", "4", "--seed", "3", "--pmax", "3", "--rmax", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["cases"].as_array().unwrap().len(), 50 * 3 * 4);
    assert_eq!(v["failures"], 0);
}

#[test]
fn lemma1_failure_exits_three() {
    // a zero tolerance cannot absorb rounding
    let o = bmv(&["verify-lemma1", "--random", "5", "--dim", "3", "--seed", "1", "--pmax", "3", "--rmax", "3", "--tol", "0"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn probe_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let a = gen(d.path(), "psd", 2, 11, "a.json");
    let b = gen(d.path(), "psd", 2, 12, "b.json");
    let o = bmv(&["probe-cm", "--mode", "exp", "--a", s(&a), "--b", s(&b)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["violations"].as_array().unwrap().len(), 0);

    let a3 = gen(d.path(), "psd", 3, 13, "a3.json");
    let b3 = gen(d.path(), "psd", 3, 14, "b3.json");
    assert_eq!(code(&bmv(&["probe-cm", "--mode", "exp", "--a", s(&a3), "--b", s(&b3), "--rmax", "5"])), 0);

    assert_eq!(code(&bmv(&["probe-cm", "--mode", "exp", "--a", s(&a), "--b", s(&b), "--grid", "0:1:0"])), 2);
    assert_eq!(code(&bmv(&["probe-cm", "--mode", "exp", "--a", s(&a), "--b", s(&b), "--grid", "nope"])), 2);
}

#[test]
fn diagonal_invpow_signs() {
    let d = tempfile::tempdir().unwrap();
    let a = write_real(d.path(), "a.json", &[&[1.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 0.5]]);
    let b = write_real(d.path(), "b.json", &[&[0.3, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 1.5]]);
    for p in ["1", "3", "2.5"] {
        let o = bmv(&["probe-cm", "--mode", "invpow", "--p", p, "--a", s(&a), "--b", s(&b), "--grid", "0:2:0.5"]);
        assert_eq!(code(&o), 0);
        let v = json(&o);
        for row in v["report"]["values"].as_array().unwrap() {
            for x in row.as_array().unwrap() {
                assert!(num(x) >= 0.0, "p = {p}: {x}");
            }
        }
    }
}

#[test]
fn mixture_file_probe() {
    let d = tempfile::tempdir().unwrap();
    let a = gen(d.path(), "psd", 2, 21, "a.json");
    let b = gen(d.path(), "psd", 2, 22, "b.json");
    let mix = d.path().join("mix.json");
    std::fs::write(&mix, r#"{"terms": [{"weight": 1.0, "decay": 0.5}, {"weight": 2.0, "decay": 1.5}]}"#).unwrap();
    let o = bmv(&["probe-cm", "--mode", "mixture", "--mixture", s(&mix), "--a", s(&a), "--b", s(&b)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["manifest"]["inputs"].as_array().unwrap().len(), 3);
    assert_eq!(code(&bmv(&["probe-cm", "--mode", "mixture", "--a", s(&a), "--b", s(&b)])), 2);
}

#[test]
fn search_term_certifies_and_writes_instances() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("record.json");
    let inst = d.path().join("inst");
    let o = bmv(&[
        "search", "--objective", "term", "--word", "AABBAB", "--n", "3", "--restarts", "10000", "--seed", "1", "--certify",
        "--out", s(&out), "--out-dir", s(&inst),
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("certified=true"));
    let rec: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rec["record"]["certification"]["status"], "rational-certified");
    assert!(num(&rec["record"]["certification"]["value"]["value"]) < 0.0);
    for f in ["a.json", "b.json", "exact_a.json", "exact_b.json"] {
        assert!(inst.join(f).exists(), "{f}");
    }
    assert_eq!(rec["manifest"]["outputs"].as_array().unwrap().len(), 4);

    // the exact instance files reproduce the negative value exactly
    let c = bmv(&["coeffs", "--a", s(&inst.join("exact_a.json")), "--b", s(&inst.join("exact_b.json")), "--p", "6", "--exact", "--terms"]);
    assert_eq!(code(&c), 0);
    let v = json(&c);
    let aabbab = v["terms"].as_array().unwrap().iter().find(|t| t["representative"] == "AABBAB").unwrap().clone();
    assert_eq!(aabbab["exact"]["num"], rec["record"]["exact_value"]["num"]);
    assert!(aabbab["exact"]["num"].as_str().unwrap().starts_with('-'));
}

#[test]
fn search_coefficient_two_by_two() {
    let o = bmv(&["search", "--objective", "coeff", "--n", "2", "--p", "6", "--r", "3", "--restarts", "64", "--seed", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(num(&v["record"]["best_value"]) >= -1e-10 * num(&v["record"]["scale"]));
}

#[test]
fn search_scalar_term_is_non_negative() {
    let o = bmv(&["search", "--objective", "term", "--word", "ABBAB", "--n", "1", "--restarts", "20", "--seed", "4"]);
    assert_eq!(code(&o), 0);
    assert!(num(&json(&o)["record"]["best_value"]) >= 0.0);
}

#[test]
fn search_rejects_bad_words_and_indices() {
    assert_eq!(code(&bmv(&["search", "--objective", "term", "--word", "AXB", "--n", "3"])), 2);
    assert_eq!(code(&bmv(&["search", "--objective", "term", "--word", "AAB", "--n", "3", "--r", "2"])), 2);
    assert_eq!(code(&bmv(&["search", "--objective", "coeff", "--n", "2", "--p", "3", "--r", "4"])), 2);
    assert_eq!(code(&bmv(&["search", "--objective", "coeff", "--n", "0", "--p", "3", "--r", "1"])), 2);
}

#[test]
fn oracle_quick_passes_and_replays() {
    let a = bmv(&["oracle-diff", "--suite", "quick", "--seed", "5"]);
    let b = bmv(&["oracle-diff", "--suite", "quick", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["pass"], true);
    assert_eq!(v["manifest"]["seeds"], serde_json::json!([5]));
    assert!(v["manifest"].get("duration_ms").is_none());
}

#[test]
fn thread_count_does_not_change_reports() {
    let one = Command::new(env!("CARGO_BIN_EXE_bmv"))
        .args(["oracle-diff", "--suite", "quick", "--seed", "8"])
        .env("BMV_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_bmv"))
        .args(["oracle-diff", "--suite", "quick", "--seed", "8"])
        .env("BMV_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn timing_is_opt_in() {
    let o = bmv(&["--timing", "oracle-diff", "--suite", "quick", "--seed", "5"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["manifest"]["duration_ms"].is_u64());
}
