// The `rdm-determined` binary end to end: exit codes, reports and the
// files it reads and writes.

use std::path::{Path, PathBuf};
use std::process::Command;

use rdm_determined::cli::io::StateFile;
use rdm_determined::ghz::GhzParams;
use rdm_determined::{DensityMatrix, PureState, C64};
use serde_json::Value;

struct Run {
    code: i32,
    report: Value,
    stderr: String,
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_rdm-determined"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&out.stdout);
    Run {
        code: out.status.code().expect("exited normally"),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn write(dir: &Path, name: &str, f: StateFile) -> PathBuf {
    let p = dir.join(name);
    f.write(&p).unwrap();
    p
}

fn ghz_file(dir: &Path, name: &str, n: usize, p: f64) -> String {
    let psi = GhzParams::from_weight(n, p, 0.0).unwrap().state();
    write(dir, name, StateFile::Pure(psi))
        .to_string_lossy()
        .into_owned()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn rdm_of_ghz() {
    let dir = tempfile::tempdir().unwrap();
    let path = ghz_file(dir.path(), "ghz.json", 3, 0.5);
    let r = run(dir.path(), &["rdm", &path]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rdms = r.report["result"]["rdms"].as_array().unwrap();
    assert_eq!(rdms.len(), 3);
    for part in rdms {
        let m = part["matrix"].as_array().unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, z) in row.as_array().unwrap().iter().enumerate() {
                let want = if i == j && (i == 0 || i == 3) {
                    0.5
                } else {
                    0.0
                };
                assert!((f(&z[0]) - want).abs() < 1e-12 && f(&z[1]).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn rdm_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("bad.json"),
        r#"{"version": 1, "kind": "pure", "n": 2, "data": [[1,0],[1,0],[0,0],[0,0]]}"#,
    )
    .unwrap();
    let r = run(d, &["rdm", "bad.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("normalization"), "{}", r.stderr);

    write(
        d,
        "one.json",
        StateFile::Pure(PureState::basis(1, 0).unwrap()),
    );
    let r = run(d, &["rdm", "one.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("n ≥ 2 required"), "{}", r.stderr);

    std::fs::write(d.join("garbled.json"), "{\"version\": 1,\n \"kind\": pure}").unwrap();
    let r = run(d, &["rdm", "garbled.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "{}", r.stderr);

    let r = run(d, &["rdm", "missing.json"]);
    assert_eq!(r.code, 2);
}

#[test]
fn verdict_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ghz = ghz_file(d, "ghz.json", 3, 0.5);
    let r = run(d, &["verdict", &ghz]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.report["result"]["witness_family"].is_object());
    assert_eq!(r.report["result"]["determined"], Value::Bool(false));

    write(d, "w.json", StateFile::Pure(PureState::w_state(3).unwrap()));
    let r = run(d, &["verdict", "w.json"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["result"]["determined"], Value::Bool(true));

    // GHZ-like with q₀ − q₁ ≈ 1e-9 and a small off-GHZ admixture: too
    // close to call either way.
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    let p: f64 = 0.5 + 5e-10;
    amps[0b000] = C64::new(p.sqrt(), 0.0);
    amps[0b111] = C64::new((1.0 - p).sqrt(), 0.0);
    amps[0b010] = C64::new(1e-6, 0.0);
    amps[0b101] = C64::new(1e-6, 0.0);
    let near = PureState::from_unnormalized(3, amps).unwrap();
    write(d, "near.json", StateFile::Pure(near));
    let r = run(d, &["verdict", "near.json"]);
    assert_eq!(r.code, 4, "{}", r.stderr);
    assert!(!r.report["result"]["ghz_certificate"]["diagnostics"].is_null());

    write(
        d,
        "rho.json",
        StateFile::Density(DensityMatrix::maximally_mixed(3).unwrap()),
    );
    assert_eq!(run(d, &["verdict", "rho.json"]).code, 2);
}

#[test]
fn partner_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (p, overlap) in [(0.5, 0.0), (0.8, 0.6)] {
        let r = run(
            d,
            &[
                "family",
                "--n",
                "3",
                "--p",
                &p.to_string(),
                "--z",
                "0",
                "--out",
                "fam",
            ],
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        let r = run(
            d,
            &[
                "partner",
                "fam/ghz.json",
                "fam/member_00.json",
                "--out",
                "partner.json",
            ],
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        let res = &r.report["result"];
        assert!((f(&res["overlap"]) - overlap).abs() < 1e-9, "{res}");
        assert!(f(&res["rdm_distance"]) < 1e-10);
        if p == 0.5 {
            assert!((f(&res["a_star"]) - 2.0).abs() < 1e-9);
        }
        let (written, _) = StateFile::read(&d.join("partner.json")).unwrap();
        assert!(matches!(written, StateFile::Pure(_)));
    }

    // ω shares nothing with ψ.
    write(
        d,
        "mixed.json",
        StateFile::Density(DensityMatrix::maximally_mixed(3).unwrap()),
    );
    let r = run(d, &["partner", "fam/ghz.json", "mixed.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("qubit"), "{}", r.stderr);
}

#[test]
fn sweep_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let r = run(d, &["sweep", "--n", "3", "--samples", "50", "--seed", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &r.report["result"];
    assert_eq!(res["anomalies"], 0);
    assert_eq!(res["ghz"]["undetermined"], res["ghz"]["count"]);
    assert_eq!(res["haar"]["determined"], res["haar"]["count"]);
    assert_eq!(res["rank2_pass"], res["ghz"]["count"]);

    // Two-qubit pure states all have a Schmidt form a|00⟩ + b|11⟩, so
    // every sample is GHZ-type, Haar ones included.
    let r = run(d, &["sweep", "--n", "2", "--samples", "10", "--seed", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["result"]["anomalies"], 0);
    assert_eq!(r.report["result"]["ghz"]["undetermined"], 5);
    assert_eq!(r.report["result"]["haar"]["undetermined"], 5);

    assert_eq!(run(d, &["sweep", "--n", "7"]).code, 2);
}

#[test]
fn proofcheck_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let r = run(d, &["proofcheck", "--n", "3", "--z", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(f(&r.report["result"]["max_residual"]) <= 1e-9);
    assert!(f(&r.report["result"]["main_constraint"]) <= 1e-9);

    let r = run(d, &["proofcheck", "--n", "3", "--z", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["result"]["env_dim"], 1);
    assert!(f(&r.report["result"]["max_residual"]) <= 1e-12);

    let r = run(
        d,
        &[
            "proofcheck",
            "--n",
            "4",
            "--a",
            "0.894427190999916",
            "--b",
            "0.447213595499958",
            "--z",
            "0,0.5",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(f(&r.report["result"]["max_residual"]) <= 1e-9);
    assert!(f(&r.report["result"]["main_constraint"]) <= 1e-9);

    assert_eq!(run(d, &["proofcheck", "--n", "3", "--z", "1.5"]).code, 2);
}

#[test]
fn family_writes_members() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let r = run(
        d,
        &[
            "family", "--n", "4", "--p", "0.3", "--theta", "1.2", "--out", "fam",
        ],
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let members: Vec<_> = std::fs::read_dir(d.join("fam"))
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("member_"))
        .collect();
    assert_eq!(members.len(), 9);
    for m in members {
        let (file, _) = StateFile::read(&m.path()).unwrap();
        assert_eq!(file.n(), 4);
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["frobnicate"]).code, 2);
    assert_eq!(run(dir.path(), &["sweep"]).code, 2);
    assert_eq!(
        run(dir.path(), &["sweep", "--n", "3", "--restarts", "0"]).code,
        2
    );
}

// Same inputs and seed give the same report, apart from wall-clock time.
#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = run(d, &["sweep", "--n", "3", "--samples", "8", "--seed", "4"]);
    let b = run(d, &["sweep", "--n", "3", "--samples", "8", "--seed", "4"]);
    assert_eq!(a.code, 0);
    assert_eq!(strip(a.report), strip(b.report));

    write(
        d,
        "h.json",
        StateFile::Pure(rdm_determined::qstate::haar_random_state(3, 2).unwrap()),
    );
    let a = run(d, &["verdict", "h.json", "--seed", "9", "--restarts", "4"]);
    let b = run(d, &["verdict", "h.json", "--seed", "9", "--restarts", "4"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.report["seed"], 9);
    assert_eq!(strip(a.report), strip(b.report));
}

#[test]
fn out_copies_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let r = run(d, &["proofcheck", "--n", "3", "--out", "report.json"]);
    assert_eq!(r.code, 0);
    let saved: Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    assert_eq!(saved["result"], r.report["result"]);
}
