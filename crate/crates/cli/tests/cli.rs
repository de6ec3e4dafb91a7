use std::fs;
use std::process::Command;

fn g2cm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_g2cm"))
}

const SMALL_CORPUS: &str = r#"{"label":"x5+1/F7","p":7,"f":[1,0,0,0,0]}
{"label":"g13a","p":13,"f":[2,9,7,3,1,1]}
{"label":"x5+11/F31","p":31,"f":[11,0,0,0,0]}
"#;

#[test]
fn scan_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    fs::write(&corpus, SMALL_CORPUS).unwrap();
    let mut outs = Vec::new();
    for (i, threads) in ["1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.jsonl"));
        let sum = dir.path().join(format!("s{i}.csv"));
        let st = g2cm()
            .env("G2CM_THREADS", threads)
            .args(["--seed", "7", "scan", "--corpus"])
            .arg(&corpus)
            .arg("--out")
            .arg(&out)
            .arg("--summary")
            .arg(&sum)
            .status()
            .unwrap();
        assert_eq!(st.code(), Some(0));
        outs.push((fs::read(&out).unwrap(), fs::read(&sum).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    let summary = String::from_utf8(outs[0].1.clone()).unwrap();
    assert!(summary.starts_with("label,ell,k,kappa,n_confirms,n_not_applicable,status\n"));
    assert!(summary.contains("x5+1/F7,5,,,0,0,Skipped(NotPrimitive)"));
    assert!(summary.contains("g13a,7,2,6,"));
    let report = String::from_utf8(outs[0].0.clone()).unwrap();
    for line in report.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("rows").is_some() && v.get("uv_nondeg").is_some());
    }
}

#[test]
fn empty_corpus_gives_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.jsonl");
    fs::write(&corpus, "").unwrap();
    let out = dir.path().join("r.jsonl");
    let st = g2cm().args(["scan", "--corpus"]).arg(&corpus).arg("--out").arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(0));
    assert!(fs::read(&out).unwrap().is_empty());
}

#[test]
fn missing_or_malformed_corpus_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let st = g2cm()
        .args(["scan", "--corpus"])
        .arg(dir.path().join("nope.jsonl"))
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(3));
    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, "{\"label\":\"x\",\"p\":7}\n").unwrap();
    let st = g2cm().args(["scan", "--corpus"]).arg(&bad).arg("--out").arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(3));
}

#[test]
fn violating_instance_sets_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.jsonl");
    fs::write(&corpus, "{\"label\":\"x5+8/F31\",\"p\":31,\"f\":[8,0,0,0,0]}\n").unwrap();
    let out = dir.path().join("r.jsonl");
    let st = g2cm().args(["scan", "--corpus"]).arg(&corpus).arg("--out").arg(&out).status().unwrap();
    assert_eq!(st.code(), Some(2));
    let report = fs::read_to_string(&out).unwrap();
    assert!(report.contains("\"status\":\"VIOLATION\""));
}

#[test]
fn analyze_prints_weil_polynomial_and_classification() {
    let out = g2cm().args(["analyze", "7:1,0,0,0,0"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("X^4 + 49"), "{text}");
    assert!(text.contains("|J(F_p)|   50"));
    assert!(text.contains("enumerated 50 elements"));
    assert!(text.contains("V4"));
    let bad = g2cm().args(["analyze", "7:1,2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn pairing_check_passes_on_small_instance() {
    let out = g2cm()
        .args(["pairing-check", "13:2,9,7,3,1,1", "--ell", "7", "--cases", "20"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"bilinearity_failures\":0"));
}
