use g2cm::harness::{self, CurveSpec, ScanConfig, TheoremRecord};

#[test]
fn records_round_trip_through_json() {
    let specs: Vec<CurveSpec> = ["13:2,9,7,3,1,1", "7:1,0,0,0,0", "31:11,0,0,0,0"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let records = harness::scan(&specs, &ScanConfig::default()).unwrap();
    assert!(!records.is_empty());
    let mut buf = Vec::new();
    harness::write_report(&mut buf, &records).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let parsed: Vec<TheoremRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(parsed, records);
    let mut keys: Vec<(String, u64)> = records.iter().map(|r| (r.label.clone(), r.ell)).collect();
    let sorted = {
        let mut k = keys.clone();
        k.sort();
        k
    };
    assert_eq!(keys, sorted);
    keys.dedup();
    assert_eq!(keys.len(), records.len());
    let eligible = records.iter().find(|r| r.label == "13:2,9,7,3,1,1" && r.ell == 7).unwrap();
    let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(eligible).unwrap()).unwrap();
    assert_eq!(v["hypotheses"]["end_ring"], "Assumed(EndIsMaximal)");
    assert_eq!(v["hypotheses"]["overall"], "Eligible");
    assert_eq!(v["status"], "Confirmed");
}
