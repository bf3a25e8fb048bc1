use std::time::Instant;

use mcpp::verify::run_all;

#[test]
fn every_check_passes() {
    let start = Instant::now();
    let results = run_all(7, 10);
    for r in &results {
        println!("{} {}: {}", r.id, if r.passed { "ok" } else { "FAILED" }, r.detail);
    }
    println!("total {:?}", start.elapsed());
    assert_eq!(results.len(), 9);
    assert!(results.iter().all(|r| r.passed));
}
