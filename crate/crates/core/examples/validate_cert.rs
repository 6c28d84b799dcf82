//! Writes a certificate to JSON, reads it back and recomputes it.
use std::path::Path;

use jetspace::cases::{self, CaseReport, Fixture};
use jetspace::groebner::Budget;

fn main() {
    let fx = Fixture::load(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/e6.json"))).unwrap();
    let rep = cases::run_case(&fx, fx.case("6,4").unwrap(), Budget::default()).unwrap();
    let json = serde_json::to_string_pretty(&rep).unwrap();
    println!("certificate: {} bytes", json.len());
    let back: CaseReport = serde_json::from_str(&json).unwrap();
    let v = cases::validate_certificate(&back, Budget::default()).unwrap();
    println!("{} records rechecked, consistent: {}, certified: {}", v.records, v.ok(), v.certified);
}
