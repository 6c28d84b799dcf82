//! Runs one scripted wedge case and prints its branches.
use std::path::Path;

use jetspace::cases::{self, Fixture};
use jetspace::groebner::Budget;

fn main() {
    let pair = std::env::args().nth(1).unwrap_or_else(|| "5,2".into());
    let fx = Fixture::load(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/e6.json"))).unwrap();
    let rep = cases::run_case(&fx, fx.case(&pair).unwrap(), Budget::default()).unwrap();
    println!("{} -> {:?}", rep.pair, rep.verdict);
    for b in &rep.branches {
        println!("  {} [{:?}, {}]: {}", b.name, b.role, b.method, b.summary);
        for (l, p) in &b.system {
            println!("    {} = {}", l, p);
        }
    }
}
