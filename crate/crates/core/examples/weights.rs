//! Weight constraints from dominant terms, and configuration enumeration.
use std::path::Path;

use jetspace::cases::{self, Fixture};
use jetspace::groebner::Budget;
use jetspace::wedge::{self, Normalization};

fn main() {
    let fx = Fixture::load(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/e6.json"))).unwrap();
    let gb = Budget::default();
    let problem = cases::build_problem(&fx, fx.case("4,1").unwrap()).unwrap();
    println!("unknowns: {:?}", problem.symbols());
    for label in ["f1_6", "f1_7"] {
        for alt in wedge::weight_constraints(&problem, label, gb).unwrap() {
            println!("{}: {}", label, alt.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
        }
    }
    let norm = Normalization { symbol: "b2".into(), value: "2".into() };
    let en = wedge::enumerate_configurations(&problem, &["f1_6".into()], &[], Some(&norm), 10_000, gb).unwrap();
    for cfg in &en.configurations {
        let at: Vec<String> = cfg.witness.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        let lead: Vec<String> = cfg.leading.iter().map(|(l, p)| format!("{}: {}", l, p)).collect();
        println!("configuration at {}: {}", at.join(", "), lead.join("; "));
    }
}
