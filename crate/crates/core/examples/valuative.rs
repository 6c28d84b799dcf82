//! Order table, residual non-inclusions and the Lipman vector for E6.
use std::path::Path;

use jetspace::cases::Fixture;
use jetspace::valuative::{self, TaskStatus};

fn main() {
    let fx = Fixture::load(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/e6.json"))).unwrap();
    let t = fx.order_table().unwrap();
    for p in t.all_pairs() {
        if let TaskStatus::ProvedValuative { witness, source_order, target_order } = valuative::classify(&t, p).status {
            println!("{} not in {}: ord {} = {} < {}", t.name(p.source), t.name(p.target), witness, source_order, target_order);
        }
    }
    let res = valuative::residual_pairs(&t, &fx.symmetry().unwrap());
    let show = |ps: &[valuative::Pair]| ps.iter().map(|p| format!("({},{})", t.name(p.source), t.name(p.target))).collect::<Vec<_>>().join(" ");
    println!("residual: {}", show(&res.full));
    println!("up to symmetry: {}", show(&res.reduced));
    let m = fx.intersection().unwrap().unwrap();
    println!("lipman vector: {:?}", valuative::lipman_vector(&m).unwrap());
}
