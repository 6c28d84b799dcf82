//! Distinguished ideals on the 4-variable toy instance.
use jetspace::groebner::{self, Budget};
use jetspace::multipoly::{poly, MonomialOrder, Var};

fn main() {
    let gb = Budget::default();
    let ring: Vec<Var> = ["y1", "y2", "x21", "x22"].iter().map(|v| Var::aux(v)).collect();
    let i = groebner::buchberger_in(&[poly("y1*y2"), poly("y2*x21+y1*x22")], &ring, &MonomialOrder::grevlex(), gb).unwrap();
    for (g, s) in [("y1", "y2"), ("y2", "y1")] {
        let p = groebner::distinguished_ideal(&i, &poly(g), &[poly(s)], gb).unwrap();
        let h = ring.len() - groebner::ideal_dimension(&p).unwrap();
        println!(
            "g = {}, S = {{{}}}: {:?}, height {}, contains S: {}",
            g,
            s,
            p.basis().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            h,
            p.is_member(&poly(s))
        );
    }
}
