//! Reduced bases, normal forms and elimination.
use std::collections::BTreeSet;

use jetspace::groebner::{self, Budget};
use jetspace::multipoly::{poly, MonomialOrder, Var};

fn main() {
    let gb = Budget::default();
    let i = groebner::buchberger(&[poly("c2-i*a1^2"), poly("c2+i*a1^2")], &MonomialOrder::grevlex(), gb).unwrap();
    println!("basis: {:?}", i.basis().iter().map(|p| p.to_string()).collect::<Vec<_>>());

    let j = groebner::buchberger(&[poly("c2-i*a1^2")], &MonomialOrder::lex(), gb).unwrap();
    println!("NF(c2^2) = {}", j.normal_form(&poly("c2^2")));

    let para = groebner::buchberger(&[poly("x-t"), poly("y-t^2")], &MonomialOrder::grevlex(), gb).unwrap();
    let kill: BTreeSet<Var> = [Var::aux("t")].into();
    let e = groebner::eliminate(&para, &kill, gb).unwrap();
    println!("eliminating t: {:?}", e.basis().iter().map(|p| p.to_string()).collect::<Vec<_>>());
    println!("dimension of the curve: {}", groebner::ideal_dimension(&e).unwrap());
}
