//! Saturation, and refutation of a small system with nonzero conditions.
use jetspace::groebner::{self, Budget};
use jetspace::multipoly::{poly, MonomialOrder};
use jetspace::wedge;

fn main() {
    let gb = Budget::default();
    let i = groebner::buchberger(&[poly("x^2*y"), poly("x*y^2")], &MonomialOrder::grevlex(), gb).unwrap();
    let s = groebner::saturate(&i, &poly("x"), gb).unwrap();
    println!("(x^2 y, x y^2) : x^inf = {:?}, exponent {:?}", s.ideal.basis().iter().map(|p| p.to_string()).collect::<Vec<_>>(), s.exponent_bound);

    // b^3 + 2*i*c = 0, b^2 = 0 has no solution with c != 0
    let cert = wedge::refute(&[poly("b^3+2*i*c"), poly("b^2")], &[poly("c")], gb).unwrap();
    println!("verdict: {}", cert.verdict.tag());
    println!("revalidates: {}", cert.revalidate(gb).unwrap());

    let cert = wedge::refute(&[poly("b^2-c")], &[poly("c")], gb).unwrap();
    println!("b^2 = c with c != 0: {:?}", cert.verdict);
}
