//! Jet equations of E6 restricted to the family of one divisor.
use jetspace::jets::{self, DivisorRecord, Factorization, SurfaceEquation};

fn main() {
    let eq = SurfaceEquation::e6();
    let js = jets::expand_jet(&eq, 12);
    println!("f_4 = {}", js.f(4));

    let e4 = DivisorRecord::new("E4", [2, 3, 4]);
    let fam = jets::reduce_to_family(&js, &e4).unwrap();
    for (u, f) in &fam.reduced {
        println!("f_4,{} = {}", u, f);
    }
    match jets::factor_leading_form(fam.leading()).unwrap() {
        Factorization::Factored(fs) => {
            let parts: Vec<String> = fs.iter().map(|(p, _)| format!("({})", p)).collect();
            println!("leading form splits as {}", parts.join(""));
        }
        Factorization::Irreducible(why) => println!("irreducible: {}", why),
    }
    println!("recursion shape holds: {}", jets::verify_recursion(&fam, 3).unwrap());
}
