//! Checks the Dirac axioms on the canonical structures before and after
//! dropping the energy coordinate.

use gradira::dirac::VerifyOptions;
use gradira::maps::pushforward;
use gradira::render;
use gradira::scenarios::extended_canonical;

fn main() -> gradira::Result<()> {
    let ext = extended_canonical(2, 1)?;
    let reduced = pushforward(&ext.structure, &["p"])?;
    for (name, s) in [("extended", &ext.structure), ("reduced", &reduced)] {
        println!("== {name}");
        print!("{}", s.verify_axioms(&VerifyOptions::default()));
        print!("{}", s.verify_fibered());
    }
    println!("== reduced sharp_n table");
    for (f, v) in reduced.table() {
        println!("{} -> {}", render::form(reduced.chart(), f), render::multivector(reduced.chart(), v));
    }
    Ok(())
}
