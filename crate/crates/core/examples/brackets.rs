//! Brackets of the canonical generators with the Hamiltonian n-form.

use gradira::extensions::bracket_ext1;
use gradira::render;
use gradira::scenarios::reduced_canonical;

fn main() -> gradira::Result<()> {
    let sc = reduced_canonical(3, 1)?;
    let c = sc.chart();
    println!("H = {}", render::form(c, &sc.hamiltonian));
    for a in &sc.generators {
        let b = bracket_ext1(&sc.structure, a, &sc.hamiltonian)?;
        println!("{{{}, H}} = {}", render::form(c, a), render::form(c, &b));
    }
    let (a, b) = (&sc.generators[0], &sc.generators[3]);
    println!("{{{}, {}}} = {}", render::form(c, a), render::form(c, b), render::form(c, &sc.structure.bracket(a, b)?));
    Ok(())
}
