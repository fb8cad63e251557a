//! Yang–Mills as a restriction of the multisymplectic structure, and its
//! field equations.

use gradira::dynamics::{hdw_residuals, Hamiltonian, Section};
use gradira::maps::pullback;
use gradira::render;
use gradira::scenarios::{yang_mills, yang_mills_ambient, yang_mills_embedding, Algebra};

fn main() -> gradira::Result<()> {
    let ambient = yang_mills_ambient(3, 3)?;
    let emb = yang_mills_embedding(ambient.chart(), 3, 3)?;
    let pb = pullback(&ambient, &emb)?;
    println!("{} tangent generators on the constraint", pb.tangent_forms.len());
    let sc = yang_mills(3, Algebra::Su2, None)?;
    let s = &sc.structure;
    println!("H = {}", render::form(s.chart(), &sc.hamiltonian));
    let ham = Hamiltonian::new(s, &sc.hamiltonian)?;
    let psi = Section::generic(s.chart())?;
    for r in hdw_residuals(s, &ham, &psi, &sc.generators)? {
        println!("{}", r.render(psi.base()));
    }
    Ok(())
}
