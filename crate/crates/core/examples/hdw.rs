//! Hamiltonian conditions and the field equations of a generic section.

use gradira::dynamics::{check_hamiltonian, hdw_residuals, Hamiltonian, Section};
use gradira::scenarios::reduced_canonical;

fn main() -> gradira::Result<()> {
    let sc = reduced_canonical(2, 2)?;
    let s = &sc.structure;
    print!("{}", check_hamiltonian(s, &sc.hamiltonian));
    let ham = Hamiltonian::new(s, &sc.hamiltonian)?;
    let psi = Section::generic(s.chart())?;
    for r in hdw_residuals(s, &ham, &psi, &sc.generators)? {
        println!("{}", r.render(psi.base()));
    }
    Ok(())
}
