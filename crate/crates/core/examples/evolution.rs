//! The connection of a Hamiltonian and the evolution identity.

use gradira::dynamics::{check_evolution, gamma_h, Hamiltonian};
use gradira::scenarios::{canonical_extension_table, reduced_canonical};

fn main() -> gradira::Result<()> {
    let sc = reduced_canonical(2, 1)?;
    let s = &sc.structure;
    let ham = Hamiltonian::new(s, &sc.hamiltonian)?;
    let table = canonical_extension_table(&sc, 1)?;
    let h = gamma_h(s, &ham, &table)?;
    print!("{}", h.render());
    print!("{}", check_evolution(s, &ham, &table, &h, &sc.generators));
    Ok(())
}
