//! Special Hamiltonian forms and the subalgebra condition.

use gradira::dynamics::{check_subalgebra_condition, is_special_hamiltonian};
use gradira::render;
use gradira::scenarios::{momentum_name, reduced_canonical};

fn main() -> gradira::Result<()> {
    let sc = reduced_canonical(3, 1)?;
    let s = &sc.structure;
    let c = s.chart();
    let y = c.coord("y1")?;
    let forms = [
        c.dxv(&[1, 2])?.scale(&y),
        c.dxv(&[1])?.scale(&y),
        &c.dxv(&[2, 1])?.scale(&c.coord(&momentum_name(2, 1))?)
            + &c.dxv(&[3, 1])?.scale(&c.coord(&momentum_name(3, 1))?),
    ];
    for f in &forms {
        println!("{}: special {}", render::form(c, f), is_special_hamiltonian(s, f)?);
    }
    // U for y dX[1,2]: (-1)^(n-q) times the alternating sum, here with n - q even
    let u = &c.partial("p11")?.wedge(&c.partial("x2")?) - &c.partial("p21")?.wedge(&c.partial("x1")?);
    let u = u.scale(&gradira::Scalar::ratio(1, 2));
    print!("{}", check_subalgebra_condition(s, &forms[0], &u)?);
    Ok(())
}
