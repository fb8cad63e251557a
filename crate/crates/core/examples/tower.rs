//! The span of (n+1)-forms admitting a top-degree extension of sharp.

use gradira::extensions::build_span_tower;
use gradira::render;
use gradira::scenarios::reduced_canonical;

fn main() -> gradira::Result<()> {
    let sc = reduced_canonical(2, 1)?;
    let c = sc.chart();
    let level = build_span_tower(&sc.structure, 3, 2)?;
    println!("{} candidates, freedom {}", level.candidates.len(), level.freedom.len());
    for (f, w) in level.admitted.basis().iter().zip(&level.values) {
        println!("admit  {} => {}", render::form(c, f), render::mvform(c, w));
    }
    for f in &level.rejected {
        println!("reject {}", render::form(c, f));
    }
    Ok(())
}
