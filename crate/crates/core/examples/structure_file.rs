//! Writes a scenario as a structure file and drives the command line on it.

use gradira::cli::run;
use gradira::scenarios::{reduced_canonical, scenario_extension_table};
use gradira::structure_file::StructureFile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sc = reduced_canonical(2, 1)?;
    let table = scenario_extension_table(&sc)?;
    let file = StructureFile::from_scenario(&sc, table.as_ref());
    let path = std::env::temp_dir().join("gradira-example.json");
    std::fs::write(&path, file.to_json())?;
    let p = path.to_str().expect("utf-8 temp path");
    for args in [&["verify"][..], &["bracket", "-a", "y1*dX[1]", "-b", "p11*dX[1] + p21*dX[2]"], &["hdw"]] {
        let out = run(["gradira", "-f", p].iter().copied().chain(args.iter().copied()));
        print!("{}{}", out.stdout, out.stderr);
    }
    Ok(())
}
