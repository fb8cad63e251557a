//! Command-line surface. [`run`] never panics on user input and never touches
//! the process: callers print the returned streams and exit with the code.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on input
//! errors (unreadable file, parse errors, preconditions).

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::dirac::VerifyOptions;
use crate::dynamics::{
    check_evolution, check_hamiltonian, check_subalgebra_condition, gamma_h, hdw_residuals,
    special_witness, Hamiltonian, Section,
};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::extensions::{
    bracket_ext1, bracket_extj, build_span_tower, check_extension_properties, compat_lower,
    solve_vertical_extension, ExtensionTable,
};
use crate::maps::pullback;
use crate::parse::{parse_form, parse_multivector};
use crate::render;
use crate::report::Report;
use crate::sampler::seed_from_env;
use crate::scenarios::{scenario, scenario_extension_table};
use crate::structure_file::{ExtensionBlock, Loaded, StructureFile};

#[derive(Debug, Parser)]
#[command(name = "gradira", version, about = "Graded Dirac structures and field dynamics")]
pub struct Cli {
    /// Structure file (JSON).
    #[arg(short = 'f', long = "file", global = true)]
    pub file: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the Dirac axioms and fiberedness.
    Verify {
        /// Sampled sections per degree pair.
        #[arg(long, default_value_t = 2)]
        samples: usize,
        /// Sampler seed; defaults to GRADIRA_SEED or a fixed value.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Graded bracket of two Hamiltonian forms. A `-b` of full degree uses
    /// the extended bracket.
    Bracket {
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
    },
    /// The tower level `S^a[j]`.
    Tower {
        #[arg(short = 'a')]
        a: usize,
        #[arg(short = 'j')]
        j: usize,
    },
    /// Check the file's extension table, or solve one on `S^{n+1}[j]`.
    Extend {
        #[arg(short = 'j')]
        j: Option<usize>,
        /// Write the structure file with the solved table.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Hamiltonian conditions for an `n`-form (default: the file's).
    Hamiltonian {
        #[arg(short = 'H')]
        h: Option<String>,
    },
    /// Hamilton–De Donder–Weyl equations for a generic section.
    Hdw {
        /// Generators (default: the file's).
        #[arg(short = 'a')]
        a: Vec<String>,
    },
    /// Special Hamiltonian test, and the subalgebra condition when `-U` is given.
    Special {
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'U')]
        u: Option<String>,
    },
    /// Emit a built-in scenario as a structure file.
    Scenario {
        name: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        fields: usize,
        /// `su2` or `abelian` (Yang–Mills only).
        #[arg(long)]
        algebra: Option<String>,
        /// Diagonal metric entries, comma separated (Yang–Mills only).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        signature: Option<Vec<i64>>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Connection of the Hamiltonian and `h*(d a) = d a + {a, H}`.
    Evolution {
        /// Forms to evolve (default: the file's generators).
        #[arg(long = "form")]
        forms: Vec<String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn report(rep: &Report) -> Outcome {
        Outcome {
            code: if rep.all_pass() { 0 } else { 1 },
            stdout: rep.to_string(),
            stderr: String::new(),
        }
    }

    fn input_error(e: &Error) -> Outcome {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok(o) => o,
        Err(e) => Outcome::input_error(&e),
    }
}

fn load(file: &Option<PathBuf>) -> Result<Loaded> {
    let path = file
        .as_ref()
        .ok_or_else(|| Error::Input("this subcommand needs a structure file (-f)".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    StructureFile::from_json(&text)
        .and_then(|f| f.load())
        .map_err(|e| match e {
            Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
            other => Error::Input(format!("{}: {other}", path.display())),
        })
}

fn flag<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{name}: {m}")),
        other => Error::Input(format!("{name}: {other}")),
    })
}

fn hamiltonian(l: &Loaded) -> Result<Hamiltonian> {
    let h = l
        .hamiltonian
        .as_ref()
        .ok_or_else(|| Error::Input("the structure file has no hamiltonian".into()))?;
    Hamiltonian::new(&l.structure, h)
}

/// The file's table, else a vertical solve on `dH`.
fn dynamics_table(l: &Loaded, ham: &Hamiltonian) -> Result<ExtensionTable> {
    if let Some(t) = l.extension_table() {
        return t;
    }
    let s = &l.structure;
    let (w, _) = solve_vertical_extension(s, s.n(), &ham.d)?;
    ExtensionTable::from_entries(s, s.n(), vec![(ham.d.clone(), w)])
}

fn write_or_print(output: &Option<PathBuf>, text: String, rep: &mut Report) -> Result<Option<String>> {
    match output {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?;
            rep.push("written", true, p.display().to_string());
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify { samples, seed } => {
            let l = load(&cli.file)?;
            let s = &l.structure;
            let opts = VerifyOptions {
                samples: *samples,
                seed: seed.unwrap_or_else(seed_from_env),
            };
            let mut rep = s.verify_axioms(&opts);
            rep.extend(s.verify_fibered());
            if let Some(t) = l.extension_table() {
                match t {
                    Ok(t) => rep.push("extension-pairing", true, format!("{} entries", t.entries.len())),
                    Err(e) => rep.push("extension-pairing", false, e.to_string()),
                }
            }
            for (name, m) in &l.maps {
                match pullback(s, m) {
                    Ok(p) => rep.push(
                        format!("pullback[{name}]"),
                        true,
                        format!("{} generators", p.structure.table().len()),
                    ),
                    Err(e) => rep.push(format!("pullback[{name}]"), false, e.to_string()),
                }
            }
            Ok(Outcome::report(&rep))
        }
        Command::Bracket { a, b } => {
            let l = load(&cli.file)?;
            let s = &l.structure;
            let c = s.chart();
            let fa = flag("-a", parse_form(c, a))?;
            let fb = flag("-b", parse_form(c, b))?;
            if !s.is_hamiltonian_form(&fa) {
                return Err(Error::Input(format!(
                    "-a: {} is not a Hamiltonian form (d a is not in S^{})",
                    render::form(c, &fa),
                    fa.deg() + 1
                )));
            }
            let r = if fb.deg() == s.n() {
                match l.extension_table() {
                    Some(t) => flag("-b", bracket_extj(s, &t?, &fa, &fb))?,
                    None => flag("-b", bracket_ext1(s, &fa, &fb))?,
                }
            } else {
                flag("-b", s.bracket(&fa, &fb))?
            };
            let mut rep = Report::new();
            rep.push("bracket", true, render::form(c, &r));
            Ok(Outcome::report(&rep))
        }
        Command::Tower { a, j } => {
            let l = load(&cli.file)?;
            let s = &l.structure;
            let c = s.chart();
            let t = build_span_tower(s, *a, *j)?;
            let mut rep = Report::new();
            rep.push(
                "tower",
                true,
                format!(
                    "S^{a}[{j}]: {} candidates, {} admitted, {} rejected, freedom {}",
                    t.candidates.len(),
                    t.admitted.basis().len(),
                    t.rejected.len(),
                    t.freedom.len()
                ),
            );
            for (k, (g, w)) in t.admitted.basis().iter().zip(&t.values).enumerate() {
                rep.push(
                    format!("admitted[{k}]"),
                    true,
                    format!("{} => {}", render::form(c, g), render::mvform(c, w)),
                );
            }
            for (k, g) in t.rejected.iter().enumerate() {
                rep.push(format!("rejected[{k}]"), true, render::form(c, g));
            }
            Ok(Outcome::report(&rep))
        }
        Command::Extend { j, output } => {
            let l = load(&cli.file)?;
            let s = &l.structure;
            let c = s.chart();
            let n = s.n();
            let mut rep = Report::new();
            let table = match l.extension_table() {
                Some(t) => {
                    let t = match t {
                        Ok(t) => t,
                        Err(e) => {
                            rep.push("extension-pairing", false, e.to_string());
                            return Ok(Outcome::report(&rep));
                        }
                    };
                    rep.push(
                        "extension-pairing",
                        true,
                        format!("{} entries, freedom {}", t.entries.len(), t.freedom.len()),
                    );
                    t
                }
                None => {
                    let j = j.unwrap_or(n);
                    if j == 0 || j > n {
                        return Err(Error::Input(format!("-j must lie in 1..={n}")));
                    }
                    let t = build_span_tower(s, n + 1, j)?.table();
                    rep.push(
                        "extension-solved",
                        true,
                        format!("{} entries, freedom {}", t.entries.len(), t.freedom.len()),
                    );
                    for (k, line) in t.render(c).lines().enumerate() {
                        rep.push(format!("entry[{k}]"), true, line);
                    }
                    t
                }
            };
            for i in 1..table.j {
                match compat_lower(s, &table, i) {
                    Ok((_, r)) => rep.extend(r),
                    Err(e) => rep.push(format!("compat[{i}]"), false, e.to_string()),
                }
            }
            let thetas: Vec<Form> = l.hamiltonian.iter().cloned().collect();
            let alphas: Vec<Form> = l
                .generators
                .iter()
                .filter(|g| s.is_hamiltonian_form(g))
                .cloned()
                .collect();
            rep.extend(check_extension_properties(s, Some(&table), &alphas, &thetas));
            if output.is_some() {
                let mut file = l.source.clone();
                file.extension = Some(ExtensionBlock {
                    degree: table.j,
                    entries: table.render(c).lines().map(str::to_string).collect(),
                });
                write_or_print(output, file.to_json(), &mut rep)?;
            }
            Ok(Outcome::report(&rep))
        }
        Command::Hamiltonian { h } => {
            let l = load(&cli.file)?;
            let s = &l.structure;
            let c = s.chart();
            let form = match h {
                Some(t) => flag("-H", parse_form(c, t))?,
                None => l
                    .hamiltonian
                    .clone()
                    .ok_or_else(|| Error::Input("no -H and no hamiltonian in the file".into()))?,
            };
            let mut rep = check_hamiltonian(s, &form);
            if rep.all_pass() {
                let ham = Hamiltonian::new(s, &form)?;
                rep.push("sharp1", true, render::mvform(c, &ham.sharp1));
            }
            Ok(Outcome::report(&rep))
        }
        Command::Hdw { a } => {
            let l = load(&cli.file)?;
            let s = &l.structure;
            let ham = hamiltonian(&l)?;
            let gens = if a.is_empty() {
                l.generators.clone()
            } else {
                a.iter()
                    .map(|t| flag("-a", parse_form(s.chart(), t)))
                    .collect::<Result<_>>()?
            };
            let psi = Section::generic(s.chart())?;
            let mut rep = Report::new();
            for (k, r) in hdw_residuals(s, &ham, &psi, &gens)?.iter().enumerate() {
                rep.push(format!("hdw[{k}]"), true, r.render(psi.base()));
            }
            Ok(Outcome::report(&rep))
        }
        Command::Special { a, u } => {
            let l = load(&cli.file)?;
            let s = &l.structure;
            let c = s.chart();
            let fa = flag("-a", parse_form(c, a))?;
            if fa.deg() + 1 > s.n() {
                return Err(Error::Input(format!("-a: degree must be at most {}", s.n() - 1)));
            }
            let mut rep = Report::new();
            match flag("-a", special_witness(s, &fa))? {
                None => rep.push("special", true, render::form(c, &fa)),
                Some(eps) => rep.push(
                    "special",
                    false,
                    format!("wedge with {} is not Hamiltonian", render::form(c, &eps)),
                ),
            }
            if let (Some(u), true) = (u, rep.all_pass()) {
                let mv = flag("-U", parse_multivector(c, u))?;
                rep.extend(flag("-U", check_subalgebra_condition(s, &fa, &mv))?);
            }
            Ok(Outcome::report(&rep))
        }
        Command::Scenario {
            name,
            n,
            fields,
            algebra,
            signature,
            output,
        } => {
            let sc = scenario(name, *n, *fields, algebra.as_deref(), signature.clone())?;
            let table = scenario_extension_table(&sc)?;
            let text = StructureFile::from_scenario(&sc, table.as_ref()).to_json();
            let mut rep = Report::new();
            match write_or_print(output, text, &mut rep)? {
                Some(text) => Ok(Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }),
                None => Ok(Outcome::report(&rep)),
            }
        }
        Command::Evolution { forms } => {
            let l = load(&cli.file)?;
            let s = &l.structure;
            let c = s.chart();
            let ham = hamiltonian(&l)?;
            let table = dynamics_table(&l, &ham)?;
            let h = gamma_h(s, &ham, &table)?;
            let forms = if forms.is_empty() {
                l.generators.clone()
            } else {
                forms
                    .iter()
                    .map(|t| flag("--form", parse_form(c, t)))
                    .collect::<Result<_>>()?
            };
            let mut rep = Report::new();
            for mu in 0..s.n() {
                rep.push(
                    format!("lift[{}]", c.name(mu)),
                    true,
                    render::multivector(c, h.lift(mu)),
                );
            }
            rep.extend(check_evolution(s, &ham, &table, &h, &forms));
            Ok(Outcome::report(&rep))
        }
    }
}
