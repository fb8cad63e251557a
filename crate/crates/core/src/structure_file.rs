//! JSON container for a structure definition. Expressions are strings in the
//! [`crate::parse`] grammar and are checked against the declared chart.

use serde::{Deserialize, Serialize};

use crate::chart::Chart;
use crate::dirac::Structure;
use crate::error::{Error, Result};
use crate::exterior::{Form, MvForm};
use crate::extensions::ExtensionTable;
use crate::maps::CoordMap;
use crate::parse::{parse_form, parse_multivector, parse_mvform, parse_scalar};
use crate::render;
use crate::scalar::{Scalar, Var};
use crate::scenarios::Scenario;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpEntry {
    pub form: String,
    pub value: String,
}

/// `extend <form> => <mvform>` lines for one degree `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionBlock {
    pub degree: usize,
    pub entries: Vec<String>,
}

/// A map from another chart into the file's chart, by the images of the
/// file's coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub name: String,
    pub base: Vec<String>,
    pub fiber: Vec<String>,
    pub images: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub base: Vec<String>,
    pub fiber: Vec<String>,
    /// When non-empty, the only function symbols expressions may use.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub functions: Vec<String>,
    pub sharp: Vec<SharpEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapSpec>,
}

/// A file resolved against its chart.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: Option<String>,
    pub structure: Structure,
    pub hamiltonian: Option<Form>,
    pub generators: Vec<Form>,
    /// Degree and raw entries; the pairing is checked by the caller.
    pub extension: Option<(usize, Vec<(Form, MvForm)>)>,
    pub maps: Vec<(String, CoordMap)>,
    /// The file as read.
    pub source: StructureFile,
}

impl Loaded {
    pub fn chart(&self) -> &Chart {
        self.structure.chart()
    }

    pub fn extension_table(&self) -> Option<Result<ExtensionTable>> {
        self.extension
            .as_ref()
            .map(|(j, e)| ExtensionTable::from_entries(&self.structure, *j, e.clone()))
    }
}

fn at(field: &str, e: Error) -> Error {
    match e {
        Error::Input(m) => Error::Input(format!("{field}: {m}")),
        other => Error::Input(format!("{field}: {other}")),
    }
}

impl StructureFile {
    /// Parses the JSON text; errors carry line and column.
    pub fn from_json(text: &str) -> Result<StructureFile> {
        serde_json::from_str(text).map_err(|e| {
            Error::Input(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_scenario(sc: &Scenario, ext: Option<&ExtensionTable>) -> StructureFile {
        let c = sc.chart();
        StructureFile {
            name: Some(sc.name.clone()),
            base: c.base_names().iter().map(|s| s.to_string()).collect(),
            fiber: c.fiber_names().iter().map(|s| s.to_string()).collect(),
            functions: Vec::new(),
            sharp: sc
                .structure
                .table()
                .iter()
                .map(|(f, v)| SharpEntry {
                    form: render::form(c, f),
                    value: render::multivector(c, v),
                })
                .collect(),
            hamiltonian: Some(render::form(c, &sc.hamiltonian)),
            generators: sc.generators.iter().map(|g| render::form(c, g)).collect(),
            extension: ext.map(|t| ExtensionBlock {
                degree: t.j,
                entries: t.render(c).lines().map(str::to_string).collect(),
            }),
            maps: Vec::new(),
        }
    }

    fn check_functions(&self, field: &str, coeffs: &mut dyn Iterator<Item = &Scalar>) -> Result<()> {
        if self.functions.is_empty() {
            return Ok(());
        }
        for c in coeffs {
            for v in c.vars() {
                if let Var::Func(f) = v {
                    if !self.functions.iter().any(|d| **d == *f.name) {
                        return Err(Error::Input(format!(
                            "{field}: undeclared function `{}`",
                            f.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn form(&self, chart: &Chart, field: &str, text: &str) -> Result<Form> {
        let f = parse_form(chart, text).map_err(|e| at(field, e))?;
        self.check_functions(field, &mut f.terms().map(|(_, c)| c))?;
        Ok(f)
    }

    pub fn load(&self) -> Result<Loaded> {
        let chart = Chart::new(&self.base, &self.fiber)?;
        let mut table = Vec::with_capacity(self.sharp.len());
        for (k, e) in self.sharp.iter().enumerate() {
            let f = self.form(&chart, &format!("sharp[{k}].form"), &e.form)?;
            let field = format!("sharp[{k}].value");
            let v = parse_multivector(&chart, &e.value).map_err(|err| at(&field, err))?;
            self.check_functions(&field, &mut v.terms().map(|(_, c)| c))?;
            table.push((f, v));
        }
        let structure = Structure::new(chart.clone(), table)?;
        let n = structure.n();
        for a in 1..=n {
            structure.sharp_basis(a)?;
        }
        let hamiltonian = self
            .hamiltonian
            .as_ref()
            .map(|h| self.form(&chart, "hamiltonian", h))
            .transpose()?;
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| self.form(&chart, &format!("generators[{k}]"), g))
            .collect::<Result<_>>()?;
        let extension = match &self.extension {
            None => None,
            Some(b) => {
                let mut entries = Vec::with_capacity(b.entries.len());
                for (k, line) in b.entries.iter().enumerate() {
                    let field = format!("extension.entries[{k}]");
                    let body = line.trim().strip_prefix("extend").ok_or_else(|| {
                        Error::Input(format!("{field}: expected `extend <form> => <tensor>`"))
                    })?;
                    let (f, w) = body.split_once("=>").ok_or_else(|| {
                        Error::Input(format!("{field}: missing `=>`"))
                    })?;
                    let f = self.form(&chart, &field, f)?;
                    let w = parse_mvform(&chart, w).map_err(|e| at(&field, e))?;
                    entries.push((f, w));
                }
                Some((b.degree, entries))
            }
        };
        let mut maps = Vec::with_capacity(self.maps.len());
        for (k, m) in self.maps.iter().enumerate() {
            let field = format!("maps[{k}]");
            let source = Chart::new(&m.base, &m.fiber).map_err(|e| at(&field, e))?;
            let images = m
                .images
                .iter()
                .map(|s| parse_scalar(&source, s).map_err(|e| at(&field, e)))
                .collect::<Result<_>>()?;
            let map = CoordMap::new(source, chart.clone(), images).map_err(|e| at(&field, e))?;
            maps.push((m.name.clone(), map));
        }
        Ok(Loaded {
            name: self.name.clone(),
            structure,
            hamiltonian,
            generators,
            extension,
            maps,
            source: self.clone(),
        })
    }
}
