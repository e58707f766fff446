//! Set-spec files: TOML with one `[[set]]` table per compact set and an optional `[run]` table.

use std::collections::BTreeMap;

use serde::Deserialize;
use toml::{Spanned, Table, Value};

use crate::sets::{CompactSetSpec, OracleTag, SetKind};
use crate::{Complex, Error, Result};

/// Expected result of a verification on a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedSet {
    pub name: String,
    pub spec: CompactSetSpec,
    /// Per-check expectations; the key `*` applies to every check.
    pub expects: BTreeMap<String, Expectation>,
    pub line: usize,
}

impl NamedSet {
    pub fn expectation(&self, check: &str) -> Expectation {
        self.expects
            .get(check)
            .or_else(|| self.expects.get("*"))
            .copied()
            .unwrap_or(Expectation::Pass)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SpecFile {
    pub sets: Vec<NamedSet>,
    /// Raw `[run]` table, merged into the run configuration by the caller.
    pub run: Option<Table>,
}

impl SpecFile {
    pub fn get(&self, name: &str) -> Option<&NamedSet> {
        self.sets.iter().find(|s| s.name == name)
    }
}

#[derive(Deserialize)]
struct RawFile {
    #[serde(default)]
    set: Vec<Spanned<Table>>,
    run: Option<Table>,
}

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

struct Fields<'a> {
    table: &'a Table,
    kind: &'a str,
    line: usize,
}

impl Fields<'_> {
    fn parse_err(&self, message: String) -> Error {
        Error::SpecParse {
            line: self.line,
            message,
        }
    }

    fn missing(&self, field: &str) -> Error {
        Error::MissingField {
            kind: self.kind.to_string(),
            field: field.to_string(),
            line: self.line,
        }
    }

    fn get(&self, field: &str) -> Result<&Value> {
        self.table.get(field).ok_or_else(|| self.missing(field))
    }

    fn number(&self, v: &Value, field: &str) -> Result<f64> {
        match v {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            _ => Err(self.parse_err(format!("`{field}` must be a number"))),
        }
    }

    fn real(&self, field: &str) -> Result<f64> {
        self.number(self.get(field)?, field)
    }

    fn complex_of(&self, v: &Value, field: &str) -> Result<Complex> {
        match v {
            Value::Array(a) if a.len() == 2 => Ok(Complex::new(
                self.number(&a[0], field)?,
                self.number(&a[1], field)?,
            )),
            Value::Float(_) | Value::Integer(_) => Ok(Complex::new(self.number(v, field)?, 0.0)),
            _ => Err(self.parse_err(format!("`{field}` must be a number or [re, im]"))),
        }
    }

    fn complex(&self, field: &str) -> Result<Complex> {
        self.complex_of(self.get(field)?, field)
    }

    fn complex_list(&self, field: &str) -> Result<Vec<Complex>> {
        match self.get(field)? {
            Value::Array(a) => a.iter().map(|v| self.complex_of(v, field)).collect(),
            _ => Err(self.parse_err(format!("`{field}` must be a list of [re, im] pairs"))),
        }
    }

    fn string(&self, field: &str) -> Result<&str> {
        self.get(field)?
            .as_str()
            .ok_or_else(|| self.parse_err(format!("`{field}` must be a string")))
    }
}

fn expectation(s: &str, f: &Fields) -> Result<Expectation> {
    match s {
        "pass" => Ok(Expectation::Pass),
        "fail" => Ok(Expectation::Fail),
        _ => Err(f.parse_err(format!("expectation must be \"pass\" or \"fail\", got \"{s}\""))),
    }
}

fn parse_expects(f: &Fields) -> Result<BTreeMap<String, Expectation>> {
    let mut out = BTreeMap::new();
    match f.table.get("expects") {
        None => {}
        Some(Value::String(s)) => {
            out.insert("*".to_string(), expectation(s, f)?);
        }
        Some(Value::Table(t)) => {
            for (k, v) in t {
                let s = v
                    .as_str()
                    .ok_or_else(|| f.parse_err(format!("expects.{k} must be a string")))?;
                out.insert(k.clone(), expectation(s, f)?);
            }
        }
        Some(_) => return Err(f.parse_err("`expects` must be a string or a table".into())),
    }
    Ok(out)
}

const KNOWN: &[&str] = &[
    "name", "kind", "oracle", "expects", "center", "radius", "a", "b", "arms", "vertices", "filled",
    "points", "members", "inner",
];

fn parse_set(table: &Table, line: usize, earlier: &[NamedSet]) -> Result<NamedSet> {
    let kind = match table.get("kind") {
        Some(Value::String(s)) => s.as_str(),
        Some(_) => {
            return Err(Error::SpecParse {
                line,
                message: "`kind` must be a string".into(),
            })
        }
        None => {
            return Err(Error::MissingField {
                kind: "set".into(),
                field: "kind".into(),
                line,
            })
        }
    };
    let f = Fields { table, kind, line };
    if let Some(k) = table.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(f.parse_err(format!("unknown field `{k}`")));
    }
    let name = f.string("name")?.to_string();
    if earlier.iter().any(|s| s.name == name) {
        return Err(f.parse_err(format!("duplicate set name `{name}`")));
    }
    let lookup = |n: &str| -> Result<CompactSetSpec> {
        earlier
            .iter()
            .find(|s| s.name == n)
            .map(|s| s.spec.clone())
            .ok_or_else(|| f.parse_err(format!("`{n}` does not name an earlier set")))
    };
    let mut spec = match kind {
        "disk" => CompactSetSpec::disk(
            if table.contains_key("center") { f.complex("center")? } else { Complex::new(0.0, 0.0) },
            f.real("radius")?,
        ),
        "segment" => CompactSetSpec::segment(f.complex("a")?, f.complex("b")?),
        "star" => {
            let n = f.real("arms")?;
            if n.fract() != 0.0 || n < 1.0 {
                return Err(f.parse_err("`arms` must be a positive integer".into()));
            }
            CompactSetSpec::star(n as u32)
        }
        "polygon" => CompactSetSpec::polygon(
            f.complex_list("vertices")?,
            match table.get("filled") {
                None => true,
                Some(v) => v.as_bool().ok_or_else(|| f.parse_err("`filled` must be a boolean".into()))?,
            },
        ),
        "points" => CompactSetSpec::points(f.complex_list("points")?),
        "tangent-disks" => CompactSetSpec::tangent_disks(),
        "union" => {
            let members = match f.get("members")? {
                Value::Array(a) => a
                    .iter()
                    .map(|v| {
                        v.as_str()
                            .ok_or_else(|| f.parse_err("`members` must list set names".into()))
                            .and_then(|n| lookup(n))
                    })
                    .collect::<Result<Vec<_>>>()?,
                _ => return Err(f.parse_err("`members` must list set names".into())),
            };
            CompactSetSpec::union(members)
        }
        "affine" => CompactSetSpec::affine(f.complex("a")?, f.complex("b")?, lookup(f.string("inner")?)?),
        other => return Err(f.parse_err(format!("unknown kind `{other}`"))),
    };
    if let Some(v) = table.get("oracle") {
        let s = v.as_str().ok_or_else(|| f.parse_err("`oracle` must be a string".into()))?;
        spec.oracle = match s {
            "none" => None,
            _ => Some(OracleTag::from_name(s).ok_or_else(|| f.parse_err(format!("unknown oracle `{s}`")))?),
        };
    }
    spec.validate().map_err(|e| f.parse_err(e.to_string()))?;
    if let SetKind::Union { members } = &spec.kind {
        if members.is_empty() {
            return Err(f.parse_err("a union needs at least one member".into()));
        }
    }
    Ok(NamedSet {
        name,
        spec,
        expects: parse_expects(&f)?,
        line,
    })
}

/// Parse a spec file; errors carry the line of the offending `[[set]]` table.
pub fn parse_spec_file(src: &str) -> Result<SpecFile> {
    let raw: RawFile = toml::from_str(src).map_err(|e| Error::SpecParse {
        line: e.span().map(|s| line_of(src, s.start)).unwrap_or(0),
        message: e.message().to_string(),
    })?;
    let mut sets: Vec<NamedSet> = Vec::with_capacity(raw.set.len());
    for entry in &raw.set {
        let line = line_of(src, entry.span().start);
        let set = parse_set(entry.get_ref(), line, &sets)?;
        sets.push(set);
    }
    Ok(SpecFile { sets, run: raw.run })
}
