//! Experiment descriptors: a small sectioned `key = value` format.
//!
//! ```text
//! [algebra]
//! p = 2
//! vars = x, y
//! T = 4
//! relation = x*y
//!
//! [module]
//! rank = 1
//! relation = y^2
//!
//! [sequence]
//! elem = x
//!
//! [ideal_j]
//! gen = x, y
//!
//! [run]
//! jmax = 6
//! seed = 7
//! budget = 500
//! flavor = main
//! ```
//!
//! See `docs/descriptor.md` for the full grammar.

use std::fmt;
use std::path::Path;

use ringpert::algebra::parse_polynomial;
use ringpert::linalg::PrimeField;
use ringpert::perturb::{BoundFlavor, InstanceSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{source_name}:{line}:{column}: {message}")]
pub struct DescriptorError {
    pub source_name: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Values from the `[run]` section; absent keys stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSettings {
    pub jmax: Option<usize>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub flavor: Option<BoundFlavor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptor {
    pub instance: InstanceSpec,
    pub run: RunSettings,
}

/// A value together with where it came from.
#[derive(Clone, Debug)]
struct Located {
    text: String,
    line: usize,
    column: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Algebra,
    Module,
    Sequence,
    IdealJ,
    Run,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "algebra" => Section::Algebra,
            "module" => Section::Module,
            "sequence" => Section::Sequence,
            "ideal_j" => Section::IdealJ,
            "run" => Section::Run,
            _ => return None,
        })
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Section::Algebra => &["p", "vars", "T", "relation"],
            Section::Module => &["rank", "relation"],
            Section::Sequence => &["elem"],
            Section::IdealJ => &["gen"],
            Section::Run => &["jmax", "seed", "budget", "flavor"],
        }
    }
}

struct Parser<'a> {
    source_name: &'a str,
    entries: Vec<(Section, String, Located)>,
}

impl<'a> Parser<'a> {
    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> DescriptorError {
        DescriptorError {
            source_name: self.source_name.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    fn all(&self, section: Section, key: &str) -> impl Iterator<Item = &Located> {
        let key = key.to_string();
        self.entries
            .iter()
            .filter(move |(s, k, _)| *s == section && *k == key)
            .map(|(_, _, v)| v)
    }

    fn single(&self, section: Section, key: &str) -> Result<Option<&Located>, DescriptorError> {
        let mut it = self.all(section, key);
        let first = it.next();
        if let Some(dup) = it.next() {
            return Err(self.error(dup.line, dup.column, format!("duplicate key `{key}`")));
        }
        Ok(first)
    }

    fn required(&self, section: Section, key: &str, section_name: &str) -> Result<&Located, DescriptorError> {
        self.single(section, key)?
            .ok_or_else(|| self.error(0, 0, format!("missing `{key}` in [{section_name}]")))
    }

    fn number<T: std::str::FromStr>(&self, v: &Located, what: &str) -> Result<T, DescriptorError> {
        v.text
            .parse()
            .map_err(|_| self.error(v.line, v.column, format!("expected {what}, found `{}`", v.text)))
    }
}

/// Splits a comma-separated value, keeping the column of each item.
fn split_list(v: &Located) -> Vec<Located> {
    let mut out = Vec::new();
    let mut start = 0;
    for piece in v.text.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        out.push(Located {
            text: piece.trim().to_string(),
            line: v.line,
            column: v.column + v.text[..start].chars().count() + piece[..lead].chars().count(),
        });
        start += piece.len() + 1;
    }
    out
}

/// Parses descriptor text; `source_name` labels error messages.
pub fn parse_descriptor(text: &str, source_name: &str) -> Result<Descriptor, DescriptorError> {
    let mut parser = Parser {
        source_name,
        entries: Vec::new(),
    };
    let mut section = None;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.chars().count() - line.trim_start().chars().count();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(parser.error(line_no, indent + trimmed.chars().count() + 1, "expected `]`"));
            };
            let name = name.trim();
            section = Some(
                Section::parse(name)
                    .ok_or_else(|| parser.error(line_no, indent + 2, format!("unknown section `{name}`")))?,
            );
            continue;
        }
        let Some(current) = section else {
            return Err(parser.error(line_no, indent + 1, "entry before the first section header"));
        };
        let Some(eq) = line.find('=') else {
            return Err(parser.error(line_no, indent + 1, "expected `key = value`"));
        };
        let key = line[..eq].trim();
        if !current.keys().contains(&key) {
            return Err(parser.error(line_no, indent + 1, format!("unknown key `{key}`")));
        }
        let value_part = &line[eq + 1..];
        let lead = value_part.len() - value_part.trim_start().len();
        let column = line[..eq + 1 + lead].chars().count() + 1;
        parser.entries.push((
            current,
            key.to_string(),
            Located {
                text: value_part.trim().to_string(),
                line: line_no,
                column,
            },
        ));
    }
    build(&parser)
}

pub fn read_descriptor(path: &Path) -> Result<Descriptor, DescriptorError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| DescriptorError {
        source_name: name.clone(),
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;
    parse_descriptor(&text, &name)
}

fn build(parser: &Parser<'_>) -> Result<Descriptor, DescriptorError> {
    let p_loc = parser.required(Section::Algebra, "p", "algebra")?;
    let p: u64 = parser.number(p_loc, "a prime")?;
    let field = PrimeField::new(p).map_err(|e| parser.error(p_loc.line, p_loc.column, e.to_string()))?;
    let vars_loc = parser.required(Section::Algebra, "vars", "algebra")?;
    let vars: Vec<String> = split_list(vars_loc).into_iter().map(|v| v.text).collect();
    let t_loc = parser.required(Section::Algebra, "T", "algebra")?;
    let truncation: u32 = parser.number(t_loc, "a positive integer")?;
    if truncation == 0 {
        return Err(parser.error(t_loc.line, t_loc.column, "T must be positive"));
    }

    let poly = |v: &Located| -> Result<String, DescriptorError> {
        parse_polynomial(&v.text, &vars, field)
            .map_err(|e| parser.error(v.line, v.column + e.position().saturating_sub(1), e.to_string()))?;
        Ok(v.text.clone())
    };
    let polys = |section, key| -> Result<Vec<String>, DescriptorError> {
        parser
            .all(section, key)
            .flat_map(split_list)
            .map(|v| poly(&v))
            .collect()
    };

    let relations = polys(Section::Algebra, "relation")?;
    let rank = match parser.single(Section::Module, "rank")? {
        Some(v) => parser.number(v, "a module rank")?,
        None => 1,
    };
    let mut module_relations = Vec::new();
    for v in parser.all(Section::Module, "relation") {
        let items = split_list(v);
        if items.len() != rank {
            return Err(parser.error(
                v.line,
                v.column,
                format!("relation has {} entries, rank is {rank}", items.len()),
            ));
        }
        module_relations.push(items.iter().map(poly).collect::<Result<Vec<_>, _>>()?);
    }
    let sequence = polys(Section::Sequence, "elem")?;
    let ideal = polys(Section::IdealJ, "gen")?;

    let mut run = RunSettings::default();
    if let Some(v) = parser.single(Section::Run, "jmax")? {
        run.jmax = Some(parser.number(v, "a degree")?);
    }
    if let Some(v) = parser.single(Section::Run, "seed")? {
        run.seed = Some(parser.number(v, "an unsigned 64-bit seed")?);
    }
    if let Some(v) = parser.single(Section::Run, "budget")? {
        run.budget = Some(parser.number(v, "a tuple budget")?);
    }
    if let Some(v) = parser.single(Section::Run, "flavor")? {
        run.flavor = Some(v.text.parse().map_err(|e: String| parser.error(v.line, v.column, e))?);
    }

    Ok(Descriptor {
        instance: InstanceSpec {
            p,
            vars,
            truncation,
            relations,
            rank,
            module_relations,
            sequence,
            ideal,
        },
        run,
    })
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spec = &self.instance;
        writeln!(f, "[algebra]")?;
        writeln!(f, "p = {}", spec.p)?;
        writeln!(f, "vars = {}", spec.vars.join(", "))?;
        writeln!(f, "T = {}", spec.truncation)?;
        for r in &spec.relations {
            writeln!(f, "relation = {r}")?;
        }
        writeln!(f, "\n[module]")?;
        writeln!(f, "rank = {}", spec.rank)?;
        for r in &spec.module_relations {
            writeln!(f, "relation = {}", r.join(", "))?;
        }
        if !spec.sequence.is_empty() {
            writeln!(f, "\n[sequence]")?;
            for x in &spec.sequence {
                writeln!(f, "elem = {x}")?;
            }
        }
        if !spec.ideal.is_empty() {
            writeln!(f, "\n[ideal_j]")?;
            writeln!(f, "gen = {}", spec.ideal.join(", "))?;
        }
        let run = &self.run;
        if *run != RunSettings::default() {
            writeln!(f, "\n[run]")?;
            if let Some(v) = run.jmax {
                writeln!(f, "jmax = {v}")?;
            }
            if let Some(v) = run.seed {
                writeln!(f, "seed = {v}")?;
            }
            if let Some(v) = run.budget {
                writeln!(f, "budget = {v}")?;
            }
            if let Some(v) = run.flavor {
                writeln!(f, "flavor = {v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = "[algebra]\np = 2\nvars = x\nT = 4\n\n[sequence]\nelem = x\n";

    #[test]
    fn parses_minimal_descriptor() {
        let d = parse_descriptor(LINE, "line.rp").unwrap();
        assert_eq!(d.instance.vars, vec!["x"]);
        assert_eq!(d.instance.rank, 1);
        assert_eq!(d.instance.sequence, vec!["x"]);
        assert!(d.instance.ideal.is_empty());
        assert_eq!(d.run, RunSettings::default());
    }

    #[test]
    fn display_round_trips() {
        let text = "[algebra]\np = 3\nvars = x, y\nT = 4\nrelation = x*y\n[module]\nrank = 2\nrelation = x, y^2\n\
                    [sequence]\nelem = x\nelem = y\n[ideal_j]\ngen = x, y^2\n[run]\njmax = 5\nflavor = prop34\n";
        let d = parse_descriptor(text, "t").unwrap();
        assert_eq!(d.instance.module_relations, vec![vec!["x".to_string(), "y^2".to_string()]]);
        assert_eq!(d.instance.ideal, vec!["x", "y^2"]);
        let again = parse_descriptor(&d.to_string(), "t").unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn malformed_polynomial_points_at_the_column() {
        let text = "[algebra]\np = 2\nvars = x\nT = 4\n[sequence]\nelem = x^\n";
        let err = parse_descriptor(text, "bad.rp").unwrap_err();
        assert_eq!((err.line, err.column), (6, 10));
        assert!(err.to_string().starts_with("bad.rp:6:10:"));
    }

    #[test]
    fn structural_errors() {
        let cases = [
            ("p = 2\n", 1, 1),
            ("[algebra\n", 1, 9),
            ("[nope]\n", 1, 2),
            ("[algebra]\nq = 1\n", 2, 1),
            ("[algebra]\np = 4\nvars = x\nT = 2\n", 2, 5),
            ("[algebra]\np = 2\nvars = x\nT = 2\n[module]\nrank = 2\nrelation = x\n", 7, 12),
            ("[algebra]\np = 2\nvars = x\nT = 2\n[run]\nflavor = best\n", 6, 10),
        ];
        for (text, line, column) in cases {
            let err = parse_descriptor(text, "t").unwrap_err();
            assert_eq!((err.line, err.column), (line, column), "{text:?}: {err}");
        }
    }
}
