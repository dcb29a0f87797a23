//! Input files: JSON documents whose polynomial entries are strings.

use serde::de::DeserializeOwned;
use serde::Deserialize;

use l2link::blocks::{BlockForm, SubGenerator, SubobjectSpec};
use l2link::linalg::LaurentMatrix;
use l2link::scalars::{parse_laurent, parse_rational, Field, LaurentPoly, Rational};

use crate::error::CliError;

pub type MatrixRows = Vec<Vec<String>>;

/// Raw text of an input file, kept to attach line numbers to errors.
pub struct Source {
    pub name: String,
    pub text: String,
}

impl Source {
    pub fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Source {
            name: name.into(),
            text: text.into(),
        }
    }

    pub fn read(path: &str) -> Result<Self, CliError> {
        let text = if path == "-" {
            std::io::read_to_string(std::io::stdin())
        } else {
            std::fs::read_to_string(path)
        }
        .map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })?;
        Ok(Source::new(path, text))
    }

    pub fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_str(&self.text).map_err(|e| {
            let msg = e.to_string();
            let message = match msg.rsplit_once(" at line ") {
                Some((head, _)) => head.to_string(),
                None => msg,
            };
            CliError::Input {
                file: self.name.clone(),
                line: Some(e.line()),
                column: Some(e.column()),
                message,
            }
        })
    }

    /// 1-based line and column of the first occurrence of `value` as a JSON string.
    pub fn locate(&self, value: &str) -> Option<(usize, usize)> {
        let quoted = serde_json::to_string(value).ok()?;
        let at = self.text.find(&quoted)?;
        let before = &self.text[..at];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 2;
        Some((line, col))
    }

    pub fn error(&self, value: Option<&str>, message: impl Into<String>) -> CliError {
        let loc = value.and_then(|v| self.locate(v));
        CliError::Input {
            file: self.name.clone(),
            line: loc.map(|l| l.0),
            column: loc.map(|l| l.1),
            message: message.into(),
        }
    }

    pub fn laurent(&self, field: &Field, entry: &str) -> Result<LaurentPoly, CliError> {
        parse_laurent(field, entry).map_err(|e| {
            let loc = self.locate(entry);
            let (column, message) = match e {
                l2link::Error::Parse { column, message } => (
                    loc.map(|l| l.1 + column - 1),
                    format!("in '{}': {}", entry, message),
                ),
                other => (loc.map(|l| l.1), format!("in '{}': {}", entry, other)),
            };
            CliError::Input {
                file: self.name.clone(),
                line: loc.map(|l| l.0),
                column,
                message,
            }
        })
    }

    pub fn matrix(
        &self,
        field: &Field,
        rows: &MatrixRows,
        what: &str,
    ) -> Result<LaurentMatrix, CliError> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|e| self.laurent(field, e)).collect())
            .collect::<Result<Vec<Vec<LaurentPoly>>, _>>()?;
        LaurentMatrix::from_rows(field, parsed).map_err(|e| {
            let first = rows.iter().flatten().next().map(String::as_str);
            self.error(first, format!("{}: {}", what, e))
        })
    }

    pub fn vector(&self, field: &Field, entries: &[String]) -> Result<Vec<LaurentPoly>, CliError> {
        entries.iter().map(|e| self.laurent(field, e)).collect()
    }

    pub fn rational(&self, value: &str) -> Result<Rational, CliError> {
        parse_rational(value)
            .ok_or_else(|| self.error(Some(value), format!("'{}' is not a rational", value)))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub a: MatrixRows,
    pub h: MatrixRows,
}

/// A chain complex `C_n -> ... -> C_0` with `boundaries[k - 1] = d_k`, or a
/// presentation `(A, H)` directly.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub conductor: Option<u32>,
    #[serde(default)]
    pub q: u32,
    #[serde(default)]
    pub boundaries: Vec<MatrixRows>,
    pub h: Option<MatrixRows>,
    pub presentation: Option<PresentationSpec>,
    #[serde(default)]
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SignSpec {
    Int(i64),
    Text(String),
}

impl SignSpec {
    pub fn value(&self) -> Option<i8> {
        match self {
            SignSpec::Int(1) => Some(1),
            SignSpec::Int(-1) => Some(-1),
            SignSpec::Text(s) if s == "+" || s == "+1" => Some(1),
            SignSpec::Text(s) if s == "-" || s == "-1" => Some(-1),
            _ => None,
        }
    }
}

/// A subobject generator `(t - c)^(level/2) * sum coeff * e_copy`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Combination {
        level: usize,
        coeffs: Vec<(usize, i64)>,
    },
    Graded {
        copy: usize,
        level: usize,
    },
}

impl GeneratorSpec {
    pub fn to_generator(&self) -> SubGenerator {
        match self {
            GeneratorSpec::Combination { level, coeffs } => SubGenerator {
                level: *level,
                coeffs: coeffs.clone(),
            },
            GeneratorSpec::Graded { copy, level } => SubGenerator::graded(*copy, *level),
        }
    }
}

pub fn subobject(gens: &[GeneratorSpec]) -> SubobjectSpec {
    SubobjectSpec::new(gens.iter().map(GeneratorSpec::to_generator).collect())
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    #[serde(default)]
    pub point: i64,
    pub blocks: Vec<(usize, SignSpec, usize)>,
    pub subobject: Option<Vec<GeneratorSpec>>,
}

impl FormSpec {
    pub fn form(&self, src: &Source) -> Result<BlockForm, CliError> {
        let mut items = Vec::new();
        for (k, s, m) in &self.blocks {
            let sign = s.value().ok_or_else(|| {
                let text = match s {
                    SignSpec::Text(t) => Some(t.as_str()),
                    SignSpec::Int(_) => None,
                };
                src.error(text, format!("block sign must be '+' or '-', got {:?}", s))
            })?;
            items.push((*k, sign, *m));
        }
        BlockForm::new(self.point, &items).map_err(CliError::from)
    }
}

/// Either `{"forms": [...]}` or a single form at the top level.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksSpec {
    pub conductor: Option<u32>,
    #[serde(default)]
    pub q: u32,
    pub forms: Option<Vec<FormSpec>>,
    pub point: Option<i64>,
    pub blocks: Option<Vec<(usize, SignSpec, usize)>>,
    pub subobject: Option<Vec<GeneratorSpec>>,
}

impl BlocksSpec {
    pub fn forms(&self) -> Vec<FormSpec> {
        let mut out = self.forms.clone().unwrap_or_default();
        if let Some(blocks) = &self.blocks {
            out.push(FormSpec {
                point: self.point.unwrap_or(0),
                blocks: blocks.clone(),
                subobject: self.subobject.clone(),
            });
        }
        out
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub mu: String,
    pub f: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub k: usize,
    pub sign: SignSpec,
    #[serde(default = "both")]
    pub side: String,
}

fn both() -> String {
    "both".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    #[serde(default = "default_epsilon")]
    pub epsilon: String,
    #[serde(default)]
    pub cells: Vec<CellSpec>,
    #[serde(default)]
    pub profiles: Vec<ProfileSpec>,
}

fn default_epsilon() -> String {
    "1".into()
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperbolicSpec {
    #[serde(default)]
    pub point: i64,
    pub blocks: Vec<(usize, SignSpec, usize)>,
    pub plus: Vec<GeneratorSpec>,
    pub minus: Vec<GeneratorSpec>,
}

/// A boundary linking form with a subobject and an intersection matrix.
///
/// The boundary is either a presentation with generators `x` (vectors in
/// `coker a`) or a list of block forms with integral subobjects.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub conductor: Option<u32>,
    #[serde(default)]
    pub q: u32,
    pub intersection: MatrixRows,
    pub boundary: Option<PresentationSpec>,
    #[serde(default)]
    pub x: Vec<Vec<String>>,
    pub boundary_blocks: Option<Vec<FormSpec>>,
    pub hyperbolic: Option<HyperbolicSpec>,
}
