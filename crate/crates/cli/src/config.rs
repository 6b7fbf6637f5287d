//! Configuration documents: JSON text to and from [`Configuration`].

use std::cell::Cell;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use toric3d::lattice::Face;
use toric3d::paths::{format_word, parse_word, validate_surface};
use toric3d::{Axis, Configuration, FinitePath, InfinitePathSpec, Surface, TransformError, Vertex, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{kind} {index}: {message}")]
    Semantic { kind: &'static str, index: usize, message: String },
}

impl ParseError {
    fn from_json(e: serde_json::Error) -> Self {
        let mut column = e.column();
        if let Some((offset, len)) = BAD_ATOM.take() {
            // serde reports the closing quote; step back to the atom
            column = column.saturating_sub(len) + offset;
        }
        let message = e.to_string();
        let message = message.split(" at line ").next().unwrap_or(&message).to_string();
        ParseError::Syntax { line: e.line(), column, message }
    }
}

thread_local! {
    static BAD_ATOM: Cell<Option<(usize, usize)>> = const { Cell::new(None) };
}

/// A step string such as `"X+Y-"`, tokenised into two-character atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepWord(pub Word);

impl Serialize for StepWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_word(&self.0))
    }
}

impl<'de> Deserialize<'de> for StepWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = StepWord;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a step string over X+ X- Y+ Y- Z+ Z-")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<StepWord, E> {
                parse_word(s).map(StepWord).map_err(|e| {
                    BAD_ATOM.set(Some((e.offset, s.chars().count())));
                    E::custom(e)
                })
            }
        }
        d.deserialize_str(V)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringDoc {
    pub neg_period: StepWord,
    #[serde(default)]
    pub core: StepWord,
    pub pos_period: StepWord,
    pub base: [i64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopDoc {
    pub start: [i64; 3],
    pub steps: StepWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default)]
    pub strings: Vec<StringDoc>,
    #[serde(default)]
    pub charges: Vec<[i64; 3]>,
    #[serde(default)]
    pub loops: Vec<LoopDoc>,
}

impl ConfigDocument {
    pub fn from_configuration(cfg: &Configuration) -> Self {
        ConfigDocument {
            strings: cfg.strings.iter().map(string_doc).collect(),
            charges: cfg.charges.iter().map(|&c| c.into()).collect(),
            loops: cfg
                .loops
                .iter()
                .map(|l| LoopDoc { start: l.start().into(), steps: StepWord(l.steps().to_vec()) })
                .collect(),
        }
    }

    pub fn to_configuration(&self) -> Result<Configuration, ParseError> {
        let strings = self
            .strings
            .iter()
            .enumerate()
            .map(|(i, s)| {
                InfinitePathSpec::new(s.neg_period.0.clone(), s.core.0.clone(), s.pos_period.0.clone(), s.base.into())
                    .map_err(|e| ParseError::Semantic { kind: "string", index: i, message: e.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let loops = self
            .loops
            .iter()
            .enumerate()
            .map(|(i, l)| {
                FinitePath::new(l.start.into(), l.steps.0.clone()).map_err(|e| ParseError::Semantic {
                    kind: "loop",
                    index: i,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let charges = self.charges.iter().map(|&c| Vertex::from(c)).collect();
        Configuration::new(charges, strings, loops).map_err(|e| match e {
            TransformError::OpenLoop { index } => ParseError::Semantic { kind: "loop", index, message: e.to_string() },
            other => ParseError::Semantic { kind: "configuration", index: 0, message: other.to_string() },
        })
    }
}

pub fn string_doc(s: &InfinitePathSpec) -> StringDoc {
    StringDoc {
        neg_period: StepWord(s.neg_period().to_vec()),
        core: StepWord(s.core().to_vec()),
        pos_period: StepWord(s.pos_period().to_vec()),
        base: s.base().into(),
    }
}

pub fn parse_document(text: &str) -> Result<ConfigDocument, ParseError> {
    BAD_ATOM.set(None);
    serde_json::from_str(text).map_err(ParseError::from_json)
}

/// Parses configuration text into a validated [`Configuration`].
pub fn parse_config(text: &str) -> Result<Configuration, ParseError> {
    parse_document(text)?.to_configuration()
}

pub fn to_json(cfg: &Configuration) -> String {
    serde_json::to_string_pretty(&ConfigDocument::from_configuration(cfg)).expect("documents serialise")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceDoc {
    pub base: [i64; 3],
    pub normal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub faces: Vec<FaceDoc>,
}

/// Parses a face list `{"faces": [{"base": [x,y,z], "normal": "Y"}, ...]}`.
pub fn parse_surface(text: &str) -> Result<Surface, ParseError> {
    BAD_ATOM.set(None);
    let doc: SurfaceDocument = serde_json::from_str(text).map_err(ParseError::from_json)?;
    let faces = doc
        .faces
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let normal: Axis = f.normal.parse().map_err(|_| ParseError::Semantic {
                kind: "face",
                index: i,
                message: format!("unknown axis {:?}", f.normal),
            })?;
            Ok(Face::new(f.base.into(), normal))
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    validate_surface(&faces).map_err(|e| ParseError::Semantic { kind: "surface", index: 0, message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line() {
        let cfg = parse_config(
            r#"{"strings":[{"neg_period":"Z+","core":"","pos_period":"Z+","base":[0,0,0]}],"charges":[]}"#,
        )
        .unwrap();
        assert_eq!(cfg.strings.len(), 1);
        assert!(cfg.charges.is_empty());
    }

    #[test]
    fn two_charges() {
        let cfg = parse_config(r#"{"strings":[],"charges":[[0,0,0],[2,2,2]]}"#).unwrap();
        assert_eq!(cfg.charges.len(), 2);
        assert_eq!(toric3d::sectors::charge_parity(&cfg), 0);
    }

    #[test]
    fn bad_atom_points_at_the_atom() {
        let text =
            "{\"strings\":[\n  {\"neg_period\":\"Z+\",\"core\":\"Z+Q\",\"pos_period\":\"Z+\",\"base\":[0,0,0]}]}";
        let err = parse_config(text).unwrap_err();
        let col = text.lines().nth(1).unwrap().find("Q").unwrap() + 1;
        assert_eq!(err, ParseError::Syntax { line: 2, column: col, message: err_message(&err) });
        assert!(err_message(&err).contains("\"Q\""));
    }

    fn err_message(e: &ParseError) -> String {
        match e {
            ParseError::Syntax { message, .. } | ParseError::Semantic { message, .. } => message.clone(),
        }
    }

    #[test]
    fn malformed_json_has_position() {
        let err = parse_config("{\n \"strings\": [,]}").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn semantic_errors_name_the_string() {
        let text = r#"{"strings":[{"neg_period":"Z+","pos_period":"Z+","base":[0,0,0]},
            {"neg_period":"Z+","core":"X+X-","pos_period":"Z+","base":[0,0,0]}]}"#;
        assert!(matches!(parse_config(text), Err(ParseError::Semantic { kind: "string", index: 1, .. })));
        let open = r#"{"loops":[{"start":[0,0,0],"steps":"X+Y+"}]}"#;
        assert!(matches!(parse_config(open), Err(ParseError::Semantic { kind: "loop", index: 0, .. })));
    }

    #[test]
    fn surfaces() {
        let s = parse_surface(r#"{"faces":[{"base":[0,0,0],"normal":"Y"},{"base":[1,0,0],"normal":"Y"}]}"#).unwrap();
        assert_eq!(s.boundary().len(), 6);
        assert!(parse_surface(r#"{"faces":[{"base":[0,0,0],"normal":"W"}]}"#).is_err());
    }
}
