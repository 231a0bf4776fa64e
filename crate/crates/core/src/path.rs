//! Canonical identifiers for annotated program elements.
//!
//! ```text
//! package   a.b.c
//! type      a.b.Outer            nested: a.b.Outer$Inner
//! field     a.b.Outer#name
//! method    a.b.Outer#name(String,int[])
//! ```
//!
//! Parameter types are simple names without spaces; arrays are written `T[]`.
//! A path with no `#`, no `$` and a lowercase last segment is a package.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Package,
    Type,
    Field,
    Method,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::Package => "package",
            ElementKind::Type => "type",
            ElementKind::Field => "field",
            ElementKind::Method => "method",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementPath {
    raw: String,
    kind: ElementKind,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

#[derive(Clone, Copy, PartialEq)]
enum State {
    /// Expecting the first char of a dotted or nested segment.
    SegmentStart,
    InSegment,
    MemberStart,
    InMember,
    ParamStart,
    InParam,
    /// Saw `[`, expecting `]`.
    ArrayOpen,
    /// After `]`: another `[`, `,` or `)`.
    AfterArray,
    Done,
}

impl ElementPath {
    pub fn parse(text: &str) -> Result<Self> {
        let err = |offset: usize, message: &str| Error::Path {
            path: text.to_string(),
            offset,
            message: message.to_string(),
        };
        if text.is_empty() {
            return Err(err(0, "empty path"));
        }

        let mut state = State::SegmentStart;
        let mut has_member = false;
        let mut has_params = false;
        let mut has_nested = false;
        let mut last_segment_start = 0;
        let mut in_nested = false;

        for (offset, c) in text.char_indices() {
            if c.is_whitespace() {
                return Err(err(offset, "whitespace is not allowed"));
            }
            state = match (state, c) {
                (State::SegmentStart, c) if is_ident_start(c) => {
                    last_segment_start = offset;
                    State::InSegment
                }
                (State::SegmentStart, _) => return Err(err(offset, "expected identifier")),
                (State::InSegment, c) if is_ident_part(c) => State::InSegment,
                (State::InSegment, '.') if !in_nested => State::SegmentStart,
                (State::InSegment, '.') => {
                    return Err(err(offset, "package separator after nested type"))
                }
                (State::InSegment, '$') => {
                    has_nested = true;
                    in_nested = true;
                    State::SegmentStart
                }
                (State::InSegment, '#') => {
                    has_member = true;
                    State::MemberStart
                }
                (State::InSegment, _) => return Err(err(offset, "unexpected character")),
                (State::MemberStart, c) if is_ident_start(c) => State::InMember,
                (State::MemberStart, _) => return Err(err(offset, "expected member name")),
                (State::InMember, c) if is_ident_part(c) => State::InMember,
                (State::InMember, '(') => {
                    has_params = true;
                    State::ParamStart
                }
                (State::InMember, _) => return Err(err(offset, "unexpected character in member name")),
                (State::ParamStart, ')') if text[..offset].ends_with('(') => State::Done,
                (State::ParamStart, c) if is_ident_start(c) => State::InParam,
                (State::ParamStart, _) => return Err(err(offset, "expected parameter type")),
                (State::InParam, c) if is_ident_part(c) => State::InParam,
                (State::InParam, '[') | (State::AfterArray, '[') => State::ArrayOpen,
                (State::InParam, ',') | (State::AfterArray, ',') => State::ParamStart,
                (State::InParam, ')') | (State::AfterArray, ')') => State::Done,
                (State::InParam, _) | (State::AfterArray, _) => {
                    return Err(err(offset, "unexpected character in parameter list"))
                }
                (State::ArrayOpen, ']') => State::AfterArray,
                (State::ArrayOpen, _) => return Err(err(offset, "unbalanced brackets")),
                (State::Done, _) => return Err(err(offset, "trailing characters after ')'")),
            };
        }

        match state {
            State::InSegment | State::InMember | State::Done => {}
            State::ParamStart | State::InParam | State::ArrayOpen | State::AfterArray => {
                return Err(err(text.len(), "unbalanced parentheses"))
            }
            State::SegmentStart | State::MemberStart => {
                return Err(err(text.len(), "empty segment"))
            }
        }

        let kind = if has_params {
            ElementKind::Method
        } else if has_member {
            ElementKind::Field
        } else if has_nested
            || text[last_segment_start..]
                .chars()
                .next()
                .is_some_and(char::is_uppercase)
        {
            ElementKind::Type
        } else {
            ElementKind::Package
        };

        Ok(ElementPath {
            raw: text.to_string(),
            kind,
        })
    }

    /// Builds a member path from a type path; parameter types must already be simple names.
    pub fn field(owner: &ElementPath, name: &str) -> Result<Self> {
        ElementPath::parse(&format!("{}#{}", owner.type_part(), name))
    }

    pub fn method<S: AsRef<str>>(owner: &ElementPath, name: &str, params: &[S]) -> Result<Self> {
        let params: Vec<&str> = params.iter().map(AsRef::as_ref).collect();
        ElementPath::parse(&format!(
            "{}#{}({})",
            owner.type_part(),
            name,
            params.join(",")
        ))
    }

    /// Nested type `Outer$Inner`, or a top-level type under a package.
    pub fn nested_type(owner: &ElementPath, name: &str) -> Result<Self> {
        let text = match owner.kind {
            ElementKind::Package => format!("{}.{}", owner.raw, name),
            _ => format!("{}${}", owner.type_part(), name),
        };
        let path = ElementPath::parse(&text)?;
        Ok(ElementPath {
            kind: ElementKind::Type,
            ..path
        })
    }

    /// Top-level type; `package` may be empty for the default package.
    pub fn top_level_type(package: &str, name: &str) -> Result<Self> {
        let text = if package.is_empty() {
            name.to_string()
        } else {
            format!("{package}.{name}")
        };
        let path = ElementPath::parse(&text)?;
        Ok(ElementPath {
            kind: ElementKind::Type,
            ..path
        })
    }

    pub fn package(name: &str) -> Result<Self> {
        let path = ElementPath::parse(name)?;
        if path.raw.contains(['#', '$']) {
            return Err(Error::Path {
                path: name.to_string(),
                offset: path.raw.find(['#', '$']).unwrap_or(0),
                message: "package names cannot contain members or nested types".into(),
            });
        }
        Ok(ElementPath {
            kind: ElementKind::Package,
            ..path
        })
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }

    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    /// The package or type portion (everything before `#`).
    pub fn type_part(&self) -> &str {
        match self.raw.find('#') {
            Some(i) => &self.raw[..i],
            None => &self.raw,
        }
    }

    pub fn member_name(&self) -> Option<&str> {
        let start = self.raw.find('#')? + 1;
        let end = self.raw.find('(').unwrap_or(self.raw.len());
        Some(&self.raw[start..end])
    }

    /// Parameter type names of a method path; empty for every other kind.
    pub fn params(&self) -> Vec<&str> {
        match (self.raw.find('('), self.raw.rfind(')')) {
            (Some(open), Some(close)) if close > open + 1 => {
                self.raw[open + 1..close].split(',').collect()
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for ElementPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl FromStr for ElementPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ElementPath::parse(s)
    }
}

impl Serialize for ElementPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.raw)
    }
}

impl<'de> Deserialize<'de> for ElementPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        ElementPath::parse(&raw).map_err(serde::de::Error::custom)
    }
}
