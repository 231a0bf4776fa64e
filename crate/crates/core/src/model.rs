//! Snapshot domain types: annotation declarations, uses and occurrences.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::path::ElementPath;

/// Annotation parameter names mapped to values. A single unnamed value is stored as `value`.
pub type Params = BTreeMap<String, ParamValue>;

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Decimal(f64),
    Str(String),
    /// Qualified (`User.ADMIN`) or bare constant, resolved only lexically.
    Enum(String),
    Array(Vec<ParamValue>),
    Annotation(Box<AnnotationUse>),
}

impl ParamValue {
    pub fn variant_name(&self) -> &'static str {
        match self {
            ParamValue::Bool(_) => "bool",
            ParamValue::Int(_) => "int",
            ParamValue::Decimal(_) => "decimal",
            ParamValue::Str(_) => "string",
            ParamValue::Enum(_) => "enum",
            ParamValue::Array(_) => "array",
            ParamValue::Annotation(_) => "annotation",
        }
    }

    /// Arrays must not mix variants (an int/decimal mix counts as mixed).
    pub fn is_homogeneous(&self) -> bool {
        match self {
            ParamValue::Array(items) => {
                let first = items.first().map(ParamValue::variant_name);
                items
                    .iter()
                    .all(|v| Some(v.variant_name()) == first && v.is_homogeneous())
            }
            ParamValue::Annotation(a) => a.params.values().all(ParamValue::is_homogeneous),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationUse {
    pub type_name: String,
    pub params: Params,
}

impl AnnotationUse {
    pub fn marker(type_name: impl Into<String>) -> Self {
        AnnotationUse {
            type_name: type_name.into(),
            params: Params::new(),
        }
    }

    pub fn simple_name(&self) -> &str {
        simple_name(&self.type_name)
    }
}

/// Last dotted segment of a qualified name.
pub fn simple_name(qualified: &str) -> &str {
    qualified.rsplit('.').next().unwrap_or(qualified)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationTypeDecl {
    pub name: String,
    pub doc: Option<String>,
    pub meta: Vec<AnnotationUse>,
}

impl AnnotationTypeDecl {
    pub fn simple_name(&self) -> &str {
        simple_name(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Occurrence {
    pub type_name: String,
    pub element: ElementPath,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Snapshot {
    pub annotator: String,
    pub project: String,
    pub annotation_types: Vec<AnnotationTypeDecl>,
    pub occurrences: Vec<Occurrence>,
}

impl Snapshot {
    pub fn new(annotator: impl Into<String>, project: impl Into<String>) -> Self {
        Snapshot {
            annotator: annotator.into(),
            project: project.into(),
            ..Default::default()
        }
    }

    /// Sorts declarations by name and occurrences by (type, element).
    pub fn canonicalize(&mut self) {
        self.annotation_types.sort_by(|a, b| a.name.cmp(&b.name));
        self.occurrences.sort_by(|a, b| {
            (a.type_name.as_str(), &a.element).cmp(&(b.type_name.as_str(), &b.element))
        });
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    pub fn declares(&self, type_name: &str) -> bool {
        self.annotation_types.iter().any(|d| d.name == type_name)
    }

    /// Occurrence of an annotation type this snapshot does not declare (library or config annotation).
    pub fn is_external(&self, occurrence: &Occurrence) -> bool {
        !self.declares(&occurrence.type_name)
    }

    pub fn external_type_names(&self) -> BTreeSet<&str> {
        self.occurrences
            .iter()
            .filter(|o| self.is_external(o))
            .map(|o| o.type_name.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "WARN",
            Severity::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// File position, element path or declaration name, depending on the producer.
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    pub fn warning(location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn error(location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            location: location.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.severity, self.location, self.message)
    }
}

/// Checks the snapshot invariants. An empty result means the snapshot is well formed.
pub fn validate_snapshot(snapshot: &Snapshot) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    let mut names = HashSet::new();
    for decl in &snapshot.annotation_types {
        if !names.insert(decl.name.as_str()) {
            out.push(Diagnostic::error(
                &decl.name,
                "duplicate annotation type declaration",
            ));
        }
        for meta in &decl.meta {
            check_params(&decl.name, &meta.params, &mut out);
        }
    }

    let mut pairs = HashSet::new();
    for occ in &snapshot.occurrences {
        if !pairs.insert((occ.type_name.as_str(), &occ.element)) {
            out.push(Diagnostic::error(
                occ.element.as_str(),
                format!("duplicate occurrence of @{}", occ.type_name),
            ));
        }
        if !names.contains(occ.type_name.as_str()) {
            out.push(Diagnostic::warning(
                occ.element.as_str(),
                format!("external: @{} is not declared in this snapshot", occ.type_name),
            ));
        }
        check_params(occ.element.as_str(), &occ.params, &mut out);
    }
    out
}

fn check_params(location: &str, params: &Params, out: &mut Vec<Diagnostic>) {
    for (name, value) in params {
        if !value.is_homogeneous() {
            out.push(Diagnostic::error(
                location,
                format!("parameter `{name}` mixes value kinds in one array"),
            ));
        }
    }
}
