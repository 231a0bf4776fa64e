//! Annotation extraction from Java-style source trees.

mod annotation;
mod lexer;
mod scanner;

pub use annotation::{parse_annotation_use, unquote, SyntaxError};
pub use lexer::{tokenize, tokenize_lossy, LexWarning, Token, TokenKind};
pub use scanner::{clean_doc, scan, DeclEvent, DeclKind, PlacedAnnotation, ScanOutput};

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::model::{AnnotationTypeDecl, AnnotationUse, Occurrence, ParamValue, Snapshot};

/// Problem found while extracting, reported as `WARN <file>:<line>:<col> <message>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceWarning {
    pub file: PathBuf,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for SourceWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "WARN {}:{}:{} {}",
            self.file.display(),
            self.line,
            self.col,
            self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub snapshot: Snapshot,
    pub warnings: Vec<SourceWarning>,
}

fn simple_type_name(name: &str) -> &str {
    name.rsplit(['.', '$']).next().unwrap_or(name)
}

/// Qualifies simple annotation names that match exactly one declared
/// annotation type; anything else is kept as written.
struct Resolver {
    by_simple: BTreeMap<String, BTreeSet<String>>,
}

impl Resolver {
    fn name(&self, written: &str) -> String {
        if written.contains('.') {
            return written.to_string();
        }
        match self.by_simple.get(written) {
            Some(candidates) if candidates.len() == 1 => {
                candidates.iter().next().expect("one candidate").clone()
            }
            _ => written.to_string(),
        }
    }

    fn annotation(&self, a: &AnnotationUse) -> AnnotationUse {
        AnnotationUse {
            type_name: self.name(&a.type_name),
            params: a
                .params
                .iter()
                .map(|(k, v)| (k.clone(), self.value(v)))
                .collect(),
        }
    }

    fn value(&self, v: &ParamValue) -> ParamValue {
        match v {
            ParamValue::Array(items) => ParamValue::Array(items.iter().map(|i| self.value(i)).collect()),
            ParamValue::Annotation(a) => ParamValue::Annotation(Box::new(self.annotation(a))),
            other => other.clone(),
        }
    }
}

/// Builds a snapshot from in-memory compilation units given as
/// `(file label, source)` pairs, in the order given.
pub fn extract_sources<P: AsRef<Path> + Sync, S: AsRef<str> + Sync>(
    sources: &[(P, S)],
    annotator: &str,
    project: &str,
) -> Extraction {
    let scans: Vec<ScanOutput> = sources.par_iter().map(|(_, s)| scan(s.as_ref())).collect();
    let mut warnings = Vec::new();
    let warn = |warnings: &mut Vec<SourceWarning>, file: &Path, line, col, message: String| {
        warnings.push(SourceWarning {
            file: file.to_path_buf(),
            line,
            col,
            message,
        })
    };

    let mut by_simple: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for e in scans.iter().flat_map(|s| &s.events) {
        if e.kind == DeclKind::AnnotationTypeDecl {
            let name = e.path.as_str();
            by_simple
                .entry(simple_type_name(name).to_string())
                .or_default()
                .insert(name.to_string());
        }
    }
    let resolver = Resolver { by_simple };

    let mut snapshot = Snapshot::new(annotator, project);
    let mut declared = HashSet::new();
    let mut placed = HashSet::new();
    for ((file, _), out) in sources.iter().zip(&scans) {
        let file = file.as_ref();
        for w in &out.warnings {
            warn(&mut warnings, file, w.line, w.col, w.message.clone());
        }
        for e in &out.events {
            if e.kind == DeclKind::AnnotationTypeDecl {
                let name = e.path.as_str().to_string();
                if !declared.insert(name.clone()) {
                    warn(&mut warnings, file, e.line, e.col, format!("annotation type {name} declared more than once"));
                    continue;
                }
                snapshot.annotation_types.push(AnnotationTypeDecl {
                    name,
                    doc: e.doc.clone(),
                    meta: e.annotations.iter().map(|a| resolver.annotation(&a.annotation)).collect(),
                });
                continue;
            }
            for a in &e.annotations {
                let use_ = resolver.annotation(&a.annotation);
                if !placed.insert((use_.type_name.clone(), e.path.clone())) {
                    warn(
                        &mut warnings,
                        file,
                        a.line,
                        a.col,
                        format!("repeated @{} on {} ignored", use_.type_name, e.path),
                    );
                    continue;
                }
                snapshot.occurrences.push(Occurrence {
                    type_name: use_.type_name,
                    element: e.path.clone(),
                    params: use_.params,
                });
            }
        }
    }
    snapshot.canonicalize();
    Extraction { snapshot, warnings }
}

/// Extracts every `.java` file under `root`, visited in lexicographic path
/// order. Warnings name files relative to `root`.
pub fn extract_snapshot(root: &Path, annotator: &str, project: &str) -> Result<Extraction> {
    let mut files = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).display().to_string();
            match e.into_io_error() {
                Some(io) => Error::io(format!("reading {path}"), io),
                None => Error::Validation(format!("cannot walk {path}")),
            }
        })?;
        let is_java = entry.path().extension().is_some_and(|x| x == "java");
        if entry.file_type().is_file() && is_java {
            files.push(entry.into_path());
        }
    }
    files.sort();
    let sources = files
        .par_iter()
        .map(|path| {
            let bytes = std::fs::read(path)
                .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
            let text = String::from_utf8(bytes).map_err(|e| Error::Parse {
                file: Some(path.clone()),
                line: 0,
                column: 0,
                message: format!("not valid UTF-8: {e}"),
            })?;
            let label = path.strip_prefix(root).unwrap_or(path).to_path_buf();
            Ok((label, text))
        })
        .collect::<Result<Vec<(PathBuf, String)>>>()?;
    Ok(extract_sources(&sources, annotator, project))
}
