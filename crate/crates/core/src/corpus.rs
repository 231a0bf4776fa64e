//! Multi-annotator concern corpus and the concern dictionary used to build it.
//!
//! The corpus stores the annotation-occurrence relation as a map from
//! `(concern, element)` to the set of annotators who placed that concern on that
//! element. The size of that set is the occurrence magnitude.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::simple_name;
use crate::path::ElementPath;
use crate::snapshot_io::{json_error, with_file};
use crate::textdist::levenshtein;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConcernKind {
    Domain,
    Design,
    Maintenance,
    Unspecified,
}

impl ConcernKind {
    pub const ALL: [ConcernKind; 4] = [
        ConcernKind::Domain,
        ConcernKind::Design,
        ConcernKind::Maintenance,
        ConcernKind::Unspecified,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ConcernKind::Domain => "domain",
            ConcernKind::Design => "design",
            ConcernKind::Maintenance => "maintenance",
            ConcernKind::Unspecified => "unspecified",
        }
    }

    /// `unspecified` is compatible with every kind; two specified kinds must match.
    fn merge(self, other: ConcernKind) -> Option<ConcernKind> {
        match (self, other) {
            (a, b) if a == b => Some(a),
            (ConcernKind::Unspecified, b) => Some(b),
            (a, ConcernKind::Unspecified) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for ConcernKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConcernKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "domain" => Ok(ConcernKind::Domain),
            "design" => Ok(ConcernKind::Design),
            "maintenance" => Ok(ConcernKind::Maintenance),
            "unspecified" | "" => Ok(ConcernKind::Unspecified),
            other => Err(Error::Validation(format!("unknown concern kind `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Concern {
    pub name: String,
    pub kind: ConcernKind,
    /// Distinct annotator-local annotation type simple names mapped to this concern.
    pub keywords: BTreeSet<String>,
    /// Annotators who recognized the concern at all.
    pub recognizers: BTreeSet<String>,
}

impl Concern {
    pub fn new(name: impl Into<String>, kind: ConcernKind) -> Self {
        Concern {
            name: name.into(),
            kind,
            keywords: BTreeSet::new(),
            recognizers: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    project: String,
    annotators: BTreeSet<String>,
    concerns: BTreeMap<String, Concern>,
    occurrences: BTreeMap<String, BTreeMap<ElementPath, BTreeSet<String>>>,
}

impl Corpus {
    pub fn new(project: impl Into<String>) -> Self {
        Corpus {
            project: project.into(),
            ..Default::default()
        }
    }

    pub fn project(&self) -> &str {
        &self.project
    }

    pub fn add_annotator(&mut self, annotator: &str) {
        self.annotators.insert(annotator.to_string());
    }

    /// Registers a concern, or reconciles its kind with an existing one.
    pub fn declare_concern(&mut self, name: &str, kind: ConcernKind) -> Result<&mut Concern> {
        let concern = self
            .concerns
            .entry(name.to_string())
            .or_insert_with(|| Concern::new(name, kind));
        concern.kind = concern.kind.merge(kind).ok_or_else(|| {
            Error::Validation(format!(
                "concern `{name}` is assigned conflicting kinds {} and {kind}",
                concern.kind
            ))
        })?;
        Ok(concern)
    }

    /// Marks `annotator` as recognizing `concern` under the local name `keyword`.
    pub fn recognize(&mut self, concern: &str, annotator: &str, keyword: &str) -> Result<()> {
        self.annotators.insert(annotator.to_string());
        let c = self.concern_mut(concern)?;
        c.recognizers.insert(annotator.to_string());
        c.keywords.insert(keyword.to_string());
        Ok(())
    }

    /// Adds `annotator` to the annotator set of `(concern, element)`.
    pub fn record(&mut self, concern: &str, element: ElementPath, annotator: &str) -> Result<()> {
        self.annotators.insert(annotator.to_string());
        self.concern_mut(concern)?
            .recognizers
            .insert(annotator.to_string());
        self.occurrences
            .entry(concern.to_string())
            .or_default()
            .entry(element)
            .or_default()
            .insert(annotator.to_string());
        Ok(())
    }

    fn concern_mut(&mut self, name: &str) -> Result<&mut Concern> {
        self.concerns.get_mut(name).ok_or_else(|| Error::NotFound {
            what: "concern",
            name: name.to_string(),
            suggestions: vec![],
        })
    }

    pub fn annotators(&self) -> &BTreeSet<String> {
        &self.annotators
    }

    pub fn concerns(&self) -> impl Iterator<Item = &Concern> {
        self.concerns.values()
    }

    pub fn concern_count(&self) -> usize {
        self.concerns.len()
    }

    pub fn concern(&self, name: &str) -> Option<&Concern> {
        self.concerns.get(name)
    }

    /// Like [`Corpus::concern`], but an unknown name is an error that lists
    /// concerns within edit distance 2 of it.
    pub fn require_concern(&self, name: &str) -> Result<&Concern> {
        self.concerns.get(name).ok_or_else(|| Error::NotFound {
            what: "concern",
            name: name.to_string(),
            suggestions: self.near_misses(name, 2),
        })
    }

    pub fn near_misses(&self, name: &str, max_distance: usize) -> Vec<String> {
        let mut scored: Vec<(usize, &String)> = self
            .concerns
            .keys()
            .map(|k| (levenshtein(k, name), k))
            .filter(|(d, _)| *d <= max_distance)
            .collect();
        scored.sort();
        scored.into_iter().map(|(_, k)| k.clone()).collect()
    }

    pub fn concern_names(&self) -> impl Iterator<Item = &str> {
        self.concerns.keys().map(String::as_str)
    }

    /// Elements of `concern` with their annotator sets; empty for unknown concerns.
    pub fn occurrences_of<'a>(
        &'a self,
        concern: &str,
    ) -> impl Iterator<Item = (&'a ElementPath, &'a BTreeSet<String>)> + 'a {
        self.occurrences
            .get(concern)
            .into_iter()
            .flat_map(|m| m.iter())
    }

    /// Every `(concern, element, annotators)` triple in canonical order.
    pub fn all_occurrences(
        &self,
    ) -> impl Iterator<Item = (&str, &ElementPath, &BTreeSet<String>)> {
        self.occurrences.iter().flat_map(|(c, m)| {
            m.iter()
                .map(move |(p, annotators)| (c.as_str(), p, annotators))
        })
    }

    pub fn annotators_of(&self, concern: &str, element: &ElementPath) -> Option<&BTreeSet<String>> {
        self.occurrences.get(concern)?.get(element)
    }

    /// Distinct annotated program elements.
    pub fn elements(&self) -> BTreeSet<&ElementPath> {
        self.occurrences.values().flat_map(|m| m.keys()).collect()
    }

    pub fn occurrence_count(&self) -> usize {
        self.occurrences.values().map(BTreeMap::len).sum()
    }

    /// Checks the magnitude bounds: every pair has at least one annotator, and
    /// those annotators are recognizers of the concern.
    pub fn check_invariants(&self) -> Result<()> {
        for (concern, element, annotators) in self.all_occurrences() {
            let c = self.concerns.get(concern).ok_or_else(|| {
                Error::Validation(format!("occurrence references unknown concern `{concern}`"))
            })?;
            if annotators.is_empty() {
                return Err(Error::Validation(format!(
                    "({concern}, {element}) has an empty annotator set"
                )));
            }
            if !annotators.is_subset(&c.recognizers) {
                return Err(Error::Validation(format!(
                    "({concern}, {element}) names annotators who do not recognize the concern"
                )));
            }
        }
        for c in self.concerns.values() {
            if c.recognizers.is_empty() {
                return Err(Error::Validation(format!(
                    "concern `{}` has no recognizers",
                    c.name
                )));
            }
            if !c.recognizers.is_subset(&self.annotators) {
                return Err(Error::Validation(format!(
                    "concern `{}` lists an unknown annotator",
                    c.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusWire {
    project: String,
    annotators: Vec<String>,
    concerns: Vec<Concern>,
    occurrences: Vec<OccurrenceWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OccurrenceWire {
    concern: String,
    element: ElementPath,
    annotators: BTreeSet<String>,
}

impl Corpus {
    pub fn to_json(&self) -> String {
        let wire = CorpusWire {
            project: self.project.clone(),
            annotators: self.annotators.iter().cloned().collect(),
            concerns: self.concerns.values().cloned().collect(),
            occurrences: self
                .all_occurrences()
                .map(|(c, p, a)| OccurrenceWire {
                    concern: c.to_string(),
                    element: p.clone(),
                    annotators: a.clone(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&wire).expect("corpus serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: CorpusWire = serde_json::from_str(text).map_err(json_error)?;
        let mut corpus = Corpus::new(wire.project);
        corpus.annotators = wire.annotators.into_iter().collect();
        for c in wire.concerns {
            if corpus.concerns.insert(c.name.clone(), c).is_some() {
                return Err(Error::Validation("duplicate concern entry".into()));
            }
        }
        for o in wire.occurrences {
            let slot = corpus
                .occurrences
                .entry(o.concern.clone())
                .or_default()
                .entry(o.element.clone())
                .or_default();
            if !slot.is_empty() {
                return Err(Error::Validation(format!(
                    "duplicate occurrence ({}, {})",
                    o.concern, o.element
                )));
            }
            *slot = o.annotators;
        }
        corpus.check_invariants()?;
        Ok(corpus)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("cannot read {}", path.display()), e))?;
        Corpus::from_json(&text).map_err(|e| with_file(e, path))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())
            .map_err(|e| Error::io(format!("cannot write {}", path.display()), e))
    }
}

/// What to do with annotation types the dictionary does not mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnmappedPolicy {
    /// The local simple name becomes the canonical concern, kind unspecified.
    #[default]
    Identity,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionaryEntry {
    pub annotator: String,
    pub local: String,
    pub canonical: String,
    pub kind: ConcernKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcernDictionary {
    pub entries: Vec<DictionaryEntry>,
    #[serde(default)]
    pub defaults: UnmappedPolicy,
}

impl ConcernDictionary {
    pub fn identity() -> Self {
        ConcernDictionary::default()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dict: ConcernDictionary = serde_json::from_str(text).map_err(json_error)?;
        dict.validate()?;
        Ok(dict)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("cannot read {}", path.display()), e))?;
        ConcernDictionary::from_json(&text).map_err(|e| with_file(e, path))
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("dictionary serializes");
        out.push('\n');
        out
    }

    /// Rejects ambiguous local names and canonical concerns with conflicting kinds.
    pub fn validate(&self) -> Result<()> {
        let mut targets: BTreeMap<(&str, &str), &str> = BTreeMap::new();
        let mut kinds: BTreeMap<&str, ConcernKind> = BTreeMap::new();
        for e in &self.entries {
            if let Some(prev) = targets.insert((&e.annotator, &e.local), &e.canonical) {
                if prev != e.canonical {
                    return Err(Error::Validation(format!(
                        "annotator {} maps `{}` to both `{prev}` and `{}`",
                        e.annotator, e.local, e.canonical
                    )));
                }
            }
            let kind = kinds.entry(&e.canonical).or_insert(e.kind);
            *kind = kind.merge(e.kind).ok_or_else(|| {
                Error::Validation(format!(
                    "concern `{}` is assigned conflicting kinds {kind} and {}",
                    e.canonical, e.kind
                ))
            })?;
        }
        Ok(())
    }

    /// Looks up a local annotation type, first by its full name, then by its simple name.
    pub fn lookup(&self, annotator: &str, local: &str) -> Option<&DictionaryEntry> {
        let exact = self
            .entries
            .iter()
            .find(|e| e.annotator == annotator && e.local == local);
        exact.or_else(|| {
            let simple = simple_name(local);
            self.entries
                .iter()
                .find(|e| e.annotator == annotator && e.local == simple)
        })
    }
}
