//! Concern-location queries.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{ConcernKind, Corpus};
use crate::error::Result;
use crate::path::ElementPath;

/// All elements carrying `concern`, highest magnitude first, then by path.
pub fn find_usages(corpus: &Corpus, concern: &str) -> Result<Vec<(ElementPath, usize)>> {
    corpus.require_concern(concern)?;
    let mut out: Vec<(ElementPath, usize)> = corpus
        .occurrences_of(concern)
        .map(|(p, a)| (p.clone(), a.len()))
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Concerns placed on `element` with their magnitudes, by concern name.
pub fn concerns_of(corpus: &Corpus, element: &ElementPath) -> Vec<(String, usize)> {
    corpus
        .concern_names()
        .filter_map(|c| {
            corpus
                .annotators_of(c, element)
                .map(|a| (c.to_string(), a.len()))
        })
        .collect()
}

/// For each concern of `element`, the other elements sharing it.
pub fn related_elements(
    corpus: &Corpus,
    element: &ElementPath,
) -> BTreeMap<String, BTreeSet<ElementPath>> {
    concerns_of(corpus, element)
        .into_iter()
        .map(|(c, _)| {
            let others = corpus
                .occurrences_of(&c)
                .map(|(p, _)| p)
                .filter(|p| *p != element)
                .cloned()
                .collect();
            (c, others)
        })
        .collect()
}

/// Concerns of `kind` with their elements. Declared but unused concerns are
/// listed with no elements.
pub fn list_by_kind(corpus: &Corpus, kind: ConcernKind) -> Vec<(String, Vec<ElementPath>)> {
    corpus
        .concerns()
        .filter(|c| c.kind == kind)
        .map(|c| {
            let elements = corpus.occurrences_of(&c.name).map(|(p, _)| p.clone()).collect();
            (c.name.clone(), elements)
        })
        .collect()
}
