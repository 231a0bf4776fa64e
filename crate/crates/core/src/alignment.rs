//! Merging per-annotator snapshots into a corpus, and lexical alignment hints.

use std::collections::{BTreeSet, HashSet};

use crate::corpus::{ConcernDictionary, ConcernKind, Corpus, UnmappedPolicy};
use crate::error::{Error, Result};
use crate::model::{simple_name, Snapshot};
use crate::num::Real;
use crate::textdist::{normalized_levenshtein, tokenize_identifier};

/// Default minimum score for [`suggest_alignments`].
pub const DEFAULT_SUGGESTION_THRESHOLD: f64 = 0.5;

enum Resolution {
    Concern(String, ConcernKind),
    /// External annotation the dictionary does not mention; not a concern.
    Skip,
    Unmapped,
}

fn resolve(dict: &ConcernDictionary, snapshot: &Snapshot, local: &str) -> Resolution {
    if let Some(entry) = dict.lookup(&snapshot.annotator, local) {
        return Resolution::Concern(entry.canonical.clone(), entry.kind);
    }
    if !snapshot.declares(local) {
        return Resolution::Skip;
    }
    match dict.defaults {
        UnmappedPolicy::Identity => {
            Resolution::Concern(simple_name(local).to_string(), meta_kind(snapshot, local))
        }
        UnmappedPolicy::Reject => Resolution::Unmapped,
    }
}

/// Kind declared by a meta-annotation named after it, e.g. `@Domain` on the
/// annotation type, or inherited through meta-annotations that are themselves
/// declared types (`Observer` annotated `@DesignPattern`, which is `@Design`).
/// Unspecified when there is none or the candidates disagree.
pub fn meta_kind(snapshot: &Snapshot, type_name: &str) -> ConcernKind {
    let mut kinds = BTreeSet::new();
    let mut seen = HashSet::new();
    let mut pending = vec![type_name];
    while let Some(name) = pending.pop() {
        if !seen.insert(name) {
            continue;
        }
        let Some(decl) = snapshot.annotation_types.iter().find(|d| d.name == name) else {
            continue;
        };
        for m in &decl.meta {
            match m.simple_name().parse::<ConcernKind>() {
                Ok(k) if k != ConcernKind::Unspecified => {
                    kinds.insert(k);
                }
                _ => pending.push(&m.type_name),
            }
        }
    }
    match kinds.len() {
        1 => *kinds.first().expect("one kind"),
        _ => ConcernKind::Unspecified,
    }
}

/// Maps every declaration and occurrence through the dictionary and accumulates
/// annotator sets per `(concern, element)`.
///
/// Occurrences of annotation types the snapshot does not declare are ignored
/// unless the dictionary maps them explicitly.
pub fn merge(snapshots: &[Snapshot], dict: &ConcernDictionary) -> Result<Corpus> {
    let first = snapshots
        .first()
        .ok_or_else(|| Error::Validation("no snapshots to merge".into()))?;
    dict.validate()?;

    let mut seen = HashSet::new();
    for s in snapshots {
        if s.project != first.project {
            return Err(Error::Validation(format!(
                "snapshot of annotator {} belongs to project `{}`, expected `{}`",
                s.annotator, s.project, first.project
            )));
        }
        if !seen.insert(s.annotator.as_str()) {
            return Err(Error::Validation(format!(
                "annotator {} appears in more than one snapshot",
                s.annotator
            )));
        }
    }

    let mut corpus = Corpus::new(first.project.clone());
    let mut unmapped: BTreeSet<(String, String)> = BTreeSet::new();

    for s in snapshots {
        corpus.add_annotator(&s.annotator);
        let declared = s.annotation_types.iter().map(|d| d.name.as_str());
        let used = s.occurrences.iter().map(|o| o.type_name.as_str());
        for local in declared.chain(used) {
            match resolve(dict, s, local) {
                Resolution::Concern(name, kind) => {
                    corpus.declare_concern(&name, kind)?;
                    corpus.recognize(&name, &s.annotator, simple_name(local))?;
                }
                Resolution::Unmapped => {
                    unmapped.insert((s.annotator.clone(), local.to_string()));
                }
                Resolution::Skip => {}
            }
        }
        for occ in &s.occurrences {
            if let Resolution::Concern(name, _) = resolve(dict, s, &occ.type_name) {
                corpus.record(&name, occ.element.clone(), &s.annotator)?;
            }
        }
    }

    if !unmapped.is_empty() {
        let listing: Vec<String> = unmapped
            .iter()
            .map(|(a, t)| format!("{a}:{t}"))
            .collect();
        return Err(Error::Validation(format!(
            "unmapped annotation types: {}",
            listing.join(", ")
        )));
    }
    Ok(corpus)
}

/// Wraps a single snapshot as a one-annotator corpus with identity mapping.
pub fn corpus_from_snapshot(snapshot: &Snapshot) -> Result<Corpus> {
    merge(std::slice::from_ref(snapshot), &ConcernDictionary::identity())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suggestion<T> {
    pub local_a: String,
    pub annotator_a: String,
    pub local_b: String,
    pub annotator_b: String,
    pub score: T,
}

/// Lowercase words of an identifier in sorted order, so `NotesSaving` and
/// `SavingNotes` normalize to the same string.
pub fn normalize_name(name: &str) -> String {
    let tokenized = tokenize_identifier(name);
    let mut words: Vec<&str> = tokenized.split(' ').collect();
    words.sort_unstable();
    words.join(" ")
}

/// `1 - normalized Levenshtein` of the normalized names.
pub fn name_similarity<T: Real>(a: &str, b: &str) -> T {
    T::one() - normalized_levenshtein::<T>(&normalize_name(a), &normalize_name(b))
}

/// Cross-annotator pairs of declared annotation types whose name similarity
/// reaches `threshold`, best first. Advisory only; nothing is applied.
pub fn suggest_alignments<T: Real>(snapshots: &[Snapshot], threshold: T) -> Result<Vec<Suggestion<T>>> {
    if !(threshold >= T::zero() && threshold <= T::one()) {
        return Err(Error::Validation(format!(
            "threshold {threshold} is outside [0, 1]"
        )));
    }
    let mut ordered: Vec<&Snapshot> = snapshots.iter().collect();
    ordered.sort_by(|a, b| a.annotator.cmp(&b.annotator));
    let names: Vec<BTreeSet<&str>> = ordered
        .iter()
        .map(|s| s.annotation_types.iter().map(|d| d.simple_name()).collect())
        .collect();

    let mut out = Vec::new();
    for i in 0..ordered.len() {
        for j in i + 1..ordered.len() {
            for a in &names[i] {
                for b in &names[j] {
                    let score = name_similarity::<T>(a, b);
                    if score >= threshold {
                        out.push(Suggestion {
                            local_a: a.to_string(),
                            annotator_a: ordered[i].annotator.clone(),
                            local_b: b.to_string(),
                            annotator_b: ordered[j].annotator.clone(),
                            score,
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| {
        y.score
            .partial_cmp(&x.score)
            .expect("finite scores")
            .then_with(|| {
                (&x.annotator_a, &x.local_a, &x.annotator_b, &x.local_b).cmp(&(
                    &y.annotator_a,
                    &y.local_a,
                    &y.annotator_b,
                    &y.local_b,
                ))
            })
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DictionaryEntry;
    use crate::model::{AnnotationTypeDecl, AnnotationUse, Occurrence, Params};
    use crate::path::ElementPath;

    fn snapshot(annotator: &str, types: &[&str], occs: &[(&str, &str)]) -> Snapshot {
        let mut s = Snapshot::new(annotator, "easynotes");
        for t in types {
            s.annotation_types.push(AnnotationTypeDecl {
                name: format!("concerns.{t}"),
                doc: None,
                meta: vec![],
            });
        }
        for (t, p) in occs {
            s.occurrences.push(Occurrence {
                type_name: format!("concerns.{t}"),
                element: ElementPath::parse(p).unwrap(),
                params: Params::new(),
            });
        }
        s
    }

    #[test]
    fn kind_from_meta_annotation() {
        let mut s = snapshot("A", &["Unused", "Both", "Plain"], &[]);
        s.annotation_types[0].meta = vec![AnnotationUse::marker("Maintenance"), AnnotationUse::marker("Retention")];
        s.annotation_types[1].meta = vec![AnnotationUse::marker("Domain"), AnnotationUse::marker("x.Design")];
        let c = corpus_from_snapshot(&s).unwrap();
        assert_eq!(c.concern("Unused").unwrap().kind, ConcernKind::Maintenance);
        assert_eq!(c.concern("Both").unwrap().kind, ConcernKind::Unspecified);
        assert_eq!(c.concern("Plain").unwrap().kind, ConcernKind::Unspecified);

        let mut s = snapshot("A", &["Observer", "DesignPattern"], &[]);
        s.annotation_types[0].meta = vec![AnnotationUse::marker("concerns.DesignPattern")];
        s.annotation_types[1].meta = vec![AnnotationUse::marker("Design"), AnnotationUse::marker("concerns.Observer")];
        assert_eq!(meta_kind(&s, "concerns.Observer"), ConcernKind::Design);
    }

    fn entry(annotator: &str, local: &str, canonical: &str, kind: ConcernKind) -> DictionaryEntry {
        DictionaryEntry {
            annotator: annotator.into(),
            local: local.into(),
            canonical: canonical.into(),
            kind,
        }
    }

    #[test]
    fn divergent_names_share_one_concern() {
        let e = "easynotes.io.NotesIO#save()";
        let b = snapshot("B", &["Persistence"], &[("Persistence", e)]);
        let c = snapshot("C", &["NoteIO"], &[("NoteIO", e)]);
        let dict = ConcernDictionary {
            entries: vec![
                entry("B", "Persistence", "Persistence", ConcernKind::Design),
                entry("C", "NoteIO", "Persistence", ConcernKind::Design),
            ],
            defaults: UnmappedPolicy::Reject,
        };
        let corpus = merge(&[b, c], &dict).unwrap();
        let path = ElementPath::parse(e).unwrap();
        assert_eq!(corpus.annotators_of("Persistence", &path).unwrap().len(), 2);
        let concern = corpus.concern("Persistence").unwrap();
        assert_eq!(concern.keywords.len(), 2);
        assert_eq!(concern.recognizers.len(), 2);
    }

    #[test]
    fn single_snapshot_identity() {
        let s = snapshot(
            "A",
            &["Filtering", "Unused"],
            &[("Filtering", "p.F#apply()"), ("Unused", "p.Old"), ("Filtering", "p.F")],
        );
        let corpus = corpus_from_snapshot(&s).unwrap();
        assert!(corpus.all_occurrences().all(|(_, _, a)| a.len() == 1));
        assert!(corpus.concerns().all(|c| c.recognizers.len() == 1));
        assert_eq!(corpus.concern_count(), 2);
    }

    #[test]
    fn reject_lists_unmapped_types() {
        let s = snapshot("A", &["Filtering"], &[("Filtering", "p.F")]);
        let dict = ConcernDictionary {
            entries: vec![],
            defaults: UnmappedPolicy::Reject,
        };
        match merge(&[s], &dict) {
            Err(Error::Validation(msg)) => assert!(msg.contains("A:concerns.Filtering")),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn external_annotations_are_not_concerns() {
        let mut s = snapshot("A", &["Filtering"], &[("Filtering", "p.F")]);
        s.occurrences.push(Occurrence {
            type_name: "Override".into(),
            element: ElementPath::parse("p.F#toString()").unwrap(),
            params: Params::new(),
        });
        let corpus = corpus_from_snapshot(&s).unwrap();
        assert_eq!(corpus.concern_names().collect::<Vec<_>>(), vec!["Filtering"]);
    }

    #[test]
    fn kind_conflict_is_an_error() {
        let a = snapshot("A", &["Io"], &[]);
        let b = snapshot("B", &["Io"], &[]);
        let dict = ConcernDictionary {
            entries: vec![
                entry("A", "Io", "Persistence", ConcernKind::Design),
                entry("B", "Io", "Persistence", ConcernKind::Domain),
            ],
            defaults: UnmappedPolicy::Identity,
        };
        assert!(merge(&[a, b], &dict).is_err());
    }

    #[test]
    fn project_and_annotator_checks() {
        let a = snapshot("A", &[], &[]);
        let mut b = snapshot("B", &[], &[]);
        b.project = "other".into();
        assert!(merge(&[a.clone(), b], &ConcernDictionary::identity()).is_err());
        assert!(merge(&[a.clone(), a], &ConcernDictionary::identity()).is_err());
    }

    #[test]
    fn word_permutations_score_one() {
        assert_eq!(normalize_name("SavingNotes"), "notes saving");
        assert_eq!(name_similarity::<f64>("NotesSaving", "SavingNotes"), 1.0);
        // "io note" vs "persistence": 9 edits over 11 chars
        let s = name_similarity::<f64>("Persistence", "NoteIO");
        assert!((s - 2.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn identical_names_score_one() {
        assert_eq!(name_similarity::<f64>("Unused", "Unused"), 1.0);
    }

    #[test]
    fn suggestions_are_sorted_and_thresholded() {
        let a = snapshot("A", &["NotesSaving", "Persistence"], &[]);
        let b = snapshot("B", &["SavingNotes", "NoteIO"], &[]);
        let s = suggest_alignments(&[b, a], DEFAULT_SUGGESTION_THRESHOLD).unwrap();
        assert!(s.iter().all(|x| x.score >= 0.5));
        assert!(s.windows(2).all(|w| w[0].score >= w[1].score));
        assert!(s.iter().any(|x| x.local_a == "NotesSaving" && x.local_b == "SavingNotes"));
        assert!(!s.iter().any(|x| x.local_a == "Persistence" && x.local_b == "NoteIO"));
        assert!(suggest_alignments(&[], 1.5f64).is_err());
    }
}
