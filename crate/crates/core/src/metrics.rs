//! Overlap metrics over a [`Corpus`].
//!
//! An occurrence `(c, p)` is *shared* when its magnitude `m(c, p)`, the number of
//! distinct annotators who placed `c` on `p`, is at least two.
//!
//! * `EA(c)`  = shared occurrences of `c` / occurrences of `c`
//! * `EA`     = the same ratio with numerator and denominator summed over all concerns
//! * `wEA(c)` = like `EA(c)`, each occurrence weighted by its magnitude
//! * `wEA`    = magnitude-weighted overall ratio (an extension; only `wEA(c)` is standard)
//!
//! All ratios are exact rationals; rounding happens only when rendered.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{ConcernKind, Corpus};
use crate::error::{Error, Result};
use crate::num::{Percentage, Real};
use crate::path::ElementPath;
use crate::textdist::{keyword_distance, KeywordDistance, KeywordMode};

/// Minimum magnitude for an occurrence to count as shared.
pub const SHARED_MAGNITUDE: usize = 2;

/// Minimum recognizer count for a concern to count as shared.
pub const DEFAULT_MIN_RECOGNIZERS: usize = 2;

/// Numerators and denominators of the effective-agreement ratios.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AgreementCounts {
    pub shared: u64,
    pub total: u64,
    pub shared_weight: u64,
    pub total_weight: u64,
}

impl AgreementCounts {
    pub fn ea(&self) -> Option<Percentage> {
        Percentage::from_counts(self.shared, self.total)
    }

    pub fn wea(&self) -> Option<Percentage> {
        Percentage::from_counts(self.shared_weight, self.total_weight)
    }
}

impl std::ops::Add for AgreementCounts {
    type Output = AgreementCounts;

    fn add(self, o: AgreementCounts) -> AgreementCounts {
        AgreementCounts {
            shared: self.shared + o.shared,
            total: self.total + o.total,
            shared_weight: self.shared_weight + o.shared_weight,
            total_weight: self.total_weight + o.total_weight,
        }
    }
}

fn counts_unchecked(corpus: &Corpus, concern: &str) -> AgreementCounts {
    corpus
        .occurrences_of(concern)
        .fold(AgreementCounts::default(), |mut acc, (_, annotators)| {
            let m = annotators.len() as u64;
            acc.total += 1;
            acc.total_weight += m;
            if annotators.len() >= SHARED_MAGNITUDE {
                acc.shared += 1;
                acc.shared_weight += m;
            }
            acc
        })
}

pub fn concern_counts(corpus: &Corpus, concern: &str) -> Result<AgreementCounts> {
    corpus.require_concern(concern)?;
    Ok(counts_unchecked(corpus, concern))
}

pub fn overall_counts(corpus: &Corpus) -> AgreementCounts {
    corpus
        .concern_names()
        .map(|c| counts_unchecked(corpus, c))
        .fold(AgreementCounts::default(), |a, b| a + b)
}

/// `m(c, p)`: how many annotators placed `concern` on `element`.
pub fn magnitude(corpus: &Corpus, concern: &str, element: &ElementPath) -> Result<usize> {
    corpus.require_concern(concern)?;
    corpus
        .annotators_of(concern, element)
        .map(BTreeSet::len)
        .ok_or_else(|| Error::NotFound {
            what: "occurrence",
            name: format!("({concern}, {element})"),
            suggestions: vec![],
        })
}

pub fn shared_occurrences(corpus: &Corpus, concern: &str) -> Result<BTreeSet<ElementPath>> {
    corpus.require_concern(concern)?;
    Ok(corpus
        .occurrences_of(concern)
        .filter(|(_, a)| a.len() >= SHARED_MAGNITUDE)
        .map(|(p, _)| p.clone())
        .collect())
}

fn undefined_for(concern: &str) -> Error {
    Error::UndefinedMetric(format!("concern `{concern}` has no occurrences"))
}

pub fn ea_concern(corpus: &Corpus, concern: &str) -> Result<Percentage> {
    concern_counts(corpus, concern)?
        .ea()
        .ok_or_else(|| undefined_for(concern))
}

pub fn wea_concern(corpus: &Corpus, concern: &str) -> Result<Percentage> {
    concern_counts(corpus, concern)?
        .wea()
        .ok_or_else(|| undefined_for(concern))
}

pub fn ea_overall(corpus: &Corpus) -> Result<Percentage> {
    overall_counts(corpus)
        .ea()
        .ok_or_else(|| Error::UndefinedMetric("corpus has no occurrences".into()))
}

pub fn wea_overall(corpus: &Corpus) -> Result<Percentage> {
    overall_counts(corpus)
        .wea()
        .ok_or_else(|| Error::UndefinedMetric("corpus has no occurrences".into()))
}

/// One row of the per-concern report.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcernMetrics<T> {
    pub concern: String,
    pub n: usize,
    pub occurrences: u64,
    pub shared: u64,
    /// `None` when the concern has no occurrences.
    pub ea: Option<Percentage>,
    pub wea: Option<Percentage>,
    pub dl: T,
    pub dl_stdev: T,
    pub kind: ConcernKind,
}

#[derive(Debug, Clone, Default)]
pub struct MetricsOptions {
    /// Only report concerns with at least this many recognizers.
    pub min_recognizers: usize,
    pub fold_case: bool,
}

/// Per-concern rows ordered by recognizer count, then EA, both descending, then name.
pub fn concern_metrics<T: Real>(corpus: &Corpus, options: &MetricsOptions) -> Vec<ConcernMetrics<T>> {
    let mut rows: Vec<ConcernMetrics<T>> = corpus
        .concerns()
        .filter(|c| c.recognizers.len() >= options.min_recognizers)
        .map(|c| {
            let counts = counts_unchecked(corpus, &c.name);
            let keywords: Vec<String> = c
                .keywords
                .iter()
                .map(|k| if options.fold_case { k.to_lowercase() } else { k.clone() })
                .collect();
            let (dl, dl_stdev) = if keywords.is_empty() {
                (T::zero(), T::zero())
            } else {
                let d = keyword_distance::<T, _>(&keywords, &KeywordMode::Pairwise)
                    .expect("non-empty keyword set");
                (d.mean, d.stdev)
            };
            ConcernMetrics {
                concern: c.name.clone(),
                n: c.recognizers.len(),
                occurrences: counts.total,
                shared: counts.shared,
                ea: counts.ea(),
                wea: counts.wea(),
                dl,
                dl_stdev,
                kind: c.kind,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        b.n.cmp(&a.n)
            .then_with(|| b.ea.cmp(&a.ea))
            .then_with(|| a.concern.cmp(&b.concern))
    });
    rows
}

/// Concerns recognized in common by each pair of annotators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedMatrix {
    pub annotators: Vec<String>,
    /// `cells[i][j]`: concerns recognized by both; the diagonal holds each annotator's total.
    pub cells: Vec<Vec<usize>>,
}

pub fn shared_concern_matrix(corpus: &Corpus) -> Result<SharedMatrix> {
    let annotators: Vec<String> = corpus.annotators().iter().cloned().collect();
    if annotators.len() < 2 {
        return Err(Error::UndefinedMetric(format!(
            "a shared-concern matrix needs at least 2 annotators, corpus has {}",
            annotators.len()
        )));
    }
    let index: BTreeMap<&str, usize> = annotators
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    let mut cells = vec![vec![0; annotators.len()]; annotators.len()];
    for concern in corpus.concerns() {
        let ids: Vec<usize> = concern
            .recognizers
            .iter()
            .filter_map(|r| index.get(r.as_str()).copied())
            .collect();
        for &i in &ids {
            for &j in &ids {
                cells[i][j] += 1;
            }
        }
    }
    Ok(SharedMatrix { annotators, cells })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KindRow {
    pub kind: ConcernKind,
    pub total: usize,
    pub shared: usize,
    pub not_shared: usize,
    /// Share of all concerns in the corpus.
    pub percent_of_all: Option<Percentage>,
    /// Share of this kind's concerns that are shared.
    pub percent_shared: Option<Percentage>,
}

/// Concern counts per kind. Domain, design and maintenance rows are always
/// present; `unspecified` only when some concern has no kind.
pub fn kind_distribution(corpus: &Corpus, min_recognizers: usize) -> Vec<KindRow> {
    let all = corpus.concern_count() as u64;
    ConcernKind::ALL
        .iter()
        .filter_map(|&kind| {
            let of_kind: Vec<_> = corpus.concerns().filter(|c| c.kind == kind).collect();
            if kind == ConcernKind::Unspecified && of_kind.is_empty() {
                return None;
            }
            let shared = of_kind
                .iter()
                .filter(|c| c.recognizers.len() >= min_recognizers)
                .count();
            Some(KindRow {
                kind,
                total: of_kind.len(),
                shared,
                not_shared: of_kind.len() - shared,
                percent_of_all: Percentage::from_counts(of_kind.len() as u64, all),
                percent_shared: Percentage::from_counts(shared as u64, of_kind.len() as u64),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatorKinds {
    pub annotator: String,
    /// Indexed like [`ConcernKind::ALL`].
    pub counts: [usize; 4],
}

impl AnnotatorKinds {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn count(&self, kind: ConcernKind) -> usize {
        self.counts[kind_index(kind)]
    }

    /// Share of this annotator's concerns; `None` for an annotator with no concerns.
    pub fn percent(&self, kind: ConcernKind) -> Option<Percentage> {
        Percentage::from_counts(self.count(kind) as u64, self.total() as u64)
    }
}

fn kind_index(kind: ConcernKind) -> usize {
    ConcernKind::ALL
        .iter()
        .position(|&k| k == kind)
        .expect("kind in ALL")
}

pub fn per_annotator_kinds(corpus: &Corpus) -> Vec<AnnotatorKinds> {
    corpus
        .annotators()
        .iter()
        .map(|a| {
            let mut counts = [0; 4];
            for c in corpus.concerns().filter(|c| c.recognizers.contains(a)) {
                counts[kind_index(c.kind)] += 1;
            }
            AnnotatorKinds {
                annotator: a.clone(),
                counts,
            }
        })
        .collect()
}

/// Keyword distances of one concern.
#[derive(Debug, Clone, PartialEq)]
pub struct LexicalRow<T> {
    pub concern: String,
    pub keywords: Vec<String>,
    pub mode: KeywordMode,
    pub distance: KeywordDistance<T>,
}

/// Keyword distances per concern, in concern name order. With `anchored`, each
/// concern is anchored on its canonical name when that is one of its keywords,
/// otherwise on its first keyword.
pub fn lexical_rows<T: Real>(corpus: &Corpus, anchored: bool, fold_case: bool) -> Vec<LexicalRow<T>> {
    let fold = |k: &str| if fold_case { k.to_lowercase() } else { k.to_string() };
    corpus
        .concerns()
        .filter(|c| !c.keywords.is_empty())
        .map(|c| {
            let keywords: Vec<String> = c
                .keywords
                .iter()
                .map(|k| fold(k))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let mode = if anchored {
                let name = fold(&c.name);
                let reference = if keywords.contains(&name) {
                    name
                } else {
                    keywords[0].clone()
                };
                KeywordMode::Anchored(reference)
            } else {
                KeywordMode::Pairwise
            };
            let distance = keyword_distance(&keywords, &mode).expect("reference taken from the set");
            LexicalRow {
                concern: c.name.clone(),
                keywords,
                mode,
                distance,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ElementPath {
        ElementPath::parse(s).unwrap()
    }

    /// Concern `X` with magnitudes 3, 2, 1 over annotators A, B, C.
    fn three_two_one() -> Corpus {
        let mut c = Corpus::new("p");
        c.declare_concern("X", ConcernKind::Domain).unwrap();
        for a in ["A", "B", "C"] {
            c.record("X", p("p.T#a()"), a).unwrap();
        }
        for a in ["A", "B"] {
            c.record("X", p("p.T#b()"), a).unwrap();
        }
        c.record("X", p("p.T#c()"), "C").unwrap();
        c
    }

    #[test]
    fn magnitudes() {
        let c = three_two_one();
        assert_eq!(magnitude(&c, "X", &p("p.T#a()")).unwrap(), 3);
        assert_eq!(magnitude(&c, "X", &p("p.T#c()")).unwrap(), 1);
        assert!(matches!(
            magnitude(&c, "X", &p("p.T#zzz()")),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn shared_set_has_two_elements() {
        let c = three_two_one();
        let shared = shared_occurrences(&c, "X").unwrap();
        assert_eq!(shared.len(), 2);
        assert!(!shared.contains(&p("p.T#c()")));
    }

    #[test]
    fn ea_and_wea_of_three_two_one() {
        let c = three_two_one();
        assert_eq!(ea_concern(&c, "X").unwrap().render(2), "66.67");
        assert_eq!(wea_concern(&c, "X").unwrap().render(2), "83.33");
    }

    #[test]
    fn unknown_concern_is_not_found() {
        let c = three_two_one();
        assert!(matches!(ea_concern(&c, "Y"), Err(Error::NotFound { .. })));
    }

    #[test]
    fn concern_without_occurrences_is_undefined() {
        let mut c = three_two_one();
        c.declare_concern("Empty", ConcernKind::Design).unwrap();
        c.recognize("Empty", "A", "Empty").unwrap();
        assert!(matches!(ea_concern(&c, "Empty"), Err(Error::UndefinedMetric(_))));
        assert!(matches!(
            ea_overall(&Corpus::new("p")),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn single_annotator_overall_is_zero() {
        let mut c = Corpus::new("p");
        c.declare_concern("X", ConcernKind::Domain).unwrap();
        c.record("X", p("p.A"), "A").unwrap();
        c.record("X", p("p.B"), "A").unwrap();
        assert_eq!(ea_overall(&c).unwrap(), Percentage::zero());
        assert_eq!(wea_overall(&c).unwrap(), Percentage::zero());
    }

    #[test]
    fn matrix_with_disjoint_concerns() {
        let mut c = Corpus::new("p");
        c.declare_concern("X", ConcernKind::Domain).unwrap();
        c.declare_concern("Y", ConcernKind::Domain).unwrap();
        c.recognize("X", "A", "X").unwrap();
        c.recognize("Y", "D", "Y").unwrap();
        let m = shared_concern_matrix(&c).unwrap();
        assert_eq!(m.cells, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn matrix_needs_two_annotators() {
        let c = Corpus::new("p");
        assert!(matches!(shared_concern_matrix(&c), Err(Error::UndefinedMetric(_))));
    }

    #[test]
    fn unspecified_only_corpus() {
        let mut c = Corpus::new("p");
        for name in ["X", "Y"] {
            c.declare_concern(name, ConcernKind::Unspecified).unwrap();
            c.recognize(name, "A", name).unwrap();
        }
        let rows = kind_distribution(&c, DEFAULT_MIN_RECOGNIZERS);
        let unspecified = rows.iter().find(|r| r.kind == ConcernKind::Unspecified).unwrap();
        assert_eq!(unspecified.total, 2);
        assert!(rows
            .iter()
            .filter(|r| r.kind != ConcernKind::Unspecified)
            .all(|r| r.total == 0));
    }

    #[test]
    fn annotator_without_concerns_is_zero_row() {
        let mut c = three_two_one();
        c.add_annotator("Z");
        let rows = per_annotator_kinds(&c);
        let z = rows.iter().find(|r| r.annotator == "Z").unwrap();
        assert_eq!(z.total(), 0);
        assert_eq!(z.percent(ConcernKind::Domain), None);
    }
}
