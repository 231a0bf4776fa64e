//! Levenshtein distance and keyword-set dispersion.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::num::{mean, population_stdev, Real};

/// Minimal number of single-character insertions, deletions and substitutions
/// turning `a` into `b`. Operates on Unicode scalar values.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let substitute = prev[j] + usize::from(ca != cb);
            let delete = prev[j + 1] + 1;
            let insert = curr[j] + 1;
            curr[j + 1] = substitute.min(delete).min(insert);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// `d / max(|a|, |b|)` in `[0, 1]`; two empty strings are at distance 0.
pub fn normalized_levenshtein<T: Real>(a: &str, b: &str) -> T {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return T::zero();
    }
    <T as Real>::from_usize(levenshtein(a, b)) / <T as Real>::from_usize(longest)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeywordMode {
    /// Distances over all unordered pairs of distinct keywords.
    Pairwise,
    /// Distances from one reference keyword to every keyword, itself included.
    Anchored(String),
}

impl KeywordMode {
    pub fn label(&self) -> String {
        match self {
            KeywordMode::Pairwise => "pairwise".into(),
            KeywordMode::Anchored(r) => format!("anchored:{r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeywordDistance<T> {
    pub mean: T,
    pub stdev: T,
    /// Number of distances the mean was taken over.
    pub samples: usize,
}

/// Mean and population standard deviation of the keyword distance multiset.
/// Duplicate keywords collapse before distances are taken.
pub fn keyword_distance<T: Real, S: AsRef<str>>(
    keywords: &[S],
    mode: &KeywordMode,
) -> Result<KeywordDistance<T>> {
    let set: BTreeSet<&str> = keywords.iter().map(AsRef::as_ref).collect();
    if set.is_empty() {
        return Err(Error::Validation("keyword set is empty".into()));
    }
    let distances: Vec<T> = match mode {
        KeywordMode::Pairwise => {
            let items: Vec<&str> = set.iter().copied().collect();
            let mut d = Vec::new();
            for (i, a) in items.iter().enumerate() {
                for b in &items[i + 1..] {
                    d.push(<T as Real>::from_usize(levenshtein(a, b)));
                }
            }
            d
        }
        KeywordMode::Anchored(reference) => {
            if !set.contains(reference.as_str()) {
                return Err(Error::Validation(format!(
                    "reference keyword `{reference}` is not in the keyword set"
                )));
            }
            set.iter()
                .map(|k| <T as Real>::from_usize(levenshtein(reference, k)))
                .collect()
        }
    };
    if distances.is_empty() {
        return Ok(KeywordDistance {
            mean: T::zero(),
            stdev: T::zero(),
            samples: 0,
        });
    }
    Ok(KeywordDistance {
        mean: mean(&distances).expect("non-empty"),
        stdev: population_stdev(&distances).expect("non-empty"),
        samples: distances.len(),
    })
}

/// Aggregate of per-concern keyword distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LexicalSummary<T> {
    /// Mean of the per-concern means.
    pub unweighted: T,
    /// Mean over all individual distances pooled across concerns.
    pub weighted: T,
}

pub fn summarize<T: Real>(per_concern: &[KeywordDistance<T>]) -> Option<LexicalSummary<T>> {
    let means: Vec<T> = per_concern.iter().map(|d| d.mean).collect();
    let unweighted = mean(&means)?;
    let total: usize = per_concern.iter().map(|d| d.samples).sum();
    let weighted = if total == 0 {
        T::zero()
    } else {
        per_concern.iter().fold(T::zero(), |acc, d| {
            acc + d.mean * <T as Real>::from_usize(d.samples)
        }) / <T as Real>::from_usize(total)
    };
    Some(LexicalSummary {
        unweighted,
        weighted,
    })
}

/// Splits an identifier into lowercase words on camelCase, acronym, digit,
/// underscore and whitespace boundaries, joined by single spaces.
/// `NoteIO` becomes `note io`, `XMLFileReader` becomes `xml file reader`.
pub fn tokenize_identifier(name: &str) -> String {
    let chars: Vec<char> = name.chars().collect();
    let mut words: Vec<String> = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            continue;
        }
        if let Some(prev) = current.chars().last() {
            let next = chars.get(i + 1).copied();
            let boundary = (prev.is_lowercase() && c.is_uppercase())
                || (prev.is_uppercase()
                    && c.is_uppercase()
                    && next.is_some_and(char::is_lowercase))
                || (prev.is_alphabetic() != c.is_alphabetic());
            if boundary {
                words.push(std::mem::take(&mut current));
            }
        }
        current.push(c);
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
        .iter()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_strings() {
        assert_eq!(levenshtein("abc", "abc"), 0);
        assert_eq!(levenshtein("", ""), 0);
        assert_eq!(levenshtein("", "abc"), 3);
    }

    #[test]
    fn persistence_keywords() {
        assert_eq!(levenshtein("Persistence", "NotesPersistenceFormat"), 11);
    }

    #[test]
    fn kitten_sitting() {
        assert_eq!(levenshtein("kitten", "sitting"), 3);
    }

    #[test]
    fn single_keyword_has_zero_spread() {
        let d: KeywordDistance<f64> =
            keyword_distance(&["Unused", "Unused"], &KeywordMode::Pairwise).unwrap();
        assert_eq!((d.mean, d.stdev), (0.0, 0.0));
    }

    #[test]
    fn pairwise_single_pair() {
        let d: KeywordDistance<f64> =
            keyword_distance(&["abc", "abd"], &KeywordMode::Pairwise).unwrap();
        assert_eq!((d.mean, d.stdev), (1.0, 0.0));
    }

    #[test]
    fn anchored_includes_self_distance() {
        let d: KeywordDistance<f32> =
            keyword_distance(&["a", "abb"], &KeywordMode::Anchored("a".into())).unwrap();
        assert_eq!((d.mean, d.stdev), (1.0, 1.0));
    }

    #[test]
    fn anchored_reference_must_be_member() {
        let r = keyword_distance::<f64, _>(&["a"], &KeywordMode::Anchored("b".into()));
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn identifier_tokens() {
        assert_eq!(tokenize_identifier("NotesSaving"), "notes saving");
        assert_eq!(tokenize_identifier("NoteIO"), "note io");
        assert_eq!(tokenize_identifier("XMLFileReader"), "xml file reader");
        assert_eq!(tokenize_identifier("saving_notes"), "saving notes");
        assert_eq!(tokenize_identifier("Utf8Reader"), "utf 8 reader");
    }

    #[test]
    fn summary_weights_by_pair_count() {
        let per = [
            KeywordDistance { mean: 2.0, stdev: 0.0, samples: 1 },
            KeywordDistance { mean: 5.0, stdev: 0.0, samples: 3 },
        ];
        let s = summarize(&per).unwrap();
        assert_eq!(s.unweighted, 3.5);
        assert_eq!(s.weighted, 17.0 / 4.0);
    }

    proptest! {
        #[test]
        fn keyword_distance_ignores_order(mut words in prop::collection::vec("[a-c]{0,5}", 1..6)) {
            let a: KeywordDistance<f64> = keyword_distance(&words, &KeywordMode::Pairwise).unwrap();
            words.reverse();
            let b: KeywordDistance<f64> = keyword_distance(&words, &KeywordMode::Pairwise).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
