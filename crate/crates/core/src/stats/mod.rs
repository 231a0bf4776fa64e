//! Experiment analytics: dependent variables, group summaries and U tests.

mod mann_whitney;
mod table;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use mann_whitney::{
    mann_whitney, u_statistic, Alternative, Method, TestMethod, TestResult, EXACT_LIMIT,
};
pub use table::{Group, ResultsTable, SubjectRecord, HEADER, TASKS};

use crate::error::{Error, Result};
use crate::num::{mean, median, sample_stdev, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Correctness,
    Time,
    Efficiency,
    Confidence,
}

impl Variable {
    pub const ALL: [Variable; 4] = [
        Variable::Correctness,
        Variable::Time,
        Variable::Efficiency,
        Variable::Confidence,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variable::Correctness => "correctness",
            Variable::Time => "time",
            Variable::Efficiency => "efficiency",
            Variable::Confidence => "confidence",
        }
    }

    /// Direction expected when annotations help: more correct answers, less
    /// time, higher efficiency and confidence.
    pub fn hypothesis(&self) -> Alternative {
        match self {
            Variable::Time => Alternative::Less,
            _ => Alternative::Greater,
        }
    }

    pub fn of<T: Real>(&self, d: &Derived<T>) -> T {
        match self {
            Variable::Correctness => d.correctness,
            Variable::Time => d.total_time,
            Variable::Efficiency => d.efficiency,
            Variable::Confidence => d.mean_confidence,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variable::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "unknown variable `{s}` (expected correctness, time, efficiency or confidence)"
                ))
            })
    }
}

/// Dependent variables of one subject.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derived<T> {
    pub subject: u32,
    pub group: Group,
    /// Percent of the five tasks answered correctly.
    pub correctness: T,
    /// Minutes.
    pub total_time: T,
    /// Correct tasks per minute.
    pub efficiency: T,
    pub mean_confidence: T,
}

pub fn derive_variables<T: Real>(table: &ResultsTable<T>) -> Vec<Derived<T>> {
    table
        .rows
        .iter()
        .map(|r| {
            let correct = <T as Real>::from_usize(r.correct_count());
            let total_time = r.times.iter().fold(T::zero(), |acc, &t| acc + t);
            let conf: Vec<T> = r.confidence.iter().map(|&c| <T as Real>::from_usize(c as usize)).collect();
            Derived {
                subject: r.subject,
                group: r.group,
                correctness: correct / <T as Real>::from_usize(TASKS) * T::from_f64_lossy(100.0),
                total_time,
                efficiency: correct / total_time,
                mean_confidence: mean(&conf).expect("three confidences"),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread<T> {
    pub median: T,
    pub stdev: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary<T> {
    pub group: Group,
    pub subjects: usize,
    pub correctness: Spread<T>,
    pub total_time: Spread<T>,
    pub efficiency: Spread<T>,
    /// Over per-subject mean confidences.
    pub confidence: Spread<T>,
}

impl<T: Real> GroupSummary<T> {
    pub fn spread(&self, v: Variable) -> Spread<T> {
        match v {
            Variable::Correctness => self.correctness,
            Variable::Time => self.total_time,
            Variable::Efficiency => self.efficiency,
            Variable::Confidence => self.confidence,
        }
    }
}

fn values<T: Real>(derived: &[Derived<T>], group: Group, v: Variable) -> Vec<T> {
    derived
        .iter()
        .filter(|d| d.group == group)
        .map(|d| v.of(d))
        .collect()
}

/// Median and sample standard deviation of each variable within `group`.
pub fn group_summary<T: Real>(table: &ResultsTable<T>, group: Group) -> Result<GroupSummary<T>> {
    let derived = derive_variables(table);
    let spread = |v: Variable| -> Result<Spread<T>> {
        let xs = values(&derived, group, v);
        Ok(Spread {
            median: median(&xs)
                .ok_or_else(|| Error::UndefinedMetric(format!("group {group} has no subjects")))?,
            stdev: sample_stdev(&xs).expect("non-empty"),
        })
    };
    Ok(GroupSummary {
        group,
        subjects: derived.iter().filter(|d| d.group == group).count(),
        correctness: spread(Variable::Correctness)?,
        total_time: spread(Variable::Time)?,
        efficiency: spread(Variable::Efficiency)?,
        confidence: spread(Variable::Confidence)?,
    })
}

/// How the one-sided alternative of each comparison is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlternativePolicy {
    /// Direction of the observed median difference, the hypothesis direction
    /// when the medians coincide.
    #[default]
    Observed,
    /// Always the hypothesis direction of [`Variable::hypothesis`].
    Hypothesis,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison<T> {
    pub variable: Variable,
    pub annotated_median: T,
    pub unannotated_median: T,
    /// Relative change of the annotated median over the unannotated one;
    /// `None` when the unannotated median is zero.
    pub change_percent: Option<T>,
    pub test: TestResult<T>,
}

/// Tests the annotated group against the unannotated one for each variable.
pub fn compare_groups<T: Real>(
    table: &ResultsTable<T>,
    variables: &[Variable],
    method: Method,
    policy: AlternativePolicy,
) -> Result<Vec<Comparison<T>>> {
    let derived = derive_variables(table);
    variables
        .iter()
        .map(|&v| {
            let a = values(&derived, Group::Annotated, v);
            let u = values(&derived, Group::Unannotated, v);
            let (ma, mu) = match (median(&a), median(&u)) {
                (Some(ma), Some(mu)) => (ma, mu),
                _ => {
                    return Err(Error::UndefinedMetric(
                        "both groups need at least one subject".into(),
                    ))
                }
            };
            let alternative = match policy {
                AlternativePolicy::Observed if ma > mu => Alternative::Greater,
                AlternativePolicy::Observed if ma < mu => Alternative::Less,
                _ => v.hypothesis(),
            };
            let change_percent = (mu != T::zero())
                .then(|| (ma - mu) / mu * T::from_f64_lossy(100.0));
            Ok(Comparison {
                variable: v,
                annotated_median: ma,
                unannotated_median: mu,
                change_percent,
                test: mann_whitney(&a, &u, alternative, method)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::round_to;

    fn table(rows: &[&str]) -> ResultsTable<f64> {
        let mut s = HEADER.join(",");
        for r in rows {
            s.push('\n');
            s.push_str(r);
        }
        ResultsTable::from_csv_str(&s).unwrap()
    }

    #[test]
    fn derived_for_first_subject() {
        let t = table(&["1,annotated,1,1,1,0,1,12.03,3.00,13.96,1,2,3,3"]);
        let d = derive_variables(&t)[0];
        assert_eq!(d.correctness, 80.0);
        assert_eq!(round_to(d.total_time, 2), 28.99);
        assert_eq!(round_to(d.efficiency, 2), 0.14);
        assert_eq!(d.mean_confidence, 2.0);
    }

    #[test]
    fn all_wrong_is_zero() {
        let t = table(&["4,unannotated,0,0,0,0,0,1,2,3,1,1,1,5"]);
        let d = derive_variables(&t)[0];
        assert_eq!((d.correctness, d.efficiency), (0.0, 0.0));
    }

    #[test]
    fn single_subject_summary() {
        let t = table(&["4,unannotated,1,0,0,0,0,1,2,3,1,1,1,5"]);
        let s = group_summary(&t, Group::Unannotated).unwrap();
        assert_eq!(s.total_time, Spread { median: 6.0, stdev: 0.0 });
        assert!(matches!(
            group_summary(&t, Group::Annotated),
            Err(Error::UndefinedMetric(_))
        ));
    }

    #[test]
    fn equal_groups_are_not_significant() {
        let t = table(&[
            "1,annotated,1,0,1,0,1,1,2,3,1,2,3,3",
            "2,unannotated,1,0,1,0,1,1,2,3,1,2,3,3",
            "3,annotated,1,1,1,0,1,2,2,3,3,2,3,3",
            "4,unannotated,1,1,1,0,1,2,2,3,3,2,3,3",
        ]);
        for m in [Method::Exact, Method::Approx] {
            for c in compare_groups(&t, &Variable::ALL, m, AlternativePolicy::Observed).unwrap() {
                assert!(c.test.p_value >= 0.5, "{:?}", c);
                assert_eq!(c.test.alternative, c.variable.hypothesis());
            }
        }
    }
}
