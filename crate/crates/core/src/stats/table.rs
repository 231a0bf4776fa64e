//! Per-subject experiment records.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

pub const HEADER: [&str; 14] = [
    "subject", "group", "filter_ok", "cite_ok", "q1_ok", "q2_ok", "q3_ok", "t_filter", "t_cite",
    "t_test", "c_q1", "c_q2", "c_q3", "scale",
];

/// Number of graded tasks and questions per subject.
pub const TASKS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Annotated,
    Unannotated,
}

impl Group {
    pub fn as_str(&self) -> &'static str {
        match self {
            Group::Annotated => "annotated",
            Group::Unannotated => "unannotated",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "annotated" => Ok(Group::Annotated),
            "unannotated" => Ok(Group::Unannotated),
            other => Err(Error::Validation(format!(
                "unknown group `{other}` (expected annotated or unannotated)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubjectRecord<T> {
    pub subject: u32,
    pub group: Group,
    /// Filter, Cite, Q1, Q2, Q3.
    pub correct: [bool; TASKS],
    /// Minutes spent on Filter, Cite and Test.
    pub times: [T; 3],
    /// Confidence for Q1, Q2, Q3 on a `1..=scale` scale.
    pub confidence: [u8; 3],
    pub scale: u8,
}

impl<T: Real> SubjectRecord<T> {
    pub fn correct_count(&self) -> usize {
        self.correct.iter().filter(|&&c| c).count()
    }

    fn validate(&self, row: usize) -> Result<()> {
        let at = || format!("row {row} (subject {})", self.subject);
        if self.scale != 3 && self.scale != 5 {
            return Err(Error::Validation(format!(
                "{}: confidence scale must be 3 or 5, got {}",
                at(),
                self.scale
            )));
        }
        if let Some(t) = self.times.iter().find(|t| !t.is_finite() || **t <= T::zero()) {
            return Err(Error::Validation(format!("{}: time {t} is not positive", at())));
        }
        if let Some(c) = self.confidence.iter().find(|&&c| c < 1 || c > self.scale) {
            return Err(Error::Validation(format!(
                "{}: confidence {c} outside 1..={}",
                at(),
                self.scale
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultsTable<T> {
    pub rows: Vec<SubjectRecord<T>>,
}

fn field(record: &csv::StringRecord, idx: usize, row: usize) -> Result<&str> {
    match record.get(idx).map(str::trim) {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(Error::Validation(format!(
            "row {row}: missing field `{}`",
            HEADER[idx]
        ))),
    }
}

fn parse<V: FromStr>(record: &csv::StringRecord, idx: usize, row: usize) -> Result<V> {
    let raw = field(record, idx, row)?;
    raw.parse().map_err(|_| {
        Error::Validation(format!(
            "row {row}: field `{}` has invalid value `{raw}`",
            HEADER[idx]
        ))
    })
}

fn parse_flag(record: &csv::StringRecord, idx: usize, row: usize) -> Result<bool> {
    match field(record, idx, row)? {
        "1" | "true" => Ok(true),
        "0" | "false" => Ok(false),
        raw => Err(Error::Validation(format!(
            "row {row}: field `{}` must be 0 or 1, got `{raw}`",
            HEADER[idx]
        ))),
    }
}

impl<T: Real> ResultsTable<T> {
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .flexible(true)
            .from_reader(text.as_bytes());
        let headers = reader.headers().map_err(csv_error)?.clone();
        let found: Vec<&str> = headers.iter().map(str::trim).collect();
        if found != HEADER {
            return Err(Error::Validation(format!(
                "results header must be `{}`, got `{}`",
                HEADER.join(","),
                found.join(",")
            )));
        }
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(csv_error)?;
            // header is line 1
            let row = i + 2;
            let time = |idx| -> Result<T> { Ok(T::from_f64_lossy(parse::<f64>(&record, idx, row)?)) };
            let rec = SubjectRecord {
                subject: parse(&record, 0, row)?,
                group: field(&record, 1, row)?.parse().map_err(|e: Error| {
                    Error::Validation(format!("row {row}: {e}"))
                })?,
                correct: [
                    parse_flag(&record, 2, row)?,
                    parse_flag(&record, 3, row)?,
                    parse_flag(&record, 4, row)?,
                    parse_flag(&record, 5, row)?,
                    parse_flag(&record, 6, row)?,
                ],
                times: [time(7)?, time(8)?, time(9)?],
                confidence: [parse(&record, 10, row)?, parse(&record, 11, row)?, parse(&record, 12, row)?],
                scale: parse(&record, 13, row)?,
            };
            rec.validate(row)?;
            rows.push(rec);
        }
        Ok(ResultsTable { rows })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_csv_str(&text).map_err(|e| match e {
            Error::Parse { line, column, message, .. } => Error::Parse {
                file: Some(path.to_path_buf()),
                line,
                column,
                message,
            },
            other => other,
        })
    }

    pub fn group(&self, group: Group) -> impl Iterator<Item = &SubjectRecord<T>> {
        self.rows.iter().filter(move |r| r.group == group)
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse {
        file: None,
        line,
        column: 0,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROW1: &str = "1,annotated,1,1,1,0,1,12.03,3.00,13.96,1,2,3,3";

    fn table(rows: &[&str]) -> Result<ResultsTable<f64>> {
        let mut s = HEADER.join(",");
        for r in rows {
            s.push('\n');
            s.push_str(r);
        }
        ResultsTable::from_csv_str(&s)
    }

    #[test]
    fn parses_a_row() {
        let t = table(&[ROW1]).unwrap();
        assert_eq!(t.rows[0].correct_count(), 4);
        assert_eq!(t.rows[0].times[2], 13.96);
    }

    #[test]
    fn missing_field_names_the_row() {
        let err = table(&[ROW1, "3,annotated,0,1,0,0,0,5.23,,11.13,3,2,3,3"]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 3") && msg.contains("t_cite"), "{msg}");
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(table(&["1,annotated,1,1,1,0,1,0,3,4,1,2,3,3"]).is_err());
        assert!(table(&["1,annotated,1,1,1,0,1,1,3,4,1,2,4,3"]).is_err());
        assert!(table(&["1,annotated,1,1,1,0,1,1,3,4,1,2,3,4"]).is_err());
        assert!(table(&["1,control,1,1,1,0,1,1,3,4,1,2,3,3"]).is_err());
    }

    #[test]
    fn wrong_header() {
        assert!(ResultsTable::<f64>::from_csv_str("a,b\n1,2\n").is_err());
    }
}
