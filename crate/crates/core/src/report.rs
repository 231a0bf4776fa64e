//! Text, CSV, Markdown and JSON renderings of analysis results.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::alignment::Suggestion;
use crate::corpus::{ConcernKind, Corpus};
use crate::error::{Error, Result};
use crate::metrics::{
    concern_metrics, overall_counts, per_annotator_kinds, ConcernMetrics, KindRow, LexicalRow,
    MetricsOptions, SharedMatrix,
};
use crate::num::{Percentage, Real};
use crate::path::ElementPath;
use crate::stats::{Comparison, GroupSummary};

pub const METRICS_HEADER: [&str; 9] = [
    "concern", "n", "occurrences", "shared", "ea", "wea", "dl", "dl_stdev", "kind",
];
pub const SUGGEST_HEADER: [&str; 5] = ["localA", "annotatorA", "localB", "annotatorB", "score"];
pub const LEXICAL_HEADER: [&str; 5] = ["concern", "keywords", "mode", "mean", "stdev"];
pub const STATS_HEADER: [&str; 8] = [
    "variable",
    "annotated_median",
    "unannotated_median",
    "change_percent",
    "alternative",
    "u",
    "p_value",
    "method",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Markdown,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            other => Err(Error::Validation(format!("unknown format `{other}`"))),
        }
    }
}

/// Header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: ToString>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(ToString::to_string).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for r in &self.rows {
            w.write_record(r).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 cells")
    }

    /// Space-aligned columns, numbers right-aligned.
    pub fn to_text(&self) -> String {
        let widths = self.widths();
        let numeric: Vec<bool> = (0..self.header.len())
            .map(|i| {
                !self.rows.is_empty()
                    && self.rows.iter().all(|r| r[i].is_empty() || r[i].parse::<f64>().is_ok())
            })
            .collect();
        let mut out = String::new();
        let line = |cells: &[String], out: &mut String| {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if numeric[i] {
                        format!("{c:>w$}", w = widths[i])
                    } else {
                        format!("{c:<w$}", w = widths[i])
                    }
                })
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&self.header, &mut out);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        line(&rule, &mut out);
        for r in &self.rows {
            line(r, &mut out);
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let esc = |c: &String| c.replace('|', "\\|");
        let mut out = String::new();
        let _ = writeln!(out, "| {} |", self.header.iter().map(esc).collect::<Vec<_>>().join(" | "));
        let _ = writeln!(out, "|{}|", vec!["---"; self.header.len()].join("|"));
        for r in &self.rows {
            let _ = writeln!(out, "| {} |", r.iter().map(esc).collect::<Vec<_>>().join(" | "));
        }
        out
    }

    fn widths(&self) -> Vec<usize> {
        (0..self.header.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([self.header[i].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    /// Renders as text, CSV or Markdown; JSON is the caller's concern.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Csv => self.to_csv(),
            Format::Markdown => self.to_markdown(),
            Format::Json => serde_json::to_string_pretty(&self.to_json()).expect("json") + "\n",
        }
    }

    /// Array of objects keyed by header, cells as strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.header
                            .iter()
                            .cloned()
                            .zip(r.iter().map(|c| Value::String(c.clone())))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

fn pct(p: Option<Percentage>) -> String {
    p.map(|p| p.render(2)).unwrap_or_default()
}

fn pct_json(p: Option<Percentage>) -> Value {
    match p {
        Some(p) => decimal_json(&p.render(2)),
        None => Value::Null,
    }
}

/// A rounded decimal string as a JSON number.
fn decimal_json(s: &str) -> Value {
    serde_json::from_str::<serde_json::Number>(s)
        .map(Value::Number)
        .unwrap_or_else(|_| Value::String(s.to_string()))
}

pub fn fixed<T: Real>(x: T, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    // avoid "-0.00"
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn metrics_table<T: Real>(rows: &[ConcernMetrics<T>]) -> Table {
    let mut t = Table::new(&METRICS_HEADER);
    for r in rows {
        t.push(vec![
            r.concern.clone(),
            r.n.to_string(),
            r.occurrences.to_string(),
            r.shared.to_string(),
            pct(r.ea),
            pct(r.wea),
            fixed(r.dl, 2),
            fixed(r.dl_stdev, 2),
            r.kind.to_string(),
        ]);
    }
    t
}

/// Per-concern rows plus the overall ratios.
pub fn metrics_json<T: Real>(corpus: &Corpus, rows: &[ConcernMetrics<T>]) -> Value {
    let overall = overall_counts(corpus);
    json!({
        "concerns": rows.iter().map(|r| json!({
            "concern": r.concern,
            "n": r.n,
            "occurrences": r.occurrences,
            "shared": r.shared,
            "ea": pct_json(r.ea),
            "wea": pct_json(r.wea),
            "dl": decimal_json(&fixed(r.dl, 2)),
            "dl_stdev": decimal_json(&fixed(r.dl_stdev, 2)),
            "kind": r.kind.as_str(),
        })).collect::<Vec<_>>(),
        "overall": {
            "occurrences": overall.total,
            "shared": overall.shared,
            "ea": pct_json(overall.ea()),
            "wea": pct_json(overall.wea()),
        },
    })
}

/// Overall EA and wEA as a two-line footer.
pub fn overall_text(corpus: &Corpus) -> String {
    let o = overall_counts(corpus);
    let show = |p: Option<Percentage>| p.map(|p| p.to_string()).unwrap_or_else(|| "undefined".into());
    format!(
        "overall EA  {} ({} of {} occurrences shared)\noverall wEA {}\n",
        show(o.ea()),
        o.shared,
        o.total,
        show(o.wea())
    )
}

pub fn matrix_table(m: &SharedMatrix) -> Table {
    let mut header = vec!["annotator".to_string()];
    header.extend(m.annotators.iter().cloned());
    let mut t = Table::new(&header);
    for (a, row) in m.annotators.iter().zip(&m.cells) {
        let mut r = vec![a.clone()];
        r.extend(row.iter().map(ToString::to_string));
        t.push(r);
    }
    t
}

pub fn matrix_json(m: &SharedMatrix) -> Value {
    json!({ "annotators": m.annotators, "cells": m.cells })
}

pub fn suggestion_table<T: Real>(suggestions: &[Suggestion<T>]) -> Table {
    let mut t = Table::new(&SUGGEST_HEADER);
    for s in suggestions {
        t.push(vec![
            s.local_a.clone(),
            s.annotator_a.clone(),
            s.local_b.clone(),
            s.annotator_b.clone(),
            fixed(s.score, 3),
        ]);
    }
    t
}

pub fn lexical_table<T: Real>(rows: &[LexicalRow<T>]) -> Table {
    let mut t = Table::new(&LEXICAL_HEADER);
    for r in rows {
        t.push(vec![
            r.concern.clone(),
            r.keywords.join("|"),
            r.mode.label(),
            fixed(r.distance.mean, 2),
            fixed(r.distance.stdev, 2),
        ]);
    }
    t
}

pub fn kind_table(rows: &[KindRow]) -> Table {
    let mut t = Table::new(&["kind", "total", "shared", "not_shared", "percent_of_all", "percent_shared"]);
    for r in rows {
        t.push(vec![
            r.kind.to_string(),
            r.total.to_string(),
            r.shared.to_string(),
            r.not_shared.to_string(),
            r.percent_of_all.map(|p| p.render(0)).unwrap_or_default(),
            r.percent_shared.map(|p| p.render(0)).unwrap_or_default(),
        ]);
    }
    t
}

pub fn annotator_kind_table(corpus: &Corpus) -> Table {
    let kinds = [ConcernKind::Domain, ConcernKind::Design, ConcernKind::Maintenance];
    let mut t = Table::new(&["annotator", "domain", "design", "maintenance"]);
    for row in per_annotator_kinds(corpus) {
        let mut r = vec![row.annotator.clone()];
        for k in kinds {
            let share = row.percent(k).map(|p| p.render(0)).unwrap_or_else(|| "0".into());
            r.push(format!("{} ({}%)", row.count(k), share));
        }
        t.push(r);
    }
    t
}

pub fn stats_table<T: Real>(rows: &[Comparison<T>]) -> Table {
    let mut t = Table::new(&STATS_HEADER);
    for c in rows {
        t.push(vec![
            c.variable.to_string(),
            fixed(c.annotated_median, 2),
            fixed(c.unannotated_median, 2),
            c.change_percent.map(|x| fixed(x, 2)).unwrap_or_default(),
            c.test.alternative.to_string(),
            fixed(c.test.statistic_u, 1),
            fixed(c.test.p_value, 4),
            c.test.method.to_string(),
        ]);
    }
    t
}

pub fn summary_table<T: Real>(groups: &[GroupSummary<T>]) -> Table {
    let mut t = Table::new(&[
        "group", "subjects", "correctness", "sd", "time", "sd", "efficiency", "sd", "confidence", "sd",
    ]);
    for g in groups {
        t.push(vec![
            g.group.to_string(),
            g.subjects.to_string(),
            fixed(g.correctness.median, 2),
            fixed(g.correctness.stdev, 2),
            fixed(g.total_time.median, 2),
            fixed(g.total_time.stdev, 2),
            fixed(g.efficiency.median, 2),
            fixed(g.efficiency.stdev, 2),
            fixed(g.confidence.median, 2),
            fixed(g.confidence.stdev, 2),
        ]);
    }
    t
}

/// Recognized concerns and occurrences per annotator, with a distinct total row.
pub fn annotator_counts_table(corpus: &Corpus) -> Table {
    let mut concerns: BTreeMap<&str, usize> = BTreeMap::new();
    let mut occurrences: BTreeMap<&str, usize> = BTreeMap::new();
    for a in corpus.annotators() {
        concerns.insert(a, corpus.concerns().filter(|c| c.recognizers.contains(a)).count());
        occurrences.insert(a, 0);
    }
    for (_, _, annotators) in corpus.all_occurrences() {
        for a in annotators {
            *occurrences.entry(a.as_str()).or_default() += 1;
        }
    }
    let mut t = Table::new(&["annotator", "concerns", "occurrences"]);
    for a in corpus.annotators() {
        t.push(vec![
            a.clone(),
            concerns[a.as_str()].to_string(),
            occurrences[a.as_str()].to_string(),
        ]);
    }
    t.push(vec![
        "Total (distinct)".into(),
        corpus.concern_count().to_string(),
        corpus.occurrence_count().to_string(),
    ]);
    t
}

/// Full Markdown report: per-annotator counts, per-concern metrics, and every
/// concern's elements with the annotators who placed it there.
pub fn corpus_report<T: Real>(corpus: &Corpus, options: &MetricsOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Concern report: {}\n", corpus.project());
    let _ = writeln!(out, "## Recognized concerns and annotation occurrences\n");
    out.push_str(&annotator_counts_table(corpus).to_markdown());
    let _ = writeln!(out, "\n## Concerns\n");
    out.push_str(&metrics_table(&concern_metrics::<T>(corpus, options)).to_markdown());
    out.push('\n');
    for line in overall_text(corpus).lines() {
        let _ = writeln!(out, "{line}  ");
    }
    let _ = writeln!(out, "\n## Occurrences");
    for c in corpus.concerns() {
        let _ = writeln!(out, "\n### {} ({})\n", c.name, c.kind);
        let mut any = false;
        for (p, annotators) in corpus.occurrences_of(&c.name) {
            any = true;
            let who: Vec<&str> = annotators.iter().map(String::as_str).collect();
            let _ = writeln!(out, "- `{p}`: {}", who.join(", "));
        }
        if !any {
            let _ = writeln!(out, "_no occurrences_");
        }
    }
    out
}

pub fn usages_table(rows: &[(ElementPath, usize)]) -> Table {
    let mut t = Table::new(&["element", "magnitude"]);
    for (p, m) in rows {
        t.push(vec![p.to_string(), m.to_string()]);
    }
    t
}

pub fn concerns_table(rows: &[(String, usize)]) -> Table {
    let mut t = Table::new(&["concern", "magnitude"]);
    for (c, m) in rows {
        t.push(vec![c.clone(), m.to_string()]);
    }
    t
}

pub fn related_table(related: &BTreeMap<String, BTreeSet<ElementPath>>) -> Table {
    let mut t = Table::new(&["concern", "element"]);
    for (c, elements) in related {
        if elements.is_empty() {
            t.push(vec![c.clone(), String::new()]);
        }
        for p in elements {
            t.push(vec![c.clone(), p.to_string()]);
        }
    }
    t
}

pub fn related_json(related: &BTreeMap<String, BTreeSet<ElementPath>>) -> Value {
    Value::Object(
        related
            .iter()
            .map(|(c, ps)| (c.clone(), json!(ps.iter().map(ToString::to_string).collect::<Vec<_>>())))
            .collect(),
    )
}

pub fn by_kind_table(rows: &[(String, Vec<ElementPath>)]) -> Table {
    let mut t = Table::new(&["concern", "element"]);
    for (c, elements) in rows {
        if elements.is_empty() {
            t.push(vec![c.clone(), String::new()]);
        }
        for p in elements {
            t.push(vec![c.clone(), p.to_string()]);
        }
    }
    t
}

pub fn by_kind_json(rows: &[(String, Vec<ElementPath>)]) -> Value {
    Value::Array(
        rows.iter()
            .map(|(c, ps)| json!({"concern": c, "elements": ps.iter().map(ToString::to_string).collect::<Vec<_>>()}))
            .collect(),
    )
}
