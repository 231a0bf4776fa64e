//! Concern annotation mining and analysis: extraction of annotation snapshots
//! from Java-style sources, cross-annotator alignment, effective-agreement
//! metrics, keyword edit distances, concern-location queries and the
//! Mann-Whitney analysis of comprehension experiments.

pub mod alignment;
pub mod corpus;
pub mod error;
pub mod extractor;
pub mod metrics;
pub mod model;
pub mod num;
pub mod path;
pub mod query;
pub mod report;
pub mod snapshot_io;
pub mod stats;
pub mod textdist;

pub use corpus::{Concern, ConcernDictionary, ConcernKind, Corpus};
pub use error::{Error, ErrorClass, Result};
pub use model::Snapshot;
pub use num::{Percentage, Real};
pub use path::ElementPath;

pub type ConcernMetrics64 = metrics::ConcernMetrics<f64>;
pub type ConcernMetrics32 = metrics::ConcernMetrics<f32>;
pub type LexicalRow64 = metrics::LexicalRow<f64>;
pub type LexicalRow32 = metrics::LexicalRow<f32>;
pub type KeywordDistance64 = textdist::KeywordDistance<f64>;
pub type KeywordDistance32 = textdist::KeywordDistance<f32>;
pub type Suggestion64 = alignment::Suggestion<f64>;
pub type Suggestion32 = alignment::Suggestion<f32>;
pub type ResultsTable64 = stats::ResultsTable<f64>;
pub type ResultsTable32 = stats::ResultsTable<f32>;
pub type GroupSummary64 = stats::GroupSummary<f64>;
pub type GroupSummary32 = stats::GroupSummary<f32>;
pub type Comparison64 = stats::Comparison<f64>;
pub type Comparison32 = stats::Comparison<f32>;
pub type TestResult64 = stats::TestResult<f64>;
pub type TestResult32 = stats::TestResult<f32>;
