//! Snapshot measurements: summary counts, degree moments, power-law testing,
//! word counts, section entropy, histograms and net growth rates.

mod entropy;
mod growth;
mod histogram;
pub mod powerlaw;
mod stats;

use thiserror::Error;

pub use entropy::{section_entropy, token_entropy};
pub use growth::{growth_rates, GrowthRates, SnapshotTotals};
pub use histogram::{histogram, histogram_delta, histogram_labeled, Histogram, HistogramDelta, Scale};
pub use powerlaw::{fit_power_law, fit_power_law_with, PowerLawFit, PowerLawOptions, Verdict};
pub use stats::{
    degree_sequence, degree_stats, snapshot_stats, word_stats, DegreeMode, DegreeStats, SnapshotStats, WordStats,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("citation subgraph is empty")]
    EmptySubgraph,
    #[error("no values to bin")]
    EmptyHistogram,
    #[error("bin width must be positive and finite, got {0}")]
    BadBinWidth(f64),
    #[error("log10 scale needs positive values; offending: {}", .offending.join(", "))]
    NonPositive { offending: Vec<String> },
    #[error("non-finite value at {0}")]
    NonFinite(String),
    #[error("histograms differ in {0}; cannot rebin onto a shared grid")]
    MismatchedBins(&'static str),
    #[error("power-law fit needs at least two distinct values")]
    Degenerate,
    #[error("power-law fit needs positive integers, got {0}")]
    NonPositiveDegree(u64),
    #[error("snapshot dates must increase: {from} then {to}")]
    NonIncreasingDates {
        from: chrono::NaiveDate,
        to: chrono::NaiveDate,
    },
}
