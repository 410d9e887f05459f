use chrono::NaiveDate;
use serde::Serialize;

use super::{MetricsError, SnapshotStats};

/// Snapshot counts that enter the per-day rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SnapshotTotals {
    pub date: NaiveDate,
    pub nodes: u64,
    pub citation_vertices: u64,
    pub citation_edges: u64,
    pub words: u64,
}

impl SnapshotTotals {
    pub fn new(stats: &SnapshotStats, words: u64) -> Self {
        SnapshotTotals {
            date: stats.date,
            nodes: stats.total_nodes as u64,
            citation_vertices: stats.citation_vertices as u64,
            citation_edges: stats.citation_edges as u64,
            words,
        }
    }
}

/// Net change per day between two snapshots. Rates may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRates {
    pub from: NaiveDate,
    pub to: NaiveDate,
    pub days: i64,
    pub nodes_per_day: f64,
    pub citation_vertices_per_day: f64,
    pub citation_edges_per_day: f64,
    pub words_per_day: f64,
}

pub fn growth_rates(a: &SnapshotTotals, b: &SnapshotTotals) -> Result<GrowthRates, MetricsError> {
    let days = (b.date - a.date).num_days();
    if days <= 0 {
        return Err(MetricsError::NonIncreasingDates {
            from: a.date,
            to: b.date,
        });
    }
    let rate = |x: u64, y: u64| (y as f64 - x as f64) / days as f64;
    Ok(GrowthRates {
        from: a.date,
        to: b.date,
        days,
        nodes_per_day: rate(a.nodes, b.nodes),
        citation_vertices_per_day: rate(a.citation_vertices, b.citation_vertices),
        citation_edges_per_day: rate(a.citation_edges, b.citation_edges),
        words_per_day: rate(a.words, b.words),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(y: i32, m: u32, d: u32, nodes: u64) -> SnapshotTotals {
        SnapshotTotals {
            date: NaiveDate::from_ymd_opt(y, m, d).unwrap(),
            nodes,
            citation_vertices: 5,
            citation_edges: 9,
            words: 100,
        }
    }

    #[test]
    fn ten_days_no_change() {
        let r = growth_rates(&at(2009, 1, 1, 40), &at(2009, 1, 11, 40)).unwrap();
        assert_eq!(r.days, 10);
        assert_eq!(r.nodes_per_day, 0.0);
        assert_eq!(r.words_per_day, 0.0);
    }

    #[test]
    fn net_loss_is_negative() {
        let r = growth_rates(&at(2009, 1, 1, 40), &at(2009, 1, 3, 30)).unwrap();
        assert_eq!(r.nodes_per_day, -5.0);
    }

    #[test]
    fn dates_must_increase() {
        assert!(growth_rates(&at(2009, 1, 1, 1), &at(2009, 1, 1, 1)).is_err());
        assert!(growth_rates(&at(2009, 1, 2, 1), &at(2009, 1, 1, 1)).is_err());
    }
}
