//! Tabular output. Every table renders to CSV (header row, RFC 4180 quoting)
//! and to a JSON array of objects with the same field names in the same
//! order. Floats use the shortest representation that parses back exactly.

mod layout;

use chrono::NaiveDate;
use serde_json::{Map, Value};

use crate::citation::UnresolvedCitation;
use crate::metrics::{DegreeStats, GrowthRates, Histogram, HistogramDelta, PowerLawFit, SnapshotStats, WordStats};

pub use layout::{layout_tree, LayoutPoint};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<NaiveDate> for Cell {
    fn from(v: NaiveDate) -> Self {
        Cell::Text(v.format("%Y-%m-%d").to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest round-trip decimal; integral values keep a trailing `.0`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    pub fn to_json(&self) -> Vec<u8> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&rows).expect("JSON values serialize");
        out.push(b'\n');
        out
    }
}

/// One row per snapshot in the order given. Citation edges appear twice:
/// with multiplicity and as distinct ordered pairs.
pub fn emit_snapshot_table(stats: &[SnapshotStats]) -> Table {
    let mut t = Table::new(vec![
        "date",
        "total_nodes",
        "total_edges",
        "citation_vertices",
        "citation_edges",
        "citation_edges_distinct",
    ]);
    for s in stats {
        t.push(vec![
            s.date.into(),
            s.total_nodes.into(),
            s.total_edges.into(),
            s.citation_vertices.into(),
            s.citation_edges.into(),
            s.citation_edges_distinct.into(),
        ]);
    }
    t
}

fn distribution(edges: &[f64], values: impl IntoIterator<Item = f64>) -> Table {
    let mut t = Table::new(vec!["bin_left", "bin_right", "value"]);
    for (w, v) in edges.windows(2).zip(values) {
        t.push(vec![w[0].into(), w[1].into(), v.into()]);
    }
    t
}

pub fn emit_distribution(h: &Histogram) -> Table {
    distribution(&h.bin_edges(), h.proportions())
}

pub fn emit_delta(d: &HistogramDelta) -> Table {
    distribution(&d.bin_edges(), d.deltas.iter().copied())
}

/// Points (d, P(D ≥ d)) for every distinct degree d.
pub fn degree_ccdf(degrees: &[u64]) -> Vec<(u64, f64)> {
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let mut out = Vec::new();
    for (i, &d) in sorted.iter().enumerate() {
        if i == 0 || sorted[i - 1] != d {
            out.push((d, (sorted.len() - i) as f64 / n));
        }
    }
    out
}

pub fn emit_degree_ccdf(degrees: &[u64]) -> Table {
    let mut t = Table::new(vec!["degree", "ccdf"]);
    for (d, p) in degree_ccdf(degrees) {
        t.push(vec![d.into(), p.into()]);
    }
    t
}

pub fn emit_degree_stats(s: &DegreeStats) -> Table {
    let mut t = Table::new(vec!["mode", "vertices", "mean", "std_dev", "skewness", "max"]);
    t.push(vec![
        s.mode.to_string().into(),
        s.degrees.len().into(),
        s.mean.into(),
        s.std_dev.into(),
        s.skewness.into(),
        s.max.into(),
    ]);
    t
}

pub fn emit_power_law(fit: &PowerLawFit) -> Table {
    let mut t = Table::new(vec![
        "x_min",
        "alpha",
        "ks_statistic",
        "p_value",
        "n",
        "n_tail",
        "bootstrap_n",
        "verdict",
    ]);
    let verdict = serde_json::to_value(fit.verdict)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default();
    t.push(vec![
        fit.x_min.into(),
        fit.alpha.into(),
        fit.ks_statistic.into(),
        fit.p_value.into(),
        fit.n.into(),
        fit.n_tail.into(),
        fit.bootstrap_n.into(),
        verdict.into(),
    ]);
    t
}

pub fn emit_word_stats(date: NaiveDate, w: &WordStats) -> Table {
    let mut t = Table::new(vec![
        "date",
        "sections",
        "nonempty_sections",
        "mean_all",
        "std_dev_all",
        "mean_nonempty",
        "std_dev_nonempty",
        "max",
        "total",
    ]);
    t.push(vec![
        date.into(),
        w.sections.into(),
        w.nonempty_sections.into(),
        w.mean_all.into(),
        w.std_dev_all.into(),
        w.mean_nonempty.into(),
        w.std_dev_nonempty.into(),
        w.max.into(),
        w.total.into(),
    ]);
    t
}

pub fn emit_growth(rates: &[GrowthRates]) -> Table {
    let mut t = Table::new(vec![
        "from",
        "to",
        "days",
        "nodes_per_day",
        "citation_vertices_per_day",
        "citation_edges_per_day",
        "words_per_day",
    ]);
    for r in rates {
        t.push(vec![
            r.from.into(),
            r.to.into(),
            r.days.into(),
            r.nodes_per_day.into(),
            r.citation_vertices_per_day.into(),
            r.citation_edges_per_day.into(),
            r.words_per_day.into(),
        ]);
    }
    t
}

pub fn emit_unresolved(records: &[UnresolvedCitation]) -> Table {
    let mut t = Table::new(vec!["source_path", "raw_span", "status"]);
    for r in records {
        t.push(vec![
            r.source_path.as_str().into(),
            r.raw_span.as_str().into(),
            r.status.to_string().into(),
        ]);
    }
    t
}

pub fn emit_layout(points: &[LayoutPoint]) -> Table {
    let mut t = Table::new(vec!["node", "path", "depth", "angle", "x", "y"]);
    for p in points {
        t.push(vec![
            p.id.0.to_string().into(),
            p.path.as_str().into(),
            p.depth.into(),
            p.angle.into(),
            p.x.into(),
            p.y.into(),
        ]);
    }
    t
}
