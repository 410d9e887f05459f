use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::Serialize;

use super::MetricsError;
use crate::model::{citation_subgraph, CitationSubgraph, CodeGraph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnapshotStats {
    pub date: NaiveDate,
    pub total_nodes: usize,
    /// Hierarchy edges plus citation edges counted with multiplicity.
    pub total_edges: usize,
    pub citation_vertices: usize,
    pub citation_edges: usize,
    pub citation_edges_distinct: usize,
}

pub fn snapshot_stats(g: &CodeGraph) -> SnapshotStats {
    let c = citation_subgraph(g);
    SnapshotStats {
        date: g.snapshot_date(),
        total_nodes: g.node_count(),
        total_edges: g.hierarchy_edge_count() + c.edge_count(),
        citation_vertices: c.vertex_count(),
        citation_edges: c.edge_count(),
        citation_edges_distinct: c.distinct_edge_count(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    #[default]
    Total,
    In,
    Out,
}

impl FromStr for DegreeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "total" => Ok(DegreeMode::Total),
            "in" => Ok(DegreeMode::In),
            "out" => Ok(DegreeMode::Out),
            other => Err(format!("unknown degree mode `{other}` (expected total, in or out)")),
        }
    }
}

impl fmt::Display for DegreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeMode::Total => "total",
            DegreeMode::In => "in",
            DegreeMode::Out => "out",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeStats {
    pub mode: DegreeMode,
    pub degrees: Vec<u64>,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std_dev: f64,
    /// Unadjusted sample skewness g1 = m3 / m2^(3/2).
    pub skewness: f64,
    pub max: u64,
}

/// Degrees of the subgraph's vertices in id order. For `In` and `Out`,
/// vertices with zero degree in that direction are left out.
pub fn degree_sequence(c: &CitationSubgraph, mode: DegreeMode) -> Vec<u64> {
    let mut deg: BTreeMap<NodeId, u64> = BTreeMap::new();
    if mode == DegreeMode::Total {
        for &v in &c.vertex_ids {
            deg.insert(v, 0);
        }
    }
    for &(s, t) in &c.edges {
        if mode != DegreeMode::In {
            *deg.entry(s).or_default() += 1;
        }
        if mode != DegreeMode::Out {
            *deg.entry(t).or_default() += 1;
        }
    }
    deg.into_values().collect()
}

pub fn degree_stats(c: &CitationSubgraph, mode: DegreeMode) -> Result<DegreeStats, MetricsError> {
    if c.is_empty() {
        return Err(MetricsError::EmptySubgraph);
    }
    let degrees = degree_sequence(c, mode);
    let (mean, std_dev, skewness) = moments(&degrees);
    let max = degrees.iter().copied().max().unwrap_or(0);
    Ok(DegreeStats {
        mode,
        degrees,
        mean,
        std_dev,
        skewness,
        max,
    })
}

/// Mean, sample standard deviation and g1 skewness, summed in input order.
fn moments(xs: &[u64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &x in xs {
        let d = x as f64 - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    let std_dev = if xs.len() > 1 { (m2 / (n - 1.0)).sqrt() } else { 0.0 };
    let (m2, m3) = (m2 / n, m3 / n);
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    (mean, std_dev, skewness)
}

/// Word counts per section. Means and deviations are given both over all
/// sections and over sections with at least one token.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordStats {
    pub sections: usize,
    pub nonempty_sections: usize,
    pub mean_all: f64,
    pub std_dev_all: f64,
    pub mean_nonempty: f64,
    pub std_dev_nonempty: f64,
    pub max: u64,
    pub total: u64,
}

pub fn word_stats(g: &CodeGraph) -> WordStats {
    let counts: Vec<u64> = g.sections().map(|s| s.tokens.len() as u64).collect();
    let nonempty: Vec<u64> = counts.iter().copied().filter(|&c| c > 0).collect();
    let (mean_all, std_dev_all, _) = moments(&counts);
    let (mean_nonempty, std_dev_nonempty, _) = moments(&nonempty);
    WordStats {
        sections: counts.len(),
        nonempty_sections: nonempty.len(),
        mean_all,
        std_dev_all,
        mean_nonempty,
        std_dev_nonempty,
        max: counts.iter().copied().max().unwrap_or(0),
        total: counts.iter().sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GraphBuilder, LevelKind};
    use crate::tokenizer::tokenize;

    fn sub(edges: &[(u32, u32)]) -> CitationSubgraph {
        CitationSubgraph::from_edges(edges.iter().map(|&(s, t)| (NodeId(s), NodeId(t))).collect())
    }

    #[test]
    fn table_counts() {
        let mut b = GraphBuilder::new(NaiveDate::from_ymd_opt(2008, 10, 1).unwrap());
        let t = b.add_child(CodeGraph::ROOT, LevelKind::Title, "1", None, "").unwrap();
        let a = b.add_child(t, LevelKind::Section, "1", None, "").unwrap();
        let c = b.add_child(t, LevelKind::Section, "2", None, "").unwrap();
        let g = b.build();
        let s = snapshot_stats(&g);
        assert_eq!(
            (s.total_nodes, s.total_edges, s.citation_vertices, s.citation_edges),
            (4, 3, 0, 0)
        );
        let s = snapshot_stats(&g.with_citation_edges(vec![(a, c), (a, c)]).unwrap());
        assert_eq!(
            (s.total_nodes, s.total_edges, s.citation_vertices, s.citation_edges),
            (4, 5, 2, 2)
        );
        assert_eq!(s.citation_edges_distinct, 1);
    }

    #[test]
    fn star_and_cycle() {
        let star = degree_stats(&sub(&[(0, 1), (0, 2), (0, 3)]), DegreeMode::Total).unwrap();
        assert_eq!(star.degrees, [3, 1, 1, 1]);
        assert_eq!(star.max, 3);
        assert_eq!(star.mean, 1.5);
        let cycle = degree_stats(&sub(&[(0, 1), (1, 0)]), DegreeMode::Total).unwrap();
        assert_eq!(cycle.degrees, [2, 2]);
        assert_eq!(cycle.skewness, 0.0);
        assert_eq!(cycle.std_dev, 0.0);
    }

    #[test]
    fn directed_modes() {
        let c = sub(&[(0, 1), (0, 2), (3, 1)]);
        assert_eq!(degree_sequence(&c, DegreeMode::Out), [2, 1]);
        assert_eq!(degree_sequence(&c, DegreeMode::In), [2, 1]);
        assert_eq!(degree_sequence(&c, DegreeMode::Total).iter().sum::<u64>(), 6);
        assert_eq!(
            degree_stats(&sub(&[]), DegreeMode::Total),
            Err(MetricsError::EmptySubgraph)
        );
    }

    #[test]
    fn word_counts() {
        let mut b = GraphBuilder::new(NaiveDate::from_ymd_opt(2008, 10, 1).unwrap());
        let t = b.add_child(CodeGraph::ROOT, LevelKind::Title, "1", None, "").unwrap();
        let ten = "w ".repeat(10);
        let twenty = "w ".repeat(20);
        b.add_child_with_tokens(t, LevelKind::Section, "1", None, ten.trim(), tokenize(&ten))
            .unwrap();
        b.add_child_with_tokens(t, LevelKind::Section, "2", None, twenty.trim(), tokenize(&twenty))
            .unwrap();
        b.add_child(t, LevelKind::Section, "3", None, "").unwrap();
        let w = word_stats(&b.build());
        assert_eq!(w.total, 30);
        assert_eq!(w.mean_all, 10.0);
        assert_eq!(w.mean_nonempty, 15.0);
        assert_eq!(w.max, 20);
        assert_eq!(w.std_dev_all, 10.0);
    }
}
