use std::collections::{HashMap, HashSet};

use serde_json::Value;
use uscode_core::citation::{build_citation_edges, CitationOptions};
use uscode_core::fold::{fold_to_sections, FoldOptions};
use uscode_core::ingest::{
    export_canonical, generate_synthetic, generate_synthetic_with_truth, parse_snapshot, structural_fingerprint,
    RawDocument, SyntheticSpec,
};
use uscode_core::metrics::{degree_stats, histogram, histogram_delta, snapshot_stats, word_stats, DegreeMode, Scale};
use uscode_core::model::{citation_subgraph, CodeGraph, NodePath};
use uscode_core::tokenizer::{tokenize_graph, total_tokens, TokenizeOptions};

fn tokenized(seed: u64) -> CodeGraph {
    let g = generate_synthetic(&SyntheticSpec::small(seed)).unwrap();
    tokenize_graph(g, TokenizeOptions::default()).unwrap()
}

fn prepared(seed: u64) -> CodeGraph {
    let g = fold_to_sections(&tokenized(seed), FoldOptions::default())
        .unwrap()
        .graph;
    build_citation_edges(g, CitationOptions::default()).unwrap().0
}

#[test]
fn planted_citations_are_recovered_exactly() {
    for seed in 0..25 {
        let corpus = generate_synthetic_with_truth(&SyntheticSpec::small(seed)).unwrap();
        let folded = fold_to_sections(&corpus.graph, FoldOptions::default()).unwrap().graph;
        let (g, report) = build_citation_edges(folded, CitationOptions::default()).unwrap();
        let path = |id: uscode_core::NodeId| g.node(id).unwrap().path.clone();
        let mut got: Vec<(NodePath, NodePath)> = g.citation_edges().iter().map(|&(s, t)| (path(s), path(t))).collect();
        let mut want = corpus.truth.edges.clone();
        got.sort();
        want.sort();
        assert!(!want.is_empty());
        assert_eq!(got, want, "seed {seed}");
        assert_eq!(report.self_loops, corpus.truth.self_references, "seed {seed}");
        assert_eq!(report.unresolved.len(), corpus.truth.unresolved, "seed {seed}");
    }
}

#[test]
fn fold_census() {
    for seed in 0..10 {
        let g = tokenized(seed);
        let structural = g.nodes().iter().filter(|n| !n.level.is_below_section()).count();
        let tokens: u64 = g.nodes().iter().map(|n| n.tokens.iter().count() as u64).sum();
        let f = fold_to_sections(&g, FoldOptions::default()).unwrap().graph;
        assert_eq!(f.node_count(), structural);
        assert_eq!(total_tokens(&f), tokens);
        assert!(
            g.nodes().iter().any(|n| n.level.is_below_section()),
            "corpus should be deep"
        );
        // leaves are sections
        for n in f.nodes() {
            if f.children(n.id).is_empty() && n.id != f.root_id() {
                assert_eq!(n.level, uscode_core::LevelKind::Section, "{}", n.path);
            }
        }
    }
}

#[test]
fn canonical_round_trip_on_synthetic() {
    for seed in 0..10 {
        let g = tokenized(seed);
        let bytes = export_canonical(&g);
        let again = tokenize_graph(
            parse_snapshot(&RawDocument::canonical(bytes.clone())).unwrap(),
            TokenizeOptions::default(),
        )
        .unwrap();
        assert_eq!(structural_fingerprint(&g), structural_fingerprint(&again));
        let tok = |g: &CodeGraph| g.nodes().iter().map(|n| n.tokens.to_vec()).collect::<Vec<_>>();
        assert_eq!(tok(&g), tok(&again));
        assert_eq!(export_canonical(&again), bytes);
    }
}

fn count_nodes(v: &Value) -> usize {
    1 + v
        .get("children")
        .and_then(Value::as_array)
        .map_or(0, |c| c.iter().map(count_nodes).sum())
}

#[test]
fn snapshot_counts_match_recount() {
    for seed in 0..5 {
        let g = prepared(seed);
        let s = snapshot_stats(&g);
        let doc: Value = serde_json::from_slice(&export_canonical(&g)).unwrap();
        let nodes = 1 + doc["titles"].as_array().unwrap().iter().map(count_nodes).sum::<usize>();
        let endpoints: HashSet<u32> = g.citation_edges().iter().flat_map(|&(a, b)| [a.0, b.0]).collect();
        let distinct: HashSet<(u32, u32)> = g.citation_edges().iter().map(|&(a, b)| (a.0, b.0)).collect();
        assert_eq!(s.total_nodes, nodes);
        assert_eq!(s.total_edges, nodes - 1 + g.citation_edges().len());
        assert_eq!(s.citation_vertices, endpoints.len());
        assert_eq!(s.citation_edges, g.citation_edges().len());
        assert_eq!(s.citation_edges_distinct, distinct.len());
        assert!(s.total_edges >= s.total_nodes - 1);
        for &(a, b) in g.citation_edges() {
            assert_eq!(g.node(a).unwrap().level, uscode_core::LevelKind::Section);
            assert_eq!(g.node(b).unwrap().level, uscode_core::LevelKind::Section);
        }
    }
}

#[test]
fn degree_moments_match_recompute() {
    for seed in 0..5 {
        let g = prepared(seed);
        let edges = g.citation_edges();
        let mut deg: HashMap<u32, f64> = HashMap::new();
        for &(a, b) in edges {
            *deg.entry(a.0).or_default() += 1.0;
            *deg.entry(b.0).or_default() += 1.0;
        }
        let xs: Vec<f64> = deg.values().copied().collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let m3 = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
        let st = degree_stats(&citation_subgraph(&g), DegreeMode::Total).unwrap();
        assert_eq!(st.degrees.iter().sum::<u64>(), 2 * edges.len() as u64);
        assert!((st.mean - mean).abs() < 1e-12);
        assert!((st.std_dev - var.sqrt()).abs() < 1e-9);
        assert!((st.skewness - m3 / m2.powf(1.5)).abs() < 1e-9);
        assert_eq!(st.max as f64, xs.iter().copied().fold(0.0, f64::max));
        assert!(st.max as f64 >= st.mean);
    }
}

#[test]
fn word_total_matches_token_census() {
    for seed in 0..5 {
        let g = tokenized(seed);
        let census = total_tokens(&g);
        let f = fold_to_sections(&g, FoldOptions::default()).unwrap().graph;
        assert_eq!(word_stats(&f).total, census);
    }
}

#[test]
fn word_histogram_matches_recount() {
    let g = prepared(3);
    let counts: Vec<u64> = g.sections().map(|s| s.tokens.len() as u64).filter(|&c| c > 0).collect();
    let values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let h = histogram(&values, Scale::Log10, 0.1).unwrap();
    let mut recount: HashMap<i64, u64> = HashMap::new();
    for &c in &counts {
        // smallest k with c < 10^((k+1)/10)
        let mut k = -1i64;
        while (c as f64) >= 10f64.powf((k + 1) as f64 / 10.0) {
            k += 1;
        }
        *recount.entry(k).or_default() += 1;
    }
    for (i, &c) in h.counts.iter().enumerate() {
        assert_eq!(
            c,
            recount.get(&(h.first_bin + i as i64)).copied().unwrap_or(0),
            "bin {}",
            h.first_bin + i as i64
        );
    }
    assert_eq!(h.n as usize, counts.len());
    assert!((h.proportions().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert_eq!(h.bin_edges().len(), h.bin_count() + 1);
}

#[test]
fn delta_between_synthetic_snapshots_sums_to_zero() {
    let early = prepared(1);
    let later = generate_synthetic(&SyntheticSpec {
        sections_max: 16,
        ..SyntheticSpec::small(2)
    })
    .unwrap();
    let later = fold_to_sections(
        &tokenize_graph(later, TokenizeOptions::default()).unwrap(),
        FoldOptions::default(),
    )
    .unwrap()
    .graph;
    let words = |g: &CodeGraph| -> Vec<f64> {
        g.sections()
            .map(|s| s.tokens.len() as f64)
            .filter(|&c| c > 0.0)
            .collect()
    };
    let a = histogram(&words(&early), Scale::Log10, 0.1).unwrap();
    let b = histogram(&words(&later), Scale::Log10, 0.1).unwrap();
    let d = histogram_delta(&a, &b).unwrap();
    assert!(d.deltas.iter().sum::<f64>().abs() < 1e-9);
}

#[test]
fn synthetic_is_seed_determined() {
    let a = export_canonical(&generate_synthetic(&SyntheticSpec::small(7)).unwrap());
    let b = export_canonical(&generate_synthetic(&SyntheticSpec::small(7)).unwrap());
    let c = export_canonical(&generate_synthetic(&SyntheticSpec::small(8)).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}
