//! ingest → tokenize → fold → cite → metrics → report.

use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use uscode_core::citation::{build_citation_edges, CitationOptions, CitationReport};
use uscode_core::fold::{fold_to_sections, FoldOptions};
use uscode_core::ingest::{parse_snapshot_with, RawDocument, SourceFormat, UslmConfig};
use uscode_core::metrics::{
    degree_stats, fit_power_law_with, growth_rates, histogram, histogram_delta, section_entropy, snapshot_stats,
    word_stats, DegreeMode, DegreeStats, GrowthRates, Histogram, MetricsError, PowerLawFit, PowerLawOptions, Scale,
    SnapshotStats, SnapshotTotals, WordStats,
};
use uscode_core::model::{citation_subgraph, CodeGraph};
use uscode_core::report::{self, Cell, Table};
use uscode_core::tokenizer::{tokenize_graph, TokenizeOptions};

use crate::CliError;

#[derive(Debug, Clone, Copy)]
pub struct PipelineOptions {
    pub case_fold: bool,
    pub include_headings: bool,
    pub expand_ranges: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct MetricOptions {
    pub degree_mode: DegreeMode,
    pub bootstrap_n: usize,
    pub seed: u64,
    pub bin_width_log10: f64,
    pub bin_width_entropy: f64,
}

/// A snapshot after folding and citation extraction.
pub struct Prepared {
    pub graph: CodeGraph,
    pub fold_self_loops: usize,
    pub citations: CitationReport,
}

pub fn read_snapshot(
    path: &Path,
    format: SourceFormat,
    date: Option<NaiveDate>,
    config: &UslmConfig,
) -> Result<CodeGraph, CliError> {
    let payload = fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc = RawDocument {
        source_format: format,
        snapshot_date: date,
        payload,
    };
    parse_snapshot_with(&doc, config).map_err(|e| CliError::pipeline("ingest", format!("{}: {e}", path.display())))
}

pub fn prepare(g: CodeGraph, options: PipelineOptions) -> Result<Prepared, CliError> {
    let tokenize = TokenizeOptions {
        case_fold: options.case_fold,
    };
    let g = tokenize_graph(g, tokenize).map_err(|e| CliError::pipeline("tokenizer", e))?;
    let folded = fold_to_sections(
        &g,
        FoldOptions {
            include_headings: options.include_headings,
            tokenize,
        },
    )
    .map_err(|e| CliError::pipeline("fold", e))?;
    drop(g);
    let (graph, citations) = build_citation_edges(
        folded.graph,
        CitationOptions {
            expand_ranges: options.expand_ranges,
        },
    )
    .map_err(|e| CliError::pipeline("citation-parser", e))?;
    Ok(Prepared {
        graph,
        fold_self_loops: folded.self_loops_dropped,
        citations,
    })
}

fn metrics_err(e: MetricsError) -> CliError {
    CliError::pipeline("metrics", e)
}

/// Word-count histogram over sections with at least one token, and the number
/// of empty sections left out.
fn word_histogram(g: &CodeGraph, width: f64) -> Result<(Option<Histogram>, usize), CliError> {
    let counts: Vec<f64> = g.sections().map(|s| s.tokens.len() as f64).collect();
    let nonempty: Vec<f64> = counts.iter().copied().filter(|&c| c > 0.0).collect();
    let excluded = counts.len() - nonempty.len();
    if nonempty.is_empty() {
        return Ok((None, excluded));
    }
    Ok((
        Some(histogram(&nonempty, Scale::Log10, width).map_err(metrics_err)?),
        excluded,
    ))
}

fn entropy_histogram(g: &CodeGraph, width: f64) -> Result<Option<Histogram>, CliError> {
    let values: Vec<f64> = g.sections().filter_map(section_entropy).collect();
    if values.is_empty() {
        return Ok(None);
    }
    histogram(&values, Scale::Linear, width).map(Some).map_err(metrics_err)
}

pub struct Analysis {
    pub stats: SnapshotStats,
    pub words: WordStats,
    pub degrees: Option<DegreeStats>,
    pub power_law: Result<PowerLawFit, String>,
    pub word_histogram: Option<Histogram>,
    pub entropy_histogram: Option<Histogram>,
    pub empty_sections: usize,
}

pub fn analyze(p: &Prepared, m: MetricOptions, with_power_law: bool) -> Result<Analysis, CliError> {
    let g = &p.graph;
    let sub = citation_subgraph(g);
    let degrees = if sub.is_empty() {
        None
    } else {
        Some(degree_stats(&sub, m.degree_mode).map_err(metrics_err)?)
    };
    let power_law = match (&degrees, with_power_law) {
        (_, false) => Err("not requested".to_string()),
        (None, _) => Err("no citation edges".to_string()),
        (Some(d), true) => fit_power_law_with(
            &d.degrees,
            PowerLawOptions {
                bootstrap_n: m.bootstrap_n,
                seed: m.seed,
                ..PowerLawOptions::default()
            },
        )
        .map_err(|e| e.to_string()),
    };
    let (word_histogram, empty_sections) = word_histogram(g, m.bin_width_log10)?;
    Ok(Analysis {
        stats: snapshot_stats(g),
        words: word_stats(g),
        degrees,
        power_law,
        word_histogram,
        entropy_histogram: entropy_histogram(g, m.bin_width_entropy)?,
        empty_sections,
    })
}

pub fn write_table(dir: &Path, name: &str, table: &Table) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::pipeline("report", format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(format!("{name}.csv")), table.to_csv()).map_err(io)?;
    fs::write(dir.join(format!("{name}.json")), table.to_json()).map_err(io)?;
    Ok(())
}

/// `table` with a leading `date` column.
fn dated(date: NaiveDate, table: Table) -> Table {
    let mut columns = vec!["date"];
    columns.extend(table.columns);
    let mut out = Table::new(columns);
    for row in table.rows {
        let mut r = vec![Cell::from(date)];
        r.extend(row);
        out.push(r);
    }
    out
}

fn concat(tables: impl IntoIterator<Item = Table>) -> Option<Table> {
    let mut iter = tables.into_iter();
    let mut first = iter.next()?;
    for t in iter {
        assert_eq!(t.columns, first.columns, "concatenated tables share columns");
        first.rows.extend(t.rows);
    }
    Some(first)
}

fn sections_table(g: &CodeGraph) -> Table {
    let mut t = Table::new(vec!["path", "words", "entropy"]);
    for s in g.sections() {
        t.push(vec![
            s.path.to_string().into(),
            s.tokens.len().into(),
            section_entropy(s).into(),
        ]);
    }
    t
}

fn run_table(p: &Prepared, a: &Analysis, m: MetricOptions) -> Table {
    let mut t = Table::new(vec!["item", "value"]);
    let mut row = |k: &str, v: String| t.push(vec![k.to_string().into(), v.into()]);
    row("sections", a.words.sections.to_string());
    row(
        "empty_sections_excluded_from_word_histogram",
        a.empty_sections.to_string(),
    );
    row("resolved_citations", p.citations.resolved.to_string());
    row("citation_self_loops_dropped", p.citations.self_loops.to_string());
    row("unresolved_citations", p.citations.unresolved.len().to_string());
    row("fold_self_loops_dropped", p.fold_self_loops.to_string());
    row("degree_mode", m.degree_mode.to_string());
    row("seed", m.seed.to_string());
    row("bootstrap_n", m.bootstrap_n.to_string());
    row(
        "power_law",
        match &a.power_law {
            Ok(_) => "fitted".to_string(),
            Err(why) => format!("skipped: {why}"),
        },
    );
    t
}

pub fn write_analysis(dir: &Path, p: &Prepared, a: &Analysis, m: MetricOptions) -> Result<(), CliError> {
    let date = a.stats.date;
    write_table(
        dir,
        "snapshot",
        &report::emit_snapshot_table(std::slice::from_ref(&a.stats)),
    )?;
    write_table(dir, "words", &report::emit_word_stats(date, &a.words))?;
    if let Some(d) = &a.degrees {
        write_table(dir, "degree_stats", &dated(date, report::emit_degree_stats(d)))?;
        write_table(dir, "degree_ccdf", &report::emit_degree_ccdf(&d.degrees))?;
    }
    if let Ok(fit) = &a.power_law {
        write_table(dir, "powerlaw", &dated(date, report::emit_power_law(fit)))?;
    }
    if let Some(h) = &a.word_histogram {
        write_table(dir, "word_histogram", &report::emit_distribution(h))?;
    }
    if let Some(h) = &a.entropy_histogram {
        write_table(dir, "entropy_histogram", &report::emit_distribution(h))?;
    }
    write_table(dir, "sections", &sections_table(&p.graph))?;
    write_table(
        dir,
        "unresolved_citations",
        &report::emit_unresolved(&p.citations.unresolved),
    )?;
    write_table(dir, "run", &run_table(p, a, m))?;
    Ok(())
}

/// Outputs for two or more snapshots. The earliest snapshot is the baseline
/// for histogram deltas; growth rates use consecutive pairs.
pub fn write_diff(dir: &Path, mut snapshots: Vec<(Prepared, Analysis)>) -> Result<(), CliError> {
    snapshots.sort_by_key(|(_, a)| a.stats.date);
    let stats: Vec<SnapshotStats> = snapshots.iter().map(|(_, a)| a.stats.clone()).collect();
    write_table(dir, "snapshots", &report::emit_snapshot_table(&stats))?;
    let words = concat(
        snapshots
            .iter()
            .map(|(_, a)| report::emit_word_stats(a.stats.date, &a.words)),
    );
    if let Some(t) = words {
        write_table(dir, "words", &t)?;
    }
    let degrees = concat(snapshots.iter().filter_map(|(_, a)| {
        a.degrees
            .as_ref()
            .map(|d| dated(a.stats.date, report::emit_degree_stats(d)))
    }));
    if let Some(t) = degrees {
        write_table(dir, "degree_stats", &t)?;
    }

    let totals: Vec<SnapshotTotals> = snapshots
        .iter()
        .map(|(_, a)| SnapshotTotals::new(&a.stats, a.words.total))
        .collect();
    let rates: Vec<GrowthRates> = totals
        .windows(2)
        .map(|w| growth_rates(&w[0], &w[1]))
        .collect::<Result<_, _>>()
        .map_err(metrics_err)?;
    write_table(dir, "growth", &report::emit_growth(&rates))?;

    for (name, pick) in [
        (
            "word_histogram",
            (|a: &Analysis| a.word_histogram.as_ref()) as fn(&Analysis) -> Option<&Histogram>,
        ),
        ("entropy_histogram", |a: &Analysis| a.entropy_histogram.as_ref()),
    ] {
        let all = concat(
            snapshots
                .iter()
                .filter_map(|(_, a)| pick(a).map(|h| dated(a.stats.date, report::emit_distribution(h)))),
        );
        if let Some(t) = all {
            write_table(dir, name, &t)?;
        }
        let (_, base) = &snapshots[0];
        let Some(base_h) = pick(base) else { continue };
        let mut deltas = Vec::new();
        for (_, a) in &snapshots[1..] {
            if let Some(h) = pick(a) {
                let d = histogram_delta(base_h, h).map_err(metrics_err)?;
                deltas.push(dated(a.stats.date, report::emit_delta(&d)));
            }
        }
        if let Some(t) = concat(deltas) {
            write_table(dir, &format!("{name}_delta"), &t)?;
        }
    }
    Ok(())
}
