//! Explicit cross-reference extraction and resolution.
//!
//! Recognized phrases:
//! - `section N of title M`, `sections N and N' of title M`
//! - `M U.S.C. N`, `M U.S.C. § N`, `M U.S.C. §§ N, N'`
//! - `§ N` / `§§ N, N'` followed by `of title M`
//! - `sections N through N'` ranges (endpoints only unless ranges are expanded)
//! - relative qualifiers `of this title`, `of this chapter`, and `this section`
//!
//! Subdivision suffixes such as `(c)(3)` are matched but dropped, so every
//! target is a section. A section reference with no title qualifier is
//! reported as unresolvable, except when it is followed by some other `of ...`
//! (for example `section 5 of the Act`), which is not a reference into the
//! corpus and is skipped.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;

use crate::model::{CodeGraph, CorpusNode, LevelKind, ModelError, NodeId, NodePath};

const ITEM: &str = r"(\d+[A-Za-z]*(?:-\d+[A-Za-z]*)*)((?:\([0-9A-Za-z]{1,8}\))*)";

static HEAD: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"(?x)
        (?P<usc>\b(?P<utitle>\d+)\s+U\.\s?S\.\s?C\.?\s*(?:§§?\s*)?{ITEM})
        | (?P<kw>(?:\b[Ss]ections?\s+|§§?\s*){ITEM})
        | (?P<own>\b[Tt]his\s+section\b)"
    ))
    .expect("static citation pattern")
});

static NEXT_ITEM: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"^(?:\s*,\s*(?:(?:and|or)\s+)?|\s+(?P<sep>and|or|through)\s+){ITEM}"
    ))
    .expect("static citation pattern")
});

static QUALIFIER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\s+of\s+(?:title\s+(?P<title>\d+)\b|this\s+(?P<this>title|chapter)\b)")
        .expect("static citation pattern")
});

static USC_AHEAD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s+U\.\s?S\.\s?C").expect("static citation pattern"));

static OTHER_OF: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s+of\s").expect("static citation pattern"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CitationStatus {
    Resolved,
    UnresolvedTargetMissing,
    UnresolvableRelative,
}

impl fmt::Display for CitationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CitationStatus::Resolved => "resolved",
            CitationStatus::UnresolvedTargetMissing => "unresolved-target-missing",
            CitationStatus::UnresolvableRelative => "unresolvable-relative",
        })
    }
}

/// Title and section designations of a cited section.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SectionRef {
    pub title: String,
    pub section: String,
}

/// One cited target. Targets named by the same phrase (a list or a range)
/// share its span; spans of distinct phrases never overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Citation {
    pub source_id: NodeId,
    pub raw_span: String,
    /// Byte offsets of `raw_span` within the source text.
    pub span: Range<usize>,
    pub target: Option<SectionRef>,
    pub target_id: Option<NodeId>,
    pub status: CitationStatus,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CitationOptions {
    /// Interpolate `sections N through N'` over every existing numeric
    /// section between the endpoints instead of citing the endpoints only.
    pub expand_ranges: bool,
}

#[derive(Debug, Clone)]
enum TitleSpec {
    Explicit(String),
    /// `of this title` or `of this chapter`; both resolve within the
    /// citing vertex's title.
    Relative,
    Missing,
}

#[derive(Debug)]
struct Phrase {
    span: Range<usize>,
    /// Section designations with the separator that preceded each.
    items: Vec<(String, bool)>,
    title: TitleSpec,
    own_section: bool,
}

/// Grammar pass over `text`: non-overlapping citation phrases, left to right.
fn scan(text: &str) -> Vec<Phrase> {
    let mut out = Vec::new();
    let mut pos = 0;
    while let Some(caps) = HEAD.captures_at(text, pos) {
        let whole = caps.get(0).expect("group 0");
        if caps.name("own").is_some() {
            out.push(Phrase {
                span: whole.range(),
                items: Vec::new(),
                title: TitleSpec::Missing,
                own_section: true,
            });
            pos = whole.end();
            continue;
        }
        let (first, title) = if caps.name("usc").is_some() {
            (caps.get(3), TitleSpec::Explicit(caps["utitle"].to_string()))
        } else {
            (caps.get(6), TitleSpec::Missing)
        };
        let first = first.expect("item group participates");
        let mut items = vec![(first.as_str().to_string(), false)];
        let mut end = whole.end();
        while let Some(next) = NEXT_ITEM.captures(&text[end..]) {
            let consumed = next.get(0).expect("group 0").end();
            // a number that is really the title of a following `M U.S.C.` phrase
            if USC_AHEAD.is_match(&text[end + consumed..]) {
                break;
            }
            let range = next.name("sep").is_some_and(|s| s.as_str() == "through");
            items.push((next[2].to_string(), range));
            end += consumed;
        }
        let mut title = title;
        if matches!(title, TitleSpec::Missing) {
            if let Some(q) = QUALIFIER.captures(&text[end..]) {
                title = match q.name("title") {
                    Some(t) => TitleSpec::Explicit(t.as_str().to_string()),
                    None => TitleSpec::Relative,
                };
                end += q.get(0).expect("group 0").end();
            } else if OTHER_OF.is_match(&text[end..]) {
                // `section 5 of the Act`: not a reference into the corpus
                pos = end;
                continue;
            }
        }
        out.push(Phrase {
            span: whole.start()..end,
            items,
            title,
            own_section: false,
        });
        pos = end;
    }
    out
}

/// Section lookup by `(title, section)` designation.
#[derive(Debug, Default)]
pub struct SectionIndex {
    by_designation: HashMap<(String, String), NodeId>,
    numeric: HashMap<String, BTreeMap<u64, NodeId>>,
}

impl SectionIndex {
    pub fn new(g: &CodeGraph) -> Self {
        let mut index = SectionIndex::default();
        for node in g.sections() {
            let Some(title) = node.path.find(LevelKind::Title) else {
                continue;
            };
            let key = (title.to_string(), node.number.clone());
            index.by_designation.entry(key).or_insert(node.id);
            if let Ok(n) = node.number.parse::<u64>() {
                index
                    .numeric
                    .entry(title.to_string())
                    .or_default()
                    .entry(n)
                    .or_insert(node.id);
            }
        }
        index
    }

    pub fn get(&self, title: &str, section: &str) -> Option<NodeId> {
        self.by_designation
            .get(&(title.to_string(), section.to_string()))
            .copied()
    }

    fn between(&self, title: &str, lo: u64, hi: u64) -> Vec<(u64, NodeId)> {
        self.numeric
            .get(title)
            .map(|m| m.range(lo + 1..hi).map(|(&n, &id)| (n, id)).collect())
            .unwrap_or_default()
    }
}

/// Resolves phrases found in one vertex's text.
pub struct CitationExtractor<'g> {
    graph: &'g CodeGraph,
    index: SectionIndex,
    options: CitationOptions,
}

impl<'g> CitationExtractor<'g> {
    pub fn new(graph: &'g CodeGraph, options: CitationOptions) -> Self {
        CitationExtractor {
            graph,
            index: SectionIndex::new(graph),
            options,
        }
    }

    /// Enclosing section of `path` (the path itself when it is a section).
    fn section_of(&self, path: &NodePath) -> Option<NodeId> {
        let depth = path.steps().iter().rposition(|(k, _)| *k == LevelKind::Section)?;
        self.graph.lookup(&NodePath(path.steps()[..=depth].to_vec()))
    }

    pub fn extract(&self, node: &CorpusNode) -> Vec<Citation> {
        self.extract_in(node, &node.text, &node.path)
    }

    /// Extraction with an explicit context path for relative qualifiers.
    pub fn extract_in(&self, node: &CorpusNode, text: &str, context: &NodePath) -> Vec<Citation> {
        let mut out = Vec::new();
        for phrase in scan(text) {
            let raw = text[phrase.span.clone()].to_string();
            let make = |target: Option<SectionRef>, target_id: Option<NodeId>, status| Citation {
                source_id: node.id,
                raw_span: raw.clone(),
                span: phrase.span.clone(),
                target,
                target_id,
                status,
            };
            if phrase.own_section {
                let target = self.section_of(context);
                let sref = context
                    .find(LevelKind::Title)
                    .zip(context.find(LevelKind::Section))
                    .map(|(t, s)| SectionRef {
                        title: t.to_string(),
                        section: s.to_string(),
                    });
                out.push(match (target, sref) {
                    (Some(id), Some(r)) => make(Some(r), Some(id), CitationStatus::Resolved),
                    _ => make(None, None, CitationStatus::UnresolvableRelative),
                });
                continue;
            }
            let title = match &phrase.title {
                TitleSpec::Explicit(t) => Some(t.clone()),
                TitleSpec::Relative => context.find(LevelKind::Title).map(str::to_string),
                TitleSpec::Missing => None,
            };
            let Some(title) = title else {
                for _ in &phrase.items {
                    out.push(make(None, None, CitationStatus::UnresolvableRelative));
                }
                continue;
            };
            let mut previous: Option<&str> = None;
            for (section, is_range_end) in &phrase.items {
                if *is_range_end && self.options.expand_ranges {
                    if let (Some(lo), Ok(hi)) = (previous.and_then(|p| p.parse::<u64>().ok()), section.parse::<u64>()) {
                        for (n, id) in self.index.between(&title, lo, hi) {
                            let r = SectionRef {
                                title: title.clone(),
                                section: n.to_string(),
                            };
                            out.push(make(Some(r), Some(id), CitationStatus::Resolved));
                        }
                    }
                }
                let r = SectionRef {
                    title: title.clone(),
                    section: section.clone(),
                };
                out.push(match self.index.get(&title, section) {
                    Some(id) => make(Some(r), Some(id), CitationStatus::Resolved),
                    None => make(Some(r), None, CitationStatus::UnresolvedTargetMissing),
                });
                previous = Some(section);
            }
        }
        out
    }
}

/// Citations in `node`, resolved against `g`, with `context` supplying the
/// title and chapter for relative qualifiers.
pub fn extract_citations(
    g: &CodeGraph,
    node: &CorpusNode,
    context: &NodePath,
    options: CitationOptions,
) -> Vec<Citation> {
    CitationExtractor::new(g, options).extract_in(node, &node.text, context)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnresolvedCitation {
    pub source_path: String,
    pub raw_span: String,
    pub status: CitationStatus,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CitationReport {
    pub resolved: usize,
    /// Resolved citations whose target is the citing section itself; these
    /// are not added as edges.
    pub self_loops: usize,
    pub unresolved: Vec<UnresolvedCitation>,
}

/// Replaces the citation edges of `g` with one edge per resolved citation,
/// from the citing section to the cited section. Unresolved citations go to
/// the report, as do dropped self-loops.
pub fn build_citation_edges(g: CodeGraph, options: CitationOptions) -> Result<(CodeGraph, CitationReport), ModelError> {
    let extractor = CitationExtractor::new(&g, options);
    let per_node: Vec<Vec<Citation>> = g
        .nodes()
        .par_iter()
        .map(|n| {
            if n.text.is_empty() {
                Vec::new()
            } else {
                extractor.extract(n)
            }
        })
        .collect();

    let mut report = CitationReport::default();
    let mut edges = Vec::new();
    for (node, citations) in g.nodes().iter().zip(per_node) {
        let source = extractor.section_of(&node.path).unwrap_or(node.id);
        for c in citations {
            match (c.status, c.target_id) {
                (CitationStatus::Resolved, Some(target)) => {
                    report.resolved += 1;
                    if target == source {
                        report.self_loops += 1;
                    } else {
                        edges.push((source, target));
                    }
                }
                _ => report.unresolved.push(UnresolvedCitation {
                    source_path: node.path.to_string(),
                    raw_span: c.raw_span,
                    status: c.status,
                }),
            }
        }
    }
    drop(extractor);
    let g = g.with_citation_edges(edges)?;
    Ok((g, report))
}
