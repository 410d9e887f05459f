//! Section folding: every section absorbs its subtree.
//!
//! A folded section's text and tokens are its own followed by those of each
//! descendant in pre-order. Citation endpoints inside a folded subtree move to
//! the enclosing section; edges that become self-loops are dropped and
//! counted.

use rayon::prelude::*;
use thiserror::Error;

use crate::model::{CodeGraph, GraphBuilder, LevelKind, ModelError, NodeId, NodePath};
use crate::tokenizer::{tokenize_with, TokenStream, TokenizeOptions};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FoldOptions {
    /// Fold the headings of descendants (not the section's own heading) into
    /// text and tokens, each ahead of its vertex's text.
    pub include_headings: bool,
    /// Tokenization applied to folded headings.
    pub tokenize: TokenizeOptions,
}

#[derive(Debug, Error)]
pub enum FoldError {
    #[error("{path} lies below section level but is not inside any section")]
    SectionlessText { path: NodePath },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub graph: CodeGraph,
    pub self_loops_dropped: usize,
}

/// Nearest section at or above every vertex; `None` above section level.
fn enclosing_sections(g: &CodeGraph) -> Result<Vec<Option<NodeId>>, FoldError> {
    let mut out = vec![None; g.node_count()];
    for id in g.preorder() {
        let node = g.node(id).ok_or(ModelError::MissingNode(id))?;
        out[id.index()] = match node.level {
            LevelKind::Section => Some(id),
            level if level.is_below_section() => {
                let parent = g.parent(id).ok_or(ModelError::MissingNode(id))?;
                match out[parent.index()] {
                    Some(s) => Some(s),
                    None => {
                        return Err(FoldError::SectionlessText {
                            path: node.path.clone(),
                        })
                    }
                }
            }
            _ => None,
        };
    }
    Ok(out)
}

fn fold_section(g: &CodeGraph, section: NodeId, options: FoldOptions) -> (String, TokenStream) {
    let mut pieces: Vec<&str> = Vec::new();
    let mut tokens = TokenStream::new();
    for id in g.preorder_from(section) {
        let node = g.node(id).expect("preorder ids are valid");
        if id != section && options.include_headings {
            if let Some(h) = node.heading.as_deref().filter(|h| !h.trim().is_empty()) {
                pieces.push(h);
                tokens.append(&tokenize_with(h, options.tokenize));
            }
        }
        if !node.text.is_empty() {
            pieces.push(&node.text);
        }
        tokens.append(&node.tokens);
    }
    (pieces.join("\n"), tokens)
}

/// Collapses all vertices below section level into their sections.
/// Vertices are renumbered in pre-order of the folded tree.
pub fn fold_to_sections(g: &CodeGraph, options: FoldOptions) -> Result<FoldOutcome, FoldError> {
    let enclosing = enclosing_sections(g)?;
    let order = g.preorder();
    let kept: Vec<NodeId> = order
        .iter()
        .copied()
        .filter(|&id| id == g.root_id() || !g.node(id).is_some_and(|n| n.level.is_below_section()))
        .collect();

    let folded: Vec<Option<(String, TokenStream)>> = kept
        .par_iter()
        .map(|&id| {
            let node = g.node(id).expect("kept ids are valid");
            (node.level == LevelKind::Section).then(|| fold_section(g, id, options))
        })
        .collect();

    let mut builder = GraphBuilder::new(g.snapshot_date());
    let mut renumber: Vec<Option<NodeId>> = vec![None; g.node_count()];
    renumber[g.root_id().index()] = Some(builder.root());
    for (&old, body) in kept.iter().zip(folded) {
        if old == g.root_id() {
            continue;
        }
        let node = g.node(old).expect("kept ids are valid");
        let parent = g
            .parent(old)
            .and_then(|p| renumber[p.index()])
            .ok_or(ModelError::MissingNode(old))?;
        let (text, tokens) = body.unwrap_or_else(|| (node.text.clone(), node.tokens.clone()));
        let id = builder.add_child_with_tokens(
            parent,
            node.level,
            node.number.clone(),
            node.heading.clone(),
            text,
            tokens,
        )?;
        renumber[old.index()] = Some(id);
    }

    let target_of = |id: NodeId| {
        let owner = enclosing[id.index()].unwrap_or(id);
        renumber[owner.index()].ok_or(ModelError::MissingNode(id))
    };
    let mut edges = Vec::with_capacity(g.citation_edges().len());
    let mut self_loops_dropped = 0;
    for &(s, t) in g.citation_edges() {
        let (s, t) = (target_of(s)?, target_of(t)?);
        if s == t {
            self_loops_dropped += 1;
        } else {
            edges.push((s, t));
        }
    }
    let graph = builder.build().with_citation_edges(edges)?;
    Ok(FoldOutcome {
        graph,
        self_loops_dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::tokenize;
    use chrono::NaiveDate;

    fn date() -> NaiveDate {
        NaiveDate::from_ymd_opt(2009, 11, 10).unwrap()
    }

    fn add(
        b: &mut GraphBuilder,
        parent: NodeId,
        level: LevelKind,
        num: &str,
        heading: Option<&str>,
        text: &str,
    ) -> NodeId {
        b.add_child_with_tokens(parent, level, num, heading.map(str::to_string), text, tokenize(text))
            .unwrap()
    }

    fn nested() -> (CodeGraph, [NodeId; 5]) {
        let mut b = GraphBuilder::new(date());
        let t = add(&mut b, CodeGraph::ROOT, LevelKind::Title, "1", None, "");
        let s1 = add(&mut b, t, LevelKind::Section, "1", Some("Definitions"), "In general");
        let a = add(&mut b, s1, LevelKind::Subsection, "a", Some("Scope"), "one two three");
        let p = add(&mut b, a, LevelKind::Paragraph, "1", None, "four five six seven");
        let s2 = add(&mut b, t, LevelKind::Section, "2", None, "eight");
        (b.build(), [t, s1, a, p, s2])
    }

    #[test]
    fn subtrees_collapse_in_document_order() {
        let (g, _) = nested();
        let out = fold_to_sections(&g, FoldOptions::default()).unwrap();
        let f = out.graph;
        assert_eq!(f.node_count(), 4);
        let s1 = f.sections().next().unwrap();
        assert_eq!(
            s1.tokens.to_vec(),
            ["In", "general", "one", "two", "three", "four", "five", "six", "seven"]
        );
        assert_eq!(s1.text, "In general\none two three\nfour five six seven");
        assert!(f.nodes().iter().all(|n| !n.level.is_below_section()));
        assert_eq!(f.hierarchy_edge_count(), f.node_count() - 1);
    }

    #[test]
    fn additive_token_counts() {
        let mut b = GraphBuilder::new(date());
        let t = add(&mut b, CodeGraph::ROOT, LevelKind::Title, "1", None, "");
        let s = add(&mut b, t, LevelKind::Section, "1", None, "");
        add(&mut b, s, LevelKind::Subsection, "a", None, "a b c");
        add(&mut b, s, LevelKind::Subsection, "b", None, "d e f g");
        let f = fold_to_sections(&b.build(), FoldOptions::default()).unwrap().graph;
        assert_eq!(f.sections().next().unwrap().tokens.len(), 7);
    }

    #[test]
    fn citations_retarget_and_self_loops_drop() {
        let (g, [_, s1, a, p, s2]) = nested();
        let g = g.with_citation_edges(vec![(p, s2), (a, p), (s2, a), (s1, s2)]).unwrap();
        let out = fold_to_sections(&g, FoldOptions::default()).unwrap();
        assert_eq!(out.self_loops_dropped, 1);
        let ids: Vec<_> = out.graph.sections().map(|n| n.id).collect();
        assert_eq!(
            out.graph.citation_edges(),
            &[(ids[0], ids[1]), (ids[1], ids[0]), (ids[0], ids[1])]
        );
    }

    #[test]
    fn idempotent() {
        let (g, _) = nested();
        for include_headings in [false, true] {
            let options = FoldOptions {
                include_headings,
                ..FoldOptions::default()
            };
            let once = fold_to_sections(&g, options).unwrap().graph;
            let twice = fold_to_sections(&once, options).unwrap().graph;
            assert_eq!(once.nodes(), twice.nodes());
            assert_eq!(once.citation_edges(), twice.citation_edges());
        }
    }

    #[test]
    fn headings_of_descendants_only() {
        let (g, _) = nested();
        let options = FoldOptions {
            include_headings: true,
            ..FoldOptions::default()
        };
        let f = fold_to_sections(&g, options).unwrap().graph;
        let s1 = f.sections().next().unwrap();
        assert_eq!(s1.tokens.iter().next(), Some("In"));
        assert!(s1.tokens.iter().any(|t| t == "Scope"));
        assert!(!s1.tokens.iter().any(|t| t == "Definitions"));
        assert_eq!(s1.tokens.len(), 10);
    }

    #[test]
    fn sectionless_subsection_is_an_error() {
        let mut b = GraphBuilder::new(date());
        let t = add(&mut b, CodeGraph::ROOT, LevelKind::Title, "7", None, "");
        let c = add(&mut b, t, LevelKind::Chapter, "2", None, "");
        add(&mut b, c, LevelKind::Subsection, "a", None, "loose");
        let err = fold_to_sections(&b.build(), FoldOptions::default()).unwrap_err();
        assert!(err.to_string().contains("/title:7/chapter:2/subsection:a"), "{err}");
    }
}
