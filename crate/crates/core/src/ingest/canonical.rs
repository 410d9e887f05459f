use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{display_path, IngestError, ParsedDocument};
use crate::model::{CodeGraph, GraphBuilder, LevelKind, NodeId, NodePath};

/// Top-level canonical interchange document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalDocument {
    pub snapshot_date: String,
    pub titles: Vec<CanonicalNode>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CanonicalNode {
    pub level: String,
    pub num: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heading: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<CanonicalNode>,
}

pub(super) fn read_document(payload: &[u8]) -> Result<ParsedDocument, IngestError> {
    let doc: CanonicalDocument = serde_json::from_slice(payload)?;
    Ok(ParsedDocument {
        snapshot_date: Some(doc.snapshot_date),
        titles: doc.titles,
    })
}

pub(super) fn build_graph(date: NaiveDate, titles: &[CanonicalNode]) -> Result<CodeGraph, IngestError> {
    let mut builder = GraphBuilder::new(date);
    let root = builder.root();
    // explicit stack keeps document order without recursion
    let mut stack: Vec<(NodeId, &CanonicalNode)> = titles.iter().rev().map(|t| (root, t)).collect();
    while let Some((parent, node)) = stack.pop() {
        let level: LevelKind = node.level.parse().map_err(|_| {
            let parent_path = builder.node(parent).map(|n| n.path.clone()).unwrap_or_default();
            IngestError::UnknownLevel {
                level: node.level.clone(),
                path: format!(
                    "{}/{}:{}",
                    display_path(&parent_path).trim_end_matches('/'),
                    node.level,
                    node.num
                ),
            }
        })?;
        if level == LevelKind::Root {
            let parent_path = builder.node(parent).map(|n| n.path.clone()).unwrap_or_default();
            return Err(IngestError::UnknownLevel {
                level: node.level.clone(),
                path: display_path(&parent_path),
            });
        }
        let id = builder.add_child(
            parent,
            level,
            node.num.clone(),
            node.heading.clone(),
            node.text.clone().unwrap_or_default(),
        )?;
        stack.extend(node.children.iter().rev().map(|c| (id, c)));
    }
    Ok(builder.build())
}

fn to_canonical(g: &CodeGraph, id: NodeId) -> CanonicalNode {
    let node = g.node(id).expect("child ids are valid");
    let text = if !node.text.is_empty() {
        Some(node.text.clone())
    } else if !node.tokens.is_empty() {
        Some(node.tokens.as_joined().to_string())
    } else {
        None
    };
    CanonicalNode {
        level: node.level.name().to_string(),
        num: node.number.clone(),
        heading: node.heading.clone(),
        text,
        children: g.children(id).iter().map(|&c| to_canonical(g, c)).collect(),
    }
}

/// Deterministic canonical JSON for `g`: fixed key order, children in
/// document order. Citation edges are not serialized; they are re-derived
/// from text.
pub fn export_canonical(g: &CodeGraph) -> Vec<u8> {
    let doc = CanonicalDocument {
        snapshot_date: g.snapshot_date().format("%Y-%m-%d").to_string(),
        titles: g.children(g.root_id()).iter().map(|&c| to_canonical(g, c)).collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("canonical document serializes");
    out.push(b'\n');
    out
}

/// Path of every node plus its text, in pre-order; equal for graphs that are
/// isomorphic up to id renaming.
pub fn structural_fingerprint(g: &CodeGraph) -> Vec<(NodePath, Option<String>, String)> {
    g.preorder()
        .into_iter()
        .map(|id| {
            let n = g.node(id).expect("preorder ids are valid");
            (n.path.clone(), n.heading.clone(), n.text.clone())
        })
        .collect()
}
