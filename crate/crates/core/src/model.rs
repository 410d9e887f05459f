//! Graph representation of a codified corpus: a rooted hierarchy tree over
//! token-bearing vertices with a citation overlay.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tokenizer::TokenStream;

/// Structural level of a vertex. `Root` is synthetic and joins the titles
/// into a single tree; the other twelve are statutory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelKind {
    Root,
    Title,
    Subtitle,
    Chapter,
    Subchapter,
    Part,
    Subpart,
    Section,
    Subsection,
    Paragraph,
    Subparagraph,
    Clause,
    Subclause,
}

impl LevelKind {
    pub const STATUTORY: [LevelKind; 12] = [
        LevelKind::Title,
        LevelKind::Subtitle,
        LevelKind::Chapter,
        LevelKind::Subchapter,
        LevelKind::Part,
        LevelKind::Subpart,
        LevelKind::Section,
        LevelKind::Subsection,
        LevelKind::Paragraph,
        LevelKind::Subparagraph,
        LevelKind::Clause,
        LevelKind::Subclause,
    ];

    /// Only sections and their subdivisions may carry statutory text.
    pub fn is_text_bearing(self) -> bool {
        matches!(
            self,
            LevelKind::Section
                | LevelKind::Subsection
                | LevelKind::Paragraph
                | LevelKind::Subparagraph
                | LevelKind::Clause
                | LevelKind::Subclause
        )
    }

    /// True for the subdivisions that fold into their enclosing section.
    pub fn is_below_section(self) -> bool {
        self.is_text_bearing() && self != LevelKind::Section
    }

    pub fn is_organizational(self) -> bool {
        !self.is_text_bearing() && self != LevelKind::Root
    }

    pub fn name(self) -> &'static str {
        match self {
            LevelKind::Root => "root",
            LevelKind::Title => "title",
            LevelKind::Subtitle => "subtitle",
            LevelKind::Chapter => "chapter",
            LevelKind::Subchapter => "subchapter",
            LevelKind::Part => "part",
            LevelKind::Subpart => "subpart",
            LevelKind::Section => "section",
            LevelKind::Subsection => "subsection",
            LevelKind::Paragraph => "paragraph",
            LevelKind::Subparagraph => "subparagraph",
            LevelKind::Clause => "clause",
            LevelKind::Subclause => "subclause",
        }
    }
}

impl fmt::Display for LevelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown level kind `{0}`")]
pub struct UnknownLevel(pub String);

impl FromStr for LevelKind {
    type Err = UnknownLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(LevelKind::Root)
            .chain(LevelKind::STATUTORY)
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownLevel(s.to_string()))
    }
}

/// Surrogate key of a vertex within one snapshot. Cross-snapshot identity is
/// established by [`NodePath`] equality, never by id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Sequence of `(level, designation)` pairs from the root (exclusive).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodePath(pub Vec<(LevelKind, String)>);

impl NodePath {
    pub fn child(&self, level: LevelKind, number: &str) -> NodePath {
        let mut steps = self.0.clone();
        steps.push((level, number.to_string()));
        NodePath(steps)
    }

    pub fn steps(&self) -> &[(LevelKind, String)] {
        &self.0
    }

    /// Designation of the nearest enclosing (or own) step of `level`.
    pub fn find(&self, level: LevelKind) -> Option<&str> {
        self.0.iter().rev().find(|(k, _)| *k == level).map(|(_, n)| n.as_str())
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for (level, number) in &self.0 {
            write!(f, "/{level}:{number}")?;
        }
        Ok(())
    }
}

/// One vertex of the hierarchy. `text` is the raw statutory text attached to
/// this vertex; `tokens` is its tokenization, empty until the tokenizer runs.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusNode {
    pub id: NodeId,
    pub level: LevelKind,
    pub number: String,
    pub heading: Option<String>,
    pub text: String,
    pub tokens: TokenStream,
    pub path: NodePath,
}

impl CorpusNode {
    /// Membership in the text-bearing vertex set.
    pub fn has_text(&self) -> bool {
        !self.text.is_empty() || !self.tokens.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("node {0} does not exist")]
    MissingNode(NodeId),
    #[error("duplicate path {0}")]
    DuplicatePath(NodePath),
    #[error("text found on non-text-bearing {level} at {path}")]
    TextOnNonTextLevel { level: LevelKind, path: NodePath },
    #[error("the synthetic root level cannot be used for {0}")]
    RootLevelMisuse(NodePath),
    #[error("token table has {got} entries for {expected} nodes")]
    TokenTableMismatch { expected: usize, got: usize },
    #[error("hierarchy is not a tree: {0}")]
    NotATree(String),
}

/// Full snapshot graph. The hierarchy is stored as parent/child adjacency with
/// children in document order; citation edges are a multiset.
#[derive(Debug, Clone)]
pub struct CodeGraph {
    snapshot_date: NaiveDate,
    nodes: Vec<CorpusNode>,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    citation_edges: Vec<(NodeId, NodeId)>,
    path_index: HashMap<NodePath, NodeId>,
}

impl CodeGraph {
    pub const ROOT: NodeId = NodeId(0);

    pub fn snapshot_date(&self) -> NaiveDate {
        self.snapshot_date
    }

    pub fn root_id(&self) -> NodeId {
        Self::ROOT
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[CorpusNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&CorpusNode> {
        self.nodes.get(id.index())
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent.get(id.index()).copied().flatten()
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        self.children.get(id.index()).map_or(&[], Vec::as_slice)
    }

    pub fn lookup(&self, path: &NodePath) -> Option<NodeId> {
        self.path_index.get(path).copied()
    }

    /// Parent-to-child pairs, grouped by parent in id order.
    pub fn hierarchy_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(p, kids)| kids.iter().map(move |&c| (NodeId(p as u32), c)))
    }

    pub fn hierarchy_edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn citation_edges(&self) -> &[(NodeId, NodeId)] {
        &self.citation_edges
    }

    /// Count of citation edges with parallel duplicates collapsed.
    pub fn distinct_citation_edge_count(&self) -> usize {
        self.citation_edges.iter().collect::<BTreeSet<_>>().len()
    }

    /// Pre-order (document order) traversal from the root.
    pub fn preorder(&self) -> Vec<NodeId> {
        self.preorder_from(Self::ROOT)
    }

    pub fn preorder_from(&self, start: NodeId) -> Vec<NodeId> {
        let mut order = Vec::new();
        let mut stack = vec![start];
        while let Some(id) = stack.pop() {
            order.push(id);
            stack.extend(self.children(id).iter().rev());
        }
        order
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.nodes[id.index()].path.0.len()
    }

    /// Section-level vertices in id order.
    pub fn sections(&self) -> impl Iterator<Item = &CorpusNode> + '_ {
        self.nodes.iter().filter(|n| n.level == LevelKind::Section)
    }

    /// Replace the citation multiset. Endpoints must exist.
    pub fn with_citation_edges(mut self, edges: Vec<(NodeId, NodeId)>) -> Result<Self, ModelError> {
        for &(s, t) in &edges {
            for id in [s, t] {
                if id.index() >= self.nodes.len() {
                    return Err(ModelError::MissingNode(id));
                }
            }
        }
        self.citation_edges = edges;
        Ok(self)
    }

    /// Replace per-node token streams, e.g. after running the tokenizer.
    /// `tokens` is indexed by node id.
    pub fn with_tokens(mut self, tokens: Vec<TokenStream>) -> Result<Self, ModelError> {
        if tokens.len() != self.nodes.len() {
            return Err(ModelError::TokenTableMismatch {
                expected: self.nodes.len(),
                got: tokens.len(),
            });
        }
        for (node, stream) in self.nodes.iter_mut().zip(tokens) {
            if !stream.is_empty() && !node.level.is_text_bearing() {
                return Err(ModelError::TextOnNonTextLevel {
                    level: node.level,
                    path: node.path.clone(),
                });
            }
            node.tokens = stream;
        }
        Ok(self)
    }

    /// Checks every structural invariant: a single rooted tree with
    /// consistent parent links, unique paths, referential integrity of
    /// citation edges, and text only on text-bearing levels.
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.nodes.len();
        if n == 0 || self.nodes[0].level != LevelKind::Root {
            return Err(ModelError::NotATree("missing synthetic root".into()));
        }
        if self.hierarchy_edge_count() != n - 1 {
            return Err(ModelError::NotATree(format!(
                "{} hierarchy edges for {} nodes",
                self.hierarchy_edge_count(),
                n
            )));
        }
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 || self.parent[0].is_some() {
            return Err(ModelError::NotATree(format!("{roots} parentless nodes")));
        }
        for (p, kids) in self.children.iter().enumerate() {
            for &c in kids {
                if self.parent.get(c.index()).copied().flatten() != Some(NodeId(p as u32)) {
                    return Err(ModelError::NotATree(format!("inconsistent parent link at {c}")));
                }
            }
        }
        if self.preorder().len() != n {
            return Err(ModelError::NotATree("unreachable nodes".into()));
        }
        let mut seen = HashMap::with_capacity(n);
        for node in &self.nodes {
            if node.level == LevelKind::Root && node.id != Self::ROOT {
                return Err(ModelError::RootLevelMisuse(node.path.clone()));
            }
            if node.has_text() && !node.level.is_text_bearing() {
                return Err(ModelError::TextOnNonTextLevel {
                    level: node.level,
                    path: node.path.clone(),
                });
            }
            if seen.insert(&node.path, node.id).is_some() {
                return Err(ModelError::DuplicatePath(node.path.clone()));
            }
        }
        for &(s, t) in &self.citation_edges {
            for id in [s, t] {
                if id.index() >= n {
                    return Err(ModelError::MissingNode(id));
                }
            }
        }
        Ok(())
    }
}

/// Incremental constructor. Nodes must be added parent-first; sibling order
/// is the order of `add_child` calls.
#[derive(Debug)]
pub struct GraphBuilder {
    graph: CodeGraph,
}

impl GraphBuilder {
    pub fn new(snapshot_date: NaiveDate) -> Self {
        let root = CorpusNode {
            id: CodeGraph::ROOT,
            level: LevelKind::Root,
            number: String::new(),
            heading: None,
            text: String::new(),
            tokens: TokenStream::default(),
            path: NodePath::default(),
        };
        let mut path_index = HashMap::new();
        path_index.insert(NodePath::default(), CodeGraph::ROOT);
        GraphBuilder {
            graph: CodeGraph {
                snapshot_date,
                nodes: vec![root],
                parent: vec![None],
                children: vec![Vec::new()],
                citation_edges: Vec::new(),
                path_index,
            },
        }
    }

    pub fn root(&self) -> NodeId {
        CodeGraph::ROOT
    }

    pub fn node(&self, id: NodeId) -> Option<&CorpusNode> {
        self.graph.node(id)
    }

    pub fn add_child(
        &mut self,
        parent: NodeId,
        level: LevelKind,
        number: impl Into<String>,
        heading: Option<String>,
        text: impl Into<String>,
    ) -> Result<NodeId, ModelError> {
        self.add_child_with_tokens(parent, level, number, heading, text, TokenStream::default())
    }

    pub fn add_child_with_tokens(
        &mut self,
        parent: NodeId,
        level: LevelKind,
        number: impl Into<String>,
        heading: Option<String>,
        text: impl Into<String>,
        tokens: TokenStream,
    ) -> Result<NodeId, ModelError> {
        let number = number.into();
        let text = text.into();
        let parent_node = self.graph.node(parent).ok_or(ModelError::MissingNode(parent))?;
        let path = parent_node.path.child(level, &number);
        if level == LevelKind::Root {
            return Err(ModelError::RootLevelMisuse(path));
        }
        if (!text.is_empty() || !tokens.is_empty()) && !level.is_text_bearing() {
            return Err(ModelError::TextOnNonTextLevel { level, path });
        }
        if self.graph.path_index.contains_key(&path) {
            return Err(ModelError::DuplicatePath(path));
        }
        let id = NodeId(self.graph.nodes.len() as u32);
        self.graph.path_index.insert(path.clone(), id);
        self.graph.nodes.push(CorpusNode {
            id,
            level,
            number,
            heading,
            text,
            tokens,
            path,
        });
        self.graph.parent.push(Some(parent));
        self.graph.children.push(Vec::new());
        self.graph.children[parent.index()].push(id);
        Ok(id)
    }

    pub fn add_citation(&mut self, source: NodeId, target: NodeId) -> Result<(), ModelError> {
        for id in [source, target] {
            if self.graph.node(id).is_none() {
                return Err(ModelError::MissingNode(id));
            }
        }
        self.graph.citation_edges.push((source, target));
        Ok(())
    }

    pub fn build(self) -> CodeGraph {
        self.graph
    }
}

/// Read-only view of the hierarchy network: every vertex, hierarchy edges only.
#[derive(Debug, Clone, Copy)]
pub struct HierarchyView<'a> {
    graph: &'a CodeGraph,
}

impl<'a> HierarchyView<'a> {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.hierarchy_edge_count()
    }

    pub fn nodes(&self) -> &'a [CorpusNode] {
        self.graph.nodes()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + 'a {
        self.graph.hierarchy_edges()
    }

    pub fn root(&self) -> NodeId {
        self.graph.root_id()
    }
}

/// Hierarchy view of `g`, after confirming the hierarchy is a rooted tree.
pub fn hierarchy_subgraph(g: &CodeGraph) -> Result<HierarchyView<'_>, ModelError> {
    g.validate()?;
    Ok(HierarchyView { graph: g })
}

/// Edge-induced citation subgraph: vertices are exactly the endpoints of
/// citation edges, and edges keep their multiplicity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CitationSubgraph {
    pub vertex_ids: BTreeSet<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
}

impl CitationSubgraph {
    pub fn from_edges(edges: Vec<(NodeId, NodeId)>) -> Self {
        let vertex_ids = edges.iter().flat_map(|&(s, t)| [s, t]).collect();
        CitationSubgraph { vertex_ids, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn distinct_edge_count(&self) -> usize {
        self.edges.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn citation_subgraph(g: &CodeGraph) -> CitationSubgraph {
    CitationSubgraph::from_edges(g.citation_edges().to_vec())
}
