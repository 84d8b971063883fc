//! Type graphs and coverable labels.
//!
//! A type graph has one node per type reachable from a root class and one
//! edge per reachable instance field. Edges are iterable when their target is
//! a container or array, or when their source node lies on a directed cycle.
//! Each edge yields a plain label; each iterable edge also yields a plus
//! label.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::source::{SourceCorpus, TypeKind, TypeRef};

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("root class `{0}` not found in corpus")]
    RootNotFound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Class,
    Primitive,
    TypeParameter,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeNode {
    pub id: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldEdge {
    pub from: String,
    pub to: String,
    pub field: String,
    pub declaring: String,
    pub iterable: bool,
}

impl FieldEdge {
    pub fn label(&self) -> Label {
        Label::plain(&self.declaring, &self.field)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeGraph {
    pub root: String,
    pub nodes: Vec<TypeNode>,
    pub edges: Vec<FieldEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphOptions {
    /// Attach fields of in-corpus superclasses to the subclass node.
    pub inherited: bool,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions { inherited: true }
    }
}

/// A coverable unit of state: a field, or iteration through a field (`plus`).
///
/// Ordered by declaring class, then field, then plain before plus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Label {
    pub class: String,
    pub field: String,
    pub plus: bool,
}

impl Label {
    pub fn plain(class: &str, field: &str) -> Self {
        Label { class: class.to_string(), field: field.to_string(), plus: false }
    }

    pub fn plus(class: &str, field: &str) -> Self {
        Label { class: class.to_string(), field: field.to_string(), plus: true }
    }

    pub fn to_plain(&self) -> Label {
        Label { plus: false, ..self.clone() }
    }

    /// `field` or `field+` without the class prefix.
    pub fn short(&self) -> String {
        if self.plus {
            format!("{}+", self.field)
        } else {
            self.field.clone()
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}{}", self.class, self.field, if self.plus { "+" } else { "" })
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.to_string()
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (body, plus) = match s.strip_suffix('+') {
            Some(b) => (b, true),
            None => (s, false),
        };
        match body.rsplit_once('.') {
            Some((class, field)) if !class.is_empty() && !field.is_empty() => {
                Ok(Label { class: class.to_string(), field: field.to_string(), plus })
            }
            _ => Err(format!("malformed label `{s}` (expected Class.field or Class.field+)")),
        }
    }
}

impl TryFrom<String> for Label {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

pub type LabelSet = BTreeSet<Label>;

impl TypeGraph {
    pub fn node(&self, id: &str) -> Option<&TypeNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }

    /// Graphviz rendering; iterable edges are drawn bold and suffixed `+`.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph {} {{\n", quote(&self.root));
        for n in &self.nodes {
            let shape = match n.kind {
                NodeKind::Class => "box",
                NodeKind::Primitive => "ellipse",
                NodeKind::TypeParameter => "diamond",
                NodeKind::Unresolved => "plaintext",
            };
            let extra = if n.id == self.root { ", penwidth=2" } else { "" };
            out.push_str(&format!("  {} [shape={shape}{extra}];\n", quote(&n.id)));
        }
        for e in &self.edges {
            let (label, style) = if e.iterable { (format!("{}+", e.field), ", style=bold") } else { (e.field.clone(), "") };
            out.push_str(&format!("  {} -> {} [label={}{style}];\n", quote(&e.from), quote(&e.to), quote(&label)));
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The node a field of type `ty` points at, and whether the field is
/// iterable by the container/array rule.
fn target_node(ty: &TypeRef) -> (TypeNode, Option<String>, bool) {
    let mut ty = ty;
    let mut iterable = false;
    while let Some(elem) = ty.iterated_element() {
        iterable = true;
        ty = elem;
    }
    if ty.is_iterable() {
        // raw container without an element type
        iterable = true;
    }
    let node = match ty.kind {
        TypeKind::Class => {
            let id = ty.target.clone().unwrap_or_else(|| ty.name.clone());
            return (TypeNode { id: id.clone(), kind: NodeKind::Class }, Some(id), iterable);
        }
        TypeKind::Primitive => TypeNode { id: ty.name.clone(), kind: NodeKind::Primitive },
        TypeKind::TypeParameter => TypeNode {
            id: format!("{}::{}", ty.target.as_deref().unwrap_or("?"), ty.name),
            kind: NodeKind::TypeParameter,
        },
        _ => TypeNode { id: ty.name.clone(), kind: NodeKind::Unresolved },
    };
    (node, None, iterable)
}

/// Build the type graph of `root`, depth-first, visiting each class once.
pub fn build_type_graph(corpus: &SourceCorpus, root: &str, opts: GraphOptions) -> Result<TypeGraph, GraphError> {
    let root_class = corpus.find_class(root).ok_or_else(|| GraphError::RootNotFound(root.to_string()))?;
    let root_id = root_class.name.clone();

    let mut nodes: BTreeMap<String, NodeKind> = BTreeMap::new();
    let mut edges: Vec<FieldEdge> = Vec::new();
    let mut seen_fields: BTreeSet<(String, String)> = BTreeSet::new();
    let mut visited: BTreeSet<String> = BTreeSet::new();
    nodes.insert(root_id.clone(), NodeKind::Class);

    fn visit(
        corpus: &SourceCorpus,
        class: &str,
        opts: GraphOptions,
        nodes: &mut BTreeMap<String, NodeKind>,
        edges: &mut Vec<FieldEdge>,
        seen_fields: &mut BTreeSet<(String, String)>,
        visited: &mut BTreeSet<String>,
    ) {
        if !visited.insert(class.to_string()) {
            return;
        }
        let chain = corpus.superclass_chain(class);
        let owners = if opts.inherited { &chain[..] } else { &chain[..chain.len().min(1)] };
        for owner in owners {
            for f in owner.instance_fields() {
                if !seen_fields.insert((owner.name.clone(), f.name.clone())) {
                    continue;
                }
                let (node, next_class, iterable) = target_node(&f.ty);
                nodes.entry(node.id.clone()).or_insert(node.kind);
                edges.push(FieldEdge {
                    from: class.to_string(),
                    to: node.id.clone(),
                    field: f.name.clone(),
                    declaring: owner.name.clone(),
                    iterable,
                });
                if let Some(next) = next_class {
                    visit(corpus, &next, opts, nodes, edges, seen_fields, visited);
                }
            }
        }
    }

    visit(corpus, &root_id, opts, &mut nodes, &mut edges, &mut seen_fields, &mut visited);

    // rule (b): edges leaving a node on a directed cycle are iterable
    let on_cycle = nodes_on_cycles(nodes.keys().map(String::as_str), edges.iter().map(|e| (e.from.as_str(), e.to.as_str())));
    for e in edges.iter_mut() {
        if on_cycle.contains(&e.from) {
            e.iterable = true;
        }
    }

    edges.sort_by(|a, b| (&a.declaring, &a.field).cmp(&(&b.declaring, &b.field)));
    Ok(TypeGraph {
        root: root_id,
        nodes: nodes.into_iter().map(|(id, kind)| TypeNode { id, kind }).collect(),
        edges,
    })
}

/// Nodes lying on a non-empty directed path back to themselves.
pub fn nodes_on_cycles<'a>(
    nodes: impl Iterator<Item = &'a str>,
    edges: impl Iterator<Item = (&'a str, &'a str)>,
) -> BTreeSet<String> {
    let mut g: DiGraph<&str, ()> = DiGraph::new();
    let mut idx = BTreeMap::new();
    for n in nodes {
        idx.entry(n).or_insert_with(|| g.add_node(n));
    }
    let mut self_loops = BTreeSet::new();
    for (a, b) in edges {
        let ia = *idx.entry(a).or_insert_with(|| g.add_node(a));
        let ib = *idx.entry(b).or_insert_with(|| g.add_node(b));
        if ia == ib {
            self_loops.insert(a.to_string());
        }
        g.add_edge(ia, ib, ());
    }
    let mut out = self_loops;
    for scc in tarjan_scc(&g) {
        if scc.len() > 1 {
            out.extend(scc.into_iter().map(|i| g[i].to_string()));
        }
    }
    out
}

/// Plain labels of the iterable edges.
pub fn iterable_fields(graph: &TypeGraph) -> LabelSet {
    graph.edges.iter().filter(|e| e.iterable).map(FieldEdge::label).collect()
}

/// One plain label per edge plus one plus label per iterable edge.
pub fn coverable_labels(graph: &TypeGraph) -> LabelSet {
    let mut out = LabelSet::new();
    for e in &graph.edges {
        out.insert(e.label());
        if e.iterable {
            out.insert(Label::plus(&e.declaring, &e.field));
        }
    }
    out
}

/// Union of the coverable labels of several graphs.
pub fn merge_label_universes<'a>(graphs: impl IntoIterator<Item = &'a TypeGraph>) -> LabelSet {
    graphs.into_iter().flat_map(coverable_labels).collect()
}
