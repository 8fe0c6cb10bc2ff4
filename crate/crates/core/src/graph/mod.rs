//! The API context graph: a directed labeled graph over call / field /
//! declaration / assignment / control-unit nodes with control (c), data
//! (d), combined (cd) and special (s) edges, plus an optional hole node.

mod builder;

pub use builder::{build_graph, node_label};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("method produces no context graph nodes")]
    EmptyMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeType {
    C,
    D,
    Cd,
    S,
}

impl EdgeType {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeType::C => "c",
            EdgeType::D => "d",
            EdgeType::Cd => "cd",
            EdgeType::S => "s",
        }
    }

    pub fn parse(s: &str) -> Option<EdgeType> {
        match s {
            "c" => Some(EdgeType::C),
            "d" => Some(EdgeType::D),
            "cd" => Some(EdgeType::Cd),
            "s" => Some(EdgeType::S),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelKind {
    Declaration,
    Constant,
    Null,
    Creation,
    Call,
    FieldAccess,
    ControlUnit,
    Hole,
}

pub const CONTROL_UNIT_LABELS: &[&str] = &[
    "If", "Then", "ElseIf", "Else", "While", "DoWhile", "For", "Foreach", "Switch", "Selector",
    "Case", "Default", "Try", "Catch", "Finally", "Condition", "Body",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeLabel {
    pub text: String,
    pub kind: LabelKind,
}

impl NodeLabel {
    pub fn hole() -> Self {
        NodeLabel { text: "Hole".into(), kind: LabelKind::Hole }
    }

    pub fn control(name: &str) -> Self {
        debug_assert!(CONTROL_UNIT_LABELS.contains(&name));
        NodeLabel { text: name.into(), kind: LabelKind::ControlUnit }
    }

    /// Recover the label kind from its text, for deserialized graphs.
    pub fn infer(text: &str) -> Self {
        let kind = if text == "Hole" {
            LabelKind::Hole
        } else if CONTROL_UNIT_LABELS.contains(&text) {
            LabelKind::ControlUnit
        } else if text.ends_with(')') {
            let head = text.split('(').next().unwrap_or("");
            if head.ends_with(".new") {
                LabelKind::Creation
            } else {
                LabelKind::Call
            }
        } else if text.ends_with(".Declaration") {
            LabelKind::Declaration
        } else if text.ends_with(".Constant") {
            LabelKind::Constant
        } else if text.ends_with(".Null") {
            LabelKind::Null
        } else {
            LabelKind::FieldAccess
        };
        NodeLabel { text: text.into(), kind }
    }

    /// Nodes that stand for an actual library API site (anything that is
    /// not a control unit or the hole).
    pub fn is_api(&self) -> bool {
        !matches!(self.kind, LabelKind::ControlUnit | LabelKind::Hole)
    }

    /// Creation / call / field-access sites, the "API invocation" subset.
    pub fn is_invocation(&self) -> bool {
        matches!(self.kind, LabelKind::Creation | LabelKind::Call | LabelKind::FieldAccess)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub id: usize,
    pub label: NodeLabel,
    /// (statement index, source line) of the originating statement.
    pub origin: Option<(usize, u32)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ApiContextGraph {
    pub nodes: Vec<GraphNode>,
    /// (src, dst) -> type; coincident c+d collapse to cd at insertion.
    edges: BTreeMap<(usize, usize), EdgeType>,
    pub hole: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges_c: usize,
    pub edges_d: usize,
    pub edges_cd: usize,
    pub edges_s: usize,
    pub api_nodes: usize,
}

impl GraphStats {
    pub fn total_edges(&self) -> usize {
        self.edges_c + self.edges_d + self.edges_cd + self.edges_s
    }
}

impl ApiContextGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn add_node(&mut self, label: NodeLabel, origin: Option<(usize, u32)>) -> usize {
        let id = self.nodes.len();
        if label.kind == LabelKind::Hole {
            self.hole = Some(id);
        }
        self.nodes.push(GraphNode { id, label, origin });
        id
    }

    /// Insert an edge, merging c+d into cd. Edges touching the hole are
    /// forced to type s.
    pub fn add_edge(&mut self, src: usize, dst: usize, ty: EdgeType) {
        if src == dst {
            return;
        }
        let ty = if Some(src) == self.hole || Some(dst) == self.hole { EdgeType::S } else { ty };
        use EdgeType::*;
        self.edges
            .entry((src, dst))
            .and_modify(|e| {
                *e = match (*e, ty) {
                    (C, D) | (D, C) | (Cd, C) | (Cd, D) | (C, Cd) | (D, Cd) | (Cd, Cd) => Cd,
                    (S, _) | (_, S) => S,
                    (a, b) if a == b => a,
                    (a, _) => a,
                };
            })
            .or_insert(ty);
    }

    /// Edges as sorted (src, dst, type) triples.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeType)> + '_ {
        self.edges.iter().map(|(&(s, d), &t)| (s, d, t))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_between(&self, src: usize, dst: usize) -> Option<EdgeType> {
        self.edges.get(&(src, dst)).copied()
    }

    pub fn stats(&self) -> GraphStats {
        let mut st = GraphStats { nodes: self.nodes.len(), ..Default::default() };
        for (_, _, t) in self.edges() {
            match t {
                EdgeType::C => st.edges_c += 1,
                EdgeType::D => st.edges_d += 1,
                EdgeType::Cd => st.edges_cd += 1,
                EdgeType::S => st.edges_s += 1,
            }
        }
        st.api_nodes = self.nodes.iter().filter(|n| n.label.is_api()).count();
        st
    }

    pub fn has_invocation_node(&self) -> bool {
        self.nodes.iter().any(|n| n.label.is_invocation())
    }

    /// Line-oriented dump: `N <id> <label>` then `E <src> <dst> <type>`,
    /// ids ascending, edges sorted by (src, dst, type).
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            out.push_str(&format!("N {} {}\n", n.id, n.label.text));
        }
        for (s, d, t) in self.edges() {
            out.push_str(&format!("E {s} {d} {t}\n"));
        }
        out
    }

    pub fn is_weakly_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for (s, d, _) in self.edges() {
            adj[s].push(d);
            adj[d].push(s);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// c/cd successors of `id`, ascending.
    pub fn control_children(&self, id: usize) -> Vec<usize> {
        self.edges
            .range((id, 0)..(id + 1, 0))
            .filter(|(_, &t)| matches!(t, EdgeType::C | EdgeType::Cd))
            .map(|(&(_, d), _)| d)
            .collect()
    }

    /// c/cd predecessors of `id`, ascending.
    pub fn control_parents(&self, id: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|(&(_, d), &t)| d == id && matches!(t, EdgeType::C | EdgeType::Cd))
            .map(|(&(s, _), _)| s)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_and_d_merge_to_cd() {
        let mut g = ApiContextGraph::default();
        let a = g.add_node(NodeLabel::infer("java.lang.String.Declaration"), None);
        let b = g.add_node(NodeLabel::infer("java.lang.String.hashCode()"), None);
        g.add_edge(a, b, EdgeType::C);
        g.add_edge(a, b, EdgeType::D);
        assert_eq!(g.edge_between(a, b), Some(EdgeType::Cd));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn hole_edges_are_forced_to_s() {
        let mut g = ApiContextGraph::default();
        let a = g.add_node(NodeLabel::infer("java.lang.String.Declaration"), None);
        let h = g.add_node(NodeLabel::hole(), None);
        g.add_edge(a, h, EdgeType::C);
        assert_eq!(g.edge_between(a, h), Some(EdgeType::S));
    }

    #[test]
    fn label_kind_inference() {
        assert_eq!(NodeLabel::infer("Hole").kind, LabelKind::Hole);
        assert_eq!(NodeLabel::infer("While").kind, LabelKind::ControlUnit);
        assert_eq!(NodeLabel::infer("java.io.File.new(java.lang.String)").kind, LabelKind::Creation);
        assert_eq!(NodeLabel::infer("java.lang.String.hashCode()").kind, LabelKind::Call);
        assert_eq!(NodeLabel::infer("java.lang.String.Declaration").kind, LabelKind::Declaration);
        assert_eq!(NodeLabel::infer("java.lang.System.out").kind, LabelKind::FieldAccess);
        assert_eq!(
            NodeLabel::infer("java.lang.StringBuilder.append(java.lang.String).toString()").kind,
            LabelKind::Call
        );
    }

    #[test]
    fn stats_partition_edge_total() {
        let mut g = ApiContextGraph::default();
        let a = g.add_node(NodeLabel::infer("A.Declaration"), None);
        let b = g.add_node(NodeLabel::infer("B.Declaration"), None);
        let c = g.add_node(NodeLabel::infer("C.x()"), None);
        g.add_edge(a, b, EdgeType::C);
        g.add_edge(b, c, EdgeType::D);
        g.add_edge(a, c, EdgeType::C);
        g.add_edge(a, c, EdgeType::D);
        let st = g.stats();
        assert_eq!(st.total_edges(), g.edge_count());
        assert_eq!(st.edges_cd, 1);
    }
}
