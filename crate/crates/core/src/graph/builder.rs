//! Construction of the API context graph from a resolved method.
//!
//! One node per labelable site, in evaluation order. Control statements
//! expand into their control-unit skeletons; sequencing runs from each
//! statement's last node to the next statement's first node and from a
//! control node to the first node after its construct. Data-flow edges run
//! from the most recent (source-order) definition of a variable to every
//! later node using it. A hole marker becomes the hole node, and every edge
//! touching it is forced to type s.

use std::collections::HashMap;

use super::{ApiContextGraph, EdgeType, GraphError, LabelKind, NodeLabel};
use crate::source::ast::*;
use crate::source::resolve::{ResolvedMethod, Site, SiteEvent, SiteKind};

/// Label for a single resolved site.
pub fn node_label(site: &Site) -> NodeLabel {
    let kind = match site.kind {
        SiteKind::Declaration => LabelKind::Declaration,
        SiteKind::Constant => LabelKind::Constant,
        SiteKind::Null => LabelKind::Null,
        SiteKind::Creation => LabelKind::Creation,
        SiteKind::Call => LabelKind::Call,
        SiteKind::FieldAccess => LabelKind::FieldAccess,
    };
    NodeLabel { text: site.label.clone(), kind }
}

/// Sequencing state carried through a statement list.
#[derive(Clone, Copy)]
enum Anchor {
    /// Connect the next node from this node (None: nothing to connect from).
    Chain(Option<usize>),
    /// A return/break/continue ended the chain.
    Terminated,
}

impl Anchor {
    fn node(self) -> Option<usize> {
        match self {
            Anchor::Chain(n) => n,
            Anchor::Terminated => None,
        }
    }
}

struct Builder<'a> {
    rm: &'a ResolvedMethod,
    g: ApiContextGraph,
    /// Most recent definition node per variable; `None` when the latest
    /// definition produced no node.
    defs: HashMap<String, Option<usize>>,
}

/// Build the API context graph of a resolved method.
pub fn build_graph(rm: &ResolvedMethod) -> Result<ApiContextGraph, GraphError> {
    let mut b = Builder { rm, g: ApiContextGraph::default(), defs: HashMap::new() };
    let mut idx = 0usize;
    b.block(&rm.ir.body, &mut idx, Anchor::Chain(None));
    let g = b.g;
    if g.nodes.is_empty() || (g.nodes.len() == 1 && g.hole.is_some()) {
        return Err(GraphError::EmptyMethod);
    }
    Ok(g)
}

impl<'a> Builder<'a> {
    fn block(&mut self, stmts: &[Statement], idx: &mut usize, start: Anchor) -> Anchor {
        let mut anchor = start;
        for s in stmts {
            if matches!(anchor, Anchor::Terminated) {
                // unreachable code starts a fresh chain
                anchor = Anchor::Chain(None);
            }
            anchor = self.statement(s, idx, anchor);
        }
        anchor
    }

    fn statement(&mut self, s: &Statement, idx: &mut usize, anchor: Anchor) -> Anchor {
        let my_idx = *idx;
        *idx += 1;
        let line = s.line;
        match &s.data {
            StatementData::VarDecl { .. } | StatementData::Assign { .. } | StatementData::Expr(_) => {
                Anchor::Chain(self.run_events(my_idx, line, anchor.node()))
            }
            StatementData::Return(_) => {
                self.run_events(my_idx, line, anchor.node());
                Anchor::Terminated
            }
            StatementData::Empty => match s.kind {
                StatementKind::HoleMarker => {
                    let h = self.g.add_node(NodeLabel::hole(), Some((my_idx, line)));
                    if let Some(prev) = anchor.node() {
                        self.g.add_edge(prev, h, EdgeType::C); // forced to s
                    }
                    Anchor::Chain(Some(h))
                }
                _ => Anchor::Terminated, // break / continue
            },
            StatementData::If { then_block, else_branch, .. } => {
                let if_node = self.control_node("If", my_idx, line, anchor);
                let cond = self.unit("Condition", my_idx, line, if_node);
                self.run_events(my_idx, line, Some(cond));
                let then_node = self.unit("Then", my_idx, line, if_node);
                self.block(then_block, idx, Anchor::Chain(Some(then_node)));
                match else_branch {
                    Some(ElseBranch::ElseIf(inner)) => {
                        let else_if = self.unit("ElseIf", my_idx, line, if_node);
                        self.statement(inner, idx, Anchor::Chain(Some(else_if)));
                    }
                    Some(ElseBranch::Else(b)) => {
                        let else_node = self.unit("Else", my_idx, line, if_node);
                        self.block(b, idx, Anchor::Chain(Some(else_node)));
                    }
                    None => {}
                }
                Anchor::Chain(Some(if_node))
            }
            StatementData::While { body, .. } => {
                let ctrl = self.control_node("While", my_idx, line, anchor);
                let cond = self.unit("Condition", my_idx, line, ctrl);
                self.run_events(my_idx, line, Some(cond));
                let body_node = self.unit("Body", my_idx, line, ctrl);
                self.block(body, idx, Anchor::Chain(Some(body_node)));
                Anchor::Chain(Some(ctrl))
            }
            StatementData::DoWhile { body, .. } => {
                // body precedes the condition in source order, so its sites
                // (and definitions) are laid down first
                let ctrl = self.control_node("DoWhile", my_idx, line, anchor);
                let body_node = self.unit("Body", my_idx, line, ctrl);
                self.block(body, idx, Anchor::Chain(Some(body_node)));
                let cond = self.unit("Condition", my_idx, line, ctrl);
                self.run_events(my_idx, line, Some(cond));
                Anchor::Chain(Some(ctrl))
            }
            StatementData::For { body, .. } => {
                let ctrl = self.control_node("For", my_idx, line, anchor);
                let cond = self.unit("Condition", my_idx, line, ctrl);
                self.run_events(my_idx, line, Some(cond));
                let body_node = self.unit("Body", my_idx, line, ctrl);
                self.block(body, idx, Anchor::Chain(Some(body_node)));
                Anchor::Chain(Some(ctrl))
            }
            StatementData::Foreach { body, .. } => {
                let ctrl = self.control_node("Foreach", my_idx, line, anchor);
                let cond = self.unit("Condition", my_idx, line, ctrl);
                self.run_events(my_idx, line, Some(cond));
                let body_node = self.unit("Body", my_idx, line, ctrl);
                self.block(body, idx, Anchor::Chain(Some(body_node)));
                Anchor::Chain(Some(ctrl))
            }
            StatementData::Switch { cases, default, .. } => {
                let ctrl = self.control_node("Switch", my_idx, line, anchor);
                let selector = self.unit("Selector", my_idx, line, ctrl);
                self.run_events(my_idx, line, Some(selector));
                for c in cases {
                    let case_node = self.unit("Case", my_idx, line, ctrl);
                    self.block(&c.body, idx, Anchor::Chain(Some(case_node)));
                }
                if let Some(d) = default {
                    let def_node = self.unit("Default", my_idx, line, ctrl);
                    self.block(d, idx, Anchor::Chain(Some(def_node)));
                }
                Anchor::Chain(Some(ctrl))
            }
            StatementData::Try { body, catches, finally } => {
                let ctrl = self.control_node("Try", my_idx, line, anchor);
                // the protected block hangs off its own Body unit so the
                // whole construct stays distinguishable from the statement
                // that follows it
                let body_node = self.unit("Body", my_idx, line, ctrl);
                self.block(body, idx, Anchor::Chain(Some(body_node)));
                let mut prev_catch: Option<usize> = None;
                for c in catches {
                    let from = prev_catch.unwrap_or(ctrl);
                    let catch_node = self.unit("Catch", my_idx, line, from);
                    // the caught exception variable is defined by the catch
                    self.defs.insert(c.var_name.clone(), Some(catch_node));
                    self.block(&c.body, idx, Anchor::Chain(Some(catch_node)));
                    prev_catch = Some(catch_node);
                }
                if finally.is_some() {
                    let from = prev_catch.unwrap_or(ctrl);
                    let fin = self.unit("Finally", my_idx, line, from);
                    self.block(finally.as_ref().unwrap(), idx, Anchor::Chain(Some(fin)));
                }
                Anchor::Chain(Some(ctrl))
            }
        }
    }

    /// Control-unit node chained from the preceding anchor.
    fn control_node(&mut self, name: &str, stmt: usize, line: u32, anchor: Anchor) -> usize {
        let id = self.g.add_node(NodeLabel::control(name), Some((stmt, line)));
        if let Some(prev) = anchor.node() {
            self.g.add_edge(prev, id, EdgeType::C);
        }
        id
    }

    /// Structural child unit (Condition, Body, Then, ...) with a c edge
    /// from its parent.
    fn unit(&mut self, name: &str, stmt: usize, line: u32, parent: usize) -> usize {
        let id = self.g.add_node(NodeLabel::control(name), Some((stmt, line)));
        self.g.add_edge(parent, id, EdgeType::C);
        id
    }

    /// Materialize the statement's resolved site events, chaining from
    /// `from`. Returns the new chain anchor.
    fn run_events(&mut self, stmt: usize, line: u32, from: Option<usize>) -> Option<usize> {
        let mut anchor = from;
        let events = self.rm.statements[stmt].events.clone();
        for ev in &events {
            match ev {
                SiteEvent::NodelessDef(v) => {
                    self.defs.insert(v.clone(), None);
                }
                SiteEvent::Site(site) => {
                    let id = self.g.add_node(node_label(site), Some((stmt, line)));
                    if let Some(prev) = anchor {
                        self.g.add_edge(prev, id, EdgeType::C);
                    }
                    for u in &site.uses {
                        if let Some(Some(def_node)) = self.defs.get(u) {
                            self.g.add_edge(*def_node, id, EdgeType::D);
                        }
                    }
                    for v in &site.defs {
                        self.defs.insert(v.clone(), Some(id));
                    }
                    anchor = Some(id);
                }
            }
        }
        anchor
    }
}
