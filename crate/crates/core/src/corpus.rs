//! Training-instance construction by hole punching, plus the line-delimited
//! corpus format.
//!
//! An instance is built by removing up to `hole_size` nodes from a
//! hole-free graph, following control-flow (c/cd) successors from a start
//! node. A control node takes its whole control scope with it and the walk
//! continues at the first node outside the scope. The start node's position
//! becomes the hole, wired with s edges to the surviving neighbours; the
//! token bag is recomputed from the names still referenced by surviving
//! statements; the instance label is the start node's label.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ApiContextGraph, EdgeType, LabelKind, NodeLabel};
use crate::source::resolve::ResolvedMethod;
use crate::tokens::{bag_from_names, TokenBag, TokenVocabulary};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("start node is the hole or the graph already has a hole")]
    InvalidStart,
    #[error("hole size {size} outside 1..={max}")]
    SizeOutOfRange { size: usize, max: usize },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus format error in record {record}: {message}")]
    Format { record: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingInstance {
    pub graph: ApiContextGraph,
    pub tokens: TokenBag,
    pub label: NodeLabel,
}

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    /// Hole-size cap for instances that keep both preceding and succeeding
    /// context.
    pub max_hole_both_contexts: usize,
    /// Instances with only preceding context may use any hole size.
    pub include_preceding_only_unbounded: bool,
    /// Minimum number of invocation nodes that must survive in the context.
    pub min_api_in_context: usize,
    /// Ingestion-time file size cap (kilobytes).
    pub max_file_kb: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_hole_both_contexts: 5,
            include_preceding_only_unbounded: true,
            min_api_in_context: 1,
            max_file_kb: 200,
        }
    }
}

/// Everything hole punching needs to know about one method: its hole-free
/// graph plus the per-statement name table used to recompute token bags.
#[derive(Debug, Clone)]
pub struct InstanceSource {
    pub graph: ApiContextGraph,
    pub method_name: String,
    /// Eligible names referenced per statement index.
    pub stmt_names: Vec<BTreeSet<String>>,
}

impl InstanceSource {
    pub fn new(rm: &ResolvedMethod, graph: ApiContextGraph) -> Self {
        InstanceSource {
            graph,
            method_name: rm.ir.name.clone(),
            stmt_names: rm.stmt_names.clone(),
        }
    }

    /// Bag over the full method.
    pub fn full_bag(&self, vocab: &TokenVocabulary) -> TokenBag {
        let mut names: Vec<String> = vec![self.method_name.clone()];
        for set in &self.stmt_names {
            names.extend(set.iter().cloned());
        }
        bag_from_names(&names, vocab)
    }
}

/// Control statements that remove their whole scope when hit by the walk.
fn owns_scope(label: &NodeLabel) -> bool {
    matches!(
        label.text.as_str(),
        "If" | "While" | "DoWhile" | "For" | "Foreach" | "Switch" | "Try"
    )
}

/// Structural unit nodes (Condition, Body, Then, ...) that belong to their
/// parent's control scope.
fn is_scope_unit(label: &NodeLabel) -> bool {
    matches!(
        label.text.as_str(),
        "Condition"
            | "Body"
            | "Then"
            | "Else"
            | "ElseIf"
            | "Selector"
            | "Case"
            | "Default"
            | "Catch"
            | "Finally"
    )
}

fn mark_subtree(g: &ApiContextGraph, root: usize, removed: &mut [bool]) {
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for child in g.control_children(v) {
            if !removed[child] {
                stack.push(child);
            }
        }
    }
}

pub fn make_instance(
    src: &InstanceSource,
    vocab: &TokenVocabulary,
    start: usize,
    hole_size: usize,
) -> Result<TrainingInstance, CorpusError> {
    let g = &src.graph;
    let n = g.node_count();
    if g.hole.is_some() || start >= n || g.nodes[start].label.kind == LabelKind::Hole {
        return Err(CorpusError::InvalidStart);
    }
    if hole_size < 1 || hole_size >= n {
        return Err(CorpusError::SizeOutOfRange { size: hole_size, max: n.saturating_sub(1) });
    }

    let mut removed = vec![false; n];
    let mut count = 0usize;
    let mut curr = Some(start);
    while count < hole_size {
        let Some(c) = curr else { break };
        if owns_scope(&g.nodes[c].label) {
            let mut next = None;
            for child in g.control_children(c) {
                if removed[child] {
                    continue;
                }
                if is_scope_unit(&g.nodes[child].label) {
                    mark_subtree(g, child, &mut removed);
                } else {
                    count += 1;
                    next = Some(child);
                }
            }
            removed[c] = true;
            curr = next;
        } else {
            let next =
                g.control_children(c).into_iter().find(|&x| !removed[x] && x != c);
            removed[c] = true;
            count += 1;
            curr = next;
        }
    }

    // reassemble: survivors keep their relative order, the hole takes the
    // start node's position
    let mut out = ApiContextGraph::default();
    let mut id_map = vec![usize::MAX; n];
    for id in 0..n {
        if id == start {
            let h = out.add_node(NodeLabel::hole(), None);
            id_map[id] = h;
        } else if !removed[id] {
            let new_id = out.add_node(g.nodes[id].label.clone(), None);
            id_map[id] = new_id;
        }
    }
    let hole_id = id_map[start];
    for (s, d, t) in g.edges() {
        if removed[s] || removed[d] || s == start || d == start {
            continue;
        }
        out.add_edge(id_map[s], id_map[d], t);
    }
    // s edges: surviving control-flow predecessors of the start node feed
    // the hole; the hole feeds the node the walk stopped at
    for p in g.control_parents(start) {
        if !removed[p] {
            out.add_edge(id_map[p], hole_id, EdgeType::S);
        }
    }
    if let Some(stop) = curr {
        if !removed[stop] && stop != start {
            out.add_edge(hole_id, id_map[stop], EdgeType::S);
        }
    }

    // remaining tokens: method name plus names referenced by at least one
    // surviving node's originating statement
    let mut names: Vec<String> = vec![src.method_name.clone()];
    let mut seen_stmts = BTreeSet::new();
    for id in 0..n {
        if id != start && !removed[id] {
            if let Some((stmt, _)) = g.nodes[id].origin {
                seen_stmts.insert(stmt);
            }
        }
    }
    for stmt in seen_stmts {
        if let Some(set) = src.stmt_names.get(stmt) {
            names.extend(set.iter().cloned());
        }
    }
    let tokens = bag_from_names(&names, vocab);

    Ok(TrainingInstance { graph: out, tokens, label: g.nodes[start].label.clone() })
}

/// Apply `make_instance` for every start node and admissible hole size,
/// with the context filters, dropping exact duplicates.
pub fn enumerate_instances(
    src: &InstanceSource,
    vocab: &TokenVocabulary,
    cfg: &CorpusConfig,
) -> Vec<TrainingInstance> {
    let n = src.graph.node_count();
    let mut out: Vec<TrainingInstance> = Vec::new();
    let mut seen = BTreeSet::new();
    for start in 0..n {
        for size in 1..n {
            let Ok(inst) = make_instance(src, vocab, start, size) else { continue };
            if !instance_admissible(&inst, size, cfg) {
                continue;
            }
            let key = instance_record(&inst);
            if seen.insert(key) {
                out.push(inst);
            }
        }
    }
    out
}

fn instance_admissible(inst: &TrainingInstance, size: usize, cfg: &CorpusConfig) -> bool {
    let hole = match inst.graph.hole {
        Some(h) => h,
        None => return false,
    };
    let mut has_pred = false;
    let mut has_succ = false;
    for (s, d, t) in inst.graph.edges() {
        if t == EdgeType::S {
            if d == hole {
                has_pred = true;
            }
            if s == hole {
                has_succ = true;
            }
        }
    }
    if !has_pred && !has_succ {
        return false; // disconnected hole
    }
    let size_ok = if has_pred && !has_succ {
        cfg.include_preceding_only_unbounded || size <= cfg.max_hole_both_contexts
    } else {
        size <= cfg.max_hole_both_contexts
    };
    if !size_ok {
        return false;
    }
    let api_nodes =
        inst.graph.nodes.iter().filter(|nd| nd.label.is_invocation()).count();
    api_nodes >= cfg.min_api_in_context
}

// ---- serialization ----

#[derive(Serialize, Deserialize)]
struct NodeRec {
    id: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct InstanceRec {
    nodes: Vec<NodeRec>,
    edges: Vec<(usize, usize, String)>,
    tokens: Vec<String>,
    label: String,
}

/// Canonical single-line record of an instance.
pub fn instance_record(inst: &TrainingInstance) -> String {
    let rec = InstanceRec {
        nodes: inst
            .graph
            .nodes
            .iter()
            .map(|nd| NodeRec { id: nd.id, label: nd.label.text.clone() })
            .collect(),
        edges: inst.graph.edges().map(|(s, d, t)| (s, d, t.as_str().to_string())).collect(),
        tokens: inst.tokens.iter().map(|t| t.to_string()).collect(),
        label: inst.label.text.clone(),
    };
    serde_json::to_string(&rec).expect("instance serialization cannot fail")
}

fn instance_from_record(line: &str, record: usize) -> Result<TrainingInstance, CorpusError> {
    let rec: InstanceRec = serde_json::from_str(line)
        .map_err(|e| CorpusError::Format { record, message: e.to_string() })?;
    let mut g = ApiContextGraph::default();
    let mut holes = 0usize;
    for (i, nd) in rec.nodes.iter().enumerate() {
        if nd.id != i {
            return Err(CorpusError::Format {
                record,
                message: format!("node ids must be dense and ascending, got {} at {}", nd.id, i),
            });
        }
        let label = NodeLabel::infer(&nd.label);
        if label.kind == LabelKind::Hole {
            holes += 1;
        }
        g.add_node(label, None);
    }
    if holes != 1 {
        return Err(CorpusError::Format {
            record,
            message: format!("instance must contain exactly one hole, got {holes}"),
        });
    }
    for (s, d, t) in &rec.edges {
        let ty = EdgeType::parse(t).ok_or_else(|| CorpusError::Format {
            record,
            message: format!("unknown edge type `{t}`"),
        })?;
        if *s >= g.node_count() || *d >= g.node_count() {
            return Err(CorpusError::Format {
                record,
                message: format!("edge ({s},{d}) out of range"),
            });
        }
        g.add_edge(*s, *d, ty);
    }
    Ok(TrainingInstance {
        graph: g,
        tokens: TokenBag::from_tokens(rec.tokens),
        label: NodeLabel::infer(&rec.label),
    })
}

pub fn write_corpus(instances: &[TrainingInstance], path: &Path) -> Result<(), CorpusError> {
    let io_err = |e: std::io::Error| CorpusError::Io { path: path.display().to_string(), source: e };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    for inst in instances {
        writeln!(w, "{}", instance_record(inst)).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

pub fn load_corpus(path: &Path) -> Result<Vec<TrainingInstance>, CorpusError> {
    let io_err = |e: std::io::Error| CorpusError::Io { path: path.display().to_string(), source: e };
    let file = std::fs::File::open(path).map_err(io_err)?;
    let reader = BufReader::new(file);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(instance_from_record(&line, i + 1)?);
    }
    Ok(out)
}
