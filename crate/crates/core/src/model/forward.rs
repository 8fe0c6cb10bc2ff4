//! Forward pass with full activation caching for the backward pass.
//!
//! Node states start at their label embeddings. Each propagation step sums,
//! per node, one transformed message per incident edge (distinct parameters
//! per edge type and direction) and feeds the sum through a GRU cell. The
//! readout gates each final node state with a soft-attention network and
//! sums; the token network embeds each bag token through shared tanh
//! layers and sums. The joint layer combines both vectors and a softmax
//! produces class probabilities.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::math::{canonical_row_sum, linear_nt, matmul_nt_acc, sigmoid, Mat};
use super::params::{edge_slot, EDGE_SLOTS};
use super::{Model, ModelError};
use crate::graph::ApiContextGraph;
use crate::tokens::TokenBag;

/// A corpus instance mapped to model indices.
#[derive(Debug, Clone)]
pub struct PreparedInstance {
    pub label_ids: Vec<usize>,
    /// Per edge slot: (state source node, message target node) pairs in
    /// sorted edge order.
    pub edge_pairs: Vec<Vec<(usize, usize)>>,
    pub token_ids: Vec<usize>,
    /// Target class (0 = UNK) when the instance carries a label.
    pub class_id: Option<usize>,
    pub node_count: usize,
}

impl PreparedInstance {
    pub fn from_parts(
        model: &Model,
        g: &ApiContextGraph,
        bag: &TokenBag,
        label: Option<&str>,
    ) -> Result<PreparedInstance, ModelError> {
        if g.node_count() == 0 {
            return Err(ModelError::EmptyGraph);
        }
        let label_ids = g.nodes.iter().map(|n| model.labels.id(&n.label.text)).collect();
        let mut edge_pairs = vec![Vec::new(); EDGE_SLOTS];
        for (src, dst, ty) in g.edges() {
            // incoming: dst receives the transformed state of src
            edge_pairs[edge_slot(ty, true)].push((src, dst));
            // outgoing: src receives the transformed state of dst
            edge_pairs[edge_slot(ty, false)].push((dst, src));
        }
        let token_ids = bag.iter().map(|t| model.tokens.id(t)).collect();
        Ok(PreparedInstance {
            label_ids,
            edge_pairs,
            token_ids,
            class_id: label.map(|l| model.classes.id(l)),
            node_count: g.node_count(),
        })
    }

    pub fn from_instance(
        model: &Model,
        inst: &crate::corpus::TrainingInstance,
    ) -> Result<PreparedInstance, ModelError> {
        Self::from_parts(model, &inst.graph, &inst.tokens, Some(&inst.label.text))
    }
}

/// One propagation step's cached activations.
pub struct StepCache {
    pub msg: Mat,
    pub z: Mat,
    pub r: Mat,
    pub h_cand: Mat,
    pub x: Mat,
}

pub struct TokenCache {
    pub embeds: Mat,
    /// Per layer: activations before dropout.
    pub acts: Vec<Mat>,
    /// Per layer: dropout mask (0 or 1/keep), empty in eval mode.
    pub masks: Vec<Mat>,
    /// Per layer: activations after dropout (layer input for the next).
    pub outs: Vec<Mat>,
}

pub struct ForwardCache {
    pub x0: Mat,
    pub steps: Vec<StepCache>,
    /// Readout: concat [x_T ; x0] per node.
    pub concat: Mat,
    pub gate: Mat,
    pub val: Mat,
    pub x_g: Vec<f64>,
    pub token: Option<TokenCache>,
    pub joint_concat: Vec<f64>,
    pub joint_act: Vec<f64>,
    pub joint_mask: Vec<f64>,
    pub joint_out: Vec<f64>,
    pub logits: Vec<f64>,
    pub probs: Vec<f64>,
}

/// Dropout control: `None` is eval mode; `Some(seed)` draws masks from a
/// dedicated generator.
pub fn run(model: &Model, prep: &PreparedInstance, dropout_seed: Option<u64>) -> ForwardCache {
    let p = &model.params;
    let d = model.cfg.embedding_size;
    let n = prep.node_count;
    let t_steps = model.cfg.propagation_steps;
    let keep = model.cfg.keep_prob;
    let mut rng = dropout_seed.map(ChaCha8Rng::seed_from_u64);

    // initial states: label embeddings
    let x0 = p.node_embed.gather_rows(&prep.label_ids);

    // propagation
    let mut steps: Vec<StepCache> = Vec::with_capacity(t_steps);
    let mut x_prev = x0.clone();
    for _ in 0..t_steps {
        // per-slot transformed neighbor states
        let mut contrib: Vec<Mat> = Vec::with_capacity(EDGE_SLOTS);
        for slot in 0..EDGE_SLOTS {
            let pairs = &prep.edge_pairs[slot];
            if pairs.is_empty() {
                contrib.push(Mat::zeros(0, d));
                continue;
            }
            let src_idx: Vec<usize> = pairs.iter().map(|&(s, _)| s).collect();
            let gathered = x_prev.gather_rows(&src_idx);
            let mut rows = Mat::zeros(pairs.len(), d);
            for i in 0..pairs.len() {
                rows.row_mut(i).copy_from_slice(p.edge_b[slot].row(0));
            }
            matmul_nt_acc(&gathered, &p.edge_w[slot], &mut rows);
            contrib.push(rows);
        }
        // per-node message: canonical-order sum of incident contributions
        let mut msg = Mat::zeros(n, d);
        let all_rows = stack(&contrib, d);
        let mut per_node: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut row_idx = 0usize;
        for slot in 0..EDGE_SLOTS {
            for &(_, target) in &prep.edge_pairs[slot] {
                per_node[target].push(row_idx);
                row_idx += 1;
            }
        }
        for node in 0..n {
            if !per_node[node].is_empty() {
                canonical_row_sum(&all_rows, &per_node[node], msg.row_mut(node));
            }
        }
        // GRU
        let z = gated(&msg, &x_prev, &p.gru_wz, &p.gru_uz, &p.gru_bz, sigmoid);
        let r = gated(&msg, &x_prev, &p.gru_wr, &p.gru_ur, &p.gru_br, sigmoid);
        let mut rx = x_prev.clone();
        for (v, g) in rx.data.iter_mut().zip(&r.data) {
            *v *= g;
        }
        let h_cand = gated(&msg, &rx, &p.gru_wh, &p.gru_uh, &p.gru_bh, f64::tanh);
        let mut x = Mat::zeros(n, d);
        for i in 0..x.data.len() {
            x.data[i] = (1.0 - z.data[i]) * x_prev.data[i] + z.data[i] * h_cand.data[i];
        }
        steps.push(StepCache { msg, z, r, h_cand, x: x.clone() });
        x_prev = x;
    }
    let x_final = steps.last().map(|s| &s.x).unwrap_or(&x0);

    // soft-attention readout on [x_T ; x0]
    let mut concat = Mat::zeros(n, 2 * d);
    for i in 0..n {
        concat.row_mut(i)[..d].copy_from_slice(x_final.row(i));
        concat.row_mut(i)[d..].copy_from_slice(x0.row(i));
    }
    let gate = linear_nt(&concat, &p.attn_i_w, &p.attn_i_b).mapped(sigmoid);
    let val = linear_nt(&concat, &p.attn_j_w, &p.attn_j_b).mapped(f64::tanh);
    let mut prod = Mat::zeros(n, d);
    for i in 0..prod.data.len() {
        prod.data[i] = gate.data[i] * val.data[i];
    }
    let mut s_pre = vec![0.0; d];
    let rows: Vec<usize> = (0..n).collect();
    canonical_row_sum(&prod, &rows, &mut s_pre);
    let x_g: Vec<f64> = s_pre.iter().map(|&v| v.tanh()).collect();

    // token network (skipped entirely in structure-only mode)
    let (token, x_t) = if model.cfg.structure_only || prep.token_ids.is_empty() {
        (None, vec![0.0; d])
    } else {
        let embeds = p.token_embed.gather_rows(&prep.token_ids);
        let mut acts = Vec::new();
        let mut masks = Vec::new();
        let mut outs = Vec::new();
        let mut cur = embeds.clone();
        for l in 0..model.cfg.hidden_layers {
            let act = linear_nt(&cur, &p.token_w[l], &p.token_b[l]).mapped(f64::tanh);
            let out = match rng.as_mut() {
                Some(r) if keep < 1.0 => {
                    let mask = draw_mask(r, act.rows, act.cols, keep);
                    let mut o = act.clone();
                    for (v, m) in o.data.iter_mut().zip(&mask.data) {
                        *v *= m;
                    }
                    masks.push(mask);
                    o
                }
                _ => {
                    masks.push(Mat::zeros(0, 0));
                    act.clone()
                }
            };
            acts.push(act);
            outs.push(out.clone());
            cur = out;
        }
        let mut tvec = vec![0.0; d];
        for i in 0..cur.rows {
            for (t, v) in tvec.iter_mut().zip(cur.row(i)) {
                *t += v;
            }
        }
        (Some(TokenCache { embeds, acts, masks, outs }), tvec)
    };

    // joint layer
    let mut joint_concat = Vec::with_capacity(2 * d);
    joint_concat.extend_from_slice(&x_g);
    joint_concat.extend_from_slice(&x_t);
    let jc = Mat { rows: 1, cols: 2 * d, data: joint_concat.clone() };
    let joint_act = linear_nt(&jc, &p.joint_w, &p.joint_b).mapped(f64::tanh);
    let joint_act = joint_act.data;
    let (joint_mask, joint_out): (Vec<f64>, Vec<f64>) = match rng.as_mut() {
        Some(r) if keep < 1.0 => {
            let mask: Vec<f64> =
                (0..d).map(|_| if r.gen::<f64>() < keep { 1.0 / keep } else { 0.0 }).collect();
            let out = joint_act.iter().zip(&mask).map(|(v, m)| v * m).collect();
            (mask, out)
        }
        _ => (vec![1.0; d], joint_act.clone()),
    };

    // output layer + stable softmax
    let jo = Mat { rows: 1, cols: d, data: joint_out.clone() };
    let logits = linear_nt(&jo, &p.out_w, &p.out_b).data;
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    let probs: Vec<f64> = exps.iter().map(|&e| e / sum).collect();

    ForwardCache {
        x0,
        steps,
        concat,
        gate,
        val,
        x_g,
        token,
        joint_concat,
        joint_act,
        joint_mask,
        joint_out,
        logits,
        probs,
    }
}

fn gated(
    msg: &Mat,
    state: &Mat,
    w: &Mat,
    u: &Mat,
    b: &Mat,
    act: impl Fn(f64) -> f64,
) -> Mat {
    let mut pre = Mat::zeros(msg.rows, w.rows);
    for i in 0..pre.rows {
        pre.row_mut(i).copy_from_slice(b.row(0));
    }
    matmul_nt_acc(msg, w, &mut pre);
    matmul_nt_acc(state, u, &mut pre);
    pre.map_inplace(act);
    pre
}

fn draw_mask(rng: &mut ChaCha8Rng, rows: usize, cols: usize, keep: f64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 })
}

fn stack(mats: &[Mat], cols: usize) -> Mat {
    let total: usize = mats.iter().map(|m| m.rows).sum();
    let mut out = Mat::zeros(total, cols);
    let mut r = 0;
    for m in mats {
        for i in 0..m.rows {
            out.row_mut(r).copy_from_slice(m.row(i));
            r += 1;
        }
    }
    out
}

// ---- spec-facing single operations ----

/// Node states after `t_steps` propagation steps (row per node).
pub fn propagate(
    model: &Model,
    g: &ApiContextGraph,
    t_steps: usize,
) -> Result<Mat, ModelError> {
    let prep = PreparedInstance::from_parts(model, g, &TokenBag::default(), None)?;
    let mut m = model.clone();
    m.cfg.propagation_steps = t_steps;
    let fwd = run(&m, &prep, None);
    Ok(fwd.steps.last().map(|s| s.x.clone()).unwrap_or(fwd.x0))
}

/// Soft-attention graph vector from final node states.
pub fn readout(model: &Model, g: &ApiContextGraph) -> Result<Vec<f64>, ModelError> {
    let prep = PreparedInstance::from_parts(model, g, &TokenBag::default(), None)?;
    let fwd = run(model, &prep, None);
    Ok(fwd.x_g)
}

/// Token-network vector for a bag (zero vector for the empty bag).
pub fn token_net(model: &Model, bag: &TokenBag) -> Vec<f64> {
    let d = model.cfg.embedding_size;
    if bag.is_empty() || model.cfg.structure_only {
        return vec![0.0; d];
    }
    let p = &model.params;
    let ids: Vec<usize> = bag.iter().map(|t| model.tokens.id(t)).collect();
    let mut cur = p.token_embed.gather_rows(&ids);
    for l in 0..model.cfg.hidden_layers {
        cur = linear_nt(&cur, &p.token_w[l], &p.token_b[l]).mapped(f64::tanh);
    }
    let mut tvec = vec![0.0; d];
    for i in 0..cur.rows {
        for (t, v) in tvec.iter_mut().zip(cur.row(i)) {
            *t += v;
        }
    }
    tvec
}

/// Joint layer + softmax over classes. In structure-only mode the token
/// vector is replaced with zeros.
pub fn classify(model: &Model, x_g: &[f64], x_t: &[f64]) -> Vec<f64> {
    let p = &model.params;
    let d = model.cfg.embedding_size;
    let zero;
    let x_t = if model.cfg.structure_only {
        zero = vec![0.0; d];
        &zero
    } else {
        x_t
    };
    let mut concat = Vec::with_capacity(2 * d);
    concat.extend_from_slice(x_g);
    concat.extend_from_slice(x_t);
    let jc = Mat { rows: 1, cols: 2 * d, data: concat };
    let joint = linear_nt(&jc, &p.joint_w, &p.joint_b).mapped(f64::tanh);
    let logits = linear_nt(&joint, &p.out_w, &p.out_b).data;
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|&e| e / sum).collect()
}
