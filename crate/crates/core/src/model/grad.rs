//! Reverse-mode gradients for the full architecture: softmax/cross-entropy,
//! joint layer, token network, soft-attention readout, and backprop through
//! time across the propagation steps.

use super::forward::{self, ForwardCache, PreparedInstance};
use super::math::{colsum_acc, matmul_acc, matmul_tn_acc, Mat};
use super::params::{Params, EDGE_SLOTS};
use super::{Model, ModelError};

/// Dropout behaviour for one gradient evaluation.
#[derive(Debug, Clone, Copy)]
pub enum BatchMode {
    /// No dropout (evaluation / gradient checking).
    Plain,
    /// Dropout masks seeded per instance from this base seed.
    Train { mask_seed: u64 },
}

/// Mean cross-entropy over the batch plus gradients for every parameter.
/// Instances must carry a class id.
pub fn loss_and_grads(
    model: &Model,
    batch: &[PreparedInstance],
    mode: BatchMode,
) -> Result<(f64, Params), ModelError> {
    if batch.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    let mut grads = model.params.zeros_like();
    let weight = 1.0 / batch.len() as f64;
    let mut loss = 0.0;
    for (i, prep) in batch.iter().enumerate() {
        let seed = match mode {
            BatchMode::Plain => None,
            BatchMode::Train { mask_seed } => {
                Some(mask_seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(i as u64))
            }
        };
        let fwd = forward::run(model, prep, seed);
        let target = prep.class_id.expect("training instance must carry a label");
        // numerically stable -log(softmax[target])
        let max = fwd.logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = fwd.logits.iter().map(|&l| (l - max).exp()).sum::<f64>().ln() + max;
        loss += (lse - fwd.logits[target]) * weight;
        backward(model, prep, &fwd, target, weight, &mut grads);
    }
    if !loss.is_finite() {
        return Err(ModelError::NonFiniteLoss { epoch: 0, batch: 0 });
    }
    Ok((loss, grads))
}

/// Accumulate `weight`-scaled gradients of one instance into `grads`.
pub fn backward(
    model: &Model,
    prep: &PreparedInstance,
    fwd: &ForwardCache,
    target: usize,
    weight: f64,
    grads: &mut Params,
) {
    let p = &model.params;
    let d = model.cfg.embedding_size;
    let n = prep.node_count;

    // softmax + cross entropy
    let mut dlogits = Mat { rows: 1, cols: fwd.probs.len(), data: fwd.probs.clone() };
    dlogits.data[target] -= 1.0;
    dlogits.map_inplace(|v| v * weight);

    // output layer: logits = joint_out · out_wᵀ + out_b
    let joint_out = Mat { rows: 1, cols: d, data: fwd.joint_out.clone() };
    matmul_tn_acc(&dlogits, &joint_out, &mut grads.out_w);
    colsum_acc(&dlogits, &mut grads.out_b);
    let mut djoint_out = Mat::zeros(1, d);
    matmul_acc(&dlogits, &p.out_w, &mut djoint_out);

    // joint dropout then tanh
    for (v, m) in djoint_out.data.iter_mut().zip(&fwd.joint_mask) {
        *v *= m;
    }
    for (v, a) in djoint_out.data.iter_mut().zip(&fwd.joint_act) {
        *v *= 1.0 - a * a;
    }
    let djoint_pre = djoint_out;

    // joint layer: joint = concat([x_g, x_t]) · joint_wᵀ + joint_b
    let jc = Mat { rows: 1, cols: 2 * d, data: fwd.joint_concat.clone() };
    matmul_tn_acc(&djoint_pre, &jc, &mut grads.joint_w);
    colsum_acc(&djoint_pre, &mut grads.joint_b);
    let mut dconcat = Mat::zeros(1, 2 * d);
    matmul_acc(&djoint_pre, &p.joint_w, &mut dconcat);
    let dx_g = &dconcat.data[..d];
    let dx_t = &dconcat.data[d..];

    // token network
    if let Some(tok) = &fwd.token {
        let k = tok.embeds.rows;
        // x_t = sum of final layer rows
        let mut dcur = Mat::zeros(k, d);
        for i in 0..k {
            dcur.row_mut(i).copy_from_slice(dx_t);
        }
        for l in (0..model.cfg.hidden_layers).rev() {
            // through dropout
            if tok.masks[l].rows > 0 {
                for (v, m) in dcur.data.iter_mut().zip(&tok.masks[l].data) {
                    *v *= m;
                }
            }
            // through tanh
            for (v, a) in dcur.data.iter_mut().zip(&tok.acts[l].data) {
                *v *= 1.0 - a * a;
            }
            let input = if l == 0 { &tok.embeds } else { &tok.outs[l - 1] };
            matmul_tn_acc(&dcur, input, &mut grads.token_w[l]);
            colsum_acc(&dcur, &mut grads.token_b[l]);
            let mut dinput = Mat::zeros(k, d);
            matmul_acc(&dcur, &p.token_w[l], &mut dinput);
            dcur = dinput;
        }
        for (row, &tid) in prep.token_ids.iter().enumerate() {
            let src = dcur.row(row).to_vec();
            let dst = grads.token_embed.row_mut(tid);
            for (a, b) in dst.iter_mut().zip(&src) {
                *a += b;
            }
        }
    }

    // readout: x_g = tanh(sum_n gate ⊙ val)
    let mut ds = dx_g.to_vec();
    for (v, g) in ds.iter_mut().zip(&fwd.x_g) {
        *v *= 1.0 - g * g;
    }
    let mut dgate = Mat::zeros(n, d);
    let mut dval = Mat::zeros(n, d);
    for i in 0..n {
        let g_row = fwd.gate.row(i);
        let v_row = fwd.val.row(i);
        let dg = dgate.row_mut(i);
        let dv = dval.row_mut(i);
        for j in 0..d {
            dg[j] = ds[j] * v_row[j];
            dv[j] = ds[j] * g_row[j];
        }
    }
    // through sigmoid / tanh
    for (v, g) in dgate.data.iter_mut().zip(&fwd.gate.data) {
        *v *= g * (1.0 - g);
    }
    for (v, a) in dval.data.iter_mut().zip(&fwd.val.data) {
        *v *= 1.0 - a * a;
    }
    matmul_tn_acc(&dgate, &fwd.concat, &mut grads.attn_i_w);
    colsum_acc(&dgate, &mut grads.attn_i_b);
    matmul_tn_acc(&dval, &fwd.concat, &mut grads.attn_j_w);
    colsum_acc(&dval, &mut grads.attn_j_b);
    let mut dconcat_n = Mat::zeros(n, 2 * d);
    matmul_acc(&dgate, &p.attn_i_w, &mut dconcat_n);
    matmul_acc(&dval, &p.attn_j_w, &mut dconcat_n);

    // split: gradient w.r.t. final states and (readout's) initial states
    let mut dx = Mat::zeros(n, d);
    let mut dx0 = Mat::zeros(n, d);
    for i in 0..n {
        dx.row_mut(i).copy_from_slice(&dconcat_n.row(i)[..d]);
        dx0.row_mut(i).copy_from_slice(&dconcat_n.row(i)[d..]);
    }

    // backprop through time
    for t in (0..model.cfg.propagation_steps).rev() {
        let step = &fwd.steps[t];
        let x_prev = if t == 0 { &fwd.x0 } else { &fwd.steps[t - 1].x };
        // x = (1-z) ⊙ x_prev + z ⊙ h_cand
        let mut dz = Mat::zeros(n, d);
        let mut dh = Mat::zeros(n, d);
        let mut dx_prev = Mat::zeros(n, d);
        for i in 0..dz.data.len() {
            dz.data[i] = dx.data[i] * (step.h_cand.data[i] - x_prev.data[i]);
            dh.data[i] = dx.data[i] * step.z.data[i];
            dx_prev.data[i] = dx.data[i] * (1.0 - step.z.data[i]);
        }
        // candidate: h = tanh(W_h m + U_h (r ⊙ x_prev) + b_h)
        for (v, a) in dh.data.iter_mut().zip(&step.h_cand.data) {
            *v *= 1.0 - a * a;
        }
        let mut rx = x_prev.clone();
        for (v, r) in rx.data.iter_mut().zip(&step.r.data) {
            *v *= r;
        }
        matmul_tn_acc(&dh, &step.msg, &mut grads.gru_wh);
        matmul_tn_acc(&dh, &rx, &mut grads.gru_uh);
        colsum_acc(&dh, &mut grads.gru_bh);
        let mut dmsg = Mat::zeros(n, d);
        matmul_acc(&dh, &p.gru_wh, &mut dmsg);
        let mut drx = Mat::zeros(n, d);
        matmul_acc(&dh, &p.gru_uh, &mut drx);
        let mut dr = Mat::zeros(n, d);
        for i in 0..dr.data.len() {
            dr.data[i] = drx.data[i] * x_prev.data[i];
            dx_prev.data[i] += drx.data[i] * step.r.data[i];
        }
        // update gate: z = sigmoid(W_z m + U_z x_prev + b_z)
        for (v, z) in dz.data.iter_mut().zip(&step.z.data) {
            *v *= z * (1.0 - z);
        }
        matmul_tn_acc(&dz, &step.msg, &mut grads.gru_wz);
        matmul_tn_acc(&dz, x_prev, &mut grads.gru_uz);
        colsum_acc(&dz, &mut grads.gru_bz);
        matmul_acc(&dz, &p.gru_wz, &mut dmsg);
        let mut dxp_gate = Mat::zeros(n, d);
        matmul_acc(&dz, &p.gru_uz, &mut dxp_gate);
        dx_prev.add_assign(&dxp_gate);
        // reset gate: r = sigmoid(W_r m + U_r x_prev + b_r)
        for (v, r) in dr.data.iter_mut().zip(&step.r.data) {
            *v *= r * (1.0 - r);
        }
        matmul_tn_acc(&dr, &step.msg, &mut grads.gru_wr);
        matmul_tn_acc(&dr, x_prev, &mut grads.gru_ur);
        colsum_acc(&dr, &mut grads.gru_br);
        matmul_acc(&dr, &p.gru_wr, &mut dmsg);
        dxp_gate.fill(0.0);
        matmul_acc(&dr, &p.gru_ur, &mut dxp_gate);
        dx_prev.add_assign(&dxp_gate);

        // message sums: msg[target] += x_prev[src] · Wᵀ + b, per edge slot
        for slot in 0..EDGE_SLOTS {
            let pairs = &prep.edge_pairs[slot];
            if pairs.is_empty() {
                continue;
            }
            let tgt_idx: Vec<usize> = pairs.iter().map(|&(_, t)| t).collect();
            let src_idx: Vec<usize> = pairs.iter().map(|&(s, _)| s).collect();
            let dcontrib = dmsg.gather_rows(&tgt_idx);
            let gathered = x_prev.gather_rows(&src_idx);
            matmul_tn_acc(&dcontrib, &gathered, &mut grads.edge_w[slot]);
            colsum_acc(&dcontrib, &mut grads.edge_b[slot]);
            let mut dsrc = Mat::zeros(pairs.len(), d);
            matmul_acc(&dcontrib, &p.edge_w[slot], &mut dsrc);
            for (row, &(s, _)) in pairs.iter().enumerate() {
                let dst = dx_prev.row_mut(s);
                let src_row = dsrc.row(row);
                for (a, b) in dst.iter_mut().zip(src_row) {
                    *a += b;
                }
            }
        }
        dx = dx_prev;
    }

    // initial states: label embeddings receive both the BPTT gradient and
    // the readout concat gradient
    dx.add_assign(&dx0);
    for (row, &lid) in prep.label_ids.iter().enumerate() {
        let src = dx.row(row).to_vec();
        let dst = grads.node_embed.row_mut(lid);
        for (a, b) in dst.iter_mut().zip(&src) {
            *a += b;
        }
    }
}
