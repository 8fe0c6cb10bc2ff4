//! Model parameters: shapes, initialization, and uniform traversal used by
//! the optimizer, checkpointing and the finite-difference tests.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::math::Mat;
use super::ModelConfig;

/// (edge type, direction) -> parameter slot. Types in c, d, cd, s order;
/// incoming before outgoing.
pub const EDGE_SLOTS: usize = 8;

pub const EDGE_SLOT_NAMES: [&str; EDGE_SLOTS] = [
    "c_in", "c_out", "d_in", "d_out", "cd_in", "cd_out", "s_in", "s_out",
];

pub fn edge_slot(ty: crate::graph::EdgeType, incoming: bool) -> usize {
    use crate::graph::EdgeType::*;
    let t = match ty {
        C => 0,
        D => 1,
        Cd => 2,
        S => 3,
    };
    t * 2 + if incoming { 0 } else { 1 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    /// |labels| × d label embeddings (node annotations).
    pub node_embed: Mat,
    /// Per (edge type, direction) message transforms, d×d plus 1×d bias.
    pub edge_w: Vec<Mat>,
    pub edge_b: Vec<Mat>,
    // GRU gates: z (update), r (reset), h (candidate); W acts on the
    // message, U on the previous state.
    pub gru_wz: Mat,
    pub gru_uz: Mat,
    pub gru_bz: Mat,
    pub gru_wr: Mat,
    pub gru_ur: Mat,
    pub gru_br: Mat,
    pub gru_wh: Mat,
    pub gru_uh: Mat,
    pub gru_bh: Mat,
    /// Soft-attention readout networks, d × 2d plus bias.
    pub attn_i_w: Mat,
    pub attn_i_b: Mat,
    pub attn_j_w: Mat,
    pub attn_j_b: Mat,
    /// |tokens| × d token embeddings.
    pub token_embed: Mat,
    /// Token-net hidden layers, each d×d plus bias.
    pub token_w: Vec<Mat>,
    pub token_b: Vec<Mat>,
    /// Joint layer d × 2d plus bias.
    pub joint_w: Mat,
    pub joint_b: Mat,
    /// Output layer |classes| × d plus bias.
    pub out_w: Mat,
    pub out_b: Mat,
}

impl Params {
    pub fn init(cfg: &ModelConfig, labels: usize, tokens: usize, classes: usize) -> Params {
        let d = cfg.embedding_size;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut glorot = |rows: usize, cols: usize| {
            let a = (6.0 / (rows + cols) as f64).sqrt();
            let dist = Uniform::new_inclusive(-a, a);
            Mat::from_fn(rows, cols, |_, _| dist.sample(&mut rng))
        };
        let hidden = cfg.hidden_layers;
        Params {
            node_embed: glorot(labels, d),
            edge_w: (0..EDGE_SLOTS).map(|_| glorot(d, d)).collect(),
            edge_b: (0..EDGE_SLOTS).map(|_| Mat::zeros(1, d)).collect(),
            gru_wz: glorot(d, d),
            gru_uz: glorot(d, d),
            gru_bz: Mat::zeros(1, d),
            gru_wr: glorot(d, d),
            gru_ur: glorot(d, d),
            gru_br: Mat::zeros(1, d),
            gru_wh: glorot(d, d),
            gru_uh: glorot(d, d),
            gru_bh: Mat::zeros(1, d),
            attn_i_w: glorot(d, 2 * d),
            attn_i_b: Mat::zeros(1, d),
            attn_j_w: glorot(d, 2 * d),
            attn_j_b: Mat::zeros(1, d),
            token_embed: glorot(tokens, d),
            token_w: (0..hidden).map(|_| glorot(d, d)).collect(),
            token_b: (0..hidden).map(|_| Mat::zeros(1, d)).collect(),
            joint_w: glorot(d, 2 * d),
            joint_b: Mat::zeros(1, d),
            out_w: glorot(classes, d),
            out_b: Mat::zeros(1, classes),
        }
    }

    pub fn zeros_like(&self) -> Params {
        let mut p = self.clone();
        p.for_each_mut(|_, m| m.fill(0.0));
        p
    }

    /// Visit every tensor in a fixed order. The reference passed to the
    /// callback borrows from `self`, so callers may collect the tensors.
    pub fn for_each<'s, F: FnMut(&str, &'s Mat)>(&'s self, mut f: F) {
        f("node_embed", &self.node_embed);
        for (i, m) in self.edge_w.iter().enumerate() {
            f(&format!("edge_w_{}", EDGE_SLOT_NAMES[i]), m);
        }
        for (i, m) in self.edge_b.iter().enumerate() {
            f(&format!("edge_b_{}", EDGE_SLOT_NAMES[i]), m);
        }
        f("gru_wz", &self.gru_wz);
        f("gru_uz", &self.gru_uz);
        f("gru_bz", &self.gru_bz);
        f("gru_wr", &self.gru_wr);
        f("gru_ur", &self.gru_ur);
        f("gru_br", &self.gru_br);
        f("gru_wh", &self.gru_wh);
        f("gru_uh", &self.gru_uh);
        f("gru_bh", &self.gru_bh);
        f("attn_i_w", &self.attn_i_w);
        f("attn_i_b", &self.attn_i_b);
        f("attn_j_w", &self.attn_j_w);
        f("attn_j_b", &self.attn_j_b);
        f("token_embed", &self.token_embed);
        for (i, m) in self.token_w.iter().enumerate() {
            f(&format!("token_w_{i}"), m);
        }
        for (i, m) in self.token_b.iter().enumerate() {
            f(&format!("token_b_{i}"), m);
        }
        f("joint_w", &self.joint_w);
        f("joint_b", &self.joint_b);
        f("out_w", &self.out_w);
        f("out_b", &self.out_b);
    }

    pub fn for_each_mut<F: FnMut(&str, &mut Mat)>(&mut self, mut f: F) {
        f("node_embed", &mut self.node_embed);
        for (i, m) in self.edge_w.iter_mut().enumerate() {
            f(&format!("edge_w_{}", EDGE_SLOT_NAMES[i]), m);
        }
        for (i, m) in self.edge_b.iter_mut().enumerate() {
            f(&format!("edge_b_{}", EDGE_SLOT_NAMES[i]), m);
        }
        f("gru_wz", &mut self.gru_wz);
        f("gru_uz", &mut self.gru_uz);
        f("gru_bz", &mut self.gru_bz);
        f("gru_wr", &mut self.gru_wr);
        f("gru_ur", &mut self.gru_ur);
        f("gru_br", &mut self.gru_br);
        f("gru_wh", &mut self.gru_wh);
        f("gru_uh", &mut self.gru_uh);
        f("gru_bh", &mut self.gru_bh);
        f("attn_i_w", &mut self.attn_i_w);
        f("attn_i_b", &mut self.attn_i_b);
        f("attn_j_w", &mut self.attn_j_w);
        f("attn_j_b", &mut self.attn_j_b);
        f("token_embed", &mut self.token_embed);
        for (i, m) in self.token_w.iter_mut().enumerate() {
            f(&format!("token_w_{i}"), m);
        }
        for (i, m) in self.token_b.iter_mut().enumerate() {
            f(&format!("token_b_{i}"), m);
        }
        f("joint_w", &mut self.joint_w);
        f("joint_b", &mut self.joint_b);
        f("out_w", &mut self.out_w);
        f("out_b", &mut self.out_b);
    }

    pub fn all_finite(&self) -> bool {
        let mut ok = true;
        self.for_each(|_, m| ok &= m.is_finite());
        ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelConfig;

    fn small_cfg() -> ModelConfig {
        ModelConfig { embedding_size: 4, hidden_size: 4, ..ModelConfig::default() }
    }

    #[test]
    fn init_is_seed_deterministic() {
        let cfg = small_cfg();
        let a = Params::init(&cfg, 5, 6, 3);
        let b = Params::init(&cfg, 5, 6, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn visitor_orders_match() {
        let cfg = small_cfg();
        let p = Params::init(&cfg, 5, 6, 3);
        let mut names_a = Vec::new();
        p.for_each(|n, _| names_a.push(n.to_string()));
        let mut q = p.clone();
        let mut names_b = Vec::new();
        q.for_each_mut(|n, _| names_b.push(n.to_string()));
        assert_eq!(names_a, names_b);
        assert!(names_a.contains(&"edge_w_cd_out".to_string()));
    }
}
