//! The joint classifier: label embedding + gated-graph-network propagation,
//! soft-attention readout, code token network, joint layer and softmax,
//! with hand-written reverse-mode gradients, Adam training with early
//! stopping, and a binary checkpoint format.

pub mod checkpoint;
mod forward;
mod grad;
pub mod math;
mod params;
mod train;
mod vocab;

pub use forward::{classify, propagate, readout, token_net, PreparedInstance};
pub use grad::{loss_and_grads, BatchMode};
pub use params::{edge_slot, Params, EDGE_SLOTS, EDGE_SLOT_NAMES};
pub use train::{train, EpochStats, TrainLog};
pub use vocab::{class_vocab, Vocab, UNK};

use thiserror::Error;

use crate::corpus::TrainingInstance;
use crate::graph::ApiContextGraph;
use crate::tokens::TokenBag;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("graph has no hole to recommend for")]
    NoHole,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("non-finite loss at epoch {epoch}, batch {batch}")]
    NonFiniteLoss { epoch: usize, batch: usize },
    #[error("invalid model config: {0}")]
    BadConfig(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("checkpoint config mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    F32,
    F64,
}

impl Precision {
    pub fn width(self) -> u8 {
        match self {
            Precision::F32 => 4,
            Precision::F64 => 8,
        }
    }

    pub fn from_width(w: u8) -> Option<Precision> {
        match w {
            4 => Some(Precision::F32),
            8 => Some(Precision::F64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub embedding_size: usize,
    pub hidden_layers: usize,
    pub hidden_size: usize,
    /// Keep probability for dropout on the token hidden layers and the
    /// joint layer.
    pub keep_prob: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    /// Propagation steps T.
    pub propagation_steps: usize,
    /// Early-stopping patience in epochs.
    pub patience: usize,
    pub min_class_freq: usize,
    pub max_epochs: usize,
    pub seed: u64,
    pub precision: Precision,
    /// Ablation: zero the token vector, using only the graph network.
    pub structure_only: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            embedding_size: 300,
            hidden_layers: 3,
            hidden_size: 300,
            keep_prob: 0.75,
            learning_rate: 0.005,
            batch_size: 256,
            propagation_steps: 5,
            patience: 5,
            min_class_freq: 2,
            max_epochs: 200,
            seed: 1,
            precision: Precision::F64,
            structure_only: false,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("embedding_size", self.embedding_size),
            ("hidden_layers", self.hidden_layers),
            ("hidden_size", self.hidden_size),
            ("batch_size", self.batch_size),
            ("patience", self.patience),
            ("min_class_freq", self.min_class_freq),
            ("max_epochs", self.max_epochs),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(ModelError::BadConfig(format!("{name} must be positive")));
            }
        }
        if !(self.keep_prob > 0.0 && self.keep_prob <= 1.0) {
            return Err(ModelError::BadConfig("keep_prob must be in (0, 1]".into()));
        }
        if self.learning_rate <= 0.0 {
            return Err(ModelError::BadConfig("learning_rate must be positive".into()));
        }
        if self.hidden_size != self.embedding_size {
            return Err(ModelError::BadConfig(
                "hidden_size must equal embedding_size (the joint architecture ties them)".into(),
            ));
        }
        Ok(())
    }
}

/// A trained (or freshly initialized) model: parameters plus the three
/// vocabularies needed to map graphs, bags and labels to indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub cfg: ModelConfig,
    /// Input-side node labels.
    pub labels: Vocab,
    /// Output-side class labels.
    pub classes: Vocab,
    /// Code tokens seen in training.
    pub tokens: Vocab,
    pub params: Params,
}

impl Model {
    pub fn new(cfg: ModelConfig, labels: Vocab, classes: Vocab, tokens: Vocab) -> Result<Model, ModelError> {
        cfg.validate()?;
        let params = Params::init(&cfg, labels.len(), tokens.len(), classes.len());
        Ok(Model { cfg, labels, classes, tokens, params })
    }

    /// Ranked (label, probability) recommendations for a graph with a hole.
    /// UNK is never emitted; ties break by label order.
    pub fn predict(
        &self,
        g: &ApiContextGraph,
        bag: &TokenBag,
        k: usize,
    ) -> Result<Vec<(String, f64)>, ModelError> {
        if g.hole.is_none() {
            return Err(ModelError::NoHole);
        }
        let ranked = self.rank_all(g, bag)?;
        Ok(ranked.into_iter().take(k).collect())
    }

    /// Full descending ranking over all non-UNK classes.
    pub fn rank_all(
        &self,
        g: &ApiContextGraph,
        bag: &TokenBag,
    ) -> Result<Vec<(String, f64)>, ModelError> {
        let prep = PreparedInstance::from_parts(self, g, bag, None)?;
        let fwd = forward::run(self, &prep, None);
        let mut ranked: Vec<(String, f64)> = fwd
            .probs
            .iter()
            .enumerate()
            .skip(1) // UNK
            .map(|(i, &p)| (self.classes.name(i).to_string(), p))
            .collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ok(ranked)
    }

    /// 1-based rank of `label` in the full ranking; None when out of the
    /// class vocabulary.
    pub fn rank_of(&self, inst: &TrainingInstance) -> Result<Option<usize>, ModelError> {
        if self.classes.known_id(&inst.label.text).is_none() {
            return Ok(None);
        }
        let ranked = self.rank_all(&inst.graph, &inst.tokens)?;
        Ok(ranked.iter().position(|(l, _)| *l == inst.label.text).map(|p| p + 1))
    }
}
