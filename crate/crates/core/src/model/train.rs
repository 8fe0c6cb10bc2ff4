//! Training loop: Adam updates over shuffled mini-batches, top-1 validation
//! after each epoch, early stopping on stalled validation accuracy, best
//! checkpoint returned.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::forward::{self, PreparedInstance};
use super::grad::{loss_and_grads, BatchMode};
use super::params::Params;
use super::vocab::{class_vocab, Vocab};
use super::{Model, ModelConfig, ModelError};
use crate::corpus::TrainingInstance;

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub valid_top1: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainLog {
    pub epochs: Vec<EpochStats>,
    pub best_epoch: usize,
    pub best_valid_top1: f64,
    pub stopped_early: bool,
}

impl TrainLog {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.epochs {
            out.push_str(&format!(
                "epoch {} loss {:.12e} valid_top1 {:.6}\n",
                e.epoch, e.train_loss, e.valid_top1
            ));
        }
        out.push_str(&format!(
            "best_epoch {} best_valid_top1 {:.6} stopped_early {}\n",
            self.best_epoch, self.best_valid_top1, self.stopped_early
        ));
        out
    }
}

/// First/second moment buffers aligned with the fixed tensor order.
struct Adam {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    t: u64,
    lr: f64,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

impl Adam {
    fn new(template: &Params, lr: f64) -> Adam {
        let mut m = Vec::new();
        template.for_each(|_, mat| m.push(vec![0.0; mat.data.len()]));
        let v = m.clone();
        Adam { m, v, t: 0, lr }
    }

    fn step(&mut self, params: &mut Params, grads: &Params) {
        self.t += 1;
        let bc1 = 1.0 - BETA1.powi(self.t as i32);
        let bc2 = 1.0 - BETA2.powi(self.t as i32);
        let lr = self.lr;
        let mut g_list: Vec<&[f64]> = Vec::new();
        grads.for_each(|_, mat| g_list.push(&mat.data));
        let m_list = &mut self.m;
        let v_list = &mut self.v;
        let mut slot = 0usize;
        params.for_each_mut(|_, p| {
            let g = g_list[slot];
            let m = &mut m_list[slot];
            let v = &mut v_list[slot];
            for i in 0..p.data.len() {
                let gi = g[i];
                m[i] = BETA1 * m[i] + (1.0 - BETA1) * gi;
                v[i] = BETA2 * v[i] + (1.0 - BETA2) * gi * gi;
                let mhat = m[i] / bc1;
                let vhat = v[i] / bc2;
                p.data[i] -= lr * mhat / (vhat.sqrt() + ADAM_EPS);
            }
            slot += 1;
        });
    }
}

/// Build the vocabularies a model needs from the training corpus.
pub fn build_vocabs(train: &[TrainingInstance], min_class_freq: usize) -> (Vocab, Vocab, Vocab) {
    let labels = Vocab::build(
        train
            .iter()
            .flat_map(|i| i.graph.nodes.iter().map(|n| n.label.text.clone())),
    );
    let classes = class_vocab(train.iter().map(|i| i.label.text.as_str()), min_class_freq);
    let tokens = Vocab::build(
        train.iter().flat_map(|i| i.tokens.iter().map(|t| t.to_string())),
    );
    (labels, classes, tokens)
}

/// Train a model, returning the best checkpoint by validation top-1.
pub fn train(
    train_corpus: &[TrainingInstance],
    valid_corpus: &[TrainingInstance],
    cfg: ModelConfig,
) -> Result<(Model, TrainLog), ModelError> {
    cfg.validate()?;
    if train_corpus.is_empty() || valid_corpus.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    let (labels, classes, tokens) = build_vocabs(train_corpus, cfg.min_class_freq);
    let mut model = Model::new(cfg.clone(), labels, classes, tokens)?;

    let train_prep: Vec<PreparedInstance> = train_corpus
        .iter()
        .map(|i| PreparedInstance::from_instance(&model, i))
        .collect::<Result<_, _>>()?;
    let valid_prep: Vec<PreparedInstance> = valid_corpus
        .iter()
        .map(|i| PreparedInstance::from_instance(&model, i))
        .collect::<Result<_, _>>()?;

    let mut adam = Adam::new(&model.params, cfg.learning_rate);
    let mut order: Vec<usize> = (0..train_prep.len()).collect();
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));

    let mut log = TrainLog::default();
    let mut best: Option<(f64, Params, usize)> = None;
    let mut stale = 0usize;

    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        let mut seen = 0usize;
        for (batch_no, chunk) in order.chunks(cfg.batch_size).enumerate() {
            let batch: Vec<PreparedInstance> =
                chunk.iter().map(|&i| train_prep[i].clone()).collect();
            let mask_seed = cfg
                .seed
                .wrapping_mul(0x51_7C_C1_B7_27_22_0A_95)
                .wrapping_add((epoch as u64) << 20)
                .wrapping_add(batch_no as u64);
            let (loss, grads) =
                loss_and_grads(&model, &batch, BatchMode::Train { mask_seed }).map_err(
                    |e| match e {
                        ModelError::NonFiniteLoss { .. } => {
                            ModelError::NonFiniteLoss { epoch, batch: batch_no }
                        }
                        other => other,
                    },
                )?;
            adam.step(&mut model.params, &grads);
            epoch_loss += loss * chunk.len() as f64;
            seen += chunk.len();
        }
        let train_loss = epoch_loss / seen as f64;
        let valid_top1 = top1_accuracy(&model, &valid_prep);
        log.epochs.push(EpochStats { epoch, train_loss, valid_top1 });

        let improved = match &best {
            None => true,
            Some((acc, _, _)) => valid_top1 > *acc,
        };
        if improved {
            best = Some((valid_top1, model.params.clone(), epoch));
            stale = 0;
        } else {
            stale += 1;
            if stale >= cfg.patience {
                log.stopped_early = true;
                break;
            }
        }
    }

    let (best_acc, best_params, best_epoch) =
        best.expect("at least one epoch ran");
    log.best_epoch = best_epoch;
    log.best_valid_top1 = best_acc;
    model.params = best_params;
    Ok((model, log))
}

/// Top-1 accuracy: argmax over non-UNK classes, evaluation mode.
pub fn top1_accuracy(model: &Model, prep: &[PreparedInstance]) -> f64 {
    if prep.is_empty() {
        return 0.0;
    }
    let mut hits = 0usize;
    for inst in prep {
        let fwd = forward::run(model, inst, None);
        let pred = argmax_non_unk(&fwd.probs, model);
        if let (Some(pred), Some(target)) = (pred, inst.class_id) {
            if target != 0 && pred == target {
                hits += 1;
            }
        }
    }
    hits as f64 / prep.len() as f64
}

fn argmax_non_unk(probs: &[f64], model: &Model) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 1..probs.len() {
        match best {
            None => best = Some(i),
            Some(b) => {
                // ties break toward the lexicographically smaller label
                if probs[i] > probs[b]
                    || (probs[i] == probs[b] && model.classes.name(i) < model.classes.name(b))
                {
                    best = Some(i);
                }
            }
        }
    }
    best
}
