//! Ranking metrics (top-k accuracy, MRR), Mann-Whitney U significance, and
//! the evaluation harness.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::TrainingInstance;
use crate::model::{Model, ModelError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("result set is empty")]
    EmptyResults,
    #[error("sample is empty")]
    EmptySample,
    #[error("corpus is empty")]
    EmptyCorpus,
}

/// Outcome of predicting one instance: the 1-based rank of the true label
/// in the full ranking, absent when the label is outside the class
/// vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionResult {
    pub instance: usize,
    pub true_label: String,
    pub rank: Option<usize>,
}

impl PredictionResult {
    pub fn reciprocal_rank(&self) -> f64 {
        match self.rank {
            Some(r) => 1.0 / r as f64,
            None => 0.0,
        }
    }
}

/// Fraction of results ranked at or above `k`.
pub fn topk_accuracy(results: &[PredictionResult], k: usize) -> Result<f64, EvalError> {
    if results.is_empty() {
        return Err(EvalError::EmptyResults);
    }
    let hits = results.iter().filter(|r| matches!(r.rank, Some(rk) if rk <= k)).count();
    Ok(hits as f64 / results.len() as f64)
}

/// Mean reciprocal rank; unranked results contribute zero.
pub fn mrr(results: &[PredictionResult]) -> Result<f64, EvalError> {
    if results.is_empty() {
        return Err(EvalError::EmptyResults);
    }
    Ok(results.iter().map(|r| r.reciprocal_rank()).sum::<f64>() / results.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    pub u: f64,
    pub p: f64,
    /// p < 0.05
    pub significant: bool,
    /// true when the exact enumeration branch produced the p-value
    pub exact: bool,
}

/// Two-sided Mann-Whitney U test. Exact p by enumeration of group
/// assignments when |a|+|b| <= 12 (midranks for ties); normal approximation
/// with tie correction and continuity correction otherwise.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MannWhitney, EvalError> {
    if a.is_empty() || b.is_empty() {
        return Err(EvalError::EmptySample);
    }
    let n1 = a.len();
    let n2 = b.len();
    let mut pooled: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    let ranks = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let u = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let mu = (n1 * n2) as f64 / 2.0;

    let p = if n1 + n2 <= 12 {
        exact_two_sided_p(&mut pooled, n1, u)
    } else {
        normal_two_sided_p(&ranks, n1, n2, u, mu)
    };
    Ok(MannWhitney { u, p, significant: p < 0.05, exact: n1 + n2 <= 12 })
}

/// Midranks of the pooled sample, in input order.
fn midranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && values[idx[j]] == values[idx[i]] {
            j += 1;
        }
        let rank = (i + 1 + j) as f64 / 2.0;
        for k in i..j {
            ranks[idx[k]] = rank;
        }
        i = j;
    }
    ranks
}

/// P(|U - n1 n2 / 2| >= |u_obs - n1 n2 / 2|) over all equally likely
/// assignments of group labels to the pooled values.
fn exact_two_sided_p(pooled: &mut [f64], n1: usize, u_obs: f64) -> f64 {
    let n = pooled.len();
    let ranks = midranks(pooled);
    let mu = (n1 * (n - n1)) as f64 / 2.0;
    let observed_dev = (u_obs - mu).abs();
    let mut total = 0u64;
    let mut extreme = 0u64;
    let mut chosen: Vec<usize> = Vec::with_capacity(n1);
    // enumerate all C(n, n1) index subsets
    fn rec(
        next: usize,
        n: usize,
        n1: usize,
        chosen: &mut Vec<usize>,
        ranks: &[f64],
        mu: f64,
        observed_dev: f64,
        total: &mut u64,
        extreme: &mut u64,
    ) {
        if chosen.len() == n1 {
            let r1: f64 = chosen.iter().map(|&i| ranks[i]).sum();
            let u = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
            *total += 1;
            if (u - mu).abs() >= observed_dev - 1e-12 {
                *extreme += 1;
            }
            return;
        }
        if n - next < n1 - chosen.len() {
            return;
        }
        for i in next..n {
            chosen.push(i);
            rec(i + 1, n, n1, chosen, ranks, mu, observed_dev, total, extreme);
            chosen.pop();
            if n - (i + 1) < n1 - chosen.len() {
                break;
            }
        }
    }
    rec(0, n, n1, &mut chosen, &ranks, mu, observed_dev, &mut total, &mut extreme);
    extreme as f64 / total as f64
}

fn normal_two_sided_p(ranks: &[f64], n1: usize, n2: usize, u: f64, mu: f64) -> f64 {
    let n = n1 + n2;
    // tie correction over rank groups
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for r in ranks {
        *counts.entry(r.to_bits()).or_insert(0) += 1;
    }
    let tie_term: f64 = counts.values().map(|&t| (t * t * t - t) as f64).sum();
    let var = (n1 * n2) as f64 / 12.0
        * ((n + 1) as f64 - tie_term / (n as f64 * (n as f64 - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let dev = (u - mu).abs();
    // continuity correction
    let z = (dev - 0.5).max(0.0) / var.sqrt();
    (2.0 * normal_sf(z)).min(1.0)
}

/// Standard normal survival function via an Abramowitz-Stegun style erfc
/// approximation (abs error ~1e-7).
fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    let ax = x.abs();
    let t = 1.0 / (1.0 + 0.5 * ax);
    let tau = t
        * (-ax * ax - 1.26551223
            + t * (1.00002368
                + t * (0.37409196
                    + t * (0.09678418
                        + t * (-0.18628806
                            + t * (0.27886807
                                + t * (-1.13520398
                                    + t * (1.48851587
                                        + t * (-0.82215223 + t * 0.17087277)))))))))
        .exp();
    if x >= 0.0 {
        tau
    } else {
        2.0 - tau
    }
}

/// Per-k accuracies, MRR and optional pairwise significance.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub accuracies: Vec<(usize, f64)>,
    pub mrr: f64,
    pub instances: usize,
    /// (comparison name, U, p)
    pub p_values: Vec<(String, f64, f64)>,
}

impl EvalReport {
    pub fn from_results(results: &[PredictionResult], ks: &[usize]) -> Result<Self, EvalError> {
        let mut accuracies = Vec::new();
        for &k in ks {
            accuracies.push((k, topk_accuracy(results, k)?));
        }
        Ok(EvalReport { accuracies, mrr: mrr(results)?, instances: results.len(), p_values: vec![] })
    }

    /// Fixed-layout text table, top-1/top-5/top-10/MRR ordering.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> =
            self.accuracies.iter().map(|(k, _)| format!("top-{k}")).collect();
        out.push_str(&format!("instances: {}\n", self.instances));
        out.push_str(&header.join("\t"));
        out.push_str("\tMRR\n");
        let row: Vec<String> =
            self.accuracies.iter().map(|(_, a)| format!("{:.4}", a)).collect();
        out.push_str(&row.join("\t"));
        out.push_str(&format!("\t{:.4}\n", self.mrr));
        for (name, u, p) in &self.p_values {
            out.push_str(&format!("{name}: U={u:.1} p={p:.6} significant={}\n", *p < 0.05));
        }
        out
    }
}

/// Anything that can produce a 1-based rank of an instance's true label.
pub trait Ranker {
    fn rank_of(&self, inst: &TrainingInstance) -> Result<Option<usize>, ModelError>;
    fn name(&self) -> &str;
}

impl Ranker for Model {
    fn rank_of(&self, inst: &TrainingInstance) -> Result<Option<usize>, ModelError> {
        Model::rank_of(self, inst)
    }

    fn name(&self) -> &str {
        "model"
    }
}

/// Input-independent baseline ranking classes by training-label frequency,
/// ties broken by label order.
#[derive(Debug, Clone)]
pub struct FrequencyBaseline {
    ranking: Vec<String>,
}

impl FrequencyBaseline {
    pub fn from_corpus(train: &[TrainingInstance]) -> Result<FrequencyBaseline, EvalError> {
        if train.is_empty() {
            return Err(EvalError::EmptyCorpus);
        }
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for inst in train {
            *counts.entry(inst.label.text.as_str()).or_insert(0) += 1;
        }
        let mut ranking: Vec<(String, usize)> =
            counts.into_iter().map(|(l, c)| (l.to_string(), c)).collect();
        ranking.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ok(FrequencyBaseline { ranking: ranking.into_iter().map(|(l, _)| l).collect() })
    }

    pub fn ranking(&self) -> &[String] {
        &self.ranking
    }
}

impl Ranker for FrequencyBaseline {
    fn rank_of(&self, inst: &TrainingInstance) -> Result<Option<usize>, ModelError> {
        Ok(self.ranking.iter().position(|l| *l == inst.label.text).map(|p| p + 1))
    }

    fn name(&self) -> &str {
        "frequency-baseline"
    }
}

/// Rank every instance of the corpus with `ranker`.
pub fn collect_results(
    ranker: &dyn Ranker,
    corpus: &[TrainingInstance],
) -> Result<Vec<PredictionResult>, ModelError> {
    let mut out = Vec::with_capacity(corpus.len());
    for (i, inst) in corpus.iter().enumerate() {
        out.push(PredictionResult {
            instance: i,
            true_label: inst.label.text.clone(),
            rank: ranker.rank_of(inst)?,
        });
    }
    Ok(out)
}

/// Run the model over a test corpus and compute the report.
pub fn evaluate(
    model: &Model,
    corpus: &[TrainingInstance],
    ks: &[usize],
) -> Result<EvalReport, ModelError> {
    if corpus.is_empty() {
        return Err(ModelError::EmptyCorpus);
    }
    let results = collect_results(model, corpus)?;
    EvalReport::from_results(&results, ks)
        .map_err(|_| ModelError::EmptyCorpus)
}

/// Two-sided Mann-Whitney U over the per-instance reciprocal ranks of two
/// rankers on the same corpus.
pub fn compare_rankers(
    a: &[PredictionResult],
    b: &[PredictionResult],
) -> Result<MannWhitney, EvalError> {
    let ra: Vec<f64> = a.iter().map(|r| r.reciprocal_rank()).collect();
    let rb: Vec<f64> = b.iter().map(|r| r.reciprocal_rank()).collect();
    mann_whitney_u(&ra, &rb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn results(ranks: &[Option<usize>]) -> Vec<PredictionResult> {
        ranks
            .iter()
            .enumerate()
            .map(|(i, r)| PredictionResult {
                instance: i,
                true_label: format!("L{i}"),
                rank: *r,
            })
            .collect()
    }

    #[test]
    fn topk_fractions() {
        let rs = results(&[Some(1), Some(3), Some(11)]);
        assert_eq!(topk_accuracy(&rs, 1).unwrap(), 1.0 / 3.0);
        assert_eq!(topk_accuracy(&rs, 5).unwrap(), 2.0 / 3.0);
        assert_eq!(topk_accuracy(&rs, 10).unwrap(), 2.0 / 3.0);
    }

    #[test]
    fn topk_all_first() {
        let rs = results(&[Some(1), Some(1)]);
        for k in 1..5 {
            assert_eq!(topk_accuracy(&rs, k).unwrap(), 1.0);
        }
    }

    #[test]
    fn topk_all_absent() {
        let rs = results(&[None, None]);
        assert_eq!(topk_accuracy(&rs, 10).unwrap(), 0.0);
        assert_eq!(mrr(&rs).unwrap(), 0.0);
    }

    #[test]
    fn mrr_rank_four() {
        let rs = results(&[Some(4), Some(4), Some(4)]);
        assert_eq!(mrr(&rs).unwrap(), 0.25);
    }

    #[test]
    fn mrr_mixed() {
        let rs = results(&[Some(1), Some(3), Some(11)]);
        let expect = (1.0 + 1.0 / 3.0 + 1.0 / 11.0) / 3.0;
        assert!((mrr(&rs).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn mrr_single_first() {
        let rs = results(&[Some(1)]);
        assert_eq!(mrr(&rs).unwrap(), 1.0);
    }

    #[test]
    fn empty_results_error() {
        assert!(matches!(topk_accuracy(&[], 1), Err(EvalError::EmptyResults)));
        assert!(matches!(mrr(&[]), Err(EvalError::EmptyResults)));
    }

    #[test]
    fn mann_whitney_identical_samples() {
        let a = [1.0, 2.0, 3.0];
        let res = mann_whitney_u(&a, &a).unwrap();
        assert_eq!(res.u, 4.5);
        assert!(res.p > 0.99);
    }

    #[test]
    fn mann_whitney_disjoint_samples() {
        let res = mann_whitney_u(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(res.u, 0.0);
        assert!((res.p - 0.1).abs() < 1e-12);
    }

    #[test]
    fn mann_whitney_symmetry() {
        let a = [1.0, 5.0, 2.0, 8.0];
        let b = [3.0, 3.0, 9.0];
        let ab = mann_whitney_u(&a, &b).unwrap();
        let ba = mann_whitney_u(&b, &a).unwrap();
        assert_eq!(ab.u + ba.u, (a.len() * b.len()) as f64);
        assert!((ab.p - ba.p).abs() < 1e-12);
    }

    #[test]
    fn mann_whitney_empty_sample() {
        assert!(matches!(mann_whitney_u(&[], &[1.0]), Err(EvalError::EmptySample)));
    }
}
