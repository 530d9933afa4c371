//! Bootstrap significance testing and Cantelli decision thresholds.
//!
//! Both tools treat the dataset as a sample. Resampling it with replacement
//! gives pseudo-datasets; the class-2 scores across those estimate the score
//! distribution of normal transactions. Cantelli's inequality
//! `P(X - mu >= k sigma) <= 1/(1+k^2)` then turns a chosen false-negative
//! rate into a threshold `theta = mu + k sigma` without any distributional
//! assumption.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::patterns::{mine_mdl, PatternSet};
use crate::scoring::{order_by_class, AnomalyReport, Class2Scorer, ScoreClass};

/// Identifier of the RNG algorithm used for resampling, recorded in run
/// metadata so experiments replay exactly.
pub const RNG_ALGORITHM: &str = "chacha8";

/// An empirical score sample with population moments.
#[derive(Debug, Clone)]
pub struct ScoreDistribution {
    samples: Vec<f64>,
    mean: f64,
    stddev: f64,
    excluded: usize,
}

impl ScoreDistribution {
    /// `excluded` counts score slots that had no eligible pair and were left
    /// out of the sample.
    pub fn new(samples: Vec<f64>, excluded: usize) -> Self {
        let n = samples.len() as f64;
        let (mean, stddev) = if samples.is_empty() {
            (0.0, 0.0)
        } else {
            let mean = samples.iter().sum::<f64>() / n;
            let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
            (mean, var.max(0.0).sqrt())
        };
        ScoreDistribution {
            samples,
            mean,
            stddev,
            excluded,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Population standard deviation (divide by n).
    pub fn stddev(&self) -> f64 {
        self.stddev
    }

    pub fn excluded(&self) -> usize {
        self.excluded
    }

    /// No samples, or zero spread: no threshold can be placed on it.
    pub fn is_degenerate(&self) -> bool {
        self.samples.is_empty() || self.stddev == 0.0
    }
}

/// Threshold at false-negative rate `fnr`: `theta = mu + k sigma` with
/// `k = sqrt(1/fnr - 1)`, so Cantelli bounds the mass above `theta` by `fnr`.
pub fn cantelli_threshold(dist: &ScoreDistribution, fnr: f64) -> Result<f64> {
    if !(fnr > 0.0 && fnr < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "false-negative rate must be in (0, 1), got {fnr}"
        )));
    }
    if dist.is_degenerate() {
        return Err(Error::DegenerateDistribution);
    }
    let k = (1.0 / fnr - 1.0).sqrt();
    Ok(dist.mean + k * dist.stddev)
}

/// `k` for a false-negative rate; exposed for reporting.
pub fn cantelli_k(fnr: f64) -> f64 {
    (1.0 / fnr - 1.0).sqrt()
}

/// The false-negative rate whose threshold equals `score`: the Cantelli
/// bound `1/(1+k^2)` with `k = (score - mu)/sigma`. Scores at or below the
/// mean get the vacuous bound 1.
pub fn fnr_for_score(dist: &ScoreDistribution, score: f64) -> f64 {
    if score <= dist.mean {
        return 1.0;
    }
    if dist.stddev == 0.0 {
        return 0.0;
    }
    let k = (score - dist.mean) / dist.stddev;
    1.0 / (1.0 + k * k)
}

/// Reports whose class-2 score is strictly above `theta`, order preserved.
pub fn flag_above_threshold(reports: &[AnomalyReport], theta: f64) -> Vec<&AnomalyReport> {
    reports
        .iter()
        .filter(|r| r.score2_bits.is_some_and(|s| s > theta))
        .collect()
}

/// Knobs for the bootstrap procedures.
#[derive(Debug, Clone)]
pub struct BootstrapOptions {
    pub replicates: usize,
    pub seed: u64,
    /// Re-mine the pattern set on every replicate (the faithful procedure).
    /// Off, the set mined once on the original data is reused for speed;
    /// supports are still recomputed per replicate.
    pub remine: bool,
    /// Minimum candidate support for the code-table miner.
    pub min_support: usize,
}

impl Default for BootstrapOptions {
    fn default() -> Self {
        BootstrapOptions {
            replicates: 1000,
            seed: 0,
            remine: true,
            min_support: 1,
        }
    }
}

fn check_options(opts: &BootstrapOptions) -> Result<()> {
    if opts.replicates == 0 {
        return Err(Error::InvalidArgument("replicates must be at least 1".into()));
    }
    Ok(())
}

/// The id of the top-ranked class-2 transaction of `d` under a freshly mined
/// pattern set (ties and all-absent datasets resolve to the lowest id).
pub fn top_class2_transaction(d: &Dataset, min_support: usize) -> Result<usize> {
    let set = mine_mdl(d, min_support).to_pattern_set();
    let scorer = Class2Scorer::new(d, &set)?;
    let scores = scorer.score_all();
    let mut best: Option<(f64, usize)> = None;
    for (tid, s) in scores.iter().enumerate() {
        if let Some(e) = s {
            let better = match best {
                None => true,
                Some((b, _)) => e.score_bits > b,
            };
            if better {
                best = Some((e.score_bits, tid));
            }
        }
    }
    Ok(best.map_or(0, |(_, tid)| tid))
}

fn replicate_scores(
    d: &Dataset,
    opts: &BootstrapOptions,
    base_set: Option<&PatternSet>,
    exclude: Option<usize>,
    replicate: usize,
) -> Vec<Option<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(replicate as u64));
    let sample = d.resample(&mut rng, exclude);
    let set = match base_set {
        Some(set) => set.clone(),
        None => mine_mdl(&sample, opts.min_support).to_pattern_set(),
    };
    let scorer = Class2Scorer::new(&sample, &set).expect("patterns stay within the alphabet");
    scorer
        .score_all()
        .into_iter()
        .map(|s| s.map(|e| e.score_bits))
        .collect()
}

/// Distribution of the per-replicate maximum class-2 score. Each replicate
/// draws `|D|` transactions with replacement, re-mines (or reuses) the
/// pattern set, scores every transaction and keeps the maximum. With
/// `exclude_top` the current top-ranked transaction is removed from the pool
/// before sampling. Replicates where no transaction has an eligible pair are
/// counted as excluded.
pub fn bootstrap_max_scores(
    d: &Dataset,
    opts: &BootstrapOptions,
    exclude_top: bool,
) -> Result<ScoreDistribution> {
    check_options(opts)?;
    if exclude_top && d.len() < 2 {
        return Err(Error::InvalidArgument(
            "excluding the top transaction needs at least 2 transactions".into(),
        ));
    }
    let exclude = if exclude_top {
        Some(top_class2_transaction(d, opts.min_support)?)
    } else {
        None
    };
    let base_set = if opts.remine {
        None
    } else {
        Some(mine_mdl(d, opts.min_support).to_pattern_set())
    };

    let maxima: Vec<Option<f64>> = (0..opts.replicates)
        .into_par_iter()
        .map(|r| {
            replicate_scores(d, opts, base_set.as_ref(), exclude, r)
                .into_iter()
                .flatten()
                .fold(None, |acc: Option<f64>, s| {
                    Some(acc.map_or(s, |a| a.max(s)))
                })
        })
        .collect();

    let excluded = maxima.iter().filter(|m| m.is_none()).count();
    let samples: Vec<f64> = maxima.into_iter().flatten().collect();
    Ok(ScoreDistribution::new(samples, excluded))
}

/// Pooled class-2 scores of every transaction across all replicates; absent
/// scores are excluded and counted.
pub fn bootstrap_all_scores(d: &Dataset, opts: &BootstrapOptions) -> Result<ScoreDistribution> {
    check_options(opts)?;
    let base_set = if opts.remine {
        None
    } else {
        Some(mine_mdl(d, opts.min_support).to_pattern_set())
    };
    let per_replicate: Vec<Vec<Option<f64>>> = (0..opts.replicates)
        .into_par_iter()
        .map(|r| replicate_scores(d, opts, base_set.as_ref(), None, r))
        .collect();
    let mut samples = Vec::with_capacity(opts.replicates * d.len());
    let mut excluded = 0;
    for scores in per_replicate {
        for s in scores {
            match s {
                Some(v) => samples.push(v),
                None => excluded += 1,
            }
        }
    }
    Ok(ScoreDistribution::new(samples, excluded))
}

/// Result of the with/without-top significance test.
#[derive(Debug, Clone)]
pub struct SignificanceResult {
    /// Max-score distribution over replicates that may contain the top
    /// transaction.
    pub dist_with: ScoreDistribution,
    /// Same, with the top-ranked transaction removed from the pool.
    pub dist_without: ScoreDistribution,
    /// mean(with) - mean(without); large positive differences mean the top
    /// transaction alone drags the maximum up.
    pub mean_difference: f64,
    /// Histogram overlap of the two distributions in [0, 1].
    pub overlap_fraction: f64,
    /// The transaction the "without" pool dropped.
    pub top_transaction: usize,
}

/// Runs [`bootstrap_max_scores`] with and without the top-ranked transaction
/// and summarizes the separation between the two distributions.
pub fn significance_test(d: &Dataset, opts: &BootstrapOptions) -> Result<SignificanceResult> {
    check_options(opts)?;
    if d.len() < 2 {
        return Err(Error::InvalidArgument(
            "significance test needs at least 2 transactions".into(),
        ));
    }
    let top = top_class2_transaction(d, opts.min_support)?;
    let dist_with = bootstrap_max_scores(d, opts, false)?;
    let dist_without = bootstrap_max_scores(d, opts, true)?;
    let mean_difference = dist_with.mean() - dist_without.mean();
    let overlap_fraction = histogram_overlap(dist_with.samples(), dist_without.samples(), 40);
    Ok(SignificanceResult {
        dist_with,
        dist_without,
        mean_difference,
        overlap_fraction,
        top_transaction: top,
    })
}

/// Overlap coefficient of two samples estimated on a shared equal-width
/// histogram: the sum over bins of the smaller of the two bin fractions.
pub fn histogram_overlap(a: &[f64], b: &[f64], bins: usize) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let lo = a.iter().chain(b).cloned().fold(f64::INFINITY, f64::min);
    let hi = a.iter().chain(b).cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        return 1.0;
    }
    let width = (hi - lo) / bins as f64;
    let bin_of = |x: f64| (((x - lo) / width) as usize).min(bins - 1);
    let mut ca = vec![0usize; bins];
    let mut cb = vec![0usize; bins];
    for &x in a {
        ca[bin_of(x)] += 1;
    }
    for &x in b {
        cb[bin_of(x)] += 1;
    }
    (0..bins)
        .map(|i| (ca[i] as f64 / a.len() as f64).min(cb[i] as f64 / b.len() as f64))
        .sum()
}

/// Ids of transactions above `theta`, in ranking order, using ready reports.
pub fn flagged_ids(reports: &[AnomalyReport], theta: f64) -> Vec<usize> {
    let order = order_by_class(reports, ScoreClass::CoOccurrence);
    order
        .into_iter()
        .filter(|&tid| reports[tid].score2_bits.is_some_and(|s| s > theta))
        .collect()
}
