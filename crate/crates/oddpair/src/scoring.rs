//! The three per-transaction anomaly scores and ranking.
//!
//! Class 0 scores a transaction by how surprising its length is, class 1 by
//! its encoded length under a code table (little regularity scores high), and
//! class 2 by its most unexpected pattern co-occurrence: the pair of disjoint
//! patterns contained in the transaction whose joint support falls furthest
//! below what independence predicts. The class-2 value for a pair is
//! `-log2 P(XY) + log2(P(X) P(Y))`, minus the log of the pair's lift, so
//! independence scores 0 and rarer-than-expected pairs score positive bits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::dataset::{intersect_len, is_disjoint_sorted, is_subset_sorted, Dataset, LengthHistogram};
use crate::error::{Error, Result};
use crate::patterns::{CodeTable, Pattern, PatternSet};

/// The three anomaly classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScoreClass {
    /// Class 0: unexpected transaction length.
    Length,
    /// Class 1: little regularity (high encoded length).
    Encoding,
    /// Class 2: unexpectedly rare pattern co-occurrence.
    CoOccurrence,
}

impl ScoreClass {
    pub fn from_digit(digit: u8) -> Option<ScoreClass> {
        match digit {
            0 => Some(ScoreClass::Length),
            1 => Some(ScoreClass::Encoding),
            2 => Some(ScoreClass::CoOccurrence),
            _ => None,
        }
    }

    pub fn digit(self) -> u8 {
        match self {
            ScoreClass::Length => 0,
            ScoreClass::Encoding => 1,
            ScoreClass::CoOccurrence => 2,
        }
    }
}

/// The pattern pair behind a class-2 score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score2Explanation {
    pub pattern_a: Vec<u32>,
    pub pattern_b: Vec<u32>,
    pub support_a: usize,
    pub support_b: usize,
    pub support_ab: usize,
    pub score_bits: f64,
}

/// Per-transaction scores, ranks and the class-2 explanation. Absent class-2
/// scores mean "no eligible pair", which is different from a score of 0
/// (exact independence).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnomalyReport {
    pub transaction_id: usize,
    pub score0_bits: Option<f64>,
    pub score1_bits: Option<f64>,
    pub score2_bits: Option<f64>,
    pub explanation: Option<Score2Explanation>,
    pub rank0: Option<usize>,
    pub rank1: Option<usize>,
    pub rank2: Option<usize>,
}

impl AnomalyReport {
    fn empty(transaction_id: usize) -> Self {
        AnomalyReport {
            transaction_id,
            score0_bits: None,
            score1_bits: None,
            score2_bits: None,
            explanation: None,
            rank0: None,
            rank1: None,
            rank2: None,
        }
    }

    pub fn score(&self, class: ScoreClass) -> Option<f64> {
        match class {
            ScoreClass::Length => self.score0_bits,
            ScoreClass::Encoding => self.score1_bits,
            ScoreClass::CoOccurrence => self.score2_bits,
        }
    }

    pub fn rank(&self, class: ScoreClass) -> Option<usize> {
        match class {
            ScoreClass::Length => self.rank0,
            ScoreClass::Encoding => self.rank1,
            ScoreClass::CoOccurrence => self.rank2,
        }
    }
}

/// Class-0 score: `-log2` of the empirical probability of the transaction's
/// length. Lengths never seen in the histogram are smoothed to one
/// pseudo-count over `n + 1`.
pub fn score0(length: usize, hist: &LengthHistogram) -> f64 {
    let n = hist.total() as f64;
    let count = hist.count(length);
    if count == 0 {
        -(1.0 / (n + 1.0)).log2()
    } else {
        -((count as f64) / n).log2()
    }
}

/// Class-1 score: the encoded length of the transaction under the code
/// table. Covers that select a zero-usage entry (possible only for
/// transactions the table was not mined on) fall back to Laplace smoothing.
pub fn score1(transaction: &[u32], table: &CodeTable) -> f64 {
    match table.encoded_length(transaction) {
        Ok(bits) => bits,
        Err(Error::ZeroUsage { .. }) => table.encoded_length_smoothed(transaction),
        Err(_) => unreachable!("encoded_length only fails on zero usage"),
    }
}

/// Class-2 score for a single transaction: the maximum pair score over
/// distinct, disjoint patterns of `set` contained in the transaction, with
/// probabilities taken as supports in `d`. `None` when no eligible pair
/// exists.
pub fn score2(
    transaction: &[u32],
    set: &PatternSet,
    d: &Dataset,
) -> Result<Option<Score2Explanation>> {
    let mut sorted: Vec<u32> = transaction.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let contained: Vec<&Pattern> = set
        .patterns()
        .iter()
        .filter(|p| is_subset_sorted(&p.items, &sorted))
        .collect();
    let n = d.len();
    let mut best: Option<Score2Explanation> = None;
    for i in 0..contained.len() {
        let tids_a = d.support_tids(&contained[i].items)?;
        for j in i + 1..contained.len() {
            let (pa, pb) = (contained[i], contained[j]);
            if !is_disjoint_sorted(&pa.items, &pb.items) {
                continue;
            }
            let tids_b = d.support_tids(&pb.items)?;
            let sab = crate::dataset::intersect_sorted(&tids_a, &tids_b).len();
            let cand = explanation(&pa.items, tids_a.len(), &pb.items, tids_b.len(), sab, n);
            if better(&cand, &best) {
                best = Some(cand);
            }
        }
    }
    Ok(best)
}

/// Pair score in bits; `support_ab` of 0 yields +inf (the pair never occurs
/// in the reference data).
fn pair_bits(support_a: usize, support_b: usize, support_ab: usize, n: usize) -> f64 {
    let n = n as f64;
    -((support_ab as f64) / n).log2()
        + ((support_a as f64 / n) * (support_b as f64 / n)).log2()
}

fn explanation(
    items_a: &[u32],
    support_a: usize,
    items_b: &[u32],
    support_b: usize,
    support_ab: usize,
    n: usize,
) -> Score2Explanation {
    let bits = pair_bits(support_a, support_b, support_ab, n);
    // Canonical order inside the pair: lexicographically smaller first.
    let (pa, sa, pb, sb) = if items_a <= items_b {
        (items_a, support_a, items_b, support_b)
    } else {
        (items_b, support_b, items_a, support_a)
    };
    Score2Explanation {
        pattern_a: pa.to_vec(),
        pattern_b: pb.to_vec(),
        support_a: sa,
        support_b: sb,
        support_ab,
        score_bits: bits,
    }
}

/// Tie rule for competing pairs: higher score wins; exactly equal scores go
/// to the lexicographically smaller canonical pair.
fn better(cand: &Score2Explanation, best: &Option<Score2Explanation>) -> bool {
    match best {
        None => true,
        Some(b) => {
            if cand.score_bits != b.score_bits {
                cand.score_bits > b.score_bits
            } else {
                (&cand.pattern_a, &cand.pattern_b) < (&b.pattern_a, &b.pattern_b)
            }
        }
    }
}

/// Batch class-2 scorer. Pattern supports are computed against the scored
/// dataset once; per-transaction candidate pairs are enumerated only over the
/// patterns actually contained in each transaction.
pub struct Class2Scorer<'a> {
    d: &'a Dataset,
    items: Vec<&'a [u32]>,
    tids: Vec<Vec<u32>>,
    contained: Vec<Vec<u32>>,
}

impl<'a> Class2Scorer<'a> {
    pub fn new(d: &'a Dataset, set: &'a PatternSet) -> Result<Self> {
        let mut items = Vec::with_capacity(set.len());
        let mut tids = Vec::with_capacity(set.len());
        for p in set.patterns() {
            items.push(p.items.as_slice());
            tids.push(d.support_tids(&p.items)?);
        }
        // Invert the tid lists into per-transaction containment lists.
        let mut contained = vec![Vec::new(); d.len()];
        for (pi, t) in tids.iter().enumerate() {
            for &tid in t {
                contained[tid as usize].push(pi as u32);
            }
        }
        Ok(Class2Scorer {
            d,
            items,
            tids,
            contained,
        })
    }

    fn eval_pair(&self, a: u32, b: u32) -> Option<Score2Explanation> {
        let (ia, ib) = (a as usize, b as usize);
        if !is_disjoint_sorted(self.items[ia], self.items[ib]) {
            return None;
        }
        let sab = intersect_len(&self.tids[ia], &self.tids[ib]);
        Some(explanation(
            self.items[ia],
            self.tids[ia].len(),
            self.items[ib],
            self.tids[ib].len(),
            sab,
            self.d.len(),
        ))
    }

    fn score_with_memo(
        &self,
        tid: usize,
        memo: &mut HashMap<(u32, u32), Option<Score2Explanation>>,
    ) -> Option<Score2Explanation> {
        let contained = &self.contained[tid];
        let mut best: Option<Score2Explanation> = None;
        for (i, &a) in contained.iter().enumerate() {
            for &b in &contained[i + 1..] {
                let key = (a.min(b), a.max(b));
                let cand = memo
                    .entry(key)
                    .or_insert_with(|| self.eval_pair(key.0, key.1));
                if let Some(cand) = cand {
                    if better(cand, &best) {
                        best = Some(cand.clone());
                    }
                }
            }
        }
        best
    }

    /// Scores every transaction; `None` entries had no eligible pair.
    pub fn score_all(&self) -> Vec<Option<Score2Explanation>> {
        (0..self.d.len())
            .into_par_iter()
            .map_with(
                HashMap::<(u32, u32), Option<Score2Explanation>>::new(),
                |memo, tid| self.score_with_memo(tid, memo),
            )
            .collect()
    }
}

/// Scores and ranks every transaction for the requested classes. Class 1
/// requires a code table; class 2 requires a pattern set. Rankings are
/// descending by score, ties broken by transaction id, and absent class-2
/// scores rank below every numeric score.
pub fn rank(
    d: &Dataset,
    set: Option<&PatternSet>,
    table: Option<&CodeTable>,
    classes: &[ScoreClass],
) -> Result<Vec<AnomalyReport>> {
    let mut reports: Vec<AnomalyReport> = (0..d.len()).map(AnomalyReport::empty).collect();

    if classes.contains(&ScoreClass::Length) {
        let hist = d.length_histogram();
        for (tid, r) in reports.iter_mut().enumerate() {
            r.score0_bits = Some(score0(d.transaction(tid).len(), &hist));
        }
    }

    if classes.contains(&ScoreClass::Encoding) {
        let table = table.ok_or_else(|| {
            Error::InvalidArgument(
                "class 1 needs a code table; mine one inline or pass a code-table file".into(),
            )
        })?;
        if table.alphabet_size() < d.alphabet_size() {
            return Err(Error::ItemOutOfRange {
                item: table.alphabet_size() as u32,
                alphabet_size: d.alphabet_size(),
            });
        }
        let bits: Vec<f64> = (0..d.len())
            .into_par_iter()
            .map(|tid| score1(d.transaction(tid), table))
            .collect();
        for (r, b) in reports.iter_mut().zip(bits) {
            r.score1_bits = Some(b);
        }
    }

    if classes.contains(&ScoreClass::CoOccurrence) {
        let set = set.ok_or_else(|| {
            Error::InvalidArgument("class 2 needs a pattern set; mine one or pass a file".into())
        })?;
        let scorer = Class2Scorer::new(d, set)?;
        for (r, s) in reports.iter_mut().zip(scorer.score_all()) {
            if let Some(expl) = s {
                r.score2_bits = Some(expl.score_bits);
                r.explanation = Some(expl);
            }
        }
    }

    for &class in classes {
        let order = order_by_class(&reports, class);
        for (pos, &tid) in order.iter().enumerate() {
            match class {
                ScoreClass::Length => reports[tid].rank0 = Some(pos + 1),
                ScoreClass::Encoding => reports[tid].rank1 = Some(pos + 1),
                ScoreClass::CoOccurrence => reports[tid].rank2 = Some(pos + 1),
            }
        }
    }
    Ok(reports)
}

/// Transaction ids ordered by descending score for one class; `None` scores
/// sort after every numeric score, ties go to the lower transaction id.
pub fn order_by_class(reports: &[AnomalyReport], class: ScoreClass) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..reports.len()).collect();
    ids.sort_by(|&a, &b| {
        let (sa, sb) = (reports[a].score(class), reports[b].score(class));
        match (sa, sb) {
            (Some(x), Some(y)) => y.total_cmp(&x).then(a.cmp(&b)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.cmp(&b),
        }
    });
    ids
}
