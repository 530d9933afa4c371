//! Pattern sets and MDL code tables.
//!
//! Two miners produce the candidate pattern set for co-occurrence scoring: a
//! code-table miner that greedily minimizes the total encoded size of the
//! data (the default, yielding a small descriptive set), and a closed
//! frequent itemset miner (the brute-force baseline). Code tables also back
//! the class-1 score through per-transaction encoded lengths.

mod closed;
mod slim;

pub use closed::mine_closed;
pub use slim::mine_mdl;

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dataset::{is_subset_sorted, Dataset};
use crate::error::{Error, Result};

/// An itemset with its dataset support and, for code-table entries, the
/// number of transaction covers that use it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub items: Vec<u32>,
    pub support: usize,
    #[serde(default)]
    pub usage: usize,
}

impl Pattern {
    pub fn new(mut items: Vec<u32>, support: usize, usage: usize) -> Self {
        items.sort_unstable();
        items.dedup();
        Pattern {
            items,
            support,
            usage,
        }
    }

    pub fn is_singleton(&self) -> bool {
        self.items.len() == 1
    }
}

/// Standard cover order: larger itemsets first, then higher support, then
/// lexicographically smaller item ids. Total and strict for distinct itemsets.
pub fn cover_order(a: &Pattern, b: &Pattern) -> Ordering {
    b.items
        .len()
        .cmp(&a.items.len())
        .then(b.support.cmp(&a.support))
        .then(a.items.cmp(&b.items))
}

/// Where a pattern set came from; affects nothing but reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternSource {
    Mdl,
    Closed,
    Explicit,
}

/// A duplicate-free collection of patterns used as the candidate set for
/// pair scoring.
#[derive(Debug, Clone)]
pub struct PatternSet {
    patterns: Vec<Pattern>,
    source: PatternSource,
}

impl PatternSet {
    /// Builds a set from patterns, sorting them lexicographically by items.
    /// Rejects empty itemsets and duplicates.
    pub fn new(mut patterns: Vec<Pattern>, source: PatternSource) -> Result<Self> {
        patterns.sort_by(|a, b| a.items.cmp(&b.items));
        for pair in patterns.windows(2) {
            if pair[0].items == pair[1].items {
                return Err(Error::InvalidConfig(format!(
                    "duplicate pattern {:?}",
                    pair[0].items
                )));
            }
        }
        if patterns.iter().any(|p| p.items.is_empty()) {
            return Err(Error::InvalidConfig("empty itemset in pattern set".into()));
        }
        Ok(PatternSet { patterns, source })
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    pub fn source(&self) -> PatternSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn non_singleton_count(&self) -> usize {
        self.patterns.iter().filter(|p| !p.is_singleton()).count()
    }

    /// Recomputes every pattern's support against `d`. Pair scores are
    /// defined over the scored dataset, so supports loaded from a file are
    /// refreshed before use.
    pub fn with_supports_from(mut self, d: &Dataset) -> Result<Self> {
        for p in &mut self.patterns {
            p.support = d.support(&p.items)?;
        }
        Ok(self)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.patterns)?)
    }

    pub fn from_json(json: &str, source: PatternSource) -> Result<Self> {
        let patterns: Vec<Pattern> = serde_json::from_str(json)?;
        PatternSet::new(patterns, source)
    }
}

/// An ordered code table: all singletons plus mined patterns, sorted by the
/// standard cover order, each entry carrying its cover usage. Codes are
/// Shannon codes over usage frequencies.
#[derive(Debug, Clone)]
pub struct CodeTable {
    entries: Vec<Pattern>,
    total_usage: usize,
    alphabet_size: usize,
}

impl CodeTable {
    /// Validates and orders entries. Every item of the alphabet must appear
    /// as a singleton entry; itemsets must be unique.
    pub fn new(mut entries: Vec<Pattern>, alphabet_size: usize) -> Result<Self> {
        let mut seen_singleton = vec![false; alphabet_size];
        let mut itemsets: HashSet<&[u32]> = HashSet::with_capacity(entries.len());
        for e in &entries {
            if e.items.is_empty() {
                return Err(Error::InvalidConfig("empty itemset in code table".into()));
            }
            if let Some(&max) = e.items.last() {
                if max as usize >= alphabet_size {
                    return Err(Error::ItemOutOfRange {
                        item: max,
                        alphabet_size,
                    });
                }
            }
            if e.items.len() == 1 {
                seen_singleton[e.items[0] as usize] = true;
            }
        }
        for e in &entries {
            if !itemsets.insert(&e.items) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate code table entry {:?}",
                    e.items
                )));
            }
        }
        if let Some(missing) = seen_singleton.iter().position(|&s| !s) {
            return Err(Error::MissingSingleton {
                item: missing as u32,
            });
        }
        drop(itemsets);
        entries.sort_by(cover_order);
        let total_usage = entries.iter().map(|e| e.usage).sum();
        Ok(CodeTable {
            entries,
            total_usage,
            alphabet_size,
        })
    }

    /// Singleton-only code table for `d`: one entry per alphabet item with
    /// usage equal to its support (the cover of every transaction is its own
    /// items).
    pub fn singletons(d: &Dataset) -> CodeTable {
        let entries: Vec<Pattern> = (0..d.alphabet_size() as u32)
            .map(|i| {
                let support = d.tids(i).len();
                Pattern::new(vec![i], support, support)
            })
            .collect();
        CodeTable::new(entries, d.alphabet_size()).expect("singleton table is always valid")
    }

    pub fn entries(&self) -> &[Pattern] {
        &self.entries
    }

    pub fn total_usage(&self) -> usize {
        self.total_usage
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn non_singletons(&self) -> impl Iterator<Item = &Pattern> {
        self.entries.iter().filter(|e| !e.is_singleton())
    }

    pub fn non_singleton_count(&self) -> usize {
        self.non_singletons().count()
    }

    /// Greedy cover: walk entries in standard cover order, take every entry
    /// that fits inside the not-yet-covered items. The singletons guarantee
    /// the result is a disjoint partition of the transaction.
    pub fn cover(&self, transaction: &[u32]) -> Vec<&Pattern> {
        let mut remaining: Vec<u32> = transaction.to_vec();
        remaining.sort_unstable();
        remaining.dedup();
        let mut out = Vec::new();
        for e in &self.entries {
            if remaining.is_empty() {
                break;
            }
            if e.items.len() > remaining.len() {
                continue;
            }
            if is_subset_sorted(&e.items, &remaining) {
                remaining.retain(|i| !e.items.contains(i));
                out.push(e);
            }
        }
        debug_assert!(remaining.is_empty(), "singletons must complete the cover");
        out
    }

    /// Bits to encode `transaction`: the sum of the cover patterns' code
    /// lengths `-log2(usage / total_usage)`. Errors when a zero-usage entry
    /// is selected; callers scoring unseen data should use
    /// [`CodeTable::encoded_length_smoothed`].
    pub fn encoded_length(&self, transaction: &[u32]) -> Result<f64> {
        let total = self.total_usage as f64;
        let mut bits = 0.0;
        for p in self.cover(transaction) {
            if p.usage == 0 {
                return Err(Error::ZeroUsage {
                    pattern: format!("{:?}", p.items),
                });
            }
            bits += -(p.usage as f64 / total).log2();
        }
        Ok(bits)
    }

    /// Encoded length under Laplace smoothing: every entry's usage is read
    /// as `usage + 1` over `total_usage + number of entries`, so unseen
    /// transactions always get a finite length.
    pub fn encoded_length_smoothed(&self, transaction: &[u32]) -> f64 {
        let total = (self.total_usage + self.entries.len()) as f64;
        self.cover(transaction)
            .iter()
            .map(|p| -((p.usage + 1) as f64 / total).log2())
            .sum()
    }

    /// Total encoded size `(model_bits, data_bits)` of this table on `d`.
    /// The model side charges every used entry its own Shannon code plus its
    /// items' singleton codes under the singleton-only table of `d`; the data
    /// side is the sum of transaction encoded lengths.
    pub fn encoded_size(&self, d: &Dataset) -> Result<(f64, f64)> {
        let st = standard_codes(d);
        let total = self.total_usage as f64;
        let mut model_bits = 0.0;
        for e in &self.entries {
            if e.usage == 0 {
                continue;
            }
            let item_bits: f64 = e.items.iter().map(|&i| st[i as usize]).sum();
            model_bits += item_bits + -(e.usage as f64 / total).log2();
        }
        let mut data_bits = 0.0;
        for t in d.transactions() {
            data_bits += self.encoded_length(t)?;
        }
        Ok((model_bits, data_bits))
    }

    /// All entries as a pattern set (the candidate set for pair scoring:
    /// singletons included).
    pub fn to_pattern_set(&self) -> PatternSet {
        PatternSet::new(self.entries.clone(), PatternSource::Mdl)
            .expect("code table entries are valid patterns")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.entries)?)
    }

    /// Loads a table from its JSON form. The alphabet is taken from the
    /// singleton entries present.
    pub fn from_json(json: &str) -> Result<Self> {
        let entries: Vec<Pattern> = serde_json::from_str(json)?;
        let alphabet_size = entries
            .iter()
            .flat_map(|e| e.items.iter())
            .map(|&i| i as usize + 1)
            .max()
            .unwrap_or(0);
        CodeTable::new(entries, alphabet_size)
    }
}

/// Per-item singleton code lengths on `d`: `-log2(support / total item
/// occurrences)`. Items that never occur get an infinite code; they are never
/// charged because only used entries enter a model size.
pub(crate) fn standard_codes(d: &Dataset) -> Vec<f64> {
    let total: usize = (0..d.alphabet_size() as u32).map(|i| d.tids(i).len()).sum();
    (0..d.alphabet_size() as u32)
        .map(|i| {
            let sup = d.tids(i).len();
            if sup == 0 {
                f64::INFINITY
            } else {
                -((sup as f64) / (total as f64)).log2()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ct(entries: Vec<(Vec<u32>, usize, usize)>, alphabet: usize) -> CodeTable {
        let entries = entries
            .into_iter()
            .map(|(items, support, usage)| Pattern::new(items, support, usage))
            .collect();
        CodeTable::new(entries, alphabet).unwrap()
    }

    /// Reference cover: repeatedly scan the ordered entries with plain set
    /// operations. Kept deliberately naive and separate from the greedy
    /// implementation above.
    fn brute_force_cover(transaction: &[u32], table: &CodeTable) -> Vec<Vec<u32>> {
        use std::collections::BTreeSet;
        let mut uncovered: BTreeSet<u32> = transaction.iter().copied().collect();
        let mut out = Vec::new();
        for e in table.entries() {
            let fits = e.items.iter().all(|i| uncovered.contains(i));
            if fits && !e.items.is_empty() {
                for i in &e.items {
                    uncovered.remove(i);
                }
                out.push(e.items.clone());
            }
        }
        assert!(uncovered.is_empty());
        out
    }

    #[test]
    fn cover_prefers_larger_entries() {
        // {1,2} (size 2) precedes the singletons.
        let table = ct(
            vec![
                (vec![1, 2], 2, 2),
                (vec![0], 1, 1),
                (vec![1], 2, 0),
                (vec![2], 2, 0),
                (vec![3], 1, 1),
            ],
            4,
        );
        let cover: Vec<_> = table.cover(&[1, 2, 3]).iter().map(|p| p.items.clone()).collect();
        assert_eq!(cover, vec![vec![1, 2], vec![3]]);
    }

    #[test]
    fn cover_singletons_only() {
        let table = ct(vec![(vec![0], 1, 1), (vec![1], 3, 3)], 2);
        let cover: Vec<_> = table.cover(&[1]).iter().map(|p| p.items.clone()).collect();
        assert_eq!(cover, vec![vec![1]]);
    }

    #[test]
    fn cover_blocked_overlap() {
        // {1,3} is taken first, so {2,3} is blocked by the covered 3 and the
        // leftover 2 falls to its singleton.
        let table = ct(
            vec![
                (vec![1, 3], 5, 4),
                (vec![2, 3], 5, 1),
                (vec![0], 0, 0),
                (vec![1], 6, 1),
                (vec![2], 6, 2),
                (vec![3], 6, 0),
            ],
            4,
        );
        let cover: Vec<_> = table.cover(&[1, 2, 3]).iter().map(|p| p.items.clone()).collect();
        assert_eq!(cover, vec![vec![1, 3], vec![2]]);
        assert_eq!(brute_force_cover(&[1, 2, 3], &table), cover);
    }

    #[test]
    fn encoded_length_examples() {
        // Single entry covering everything: 0 bits.
        let table = ct(vec![(vec![1], 10, 10), (vec![0], 0, 0)], 2);
        assert!(table.encoded_length(&[1]).unwrap().abs() < 1e-12);

        // Two half-usage entries: 1 bit each.
        let table = ct(vec![(vec![0], 5, 5), (vec![1], 5, 5)], 2);
        assert!((table.encoded_length(&[0, 1]).unwrap() - 2.0).abs() < 1e-12);

        // Usages 3 and 1 of total 8.
        let table = ct(
            vec![(vec![0, 1], 3, 3), (vec![2], 1, 1), (vec![0], 4, 4), (vec![1], 3, 0)],
            3,
        );
        let bits = table.encoded_length(&[0, 1, 2]).unwrap();
        let expected = -(3.0f64 / 8.0).log2() + -(1.0f64 / 8.0).log2();
        assert!((bits - expected).abs() < 1e-12);
        assert!((bits - 4.415037499278844).abs() < 1e-9);
    }

    #[test]
    fn encoded_length_zero_usage_errors() {
        let table = ct(vec![(vec![0], 5, 5), (vec![1], 3, 0)], 2);
        assert!(matches!(
            table.encoded_length(&[0, 1]),
            Err(Error::ZeroUsage { .. })
        ));
        // Smoothed form stays finite: both codes read (usage+1)/(total+2).
        let bits = table.encoded_length_smoothed(&[0, 1]);
        let expected = -(6.0f64 / 7.0).log2() + -(1.0f64 / 7.0).log2();
        assert!((bits - expected).abs() < 1e-12);
    }

    #[test]
    fn code_table_requires_singletons() {
        let err = CodeTable::new(vec![Pattern::new(vec![0], 1, 1)], 2).unwrap_err();
        assert!(matches!(err, Error::MissingSingleton { item: 1 }));
    }

    #[test]
    fn pattern_set_rejects_duplicates() {
        let err = PatternSet::new(
            vec![Pattern::new(vec![1, 2], 3, 0), Pattern::new(vec![2, 1], 3, 0)],
            PatternSource::Explicit,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
    }

    #[test]
    fn code_table_json_round_trip() {
        let table = ct(
            vec![(vec![0, 1], 3, 3), (vec![0], 4, 1), (vec![1], 3, 0), (vec![2], 2, 2)],
            3,
        );
        let json = table.to_json().unwrap();
        let back = CodeTable::from_json(&json).unwrap();
        assert_eq!(back.entries(), table.entries());
        assert_eq!(back.total_usage(), table.total_usage());
    }

    proptest! {
        /// The cover is a disjoint partition of the transaction, and matches
        /// the naive reference cover.
        #[test]
        fn cover_partitions_transaction(
            txs in prop::collection::vec(prop::collection::vec(0u32..8, 1..6), 1..12),
            t in prop::collection::vec(0u32..8, 1..8),
        ) {
            let d = crate::dataset::Dataset::from_transactions(txs, 8).unwrap();
            let table = mine_mdl(&d, 1);
            let mut t = t;
            t.sort_unstable();
            t.dedup();
            let cover = table.cover(&t);
            let mut union: Vec<u32> = cover.iter().flat_map(|p| p.items.iter().copied()).collect();
            union.sort_unstable();
            let mut sorted = union.clone();
            sorted.dedup();
            // disjoint: no duplicates in the concatenation
            prop_assert_eq!(&union, &sorted);
            // complete: union equals the transaction
            prop_assert_eq!(union, t.clone());
            // agrees with the reference cover
            let naive = brute_force_cover(&t, &table);
            let got: Vec<Vec<u32>> = cover.iter().map(|p| p.items.clone()).collect();
            prop_assert_eq!(got, naive);
        }
    }
}
