//! Closed frequent itemset mining by depth-first tid-list intersection.
//!
//! A frequent itemset is closed when no proper superset has the same support.
//! The enumeration recurses on closures directly: a branch extends a closed
//! set with one item, intersects the tid lists, computes the closure of the
//! extension and prunes branches whose closure reaches back before the
//! extension item (those closures are generated on another path). Each closed
//! set is visited exactly once.

use crate::dataset::{intersect_sorted, is_subset_sorted, Dataset};
use crate::error::{Error, Result};
use crate::patterns::{Pattern, PatternSet, PatternSource};

/// Mines all closed itemsets with support at least
/// `ceil(min_support_fraction * |D|)`.
pub fn mine_closed(d: &Dataset, min_support_fraction: f64) -> Result<PatternSet> {
    if !(min_support_fraction > 0.0 && min_support_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "minimum support fraction must be in (0, 1], got {min_support_fraction}"
        )));
    }
    let mut out = Vec::new();
    if !d.is_empty() {
        let min_count = (min_support_fraction * d.len() as f64).ceil().max(1.0) as usize;
        let all_tids: Vec<u32> = (0..d.len() as u32).collect();
        let root = closure(d, &[], &all_tids);
        if !root.is_empty() {
            out.push(Pattern::new(root.clone(), all_tids.len(), 0));
        }
        extend(d, &root, &all_tids, 0, min_count, &mut out);
    }
    PatternSet::new(out, PatternSource::Closed)
}

fn extend(
    d: &Dataset,
    closed: &[u32],
    tids: &[u32],
    first_item: u32,
    min_count: usize,
    out: &mut Vec<Pattern>,
) {
    for item in first_item..d.alphabet_size() as u32 {
        if closed.binary_search(&item).is_ok() {
            continue;
        }
        let extended = intersect_sorted(tids, d.tids(item));
        if extended.len() < min_count {
            continue;
        }
        let next = closure(d, closed, &extended);
        // Prefix-preservation: a closure that pulls in an item below the
        // extension point (beyond what we already had) belongs to a branch
        // rooted earlier in item order.
        let new_low = next
            .iter()
            .any(|&j| j < item && closed.binary_search(&j).is_err());
        if new_low {
            continue;
        }
        out.push(Pattern::new(next.clone(), extended.len(), 0));
        extend(d, &next, &extended, item + 1, min_count, out);
    }
}

/// All items present in every transaction of `tids` (a superset of `base`).
fn closure(d: &Dataset, base: &[u32], tids: &[u32]) -> Vec<u32> {
    let mut items: Vec<u32> = (0..d.alphabet_size() as u32)
        .filter(|&j| is_subset_sorted(tids, d.tids(j)))
        .collect();
    debug_assert!(base.iter().all(|b| items.contains(b)));
    items.sort_unstable();
    items
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::parse_fimi;
    use proptest::prelude::*;
    use std::collections::BTreeMap;
    use std::io::Cursor;

    fn fimi(text: &str) -> Dataset {
        parse_fimi(Cursor::new(text)).unwrap()
    }

    fn mined(d: &Dataset, frac: f64) -> BTreeMap<Vec<u32>, usize> {
        mine_closed(d, frac)
            .unwrap()
            .patterns()
            .iter()
            .map(|p| (p.items.clone(), p.support))
            .collect()
    }

    /// Powerset oracle: enumerate every non-empty itemset, keep the frequent
    /// ones whose support no proper superset matches.
    pub(crate) fn brute_force_closed(d: &Dataset, frac: f64) -> BTreeMap<Vec<u32>, usize> {
        let n_items = d.alphabet_size();
        assert!(n_items <= 16, "oracle is exponential in the alphabet");
        let min_count = (frac * d.len() as f64).ceil().max(1.0) as usize;
        let mut supports: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for mask in 1u32..(1 << n_items) {
            let items: Vec<u32> = (0..n_items as u32).filter(|i| mask >> i & 1 == 1).collect();
            let support = d
                .transactions()
                .filter(|t| items.iter().all(|i| t.contains(i)))
                .count();
            if support >= min_count {
                supports.insert(items, support);
            }
        }
        supports
            .iter()
            .filter(|(items, &sup)| {
                !supports.iter().any(|(other, &osup)| {
                    osup == sup
                        && other.len() > items.len()
                        && items.iter().all(|i| other.contains(i))
                })
            })
            .map(|(items, &sup)| (items.clone(), sup))
            .collect()
    }

    #[test]
    fn closed_small_example() {
        let d = fimi("1 2\n1 2\n1\n");
        let got = mined(&d, 2.0 / 3.0);
        let expected: BTreeMap<Vec<u32>, usize> =
            [(vec![1], 3), (vec![1, 2], 2)].into_iter().collect();
        assert_eq!(got, expected);
        assert_eq!(got, brute_force_closed(&d, 2.0 / 3.0));
    }

    #[test]
    fn closed_nothing_frequent() {
        let d = fimi("1\n2\n");
        assert!(mined(&d, 1.0).is_empty());
    }

    #[test]
    fn closed_subsets_not_closed() {
        let d = fimi("1 2 3\n1 2 3\n1 2 3\n1 2 3\n");
        let got = mined(&d, 0.5);
        let expected: BTreeMap<Vec<u32>, usize> = [(vec![1, 2, 3], 4)].into_iter().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn closed_rejects_bad_fraction() {
        let d = fimi("1\n");
        assert!(mine_closed(&d, 0.0).is_err());
        assert!(mine_closed(&d, 1.5).is_err());
    }

    #[test]
    fn closed_empty_dataset() {
        let d = fimi("");
        assert!(mined(&d, 0.5).is_empty());
    }

    proptest! {
        #[test]
        fn closed_matches_powerset_oracle(
            txs in prop::collection::vec(prop::collection::vec(0u32..9, 0..7), 1..20),
            frac in 0.05f64..1.0,
        ) {
            let d = Dataset::from_transactions(txs, 9).unwrap();
            prop_assert_eq!(mined(&d, frac), brute_force_closed(&d, frac));
        }
    }
}
