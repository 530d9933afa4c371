//! In-memory model for transaction and categorical data.
//!
//! Transactions are sets of item ids over a dense alphabet `0..alphabet_size`.
//! Categorical data is mapped onto the same representation by giving every
//! (attribute, value) pair its own item id, so one transaction carries exactly
//! one item per attribute. Alongside the row-wise transactions the dataset
//! keeps a vertical index (per-item transaction-id lists); support counting is
//! tid-list intersection, which is what keeps the all-pairs co-occurrence
//! scores cheap.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One attribute of a categorical schema: its name and the contiguous range
/// of item ids holding its values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    /// First item id of this attribute's value range.
    pub first_item: u32,
    /// Number of distinct values (the range is `first_item..first_item + domain_size`).
    pub domain_size: u32,
}

impl Attribute {
    pub fn contains(&self, item: u32) -> bool {
        item >= self.first_item && item < self.first_item + self.domain_size
    }
}

/// An immutable collection of transactions over a fixed item alphabet.
#[derive(Debug, Clone)]
pub struct Dataset {
    transactions: Vec<Vec<u32>>,
    alphabet_size: usize,
    tid_lists: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
    schema: Option<Vec<Attribute>>,
}

impl Dataset {
    /// Builds a dataset from raw transactions. Items are deduplicated and
    /// sorted; every id must be below `alphabet_size`.
    pub fn from_transactions(mut transactions: Vec<Vec<u32>>, alphabet_size: usize) -> Result<Self> {
        for t in &mut transactions {
            t.sort_unstable();
            t.dedup();
            if let Some(&max) = t.last() {
                if max as usize >= alphabet_size {
                    return Err(Error::ItemOutOfRange {
                        item: max,
                        alphabet_size,
                    });
                }
            }
        }
        Ok(Self::from_parts(transactions, alphabet_size, None, None))
    }

    /// Internal constructor; callers guarantee transactions are sorted,
    /// deduplicated and within the alphabet.
    pub(crate) fn from_parts(
        transactions: Vec<Vec<u32>>,
        alphabet_size: usize,
        labels: Option<Vec<String>>,
        schema: Option<Vec<Attribute>>,
    ) -> Self {
        let mut tid_lists = vec![Vec::new(); alphabet_size];
        for (tid, t) in transactions.iter().enumerate() {
            for &item in t {
                tid_lists[item as usize].push(tid as u32);
            }
        }
        Dataset {
            transactions,
            alphabet_size,
            tid_lists,
            labels,
            schema,
        }
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn transaction(&self, id: usize) -> &[u32] {
        &self.transactions[id]
    }

    pub fn transactions(&self) -> impl Iterator<Item = &[u32]> {
        self.transactions.iter().map(|t| t.as_slice())
    }

    /// Sorted list of transaction ids containing `item`.
    pub fn tids(&self, item: u32) -> &[u32] {
        &self.tid_lists[item as usize]
    }

    pub fn schema(&self) -> Option<&[Attribute]> {
        self.schema.as_deref()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Human-readable name for an item: its label when one is known,
    /// otherwise the bare id.
    pub fn item_name(&self, item: u32) -> String {
        match &self.labels {
            Some(labels) => labels
                .get(item as usize)
                .cloned()
                .unwrap_or_else(|| item.to_string()),
            None => item.to_string(),
        }
    }

    /// Renders an itemset like `{a, b}` using labels when available.
    pub fn render_itemset(&self, items: &[u32]) -> String {
        let names: Vec<String> = items.iter().map(|&i| self.item_name(i)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Number of transactions containing every item of `items`.
    /// The empty itemset is contained in every transaction.
    pub fn support(&self, items: &[u32]) -> Result<usize> {
        Ok(self.support_tids(items)?.len())
    }

    /// Tid list of the transactions containing every item of `items`
    /// (the whole dataset for the empty itemset).
    pub fn support_tids(&self, items: &[u32]) -> Result<Vec<u32>> {
        for &item in items {
            if item as usize >= self.alphabet_size {
                return Err(Error::ItemOutOfRange {
                    item,
                    alphabet_size: self.alphabet_size,
                });
            }
        }
        if items.is_empty() {
            return Ok((0..self.transactions.len() as u32).collect());
        }
        // Intersect starting from the shortest list so dead ends exit early.
        let mut lists: Vec<&[u32]> = items.iter().map(|&i| self.tids(i)).collect();
        lists.sort_by_key(|l| l.len());
        let mut acc: Vec<u32> = lists[0].to_vec();
        for list in &lists[1..] {
            acc = intersect_sorted(&acc, list);
            if acc.is_empty() {
                break;
            }
        }
        Ok(acc)
    }

    /// Counts transactions per length. The counts sum to `len()`.
    pub fn length_histogram(&self) -> LengthHistogram {
        let mut counts = BTreeMap::new();
        for t in &self.transactions {
            *counts.entry(t.len()).or_insert(0usize) += 1;
        }
        LengthHistogram {
            counts,
            total: self.transactions.len(),
        }
    }

    /// Draws `len()` transactions with replacement, keeping the alphabet and
    /// schema. `exclude` drops one transaction from the pool before sampling.
    pub fn resample<R: rand::Rng>(&self, rng: &mut R, exclude: Option<usize>) -> Dataset {
        let pool: Vec<usize> = match exclude {
            Some(skip) => (0..self.len()).filter(|&i| i != skip).collect(),
            None => (0..self.len()).collect(),
        };
        let drawn: Vec<Vec<u32>> = (0..self.len())
            .map(|_| self.transactions[pool[rng.gen_range(0..pool.len())]].clone())
            .collect();
        Dataset::from_parts(
            drawn,
            self.alphabet_size,
            self.labels.clone(),
            self.schema.clone(),
        )
    }

    /// Writes one transaction per line, space-separated item ids.
    pub fn write_fimi<W: Write>(&self, mut out: W) -> Result<()> {
        for t in &self.transactions {
            let line: Vec<String> = t.iter().map(|i| i.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Writes categorical data back to CSV (header row, then one value per
    /// attribute per row). Requires a schema.
    pub fn write_categorical_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let schema = self
            .schema
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("dataset has no categorical schema".into()))?;
        let names: Vec<&str> = schema.iter().map(|a| a.name.as_str()).collect();
        writeln!(out, "{}", names.join(","))?;
        let labels = self.labels.as_ref().expect("categorical data carries labels");
        for t in &self.transactions {
            let mut row = Vec::with_capacity(schema.len());
            for (attr, &item) in schema.iter().zip(t.iter()) {
                debug_assert!(attr.contains(item));
                // Stored label is "attr=value"; the CSV cell is just the value.
                let label = &labels[item as usize];
                let value = label.split_once('=').map(|(_, v)| v).unwrap_or(label);
                row.push(value.to_string());
            }
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Item label table as JSON (map from item id to label).
    pub fn label_table_json(&self) -> Result<String> {
        let map: BTreeMap<u32, &str> = match &self.labels {
            Some(labels) => labels
                .iter()
                .enumerate()
                .map(|(i, l)| (i as u32, l.as_str()))
                .collect(),
            None => BTreeMap::new(),
        };
        Ok(serde_json::to_string_pretty(&map)?)
    }

    /// Attaches a label table loaded from JSON (map from item id to label).
    pub fn set_labels_from_json(&mut self, json: &str) -> Result<()> {
        let map: BTreeMap<u32, String> = serde_json::from_str(json)?;
        let mut labels = vec![String::new(); self.alphabet_size];
        for (id, label) in map {
            if id as usize >= self.alphabet_size {
                return Err(Error::ItemOutOfRange {
                    item: id,
                    alphabet_size: self.alphabet_size,
                });
            }
            labels[id as usize] = label;
        }
        for (id, label) in labels.iter_mut().enumerate() {
            if label.is_empty() {
                *label = id.to_string();
            }
        }
        self.labels = Some(labels);
        Ok(())
    }
}

/// Transaction-length counts; feeds the class-0 score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthHistogram {
    counts: BTreeMap<usize, usize>,
    total: usize,
}

impl LengthHistogram {
    pub fn count(&self, length: usize) -> usize {
        self.counts.get(&length).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&l, &c)| (l, c))
    }
}

/// Intersection of two sorted, duplicate-free id lists.
pub(crate) fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Size of the intersection of two sorted, duplicate-free id lists.
pub(crate) fn intersect_len(a: &[u32], b: &[u32]) -> usize {
    let mut count = 0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// True when the sorted slice `sub` is a subset of the sorted slice `sup`.
pub(crate) fn is_subset_sorted(sub: &[u32], sup: &[u32]) -> bool {
    let mut j = 0;
    for &x in sub {
        loop {
            if j == sup.len() {
                return false;
            }
            match sup[j].cmp(&x) {
                std::cmp::Ordering::Less => j += 1,
                std::cmp::Ordering::Equal => {
                    j += 1;
                    break;
                }
                std::cmp::Ordering::Greater => return false,
            }
        }
    }
    true
}

/// True when two sorted slices share no element.
pub(crate) fn is_disjoint_sorted(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Parses FIMI-style transaction data: one transaction per line,
/// whitespace-separated non-negative item ids. Duplicate items within a line
/// collapse to one. The alphabet is `1 + max item id` (0 for an empty file).
pub fn parse_fimi<R: BufRead>(reader: R) -> Result<Dataset> {
    let mut transactions = Vec::new();
    let mut max_item: Option<u32> = None;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let mut items = Vec::new();
        for token in line.split_whitespace() {
            let item: u32 = token.parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("expected a non-negative integer item id, found {token:?}"),
            })?;
            items.push(item);
        }
        if line.trim().is_empty() {
            continue;
        }
        items.sort_unstable();
        items.dedup();
        if let Some(&m) = items.last() {
            max_item = Some(max_item.map_or(m, |cur| cur.max(m)));
        }
        transactions.push(items);
    }
    let alphabet_size = max_item.map_or(0, |m| m as usize + 1);
    Ok(Dataset::from_parts(transactions, alphabet_size, None, None))
}

/// Parses categorical CSV data. Every row must have the same number of
/// columns and no empty cells. Each distinct (column, value) pair becomes an
/// item; ids are contiguous per column, values numbered in order of first
/// appearance. Labels are stored as `attribute=value`.
pub fn parse_categorical_csv<R: BufRead>(reader: R, has_header: bool) -> Result<Dataset> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut n_columns: Option<usize> = None;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        let cells: Vec<String> = line.split(',').map(|c| c.to_string()).collect();
        if has_header && header.is_none() {
            n_columns = Some(cells.len());
            header = Some(cells);
            continue;
        }
        let expected = *n_columns.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(Error::RaggedRow {
                row: lineno + 1,
                expected,
                found: cells.len(),
            });
        }
        for (col, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::EmptyValue {
                    row: lineno + 1,
                    column: col + 1,
                });
            }
        }
        rows.push(cells);
    }

    let n_columns = n_columns.unwrap_or(0);
    let column_names: Vec<String> = match header {
        Some(names) => names,
        None => (0..n_columns).map(|c| format!("col{c}")).collect(),
    };

    // First pass fixes every column's value order (first appearance), second
    // pass assigns contiguous id ranges per column and maps the rows.
    let mut column_values: Vec<Vec<String>> = vec![Vec::new(); n_columns];
    for row in &rows {
        for (col, cell) in row.iter().enumerate() {
            if !column_values[col].iter().any(|v| v == cell) {
                column_values[col].push(cell.clone());
            }
        }
    }

    let mut schema = Vec::with_capacity(n_columns);
    let mut labels = Vec::new();
    let mut first_item = 0u32;
    for (col, values) in column_values.iter().enumerate() {
        schema.push(Attribute {
            name: column_names[col].clone(),
            first_item,
            domain_size: values.len() as u32,
        });
        for v in values {
            labels.push(format!("{}={}", column_names[col], v));
        }
        first_item += values.len() as u32;
    }
    let alphabet_size = first_item as usize;

    let transactions: Vec<Vec<u32>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(col, cell)| {
                    let offset = column_values[col].iter().position(|v| v == cell).unwrap();
                    schema[col].first_item + offset as u32
                })
                .collect()
        })
        .collect();

    Ok(Dataset::from_parts(
        transactions,
        alphabet_size,
        Some(labels),
        Some(schema),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Cursor;

    fn fimi(text: &str) -> Dataset {
        parse_fimi(Cursor::new(text)).unwrap()
    }

    #[test]
    fn parse_fimi_basic() {
        let d = fimi("1 2 3\n2 4\n");
        assert_eq!(d.len(), 2);
        assert_eq!(d.transaction(0), &[1, 2, 3]);
        assert_eq!(d.transaction(1), &[2, 4]);
        assert_eq!(d.alphabet_size(), 5);
    }

    #[test]
    fn parse_fimi_empty() {
        let d = fimi("");
        assert_eq!(d.len(), 0);
        assert_eq!(d.alphabet_size(), 0);
    }

    #[test]
    fn parse_fimi_deduplicates() {
        let d = fimi("7 7 7\n");
        assert_eq!(d.len(), 1);
        assert_eq!(d.transaction(0), &[7]);
        assert_eq!(d.alphabet_size(), 8);
    }

    #[test]
    fn parse_fimi_crlf_and_bad_token() {
        let d = fimi("1 2\r\n3\r\n");
        assert_eq!(d.len(), 2);
        assert_eq!(d.transaction(0), &[1, 2]);

        let err = parse_fimi(Cursor::new("1 x\n")).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_csv_maps_column_value_pairs() {
        let d = parse_categorical_csv(Cursor::new("a,x\nb,x\n"), false).unwrap();
        assert_eq!(d.alphabet_size(), 3);
        assert_eq!(d.len(), 2);
        assert_eq!(d.transaction(0).len(), 2);
        assert_eq!(d.transaction(1).len(), 2);
        let schema = d.schema().unwrap();
        assert_eq!(schema.len(), 2);
        assert_eq!(schema[0].domain_size, 2);
        assert_eq!(schema[1].domain_size, 1);
        assert_eq!(d.item_name(0), "col0=a");
        assert_eq!(d.item_name(2), "col1=x");
    }

    #[test]
    fn parse_csv_single_column() {
        let d = parse_categorical_csv(Cursor::new("a\na\na\n"), false).unwrap();
        assert_eq!(d.alphabet_size(), 1);
        assert_eq!(d.len(), 3);
        for t in d.transactions() {
            assert_eq!(t, &[0]);
        }
    }

    #[test]
    fn parse_csv_ragged_row_errors() {
        let err = parse_categorical_csv(Cursor::new("a,b\nc\n"), false).unwrap_err();
        match err {
            Error::RaggedRow { row, .. } => assert_eq!(row, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_csv_empty_cell_errors() {
        let err = parse_categorical_csv(Cursor::new("a,b\nc,\n"), false).unwrap_err();
        match err {
            Error::EmptyValue { row, column } => {
                assert_eq!(row, 2);
                assert_eq!(column, 2);
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_csv_header() {
        let d = parse_categorical_csv(Cursor::new("size,color\nbig,red\nsmall,red\n"), true).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.item_name(0), "size=big");
        assert_eq!(d.schema().unwrap()[1].name, "color");
    }

    #[test]
    fn support_counts() {
        let d = fimi("1 2\n1\n2\n");
        assert_eq!(d.support(&[1]).unwrap(), 2);
        assert_eq!(d.support(&[1, 2]).unwrap(), 1);
        assert_eq!(d.support(&[]).unwrap(), 3);
    }

    #[test]
    fn support_out_of_alphabet_errors() {
        let d = fimi("1 2\n");
        assert!(matches!(
            d.support(&[9]).unwrap_err(),
            Error::ItemOutOfRange { item: 9, .. }
        ));
    }

    #[test]
    fn length_histogram_counts() {
        let d = fimi("1 2\n3 4\n5\n");
        let h = d.length_histogram();
        assert_eq!(h.count(2), 2);
        assert_eq!(h.count(1), 1);
        assert_eq!(h.count(7), 0);
        assert_eq!(h.total(), 3);

        assert_eq!(fimi("").length_histogram().total(), 0);

        let d = fimi("1 2 3\n1 2 3\n1 2 3\n1 2 3\n");
        let h = d.length_histogram();
        assert_eq!(h.count(3), 4);
    }

    #[test]
    fn label_table_round_trip() {
        let d = parse_categorical_csv(Cursor::new("a,x\nb,y\n"), false).unwrap();
        let json = d.label_table_json().unwrap();
        let mut plain = fimi("0 2\n1 3\n");
        plain.set_labels_from_json(&json).unwrap();
        assert_eq!(plain.item_name(0), "col0=a");
        assert_eq!(plain.render_itemset(&[0, 3]), "{col0=a, col1=y}");
    }

    fn arb_dataset() -> impl Strategy<Value = Vec<Vec<u32>>> {
        prop::collection::vec(prop::collection::vec(0u32..12, 0..8), 0..24)
    }

    proptest! {
        #[test]
        fn support_is_antimonotone(txs in arb_dataset(), x in prop::collection::vec(0u32..12, 1..4)) {
            let d = Dataset::from_transactions(txs, 12).unwrap();
            let mut x = x;
            x.sort_unstable();
            x.dedup();
            let sup_x = d.support(&x).unwrap();
            // Every subset has at least the support of the full set.
            for drop in 0..x.len() {
                let mut sub = x.clone();
                sub.remove(drop);
                prop_assert!(d.support(&sub).unwrap() >= sup_x);
            }
        }

        #[test]
        fn histogram_sums_to_len(txs in arb_dataset()) {
            let d = Dataset::from_transactions(txs, 12).unwrap();
            let h = d.length_histogram();
            let sum: usize = h.iter().map(|(_, c)| c).sum();
            prop_assert_eq!(sum, d.len());
        }

        #[test]
        fn fimi_round_trip(txs in prop::collection::vec(prop::collection::vec(0u32..12, 1..8), 0..24)) {
            let d = Dataset::from_transactions(txs, 12).unwrap();
            let mut buf = Vec::new();
            d.write_fimi(&mut buf).unwrap();
            let back = parse_fimi(Cursor::new(buf)).unwrap();
            prop_assert_eq!(back.len(), d.len());
            for (a, b) in back.transactions().zip(d.transactions()) {
                prop_assert_eq!(a, b);
            }
        }
    }
}
