//! Synthetic transaction and categorical data with a planted co-occurrence
//! anomaly.
//!
//! The generator draws a set of random patterns with target supports, plus
//! two high-support "anomaly generator" patterns that are placed so they
//! occur together in exactly one transaction (or none, for null data).
//! Pattern and noise additions are skipped whenever they would accidentally
//! create a second co-occurrence, so the ground truth is exact by
//! construction and verified by a full scan.

use rand::seq::index::sample as index_sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Attribute, Dataset};
use crate::error::{Error, Result};
use crate::patterns::mine_mdl;
use crate::scoring::Class2Scorer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataKind {
    Transaction,
    Categorical,
}

/// Parameters for both generators. For transaction data the item alphabet is
/// `alphabet_size`; for categorical data it is `n_attributes * domain_size`
/// with one value per attribute per transaction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub kind: DataKind,
    pub n_transactions: usize,
    #[serde(default)]
    pub alphabet_size: usize,
    #[serde(default)]
    pub n_attributes: usize,
    #[serde(default)]
    pub domain_size: usize,
    pub n_patterns: usize,
    /// Per-pattern target support drawn uniformly from this range.
    pub pattern_support_range: (f64, f64),
    /// Pattern sizes drawn uniformly from this inclusive range.
    pub pattern_size_range: (usize, usize),
    /// Target support of the two anomaly generators.
    pub generator_support: f64,
    /// Per-item noise probability.
    pub singleton_noise: f64,
    pub plant_anomaly: bool,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn transaction(n_transactions: usize, alphabet_size: usize, n_patterns: usize, seed: u64) -> Self {
        GeneratorConfig {
            kind: DataKind::Transaction,
            n_transactions,
            alphabet_size,
            n_attributes: 0,
            domain_size: 0,
            n_patterns,
            pattern_support_range: (0.05, 0.10),
            pattern_size_range: (3, 6),
            generator_support: 0.20,
            singleton_noise: 0.10,
            plant_anomaly: true,
            seed,
        }
    }

    pub fn categorical(
        n_transactions: usize,
        n_attributes: usize,
        domain_size: usize,
        n_patterns: usize,
        seed: u64,
    ) -> Self {
        GeneratorConfig {
            kind: DataKind::Categorical,
            n_transactions,
            alphabet_size: n_attributes * domain_size,
            n_attributes,
            domain_size,
            n_patterns,
            pattern_support_range: (0.05, 0.10),
            pattern_size_range: (3, 6),
            generator_support: 0.20,
            singleton_noise: 0.10,
            plant_anomaly: true,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.pattern_support_range;
        if !(lo > 0.0 && lo <= hi && hi < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "pattern support range must satisfy 0 < lo <= hi < 1, got [{lo}, {hi}]"
            )));
        }
        if !(self.generator_support > 0.0 && self.generator_support < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "generator support must be in (0, 1), got {}",
                self.generator_support
            )));
        }
        if !(0.0..1.0).contains(&self.singleton_noise) {
            return Err(Error::InvalidConfig(format!(
                "singleton noise must be in [0, 1), got {}",
                self.singleton_noise
            )));
        }
        let (smin, smax) = self.pattern_size_range;
        if smin < 2 || smin > smax {
            return Err(Error::InvalidConfig(format!(
                "pattern sizes must satisfy 2 <= min <= max, got [{smin}, {smax}]"
            )));
        }
        if self.n_transactions == 0 {
            return Err(Error::InvalidConfig("need at least one transaction".into()));
        }
        match self.kind {
            DataKind::Transaction => {
                if self.alphabet_size < 2 * smax {
                    return Err(Error::InvalidConfig(format!(
                        "alphabet of {} items cannot hold two disjoint patterns of up to {} items",
                        self.alphabet_size, smax
                    )));
                }
            }
            DataKind::Categorical => {
                if self.n_attributes < 2 * smax {
                    return Err(Error::InvalidConfig(format!(
                        "{} attributes cannot hold two attribute-disjoint patterns of up to {} items",
                        self.n_attributes, smax
                    )));
                }
                if self.domain_size < 2 {
                    return Err(Error::InvalidConfig(
                        "attribute domains need at least 2 values".into(),
                    ));
                }
            }
        }
        let gen_count = self.generator_occurrences();
        let needed = if self.plant_anomaly {
            2 * gen_count - 1
        } else {
            2 * gen_count
        };
        if needed > self.n_transactions {
            return Err(Error::InvalidConfig(format!(
                "two generators at support {} need {needed} distinct transactions, only {} exist",
                self.generator_support, self.n_transactions
            )));
        }
        Ok(())
    }

    fn generator_occurrences(&self) -> usize {
        ((self.generator_support * self.n_transactions as f64).round() as usize).max(1)
    }
}

/// What was planted, for verification and experiment harnesses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub planted_patterns: Vec<PlantedPattern>,
    pub generator_a: Vec<u32>,
    pub generator_b: Vec<u32>,
    /// The single transaction containing both generators; absent for null
    /// data.
    pub anomaly_transaction_id: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlantedPattern {
    pub items: Vec<u32>,
    pub target_support: f64,
}

/// Number of transactions containing both itemsets; the ground-truth
/// verification scan.
pub fn co_occurrence_count(d: &Dataset, a: &[u32], b: &[u32]) -> usize {
    d.transactions()
        .filter(|t| a.iter().all(|i| t.contains(i)) && b.iter().all(|i| t.contains(i)))
        .count()
}

pub fn generate(cfg: &GeneratorConfig) -> Result<(Dataset, GroundTruth)> {
    match cfg.kind {
        DataKind::Transaction => generate_transaction_data(cfg),
        DataKind::Categorical => generate_categorical_data(cfg),
    }
}

/// Draws `k` distinct ids from `pool` in a deterministic order.
fn sample_from_pool<R: Rng>(rng: &mut R, pool: &[usize], k: usize) -> Vec<usize> {
    index_sample(rng, pool.len(), k)
        .into_iter()
        .map(|i| pool[i])
        .collect()
}

fn draw_itemset<R: Rng>(rng: &mut R, alphabet: usize, size_range: (usize, usize)) -> Vec<u32> {
    let size = rng.gen_range(size_range.0..=size_range.1);
    let mut items: Vec<u32> = index_sample(rng, alphabet, size)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    items.sort_unstable();
    items
}

const REDRAW_CAP: usize = 10_000;

pub fn generate_transaction_data(cfg: &GeneratorConfig) -> Result<(Dataset, GroundTruth)> {
    if cfg.kind != DataKind::Transaction {
        return Err(Error::InvalidConfig("config kind is not `transaction`".into()));
    }
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_transactions;
    let omega = cfg.alphabet_size;

    // Planted patterns, distinct itemsets.
    let mut planted: Vec<PlantedPattern> = Vec::with_capacity(cfg.n_patterns);
    let mut attempts = 0;
    while planted.len() < cfg.n_patterns {
        let items = draw_itemset(&mut rng, omega, cfg.pattern_size_range);
        let dup = planted.iter().any(|p| p.items == items);
        if dup {
            attempts += 1;
            if attempts > REDRAW_CAP {
                return Err(Error::InvalidConfig(format!(
                    "cannot draw {} distinct patterns from an alphabet of {omega}",
                    cfg.n_patterns
                )));
            }
            continue;
        }
        let target = rng.gen_range(cfg.pattern_support_range.0..=cfg.pattern_support_range.1);
        planted.push(PlantedPattern {
            items,
            target_support: target,
        });
    }

    // Two disjoint anomaly generators.
    let gen_a = draw_itemset(&mut rng, omega, cfg.pattern_size_range);
    let mut gen_b;
    let mut attempts = 0;
    loop {
        gen_b = draw_itemset(&mut rng, omega, cfg.pattern_size_range);
        if gen_b.iter().all(|i| !gen_a.contains(i)) {
            break;
        }
        attempts += 1;
        if attempts > REDRAW_CAP {
            return Err(Error::InvalidConfig(
                "cannot draw disjoint anomaly generators".into(),
            ));
        }
    }

    // Membership grid; rows[t][i] == true when transaction t holds item i.
    let mut rows = vec![vec![false; omega]; n];
    let set_items = |row: &mut Vec<bool>, items: &[u32]| {
        for &i in items {
            row[i as usize] = true;
        }
    };
    let contains = |row: &[bool], items: &[u32]| items.iter().all(|&i| row[i as usize]);

    // Generator placement: the designated anomaly transaction gets both;
    // remaining occurrences spread over disjoint transaction sets so the
    // co-occurrence count is exactly one (or zero).
    let occurrences = cfg.generator_occurrences();
    let anomaly_id = cfg.plant_anomaly.then(|| rng.gen_range(0..n));
    let (set_a, set_b) = match anomaly_id {
        Some(id) => {
            let pool: Vec<usize> = (0..n).filter(|&t| t != id).collect();
            let mut set_a = sample_from_pool(&mut rng, &pool, occurrences - 1);
            set_a.push(id);
            let pool_b: Vec<usize> = pool.iter().copied().filter(|t| !set_a.contains(t)).collect();
            let mut set_b = sample_from_pool(&mut rng, &pool_b, occurrences - 1);
            set_b.push(id);
            (set_a, set_b)
        }
        None => {
            let pool: Vec<usize> = (0..n).collect();
            let set_a = sample_from_pool(&mut rng, &pool, occurrences);
            let pool_b: Vec<usize> = pool.iter().copied().filter(|t| !set_a.contains(t)).collect();
            let set_b = sample_from_pool(&mut rng, &pool_b, occurrences);
            (set_a, set_b)
        }
    };
    for &t in &set_a {
        set_items(&mut rows[t], &gen_a);
    }
    for &t in &set_b {
        set_items(&mut rows[t], &gen_b);
    }

    // Pattern and noise placement. An addition is skipped when it would make
    // a transaction other than the designated one contain both generators.
    let mut guarded_add = |rows: &mut Vec<Vec<bool>>, t: usize, items: &[u32]| {
        if anomaly_id != Some(t) {
            let row = &rows[t];
            let would = |gen: &[u32]| {
                gen.iter().all(|&g| row[g as usize] || items.contains(&g))
            };
            if would(&gen_a) && would(&gen_b) {
                return;
            }
        }
        set_items(&mut rows[t], items);
    };
    for t in 0..n {
        for p in &planted {
            if rng.gen::<f64>() < p.target_support {
                guarded_add(&mut rows, t, &p.items);
            }
        }
        for i in 0..omega as u32 {
            if rng.gen::<f64>() < cfg.singleton_noise {
                guarded_add(&mut rows, t, &[i]);
            }
        }
    }

    let transactions: Vec<Vec<u32>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter_map(|(i, &on)| on.then_some(i as u32))
                .collect()
        })
        .collect();
    let d = Dataset::from_parts(transactions, omega, None, None);
    debug_assert_eq!(
        co_occurrence_count(&d, &gen_a, &gen_b),
        usize::from(cfg.plant_anomaly)
    );
    debug_assert!(anomaly_id.is_none_or(|id| contains(&rows[id], &gen_a)));
    let truth = GroundTruth {
        planted_patterns: planted,
        generator_a: gen_a,
        generator_b: gen_b,
        anomaly_transaction_id: anomaly_id,
        seed: cfg.seed,
    };
    Ok((d, truth))
}

/// Draws a pattern touching `size` distinct attributes, one value each.
fn draw_categorical_itemset<R: Rng>(
    rng: &mut R,
    n_attributes: usize,
    domain: usize,
    size_range: (usize, usize),
) -> Vec<u32> {
    let size = rng.gen_range(size_range.0..=size_range.1);
    let mut attrs: Vec<usize> = index_sample(rng, n_attributes, size).into_iter().collect();
    attrs.sort_unstable();
    attrs
        .into_iter()
        .map(|a| (a * domain + rng.gen_range(0..domain)) as u32)
        .collect()
}

pub fn generate_categorical_data(cfg: &GeneratorConfig) -> Result<(Dataset, GroundTruth)> {
    if cfg.kind != DataKind::Categorical {
        return Err(Error::InvalidConfig("config kind is not `categorical`".into()));
    }
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_transactions;
    let n_attrs = cfg.n_attributes;
    let domain = cfg.domain_size;
    let attr_of = |item: u32| item as usize / domain;

    let mut planted: Vec<PlantedPattern> = Vec::with_capacity(cfg.n_patterns);
    let mut attempts = 0;
    while planted.len() < cfg.n_patterns {
        let items = draw_categorical_itemset(&mut rng, n_attrs, domain, cfg.pattern_size_range);
        if planted.iter().any(|p| p.items == items) {
            attempts += 1;
            if attempts > REDRAW_CAP {
                return Err(Error::InvalidConfig(format!(
                    "cannot draw {} distinct patterns over {n_attrs} attributes",
                    cfg.n_patterns
                )));
            }
            continue;
        }
        let target = rng.gen_range(cfg.pattern_support_range.0..=cfg.pattern_support_range.1);
        planted.push(PlantedPattern {
            items,
            target_support: target,
        });
    }

    let gen_a = draw_categorical_itemset(&mut rng, n_attrs, domain, cfg.pattern_size_range);
    let mut gen_b;
    let mut attempts = 0;
    loop {
        gen_b = draw_categorical_itemset(&mut rng, n_attrs, domain, cfg.pattern_size_range);
        if gen_b.iter().all(|&i| !gen_a.iter().any(|&j| attr_of(j) == attr_of(i))) {
            break;
        }
        attempts += 1;
        if attempts > REDRAW_CAP {
            return Err(Error::InvalidConfig(
                "cannot draw attribute-disjoint anomaly generators".into(),
            ));
        }
    }

    // rows[t][attr] is the chosen item for that attribute, or None.
    let mut rows: Vec<Vec<Option<u32>>> = vec![vec![None; n_attrs]; n];
    let contains = |row: &[Option<u32>], items: &[u32]| {
        items.iter().all(|&i| row[attr_of(i)] == Some(i))
    };
    let stamp = |row: &mut Vec<Option<u32>>, items: &[u32]| {
        for &i in items {
            row[attr_of(i)] = Some(i);
        }
    };

    let occurrences = cfg.generator_occurrences();
    let anomaly_id = cfg.plant_anomaly.then(|| rng.gen_range(0..n));
    let (set_a, set_b) = match anomaly_id {
        Some(id) => {
            let pool: Vec<usize> = (0..n).filter(|&t| t != id).collect();
            let mut set_a = sample_from_pool(&mut rng, &pool, occurrences - 1);
            set_a.push(id);
            let pool_b: Vec<usize> = pool.iter().copied().filter(|t| !set_a.contains(t)).collect();
            let mut set_b = sample_from_pool(&mut rng, &pool_b, occurrences - 1);
            set_b.push(id);
            (set_a, set_b)
        }
        None => {
            let pool: Vec<usize> = (0..n).collect();
            let set_a = sample_from_pool(&mut rng, &pool, occurrences);
            let pool_b: Vec<usize> = pool.iter().copied().filter(|t| !set_a.contains(t)).collect();
            let set_b = sample_from_pool(&mut rng, &pool_b, occurrences);
            (set_a, set_b)
        }
    };
    for &t in &set_a {
        stamp(&mut rows[t], &gen_a);
    }
    for &t in &set_b {
        stamp(&mut rows[t], &gen_b);
    }

    // Patterns are added only where their attributes are still unspecified
    // and the addition cannot complete a second generator co-occurrence.
    for t in 0..n {
        for p in &planted {
            if rng.gen::<f64>() < p.target_support {
                let row = &rows[t];
                let fits = p.items.iter().all(|&i| row[attr_of(i)].is_none());
                if !fits {
                    continue;
                }
                if anomaly_id != Some(t) {
                    let would = |gen: &[u32]| {
                        gen.iter()
                            .all(|&g| row[attr_of(g)] == Some(g) || p.items.contains(&g))
                    };
                    if would(&gen_a) && would(&gen_b) {
                        continue;
                    }
                }
                stamp(&mut rows[t], &p.items);
            }
        }
        // Fill the remaining attributes with uniform random values, dodging
        // the single value that would complete both generators.
        for attr in 0..n_attrs {
            if rows[t][attr].is_some() {
                continue;
            }
            let mut value = rng.gen_range(0..domain);
            if anomaly_id != Some(t) {
                let item = (attr * domain + value) as u32;
                let row = &rows[t];
                let would = |gen: &[u32]| {
                    gen.iter().all(|&g| row[attr_of(g)] == Some(g) || g == item)
                };
                if would(&gen_a) && would(&gen_b) {
                    // one forbidden value; redraw uniformly among the rest
                    let alt = rng.gen_range(0..domain - 1);
                    value = if alt >= value { alt + 1 } else { alt };
                }
            }
            rows[t][attr] = Some((attr * domain + value) as u32);
        }
    }

    let transactions: Vec<Vec<u32>> = rows
        .iter()
        .map(|row| row.iter().map(|v| v.expect("attribute filled")).collect())
        .collect();
    let schema: Vec<Attribute> = (0..n_attrs)
        .map(|a| Attribute {
            name: format!("a{a}"),
            first_item: (a * domain) as u32,
            domain_size: domain as u32,
        })
        .collect();
    let labels: Vec<String> = (0..n_attrs * domain)
        .map(|id| format!("a{}=v{}", id / domain, id % domain))
        .collect();
    let d = Dataset::from_parts(transactions, n_attrs * domain, Some(labels), Some(schema));
    debug_assert_eq!(
        co_occurrence_count(&d, &gen_a, &gen_b),
        usize::from(cfg.plant_anomaly)
    );
    let truth = GroundTruth {
        planted_patterns: planted,
        generator_a: gen_a,
        generator_b: gen_b,
        anomaly_transaction_id: anomaly_id,
        seed: cfg.seed,
    };
    Ok((d, truth))
}

/// One point of a statistical power curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerPoint {
    pub growth_factor: f64,
    /// Empirical (1 - alpha) point of the null max-score distribution.
    pub cutoff: f64,
    /// Fraction of anomaly datasets whose maximum score exceeds the cutoff.
    pub power: f64,
    pub n_null: usize,
    pub n_anomaly: usize,
}

/// Maximum class-2 score of a freshly mined-and-scored dataset; `NEG_INFINITY`
/// when no transaction has an eligible pair.
fn max_class2_score(d: &Dataset) -> f64 {
    let set = mine_mdl(d, 1).to_pattern_set();
    let scorer = Class2Scorer::new(d, &set).expect("mined patterns fit the dataset");
    scorer
        .score_all()
        .into_iter()
        .flatten()
        .map(|e| e.score_bits)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Measures the statistical power of the class-2 score against planted
/// anomalies. For each growth factor `g` the pattern support range becomes
/// `[0.04 g, 0.08 g]` and the generator support `0.16 g`; `datasets_per_point`
/// null datasets set the cutoff at the empirical `(1 - alpha)` point of their
/// max scores, and power is the fraction of anomaly datasets scoring strictly
/// above it.
pub fn power_experiment(
    base: &GeneratorConfig,
    growth_factors: &[f64],
    datasets_per_point: usize,
    alpha: f64,
) -> Result<Vec<PowerPoint>> {
    if datasets_per_point == 0 {
        return Err(Error::InvalidArgument(
            "datasets_per_point must be at least 1".into(),
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be in (0, 1], got {alpha}"
        )));
    }
    let mut points = Vec::with_capacity(growth_factors.len());
    for (gi, &g) in growth_factors.iter().enumerate() {
        let mut cfg = base.clone();
        cfg.pattern_support_range = (0.04 * g, 0.08 * g);
        cfg.generator_support = 0.16 * g;

        let base_seed = base.seed.wrapping_add((gi * 2 * datasets_per_point) as u64);
        let runs: Vec<(bool, u64)> = (0..datasets_per_point)
            .map(|i| (false, base_seed.wrapping_add(i as u64)))
            .chain((0..datasets_per_point).map(|i| {
                (true, base_seed.wrapping_add((datasets_per_point + i) as u64))
            }))
            .collect();
        let maxima: Vec<(bool, f64)> = runs
            .par_iter()
            .map(|&(with_anomaly, seed)| {
                let mut c = cfg.clone();
                c.plant_anomaly = with_anomaly;
                c.seed = seed;
                let (d, _) = generate(&c).expect("validated config");
                (with_anomaly, max_class2_score(&d))
            })
            .collect();

        let mut null_max: Vec<f64> = maxima
            .iter()
            .filter(|(a, _)| !a)
            .map(|&(_, m)| m)
            .collect();
        null_max.sort_by(f64::total_cmp);
        let k = ((1.0 - alpha) * null_max.len() as f64).ceil() as usize;
        let cutoff = if k == 0 {
            f64::NEG_INFINITY
        } else {
            null_max[k - 1]
        };
        let anomaly_max: Vec<f64> = maxima.iter().filter(|(a, _)| *a).map(|&(_, m)| m).collect();
        let power =
            anomaly_max.iter().filter(|&&m| m > cutoff).count() as f64 / anomaly_max.len() as f64;
        points.push(PowerPoint {
            growth_factor: g,
            cutoff,
            power,
            n_null: null_max.len(),
            n_anomaly: anomaly_max.len(),
        });
    }
    Ok(points)
}
