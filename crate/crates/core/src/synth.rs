//! Seeded synthetic catalogs and basket streams with planted category
//! structure.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::{GoldCase, GoldSet};
use crate::ingest::{Basket, ItemCatalog, ItemMeta};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_categories: usize,
    pub items_per_category: usize,
    pub n_baskets: usize,
    /// Inclusive basket size range.
    pub basket_size: (usize, usize),
    /// Probability that a basket draws all of its items from one category.
    pub intra_affinity: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_categories: 10,
            items_per_category: 50,
            n_baskets: 20_000,
            basket_size: (2, 6),
            intra_affinity: 0.9,
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.n_categories == 0 || self.items_per_category == 0 {
            return bad("need at least one category with at least one item");
        }
        let (lo, hi) = self.basket_size;
        if lo == 0 || lo > hi {
            return bad("basket size range must satisfy 1 <= min <= max");
        }
        if !(0.0..=1.0).contains(&self.intra_affinity) {
            return bad("intra_affinity must lie in [0, 1]");
        }
        if hi > self.n_categories * self.items_per_category {
            return bad("basket size exceeds the number of items");
        }
        if self.intra_affinity > 0.0 && hi > self.items_per_category {
            return bad("basket size exceeds items per category");
        }
        Ok(())
    }

    pub fn n_items(&self) -> usize {
        self.n_categories * self.items_per_category
    }
}

/// Item id of item `i` in category `c` (both 0-based).
pub fn item_id(c: usize, i: usize) -> String {
    format!("{:03}{:05}", c + 1, i)
}

/// Category `c` gets `h1 = c + 1` and `h2 = 100 * h1`.
pub fn generate_catalog(cfg: &SynthConfig) -> Result<ItemCatalog> {
    cfg.validate()?;
    let mut items = Vec::with_capacity(cfg.n_items());
    for c in 0..cfg.n_categories {
        let h1 = (c + 1) as u32;
        for i in 0..cfg.items_per_category {
            items.push(ItemMeta {
                item_id: item_id(c, i),
                ide: (c * cfg.items_per_category + i + 1) as i64,
                name: format!("CATEGORY {:02} / ITEM {:03}", c + 1, i),
                h1,
                h2: h1 * 100,
            });
        }
    }
    ItemCatalog::from_items(items)
}

fn categories_of(catalog: &ItemCatalog) -> Vec<Vec<&str>> {
    let mut by_h1: std::collections::BTreeMap<u32, Vec<&str>> = Default::default();
    for m in catalog.items() {
        by_h1.entry(m.h1).or_default().push(&m.item_id);
    }
    by_h1.into_values().collect()
}

/// Baskets over `catalog`: with probability `intra_affinity` a basket picks
/// one category and samples its items without replacement, otherwise it
/// samples without replacement from the whole catalog.
pub fn generate_baskets(catalog: &ItemCatalog, cfg: &SynthConfig) -> Result<Vec<Basket>> {
    cfg.validate()?;
    let groups = categories_of(catalog);
    let all: Vec<&str> = catalog.items().iter().map(|m| m.item_id.as_str()).collect();
    let (lo, hi) = cfg.basket_size;
    if hi > all.len() {
        return Err(Error::InvalidConfig(
            "basket size exceeds catalog size".into(),
        ));
    }
    if cfg.intra_affinity > 0.0 && groups.iter().any(|g| g.len() < hi) {
        return Err(Error::InvalidConfig(
            "basket size exceeds a category's item count".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut baskets = Vec::with_capacity(cfg.n_baskets);
    for b in 0..cfg.n_baskets {
        let size = rng.random_range(lo..=hi);
        let pool: &[&str] = if rng.random_bool(cfg.intra_affinity) {
            &groups[rng.random_range(0..groups.len())]
        } else {
            &all
        };
        let mut picks: Vec<usize> = sample(&mut rng, pool.len(), size).into_vec();
        picks.sort_unstable();
        let items: Vec<String> = picks.iter().map(|&p| pool[p].to_owned()).collect();
        let quantities = (0..size).map(|_| rng.random_range(1..=3)).collect();
        baskets.push(Basket {
            basket_id: format!("B{b:07}"),
            items,
            quantities,
            timestamp: 1_600_000_000 + 37 * b as i64,
            site_id: format!("S{}", rng.random_range(1..=3)),
        });
    }
    Ok(baskets)
}

/// Replacement cases for synthetic data: `n_cases` queries spread
/// round-robin over the categories, each accepting `accepted_per_case`
/// other items of its own category.
pub fn generate_gold(
    catalog: &ItemCatalog,
    n_cases: usize,
    accepted_per_case: usize,
    seed: u64,
) -> Result<GoldSet> {
    let groups = categories_of(catalog);
    if groups.is_empty() || groups.iter().all(|g| g.len() < 2) {
        return Err(Error::InvalidConfig(
            "gold cases need a category with two items".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let usable: Vec<&Vec<&str>> = groups.iter().filter(|g| g.len() >= 2).collect();
    let mut used: Vec<Vec<bool>> = usable.iter().map(|g| vec![false; g.len()]).collect();
    let mut cases = Vec::with_capacity(n_cases);
    for k in 0..n_cases {
        let g = k % usable.len();
        let members = usable[g];
        let free: Vec<usize> = (0..members.len()).filter(|&m| !used[g][m]).collect();
        let q = if free.is_empty() {
            rng.random_range(0..members.len())
        } else {
            free[rng.random_range(0..free.len())]
        };
        used[g][q] = true;
        let others: Vec<usize> = (0..members.len()).filter(|&m| m != q).collect();
        let take = accepted_per_case.clamp(1, others.len());
        let mut picks: Vec<usize> = sample(&mut rng, others.len(), take)
            .into_iter()
            .map(|p| others[p])
            .collect();
        picks.sort_unstable();
        let h1 = catalog.get(members[q]).map(|m| m.h1.to_string());
        cases.push(GoldCase {
            query: members[q].to_owned(),
            accepted: picks.into_iter().map(|p| members[p].to_owned()).collect(),
            label: h1,
        });
    }
    GoldSet::new(cases)
}
