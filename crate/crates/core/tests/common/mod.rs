#![allow(dead_code)]

use std::sync::Arc;

use prodspace::cooc::{build_mco, ContextMode, CooccurrenceMatrix};
use prodspace::ingest::{build_vocabulary, Basket, ItemCatalog, Vocabulary};
use prodspace::space::{cosine_distance, rank_by_index, EmbeddingSpace};
use prodspace::synth::{generate_baskets, generate_catalog, SynthConfig};

pub struct Fixture {
    pub catalog: ItemCatalog,
    pub baskets: Vec<Basket>,
    pub vocab: Arc<Vocabulary>,
    pub mco: CooccurrenceMatrix,
}

pub fn fixture(cfg: &SynthConfig) -> Fixture {
    let catalog = generate_catalog(cfg).unwrap();
    let baskets = generate_baskets(&catalog, cfg).unwrap();
    let vocab = Arc::new(build_vocabulary(&baskets, 13_000).unwrap());
    let mco = build_mco(&baskets, &vocab, ContextMode::WholeBasket).unwrap();
    Fixture {
        catalog,
        baskets,
        vocab,
        mco,
    }
}

pub fn h1_of(space: &EmbeddingSpace, catalog: &ItemCatalog, i: usize) -> u32 {
    catalog
        .get(space.vocab().item(i))
        .map(|m| m.h1)
        .unwrap_or(0)
}

/// Mean cosine similarity over same-h1 pairs and over different-h1 pairs.
pub fn category_similarity(space: &EmbeddingSpace, catalog: &ItemCatalog) -> (f64, f64) {
    let h1: Vec<u32> = (0..space.len()).map(|i| h1_of(space, catalog, i)).collect();
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0usize, 0.0, 0usize);
    for i in 0..space.len() {
        for j in i + 1..space.len() {
            let s = 1.0 - cosine_distance(space.row(i), space.row(j)).unwrap();
            if h1[i] == h1[j] {
                intra += s;
                ni += 1;
            } else {
                inter += s;
                nx += 1;
            }
        }
    }
    (intra / ni as f64, inter / nx as f64)
}

/// Mean fraction of each item's top-`k` neighbors sharing its h1.
pub fn neighbor_purity(space: &EmbeddingSpace, catalog: &ItemCatalog, k: usize) -> f64 {
    let h1: Vec<u32> = (0..space.len()).map(|i| h1_of(space, catalog, i)).collect();
    let mut hits = 0;
    for i in 0..space.len() {
        let list = rank_by_index(space, i, k, |_| true).unwrap();
        hits += list.indices().filter(|&j| h1[j] == h1[i]).count();
    }
    hits as f64 / (k * space.len()) as f64
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / na.max(nb).max(1e-300)
}

/// Central differences of `f` at `x` with step `h`.
pub fn numeric_grad(x: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut x = x.to_vec();
    let mut g = vec![0.0; x.len()];
    for k in 0..x.len() {
        let orig = x[k];
        x[k] = orig + h;
        let up = f(&x);
        x[k] = orig - h;
        let down = f(&x);
        x[k] = orig;
        g[k] = (up - down) / (2.0 * h);
    }
    g
}
