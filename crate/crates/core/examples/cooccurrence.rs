//! Count basket co-occurrences in whole-basket and window modes and print
//! a count histogram.
//!
//! cargo run --example cooccurrence

use std::sync::Arc;

use prodspace::cooc::{build_mco, mco_histogram, uniform_bins, ContextMode};
use prodspace::ingest::build_vocabulary;
use prodspace::synth::{generate_baskets, generate_catalog, SynthConfig};

fn main() -> prodspace::Result<()> {
    let cfg = SynthConfig {
        n_categories: 5,
        items_per_category: 20,
        n_baskets: 5_000,
        ..SynthConfig::default()
    };
    let catalog = generate_catalog(&cfg)?;
    let baskets = generate_baskets(&catalog, &cfg)?;
    let vocab = Arc::new(build_vocabulary(&baskets, 1_000)?);

    let whole = build_mco(&baskets, &vocab, ContextMode::WholeBasket)?;
    let window = build_mco(
        &baskets,
        &vocab,
        ContextMode::Window {
            size: 1,
            weighted: false,
        },
    )?;
    println!(
        "whole basket: {} pairs, total {}",
        whole.nnz(),
        whole.total_pairs()
    );
    println!(
        "window 1:     {} pairs, total {}",
        window.nnz(),
        window.total_pairs()
    );

    let (a, b) = (0, 1);
    println!(
        "X({}, {}) = {}",
        vocab.item(a),
        vocab.item(b),
        whole.get(a, b)
    );

    let max = whole.entries().iter().map(|e| e.count).fold(0.0, f64::max);
    let bins = uniform_bins(max, 5);
    let hist = mco_histogram(&whole, &bins);
    let peak = hist.counts.iter().copied().max().unwrap_or(1).max(1);
    for (bin, n) in bins.iter().zip(&hist.counts) {
        println!(
            "{:>4}-{:<4} {:>5} {}",
            bin.lo,
            bin.hi,
            n,
            "#".repeat((n * 50).div_ceil(peak) as usize)
        );
    }
    Ok(())
}
