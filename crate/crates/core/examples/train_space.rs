//! Train a product vector space from synthetic baskets and report how well
//! the planted categories are recovered.
//!
//! cargo run --release --example train_space

use std::sync::Arc;

use prodspace::cooc::{build_mco, ContextMode};
use prodspace::embed::{finalize, train, TrainConfig};
use prodspace::ingest::build_vocabulary;
use prodspace::space::cosine_distance;
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
    let mco = build_mco(&baskets, &vocab, ContextMode::WholeBasket)?;

    let tc = TrainConfig {
        dim: 16,
        ..TrainConfig::default()
    };
    let (params, log) = train(&mco, &tc)?;
    println!(
        "{} epochs, best {} (early stop: {})",
        log.epochs_run(),
        log.best_epoch,
        log.stopped_early
    );
    for r in log.records.iter().step_by(10) {
        println!(
            "  epoch {:>4}  loss {:>10.3}  probe {:.4}",
            r.epoch, r.loss, r.probe
        );
    }

    let space = finalize(&params, vocab.clone())?;
    let h1 = |i: usize| catalog.get(vocab.item(i)).map(|m| m.h1);
    let (mut intra, mut ni, mut inter, mut nx) = (0.0, 0, 0.0, 0);
    for i in 0..space.len() {
        for j in i + 1..space.len() {
            let s = 1.0 - cosine_distance(space.row(i), space.row(j))?;
            if h1(i) == h1(j) {
                intra += s;
                ni += 1;
            } else {
                inter += s;
                nx += 1;
            }
        }
    }
    println!(
        "mean cosine similarity: same category {:.3}, different {:.3}",
        intra / ni as f64,
        inter / nx as f64
    );
    Ok(())
}
