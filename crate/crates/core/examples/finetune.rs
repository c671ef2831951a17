//! Train a space, then fine-tune it with category relate / negate graphs
//! and compare neighbor purity before and after.
//!
//! cargo run --release --example finetune

use std::sync::Arc;

use prodspace::cooc::{build_mco, ContextMode};
use prodspace::embed::{finalize, train, TrainConfig};
use prodspace::graph::{build_negate_graph, build_relate_graph};
use prodspace::ingest::{build_vocabulary, ItemCatalog};
use prodspace::space::{rank_by_index, EmbeddingSpace};
use prodspace::synth::{generate_baskets, generate_catalog, SynthConfig};
use prodspace::tune::{finetune, TuneConfig};

fn purity(space: &EmbeddingSpace, catalog: &ItemCatalog, k: usize) -> prodspace::Result<f64> {
    let h1 = |i: usize| catalog.get(space.vocab().item(i)).map(|m| m.h1);
    let mut hits = 0;
    for i in 0..space.len() {
        hits += rank_by_index(space, i, k, |_| true)?
            .indices()
            .filter(|&j| h1(j) == h1(i))
            .count();
    }
    Ok(hits as f64 / (k * space.len()) as f64)
}

fn main() -> prodspace::Result<()> {
    // Low affinity leaves the trained space with visible category mixing.
    let cfg = SynthConfig {
        n_categories: 5,
        items_per_category: 20,
        n_baskets: 3_000,
        intra_affinity: 0.1,
        ..SynthConfig::default()
    };
    let catalog = generate_catalog(&cfg)?;
    let baskets = generate_baskets(&catalog, &cfg)?;
    let vocab = Arc::new(build_vocabulary(&baskets, 1_000)?);
    let mco = build_mco(&baskets, &vocab, ContextMode::WholeBasket)?;
    let (params, _) = train(
        &mco,
        &TrainConfig {
            dim: 16,
            ..TrainConfig::default()
        },
    )?;
    let pre = finalize(&params, vocab.clone())?;

    let relate = build_relate_graph(&catalog, &vocab);
    let negate = build_negate_graph(&catalog, &vocab, 5, 1);
    let tc = TuneConfig {
        epochs: 100,
        ..TuneConfig::default()
    };
    let (post, log) = finetune(&pre, &relate, &negate, &tc, None)?;

    let (first, last) = (
        log.records[0].objective,
        *log.last().expect("log has records"),
    );
    println!(
        "objective {:.3} -> {:.3} (preserve {:.3}, relate {:.3}, negate {:.3})",
        first.total, last.total, last.preserve, last.relate, last.negate
    );
    println!(
        "top-10 same-category fraction: {:.3} -> {:.3}",
        purity(&pre, &catalog, 10)?,
        purity(&post, &catalog, 10)?
    );
    print!(
        "{}",
        log.to_csv().lines().take(4).collect::<Vec<_>>().join("\n")
    );
    println!("\n...");
    Ok(())
}
