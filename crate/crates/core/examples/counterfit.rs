//! Counter-fitting: push antonym pairs apart, pull synonym pairs together,
//! and keep each vector's original neighborhood.
//!
//! cargo run --example counterfit

use prodspace::graph::{graph_from_pairs, RelationKind};
use prodspace::space::{cosine_distance, EmbeddingSpace};
use prodspace::tune::{counterfit, CounterfitConfig};

fn main() -> prodspace::Result<()> {
    let space = EmbeddingSpace::from_rows([
        ("cheap", vec![1.0, 0.2, 0.0]),
        ("expensive", vec![0.9, 0.3, 0.1]),
        ("inexpensive", vec![0.2, 1.0, 0.0]),
        ("pricey", vec![0.0, 0.3, 1.0]),
    ])?;
    let vocab = space.vocab().clone();
    let syn = graph_from_pairs(
        [("cheap", "inexpensive"), ("expensive", "pricey")],
        &vocab,
        RelationKind::Relate,
        None,
    )?;
    let ant = graph_from_pairs([("cheap", "expensive")], &vocab, RelationKind::Negate, None)?;

    // Antonyms that start out as neighbors are also held together by the
    // preservation term, so it gets a smaller weight here.
    let cfg = CounterfitConfig {
        neighbors: 2,
        w3: 0.2,
        ..CounterfitConfig::default()
    };
    let (tuned, history) = counterfit(&space, &syn, &ant, &cfg, 50)?;
    let d = |s: &EmbeddingSpace, a: usize, b: usize| cosine_distance(s.row(a), s.row(b));
    println!(
        "objective {:.4} -> {:.4}",
        history[0].total,
        history.last().expect("history").total
    );
    println!(
        "d(cheap, expensive):   {:.3} -> {:.3}",
        d(&space, 0, 1)?,
        d(&tuned, 0, 1)?
    );
    println!(
        "d(cheap, inexpensive): {:.3} -> {:.3}",
        d(&space, 0, 2)?,
        d(&tuned, 0, 2)?
    );
    println!(
        "d(expensive, pricey):  {:.3} -> {:.3}",
        d(&space, 1, 3)?,
        d(&tuned, 1, 3)?
    );
    Ok(())
}
