//! Classic retrofitting: each vector is pulled toward its graph neighbors
//! while staying anchored to its original position.
//!
//! cargo run --example faruqui_retrofit

use prodspace::graph::{graph_from_pairs, RelationKind};
use prodspace::space::{top_k_neighbors, EmbeddingSpace};
use prodspace::tune::{retrofit_faruqui, uniform_faruqui_weights};

fn main() -> prodspace::Result<()> {
    let space = EmbeddingSpace::from_rows([
        ("espresso", vec![1.0, 0.6, 0.0]),
        ("latte", vec![0.3, 1.0, 0.0]),
        ("tea", vec![0.0, 0.4, 1.0]),
        ("croissant", vec![1.0, 0.0, 0.3]),
    ])?;
    let graph = graph_from_pairs(
        [("espresso", "latte")],
        space.vocab(),
        RelationKind::Relate,
        None,
    )?;
    let (alpha, beta) = uniform_faruqui_weights(space.len(), &graph);

    println!(
        "before: {:?}",
        top_k_neighbors(&space, "espresso", 3)?
            .indices()
            .map(|i| space.vocab().item(i))
            .collect::<Vec<_>>()
    );
    let tuned = retrofit_faruqui(&space, &graph, &alpha, &beta, 10)?;
    println!(
        "after:  {:?}",
        top_k_neighbors(&tuned, "espresso", 3)?
            .indices()
            .map(|i| tuned.vocab().item(i))
            .collect::<Vec<_>>()
    );
    for (id, row) in tuned.vocab().items().iter().zip(tuned.rows()) {
        println!("  {id:<10} {row:.3?}");
    }
    Ok(())
}
