//! Build relate and negate graphs from category metadata, plus a graph
//! from explicit id pairs, and round-trip one through its text format.
//!
//! cargo run --example relation_graphs

use prodspace::graph::{
    build_negate_graph, build_relate_graph, graph_from_pairs, RelationGraph, RelationKind,
};
use prodspace::ingest::Vocabulary;
use prodspace::synth::{generate_catalog, SynthConfig};

fn main() -> prodspace::Result<()> {
    let cfg = SynthConfig {
        n_categories: 3,
        items_per_category: 4,
        basket_size: (2, 3),
        ..SynthConfig::default()
    };
    let catalog = generate_catalog(&cfg)?;
    let vocab = Vocabulary::from_items(catalog.items().iter().map(|m| m.item_id.clone()))?;

    let relate = build_relate_graph(&catalog, &vocab);
    let negate = build_negate_graph(&catalog, &vocab, 2, 7);
    println!("relate: {} edges (3 cliques of 4 -> 3 * 6)", relate.len());
    println!("negate: {} edges, all across categories", negate.len());
    for e in negate.edges().iter().take(5) {
        println!("  {} -- {}", vocab.item(e.i), vocab.item(e.j));
    }

    let manual = graph_from_pairs(
        [("00100000", "00100001"), ("00200000", "00300003")],
        &vocab,
        RelationKind::Relate,
        None,
    )?;
    println!("manual graph: {} edges", manual.len());

    let path = std::env::temp_dir().join(format!("prodspace-negate-{}.graph", std::process::id()));
    negate.save(&path, &vocab)?;
    let back = RelationGraph::load(&path, &vocab)?;
    println!(
        "reloaded {} {} edges, identical: {}",
        back.kind(),
        back.len(),
        back == negate
    );
    std::fs::remove_file(&path).ok();
    Ok(())
}
