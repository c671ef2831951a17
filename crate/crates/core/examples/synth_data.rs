//! Generate a small synthetic catalog and basket stream and write them in
//! the ingest file formats.
//!
//! cargo run --example synth_data -- [OUT_DIR]

use prodspace::ingest::{write_metadata, write_transactions};
use prodspace::synth::{generate_baskets, generate_catalog, generate_gold, SynthConfig};

fn main() -> prodspace::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "synth-out".into());
    std::fs::create_dir_all(&out).expect("create output dir");

    let cfg = SynthConfig {
        n_categories: 4,
        items_per_category: 10,
        n_baskets: 2_000,
        ..SynthConfig::default()
    };
    let catalog = generate_catalog(&cfg)?;
    let baskets = generate_baskets(&catalog, &cfg)?;
    let gold = generate_gold(&catalog, 8, 3, cfg.seed + 1)?;

    write_metadata(format!("{out}/metadata.csv"), &catalog)?;
    write_transactions(format!("{out}/transactions.csv"), &baskets)?;
    gold.save(format!("{out}/gold.txt"))?;

    let single = baskets
        .iter()
        .filter(|b| {
            let h1 = |id: &String| catalog.get(id).map(|m| m.h1);
            b.items.iter().all(|i| h1(i) == h1(&b.items[0]))
        })
        .count();
    println!(
        "{} items, {} baskets ({} single-category), {} gold cases in {out}/",
        catalog.len(),
        baskets.len(),
        single,
        gold.len()
    );
    println!("first basket: {:?}", baskets[0].items);
    Ok(())
}
