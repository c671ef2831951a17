//! Nearest-neighbor replacement search with an out-of-stock exclusion list.
//!
//! cargo run --example replacements

use std::collections::HashSet;

use prodspace::ingest::{ItemCatalog, ItemMeta};
use prodspace::space::{get_item_replacement, top_k_neighbors, EmbeddingSpace};

fn main() -> prodspace::Result<()> {
    let items = [
        ("D1", "DVD ACTION", 1, [1.0, 0.1, 0.0]),
        ("D2", "DVD COMEDY", 1, [0.9, 0.2, 0.1]),
        ("D3", "DVD DRAMA", 1, [0.8, 0.0, 0.3]),
        ("M1", "VINYL ROCK", 2, [0.1, 1.0, 0.0]),
        ("M2", "VINYL JAZZ", 2, [0.3, 0.8, 0.1]),
    ];
    let space = EmbeddingSpace::from_rows(items.iter().map(|(id, _, _, v)| (*id, v.to_vec())))?;
    let catalog = ItemCatalog::from_items(items.iter().enumerate().map(
        |(k, (id, name, h1, _))| ItemMeta {
            item_id: id.to_string(),
            ide: k as i64 + 1,
            name: name.to_string(),
            h1: *h1,
            h2: *h1 * 10,
        },
    ))?;

    println!(
        "{}",
        top_k_neighbors(&space, "D1", 3)?.to_table(&space, Some(&catalog))
    );
    let out_of_stock: HashSet<String> = ["D2".to_string()].into();
    println!(
        "{}",
        get_item_replacement(&space, "D1", 3, &out_of_stock)?.to_table(&space, Some(&catalog))
    );
    match top_k_neighbors(&space, "X9", 3) {
        Err(e) => println!("lookup of X9: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
