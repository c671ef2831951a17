//! Embed an item that has never been sold: start from its category's
//! centroid, then pull it toward associated and known similar items.
//!
//! cargo run --example cold_start

use prodspace::coldstart::{centroid, cold_start_item, register_item, ColdStartRequest};
use prodspace::ingest::ItemMeta;
use prodspace::space::{top_k_neighbors, EmbeddingSpace};

fn main() -> prodspace::Result<()> {
    let space = EmbeddingSpace::from_rows([
        ("game-chess", vec![1.0, 0.1, 0.0]),
        ("game-go", vec![0.9, 0.0, 0.2]),
        ("game-cards", vec![0.8, 0.3, 0.0]),
        ("dvd-film", vec![0.0, 1.0, 0.1]),
        ("dvd-series", vec![0.1, 0.9, 0.0]),
    ])?;
    let games: Vec<String> = ["game-chess", "game-go", "game-cards"]
        .map(String::from)
        .to_vec();

    let mean = centroid(&space, &[0, 1, 2])?;
    let mut req = ColdStartRequest::new(games);
    assert_eq!(cold_start_item(&space, &req)?, mean);
    println!("centroid only: {mean:.3?}");

    req.s_items = vec!["game-go".into()];
    let v = cold_start_item(&space, &req)?;
    println!("pulled toward game-go: {v:.3?}");

    let meta = ItemMeta {
        item_id: "game-shogi".into(),
        ide: 99,
        name: "SHOGI".into(),
        h1: 1,
        h2: 10,
    };
    let grown = register_item(&space, &meta, &v)?;
    let list = top_k_neighbors(&grown, "game-shogi", 3)?;
    println!("{}", list.to_table(&grown, None));
    Ok(())
}
