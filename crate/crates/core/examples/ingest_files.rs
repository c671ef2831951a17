//! Read a metadata file and a transactions file, group rows into baskets
//! and rank the vocabulary by basket count.
//!
//! cargo run --example ingest_files

use std::io::Write;

use prodspace::ingest::{build_vocabulary, load_metadata, stream_baskets};

const METADATA: &str = "\
ItemId,IDE,ItemName,H1,H2
10001,1,MILK 1L,1,10
10002,2,MILK 2L,1,10
20001,3,BREAD WHITE,2,20
20002,4,BREAD RYE,2,20
30001,5,COFFEE BEANS,3,30
";

const TRANSACTIONS: &str = "\
BasketId,ItemId,SiteId,TimeStamp,Quantity,CustomerId,Available
B1,10001,S1,1600000000,1,C1,Y
B1,20001,S1,1600000000,2,C1,Y
B2,10002,S1,1600000100,1,C2,Y
B2,20002,S1,1600000100,1,C2,Y
B2,10002,S1,1600000100,1,C2,Y
B3,99999,S2,1600000200,1,C3,Y
B3,10001,S2,1600000200,1,C3,Y
B3,30001,S2,1600000200,1,C3,Y
";

fn main() -> prodspace::Result<()> {
    let dir = tempfile_dir();
    let meta = dir.join("metadata.csv");
    let tx = dir.join("transactions.csv");
    std::fs::File::create(&meta)
        .and_then(|mut f| f.write_all(METADATA.as_bytes()))
        .expect("write");
    std::fs::File::create(&tx)
        .and_then(|mut f| f.write_all(TRANSACTIONS.as_bytes()))
        .expect("write");

    let catalog = load_metadata(&meta)?;
    println!("catalog: {} items", catalog.len());

    // Rows are grouped by basket, so the streaming reader works here.
    let mut stream = stream_baskets(&tx, &catalog)?;
    let mut baskets = Vec::new();
    for b in stream.by_ref() {
        let b = b?;
        println!("{}: {:?} qty {:?}", b.basket_id, b.items, b.quantities);
        baskets.push(b);
    }
    let stats = stream.stats();
    println!(
        "{} rows, {} dropped (unknown item), {} baskets",
        stats.rows, stats.dropped_rows, stats.baskets
    );

    let vocab = build_vocabulary(&baskets, 3)?;
    for (i, id) in vocab.items().iter().enumerate() {
        println!("  #{i} {id} in {} baskets", vocab.sales_count(i));
    }
    Ok(())
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("prodspace-ingest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("create temp dir");
    dir
}
