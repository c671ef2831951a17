//! Score replacement quality with MRR@K and Recall@K.
//!
//! cargo run --example evaluate

use prodspace::eval::{evaluate, mrr_at_k, recall_at_k, GoldCase, GoldSet};
use prodspace::space::EmbeddingSpace;

fn main() -> prodspace::Result<()> {
    let ranks = [Some(1), Some(2), None];
    println!(
        "ranks {ranks:?}: MRR@5 {:.3}, Recall@5 {:.3}",
        mrr_at_k(&ranks, 5)?,
        recall_at_k(&ranks, 5)?
    );

    let space = EmbeddingSpace::from_rows([
        ("a", vec![1.0, 0.0]),
        ("b", vec![0.9, 0.1]),
        ("c", vec![0.7, 0.7]),
        ("d", vec![0.0, 1.0]),
    ])?;
    let case = |q: &str, acc: &[&str]| GoldCase {
        query: q.into(),
        accepted: acc.iter().map(|s| s.to_string()).collect(),
        label: None,
    };
    let gold = GoldSet::new(vec![
        case("a", &["b"]),
        case("d", &["b"]),
        case("a", &["zz"]),
    ])?;
    let report = evaluate(&space, &gold, &[1, 5])?;
    print!("{}", report.to_table());
    print!("{}", report.machine_line());
    Ok(())
}
