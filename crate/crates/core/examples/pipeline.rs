//! The whole two-step pipeline driven from a config, exactly as the
//! `prodspace pipeline` command runs it: synthetic data, vocabulary,
//! co-occurrence, training, graphs, fine-tuning, evaluation.
//!
//! cargo run --release --example pipeline -- [WORKDIR]

use prodspace::cli::{cmd_pipeline, PipelineConfig, EVAL_FILE};

const CONFIG: &str = r#"
seed = 7

[synth]
n_categories = 4
items_per_category = 15
n_baskets = 3000
intra_affinity = 0.5
gold_cases = 20
gold_accepted = 3

[train]
dim = 16

[tune]
epochs = 100
"#;

fn main() -> prodspace::Result<()> {
    let mut cfg = PipelineConfig::from_toml(CONFIG)?;
    cfg.paths.workdir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "pipeline-out".into())
        .into();
    let out = cmd_pipeline(&cfg)?;
    print!("{}", out.detail);
    println!("{}", out.summary);
    print!(
        "{}",
        std::fs::read_to_string(cfg.artifact(EVAL_FILE)).expect("eval report")
    );
    Ok(())
}
