//! The `prodspace` command line.
//!
//! Every command reads a TOML [`PipelineConfig`] (optional, `--config`),
//! applies flag overrides, reads its inputs from the work directory and
//! writes its artifact there. Artifacts are always written to a temporary
//! file and renamed into place.
//!
//! ```text
//! prodspace synth     -> transactions.csv, metadata.csv, gold.txt
//! prodspace ingest    -> vocab.txt
//! prodspace mco       -> mco.txt
//! prodspace train     -> embeddings.pre.txt, train_log.csv
//! prodspace graph     -> relate.graph, negate.graph
//! prodspace tune      -> embeddings.post.txt, tune_log.csv
//! prodspace eval      -> eval.txt
//! prodspace neighbors ITEM
//! prodspace coldstart --category H1:H2 [--n IDS] [--s IDS]  -> coldstart.txt
//! prodspace pipeline  -> all of the above except neighbors / coldstart
//! ```

use std::collections::HashSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::coldstart::{cold_start_item, ColdStartRequest};
use crate::cooc::{build_mco, ContextMode, CooccurrenceMatrix};
use crate::embed::{finalize, train, Execution, TrainConfig};
use crate::error::{Error, Result};
use crate::eval::{evaluate, EvalReport, GoldSet};
use crate::graph::{build_negate_graph, build_relate_graph, RelationGraph};
use crate::ingest::{
    build_vocabulary, load_baskets, load_metadata, write_metadata, write_transactions, ItemCatalog,
    Vocabulary,
};
use crate::io::atomic_write;
use crate::space::{get_item_replacement, rank_by_index, EmbeddingSpace};
use crate::synth::{generate_baskets, generate_catalog, generate_gold, SynthConfig};
use crate::tune::{finetune, Distance, TuneConfig};

pub const VOCAB_FILE: &str = "vocab.txt";
pub const MCO_FILE: &str = "mco.txt";
pub const PRE_FILE: &str = "embeddings.pre.txt";
pub const POST_FILE: &str = "embeddings.post.txt";
pub const RELATE_FILE: &str = "relate.graph";
pub const NEGATE_FILE: &str = "negate.graph";
pub const EVAL_FILE: &str = "eval.txt";
pub const TRAIN_LOG_FILE: &str = "train_log.csv";
pub const TUNE_LOG_FILE: &str = "tune_log.csv";
pub const COLDSTART_FILE: &str = "coldstart.txt";
pub const TRANSACTIONS_FILE: &str = "transactions.csv";
pub const METADATA_FILE: &str = "metadata.csv";
pub const GOLD_FILE: &str = "gold.txt";

/// Per-stage offsets added to the top-level seed.
pub mod seed_offset {
    pub const SYNTH: u64 = 0;
    pub const TRAIN: u64 = 1;
    pub const NEGATE: u64 = 2;
    pub const TUNE: u64 = 3;
    pub const GOLD: u64 = 4;
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathsSection {
    /// Input transactions. When absent, `pipeline` generates synthetic data.
    pub transactions: Option<PathBuf>,
    pub metadata: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub workdir: PathBuf,
}

impl Default for PathsSection {
    fn default() -> Self {
        PathsSection {
            transactions: None,
            metadata: None,
            gold: None,
            workdir: PathBuf::from("prodspace-out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub n_categories: usize,
    pub items_per_category: usize,
    pub n_baskets: usize,
    pub basket_min: usize,
    pub basket_max: usize,
    pub intra_affinity: f64,
    pub gold_cases: usize,
    pub gold_accepted: usize,
}

impl Default for SynthSection {
    fn default() -> Self {
        let s = SynthConfig::default();
        SynthSection {
            n_categories: s.n_categories,
            items_per_category: s.items_per_category,
            n_baskets: s.n_baskets,
            basket_min: s.basket_size.0,
            basket_max: s.basket_size.1,
            intra_affinity: s.intra_affinity,
            gold_cases: 50,
            gold_accepted: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoocSection {
    /// 0 means whole-basket context.
    pub window: usize,
    pub weighted: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub dim: usize,
    pub x_max: f64,
    pub alpha_exp: f64,
    pub lr: f64,
    pub max_epochs: usize,
    pub patience: usize,
    pub min_delta: f64,
    pub parallel: bool,
}

impl Default for TrainSection {
    fn default() -> Self {
        let t = TrainConfig::default();
        TrainSection {
            dim: t.dim,
            x_max: t.x_max,
            alpha_exp: t.alpha_exp,
            lr: t.lr,
            max_epochs: t.max_epochs,
            patience: t.patience,
            min_delta: t.min_delta,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphSection {
    pub negate_per_item: usize,
}

impl Default for GraphSection {
    fn default() -> Self {
        GraphSection { negate_per_item: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TuneSection {
    pub w_p: f64,
    pub w_r: f64,
    pub w_n: f64,
    pub dist_p: String,
    pub dist_r: String,
    pub dist_n: String,
    pub margin: f64,
    pub lr: f64,
    pub epochs: usize,
}

impl Default for TuneSection {
    fn default() -> Self {
        let t = TuneConfig::default();
        TuneSection {
            w_p: t.w_p,
            w_r: t.w_r,
            w_n: t.w_n,
            dist_p: "l2".into(),
            dist_r: "cosine".into(),
            dist_n: "cosine".into(),
            margin: t.margin,
            lr: t.lr,
            epochs: t.epochs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub k_values: Vec<usize>,
}

impl Default for EvalSection {
    fn default() -> Self {
        EvalSection {
            k_values: crate::eval::DEFAULT_K_VALUES.to_vec(),
        }
    }
}

/// Everything a run needs, normally read from a TOML file.
///
/// ```toml
/// seed = 42
/// vocab_cap = 13000
///
/// [paths]
/// workdir = "out"
///
/// [train]
/// dim = 32
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub vocab_cap: usize,
    pub paths: PathsSection,
    pub synth: SynthSection,
    pub cooc: CoocSection,
    pub train: TrainSection,
    pub graph: GraphSection,
    pub tune: TuneSection,
    pub eval: EvalSection,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 42,
            vocab_cap: 13_000,
            paths: PathsSection::default(),
            synth: SynthSection::default(),
            cooc: CoocSection::default(),
            train: TrainSection::default(),
            graph: GraphSection::default(),
            tune: TuneSection::default(),
            eval: EvalSection::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::InvalidConfig(m) => Error::InvalidConfig(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.vocab_cap == 0 {
            return Err(Error::InvalidConfig("vocab_cap must be at least 1".into()));
        }
        self.synth_config().validate()?;
        self.train_config().validate()?;
        self.tune_config()?.validate()?;
        if self.eval.k_values.is_empty() || self.eval.k_values.contains(&0) {
            return Err(Error::InvalidConfig(
                "eval.k_values must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn workdir(&self) -> &Path {
        &self.paths.workdir
    }

    pub fn artifact(&self, name: &str) -> PathBuf {
        self.paths.workdir.join(name)
    }

    pub fn synth_config(&self) -> SynthConfig {
        let s = &self.synth;
        SynthConfig {
            n_categories: s.n_categories,
            items_per_category: s.items_per_category,
            n_baskets: s.n_baskets,
            basket_size: (s.basket_min, s.basket_max),
            intra_affinity: s.intra_affinity,
            seed: self.seed.wrapping_add(seed_offset::SYNTH),
        }
    }

    pub fn context_mode(&self) -> ContextMode {
        match self.cooc.window {
            0 => ContextMode::WholeBasket,
            size => ContextMode::Window {
                size,
                weighted: self.cooc.weighted,
            },
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        let t = &self.train;
        TrainConfig {
            dim: t.dim,
            x_max: t.x_max,
            alpha_exp: t.alpha_exp,
            lr: t.lr,
            max_epochs: t.max_epochs,
            probe: None,
            patience: t.patience,
            min_delta: t.min_delta,
            seed: self.seed.wrapping_add(seed_offset::TRAIN),
            execution: if t.parallel {
                Execution::Parallel
            } else {
                Execution::Deterministic
            },
        }
    }

    pub fn tune_config(&self) -> Result<TuneConfig> {
        let t = &self.tune;
        Ok(TuneConfig {
            w_p: t.w_p,
            w_r: t.w_r,
            w_n: t.w_n,
            dist_p: t.dist_p.parse::<Distance>()?,
            dist_r: t.dist_r.parse::<Distance>()?,
            dist_n: t.dist_n.parse::<Distance>()?,
            margin: t.margin,
            lr: t.lr,
            epochs: t.epochs,
            seed: self.seed.wrapping_add(seed_offset::TUNE),
        })
    }

    fn transactions(&self) -> Result<PathBuf> {
        self.paths
            .transactions
            .clone()
            .ok_or_else(|| Error::InvalidConfig("paths.transactions is not set".into()))
    }

    fn metadata(&self) -> Result<PathBuf> {
        self.paths
            .metadata
            .clone()
            .ok_or_else(|| Error::InvalidConfig("paths.metadata is not set".into()))
    }

    fn gold(&self) -> PathBuf {
        self.paths
            .gold
            .clone()
            .unwrap_or_else(|| self.artifact(GOLD_FILE))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "prodspace",
    version,
    about = "Product embeddings from retail baskets"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// TOML pipeline configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Top-level seed; each stage derives its own from it.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Single-writer, bit-reproducible training (the default).
    #[arg(long, global = true, conflicts_with = "parallel")]
    pub deterministic: bool,
    /// Lock-free parallel training. Results vary run to run.
    #[arg(long, global = true)]
    pub parallel: bool,
    /// Overrides `paths.workdir`.
    #[arg(long, global = true, value_name = "DIR")]
    pub workdir: Option<PathBuf>,
    /// Overrides `paths.transactions`.
    #[arg(long, global = true, value_name = "PATH")]
    pub transactions: Option<PathBuf>,
    /// Overrides `paths.metadata`.
    #[arg(long, global = true, value_name = "PATH")]
    pub metadata: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic catalog, transactions and gold set.
    Synth,
    /// Read transactions and metadata and write the vocabulary.
    Ingest,
    /// Count co-occurrences over the vocabulary.
    Mco,
    /// Train the initial vector space from the co-occurrence matrix.
    Train,
    /// Build relate and negate graphs from the category hierarchy.
    Graph,
    /// Fine-tune the trained space with the relation graphs.
    Tune,
    /// Score a space against the gold set.
    Eval(EvalArgs),
    /// Nearest replacements for one item.
    Neighbors(NeighborsArgs),
    /// Embed a new item from category and related items.
    Coldstart(ColdstartArgs),
    /// Run synth-or-ingest, mco, train, graph, tune and eval in order.
    Pipeline,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Space to score; defaults to the tuned embeddings in the workdir.
    #[arg(long, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,
    /// Gold set; defaults to `paths.gold` or `gold.txt` in the workdir.
    #[arg(long, value_name = "PATH")]
    pub gold: Option<PathBuf>,
    /// Largest K to score (adds it to the configured list).
    #[arg(long, value_name = "N")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct NeighborsArgs {
    pub item: String,
    #[arg(long, value_name = "N", default_value_t = 10)]
    pub k: usize,
    /// Items that may not be proposed.
    #[arg(long, value_name = "ID,ID", value_delimiter = ',')]
    pub exclude: Vec<String>,
    /// Space to search; defaults to the tuned embeddings in the workdir.
    #[arg(long, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ColdstartArgs {
    /// Target category; its items in the space form the starting set.
    #[arg(long, value_name = "H1:H2", required_unless_present = "d")]
    pub category: Option<String>,
    /// Explicit starting set instead of a category.
    #[arg(long, value_name = "ID,ID", value_delimiter = ',')]
    pub d: Vec<String>,
    /// Associated items.
    #[arg(long, value_name = "ID,ID", value_delimiter = ',')]
    pub n: Vec<String>,
    /// Known similar items.
    #[arg(long, value_name = "ID,ID", value_delimiter = ',')]
    pub s: Vec<String>,
    /// Id written for the new row.
    #[arg(long, value_name = "ID", default_value = "NEW")]
    pub id: String,
    #[arg(long, value_name = "N", default_value_t = 10)]
    pub k: usize,
    #[arg(long, value_name = "PATH")]
    pub embeddings: Option<PathBuf>,
}

/// Outcome of one command: the summary line plus anything to print below it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub summary: String,
    pub detail: String,
}

impl Outcome {
    fn line(summary: String) -> Self {
        Outcome {
            summary,
            detail: String::new(),
        }
    }
}

/// Loads the config file (if any) and applies global flag overrides.
pub fn resolve_config(global: &GlobalArgs) -> Result<PipelineConfig> {
    let mut cfg = match &global.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = global.seed {
        cfg.seed = s;
    }
    if global.parallel {
        cfg.train.parallel = true;
    }
    if global.deterministic {
        cfg.train.parallel = false;
    }
    if let Some(w) = &global.workdir {
        cfg.paths.workdir = w.clone();
    }
    if let Some(t) = &global.transactions {
        cfg.paths.transactions = Some(t.clone());
    }
    if let Some(m) = &global.metadata {
        cfg.paths.metadata = Some(m.clone());
    }
    Ok(cfg)
}

fn ensure_workdir(cfg: &PipelineConfig) -> Result<()> {
    std::fs::create_dir_all(cfg.workdir()).map_err(|e| Error::io(cfg.workdir(), e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    atomic_write(path, |out: &mut dyn Write| out.write_all(text.as_bytes()))
}

pub fn cmd_synth(cfg: &PipelineConfig) -> Result<Outcome> {
    ensure_workdir(cfg)?;
    let sc = cfg.synth_config();
    let catalog = generate_catalog(&sc)?;
    let baskets = generate_baskets(&catalog, &sc)?;
    let gold = generate_gold(
        &catalog,
        cfg.synth.gold_cases,
        cfg.synth.gold_accepted,
        cfg.seed.wrapping_add(seed_offset::GOLD),
    )?;
    write_transactions(cfg.artifact(TRANSACTIONS_FILE), &baskets)?;
    write_metadata(cfg.artifact(METADATA_FILE), &catalog)?;
    gold.save(cfg.artifact(GOLD_FILE))?;
    Ok(Outcome::line(format!(
        "synth: {} items, {} baskets, {} gold cases -> {}",
        catalog.len(),
        baskets.len(),
        gold.len(),
        cfg.workdir().display()
    )))
}

fn read_inputs(
    cfg: &PipelineConfig,
) -> Result<(
    ItemCatalog,
    Vec<crate::ingest::Basket>,
    crate::ingest::IngestStats,
)> {
    let catalog = load_metadata(cfg.metadata()?)?;
    let (baskets, stats) = load_baskets(cfg.transactions()?, &catalog)?;
    Ok((catalog, baskets, stats))
}

pub fn cmd_ingest(cfg: &PipelineConfig) -> Result<Outcome> {
    let (_, baskets, stats) = read_inputs(cfg)?;
    let vocab = build_vocabulary(&baskets, cfg.vocab_cap)?;
    ensure_workdir(cfg)?;
    vocab.save(cfg.artifact(VOCAB_FILE))?;
    Ok(Outcome::line(format!(
        "ingest: {} rows, {} dropped, {} baskets, vocabulary {} -> {}",
        stats.rows,
        stats.dropped_rows,
        stats.baskets,
        vocab.len(),
        VOCAB_FILE
    )))
}

pub fn cmd_mco(cfg: &PipelineConfig) -> Result<Outcome> {
    let vocab = Vocabulary::load(cfg.artifact(VOCAB_FILE))?;
    let (_, baskets, _) = read_inputs(cfg)?;
    let mco = build_mco(&baskets, &vocab, cfg.context_mode())?;
    mco.save(cfg.artifact(MCO_FILE))?;
    Ok(Outcome::line(format!(
        "mco: {} items, {} nonzero pairs, {} total -> {}",
        mco.vocab_size(),
        mco.nnz(),
        mco.total_pairs(),
        MCO_FILE
    )))
}

pub fn cmd_train(cfg: &PipelineConfig) -> Result<Outcome> {
    let vocab = Arc::new(Vocabulary::load(cfg.artifact(VOCAB_FILE))?);
    let mco = CooccurrenceMatrix::load(cfg.artifact(MCO_FILE))?;
    if mco.vocab_size() != vocab.len() {
        return Err(Error::Shape(format!(
            "{MCO_FILE} has {} items but {VOCAB_FILE} has {}",
            mco.vocab_size(),
            vocab.len()
        )));
    }
    let started = Instant::now();
    let (params, log) = train(&mco, &cfg.train_config())?;
    let space = finalize(&params, vocab)?;
    space.save(cfg.artifact(PRE_FILE))?;
    write_text(&cfg.artifact(TRAIN_LOG_FILE), &log.to_csv())?;
    Ok(Outcome::line(format!(
        "train: {} epochs (best {}, early stop {}), {:.1}s -> {}",
        log.epochs_run(),
        log.best_epoch,
        log.stopped_early,
        started.elapsed().as_secs_f64(),
        PRE_FILE
    )))
}

pub fn cmd_graph(cfg: &PipelineConfig) -> Result<Outcome> {
    let vocab = Vocabulary::load(cfg.artifact(VOCAB_FILE))?;
    let catalog = load_metadata(cfg.metadata()?)?;
    let relate = build_relate_graph(&catalog, &vocab);
    let negate = build_negate_graph(
        &catalog,
        &vocab,
        cfg.graph.negate_per_item,
        cfg.seed.wrapping_add(seed_offset::NEGATE),
    );
    relate.save(cfg.artifact(RELATE_FILE), &vocab)?;
    negate.save(cfg.artifact(NEGATE_FILE), &vocab)?;
    Ok(Outcome::line(format!(
        "graph: {} relate edges, {} negate edges -> {}, {}",
        relate.len(),
        negate.len(),
        RELATE_FILE,
        NEGATE_FILE
    )))
}

pub fn cmd_tune(cfg: &PipelineConfig) -> Result<Outcome> {
    let space = EmbeddingSpace::load(cfg.artifact(PRE_FILE))?;
    let relate = RelationGraph::load(cfg.artifact(RELATE_FILE), space.vocab())?;
    let negate = RelationGraph::load(cfg.artifact(NEGATE_FILE), space.vocab())?;
    let tc = cfg.tune_config()?;
    let (tuned, log) = finetune(&space, &relate, &negate, &tc, None)?;
    tuned.save(cfg.artifact(POST_FILE))?;
    write_text(&cfg.artifact(TUNE_LOG_FILE), &log.to_csv())?;
    let first = log
        .records
        .first()
        .map(|r| r.objective.total)
        .unwrap_or(0.0);
    let last = log.last().map(|o| o.total).unwrap_or(first);
    Ok(Outcome::line(format!(
        "tune: {} epochs, objective {first:.4} -> {last:.4} -> {}",
        log.records.len().saturating_sub(1),
        POST_FILE
    )))
}

fn eval_section(label: &str, report: &EvalReport) -> String {
    let mut out = String::new();
    writeln!(out, "[{label}]").unwrap();
    out.push_str(&report.to_table());
    out.push_str(&report.machine_line());
    out
}

fn k_list(cfg: &PipelineConfig, extra: Option<usize>) -> Vec<usize> {
    let mut ks = cfg.eval.k_values.clone();
    ks.extend(extra);
    ks.sort_unstable();
    ks.dedup();
    ks
}

fn mrr_summary(report: &EvalReport) -> String {
    report
        .k_values
        .iter()
        .map(|k| format!("MRR@{k}={:.4}", report.mrr_at[k]))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_eval(cfg: &PipelineConfig, args: &EvalArgs) -> Result<Outcome> {
    let path = args
        .embeddings
        .clone()
        .unwrap_or_else(|| cfg.artifact(POST_FILE));
    let space = EmbeddingSpace::load(&path)?;
    let gold = GoldSet::load(args.gold.clone().unwrap_or_else(|| cfg.gold()))?;
    let report = evaluate(&space, &gold, &k_list(cfg, args.k))?;
    let label = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let text = eval_section(&label, &report);
    ensure_workdir(cfg)?;
    write_text(&cfg.artifact(EVAL_FILE), &text)?;
    Ok(Outcome {
        summary: format!(
            "eval: {} cases, {} -> {EVAL_FILE}",
            report.ranks.len(),
            mrr_summary(&report)
        ),
        detail: text,
    })
}

pub fn cmd_neighbors(cfg: &PipelineConfig, args: &NeighborsArgs) -> Result<Outcome> {
    let space = EmbeddingSpace::load(
        args.embeddings
            .clone()
            .unwrap_or_else(|| cfg.artifact(POST_FILE)),
    )?;
    let catalog = match &cfg.paths.metadata {
        Some(p) => Some(load_metadata(p)?),
        None => None,
    };
    let exclude: HashSet<String> = args.exclude.iter().cloned().collect();
    let list = get_item_replacement(&space, &args.item, args.k, &exclude)?;
    Ok(Outcome {
        summary: format!("neighbors: {} nearest to {}", list.len(), args.item),
        detail: list.to_table(&space, catalog.as_ref()),
    })
}

fn parse_category(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::InvalidConfig(format!("category `{s}` is not H1:H2"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn cmd_coldstart(cfg: &PipelineConfig, args: &ColdstartArgs) -> Result<Outcome> {
    let space = EmbeddingSpace::load(
        args.embeddings
            .clone()
            .unwrap_or_else(|| cfg.artifact(POST_FILE)),
    )?;
    let mut d_items = args.d.clone();
    if let Some(cat) = &args.category {
        let (h1, h2) = parse_category(cat)?;
        let catalog = load_metadata(cfg.metadata()?)?;
        d_items.extend(
            catalog
                .items_in_category(h1, h2)
                .into_iter()
                .filter(|id| space.vocab().index_of(id).is_some())
                .map(String::from),
        );
    }
    let req = ColdStartRequest {
        d_items,
        n_items: args.n.clone(),
        s_items: args.s.clone(),
        tune: cfg.tune_config()?,
    };
    let v = cold_start_item(&space, &req)?;
    EmbeddingSpace::from_rows([(args.id.clone(), v.clone())])?
        .save(cfg.artifact(COLDSTART_FILE))?;

    let mut extended = space.clone();
    let new = extended.push_row(args.id.clone(), &v)?;
    let list = rank_by_index(&extended, new, args.k, |_| true)?;
    let catalog = match &cfg.paths.metadata {
        Some(p) => Some(load_metadata(p)?),
        None => None,
    };
    Ok(Outcome {
        summary: format!(
            "coldstart: {} from {} category items, {} associated, {} similar -> {COLDSTART_FILE}",
            args.id,
            req.d_items.len(),
            req.n_items.len(),
            req.s_items.len()
        ),
        detail: list.to_table(&extended, catalog.as_ref()),
    })
}

/// Runs every stage in order. Without `paths.transactions`, synthetic
/// inputs are generated into the workdir first.
pub fn cmd_pipeline(cfg: &PipelineConfig) -> Result<Outcome> {
    let mut cfg = cfg.clone();
    let mut lines = Vec::new();
    if cfg.paths.transactions.is_none() {
        lines.push(cmd_synth(&cfg)?.summary);
        cfg.paths.transactions = Some(cfg.artifact(TRANSACTIONS_FILE));
        cfg.paths.metadata = Some(cfg.artifact(METADATA_FILE));
        cfg.paths
            .gold
            .get_or_insert_with(|| cfg.paths.workdir.join(GOLD_FILE));
    }
    lines.push(cmd_ingest(&cfg)?.summary);
    lines.push(cmd_mco(&cfg)?.summary);
    lines.push(cmd_train(&cfg)?.summary);
    lines.push(cmd_graph(&cfg)?.summary);
    lines.push(cmd_tune(&cfg)?.summary);

    let gold = GoldSet::load(cfg.gold())?;
    let ks = k_list(&cfg, None);
    let pre = evaluate(&EmbeddingSpace::load(cfg.artifact(PRE_FILE))?, &gold, &ks)?;
    let post = evaluate(&EmbeddingSpace::load(cfg.artifact(POST_FILE))?, &gold, &ks)?;
    let text = format!(
        "{}\n{}",
        eval_section("pre", &pre),
        eval_section("post", &post)
    );
    write_text(&cfg.artifact(EVAL_FILE), &text)?;
    lines.push(format!(
        "eval: pre {} | post {} -> {EVAL_FILE}",
        mrr_summary(&pre),
        mrr_summary(&post)
    ));
    Ok(Outcome {
        summary: format!("pipeline: done in {}", cfg.workdir().display()),
        detail: lines.join("\n") + "\n",
    })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = resolve_config(&cli.global)?;
    cfg.validate()?;
    match &cli.command {
        Command::Synth => cmd_synth(&cfg),
        Command::Ingest => cmd_ingest(&cfg),
        Command::Mco => cmd_mco(&cfg),
        Command::Train => cmd_train(&cfg),
        Command::Graph => cmd_graph(&cfg),
        Command::Tune => cmd_tune(&cfg),
        Command::Eval(a) => cmd_eval(&cfg, a),
        Command::Neighbors(a) => cmd_neighbors(&cfg, a),
        Command::Coldstart(a) => cmd_coldstart(&cfg, a),
        Command::Pipeline => cmd_pipeline(&cfg),
    }
}

/// Parses `args`, runs the command and prints its output. Returns the
/// process exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.detail);
            println!("{}", out.summary);
            0
        }
        Err(e) => {
            eprintln!("prodspace: {e}");
            1
        }
    }
}
