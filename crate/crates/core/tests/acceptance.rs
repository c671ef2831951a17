//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clap::Parser;
use prodspace::cli::{self, Cli};
use prodspace::coldstart::{cold_start_item, ColdStartRequest};
use prodspace::cooc::{build_mco, ContextMode, CooccurrenceMatrix};
use prodspace::embed::{
    finalize, glove_grad, glove_loss, init_params, train, GloveParams, TrainConfig,
};
use prodspace::eval::{evaluate, mrr_at_k, recall_at_k};
use prodspace::graph::{build_negate_graph, build_relate_graph, RelationGraph, RelationKind};
use prodspace::ingest::{build_vocabulary, Basket};
use prodspace::space::{top_k_neighbors, EmbeddingSpace};
use prodspace::synth::{generate_gold, SynthConfig};
use prodspace::tune::{finetune, objective_and_gradient, retrofit_faruqui, Distance, TuneConfig};

use common::{
    category_similarity, fixture, h1_of, neighbor_purity, numeric_grad, rel_err, Fixture,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn basket(items: Vec<String>) -> Basket {
    let n = items.len();
    Basket {
        basket_id: String::new(),
        items,
        quantities: vec![1; n],
        timestamp: 0,
        site_id: String::new(),
    }
}

fn mco_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ids: Vec<String> = (0..100).map(|i| format!("I{i:03}")).collect();
    let baskets: Vec<Basket> = (0..1000)
        .map(|_| {
            let n = rng.random_range(1..=12);
            basket(
                (0..n)
                    .map(|_| ids[rng.random_range(0..ids.len())].clone())
                    .collect(),
            )
        })
        .collect();
    let vocab = build_vocabulary(&baskets, 100).unwrap();

    let started = Instant::now();
    let mco = build_mco(&baskets, &vocab, ContextMode::WholeBasket).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    // Brute force: every position pair, counted once per basket per pair.
    let mut expect: HashMap<(usize, usize), f64> = HashMap::new();
    for b in &baskets {
        let mut seen = HashSet::new();
        for x in 0..b.items.len() {
            for y in 0..b.items.len() {
                let (a, c) = (
                    vocab.index_of(&b.items[x]).unwrap(),
                    vocab.index_of(&b.items[y]).unwrap(),
                );
                if a < c && seen.insert((a, c)) {
                    *expect.entry((a, c)).or_insert(0.0) += 1.0;
                }
            }
        }
    }
    let got: HashMap<(usize, usize), f64> = mco
        .entries()
        .iter()
        .map(|e| ((e.i as usize, e.j as usize), e.count))
        .collect();
    let equal = got == expect;
    verdict(
        equal && elapsed < 1.0,
        format!(
            "V={}, {} pairs, exact match {equal}, build {:.3}s (< 1s)",
            vocab.len(),
            got.len(),
            elapsed
        ),
    )
}

fn flatten(p: &GloveParams) -> Vec<f64> {
    [&p.w[..], &p.w_tilde[..], &p.b[..], &p.b_tilde[..]].concat()
}

fn unflatten(v: usize, dim: usize, x: &[f64]) -> GloveParams {
    let mut p = GloveParams::zeros(v, dim);
    let (w, rest) = x.split_at(v * dim);
    let (wt, rest) = rest.split_at(v * dim);
    let (b, bt) = rest.split_at(v);
    p.w.copy_from_slice(w);
    p.w_tilde.copy_from_slice(wt);
    p.b.copy_from_slice(b);
    p.b_tilde.copy_from_slice(bt);
    p
}

fn glove_gradient_check() -> Verdict {
    let (v, dim) = (20, 8);
    let cfg = TrainConfig {
        dim,
        ..TrainConfig::default()
    };
    let mut worst: f64 = 0.0;
    for instance in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + instance);
        let mut triples = Vec::new();
        for i in 0..v {
            for j in i + 1..v {
                if rng.random_bool(0.4) {
                    // Counts on both sides of x_max exercise both weight branches.
                    triples.push((i, j, rng.random_range(1.0..400.0f64).round()));
                }
            }
        }
        let mco = CooccurrenceMatrix::from_triples(v, triples).unwrap();
        let mut params = init_params(v, dim, instance).unwrap();
        for x in params
            .w
            .iter_mut()
            .chain(params.w_tilde.iter_mut())
            .chain(params.b.iter_mut())
            .chain(params.b_tilde.iter_mut())
        {
            *x = rng.random_range(-0.5..0.5);
        }
        let analytic = flatten(&glove_grad(&params, &mco, &cfg).unwrap());
        let numeric = numeric_grad(&flatten(&params), 1e-5, |x| {
            glove_loss(&unflatten(v, dim, x), &mco, &cfg).unwrap()
        });
        worst = worst.max(rel_err(&analytic, &numeric));
    }
    verdict(
        worst < 1e-4,
        format!("5 instances V=20 d=8, worst relative error {worst:.2e} (< 1e-4)"),
    )
}

fn random_graph(rng: &mut ChaCha8Rng, kind: RelationKind, v: usize, n: usize) -> RelationGraph {
    let mut pairs = HashSet::new();
    while pairs.len() < n {
        let (a, b) = (rng.random_range(0..v), rng.random_range(0..v));
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let mut pairs: Vec<_> = pairs.into_iter().collect();
    pairs.sort_unstable();
    RelationGraph::from_edges(
        kind,
        pairs
            .into_iter()
            .map(|(a, b)| (a, b, rng.random_range(0.5..2.0))),
    )
    .unwrap()
}

fn tune_gradient_check() -> Verdict {
    let (v, dim) = (12, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let q_hat: Vec<f64> = (0..v * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    // Offsets of at least 0.1 keep every |q - q_hat| coordinate away from the L1 kink.
    let q: Vec<f64> = q_hat
        .iter()
        .map(|h| h + rng.random_range(0.1..0.5) * if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    let relate = random_graph(&mut rng, RelationKind::Relate, v, 15);
    let negate = random_graph(&mut rng, RelationKind::Negate, v, 15);
    let min_gap = relate
        .edges()
        .iter()
        .chain(negate.edges())
        .flat_map(|e| (0..dim).map(move |k| (e.i * dim + k, e.j * dim + k)))
        .map(|(a, b)| (q[a] - q[b]).abs())
        .fold(f64::INFINITY, f64::min);

    let mut cases: Vec<(String, TuneConfig)> = Vec::new();
    for d in [Distance::L1, Distance::L2Squared, Distance::Cosine] {
        cases.push((
            format!("{d:?}"),
            TuneConfig {
                dist_p: d,
                dist_r: d,
                dist_n: d,
                margin: 50.0,
                ..TuneConfig::default()
            },
        ));
    }
    let dist_n: Vec<f64> = negate
        .edges()
        .iter()
        .map(|e| Distance::Cosine.eval(&q[e.i * dim..][..dim], &q[e.j * dim..][..dim]))
        .collect();
    let (lo, hi) = dist_n
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &d| (l.min(d), h.max(d)));
    cases.push((
        "hinge active".into(),
        TuneConfig {
            margin: hi + 0.5,
            ..TuneConfig::default()
        },
    ));
    cases.push((
        "hinge inactive".into(),
        TuneConfig {
            margin: lo * 0.5,
            ..TuneConfig::default()
        },
    ));

    let mut parts = Vec::new();
    let mut pass = min_gap > 1e-3;
    for (name, cfg) in &cases {
        let (obj, analytic) = objective_and_gradient(&q, &q_hat, dim, &relate, &negate, cfg);
        let numeric = numeric_grad(&q, 1e-5, |x| {
            objective_and_gradient(x, &q_hat, dim, &relate, &negate, cfg)
                .0
                .total
        });
        let err = rel_err(&analytic, &numeric);
        let active = obj.negate > 0.0;
        let expect_active = name != "hinge inactive";
        pass &= err < 1e-4 && active == expect_active;
        parts.push(format!("{name} {err:.1e}"));
    }
    verdict(
        pass,
        format!("relative error: {} (< 1e-4)", parts.join(", ")),
    )
}

struct Trained {
    fx: Fixture,
    space: EmbeddingSpace,
}

fn fixture_config() -> SynthConfig {
    SynthConfig {
        seed: 42,
        ..SynthConfig::default()
    }
}

fn train_fixture() -> (Trained, Verdict) {
    let started = Instant::now();
    let fx = fixture(&fixture_config());
    let cfg = TrainConfig {
        dim: 32,
        seed: 42,
        ..TrainConfig::default()
    };
    let (params, log) = train(&fx.mco, &cfg).unwrap();
    let space = finalize(&params, fx.vocab.clone()).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    let (intra, inter) = category_similarity(&space, &fx.catalog);
    let gap = intra - inter;
    let early = log.stopped_early && log.epochs_run() < 250_000;
    let v = verdict(
        gap >= 0.2 && early && elapsed < 120.0,
        format!(
            "intra {intra:.3} - inter {inter:.3} = {gap:.3} (>= 0.2), early stop at epoch {} (best {}), {elapsed:.1}s (< 120s)",
            log.epochs_run(),
            log.best_epoch
        ),
    );
    (Trained { fx, space }, v)
}

fn retrofit_effect(t: &Trained) -> (EmbeddingSpace, Verdict) {
    let Fixture { catalog, vocab, .. } = &t.fx;
    let relate = build_relate_graph(catalog, vocab);
    let negate = build_negate_graph(catalog, vocab, 5, 43);
    let (post, _) = finetune(&t.space, &relate, &negate, &TuneConfig::default(), None).unwrap();
    let gold = generate_gold(catalog, 50, 5, 44).unwrap();
    let pre_mrr = evaluate(&t.space, &gold, &[1, 5]).unwrap().mrr(5).unwrap();
    let post_mrr = evaluate(&post, &gold, &[1, 5]).unwrap().mrr(5).unwrap();
    let pre_pur = neighbor_purity(&t.space, catalog, 10);
    let post_pur = neighbor_purity(&post, catalog, 10);
    let ratio = post_mrr / pre_mrr;
    let v = verdict(
        ratio >= 1.2 && post_pur > pre_pur,
        format!(
            "MRR@5 {pre_mrr:.4} -> {post_mrr:.4} (x{ratio:.3}, need >= 1.2), top-10 same-category fraction {pre_pur:.4} -> {post_pur:.4} (need strict increase)"
        ),
    );
    (post, v)
}

fn faruqui_oracle() -> Verdict {
    let (v, dim) = (50, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let graph = random_graph(&mut rng, RelationKind::Relate, v, 200);
    let q_hat: Vec<f64> = (0..v * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let space = EmbeddingSpace::new(
        Arc::new(
            prodspace::ingest::Vocabulary::from_items((0..v).map(|i| format!("n{i}"))).unwrap(),
        ),
        dim,
        q_hat.clone(),
    )
    .unwrap();
    let degree = graph.degrees(v);
    let alpha: Vec<f64> = degree.iter().map(|&d| d.max(1) as f64).collect();
    let beta: Vec<f64> = graph.edges().iter().map(|e| e.weight).collect();
    let tuned = retrofit_faruqui(&space, &graph, &alpha, &beta, 100).unwrap();

    // Stationarity: (diag(alpha) + L_beta) Q = diag(alpha) Q_hat.
    let mut a = DMatrix::<f64>::zeros(v, v);
    for i in 0..v {
        a[(i, i)] = alpha[i];
    }
    for (e, &b) in graph.edges().iter().zip(&beta) {
        a[(e.i, e.i)] += b;
        a[(e.j, e.j)] += b;
        a[(e.i, e.j)] -= b;
        a[(e.j, e.i)] -= b;
    }
    let rhs = DMatrix::from_fn(v, dim, |i, k| alpha[i] * q_hat[i * dim + k]);
    let solved = a.lu().solve(&rhs).expect("system is nonsingular");
    let max_abs = (0..v)
        .flat_map(|i| (0..dim).map(move |k| (i, k)))
        .map(|(i, k)| (tuned.row(i)[k] - solved[(i, k)]).abs())
        .fold(0.0f64, f64::max);
    verdict(
        max_abs < 1e-6,
        format!(
            "50 nodes, {} edges, 100 sweeps, max |diff| {max_abs:.2e} (< 1e-6)",
            graph.len()
        ),
    )
}

fn cold_start(t: &Trained, post: &EmbeddingSpace) -> Verdict {
    let catalog = &t.fx.catalog;
    let target = 3u32;
    let d_items: Vec<String> = catalog
        .items_in_category(target, target * 100)
        .into_iter()
        .filter(|id| post.vocab().index_of(id).is_some())
        .map(String::from)
        .collect();

    // Empty N and S: plain mean, summed left to right.
    let rows: Vec<usize> = d_items
        .iter()
        .map(|id| post.vocab().index_of(id).unwrap())
        .collect();
    let mut mean = vec![0.0; post.dim()];
    for &r in &rows {
        for (m, x) in mean.iter_mut().zip(post.row(r)) {
            *m += x;
        }
    }
    for m in mean.iter_mut() {
        *m /= rows.len() as f64;
    }
    let plain = cold_start_item(post, &ColdStartRequest::new(d_items.clone())).unwrap();
    let exact = plain
        .iter()
        .zip(&mean)
        .all(|(a, b)| a.to_bits() == b.to_bits());

    // Full request: associated items from other categories, similar items from the target.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let others: Vec<&str> = catalog
        .items()
        .iter()
        .filter(|m| m.h1 != target)
        .map(|m| m.item_id.as_str())
        .collect();
    let mut req = ColdStartRequest::new(d_items.clone());
    req.n_items = others
        .choose_multiple(&mut rng, 2)
        .map(|s| s.to_string())
        .collect();
    req.s_items = d_items.choose_multiple(&mut rng, 2).cloned().collect();
    let v = cold_start_item(post, &req).unwrap();
    let extended = EmbeddingSpace::from_rows(
        post.vocab()
            .items()
            .iter()
            .cloned()
            .zip(post.rows().map(<[f64]>::to_vec))
            .chain([("NEW".to_string(), v.clone())]),
    )
    .unwrap();
    let top: Vec<usize> = top_k_neighbors(&extended, "NEW", 5)
        .unwrap()
        .indices()
        .collect();
    let in_target = top
        .iter()
        .filter(|&&j| h1_of(&extended, catalog, j) == target)
        .count();

    // Frozen rows stay bit-identical under a pull on the new row.
    let new = extended.len() - 1;
    let relate = RelationGraph::from_edges(
        RelationKind::Relate,
        rows.iter().take(3).map(|&r| (new, r, 1.0)),
    )
    .unwrap();
    let frozen: HashSet<usize> = (0..new).collect();
    let cfg = TuneConfig {
        w_n: 0.0,
        ..TuneConfig::default()
    };
    let (pulled, _) = finetune(
        &extended,
        &relate,
        &RelationGraph::empty(RelationKind::Negate),
        &cfg,
        Some(&frozen),
    )
    .unwrap();
    let untouched = (0..new).all(|i| {
        pulled
            .row(i)
            .iter()
            .zip(extended.row(i))
            .all(|(a, b)| a.to_bits() == b.to_bits())
    });
    let moved = pulled.row(new) != extended.row(new);

    verdict(
        exact && in_target >= 3 && untouched && moved,
        format!("mean(D) bit-exact {exact}, {in_target}/5 top neighbors in target category (>= 3), frozen rows bit-identical {untouched}"),
    )
}

fn mrr_formula() -> Verdict {
    let base = mrr_at_k(&[Some(1), Some(2), None], 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = true;
    for _ in 0..1000 {
        let n = rng.random_range(1..30);
        let ranks: Vec<Option<usize>> = (0..n)
            .map(|_| {
                if rng.random_bool(0.3) {
                    None
                } else {
                    Some(rng.random_range(1..=20))
                }
            })
            .collect();
        let mut prev = 0.0;
        for k in 1..=20 {
            let m = mrr_at_k(&ranks, k).unwrap();
            let r = recall_at_k(&ranks, k).unwrap();
            ok &= m >= prev && m <= r;
            prev = m;
        }
    }
    verdict(base == 0.5 && ok, format!("[1, 2, none] -> {base} (exactly 0.5), monotone in K and <= Recall@K on 1000 vectors: {ok}"))
}

fn pipeline_determinism() -> Verdict {
    let root = tempfile::tempdir().unwrap();
    let config = root.path().join("run.toml");
    std::fs::write(&config, "seed = 42\n\n[train]\ndim = 32\n").unwrap();
    let mut listings = Vec::new();
    for run in ["a", "b"] {
        let workdir = root.path().join(run);
        let args = Cli::try_parse_from([
            "prodspace",
            "--config",
            config.to_str().unwrap(),
            "--deterministic",
            "--workdir",
            workdir.to_str().unwrap(),
            "pipeline",
        ])
        .unwrap();
        cli::run(&args).unwrap_or_else(|e| panic!("pipeline run {run} failed: {e}"));
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&workdir)
            .unwrap()
            .map(|e| {
                let e = e.unwrap();
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        listings.push(files);
    }
    let names: Vec<&str> = listings[0].iter().map(|(n, _)| n.as_str()).collect();
    let required = [
        cli::PRE_FILE,
        cli::POST_FILE,
        cli::EVAL_FILE,
        cli::MCO_FILE,
        cli::RELATE_FILE,
        cli::NEGATE_FILE,
    ];
    let complete = required.iter().all(|r| names.contains(r));
    let identical = listings[0] == listings[1];
    verdict(
        identical && complete,
        format!(
            "{} artifacts, byte-identical across runs {identical}",
            names.len()
        ),
    )
}

fn throughput() -> Verdict {
    let (v, dim, nnz) = (1000, 64, 50_000);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pairs: HashSet<(usize, usize)> = HashSet::with_capacity(nnz);
    while pairs.len() < nnz {
        let (a, b) = (rng.random_range(0..v), rng.random_range(0..v));
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let mut pairs: Vec<_> = pairs.into_iter().collect();
    pairs.sort_unstable();
    let mco = CooccurrenceMatrix::from_triples(
        v,
        pairs
            .into_iter()
            .map(|(a, b)| (a, b, rng.random_range(1..300) as f64)),
    )
    .unwrap();
    let epochs = 5;
    let cfg = TrainConfig {
        dim,
        max_epochs: epochs,
        patience: epochs + 1,
        ..TrainConfig::default()
    };
    let started = Instant::now();
    let (_, log) = train(&mco, &cfg).unwrap();
    let rate = log.epochs_run() as f64 / started.elapsed().as_secs_f64();
    verdict(
        rate >= 1.0,
        format!(
            "V=1000 d=64 {} entries, {rate:.1} epochs/s (>= 1)",
            mco.nnz()
        ),
    )
}

fn main() {
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut() -> Verdict| {
        let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(false, format!("panicked: {msg}"))
        });
        println!(
            "[{:>2}] {} {name}: {}",
            results.len() + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        results.push((name, v));
    };

    run("co-occurrence matches brute-force counter", &mut mco_oracle);
    run(
        "GloVe gradient matches finite differences",
        &mut glove_gradient_check,
    );
    run(
        "fine-tune gradient matches finite differences",
        &mut tune_gradient_check,
    );
    let mut trained = None;
    run("training recovers planted categories", &mut || {
        let (t, v) = train_fixture();
        trained = Some(t);
        v
    });
    let mut post = None;
    run(
        "fine-tuning improves replacement ranking",
        &mut || match &trained {
            Some(t) => {
                let (p, v) = retrofit_effect(t);
                post = Some(p);
                v
            }
            None => verdict(false, "no trained fixture".into()),
        },
    );
    run(
        "retrofit sweeps reach the linear-system solution",
        &mut faruqui_oracle,
    );
    run(
        "cold start lands in the target category",
        &mut || match (&trained, &post) {
            (Some(t), Some(p)) => cold_start(t, p),
            _ => verdict(false, "no tuned fixture".into()),
        },
    );
    run("MRR@K formula and bounds", &mut mrr_formula);
    run(
        "deterministic pipeline is byte-reproducible",
        &mut pipeline_determinism,
    );
    run("training throughput floor", &mut throughput);

    let failed = results.iter().filter(|(_, v)| !v.pass).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
