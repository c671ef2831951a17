//! GloVe-style training over a co-occurrence matrix.
//!
//! The objective is the weighted least-squares fit
//!
//! ```text
//! J = sum_ij f(X_ij) (w_i . w~_j + b_i + b~_j - ln X_ij)^2
//! f(x) = min(1, (x / x_max)^alpha)
//! ```
//!
//! summed over both orientations of every stored pair. Training runs
//! AdaGrad over a shuffled list of all directed entries, one pass per
//! epoch, and keeps the parameters from the epoch with the best probe
//! score (mean cosine similarity of known-related pairs).

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cooc::CooccurrenceMatrix;
use crate::error::{Error, Result};
use crate::ingest::Vocabulary;
use crate::space::EmbeddingSpace;

/// Update ordering for [`train`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    /// One writer, fixed shuffle: bit-reproducible for a given seed.
    #[default]
    Deterministic,
    /// Lock-free updates from all rayon workers. Not reproducible.
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub x_max: f64,
    pub alpha_exp: f64,
    pub lr: f64,
    pub max_epochs: usize,
    /// Probe pairs as vocabulary indices. `None` uses the
    /// [`DEFAULT_PROBE_PAIRS`] highest-count entries.
    pub probe: Option<Vec<(usize, usize)>>,
    pub patience: usize,
    /// Smallest probe gain that counts as an improvement.
    pub min_delta: f64,
    pub seed: u64,
    pub execution: Execution,
}

pub const DEFAULT_PROBE_PAIRS: usize = 200;

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 128,
            x_max: 250.0,
            alpha_exp: 0.75,
            lr: 0.05,
            max_epochs: 250_000,
            probe: None,
            patience: 50,
            min_delta: 1e-4,
            seed: 42,
            execution: Execution::Deterministic,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.dim == 0 {
            return bad("dim must be at least 1");
        }
        if !(self.x_max > 0.0) {
            return bad("x_max must be positive");
        }
        if !(self.alpha_exp > 0.0 && self.alpha_exp <= 1.0) {
            return bad("alpha_exp must lie in (0, 1]");
        }
        if !(self.lr > 0.0) {
            return bad("lr must be positive");
        }
        if self.max_epochs == 0 {
            return bad("max_epochs must be at least 1");
        }
        Ok(())
    }
}

/// `(x / x_max)^alpha` below the cap, 1 at or above it.
pub fn weight_fn(x: f64, x_max: f64, alpha_exp: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "co-occurrence count {x} must be positive"
        )));
    }
    Ok(weight(x, x_max, alpha_exp))
}

#[inline]
fn weight(x: f64, x_max: f64, alpha_exp: f64) -> f64 {
    if x < x_max {
        (x / x_max).powf(alpha_exp)
    } else {
        1.0
    }
}

/// Focal vectors `w`, context vectors `w_tilde` (both row-major `v x dim`)
/// and their biases.
#[derive(Debug, Clone, PartialEq)]
pub struct GloveParams {
    pub v: usize,
    pub dim: usize,
    pub w: Vec<f64>,
    pub w_tilde: Vec<f64>,
    pub b: Vec<f64>,
    pub b_tilde: Vec<f64>,
}

/// Gradients share the parameter layout.
pub type GloveGradient = GloveParams;

impl GloveParams {
    pub fn zeros(v: usize, dim: usize) -> Self {
        GloveParams {
            v,
            dim,
            w: vec![0.0; v * dim],
            w_tilde: vec![0.0; v * dim],
            b: vec![0.0; v],
            b_tilde: vec![0.0; v],
        }
    }

    pub fn w_row(&self, i: usize) -> &[f64] {
        &self.w[i * self.dim..(i + 1) * self.dim]
    }

    pub fn w_tilde_row(&self, i: usize) -> &[f64] {
        &self.w_tilde[i * self.dim..(i + 1) * self.dim]
    }

    fn check(&self, mco: &CooccurrenceMatrix) -> Result<()> {
        let vd = self.v * self.dim;
        if self.w.len() != vd
            || self.w_tilde.len() != vd
            || self.b.len() != self.v
            || self.b_tilde.len() != self.v
        {
            return Err(Error::Shape(
                "parameter arrays inconsistent with (v, dim)".into(),
            ));
        }
        if mco.vocab_size() != self.v {
            return Err(Error::Shape(format!(
                "matrix over {} items, parameters for {}",
                mco.vocab_size(),
                self.v
            )));
        }
        Ok(())
    }

    fn to_flat(&self) -> Vec<f64> {
        let mut flat = Vec::with_capacity(2 * self.v * (self.dim + 1));
        flat.extend_from_slice(&self.w);
        flat.extend_from_slice(&self.w_tilde);
        flat.extend_from_slice(&self.b);
        flat.extend_from_slice(&self.b_tilde);
        flat
    }

    fn from_flat(v: usize, dim: usize, flat: &[f64]) -> Self {
        let vd = v * dim;
        GloveParams {
            v,
            dim,
            w: flat[..vd].to_vec(),
            w_tilde: flat[vd..2 * vd].to_vec(),
            b: flat[2 * vd..2 * vd + v].to_vec(),
            b_tilde: flat[2 * vd + v..].to_vec(),
        }
    }

    fn all_finite(&self) -> bool {
        [&self.w, &self.w_tilde, &self.b, &self.b_tilde]
            .iter()
            .all(|a| a.iter().all(|x| x.is_finite()))
    }
}

/// Vectors uniform in `[-0.5/dim, 0.5/dim]`, zero biases.
pub fn init_params(v: usize, dim: usize, seed: u64) -> Result<GloveParams> {
    if v == 0 || dim == 0 {
        return Err(Error::InvalidConfig("v and dim must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / dim as f64;
    let mut p = GloveParams::zeros(v, dim);
    for x in p.w.iter_mut().chain(p.w_tilde.iter_mut()) {
        *x = (rng.random::<f64>() - 0.5) * scale;
    }
    Ok(p)
}

/// A directed training entry: focal `i`, context `j`.
#[derive(Debug, Clone, Copy)]
struct Directed {
    i: u32,
    j: u32,
    log_x: f64,
    weight: f64,
}

fn directed_entries(mco: &CooccurrenceMatrix, cfg: &TrainConfig) -> Vec<Directed> {
    let mut out = Vec::with_capacity(2 * mco.nnz());
    for e in mco.entries() {
        let log_x = e.count.ln();
        let weight = weight(e.count, cfg.x_max, cfg.alpha_exp);
        out.push(Directed {
            i: e.i,
            j: e.j,
            log_x,
            weight,
        });
        out.push(Directed {
            i: e.j,
            j: e.i,
            log_x,
            weight,
        });
    }
    out
}

#[inline]
fn residual(p: &GloveParams, i: usize, j: usize, log_x: f64) -> f64 {
    let wi = p.w_row(i);
    let wj = p.w_tilde_row(j);
    wi.iter().zip(wj).map(|(a, b)| a * b).sum::<f64>() + p.b[i] + p.b_tilde[j] - log_x
}

/// Objective value summed over both orientations of every stored entry.
pub fn glove_loss(
    params: &GloveParams,
    mco: &CooccurrenceMatrix,
    cfg: &TrainConfig,
) -> Result<f64> {
    params.check(mco)?;
    Ok(loss_unchecked(params, mco, cfg))
}

fn loss_unchecked(params: &GloveParams, mco: &CooccurrenceMatrix, cfg: &TrainConfig) -> f64 {
    let mut total = 0.0;
    for e in mco.entries() {
        let (i, j) = (e.i as usize, e.j as usize);
        let f = weight(e.count, cfg.x_max, cfg.alpha_exp);
        let log_x = e.count.ln();
        let r1 = residual(params, i, j, log_x);
        let r2 = residual(params, j, i, log_x);
        total += f * (r1 * r1 + r2 * r2);
    }
    total
}

/// Exact gradient of [`glove_loss`].
pub fn glove_grad(
    params: &GloveParams,
    mco: &CooccurrenceMatrix,
    cfg: &TrainConfig,
) -> Result<GloveGradient> {
    params.check(mco)?;
    let d = params.dim;
    let mut g = GloveParams::zeros(params.v, d);
    for e in directed_entries(mco, cfg) {
        let (i, j) = (e.i as usize, e.j as usize);
        let s = 2.0 * e.weight * residual(params, i, j, e.log_x);
        for k in 0..d {
            g.w[i * d + k] += s * params.w_tilde[j * d + k];
            g.w_tilde[j * d + k] += s * params.w[i * d + k];
        }
        g.b[i] += s;
        g.b_tilde[j] += s;
    }
    Ok(g)
}

/// Final vectors: `w + w_tilde`.
pub fn finalize(params: &GloveParams, vocab: Arc<Vocabulary>) -> Result<EmbeddingSpace> {
    let data = params
        .w
        .iter()
        .zip(&params.w_tilde)
        .map(|(a, b)| a + b)
        .collect();
    EmbeddingSpace::new(vocab, params.dim, data)
}

/// The `n` highest-count pairs, ties by `(i, j)`.
pub fn default_probe(mco: &CooccurrenceMatrix, n: usize) -> Vec<(usize, usize)> {
    let mut entries: Vec<_> = mco.entries().to_vec();
    entries.sort_by(|a, b| {
        b.count
            .total_cmp(&a.count)
            .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
    });
    entries
        .into_iter()
        .take(n)
        .map(|e| (e.i as usize, e.j as usize))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub loss: f64,
    /// Mean cosine similarity over the probe pairs.
    pub probe: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainLog {
    /// Epoch 0 is the initialization.
    pub records: Vec<EpochRecord>,
    /// Epoch whose parameters were returned.
    pub best_epoch: usize,
    pub stopped_early: bool,
}

impl TrainLog {
    pub fn epochs_run(&self) -> usize {
        self.records.last().map_or(0, |r| r.epoch)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,loss,probe\n");
        for r in &self.records {
            out.push_str(&format!("{},{},{}\n", r.epoch, r.loss, r.probe));
        }
        out
    }
}

/// Flat parameter storage: `w | w_tilde | b | b_tilde`.
#[derive(Clone, Copy)]
struct Layout {
    v: usize,
    dim: usize,
}

impl Layout {
    fn w(&self, i: usize) -> usize {
        i * self.dim
    }
    fn wt(&self, j: usize) -> usize {
        (self.v + j) * self.dim
    }
    fn b(&self, i: usize) -> usize {
        2 * self.v * self.dim + i
    }
    fn bt(&self, j: usize) -> usize {
        2 * self.v * self.dim + self.v + j
    }
}

trait Store {
    fn get(&self, k: usize) -> f64;
    fn set(&mut self, k: usize, x: f64);
}

struct Plain<'a>(&'a mut [f64]);

impl Store for Plain<'_> {
    #[inline]
    fn get(&self, k: usize) -> f64 {
        self.0[k]
    }
    #[inline]
    fn set(&mut self, k: usize, x: f64) {
        self.0[k] = x;
    }
}

/// Racy but well-defined shared storage for lock-free updates.
#[derive(Clone, Copy)]
struct Shared<'a>(&'a [AtomicU64]);

impl Store for Shared<'_> {
    #[inline]
    fn get(&self, k: usize) -> f64 {
        f64::from_bits(self.0[k].load(Ordering::Relaxed))
    }
    #[inline]
    fn set(&mut self, k: usize, x: f64) {
        self.0[k].store(x.to_bits(), Ordering::Relaxed);
    }
}

#[inline]
fn adagrad_step<P: Store, G: Store>(
    params: &mut P,
    gradsq: &mut G,
    lay: Layout,
    e: &Directed,
    lr: f64,
) {
    let (i, j) = (e.i as usize, e.j as usize);
    let (wi, wj) = (lay.w(i), lay.wt(j));
    let mut pred = params.get(lay.b(i)) + params.get(lay.bt(j));
    for k in 0..lay.dim {
        pred += params.get(wi + k) * params.get(wj + k);
    }
    let s = 2.0 * e.weight * (pred - e.log_x);
    if !s.is_finite() {
        return;
    }
    for k in 0..lay.dim {
        let a = params.get(wi + k);
        let c = params.get(wj + k);
        let ga = s * c;
        let gc = s * a;
        params.set(wi + k, a - lr * ga / gradsq.get(wi + k).sqrt());
        params.set(wj + k, c - lr * gc / gradsq.get(wj + k).sqrt());
        gradsq.set(wi + k, gradsq.get(wi + k) + ga * ga);
        gradsq.set(wj + k, gradsq.get(wj + k) + gc * gc);
    }
    for k in [lay.b(i), lay.bt(j)] {
        params.set(k, params.get(k) - lr * s / gradsq.get(k).sqrt());
        gradsq.set(k, gradsq.get(k) + s * s);
    }
}

fn probe_score(flat: &[f64], lay: Layout, probe: &[(usize, usize)]) -> f64 {
    if probe.is_empty() {
        return 0.0;
    }
    let d = lay.dim;
    let summed = |i: usize| (0..d).map(move |k| flat[lay.w(i) + k] + flat[lay.wt(i) + k]);
    let mut total = 0.0;
    for &(a, b) in probe {
        let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
        for (x, y) in summed(a).zip(summed(b)) {
            dot += x * y;
            na += x * x;
            nb += y * y;
        }
        if na > 0.0 && nb > 0.0 {
            total += dot / (na.sqrt() * nb.sqrt());
        }
    }
    total / probe.len() as f64
}

/// Trains from a fresh [`init_params`] draw.
pub fn train(mco: &CooccurrenceMatrix, cfg: &TrainConfig) -> Result<(GloveParams, TrainLog)> {
    cfg.validate()?;
    if mco.is_empty() {
        return Err(Error::EmptyCooccurrence);
    }
    let init = init_params(mco.vocab_size(), cfg.dim, cfg.seed)?;
    train_from(init, mco, cfg)
}

/// Continues training from the given parameters.
pub fn train_from(
    init: GloveParams,
    mco: &CooccurrenceMatrix,
    cfg: &TrainConfig,
) -> Result<(GloveParams, TrainLog)> {
    cfg.validate()?;
    init.check(mco)?;
    if mco.is_empty() {
        return Err(Error::EmptyCooccurrence);
    }
    let lay = Layout {
        v: init.v,
        dim: init.dim,
    };
    let probe = match &cfg.probe {
        Some(p) => {
            if let Some(&(a, b)) = p.iter().find(|&&(a, b)| a >= lay.v || b >= lay.v) {
                return Err(Error::Shape(format!(
                    "probe pair ({a}, {b}) outside vocabulary"
                )));
            }
            p.clone()
        }
        None => default_probe(mco, DEFAULT_PROBE_PAIRS),
    };
    let mut entries = directed_entries(mco, cfg);
    // Shuffle stream is seeded apart from the initialization stream.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_5eed_5eed_5eed);

    let mut flat = init.to_flat();
    let mut gradsq = vec![1.0f64; flat.len()];
    let shared: Option<(Vec<AtomicU64>, Vec<AtomicU64>)> = match cfg.execution {
        Execution::Deterministic => None,
        Execution::Parallel => Some((
            flat.iter().map(|x| AtomicU64::new(x.to_bits())).collect(),
            gradsq.iter().map(|x| AtomicU64::new(x.to_bits())).collect(),
        )),
    };

    let initial_loss = loss_unchecked(&init, mco, cfg);
    if !initial_loss.is_finite() {
        return Err(Error::NonFinite { epoch: 0 });
    }
    let mut records = vec![EpochRecord {
        epoch: 0,
        loss: initial_loss,
        probe: probe_score(&flat, lay, &probe),
    }];
    let mut best = f64::NEG_INFINITY;
    let mut best_epoch = 0;
    let mut best_flat = flat.clone();
    let mut stale = 0;
    let mut stopped_early = false;

    for epoch in 1..=cfg.max_epochs {
        entries.shuffle(&mut rng);
        match &shared {
            None => {
                let mut p = Plain(&mut flat);
                let mut g = Plain(&mut gradsq);
                for e in &entries {
                    adagrad_step(&mut p, &mut g, lay, e, cfg.lr);
                }
            }
            Some((p, g)) => {
                let chunk = entries
                    .len()
                    .div_ceil(rayon::current_num_threads().max(1) * 4)
                    .max(1);
                entries.par_chunks(chunk).for_each(|part| {
                    let mut p = Shared(p);
                    let mut g = Shared(g);
                    for e in part {
                        adagrad_step(&mut p, &mut g, lay, e, cfg.lr);
                    }
                });
                for (dst, src) in flat.iter_mut().zip(p.iter()) {
                    *dst = f64::from_bits(src.load(Ordering::Relaxed));
                }
            }
        }
        let current = GloveParams::from_flat(lay.v, lay.dim, &flat);
        let loss = loss_unchecked(&current, mco, cfg);
        if !loss.is_finite() || !current.all_finite() {
            return Err(Error::NonFinite { epoch });
        }
        let score = probe_score(&flat, lay, &probe);
        records.push(EpochRecord {
            epoch,
            loss,
            probe: score,
        });
        if score > best + cfg.min_delta {
            best = score;
            best_epoch = epoch;
            best_flat.copy_from_slice(&flat);
            stale = 0;
        } else {
            stale += 1;
            if cfg.patience > 0 && stale >= cfg.patience {
                stopped_early = true;
                break;
            }
        }
    }

    let params = GloveParams::from_flat(lay.v, lay.dim, &best_flat);
    Ok((
        params,
        TrainLog {
            records,
            best_epoch,
            stopped_early,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> TrainConfig {
        TrainConfig {
            dim: 4,
            ..TrainConfig::default()
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_fn(250.0, 250.0, 0.75).unwrap(), 1.0);
        assert_eq!(weight_fn(500.0, 250.0, 0.75).unwrap(), 1.0);
        assert_eq!(weight_fn(62.5, 250.0, 0.5).unwrap(), 0.5);
        assert!(weight_fn(0.0, 250.0, 0.75).is_err());
        assert!(weight_fn(-1.0, 250.0, 0.75).is_err());
    }

    #[test]
    fn init_is_seeded_and_bounded() {
        let a = init_params(10, 4, 7).unwrap();
        assert_eq!(a, init_params(10, 4, 7).unwrap());
        assert_ne!(a.w, init_params(10, 4, 8).unwrap().w);
        assert!(a.w.iter().chain(&a.w_tilde).all(|x| x.abs() <= 0.125));
        assert!(a.b.iter().chain(&a.b_tilde).all(|&x| x == 0.0));
        let one = init_params(1, 1, 0).unwrap();
        assert!(one.w[0].abs() <= 0.5 && one.w_tilde[0].abs() <= 0.5);
    }

    #[test]
    fn loss_of_zero_params_on_single_entry() {
        let e = std::f64::consts::E;
        let mco = CooccurrenceMatrix::from_triples(2, [(0, 1, e)]).unwrap();
        let p = GloveParams::zeros(2, 3);
        let l = glove_loss(&p, &mco, &cfg()).unwrap();
        let f = (e / 250.0).powf(0.75);
        assert!((l - 2.0 * f).abs() < 1e-15);
    }

    #[test]
    fn exact_fit_has_zero_loss_and_gradient() {
        // Biases alone carry ln X when vectors are orthogonal to contexts.
        let mco = CooccurrenceMatrix::from_triples(2, [(0, 1, 4.0)]).unwrap();
        let mut p = GloveParams::zeros(2, 2);
        p.b = vec![4f64.ln() / 2.0; 2];
        p.b_tilde = vec![4f64.ln() / 2.0; 2];
        p.w = vec![1.0, 0.0, 1.0, 0.0];
        p.w_tilde = vec![0.0, 1.0, 0.0, 1.0];
        assert_eq!(glove_loss(&p, &mco, &cfg()).unwrap(), 0.0);
        let g = glove_grad(&p, &mco, &cfg()).unwrap();
        assert!(g
            .w
            .iter()
            .chain(&g.w_tilde)
            .chain(&g.b)
            .chain(&g.b_tilde)
            .all(|&x| x == 0.0));
    }

    #[test]
    fn empty_matrix() {
        let mco = CooccurrenceMatrix::from_triples(3, []).unwrap();
        let p = init_params(3, 2, 1).unwrap();
        assert_eq!(glove_loss(&p, &mco, &cfg()).unwrap(), 0.0);
        let g = glove_grad(&p, &mco, &cfg()).unwrap();
        assert!(g.w.iter().all(|&x| x == 0.0));
        assert!(matches!(train(&mco, &cfg()), Err(Error::EmptyCooccurrence)));
    }

    #[test]
    fn shape_mismatch() {
        let mco = CooccurrenceMatrix::from_triples(3, [(0, 1, 1.0)]).unwrap();
        let p = init_params(2, 2, 1).unwrap();
        assert!(matches!(glove_loss(&p, &mco, &cfg()), Err(Error::Shape(_))));
    }

    #[test]
    fn two_items_descend() {
        let mco = CooccurrenceMatrix::from_triples(2, [(0, 1, 20.0)]).unwrap();
        let c = TrainConfig {
            max_epochs: 200,
            patience: 0,
            probe: Some(vec![]),
            ..cfg()
        };
        let (p, log) = train(&mco, &c).unwrap();
        let last = log.records.last().unwrap();
        assert_eq!(last.epoch, 200);
        assert!(last.loss < log.records[0].loss);
        assert!(glove_loss(&p, &mco, &c).unwrap() <= log.records[0].loss);
    }

    #[test]
    fn invalid_config() {
        let mco = CooccurrenceMatrix::from_triples(2, [(0, 1, 2.0)]).unwrap();
        for c in [
            TrainConfig { dim: 0, ..cfg() },
            TrainConfig {
                x_max: 0.0,
                ..cfg()
            },
            TrainConfig {
                alpha_exp: 1.5,
                ..cfg()
            },
            TrainConfig {
                max_epochs: 0,
                ..cfg()
            },
        ] {
            assert!(matches!(train(&mco, &c), Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn divergence_is_reported() {
        let mco = CooccurrenceMatrix::from_triples(2, [(0, 1, 1e300)]).unwrap();
        let c = TrainConfig {
            lr: 1e200,
            max_epochs: 5,
            ..cfg()
        };
        assert!(matches!(train(&mco, &c), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn finalize_sums_matrices() {
        let vocab = Arc::new(Vocabulary::from_items(["a".to_string(), "b".to_string()]).unwrap());
        let mut p = init_params(2, 3, 5).unwrap();
        let s = finalize(&p, vocab.clone()).unwrap();
        for i in 0..2 {
            for k in 0..3 {
                assert_eq!(s.row(i)[k], p.w[i * 3 + k] + p.w_tilde[i * 3 + k]);
            }
        }
        p.w_tilde = p.w.iter().map(|x| -x).collect();
        assert!(finalize(&p, vocab.clone())
            .unwrap()
            .as_slice()
            .iter()
            .all(|&x| x == 0.0));
        p.w_tilde = vec![0.0; 6];
        assert_eq!(finalize(&p, vocab).unwrap().as_slice(), &p.w[..]);
    }

    #[test]
    fn default_probe_takes_highest_counts() {
        let mco =
            CooccurrenceMatrix::from_triples(4, [(0, 1, 1.0), (2, 3, 9.0), (1, 2, 9.0)]).unwrap();
        assert_eq!(default_probe(&mco, 2), vec![(1, 2), (2, 3)]);
    }
}
