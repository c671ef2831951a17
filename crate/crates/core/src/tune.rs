//! Fine-tuning an embedding space against relation graphs.
//!
//! The main objective has three terms over the tuned vectors `q` and the
//! original vectors `q_hat`:
//!
//! ```text
//! J = w_p * sum_i      D_p(q_i, q_hat_i)
//!   + w_r * sum_(i,j)  D_r(q_i, q_j)              over relate edges
//!   + w_n * sum_(i,j)  max(m - D_n(q_i, q_j), 0)  over negate edges
//! ```
//!
//! Edge weights scale their pair's contribution. [`finetune`] minimizes `J`
//! by full-batch gradient descent, halving the step whenever a step would
//! raise the objective, so `J` never increases from one epoch to the next.
//!
//! [`retrofit_faruqui`] (closed-form Jacobi sweeps over the quadratic
//! preserve + relate objective) and [`counterfit`] (antonym margin, synonym
//! pull, neighborhood preservation) are the two alternative modes.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::RelationGraph;
use crate::space::{dot, norm, rank_by_index, EmbeddingSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    L1,
    L2Squared,
    Cosine,
}

impl std::str::FromStr for Distance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" | "L1" => Ok(Distance::L1),
            "l2" | "l2sq" | "l2_squared" | "L2" => Ok(Distance::L2Squared),
            "cosine" | "cos" => Ok(Distance::Cosine),
            other => Err(Error::InvalidConfig(format!("unknown distance `{other}`"))),
        }
    }
}

impl Distance {
    pub fn eval(self, u: &[f64], v: &[f64]) -> f64 {
        match self {
            Distance::L1 => u.iter().zip(v).map(|(a, b)| (a - b).abs()).sum(),
            Distance::L2Squared => u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum(),
            Distance::Cosine => {
                let (nu, nv) = (norm(u), norm(v));
                if nu == 0.0 || nv == 0.0 {
                    1.0
                } else {
                    1.0 - dot(u, v) / (nu * nv)
                }
            }
        }
    }

    /// Returns the distance and adds `scale * dD/du`, `scale * dD/dv` to the
    /// accumulators. L1 uses a zero subgradient at kinks; cosine is flat
    /// when either vector is zero.
    fn eval_grad(self, u: &[f64], v: &[f64], scale: f64, gu: &mut [f64], gv: &mut [f64]) -> f64 {
        match self {
            Distance::L1 => {
                let mut d = 0.0;
                for k in 0..u.len() {
                    let diff = u[k] - v[k];
                    d += diff.abs();
                    let s = if diff > 0.0 {
                        1.0
                    } else if diff < 0.0 {
                        -1.0
                    } else {
                        0.0
                    };
                    gu[k] += scale * s;
                    gv[k] -= scale * s;
                }
                d
            }
            Distance::L2Squared => {
                let mut d = 0.0;
                for k in 0..u.len() {
                    let diff = u[k] - v[k];
                    d += diff * diff;
                    gu[k] += scale * 2.0 * diff;
                    gv[k] -= scale * 2.0 * diff;
                }
                d
            }
            Distance::Cosine => {
                let (nu, nv) = (norm(u), norm(v));
                if nu == 0.0 || nv == 0.0 {
                    return 1.0;
                }
                let cos = dot(u, v) / (nu * nv);
                let inv = 1.0 / (nu * nv);
                for k in 0..u.len() {
                    gu[k] -= scale * (v[k] * inv - cos * u[k] / (nu * nu));
                    gv[k] -= scale * (u[k] * inv - cos * v[k] / (nv * nv));
                }
                1.0 - cos
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneConfig {
    pub w_p: f64,
    pub w_r: f64,
    pub w_n: f64,
    pub dist_p: Distance,
    pub dist_r: Distance,
    pub dist_n: Distance,
    /// Negate hinge margin.
    pub margin: f64,
    pub lr: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TuneConfig {
    fn default() -> Self {
        TuneConfig {
            w_p: 1.0,
            w_r: 1.0,
            w_n: 1.0,
            dist_p: Distance::L2Squared,
            dist_r: Distance::Cosine,
            dist_n: Distance::Cosine,
            margin: 1.0,
            lr: 0.1,
            epochs: 200,
            seed: 42,
        }
    }
}

impl TuneConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("w_p", self.w_p),
            ("w_r", self.w_r),
            ("w_n", self.w_n),
            ("margin", self.margin),
        ] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be a nonnegative number"
                )));
            }
        }
        if !(self.lr > 0.0) {
            return Err(Error::InvalidConfig("lr must be positive".into()));
        }
        Ok(())
    }
}

/// Objective value split by term (weights already applied).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TuneObjective {
    pub total: f64,
    pub preserve: f64,
    pub relate: f64,
    pub negate: f64,
}

fn check_graph(graph: &RelationGraph, v: usize) -> Result<()> {
    if graph.span() > v {
        return Err(Error::Shape(format!(
            "graph references index {} in a space of {v}",
            graph.span() - 1
        )));
    }
    Ok(())
}

fn pair_rows<'a>(
    q: &'a [f64],
    g: &'a mut [f64],
    dim: usize,
    i: usize,
    j: usize,
) -> (&'a [f64], &'a [f64], &'a mut [f64], &'a mut [f64]) {
    debug_assert!(i < j);
    let (lo, hi) = g.split_at_mut(j * dim);
    (
        &q[i * dim..(i + 1) * dim],
        &q[j * dim..(j + 1) * dim],
        &mut lo[i * dim..(i + 1) * dim],
        &mut hi[..dim],
    )
}

/// Objective and gradient for row-major vectors `q` against `q_hat`.
pub fn objective_and_gradient(
    q: &[f64],
    q_hat: &[f64],
    dim: usize,
    relate: &RelationGraph,
    negate: &RelationGraph,
    cfg: &TuneConfig,
) -> (TuneObjective, Vec<f64>) {
    let mut grad = vec![0.0; q.len()];
    let mut obj = TuneObjective::default();
    let mut scratch = vec![0.0; dim];

    if cfg.w_p > 0.0 {
        for ((qi, hi), gi) in q
            .chunks_exact(dim)
            .zip(q_hat.chunks_exact(dim))
            .zip(grad.chunks_exact_mut(dim))
        {
            obj.preserve += cfg.w_p * cfg.dist_p.eval_grad(qi, hi, cfg.w_p, gi, &mut scratch);
        }
    }
    if cfg.w_r > 0.0 {
        for e in relate.edges() {
            let (qi, qj, gi, gj) = pair_rows(q, &mut grad, dim, e.i, e.j);
            let s = cfg.w_r * e.weight;
            obj.relate += s * cfg.dist_r.eval_grad(qi, qj, s, gi, gj);
        }
    }
    if cfg.w_n > 0.0 {
        for e in negate.edges() {
            let (qi, qj, gi, gj) = pair_rows(q, &mut grad, dim, e.i, e.j);
            let s = cfg.w_n * e.weight;
            let d = cfg.dist_n.eval(qi, qj);
            let slack = cfg.margin - d;
            if slack > 0.0 {
                obj.negate += s * slack;
                cfg.dist_n.eval_grad(qi, qj, -s, gi, gj);
            }
        }
    }
    obj.total = obj.preserve + obj.relate + obj.negate;
    (obj, grad)
}

/// Evaluates the objective of `space` relative to the original `q_hat`.
pub fn tune_objective(
    space: &EmbeddingSpace,
    q_hat: &EmbeddingSpace,
    relate: &RelationGraph,
    negate: &RelationGraph,
    cfg: &TuneConfig,
) -> Result<(TuneObjective, Vec<f64>)> {
    if space.len() != q_hat.len() || space.dim() != q_hat.dim() {
        return Err(Error::Shape(
            "tuned and original spaces differ in shape".into(),
        ));
    }
    check_graph(relate, space.len())?;
    check_graph(negate, space.len())?;
    Ok(objective_and_gradient(
        space.as_slice(),
        q_hat.as_slice(),
        space.dim(),
        relate,
        negate,
        cfg,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuneRecord {
    pub epoch: usize,
    pub objective: TuneObjective,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TuneLog {
    /// Epoch 0 is the starting point.
    pub records: Vec<TuneRecord>,
}

impl TuneLog {
    /// `epoch,J,J_p,J_r,J_n` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,J,J_p,J_r,J_n\n");
        for r in &self.records {
            let o = r.objective;
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.epoch, o.total, o.preserve, o.relate, o.negate
            ));
        }
        out
    }

    pub fn last(&self) -> Option<&TuneObjective> {
        self.records.last().map(|r| &r.objective)
    }
}

const MAX_HALVINGS: usize = 40;

/// Full-batch descent with step halving. `eval` returns the total, a
/// loggable value and the gradient; frozen rows get no updates.
fn descend<O: Copy>(
    q0: &[f64],
    dim: usize,
    lr: f64,
    epochs: usize,
    frozen: &[bool],
    mut eval: impl FnMut(&[f64]) -> (f64, O, Vec<f64>),
    mut record: impl FnMut(usize, O),
) -> Result<Vec<f64>> {
    let mut q = q0.to_vec();
    let (mut total, first, mut grad) = eval(&q);
    if !total.is_finite() {
        return Err(Error::NonFinite { epoch: 0 });
    }
    record(0, first);
    let mask = |grad: &mut [f64]| {
        for (row, &f) in grad.chunks_exact_mut(dim).zip(frozen) {
            if f {
                row.fill(0.0);
            }
        }
    };
    mask(&mut grad);
    let mut trial = vec![0.0; q.len()];
    for epoch in 1..=epochs {
        if grad.iter().all(|&g| g == 0.0) {
            break;
        }
        let mut step = lr;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            for ((t, x), g) in trial.iter_mut().zip(&q).zip(&grad) {
                *t = x - step * g;
            }
            let (t_total, t_o, t_grad) = eval(&trial);
            if !t_total.is_finite() {
                step *= 0.5;
                continue;
            }
            if t_total <= total {
                accepted = Some((t_total, t_o, t_grad));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((t_total, t_o, mut t_grad)) => {
                std::mem::swap(&mut q, &mut trial);
                total = t_total;
                mask(&mut t_grad);
                grad = t_grad;
                record(epoch, t_o);
            }
            None => {
                // No descent step exists at this resolution: converged.
                break;
            }
        }
    }
    Ok(q)
}

fn frozen_mask(v: usize, frozen: Option<&HashSet<usize>>) -> Result<Vec<bool>> {
    let mut mask = vec![false; v];
    if let Some(set) = frozen {
        for &i in set {
            if i >= v {
                return Err(Error::Shape(format!(
                    "frozen index {i} outside a space of {v}"
                )));
            }
            mask[i] = true;
        }
    }
    Ok(mask)
}

/// Minimizes the preserve / relate / negate objective starting from
/// `space`, which also serves as `q_hat`. Rows listed in `frozen` are left
/// untouched but still take part in every distance.
pub fn finetune(
    space: &EmbeddingSpace,
    relate: &RelationGraph,
    negate: &RelationGraph,
    cfg: &TuneConfig,
    frozen: Option<&HashSet<usize>>,
) -> Result<(EmbeddingSpace, TuneLog)> {
    cfg.validate()?;
    if space.is_empty() {
        return Err(Error::EmptySpace);
    }
    check_graph(relate, space.len())?;
    check_graph(negate, space.len())?;
    let mask = frozen_mask(space.len(), frozen)?;
    let q_hat = space.as_slice();
    let dim = space.dim();
    let mut log = TuneLog::default();
    let q = descend(
        q_hat,
        dim,
        cfg.lr,
        cfg.epochs,
        &mask,
        |q| {
            let (o, g) = objective_and_gradient(q, q_hat, dim, relate, negate, cfg);
            (o.total, o, g)
        },
        |epoch, objective| log.records.push(TuneRecord { epoch, objective }),
    )?;
    Ok((space.with_data(q)?, log))
}

/// Jacobi sweeps of the closed-form retrofitting update
///
/// ```text
/// q_i <- (alpha_i q_hat_i + sum_j beta_ij q_j) / (alpha_i + sum_j beta_ij)
/// ```
///
/// `alpha` has one weight per row and `beta` one weight per edge of
/// `graph`, in edge order.
pub fn retrofit_faruqui(
    space: &EmbeddingSpace,
    graph: &RelationGraph,
    alpha: &[f64],
    beta: &[f64],
    iters: usize,
) -> Result<EmbeddingSpace> {
    let v = space.len();
    let dim = space.dim();
    check_graph(graph, v)?;
    if alpha.len() != v {
        return Err(Error::Shape(format!(
            "{} alpha weights for {v} rows",
            alpha.len()
        )));
    }
    if beta.len() != graph.len() {
        return Err(Error::Shape(format!(
            "{} beta weights for {} edges",
            beta.len(),
            graph.len()
        )));
    }
    if alpha
        .iter()
        .chain(beta)
        .any(|&w| !(w >= 0.0 && w.is_finite()))
    {
        return Err(Error::InvalidConfig(
            "retrofit weights must be nonnegative".into(),
        ));
    }
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); v];
    for (e, &b) in graph.edges().iter().zip(beta) {
        adjacency[e.i].push((e.j, b));
        adjacency[e.j].push((e.i, b));
    }
    for (i, nbrs) in adjacency.iter().enumerate() {
        let denom = alpha[i] + nbrs.iter().map(|&(_, b)| b).sum::<f64>();
        if denom == 0.0 {
            return Err(Error::UndefinedUpdate(i));
        }
    }
    let q_hat = space.as_slice();
    let mut q = q_hat.to_vec();
    let mut next = q.clone();
    for _ in 0..iters {
        for (i, nbrs) in adjacency.iter().enumerate() {
            if nbrs.is_empty() {
                continue;
            }
            let out = &mut next[i * dim..(i + 1) * dim];
            let mut denom = alpha[i];
            for (o, h) in out.iter_mut().zip(&q_hat[i * dim..(i + 1) * dim]) {
                *o = alpha[i] * h;
            }
            for &(j, b) in nbrs {
                denom += b;
                for (o, x) in out.iter_mut().zip(&q[j * dim..(j + 1) * dim]) {
                    *o += b * x;
                }
            }
            for o in out.iter_mut() {
                *o /= denom;
            }
        }
        std::mem::swap(&mut q, &mut next);
    }
    space.with_data(q)
}

/// Unit `alpha` per row and the graph's own edge weights as `beta`.
pub fn uniform_faruqui_weights(v: usize, graph: &RelationGraph) -> (Vec<f64>, Vec<f64>) {
    (
        vec![1.0; v],
        graph.edges().iter().map(|e| e.weight).collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterfitConfig {
    /// Minimum cosine distance enforced between antonyms.
    pub delta: f64,
    /// Antonym term weight.
    pub w1: f64,
    /// Synonym term weight.
    pub w2: f64,
    /// Neighborhood preservation weight.
    pub w3: f64,
    /// Size of each original-space neighborhood N(i).
    pub neighbors: usize,
    /// Optional cosine-distance cutoff for neighborhood membership.
    pub radius: Option<f64>,
    /// Optional group label per row; neighborhoods stay inside a group.
    pub groups: Option<Vec<u64>>,
    pub lr: f64,
}

impl Default for CounterfitConfig {
    fn default() -> Self {
        CounterfitConfig {
            delta: 1.0,
            w1: 1.0,
            w2: 1.0,
            w3: 1.0,
            neighbors: 10,
            radius: None,
            groups: None,
            lr: 0.1,
        }
    }
}

/// Counter-fitting objective split by term (weights applied).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CounterfitObjective {
    pub total: f64,
    pub antonym: f64,
    pub synonym: f64,
    pub preserve: f64,
}

/// Original-space neighborhoods `(i, j, d_hat(i, j))` used by the
/// preservation term.
pub fn counterfit_neighborhoods(
    space: &EmbeddingSpace,
    cfg: &CounterfitConfig,
) -> Result<Vec<(usize, usize, f64)>> {
    if let Some(g) = &cfg.groups {
        if g.len() != space.len() {
            return Err(Error::Shape(format!(
                "{} group labels for {} rows",
                g.len(),
                space.len()
            )));
        }
    }
    let mut out = Vec::new();
    if cfg.neighbors == 0 || cfg.w3 == 0.0 || space.len() < 2 {
        return Ok(out);
    }
    for i in 0..space.len() {
        if norm(space.row(i)) == 0.0 {
            continue;
        }
        let same_group = |j: usize| cfg.groups.as_ref().is_none_or(|g| g[j] == g[i]);
        let list = rank_by_index(space, i, cfg.neighbors, same_group)?;
        for n in list.entries {
            if cfg.radius.is_none_or(|r| n.distance <= r) {
                out.push((i, n.index, n.distance));
            }
        }
    }
    Ok(out)
}

fn counterfit_eval(
    q: &[f64],
    dim: usize,
    synonyms: &RelationGraph,
    antonyms: &RelationGraph,
    nbhd: &[(usize, usize, f64)],
    cfg: &CounterfitConfig,
) -> (CounterfitObjective, Vec<f64>) {
    let mut grad = vec![0.0; q.len()];
    let mut obj = CounterfitObjective::default();
    let cos = Distance::Cosine;
    if cfg.w1 > 0.0 && cfg.delta > 0.0 {
        for e in antonyms.edges() {
            let (qi, qj, gi, gj) = pair_rows(q, &mut grad, dim, e.i, e.j);
            let s = cfg.w1 * e.weight;
            let slack = cfg.delta - cos.eval(qi, qj);
            if slack > 0.0 {
                obj.antonym += s * slack;
                cos.eval_grad(qi, qj, -s, gi, gj);
            }
        }
    }
    if cfg.w2 > 0.0 {
        for e in synonyms.edges() {
            let (qi, qj, gi, gj) = pair_rows(q, &mut grad, dim, e.i, e.j);
            let s = cfg.w2 * e.weight;
            let d = cos.eval(qi, qj);
            if d > 0.0 {
                obj.synonym += s * d;
                cos.eval_grad(qi, qj, s, gi, gj);
            }
        }
    }
    if cfg.w3 > 0.0 {
        let mut gi = vec![0.0; dim];
        let mut gj = vec![0.0; dim];
        for &(i, j, d_hat) in nbhd {
            let (qi, qj) = (&q[i * dim..(i + 1) * dim], &q[j * dim..(j + 1) * dim]);
            let excess = cos.eval(qi, qj) - d_hat;
            if excess > 0.0 {
                obj.preserve += cfg.w3 * excess;
                gi.fill(0.0);
                gj.fill(0.0);
                cos.eval_grad(qi, qj, cfg.w3, &mut gi, &mut gj);
                for k in 0..dim {
                    grad[i * dim + k] += gi[k];
                    grad[j * dim + k] += gj[k];
                }
            }
        }
    }
    obj.total = obj.antonym + obj.synonym + obj.preserve;
    (obj, grad)
}

/// Counter-fitting objective and gradient of `space` relative to `original`.
pub fn counterfit_objective(
    space: &EmbeddingSpace,
    original: &EmbeddingSpace,
    synonyms: &RelationGraph,
    antonyms: &RelationGraph,
    cfg: &CounterfitConfig,
) -> Result<(CounterfitObjective, Vec<f64>)> {
    if space.len() != original.len() || space.dim() != original.dim() {
        return Err(Error::Shape(
            "tuned and original spaces differ in shape".into(),
        ));
    }
    check_graph(synonyms, space.len())?;
    check_graph(antonyms, space.len())?;
    let nbhd = counterfit_neighborhoods(original, cfg)?;
    Ok(counterfit_eval(
        space.as_slice(),
        space.dim(),
        synonyms,
        antonyms,
        &nbhd,
        cfg,
    ))
}

/// Gradient descent on `w1 * J_A + w2 * J_S + w3 * J_VSP` with cosine
/// distance throughout. The VSP term penalizes neighbors drifting further
/// apart than they were in the original space.
pub fn counterfit(
    space: &EmbeddingSpace,
    synonyms: &RelationGraph,
    antonyms: &RelationGraph,
    cfg: &CounterfitConfig,
    epochs: usize,
) -> Result<(EmbeddingSpace, Vec<CounterfitObjective>)> {
    if space.is_empty() {
        return Err(Error::EmptySpace);
    }
    if !(cfg.delta >= 0.0) {
        return Err(Error::InvalidConfig("delta must be nonnegative".into()));
    }
    if !(cfg.lr > 0.0) {
        return Err(Error::InvalidConfig("lr must be positive".into()));
    }
    check_graph(synonyms, space.len())?;
    check_graph(antonyms, space.len())?;
    let nbhd = counterfit_neighborhoods(space, cfg)?;
    let dim = space.dim();
    let mask = vec![false; space.len()];
    let mut log = Vec::new();
    let q = descend(
        space.as_slice(),
        dim,
        cfg.lr,
        epochs,
        &mask,
        |q| {
            let (o, g) = counterfit_eval(q, dim, synonyms, antonyms, &nbhd, cfg);
            (o.total, o, g)
        },
        |_, o| log.push(o),
    )?;
    Ok((space.with_data(q)?, log))
}
