//! Embedding brand-new items with no transaction history.
//!
//! The new vector starts at the centroid of the target category `D`, is
//! pulled toward the associated items `N`, and then toward the known
//! similar items `S`. Each pull is a [`finetune`] pass in which only the new
//! row is free, so the existing catalog space is never perturbed.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{RelationGraph, RelationKind};
use crate::ingest::ItemMeta;
use crate::space::EmbeddingSpace;
use crate::tune::{finetune, TuneConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ColdStartRequest {
    /// Items of the target category; the starting point is their mean.
    pub d_items: Vec<String>,
    /// Associated items (refined first).
    pub n_items: Vec<String>,
    /// Known similar items (refined second).
    pub s_items: Vec<String>,
    /// Shared by both refinement passes. Negate settings are unused.
    pub tune: TuneConfig,
}

impl ColdStartRequest {
    pub fn new(d_items: Vec<String>) -> Self {
        ColdStartRequest {
            d_items,
            n_items: Vec::new(),
            s_items: Vec::new(),
            tune: TuneConfig::default(),
        }
    }
}

/// Mean of the given rows, summed left to right.
pub fn centroid(space: &EmbeddingSpace, rows: &[usize]) -> Result<Vec<f64>> {
    if rows.is_empty() {
        return Err(Error::EmptyTargetSet);
    }
    let mut v = vec![0.0; space.dim()];
    for &r in rows {
        for (acc, x) in v.iter_mut().zip(space.row(r)) {
            *acc += x;
        }
    }
    let m = rows.len() as f64;
    for x in v.iter_mut() {
        *x /= m;
    }
    Ok(v)
}

fn resolve_all(space: &EmbeddingSpace, ids: &[String]) -> Result<Vec<usize>> {
    ids.iter().map(|id| space.vocab().resolve(id)).collect()
}

fn placeholder_id(space: &EmbeddingSpace) -> String {
    let mut id = String::from("__cold_start__");
    while space.vocab().index_of(&id).is_some() {
        id.push('_');
    }
    id
}

/// Pulls `v` toward `targets` with every existing row frozen.
fn refine(
    space: &EmbeddingSpace,
    v: &[f64],
    targets: &[usize],
    cfg: &TuneConfig,
) -> Result<Vec<f64>> {
    let mut extended = space.clone();
    let new = extended.push_row(placeholder_id(space), v)?;
    let relate =
        RelationGraph::from_edges(RelationKind::Relate, targets.iter().map(|&t| (new, t, 1.0)))?;
    let negate = RelationGraph::empty(RelationKind::Negate);
    let frozen: HashSet<usize> = (0..new).collect();
    let cfg = TuneConfig {
        w_n: 0.0,
        ..cfg.clone()
    };
    let (tuned, _) = finetune(&extended, &relate, &negate, &cfg, Some(&frozen))?;
    Ok(tuned.row(new).to_vec())
}

/// Computes the vector for a new item. The input space is not modified;
/// use [`register_item`] to add the result.
pub fn cold_start_item(space: &EmbeddingSpace, req: &ColdStartRequest) -> Result<Vec<f64>> {
    if req.d_items.is_empty() {
        return Err(Error::EmptyTargetSet);
    }
    let d = resolve_all(space, &req.d_items)?;
    let n = resolve_all(space, &req.n_items)?;
    let s = resolve_all(space, &req.s_items)?;
    let mut v = centroid(space, &d)?;
    if !n.is_empty() {
        v = refine(space, &v, &n, &req.tune)?;
    }
    if !s.is_empty() {
        v = refine(space, &v, &s, &req.tune)?;
    }
    Ok(v)
}

/// Returns a copy of `space` with the new item appended as the last row.
pub fn register_item(space: &EmbeddingSpace, item: &ItemMeta, v: &[f64]) -> Result<EmbeddingSpace> {
    let mut out = space.clone();
    out.push_row(item.item_id.clone(), v)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::top_k_neighbors;
    use crate::tune::Distance;

    fn space() -> EmbeddingSpace {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        EmbeddingSpace::from_rows([
            ("a", vec![1.0, 0.0]),
            ("b", vec![0.0, 1.0]),
            ("s", vec![h, h]),
            ("z", vec![-1.0, -0.2]),
        ])
        .unwrap()
    }

    fn ids(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn meta(id: &str) -> ItemMeta {
        ItemMeta {
            item_id: id.into(),
            ide: 99,
            name: id.into(),
            h1: 1,
            h2: 1,
        }
    }

    #[test]
    fn no_refinement_gives_the_centroid() {
        let s = space();
        let v = cold_start_item(&s, &ColdStartRequest::new(ids(&["a", "b"]))).unwrap();
        assert_eq!(v, vec![0.5, 0.5]);
        let one = cold_start_item(&s, &ColdStartRequest::new(ids(&["z"]))).unwrap();
        assert_eq!(one, s.row(3));
    }

    #[test]
    fn similar_item_pull_reaches_quadratic_balance() {
        let s = space();
        let mut req = ColdStartRequest::new(ids(&["a", "b"]));
        req.s_items = ids(&["s"]);
        req.tune = TuneConfig {
            dist_r: Distance::L2Squared,
            lr: 0.1,
            epochs: 2000,
            ..TuneConfig::default()
        };
        let v = cold_start_item(&s, &req).unwrap();
        // Minimizer of |v - (0.5, 0.5)|^2 + |v - s|^2 with s fixed.
        let expect = (0.5 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        assert!((v[0] - expect).abs() < 1e-9 && (v[1] - expect).abs() < 1e-9);
        assert!(v[0] > 0.5);
    }

    #[test]
    fn errors() {
        let s = space();
        assert!(matches!(
            cold_start_item(&s, &ColdStartRequest::new(vec![])),
            Err(Error::EmptyTargetSet)
        ));
        let mut req = ColdStartRequest::new(ids(&["a"]));
        req.n_items = ids(&["nope"]);
        assert!(matches!(cold_start_item(&s, &req), Err(Error::UnknownItem(id)) if id == "nope"));
    }

    #[test]
    fn register_extends_a_copy() {
        let s = space();
        let before = top_k_neighbors(&s, "a", 3).unwrap();
        let out = register_item(&s, &meta("new"), &[0.9, 0.1]).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(out.len(), 5);
        assert_eq!(top_k_neighbors(&out, "new", 1).unwrap().entries[0].index, 0);
        let after = top_k_neighbors(&out, "a", 4).unwrap();
        for n in &before.entries {
            let m = after.entries.iter().find(|m| m.index == n.index).unwrap();
            assert_eq!(m.distance, n.distance);
        }
        assert!(matches!(
            register_item(&s, &meta("a"), &[1.0, 1.0]),
            Err(Error::DuplicateItem(_))
        ));
    }
}
