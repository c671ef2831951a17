//! The item vector space and its cosine-distance queries.
//!
//! All rankings are exact scans ordered by ascending cosine distance, with
//! ties broken by ascending vocabulary index.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ingest::{ItemCatalog, Vocabulary};
use crate::io::{atomic_write, open_lines};

/// A `V x d` row-major matrix of item vectors tied to its vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSpace {
    vocab: Arc<Vocabulary>,
    dim: usize,
    data: Vec<f64>,
}

impl EmbeddingSpace {
    pub fn new(vocab: Arc<Vocabulary>, dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be at least 1".into()));
        }
        if data.len() != vocab.len() * dim {
            return Err(Error::Shape(format!(
                "{} values for {} items of dimension {dim}",
                data.len(),
                vocab.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::Shape("embedding contains non-finite values".into()));
        }
        Ok(EmbeddingSpace { vocab, dim, data })
    }

    /// Convenience constructor from explicit `(item_id, vector)` rows.
    pub fn from_rows<S: Into<String>>(
        rows: impl IntoIterator<Item = (S, Vec<f64>)>,
    ) -> Result<Self> {
        let mut ids = Vec::new();
        let mut data = Vec::new();
        let mut dim = None;
        for (id, v) in rows {
            match dim {
                None => dim = Some(v.len()),
                Some(d) if d != v.len() => {
                    return Err(Error::Shape(format!(
                        "row of length {} in a {d}-d space",
                        v.len()
                    )))
                }
                _ => {}
            }
            ids.push(id.into());
            data.extend(v);
        }
        let vocab = Vocabulary::from_items(ids)?;
        Self::new(Arc::new(vocab), dim.unwrap_or(1), data)
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn with_data(&self, data: Vec<f64>) -> Result<Self> {
        Self::new(self.vocab.clone(), self.dim, data)
    }

    pub(crate) fn push_row(&mut self, item_id: String, v: &[f64]) -> Result<usize> {
        if v.len() != self.dim {
            return Err(Error::Shape(format!(
                "vector of length {} in a {}-d space",
                v.len(),
                self.dim
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Shape("vector contains non-finite values".into()));
        }
        let k = Arc::make_mut(&mut self.vocab).push(item_id, 0)?;
        self.data.extend_from_slice(v);
        Ok(k)
    }

    /// Writes `V d`, then `item_id v1 .. vd` per row. Values use the
    /// shortest representation that parses back to the same `f64`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        atomic_write(path.as_ref(), |out: &mut dyn Write| {
            writeln!(out, "{} {}", self.len(), self.dim)?;
            let mut line = String::new();
            for (i, row) in self.rows().enumerate() {
                line.clear();
                line.push_str(self.vocab.item(i));
                for x in row {
                    write!(line, " {x}").expect("write to string");
                }
                writeln!(out, "{line}")?;
            }
            Ok(())
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut lines = open_lines(path)?;
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(path, 1, "missing header"))?
            .map_err(|e| Error::io(path, e))?;
        let mut h = header.split_whitespace();
        let (Some(v), Some(d), None) = (h.next(), h.next(), h.next()) else {
            return Err(Error::parse(path, 1, "expected `V d`"));
        };
        let v: usize = v.parse().map_err(|_| Error::parse(path, 1, "bad V"))?;
        let d: usize = d.parse().map_err(|_| Error::parse(path, 1, "bad d"))?;
        let mut ids = Vec::with_capacity(v);
        let mut data = Vec::with_capacity(v * d);
        for (k, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = k as u64 + 2;
            let mut parts = line.split_whitespace();
            let id = parts
                .next()
                .ok_or_else(|| Error::parse(path, lineno, "empty row"))?;
            let before = data.len();
            for p in parts {
                let x: f64 = p
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("bad value `{p}`")))?;
                data.push(x);
            }
            if data.len() - before != d {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected {d} values, found {}", data.len() - before),
                ));
            }
            ids.push(id.to_owned());
        }
        if ids.len() != v {
            return Err(Error::parse(
                path,
                1,
                format!("header says {v} rows, found {}", ids.len()),
            ));
        }
        Self::new(Arc::new(Vocabulary::from_items(ids)?), d, data)
    }
}

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

#[inline]
fn distance_with_norms(u: &[f64], v: &[f64], nu: f64, nv: f64) -> f64 {
    1.0 - dot(u, v) / (nu * nv)
}

/// `1 - cos(u, v)`, in `[0, 2]`.
pub fn cosine_distance(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Shape(format!(
            "vectors of length {} and {}",
            u.len(),
            v.len()
        )));
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(distance_with_norms(u, v, nu, nv))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// Nearest neighbors of `query`, closest first, never containing the query.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    pub query: usize,
    pub k: usize,
    pub entries: Vec<Neighbor>,
}

impl NeighborList {
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|n| n.index)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// CSV table `rank,item_id,distance,name,h1`. Name and h1 are blank for
    /// items missing from `catalog`.
    pub fn to_table(&self, space: &EmbeddingSpace, catalog: Option<&ItemCatalog>) -> String {
        let mut out = String::from("rank,item_id,distance,name,h1\n");
        for (rank, n) in self.entries.iter().enumerate() {
            let id = space.vocab().item(n.index);
            let meta = catalog.and_then(|c| c.get(id));
            let name = meta.map(|m| m.name.replace(',', " ")).unwrap_or_default();
            let h1 = meta.map(|m| m.h1.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{:.3},{},{}", rank + 1, id, n.distance, name, h1)
                .expect("write to string");
        }
        out
    }
}

fn by_distance(a: &Neighbor, b: &Neighbor) -> Ordering {
    a.distance
        .total_cmp(&b.distance)
        .then_with(|| a.index.cmp(&b.index))
}

/// Ranks every row except `query` (and any index rejected by `keep`) and
/// returns the best `k`. Zero-norm candidates sit at distance 1.
pub fn rank_by_index(
    space: &EmbeddingSpace,
    query: usize,
    k: usize,
    keep: impl Fn(usize) -> bool,
) -> Result<NeighborList> {
    if query >= space.len() {
        return Err(Error::Shape(format!(
            "index {query} outside a space of {}",
            space.len()
        )));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let q = space.row(query);
    let nq = norm(q);
    if nq == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut all: Vec<Neighbor> = space
        .rows()
        .enumerate()
        .filter(|&(j, _)| j != query && keep(j))
        .map(|(j, row)| {
            let nr = norm(row);
            let distance = if nr == 0.0 {
                1.0
            } else {
                distance_with_norms(q, row, nq, nr)
            };
            Neighbor { index: j, distance }
        })
        .collect();
    if all.len() > k {
        all.select_nth_unstable_by(k - 1, by_distance);
        all.truncate(k);
    }
    all.sort_unstable_by(by_distance);
    Ok(NeighborList {
        query,
        k,
        entries: all,
    })
}

pub fn top_k_neighbors(space: &EmbeddingSpace, item_id: &str, k: usize) -> Result<NeighborList> {
    let query = space.vocab().resolve(item_id)?;
    rank_by_index(space, query, k, |_| true)
}

/// Nearest replacements for `item_id`, skipping anything in `exclude`
/// (for example out-of-stock items).
pub fn get_item_replacement(
    space: &EmbeddingSpace,
    item_id: &str,
    k: usize,
    exclude: &HashSet<String>,
) -> Result<NeighborList> {
    let query = space.vocab().resolve(item_id)?;
    let vocab = space.vocab();
    rank_by_index(space, query, k, |j| !exclude.contains(vocab.item(j)))
}
