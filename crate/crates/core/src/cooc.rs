//! Sparse co-occurrence counts over the vocabulary.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::{Basket, Vocabulary};
use crate::io::{atomic_write, open_lines};

/// How a basket is turned into co-occurring pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContextMode {
    /// Every unordered pair of distinct items in a basket counts once.
    #[default]
    WholeBasket,
    /// Pairs at most `size` positions apart in basket order. With
    /// `weighted`, a pair at distance `k` adds `1/k` instead of 1.
    Window { size: usize, weighted: bool },
}

/// One stored upper-triangle entry, `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub i: u32,
    pub j: u32,
    pub count: f64,
}

/// Symmetric co-occurrence matrix with a zero diagonal, stored once per
/// unordered pair and sorted by `(i, j)`.
///
/// Counts are whole numbers except in weighted window mode.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    v: usize,
    entries: Vec<Entry>,
    total: f64,
}

impl CooccurrenceMatrix {
    /// Builds from arbitrary `(i, j, count)` triples. Orientation is
    /// canonicalized and duplicates are summed.
    pub fn from_triples(
        v: usize,
        triples: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut acc: HashMap<(u32, u32), f64> = HashMap::new();
        for (i, j, c) in triples {
            if i >= v || j >= v {
                return Err(Error::Shape(format!(
                    "pair ({i}, {j}) outside vocabulary of {v}"
                )));
            }
            if i == j {
                return Err(Error::Shape(format!("diagonal entry ({i}, {i})")));
            }
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Shape(format!(
                    "count {c} for ({i}, {j}) must be positive"
                )));
            }
            let key = if i < j {
                (i as u32, j as u32)
            } else {
                (j as u32, i as u32)
            };
            *acc.entry(key).or_insert(0.0) += c;
        }
        Ok(Self::from_map(v, acc))
    }

    fn from_map(v: usize, acc: HashMap<(u32, u32), f64>) -> Self {
        let mut entries: Vec<Entry> = acc
            .into_iter()
            .map(|((i, j), count)| Entry { i, j, count })
            .collect();
        entries.sort_unstable_by_key(|e| (e.i, e.j));
        let total = entries.iter().map(|e| e.count).sum();
        CooccurrenceMatrix { v, entries, total }
    }

    pub fn vocab_size(&self) -> usize {
        self.v
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all stored counts (each unordered pair once).
    pub fn total_pairs(&self) -> f64 {
        self.total
    }

    /// Logical `X[i][j]`; symmetric, zero when absent or on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let key = if i < j {
            (i as u32, j as u32)
        } else {
            (j as u32, i as u32)
        };
        self.entries
            .binary_search_by_key(&key, |e| (e.i, e.j))
            .map(|k| self.entries[k].count)
            .unwrap_or(0.0)
    }

    /// Text form: header `v total_pairs`, then `i j count` sorted by `(i, j)`.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        atomic_write(path.as_ref(), |out: &mut dyn Write| {
            writeln!(out, "{} {}", self.v, self.total)?;
            for e in &self.entries {
                writeln!(out, "{} {} {}", e.i, e.j, e.count)?;
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
        let (Some(v), Some(_total), None) = (h.next(), h.next(), h.next()) else {
            return Err(Error::parse(path, 1, "expected `v total_pairs`"));
        };
        let v: usize = v.parse().map_err(|_| Error::parse(path, 1, "bad v"))?;
        let mut entries = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = k as u64 + 2;
            let bad = || Error::parse(path, lineno, "expected `i j count`");
            let mut parts = line.split_whitespace();
            let (Some(i), Some(j), Some(c), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad());
            };
            let i: u32 = i.parse().map_err(|_| bad())?;
            let j: u32 = j.parse().map_err(|_| bad())?;
            let count: f64 = c.parse().map_err(|_| bad())?;
            if i >= j || j as usize >= v || !(count > 0.0) {
                return Err(Error::parse(
                    path,
                    lineno,
                    "entry violates i < j < v, count > 0",
                ));
            }
            if let Some(prev) = entries.last() {
                let prev: &Entry = prev;
                if (prev.i, prev.j) >= (i, j) {
                    return Err(Error::parse(path, lineno, "entries not sorted by (i, j)"));
                }
            }
            entries.push(Entry { i, j, count });
        }
        let total = entries.iter().map(|e| e.count).sum();
        Ok(CooccurrenceMatrix { v, entries, total })
    }
}

/// Counts co-occurrences of vocabulary items. Items outside the vocabulary
/// are removed from each basket before pairs are formed; quantities are
/// ignored.
pub fn build_mco<'b>(
    baskets: impl IntoIterator<Item = &'b Basket>,
    vocab: &Vocabulary,
    mode: ContextMode,
) -> Result<CooccurrenceMatrix> {
    if vocab.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    if let ContextMode::Window { size: 0, .. } = mode {
        return Err(Error::InvalidConfig(
            "window size must be at least 1".into(),
        ));
    }
    let mut idx: Vec<u32> = Vec::new();
    match mode {
        ContextMode::WholeBasket => {
            let mut acc: HashMap<(u32, u32), u64> = HashMap::new();
            for basket in baskets {
                in_vocab(basket, vocab, &mut idx);
                idx.sort_unstable();
                idx.dedup();
                for (a, &i) in idx.iter().enumerate() {
                    for &j in &idx[a + 1..] {
                        *acc.entry((i, j)).or_insert(0) += 1;
                    }
                }
            }
            let acc = acc.into_iter().map(|(k, c)| (k, c as f64)).collect();
            Ok(CooccurrenceMatrix::from_map(vocab.len(), acc))
        }
        ContextMode::Window { size, weighted } => {
            let mut acc: HashMap<(u32, u32), f64> = HashMap::new();
            for basket in baskets {
                in_vocab(basket, vocab, &mut idx);
                for (a, &i) in idx.iter().enumerate() {
                    for (dist, &j) in idx[a + 1..].iter().take(size).enumerate() {
                        if i == j {
                            continue;
                        }
                        let key = if i < j { (i, j) } else { (j, i) };
                        let inc = if weighted {
                            1.0 / (dist + 1) as f64
                        } else {
                            1.0
                        };
                        *acc.entry(key).or_insert(0.0) += inc;
                    }
                }
            }
            Ok(CooccurrenceMatrix::from_map(vocab.len(), acc))
        }
    }
}

fn in_vocab(basket: &Basket, vocab: &Vocabulary, out: &mut Vec<u32>) {
    out.clear();
    out.extend(
        basket
            .items
            .iter()
            .filter_map(|item| vocab.index_of(item))
            .map(|k| k as u32),
    );
}

/// Inclusive count range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
}

/// Entry counts per bin. Entries whose count falls in no bin are tallied in
/// `overflow`, so `counts` plus `overflow` always sums to `nnz`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<u64>,
    pub overflow: u64,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }
}

/// Assigns each stored entry to the first bin containing its count.
pub fn mco_histogram(mco: &CooccurrenceMatrix, bins: &[Bin]) -> Histogram {
    let mut hist = Histogram {
        counts: vec![0; bins.len()],
        overflow: 0,
    };
    for e in mco.entries() {
        match bins.iter().position(|b| e.count >= b.lo && e.count <= b.hi) {
            Some(k) => hist.counts[k] += 1,
            None => hist.overflow += 1,
        }
    }
    hist
}

/// Equal-width integer bins of `width` covering `1..=max_count`.
pub fn uniform_bins(max_count: f64, width: u64) -> Vec<Bin> {
    let width = width.max(1) as f64;
    let mut bins = Vec::new();
    let mut lo = 1.0;
    while lo <= max_count {
        bins.push(Bin {
            lo,
            hi: lo + width - 1.0,
        });
        lo += width;
    }
    bins
}
