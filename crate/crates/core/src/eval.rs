//! Replacement quality against a hand-made gold set: MRR@K and Recall@K.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::{atomic_write, open_lines};
use crate::space::{rank_by_index, EmbeddingSpace};

pub const DEFAULT_K_VALUES: [usize; 2] = [1, 5];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldCase {
    pub query: String,
    /// Viable replacements; any of them counts as a hit.
    pub accepted: Vec<String>,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GoldSet {
    pub cases: Vec<GoldCase>,
}

impl GoldSet {
    pub fn new(cases: Vec<GoldCase>) -> Result<Self> {
        for c in &cases {
            if c.accepted.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "gold case `{}` has no accepted items",
                    c.query
                )));
            }
            if c.accepted.contains(&c.query) {
                return Err(Error::InvalidConfig(format!(
                    "gold case `{}` accepts itself",
                    c.query
                )));
            }
        }
        Ok(GoldSet { cases })
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    /// One case per line: `query|accepted_1,accepted_2,...|label`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cases = Vec::new();
        for (k, line) in open_lines(path)?.enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = k as u64 + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(3, '|');
            let query = parts.next().unwrap_or("").trim();
            let accepted = parts
                .next()
                .ok_or_else(|| Error::parse(path, lineno, "expected `query|accepted,...|label`"))?;
            let label = parts
                .next()
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from);
            if query.is_empty() {
                return Err(Error::parse(path, lineno, "empty query"));
            }
            let accepted: Vec<String> = accepted
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            if accepted.is_empty() {
                return Err(Error::parse(path, lineno, "no accepted items"));
            }
            if accepted.iter().any(|a| a == query) {
                return Err(Error::parse(
                    path,
                    lineno,
                    "query listed among its own accepted items",
                ));
            }
            cases.push(GoldCase {
                query: query.to_owned(),
                accepted,
                label,
            });
        }
        Ok(GoldSet { cases })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        atomic_write(path.as_ref(), |out: &mut dyn Write| {
            for c in &self.cases {
                writeln!(
                    out,
                    "{}|{}|{}",
                    c.query,
                    c.accepted.join(","),
                    c.label.as_deref().unwrap_or("")
                )?;
            }
            Ok(())
        })
    }
}

/// 1-based rank of the first accepted item among the query's `k` nearest
/// neighbors.
pub fn rank_of(
    space: &EmbeddingSpace,
    query: &str,
    accepted: &HashSet<String>,
    k: usize,
) -> Result<Option<usize>> {
    let q = space.vocab().resolve(query)?;
    let list = rank_by_index(space, q, k, |_| true)?;
    let vocab = space.vocab();
    let hit = list
        .indices()
        .position(|j| accepted.contains(vocab.item(j)));
    Ok(hit.map(|p| p + 1))
}

fn check_ranks(ranks: &[Option<usize>]) -> Result<()> {
    if ranks.is_empty() {
        return Err(Error::EmptyInput("no ranks to score"));
    }
    Ok(())
}

/// Mean reciprocal rank where misses and ranks beyond `k` score 0.
pub fn mrr_at_k(ranks: &[Option<usize>], k: usize) -> Result<f64> {
    check_ranks(ranks)?;
    let sum: f64 = ranks
        .iter()
        .map(|r| match r {
            Some(r) if *r >= 1 && *r <= k => 1.0 / *r as f64,
            _ => 0.0,
        })
        .sum();
    Ok(sum / ranks.len() as f64)
}

/// Fraction of cases hit within the first `k`.
pub fn recall_at_k(ranks: &[Option<usize>], k: usize) -> Result<f64> {
    check_ranks(ranks)?;
    let hits = ranks
        .iter()
        .filter(|r| matches!(r, Some(r) if *r >= 1 && *r <= k))
        .count();
    Ok(hits as f64 / ranks.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub k_values: Vec<usize>,
    /// Rank of each scored case at the largest K.
    pub ranks: Vec<(String, Option<usize>)>,
    pub mrr_at: BTreeMap<usize, f64>,
    pub recall_at: BTreeMap<usize, f64>,
    /// Gold ids missing from the vocabulary. A case is skipped when its query
    /// or all of its accepted items are missing.
    pub unknown_ids: Vec<String>,
    pub skipped_cases: usize,
}

impl EvalReport {
    pub fn mrr(&self, k: usize) -> Option<f64> {
        self.mrr_at.get(&k).copied()
    }

    pub fn recall(&self, k: usize) -> Option<f64> {
        self.recall_at.get(&k).copied()
    }

    /// Header and value lines, e.g. `mrr@1,mrr@5,recall@1,recall@5`.
    pub fn machine_line(&self) -> String {
        let names: Vec<String> = self
            .k_values
            .iter()
            .map(|k| format!("mrr@{k}"))
            .chain(self.k_values.iter().map(|k| format!("recall@{k}")))
            .collect();
        let values: Vec<String> = self
            .k_values
            .iter()
            .map(|k| format!("{:.6}", self.mrr_at[k]))
            .chain(
                self.k_values
                    .iter()
                    .map(|k| format!("{:.6}", self.recall_at[k])),
            )
            .collect();
        format!("{}\n{}\n", names.join(","), values.join(","))
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:>6}  {:>8}  {:>8}", "K", "MRR", "Recall").unwrap();
        for k in &self.k_values {
            writeln!(
                out,
                "{:>6}  {:>8.4}  {:>8.4}",
                k, self.mrr_at[k], self.recall_at[k]
            )
            .unwrap();
        }
        writeln!(
            out,
            "cases scored: {}, skipped: {}",
            self.ranks.len(),
            self.skipped_cases
        )
        .unwrap();
        if !self.unknown_ids.is_empty() {
            writeln!(out, "unknown ids: {}", self.unknown_ids.join(",")).unwrap();
        }
        out
    }
}

/// Scores every gold case once at the largest K and thresholds for the rest.
pub fn evaluate(space: &EmbeddingSpace, gold: &GoldSet, k_values: &[usize]) -> Result<EvalReport> {
    if k_values.is_empty() || k_values.contains(&0) {
        return Err(Error::InvalidConfig(
            "k values must be a non-empty list of positive integers".into(),
        ));
    }
    let mut ks = k_values.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let k_max = *ks.last().expect("non-empty");
    let vocab = space.vocab();
    let mut unknown: Vec<String> = Vec::new();
    let mut ranks = Vec::new();
    let mut skipped = 0;
    for case in &gold.cases {
        let mut missing = |id: &str| {
            if !unknown.iter().any(|u| u == id) {
                unknown.push(id.to_owned());
            }
        };
        if vocab.index_of(&case.query).is_none() {
            missing(&case.query);
            skipped += 1;
            continue;
        }
        let mut accepted = HashSet::new();
        for a in &case.accepted {
            if vocab.index_of(a).is_some() {
                accepted.insert(a.clone());
            } else {
                missing(a);
            }
        }
        if accepted.is_empty() {
            skipped += 1;
            continue;
        }
        ranks.push((
            case.query.clone(),
            rank_of(space, &case.query, &accepted, k_max)?,
        ));
    }
    if ranks.is_empty() {
        return Err(Error::EmptyInput("no gold case could be scored"));
    }
    let only: Vec<Option<usize>> = ranks.iter().map(|r| r.1).collect();
    let mut mrr_at = BTreeMap::new();
    let mut recall_at = BTreeMap::new();
    for &k in &ks {
        mrr_at.insert(k, mrr_at_k(&only, k)?);
        recall_at.insert(k, recall_at_k(&only, k)?);
    }
    Ok(EvalReport {
        k_values: ks,
        ranks,
        mrr_at,
        recall_at,
        unknown_ids: unknown,
        skipped_cases: skipped,
    })
}
