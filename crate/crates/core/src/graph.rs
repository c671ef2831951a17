//! Relation graphs over vocabulary indices derived from category metadata.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ingest::{ItemCatalog, Vocabulary};
use crate::io::{atomic_write, open_lines};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// Pairs that should end up close together.
    Relate,
    /// Pairs that should be pushed apart.
    Negate,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Relate => "relate",
            RelationKind::Negate => "negate",
        })
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relate" => Ok(RelationKind::Relate),
            "negate" => Ok(RelationKind::Negate),
            other => Err(Error::InvalidConfig(format!(
                "unknown graph kind `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Undirected weighted edges stored once with `i < j`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationGraph {
    kind: RelationKind,
    edges: Vec<Edge>,
}

impl RelationGraph {
    pub fn empty(kind: RelationKind) -> Self {
        RelationGraph {
            kind,
            edges: Vec::new(),
        }
    }

    /// Canonicalizes orientation and keeps the first weight seen for each pair.
    pub fn from_edges(
        kind: RelationKind,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::SelfEdge(a.to_string()));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "edge weight {w} must be positive"
                )));
            }
            map.entry((a.min(b), a.max(b))).or_insert(w);
        }
        Ok(RelationGraph {
            kind,
            edges: map
                .into_iter()
                .map(|((i, j), weight)| Edge { i, j, weight })
                .collect(),
        })
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by_key(&key, |e| (e.i, e.j))
            .is_ok()
    }

    /// Largest endpoint plus one, or 0 for an empty graph.
    pub fn span(&self) -> usize {
        self.edges.iter().map(|e| e.j + 1).max().unwrap_or(0)
    }

    /// Number of edges touching each index in `0..n`.
    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    /// `#kind <kind>` then `item_a item_b weight` per edge.
    pub fn save(&self, path: impl AsRef<Path>, vocab: &Vocabulary) -> Result<()> {
        if self.span() > vocab.len() {
            return Err(Error::Shape(
                "graph references indices outside the vocabulary".into(),
            ));
        }
        atomic_write(path.as_ref(), |out: &mut dyn Write| {
            writeln!(out, "#kind {}", self.kind)?;
            for e in &self.edges {
                writeln!(out, "{} {} {}", vocab.item(e.i), vocab.item(e.j), e.weight)?;
            }
            Ok(())
        })
    }

    pub fn load(path: impl AsRef<Path>, vocab: &Vocabulary) -> Result<Self> {
        let path = path.as_ref();
        let mut lines = open_lines(path)?;
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(path, 1, "missing `#kind` header"))?
            .map_err(|e| Error::io(path, e))?;
        let kind = header
            .strip_prefix("#kind ")
            .ok_or_else(|| Error::parse(path, 1, "expected `#kind relate|negate`"))?
            .trim()
            .parse()?;
        let mut edges = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = k as u64 + 2;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), Some(w), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::parse(
                    path,
                    lineno,
                    "expected `item_a item_b weight`",
                ));
            };
            let w: f64 = w
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad weight `{w}`")))?;
            edges.push((vocab.resolve(a)?, vocab.resolve(b)?, w));
        }
        Self::from_edges(kind, edges)
    }
}

/// Each vocabulary item's `(h1, h2)` when it has metadata with both levels
/// assigned.
fn categories(catalog: &ItemCatalog, vocab: &Vocabulary) -> Vec<Option<(u32, u32)>> {
    vocab
        .items()
        .iter()
        .map(|id| catalog.get(id).and_then(|m| m.category()))
        .collect()
}

/// Connects every pair of items with identical, fully assigned `(h1, h2)`.
pub fn build_relate_graph(catalog: &ItemCatalog, vocab: &Vocabulary) -> RelationGraph {
    let mut groups: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
    for (k, cat) in categories(catalog, vocab).into_iter().enumerate() {
        if let Some(c) = cat {
            groups.entry(c).or_default().push(k);
        }
    }
    let mut edges = Vec::new();
    for members in groups.values() {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                edges.push(Edge { i, j, weight: 1.0 });
            }
        }
    }
    edges.sort_unstable_by_key(|e| (e.i, e.j));
    RelationGraph {
        kind: RelationKind::Relate,
        edges,
    }
}

/// Gives each item up to `per_item` new edges to items with a different,
/// assigned `h1`. Items are visited in index order; partners already
/// joined to the item are not drawn again.
pub fn build_negate_graph(
    catalog: &ItemCatalog,
    vocab: &Vocabulary,
    per_item: usize,
    seed: u64,
) -> RelationGraph {
    let h1: Vec<Option<u32>> = vocab
        .items()
        .iter()
        .map(|id| catalog.get(id).map(|m| m.h1).filter(|&h| h != 0))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut edges = Vec::new();
    if per_item > 0 {
        for (i, hi) in h1.iter().enumerate() {
            let Some(hi) = hi else { continue };
            let candidates: Vec<usize> = h1
                .iter()
                .enumerate()
                .filter(|&(j, hj)| {
                    matches!(hj, Some(h) if h != hi) && !seen.contains(&(i.min(j), i.max(j)))
                })
                .map(|(j, _)| j)
                .collect();
            let take = per_item.min(candidates.len());
            for pick in sample(&mut rng, candidates.len(), take).into_iter() {
                let j = candidates[pick];
                let key = (i.min(j), i.max(j));
                seen.insert(key);
                edges.push(Edge {
                    i: key.0,
                    j: key.1,
                    weight: 1.0,
                });
            }
        }
    }
    edges.sort_unstable_by_key(|e| (e.i, e.j));
    RelationGraph {
        kind: RelationKind::Negate,
        edges,
    }
}

/// Builds a graph from explicit id pairs. `new_item`, when given, names an
/// item not yet in `vocab`; it resolves to index `vocab.len()`.
pub fn graph_from_pairs<A: AsRef<str>, B: AsRef<str>>(
    pairs: impl IntoIterator<Item = (A, B)>,
    vocab: &Vocabulary,
    kind: RelationKind,
    new_item: Option<&str>,
) -> Result<RelationGraph> {
    let resolve = |id: &str| match new_item {
        Some(n) if n == id => Ok(vocab.len()),
        _ => vocab.resolve(id),
    };
    let mut edges = Vec::new();
    for (a, b) in pairs {
        let (a, b) = (a.as_ref(), b.as_ref());
        if a == b {
            return Err(Error::SelfEdge(a.to_owned()));
        }
        edges.push((resolve(a)?, resolve(b)?, 1.0));
    }
    RelationGraph::from_edges(kind, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::ItemMeta;

    fn item(id: &str, ide: i64, h1: u32, h2: u32) -> ItemMeta {
        ItemMeta {
            item_id: id.into(),
            ide,
            name: id.into(),
            h1,
            h2,
        }
    }

    fn vocab_of(cat: &ItemCatalog) -> Vocabulary {
        Vocabulary::from_items(cat.items().iter().map(|m| m.item_id.clone())).unwrap()
    }

    /// The book rows of the sample inventory table.
    fn books() -> ItemCatalog {
        ItemCatalog::from_items([
            item("178234", 13, 1, 9),
            item("565121", 15, 1, 0),
            item("651651", 24, 1, 9),
            item("290909", 30, 1, 9),
            item("877123", 34, 1, 0),
            item("898234", 2, 11, 107),
        ])
        .unwrap()
    }

    #[test]
    fn shared_full_category_relates() {
        let cat = books();
        let v = vocab_of(&cat);
        let g = build_relate_graph(&cat, &v);
        let pairs: Vec<_> = g.edges().iter().map(|e| (e.i, e.j)).collect();
        assert_eq!(pairs, vec![(0, 2), (0, 3), (2, 3)]);
        assert!(!g.contains(0, 1));
        assert!(!g.contains(1, 4));
    }

    #[test]
    fn single_item_catalog_has_no_edges() {
        let cat = ItemCatalog::from_items([item("a", 1, 1, 1)]).unwrap();
        assert!(build_relate_graph(&cat, &vocab_of(&cat)).is_empty());
        assert!(build_negate_graph(&cat, &vocab_of(&cat), 3, 0).is_empty());
    }

    #[test]
    fn relate_ignores_row_order() {
        let cat = books();
        let v = vocab_of(&cat);
        let mut rows = cat.items().to_vec();
        rows.reverse();
        let rev = ItemCatalog::from_items(rows).unwrap();
        assert_eq!(build_relate_graph(&cat, &v), build_relate_graph(&rev, &v));
    }

    #[test]
    fn negate_zero_or_single_category() {
        let cat = books();
        let v = vocab_of(&cat);
        assert!(build_negate_graph(&cat, &v, 0, 1).is_empty());
        let mono = ItemCatalog::from_items([item("a", 1, 3, 1), item("b", 2, 3, 2)]).unwrap();
        assert!(build_negate_graph(&mono, &vocab_of(&mono), 2, 1).is_empty());
    }

    #[test]
    fn negate_two_by_two() {
        let cat = ItemCatalog::from_items([
            item("a1", 1, 1, 10),
            item("a2", 2, 1, 10),
            item("b1", 3, 2, 20),
            item("b2", 4, 2, 20),
        ])
        .unwrap();
        let v = vocab_of(&cat);
        for seed in 0..20 {
            let g = build_negate_graph(&cat, &v, 1, seed);
            // Candidate sets are the two items of the other category; each
            // visit adds one edge unless both are already joined.
            assert!((3..=4).contains(&g.len()), "seed {seed}: {} edges", g.len());
            assert!(g.edges().iter().all(|e| (e.i < 2) != (e.j < 2)));
            assert!(g.degrees(4).iter().all(|&d| d >= 1));
            assert_eq!(g, build_negate_graph(&cat, &v, 1, seed));
        }
        assert_eq!(build_negate_graph(&cat, &v, 2, 0).len(), 4);
    }

    #[test]
    fn pairs_canonicalize() {
        let v = Vocabulary::from_items(["A", "B", "C"].map(String::from)).unwrap();
        let g = graph_from_pairs([("A", "B"), ("B", "A")], &v, RelationKind::Relate, None).unwrap();
        assert_eq!(g.len(), 1);
        let star =
            graph_from_pairs([("A", "B"), ("A", "C")], &v, RelationKind::Relate, None).unwrap();
        assert_eq!(star.degrees(3), vec![2, 1, 1]);
        assert!(matches!(
            graph_from_pairs([("A", "A")], &v, RelationKind::Relate, None),
            Err(Error::SelfEdge(_))
        ));
        assert!(matches!(
            graph_from_pairs([("A", "Z")], &v, RelationKind::Relate, None),
            Err(Error::UnknownItem(_))
        ));
        let fresh =
            graph_from_pairs([("NEW", "C")], &v, RelationKind::Relate, Some("NEW")).unwrap();
        assert_eq!(
            fresh.edges()[0],
            Edge {
                i: 2,
                j: 3,
                weight: 1.0
            }
        );
    }

    #[test]
    fn file_round_trip() {
        let cat = books();
        let v = vocab_of(&cat);
        let g = build_negate_graph(&cat, &v, 2, 9);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("negate.graph");
        g.save(&p, &v).unwrap();
        assert!(std::fs::read_to_string(&p)
            .unwrap()
            .starts_with("#kind negate\n"));
        assert_eq!(RelationGraph::load(&p, &v).unwrap(), g);
    }
}
