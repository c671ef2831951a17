//! Parsing of item metadata and transaction logs.
//!
//! Both inputs are comma-separated UTF-8 text with a single header row:
//!
//! ```text
//! ItemId,IDE,ItemName,H1,H2
//! BasketId,ItemId,SiteId,TimeStamp,Quantity,CustomerId,Available
//! ```
//!
//! Transactions are grouped into [`Basket`]s. Repeated lines for the same
//! item inside a basket are merged and their quantities summed, so every
//! basket lists each item at most once.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::io::{atomic_write, open_lines};

pub const METADATA_HEADER: [&str; 5] = ["ItemId", "IDE", "ItemName", "H1", "H2"];
pub const TRANSACTIONS_HEADER: [&str; 7] = [
    "BasketId",
    "ItemId",
    "SiteId",
    "TimeStamp",
    "Quantity",
    "CustomerId",
    "Available",
];

/// One row of the inventory metadata. A category id of 0 means unassigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemMeta {
    pub item_id: String,
    pub ide: i64,
    pub name: String,
    pub h1: u32,
    pub h2: u32,
}

impl ItemMeta {
    /// The (h1, h2) pair when both levels are assigned.
    pub fn category(&self) -> Option<(u32, u32)> {
        (self.h1 != 0 && self.h2 != 0).then_some((self.h1, self.h2))
    }
}

/// Item metadata in file order with lookup by id.
#[derive(Debug, Clone, Default)]
pub struct ItemCatalog {
    items: Vec<ItemMeta>,
    by_id: HashMap<String, usize>,
}

impl ItemCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a catalog, rejecting duplicate ids and IDE tags.
    pub fn from_items(items: impl IntoIterator<Item = ItemMeta>) -> Result<Self> {
        let mut catalog = Self::new();
        for item in items {
            catalog.insert(item)?;
        }
        Ok(catalog)
    }

    pub fn insert(&mut self, item: ItemMeta) -> Result<()> {
        if self.by_id.contains_key(&item.item_id) {
            return Err(Error::DuplicateItem(item.item_id));
        }
        if self.items.iter().any(|m| m.ide == item.ide) {
            return Err(Error::DuplicateIde(item.ide));
        }
        self.by_id.insert(item.item_id.clone(), self.items.len());
        self.items.push(item);
        Ok(())
    }

    pub fn get(&self, item_id: &str) -> Option<&ItemMeta> {
        self.by_id.get(item_id).map(|&i| &self.items[i])
    }

    pub fn contains(&self, item_id: &str) -> bool {
        self.by_id.contains_key(item_id)
    }

    pub fn items(&self) -> &[ItemMeta] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Ids of all items whose category tuple equals `(h1, h2)`, in file order.
    pub fn items_in_category(&self, h1: u32, h2: u32) -> Vec<&str> {
        self.items
            .iter()
            .filter(|m| m.h1 == h1 && m.h2 == h2)
            .map(|m| m.item_id.as_str())
            .collect()
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::parse(path, line, format!("{other:?}")),
    }
}

fn check_id(path: &Path, line: u64, what: &str, id: &str) -> Result<()> {
    if id.is_empty() {
        return Err(Error::parse(path, line, format!("empty {what}")));
    }
    if id.chars().any(char::is_whitespace) {
        return Err(Error::parse(
            path,
            line,
            format!("{what} `{id}` contains whitespace"),
        ));
    }
    Ok(())
}

/// Loads the metadata file. Unquoted commas inside `ItemName` are tolerated:
/// the first two and last two columns are fixed and the rest is the name.
pub fn load_metadata(path: impl AsRef<Path>) -> Result<ItemCatalog> {
    let path = path.as_ref();
    let mut reader = csv_reader(path)?;
    let mut catalog = ItemCatalog::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() < 5 {
            return Err(Error::parse(
                path,
                line,
                format!("expected 5 columns, found {}", record.len()),
            ));
        }
        let n = record.len();
        let item_id = record[0].to_owned();
        check_id(path, line, "ItemId", &item_id)?;
        let ide = record[1]
            .parse::<i64>()
            .map_err(|_| Error::parse(path, line, format!("bad IDE `{}`", &record[1])))?;
        let name = (2..n - 2).map(|k| &record[k]).collect::<Vec<_>>().join(",");
        let parse_cat = |s: &str, col: &str| {
            s.parse::<u32>()
                .map_err(|_| Error::parse(path, line, format!("bad {col} `{s}`")))
        };
        let h1 = parse_cat(&record[n - 2], "H1")?;
        let h2 = parse_cat(&record[n - 1], "H2")?;
        catalog.insert(ItemMeta {
            item_id,
            ide,
            name,
            h1,
            h2,
        })?;
    }
    Ok(catalog)
}

pub fn write_metadata(path: impl AsRef<Path>, catalog: &ItemCatalog) -> Result<()> {
    atomic_write(path.as_ref(), |out| {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(METADATA_HEADER)?;
        for m in catalog.items() {
            w.write_record([
                m.item_id.as_str(),
                &m.ide.to_string(),
                &m.name,
                &m.h1.to_string(),
                &m.h2.to_string(),
            ])?;
        }
        w.flush()
    })
}

/// One transaction: a set of distinct items bought together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basket {
    pub basket_id: String,
    pub items: Vec<String>,
    pub quantities: Vec<u32>,
    pub timestamp: i64,
    pub site_id: String,
}

impl Basket {
    /// Starts a basket from its first kept row.
    fn start(row: TransactionRow) -> Self {
        Basket {
            basket_id: row.basket_id,
            items: vec![row.item_id],
            quantities: vec![row.quantity],
            timestamp: row.timestamp,
            site_id: row.site_id,
        }
    }

    fn merge(&mut self, item_id: String, quantity: u32) {
        match self.items.iter().position(|i| *i == item_id) {
            Some(k) => self.quantities[k] = self.quantities[k].saturating_add(quantity),
            None => {
                self.items.push(item_id);
                self.quantities.push(quantity);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// A parsed transaction line. `customer_id` and `available` are carried
/// through but not used downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionRow {
    pub basket_id: String,
    pub item_id: String,
    pub site_id: String,
    pub timestamp: i64,
    pub quantity: u32,
    pub customer_id: String,
    pub available: String,
}

/// Counters collected while reading transactions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub rows: u64,
    /// Rows whose item id is not in the catalog.
    pub dropped_rows: u64,
    /// Baskets with no known items at all; never emitted.
    pub empty_baskets: u64,
    pub baskets: u64,
}

struct RowReader {
    path: PathBuf,
    records: csv::StringRecordsIntoIter<File>,
}

impl RowReader {
    fn open(path: &Path) -> Result<Self> {
        Ok(RowReader {
            path: path.to_owned(),
            records: csv_reader(path)?.into_records(),
        })
    }

    fn next_row(&mut self) -> Option<Result<TransactionRow>> {
        let record = match self.records.next()? {
            Ok(r) => r,
            Err(e) => return Some(Err(csv_error(&self.path, e))),
        };
        Some(parse_row(&self.path, &record))
    }
}

fn parse_row(path: &Path, record: &csv::StringRecord) -> Result<TransactionRow> {
    let line = record.position().map(|p| p.line()).unwrap_or(0);
    if record.len() != TRANSACTIONS_HEADER.len() {
        return Err(Error::parse(
            path,
            line,
            format!("expected 7 columns, found {}", record.len()),
        ));
    }
    check_id(path, line, "BasketId", &record[0])?;
    let timestamp = record[3]
        .parse::<i64>()
        .map_err(|_| Error::parse(path, line, format!("bad TimeStamp `{}`", &record[3])))?;
    let quantity = match record[4].parse::<u32>() {
        Ok(q) if q > 0 => q,
        _ => {
            return Err(Error::parse(
                path,
                line,
                format!("bad Quantity `{}`", &record[4]),
            ))
        }
    };
    Ok(TransactionRow {
        basket_id: record[0].to_owned(),
        item_id: record[1].to_owned(),
        site_id: record[2].to_owned(),
        timestamp,
        quantity,
        customer_id: record[5].to_owned(),
        available: record[6].to_owned(),
    })
}

/// Streaming basket reader. Holds one basket's rows at a time plus the set
/// of basket ids already emitted, which it uses to reject a basket whose
/// rows are split across the file.
pub struct BasketStream<'a> {
    rows: RowReader,
    catalog: &'a ItemCatalog,
    current: Option<(String, Option<Basket>)>,
    finished: HashSet<String>,
    stats: IngestStats,
    done: bool,
}

impl BasketStream<'_> {
    pub fn stats(&self) -> IngestStats {
        self.stats
    }

    fn close_current(&mut self) -> Option<Basket> {
        let (id, basket) = self.current.take()?;
        self.finished.insert(id);
        match basket {
            Some(b) => {
                self.stats.baskets += 1;
                Some(b)
            }
            None => {
                self.stats.empty_baskets += 1;
                None
            }
        }
    }
}

impl Iterator for BasketStream<'_> {
    type Item = Result<Basket>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            let row = match self.rows.next_row() {
                None => {
                    self.done = true;
                    break;
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e));
                }
                Some(Ok(row)) => row,
            };
            self.stats.rows += 1;
            let known = self.catalog.contains(&row.item_id);
            if !known {
                self.stats.dropped_rows += 1;
            }
            let same = matches!(&self.current, Some((id, _)) if *id == row.basket_id);
            if same {
                if known {
                    let (_, slot) = self.current.as_mut().expect("current basket");
                    match slot {
                        Some(b) => b.merge(row.item_id, row.quantity),
                        None => *slot = Some(Basket::start(row)),
                    }
                }
                continue;
            }
            if self.finished.contains(&row.basket_id) {
                self.done = true;
                return Some(Err(Error::NonContiguousBasket(row.basket_id)));
            }
            let emitted = self.close_current();
            let id = row.basket_id.clone();
            self.current = Some((id, known.then(|| Basket::start(row))));
            if let Some(b) = emitted {
                return Some(Ok(b));
            }
        }
        self.close_current().map(Ok)
    }
}

/// Streams baskets from a transactions file whose rows are grouped by
/// `BasketId` (each basket's rows contiguous, baskets in any order).
/// Rows naming items missing from `catalog` are dropped and counted.
pub fn stream_baskets<'a>(
    path: impl AsRef<Path>,
    catalog: &'a ItemCatalog,
) -> Result<BasketStream<'a>> {
    Ok(BasketStream {
        rows: RowReader::open(path.as_ref())?,
        catalog,
        current: None,
        finished: HashSet::new(),
        stats: IngestStats::default(),
        done: false,
    })
}

/// Reads the whole transactions file and groups rows by `BasketId` in any
/// input order. Baskets are returned in order of first appearance.
pub fn load_baskets(
    path: impl AsRef<Path>,
    catalog: &ItemCatalog,
) -> Result<(Vec<Basket>, IngestStats)> {
    let mut rows = RowReader::open(path.as_ref())?;
    let mut stats = IngestStats::default();
    let mut slots: Vec<Option<Basket>> = Vec::new();
    let mut position: HashMap<String, usize> = HashMap::new();
    while let Some(row) = rows.next_row() {
        let row = row?;
        stats.rows += 1;
        let known = catalog.contains(&row.item_id);
        if !known {
            stats.dropped_rows += 1;
        }
        let k = *position.entry(row.basket_id.clone()).or_insert_with(|| {
            slots.push(None);
            slots.len() - 1
        });
        if known {
            match &mut slots[k] {
                Some(b) => b.merge(row.item_id, row.quantity),
                slot => *slot = Some(Basket::start(row)),
            }
        }
    }
    let total = slots.len() as u64;
    let baskets: Vec<Basket> = slots.into_iter().flatten().collect();
    stats.baskets = baskets.len() as u64;
    stats.empty_baskets = total - stats.baskets;
    Ok((baskets, stats))
}

/// Writes baskets in the transactions format, one row per (basket, item).
pub fn write_transactions<'b>(
    path: impl AsRef<Path>,
    baskets: impl IntoIterator<Item = &'b Basket>,
) -> Result<()> {
    atomic_write(path.as_ref(), |out| {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRANSACTIONS_HEADER)?;
        for b in baskets {
            for (item, qty) in b.items.iter().zip(&b.quantities) {
                w.write_record([
                    b.basket_id.as_str(),
                    item,
                    &b.site_id,
                    &b.timestamp.to_string(),
                    &qty.to_string(),
                    "",
                    "1",
                ])?;
            }
        }
        w.flush()
    })
}

/// Dense index over the retained items.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    items: Vec<String>,
    sales_count: Vec<u64>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds a vocabulary with the given order; counts default to zero.
    pub fn from_items(items: impl IntoIterator<Item = String>) -> Result<Self> {
        let mut vocab = Vocabulary::default();
        for item in items {
            vocab.push(item, 0)?;
        }
        Ok(vocab)
    }

    pub(crate) fn push(&mut self, item: String, sales_count: u64) -> Result<usize> {
        if self.index.contains_key(&item) {
            return Err(Error::DuplicateItem(item));
        }
        let k = self.items.len();
        self.index.insert(item.clone(), k);
        self.items.push(item);
        self.sales_count.push(sales_count);
        Ok(k)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn index_of(&self, item_id: &str) -> Option<usize> {
        self.index.get(item_id).copied()
    }

    pub fn resolve(&self, item_id: &str) -> Result<usize> {
        self.index_of(item_id)
            .ok_or_else(|| Error::UnknownItem(item_id.to_owned()))
    }

    pub fn item(&self, index: usize) -> &str {
        &self.items[index]
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    /// Number of distinct baskets containing the item.
    pub fn sales_count(&self, index: usize) -> u64 {
        self.sales_count[index]
    }

    /// Writes `V` on the first line and then `item_id sales_count` per index.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        atomic_write(path.as_ref(), |out| self.write_to(out))
    }

    fn write_to(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.len())?;
        for (item, count) in self.items.iter().zip(&self.sales_count) {
            writeln!(out, "{item} {count}")?;
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut lines = open_lines(path)?;
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(path, 1, "missing header"))?
            .map_err(|e| Error::io(path, e))?;
        let v: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, 1, "bad vocabulary size"))?;
        let mut vocab = Vocabulary::default();
        for (k, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = k as u64 + 2;
            let mut parts = line.split_whitespace();
            let (Some(item), Some(count), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(path, lineno, "expected `item_id sales_count`"));
            };
            let count = count
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad sales count"))?;
            vocab.push(item.to_owned(), count)?;
        }
        if vocab.len() != v {
            return Err(Error::parse(
                path,
                1,
                format!("header says {v} items, found {}", vocab.len()),
            ));
        }
        Ok(vocab)
    }
}

/// Keeps the `cap` items found in the most baskets. Ties at equal count are
/// broken by ascending item id, and indices follow that same ranking.
pub fn build_vocabulary<'b>(
    baskets: impl IntoIterator<Item = &'b Basket>,
    cap: usize,
) -> Result<Vocabulary> {
    if cap == 0 {
        return Err(Error::InvalidConfig(
            "vocabulary cap must be at least 1".into(),
        ));
    }
    let mut counts: HashMap<&str, u64> = HashMap::new();
    let mut any = false;
    for basket in baskets {
        any = true;
        for item in &basket.items {
            *counts.entry(item.as_str()).or_insert(0) += 1;
        }
    }
    if !any {
        return Err(Error::EmptyBaskets);
    }
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(cap);
    let mut vocab = Vocabulary::default();
    for (item, count) in ranked {
        vocab.push(item.to_owned(), count)?;
    }
    Ok(vocab)
}
