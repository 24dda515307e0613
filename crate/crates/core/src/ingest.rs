//! Closing-price tables, daily rankings, and the crossings between them.
//!
//! Ranks are ascending by price. On the reference date equal prices fall
//! back to alphabetical ticker order; on every later date they keep the
//! previous day's relative order, so a tie never produces a crossing.

use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;

use chrono::NaiveDate;
use rust_decimal::Decimal;
use serde::Serialize;
use thiserror::Error;

use crate::perm::{Color, DecoratedPermutation, Permutation, WiringWord};

/// Locations are 1-based; row 1 is the header line.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum IngestError {
    #[error("row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("input has no header row")]
    MissingHeader,
    #[error("row 1, column 1: first header field must be `date`, found `{0}`")]
    BadHeader(String),
    #[error("row 1: header names no tickers")]
    NoTickers,
    #[error("row 1, column {column}: empty ticker")]
    EmptyTicker { column: usize },
    #[error("row 1, column {column}: duplicate ticker `{ticker}`")]
    DuplicateTicker { column: usize, ticker: String },
    #[error("input has no price rows")]
    NoRows,
    #[error("row {row}: expected {expected} fields, found {found}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column 1: `{value}` is not an ISO-8601 date (YYYY-MM-DD)")]
    BadDate { row: usize, value: String },
    #[error("row {row}, column 1: duplicate date {date}")]
    DuplicateDate { row: usize, date: NaiveDate },
    #[error("row {row}, column {column}: missing price")]
    MissingPrice { row: usize, column: usize },
    #[error("row {row}, column {column}: malformed price `{value}`")]
    BadPrice {
        row: usize,
        column: usize,
        value: String,
    },
    #[error("row {row}, column {column}: price {value} is not positive")]
    NonPositivePrice {
        row: usize,
        column: usize,
        value: String,
    },
    #[error("date {0} is not in the table")]
    UnknownDate(NaiveDate),
    #[error("target date {target} precedes reference date {reference}")]
    TargetBeforeReference {
        reference: NaiveDate,
        target: NaiveDate,
    },
    #[error("permutation {found} does not match the table, which gives {expected}")]
    PermutationMismatch {
        expected: Permutation,
        found: Permutation,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceTable {
    tickers: Vec<String>,
    dates: Vec<NaiveDate>,
    prices: Vec<Vec<Decimal>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ranking {
    pub date: NaiveDate,
    /// Stock indices (header order, 0-based) by ascending price.
    pub order: Vec<usize>,
}

impl Ranking {
    /// 1-based position of every stock.
    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, &s) in self.order.iter().enumerate() {
            pos[s] = p + 1;
        }
        pos
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingEvent {
    pub date: NaiveDate,
    pub seq: usize,
    /// Ranks `position` and `position + 1` swap.
    pub position: usize,
    /// Stock indices, lower-ranked one first as seen before the swap.
    pub stocks: [usize; 2],
}

/// Parses `date,<ticker>,...` followed by one row per trading day.
pub fn parse_price_csv(text: &str) -> Result<PriceTable, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(|e| csv_error(1, e))?,
        None => return Err(IngestError::MissingHeader),
    };
    let first = header.get(0).unwrap_or_default();
    if !first.eq_ignore_ascii_case("date") {
        return Err(IngestError::BadHeader(first.to_string()));
    }
    let tickers: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    if tickers.is_empty() {
        return Err(IngestError::NoTickers);
    }
    let mut seen = HashSet::new();
    for (idx, t) in tickers.iter().enumerate() {
        if t.is_empty() {
            return Err(IngestError::EmptyTicker { column: idx + 2 });
        }
        if !seen.insert(t.as_str()) {
            return Err(IngestError::DuplicateTicker {
                column: idx + 2,
                ticker: t.clone(),
            });
        }
    }

    let n = tickers.len();
    let mut rows: BTreeMap<NaiveDate, Vec<Decimal>> = BTreeMap::new();
    for (idx, rec) in records.enumerate() {
        let row = idx + 2;
        let rec = rec.map_err(|e| csv_error(row, e))?;
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        if rec.len() != n + 1 {
            return Err(IngestError::RowLength {
                row,
                expected: n + 1,
                found: rec.len(),
            });
        }
        let raw_date = &rec[0];
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .ok()
            .filter(|_| is_iso_date_shape(raw_date))
            .ok_or_else(|| IngestError::BadDate {
                row,
                value: raw_date.to_string(),
            })?;
        let prices = rec
            .iter()
            .skip(1)
            .enumerate()
            .map(|(c, field)| parse_price(field, row, c + 2))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.insert(date, prices).is_some() {
            return Err(IngestError::DuplicateDate { row, date });
        }
    }
    if rows.is_empty() {
        return Err(IngestError::NoRows);
    }
    let (dates, prices) = rows.into_iter().unzip();
    Ok(PriceTable {
        tickers,
        dates,
        prices,
    })
}

fn csv_error(row: usize, e: csv::Error) -> IngestError {
    IngestError::Csv {
        row,
        message: e.to_string(),
    }
}

// chrono accepts unpadded fields such as 2013-5-15; insist on YYYY-MM-DD.
fn is_iso_date_shape(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter()
            .enumerate()
            .all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit())
}

fn parse_price(field: &str, row: usize, column: usize) -> Result<Decimal, IngestError> {
    if field.is_empty() || field.eq_ignore_ascii_case("nan") || field.eq_ignore_ascii_case("na") {
        return Err(IngestError::MissingPrice { row, column });
    }
    let plain = field
        .bytes()
        .all(|c| c.is_ascii_digit() || c == b'.' || c == b'-' || c == b'+');
    let value = plain
        .then(|| Decimal::from_str(field).ok())
        .flatten()
        .ok_or_else(|| IngestError::BadPrice {
            row,
            column,
            value: field.to_string(),
        })?;
    if value <= Decimal::ZERO {
        return Err(IngestError::NonPositivePrice {
            row,
            column,
            value: field.to_string(),
        });
    }
    Ok(value)
}

impl PriceTable {
    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn n(&self) -> usize {
        self.tickers.len()
    }

    pub fn price(&self, date_idx: usize, stock: usize) -> Decimal {
        self.prices[date_idx][stock]
    }

    pub fn row(&self, date_idx: usize) -> &[Decimal] {
        &self.prices[date_idx]
    }

    pub fn date_index(&self, date: NaiveDate) -> Result<usize, IngestError> {
        self.dates
            .binary_search(&date)
            .map_err(|_| IngestError::UnknownDate(date))
    }

    fn range(&self, reference: NaiveDate, end: NaiveDate) -> Result<(usize, usize), IngestError> {
        let r = self.date_index(reference)?;
        let e = self.date_index(end)?;
        if e < r {
            return Err(IngestError::TargetBeforeReference {
                reference,
                target: end,
            });
        }
        Ok((r, e))
    }

    fn anchor_ranking(&self, idx: usize) -> Vec<usize> {
        let row = &self.prices[idx];
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| {
            row[a]
                .cmp(&row[b])
                .then_with(|| self.tickers[a].cmp(&self.tickers[b]))
        });
        order
    }

    fn next_ranking(&self, prev: &[usize], idx: usize) -> Vec<usize> {
        let row = &self.prices[idx];
        let mut order = prev.to_vec();
        // stable: ties keep yesterday's order
        order.sort_by(|&a, &b| row[a].cmp(&row[b]));
        order
    }

    /// Rankings for every date from `reference` to `end`, ties at
    /// `reference` broken alphabetically.
    pub fn rankings_between(
        &self,
        reference: NaiveDate,
        end: NaiveDate,
    ) -> Result<Vec<Ranking>, IngestError> {
        let (r, e) = self.range(reference, end)?;
        let mut out = Vec::with_capacity(e - r + 1);
        let mut order = self.anchor_ranking(r);
        out.push(Ranking {
            date: self.dates[r],
            order: order.clone(),
        });
        for idx in r + 1..=e {
            order = self.next_ranking(&order, idx);
            out.push(Ranking {
                date: self.dates[idx],
                order: order.clone(),
            });
        }
        Ok(out)
    }

    /// Ranking at `date`, with ties resolved along the chain of days that
    /// starts at the table's first date.
    pub fn rank_at_date(&self, date: NaiveDate) -> Result<Ranking, IngestError> {
        let mut chain = self.rankings_between(self.dates[0], date)?;
        Ok(chain.pop().expect("chain includes its end date"))
    }

    /// `π(i)` is the target-date rank of the stock ranked `i` at `reference`.
    pub fn permutation_at(
        &self,
        reference: NaiveDate,
        target: NaiveDate,
    ) -> Result<Permutation, IngestError> {
        let chain = self.rankings_between(reference, target)?;
        Ok(rank_map(&chain[0], chain.last().unwrap()))
    }

    /// Every crossing from `reference` to `end`, each day's transition
    /// decomposed into adjacent swaps by repeated left-to-right bubble passes.
    pub fn crossing_stream(
        &self,
        reference: NaiveDate,
        end: NaiveDate,
    ) -> Result<Vec<CrossingEvent>, IngestError> {
        let chain = self.rankings_between(reference, end)?;
        Ok(chain
            .windows(2)
            .flat_map(|pair| daily_crossings(&pair[0], &pair[1]))
            .collect())
    }

    /// Stock index at reference rank `i` (1-based).
    pub fn stock_at_rank(&self, reference: NaiveDate, i: usize) -> Result<usize, IngestError> {
        let idx = self.date_index(reference)?;
        Ok(self.anchor_ranking(idx)[i - 1])
    }

    /// Colours each fixed point by the net price move of its stock:
    /// `Right` when up or unchanged, `Left` when down.
    pub fn decorate(
        &self,
        perm: &Permutation,
        reference: NaiveDate,
        target: NaiveDate,
    ) -> Result<DecoratedPermutation, IngestError> {
        let expected = self.permutation_at(reference, target)?;
        if &expected != perm {
            return Err(IngestError::PermutationMismatch {
                expected,
                found: perm.clone(),
            });
        }
        let (r, t) = self.range(reference, target)?;
        let anchor = self.anchor_ranking(r);
        Ok(DecoratedPermutation::with_colors(perm.clone(), |i| {
            let stock = anchor[i - 1];
            price_move_color(self.prices[r][stock], self.prices[t][stock])
        }))
    }

    /// `permutation_at` followed by `decorate`.
    pub fn decorated_at(
        &self,
        reference: NaiveDate,
        target: NaiveDate,
    ) -> Result<DecoratedPermutation, IngestError> {
        let perm = self.permutation_at(reference, target)?;
        self.decorate(&perm, reference, target)
    }
}

pub fn price_move_color(before: Decimal, after: Decimal) -> Color {
    if after >= before {
        Color::Right
    } else {
        Color::Left
    }
}

fn rank_map(from: &Ranking, to: &Ranking) -> Permutation {
    let to_pos = to.positions();
    let images = from.order.iter().map(|&s| to_pos[s]).collect();
    Permutation::new(images).expect("rankings are permutations of the same stocks")
}

fn daily_crossings(prev: &Ranking, cur: &Ranking) -> Vec<CrossingEvent> {
    let target = cur.positions();
    let mut arr = prev.order.clone();
    let mut events = Vec::new();
    loop {
        let mut swapped = false;
        for p in 0..arr.len().saturating_sub(1) {
            if target[arr[p]] > target[arr[p + 1]] {
                events.push(CrossingEvent {
                    date: cur.date,
                    seq: events.len(),
                    position: p + 1,
                    stocks: [arr[p], arr[p + 1]],
                });
                arr.swap(p, p + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    debug_assert_eq!(arr, cur.order);
    events
}

/// The crossing positions as a wiring word on `n` wires.
pub fn stream_word(events: &[CrossingEvent], n: usize) -> WiringWord {
    WiringWord::new(n, events.iter().map(|e| e.position).collect())
        .expect("crossing positions lie in 1..n")
}
