//! End-to-end analysis of a price table and the report formats it prints in.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoration::{DecorationError, DecorationRegistry, MarketWindow, RuleContext};
use crate::ingest::{stream_word, IngestError, PriceTable};
use crate::necklace::GrassmannNecklace;
use crate::perm::{Color, DecoratedPermutation, Permutation};
use crate::polytope::{decomposition_chain, PolytopeError, PositroidPolytope};
use crate::positroid::{DimensionTerms, Positroid};
use crate::subset::Subset;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Decoration(#[from] DecorationError),
    #[error("unknown report format `{0}` (known: {1})")]
    UnknownFormat(String, String),
    /// A recomputed quantity disagrees with the report.
    #[error("report is inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingRecord {
    pub date: NaiveDate,
    pub seq: usize,
    pub position: usize,
    pub stocks: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeSummary {
    pub vertex_count: usize,
    pub affine_dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet_count: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub ref_date: NaiveDate,
    pub target_date: NaiveDate,
    /// Point `i` of every permutation below is `labels[i - 1]`, the stock
    /// ranked `i` on the reference date.
    pub labels: Vec<String>,
    pub permutation: Permutation,
    pub decorations: BTreeMap<usize, Color>,
    pub crossings: Vec<CrossingRecord>,
    pub necklace: Vec<Subset>,
    pub k: usize,
    pub affine_lift: Vec<usize>,
    pub interval_ranks: Vec<usize>,
    pub bases: Vec<Subset>,
    pub cell_dimension: usize,
    pub polytope: PolytopeSummary,
    pub components: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalyzeOptions {
    pub facets: bool,
}

fn labels_at(table: &PriceTable, reference: NaiveDate) -> Result<Vec<String>, IngestError> {
    (1..=table.n())
        .map(|i| Ok(table.tickers()[table.stock_at_rank(reference, i)?].clone()))
        .collect()
}

fn crossing_records(
    table: &PriceTable,
    reference: NaiveDate,
    end: NaiveDate,
) -> Result<Vec<CrossingRecord>, IngestError> {
    let tickers = table.tickers();
    Ok(table
        .crossing_stream(reference, end)?
        .into_iter()
        .map(|e| CrossingRecord {
            date: e.date,
            seq: e.seq,
            position: e.position,
            stocks: [tickers[e.stocks[0]].clone(), tickers[e.stocks[1]].clone()],
        })
        .collect())
}

/// Everything derivable from a decorated permutation, shared by `analyze`
/// and the consistency check.
struct Derived {
    necklace: GrassmannNecklace,
    terms: DimensionTerms,
    positroid: Positroid,
    polytope: PositroidPolytope,
}

impl Derived {
    fn of(dp: &DecoratedPermutation) -> Self {
        let necklace = GrassmannNecklace::from_decorated(dp);
        let positroid = Positroid::from_decorated(dp);
        Derived {
            terms: DimensionTerms::of(dp),
            polytope: PositroidPolytope::from_positroid(&positroid),
            necklace,
            positroid,
        }
    }
}

pub fn analyze(
    table: &PriceTable,
    reference: NaiveDate,
    target: NaiveDate,
    opts: AnalyzeOptions,
) -> Result<AnalysisReport, ReportError> {
    let dp = table.decorated_at(reference, target)?;
    let derived = Derived::of(&dp);
    let facet_count = if opts.facets {
        Some(derived.polytope.facets()?.len())
    } else {
        None
    };
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        ref_date: reference,
        target_date: target,
        labels: labels_at(table, reference)?,
        permutation: dp.perm().clone(),
        decorations: dp.colors().clone(),
        crossings: crossing_records(table, reference, target)?,
        necklace: derived.necklace.terms().to_vec(),
        k: derived.necklace.k(),
        affine_lift: derived.terms.lift.clone(),
        interval_ranks: derived.terms.ranks.clone(),
        bases: derived.positroid.bases().iter().copied().collect(),
        cell_dimension: derived.terms.dimension(),
        polytope: PolytopeSummary {
            vertex_count: derived.polytope.vertices().len(),
            affine_dimension: derived.polytope.dimension(),
            facet_count,
        },
        components: derived.positroid.connected_components(),
    })
}

/// Re-derives every field from the permutation and its decorations.
pub fn check_report(report: &AnalysisReport) -> Result<(), ReportError> {
    let bad = |what: &str| Err(ReportError::Inconsistent(what.to_string()));
    if report.schema_version != SCHEMA_VERSION {
        return bad("unsupported schema_version");
    }
    if report.labels.len() != report.permutation.n() {
        return bad("label count differs from permutation size");
    }
    let dp = DecoratedPermutation::new(report.permutation.clone(), report.decorations.clone())
        .map_err(|e| ReportError::Inconsistent(format!("decorations: {e}")))?;
    let d = Derived::of(&dp);
    if report.necklace.as_slice() != d.necklace.terms() {
        return bad("necklace does not match the decorated permutation");
    }
    if report.necklace.iter().any(|t| t.len() != report.k) || report.k != dp.anti_exceedance_count()
    {
        return bad("k does not match the necklace terms");
    }
    if report.affine_lift != d.terms.lift || report.interval_ranks != d.terms.ranks {
        return bad("affine lift or interval ranks differ");
    }
    if !report.bases.iter().eq(d.positroid.bases().iter()) {
        return bad("bases differ from the positroid of the necklace");
    }
    if report.bases.len() != report.polytope.vertex_count {
        return bad("vertex count differs from basis count");
    }
    if report.cell_dimension != d.terms.dimension() {
        return bad("cell dimension differs");
    }
    if report.polytope.affine_dimension != d.polytope.dimension() {
        return bad("polytope dimension differs");
    }
    if let Some(count) = report.polytope.facet_count {
        if count != d.polytope.facets()?.len() {
            return bad("facet count differs");
        }
    }
    if report.components != d.positroid.connected_components() {
        return bad("components differ");
    }
    let word_len: usize = report.crossings.len();
    if word_len < report.permutation.inversions() {
        return bad("fewer crossings than inversions");
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLine {
    pub step: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossing: Option<CrossingRecord>,
    pub permutation: Permutation,
    pub decorations: BTreeMap<usize, Color>,
    pub k: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub schema_version: u32,
    pub ref_date: NaiveDate,
    pub end_date: NaiveDate,
    pub labels: Vec<String>,
    pub decoration_rule: String,
    pub steps: Vec<ChainLine>,
    /// Steps whose dimension did not go up.
    pub non_increasing_steps: Vec<usize>,
}

pub fn chain(
    table: &PriceTable,
    reference: NaiveDate,
    end: NaiveDate,
    rule_name: &str,
    rules: &DecorationRegistry,
) -> Result<ChainReport, ReportError> {
    let events = table.crossing_stream(reference, end)?;
    let records = crossing_records(table, reference, end)?;
    let ctx = RuleContext {
        market: Some(MarketWindow {
            table,
            reference,
            events: &events,
        }),
    };
    let rule = rules.build(rule_name, &ctx)?;
    let cells = decomposition_chain(&stream_word(&events, table.n()), rule.as_ref());
    let steps = cells
        .steps
        .iter()
        .map(|s| ChainLine {
            step: s.step,
            crossing: s.step.checked_sub(1).map(|i| records[i].clone()),
            permutation: s.decorated.perm().clone(),
            decorations: s.decorated.colors().clone(),
            k: s.decorated.anti_exceedance_count(),
            dimension: s.dimension,
        })
        .collect();
    Ok(ChainReport {
        schema_version: SCHEMA_VERSION,
        ref_date: reference,
        end_date: end,
        labels: labels_at(table, reference)?,
        decoration_rule: rule.name().to_string(),
        steps,
        non_increasing_steps: cells.non_increasing_steps(),
    })
}

/// Output format for reports, looked up by name.
pub trait ReportFormat: Send + Sync {
    fn name(&self) -> &str;
    fn analysis(&self, report: &AnalysisReport) -> String;
    fn chain(&self, report: &ChainReport) -> String;
}

/// Pretty JSON with sorted keys, newline terminated.
pub struct Json;

fn canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json's Map is a BTreeMap, so keys come out sorted
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

impl ReportFormat for Json {
    fn name(&self) -> &str {
        "json"
    }

    fn analysis(&self, report: &AnalysisReport) -> String {
        canonical_json(report)
    }

    fn chain(&self, report: &ChainReport) -> String {
        canonical_json(report)
    }
}

pub struct Text;

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn decorations_text(decorations: &BTreeMap<usize, Color>) -> String {
    if decorations.is_empty() {
        "none".to_string()
    } else {
        join(decorations.iter().map(|(i, c)| format!("{i}:{c}")), " ")
    }
}

impl ReportFormat for Text {
    fn name(&self) -> &str {
        "text"
    }

    fn analysis(&self, r: &AnalysisReport) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("reference      {}", r.ref_date));
        line(format!("target         {}", r.target_date));
        line(format!(
            "labels         {}",
            join(
                r.labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| format!("{}={l}", i + 1)),
                " "
            )
        ));
        line(format!("crossings      {}", r.crossings.len()));
        for c in &r.crossings {
            line(format!(
                "  {} #{} s{} {}/{}",
                c.date, c.seq, c.position, c.stocks[0], c.stocks[1]
            ));
        }
        line(format!("permutation    {}", r.permutation));
        line(format!(
            "decorations    {}",
            decorations_text(&r.decorations)
        ));
        line(format!("necklace       ({})", join(&r.necklace, ",")));
        line(format!("k              {}", r.k));
        line(format!("affine lift    ({})", join(&r.affine_lift, ",")));
        line(format!("interval ranks ({})", join(&r.interval_ranks, ",")));
        line(format!("bases          {}", join(&r.bases, " ")));
        line(format!(
            "cell dimension {} - {} = {}",
            r.interval_ranks.iter().sum::<usize>(),
            r.k * r.k,
            r.cell_dimension
        ));
        let facets = r
            .polytope
            .facet_count
            .map_or(String::new(), |f| format!(", {f} facets"));
        line(format!(
            "polytope       {} vertices, affine dimension {}{facets}",
            r.polytope.vertex_count, r.polytope.affine_dimension
        ));
        line(format!(
            "components     {}",
            join(
                r.components.iter().map(|b| format!("{{{}}}", join(b, ","))),
                " "
            )
        ));
        out
    }

    fn chain(&self, r: &ChainReport) -> String {
        let mut out = format!(
            "# {} -> {}, decoration rule {}\n# step date       crossing        permutation  k dim\n",
            r.ref_date, r.end_date, r.decoration_rule
        );
        for s in &r.steps {
            let (date, crossing) = match &s.crossing {
                Some(c) => (
                    c.date.to_string(),
                    format!("s{} {}/{}", c.position, c.stocks[0], c.stocks[1]),
                ),
                None => (r.ref_date.to_string(), "-".to_string()),
            };
            let flag = if r.non_increasing_steps.contains(&s.step) {
                "  (not increasing)"
            } else {
                ""
            };
            out.push_str(&format!(
                "{:>6} {date} {crossing:<15} {:<12} {} {}{flag}\n",
                s.step,
                s.permutation.to_string(),
                s.k,
                s.dimension
            ));
        }
        out
    }
}

pub struct FormatRegistry {
    formats: BTreeMap<String, Box<dyn ReportFormat>>,
}

impl FormatRegistry {
    pub fn builtin() -> Self {
        let mut reg = FormatRegistry {
            formats: BTreeMap::new(),
        };
        reg.register(Box::new(Json));
        reg.register(Box::new(Text));
        reg
    }

    pub fn register(&mut self, format: Box<dyn ReportFormat>) {
        self.formats.insert(format.name().to_string(), format);
    }

    pub fn names(&self) -> Vec<&str> {
        self.formats.keys().map(String::as_str).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn ReportFormat, ReportError> {
        self.formats
            .get(name)
            .map(|f| f.as_ref())
            .ok_or_else(|| ReportError::UnknownFormat(name.to_string(), self.names().join(", ")))
    }
}

impl Default for FormatRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_price_csv;

    const CSV: &str = "\
date,AXP,HD,WMT,PG
2013-05-15,72.78,77.88,79.86,80.68
2013-05-21,75.11,78.71,77.39,78.80
2013-05-28,76.16,80.86,77.32,79.82
2013-06-03,76.47,79.08,75.69,77.66
";

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    #[test]
    fn analysis_of_small_market() {
        let t = parse_price_csv(CSV).unwrap();
        let r = analyze(
            &t,
            d("2013-05-15"),
            d("2013-06-03"),
            AnalyzeOptions { facets: true },
        )
        .unwrap();
        assert_eq!(r.permutation.images(), &[2, 4, 1, 3]);
        assert_eq!(r.crossings.len(), 3);
        assert_eq!(r.cell_dimension, 3);
        assert_eq!(r.polytope.facet_count, Some(5));
        check_report(&r).unwrap();
    }

    #[test]
    fn tampered_report_is_rejected() {
        let t = parse_price_csv(CSV).unwrap();
        let mut r = analyze(
            &t,
            d("2013-05-15"),
            d("2013-06-03"),
            AnalyzeOptions::default(),
        )
        .unwrap();
        r.bases.pop();
        assert!(matches!(
            check_report(&r),
            Err(ReportError::Inconsistent(_))
        ));
    }

    #[test]
    fn json_keys_are_sorted() {
        let t = parse_price_csv(CSV).unwrap();
        let r = analyze(
            &t,
            d("2013-05-15"),
            d("2013-05-15"),
            AnalyzeOptions::default(),
        )
        .unwrap();
        let s = Json.analysis(&r);
        let affine = s.find("\"affine_lift\"").unwrap();
        let bases = s.find("\"bases\"").unwrap();
        let target = s.find("\"target_date\"").unwrap();
        assert!(affine < bases && bases < target);
        assert!(!s.contains("facet_count"));
        let back: AnalysisReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn format_lookup() {
        let reg = FormatRegistry::builtin();
        assert_eq!(reg.names(), vec!["json", "text"]);
        assert!(matches!(
            reg.get("yaml"),
            Err(ReportError::UnknownFormat(..))
        ));
    }
}
