//! Rules that colour the fixed points of a permutation, looked up by name.
//!
//! Chains and removals produce bare permutations; a [`DecorationRule`]
//! supplies the colour of each fixed point at each step. The built-in rules
//! are `right` (every fixed point a loop), `left` (every fixed point a
//! coloop) and `price` (up or flat since the reference date is `right`).

use std::collections::BTreeMap;

use chrono::NaiveDate;
use thiserror::Error;

use crate::ingest::{price_move_color, CrossingEvent, IngestError, PriceTable};
use crate::perm::{Color, DecoratedPermutation, Permutation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecorationError {
    #[error("unknown decoration rule `{0}` (known: {1})")]
    Unknown(String, String),
    #[error("decoration rule `{0}` needs price data")]
    NeedsMarket(&'static str),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

pub trait DecorationRule: Send + Sync {
    fn name(&self) -> &str;

    /// Colour of fixed point `point` in the state reached after `step` letters.
    fn color(&self, step: usize, point: usize) -> Color;

    fn decorate(&self, perm: Permutation, step: usize) -> DecoratedPermutation {
        DecoratedPermutation::with_colors(perm, |i| self.color(step, i))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Uniform(pub Color);

impl DecorationRule for Uniform {
    fn name(&self) -> &str {
        match self.0 {
            Color::Right => "right",
            Color::Left => "left",
        }
    }

    fn color(&self, _step: usize, _point: usize) -> Color {
        self.0
    }
}

/// Colours by each stock's net move from the reference date to the date of
/// the step's last crossing.
#[derive(Clone, Debug)]
pub struct PriceMove {
    // colours[step][point - 1]
    colours: Vec<Vec<Color>>,
}

impl PriceMove {
    pub fn new(
        table: &PriceTable,
        reference: NaiveDate,
        events: &[CrossingEvent],
    ) -> Result<Self, IngestError> {
        let r = table.date_index(reference)?;
        let stocks: Vec<usize> = (1..=table.n())
            .map(|i| table.stock_at_rank(reference, i))
            .collect::<Result<_, _>>()?;
        let mut colours = Vec::with_capacity(events.len() + 1);
        let dates = std::iter::once(reference).chain(events.iter().map(|e| e.date));
        for date in dates {
            let t = table.date_index(date)?;
            colours.push(
                stocks
                    .iter()
                    .map(|&s| price_move_color(table.price(r, s), table.price(t, s)))
                    .collect(),
            );
        }
        Ok(PriceMove { colours })
    }
}

impl DecorationRule for PriceMove {
    fn name(&self) -> &str {
        "price"
    }

    fn color(&self, step: usize, point: usize) -> Color {
        let row = &self.colours[step.min(self.colours.len() - 1)];
        row[point - 1]
    }
}

/// Inputs a factory may draw on.
#[derive(Clone, Copy, Default)]
pub struct RuleContext<'a> {
    pub market: Option<MarketWindow<'a>>,
}

#[derive(Clone, Copy)]
pub struct MarketWindow<'a> {
    pub table: &'a PriceTable,
    pub reference: NaiveDate,
    pub events: &'a [CrossingEvent],
}

pub type RuleFactory = fn(&RuleContext<'_>) -> Result<Box<dyn DecorationRule>, DecorationError>;

pub struct DecorationRegistry {
    factories: BTreeMap<String, RuleFactory>,
}

impl DecorationRegistry {
    pub fn empty() -> Self {
        DecorationRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("right", |_| Ok(Box::new(Uniform(Color::Right))));
        reg.register("left", |_| Ok(Box::new(Uniform(Color::Left))));
        reg.register("price", |ctx| {
            let m = ctx.market.ok_or(DecorationError::NeedsMarket("price"))?;
            Ok(Box::new(PriceMove::new(m.table, m.reference, m.events)?))
        });
        reg
    }

    pub fn register(&mut self, name: &str, factory: RuleFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn build(
        &self,
        name: &str,
        ctx: &RuleContext<'_>,
    ) -> Result<Box<dyn DecorationRule>, DecorationError> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| DecorationError::Unknown(name.to_string(), self.names().join(", ")))?;
        factory(ctx)
    }
}

impl Default for DecorationRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_price_csv;

    #[test]
    fn registry_lookup() {
        let reg = DecorationRegistry::builtin();
        assert_eq!(reg.names(), vec!["left", "price", "right"]);
        let ctx = RuleContext::default();
        assert_eq!(reg.build("left", &ctx).unwrap().color(0, 1), Color::Left);
        assert!(matches!(
            reg.build("price", &ctx),
            Err(DecorationError::NeedsMarket(_))
        ));
        assert!(matches!(
            reg.build("bogus", &ctx),
            Err(DecorationError::Unknown(..))
        ));
    }

    #[test]
    fn price_rule_tracks_dates() {
        let csv = "date,A,B\n2020-01-01,1,2\n2020-01-02,3,2.5\n2020-01-03,0.5,2.6\n";
        let t = parse_price_csv(csv).unwrap();
        let r = t.dates()[0];
        let ev = t.crossing_stream(r, t.dates()[2]).unwrap();
        assert_eq!(ev.len(), 2);
        let rule = PriceMove::new(&t, r, &ev).unwrap();
        assert_eq!(rule.color(0, 1), Color::Right);
        assert_eq!(rule.color(1, 1), Color::Right);
        assert_eq!(rule.color(2, 1), Color::Left);
        assert_eq!(rule.color(2, 2), Color::Right);
    }
}
