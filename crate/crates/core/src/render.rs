//! Wiring, chord and hook diagrams as SVG or fixed-width text.
//!
//! Renderers are pure functions of their input: no clocks, no hashing, no
//! floating point, so equal inputs give byte-equal documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::perm::{Color, DecoratedPermutation, WiringWord};
use crate::positroid::DimensionTerms;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("expected {expected} interval ranks, got {found}")]
    RankCount { expected: usize, found: usize },
    #[error("unknown renderer `{0}` (known: {1})")]
    Unknown(String, String),
}

pub trait Renderer: Send + Sync {
    fn name(&self) -> &str;
    /// `labels[i]` names the wire that starts at position `i + 1`.
    fn wiring(&self, word: &WiringWord, labels: &[String]) -> Result<String, RenderError>;
    fn chords(&self, dp: &DecoratedPermutation) -> String;
    fn hooks(&self, terms: &DimensionTerms) -> Result<String, RenderError>;
}

fn check_labels(word: &WiringWord, labels: &[String]) -> Result<(), RenderError> {
    if labels.len() != word.n() {
        return Err(RenderError::LabelCount {
            expected: word.n(),
            found: labels.len(),
        });
    }
    Ok(())
}

fn check_ranks(terms: &DimensionTerms) -> Result<(), RenderError> {
    if terms.ranks.len() != terms.lift.len() {
        return Err(RenderError::RankCount {
            expected: terms.lift.len(),
            found: terms.ranks.len(),
        });
    }
    Ok(())
}

fn footer(terms: &DimensionTerms) -> String {
    let sum = terms.rank_sum();
    let sq = terms.k * terms.k;
    format!("Σ r − k² = {sum} − {sq} = {}", sum as i64 - sq as i64)
}

/// Label of the wire at each position after every prefix of the word.
fn arrangements(word: &WiringWord) -> Vec<Vec<usize>> {
    (0..=word.len())
        .map(|t| word.prefix(t).arrangement())
        .collect()
}

pub struct Svg;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn svg_open(width: i64, height: i64, title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"monospace\" font-size=\"12\">\n\
         <title>{}</title>\n",
        escape(title)
    )
}

const ARROW_DEFS: &str = "<defs>\n\
<marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\">\
<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#333\"/></marker>\n\
</defs>\n";

impl Renderer for Svg {
    fn name(&self) -> &str {
        "svg"
    }

    fn wiring(&self, word: &WiringWord, labels: &[String]) -> Result<String, RenderError> {
        check_labels(word, labels)?;
        const COL: i64 = 60;
        const ROW: i64 = 40;
        const LEFT: i64 = 90;
        const TOP: i64 = 40;
        let n = word.n() as i64;
        let m = word.len() as i64;
        let span = COL * m.max(1);
        let y = |pos: usize| TOP + ROW * (pos as i64 - 1);
        let arr = arrangements(word);

        let mut out = svg_open(LEFT + span + 90, 2 * TOP + ROW * (n - 1), "wiring diagram");
        for (t, &p) in word.letters().iter().enumerate() {
            let x = LEFT + COL * t as i64 + COL / 2;
            let _ = writeln!(
                out,
                "<text class=\"step\" x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
                TOP - 20,
                t + 1
            );
            let _ = writeln!(
                out,
                "<circle class=\"crossing\" cx=\"{x}\" cy=\"{}\" r=\"4\" fill=\"#2ca02c\"/>",
                y(p) + ROW / 2
            );
        }
        for wire in 1..=word.n() {
            // position of `wire` after t letters
            let track: Vec<usize> = arr
                .iter()
                .map(|a| a.iter().position(|&w| w == wire).unwrap() + 1)
                .collect();
            let mut points: Vec<String> = track
                .iter()
                .enumerate()
                .map(|(t, &pos)| format!("{},{}", LEFT + COL * t as i64, y(pos)))
                .collect();
            if m == 0 {
                points.push(format!("{},{}", LEFT + COL, y(wire)));
            }
            let _ = writeln!(
                out,
                "<polyline class=\"wire\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
                points.join(" "),
                PALETTE[(wire - 1) % PALETTE.len()]
            );
        }
        let last = &arr[arr.len() - 1];
        for pos in 1..=word.n() {
            let _ = writeln!(
                out,
                "<text class=\"label start\" x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
                LEFT - 8,
                y(pos) + 4,
                escape(&labels[pos - 1])
            );
            let _ = writeln!(
                out,
                "<text class=\"label end\" x=\"{}\" y=\"{}\">{}</text>",
                LEFT + span + 8,
                y(pos) + 4,
                escape(&labels[last[pos - 1] - 1])
            );
        }
        out.push_str("</svg>\n");
        Ok(out)
    }

    fn chords(&self, dp: &DecoratedPermutation) -> String {
        const STEP: i64 = 80;
        const LEFT: i64 = 50;
        const RISE: i64 = 25;
        let n = dp.n() as i64;
        let base = 60 + RISE * (n - 1);
        let x = |i: usize| LEFT + STEP * (i as i64 - 1);

        let mut out = svg_open(
            2 * LEFT + STEP * (n - 1),
            base + 40,
            "decorated permutation",
        );
        out.push_str(ARROW_DEFS);
        for i in 1..=dp.n() {
            let j = dp.perm().apply(i);
            let (x1, x2) = (x(i), x(j));
            let line = match dp.color(i) {
                Some(c) => {
                    let (dir, d) = match c {
                        Color::Right => ("right", 1),
                        Color::Left => ("left", -1),
                    };
                    format!(
                        "<path class=\"loop {dir}\" d=\"M {x1} {base} C {x1} {} {} {} {} {}\" \
                         fill=\"none\" stroke=\"#333\" marker-end=\"url(#arrow)\"/>",
                        base - 40,
                        x1 + d * 30,
                        base - 40,
                        x1 + d * 30,
                        base - 12
                    )
                }
                None => {
                    let dir = if j > i { "right" } else { "left" };
                    // leftward arcs sit a little higher so opposite arcs on
                    // the same pair stay apart
                    let h = RISE * (i.abs_diff(j) as i64) + if j > i { 0 } else { 12 };
                    format!(
                        "<path class=\"arc {dir}\" d=\"M {x1} {base} Q {} {} {x2} {}\" \
                         fill=\"none\" stroke=\"#333\" marker-end=\"url(#arrow)\"/>",
                        (x1 + x2) / 2,
                        base - 2 * h,
                        base - 6
                    )
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        for i in 1..=dp.n() {
            let _ = writeln!(
                out,
                "<circle class=\"point\" cx=\"{}\" cy=\"{base}\" r=\"4\" fill=\"#000\"/>\n\
                 <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{i}</text>",
                x(i),
                x(i),
                base + 22
            );
        }
        out.push_str("</svg>\n");
        out
    }

    fn hooks(&self, terms: &DimensionTerms) -> Result<String, RenderError> {
        check_ranks(terms)?;
        const CELL: i64 = 40;
        const LEFT: i64 = 40;
        const TOP: i64 = 40;
        let n = terms.lift.len() as i64;
        let cx = |c: usize| LEFT + CELL * (c as i64 - 1);
        let cy = |r: usize| TOP + CELL * r as i64;
        let width = LEFT + CELL * (2 * n - 1) + 140;
        let height = TOP + CELL * (n + 1) + 30;

        let mut out = svg_open(width, height, "hook diagram");
        for c in 1..=2 * terms.lift.len() {
            let _ = writeln!(
                out,
                "<line class=\"grid\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#ddd\"/>\n\
                 <text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{c}</text>",
                cx(c),
                TOP,
                cy(terms.lift.len()) + CELL / 2,
                TOP - 10
            );
        }
        for (idx, (&f, &r)) in terms.lift.iter().zip(&terms.ranks).enumerate() {
            let i = idx + 1;
            let (x1, x2, yy) = (cx(i), cx(f), cy(i));
            let _ = writeln!(
                out,
                "<path class=\"hook\" d=\"M {x1} {yy} H {x2} V {}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n\
                 <circle cx=\"{x1}\" cy=\"{yy}\" r=\"3\" fill=\"#000\"/>\n\
                 <text class=\"rank\" x=\"{}\" y=\"{}\">r[{i},{f}] = {r}</text>",
                yy + CELL / 3,
                PALETTE[idx % PALETTE.len()],
                x2 + 8,
                yy - 6
            );
        }
        let _ = writeln!(
            out,
            "<text class=\"footer\" x=\"{LEFT}\" y=\"{}\">{}</text>",
            height - 12,
            escape(&footer(terms))
        );
        out.push_str("</svg>\n");
        Ok(out)
    }
}

pub struct Ascii;

impl Renderer for Ascii {
    fn name(&self) -> &str {
        "ascii"
    }

    /// One row per wire position; `v` over `^` marks the two rows that swap.
    fn wiring(&self, word: &WiringWord, labels: &[String]) -> Result<String, RenderError> {
        check_labels(word, labels)?;
        let arr = arrangements(word);
        let last = &arr[arr.len() - 1];
        let lw = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let cw = (word.len().to_string().len() + 2).max(3);

        let mut out = format!("{:lw$}   ", "");
        for t in 1..=word.len() {
            let _ = write!(out, "{t:^cw$}");
        }
        out = out.trim_end().to_string();
        out.push('\n');
        for pos in 1..=word.n() {
            let _ = write!(out, "{:<lw$} --", labels[pos - 1]);
            for &p in word.letters() {
                let mark = if p == pos {
                    'v'
                } else if p + 1 == pos {
                    '^'
                } else {
                    '-'
                };
                let left = (cw - 1) / 2;
                let _ = write!(
                    out,
                    "{}{mark}{}",
                    "-".repeat(left),
                    "-".repeat(cw - 1 - left)
                );
            }
            let _ = writeln!(out, "-- {}", labels[last[pos - 1] - 1]);
        }
        Ok(out)
    }

    /// One row per point: the span of the arc with an arrowhead at its target.
    fn chords(&self, dp: &DecoratedPermutation) -> String {
        let n = dp.n();
        let col = |i: usize| 4 * (i - 1) + 1;
        let width = col(n) + 3;
        let mut out: String = (1..=n).map(|i| format!("{i:^3} ")).collect::<String>();
        out = out.trim_end().to_string();
        out.push('\n');
        for i in 1..=n {
            let j = dp.perm().apply(i);
            let mut row = vec![' '; width];
            let note = match dp.color(i) {
                Some(Color::Right) => {
                    row[col(i)] = 'o';
                    row[col(i) + 1] = '>';
                    format!("{i} -> {i} loop right")
                }
                Some(Color::Left) => {
                    row[col(i)] = 'o';
                    row[col(i) - 1] = '<';
                    format!("{i} -> {i} loop left")
                }
                None => {
                    let (a, b) = (col(i.min(j)), col(i.max(j)));
                    for c in row.iter_mut().take(b).skip(a + 1) {
                        *c = '-';
                    }
                    row[col(i)] = 'o';
                    row[col(j)] = 'o';
                    if j > i {
                        row[b - 1] = '>';
                        format!("{i} -> {j} right")
                    } else {
                        row[a + 1] = '<';
                        format!("{i} -> {j} left")
                    }
                }
            };
            let line: String = row.into_iter().collect();
            let _ = writeln!(out, "{line}  {note}");
        }
        out
    }

    fn hooks(&self, terms: &DimensionTerms) -> Result<String, RenderError> {
        check_ranks(terms)?;
        let n = terms.lift.len();
        let col = |c: usize| 3 * (c - 1) + 1;
        let width = col(2 * n) + 2;
        let gutter = n.to_string().len();
        let mut out = format!("{:gutter$} ", "");
        out.push_str(&(1..=2 * n).map(|c| format!("{c:^3}")).collect::<String>());
        out = out.trim_end().to_string();
        out.push('\n');
        for (idx, (&f, &r)) in terms.lift.iter().zip(&terms.ranks).enumerate() {
            let i = idx + 1;
            let mut row = vec![' '; width];
            for c in row.iter_mut().take(col(f)).skip(col(i) + 1) {
                *c = '-';
            }
            row[col(i)] = 'o';
            if f != i {
                row[col(f)] = '+';
            }
            let line: String = row.into_iter().collect();
            let _ = writeln!(out, "{i:>gutter$} {line}  r[{i},{f}] = {r}");
        }
        let _ = writeln!(out, "{}", footer(terms));
        Ok(out)
    }
}

pub struct RendererRegistry {
    renderers: BTreeMap<String, Box<dyn Renderer>>,
}

impl RendererRegistry {
    pub fn builtin() -> Self {
        let mut reg = RendererRegistry {
            renderers: BTreeMap::new(),
        };
        reg.register(Box::new(Svg));
        reg.register(Box::new(Ascii));
        reg
    }

    pub fn register(&mut self, renderer: Box<dyn Renderer>) {
        self.renderers.insert(renderer.name().to_string(), renderer);
    }

    pub fn names(&self) -> Vec<&str> {
        self.renderers.keys().map(String::as_str).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Renderer, RenderError> {
        self.renderers
            .get(name)
            .map(|r| r.as_ref())
            .ok_or_else(|| RenderError::Unknown(name.to_string(), self.names().join(", ")))
    }
}

impl Default for RendererRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn labels() -> Vec<String> {
        ["AXP", "HD", "WMT", "PG"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn market_word() -> WiringWord {
        WiringWord::new(4, vec![2, 3, 1]).unwrap()
    }

    #[test]
    fn ascii_wiring_grid() {
        let s = Ascii.wiring(&market_word(), &labels()).unwrap();
        let expected = concat!(
            "       1  2  3\n",
            "AXP ---------v--- WMT\n",
            "HD  ---v-----^--- AXP\n",
            "WMT ---^--v------ PG\n",
            "PG  ------^------ HD\n",
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn empty_word_gives_parallel_wires() {
        let w = WiringWord::empty(3);
        let l: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let s = Svg.wiring(&w, &l).unwrap();
        assert_eq!(s.matches("class=\"wire\"").count(), 3);
        assert_eq!(s.matches("class=\"crossing\"").count(), 0);
        let a = Ascii.wiring(&w, &l).unwrap();
        assert!(a.lines().skip(1).all(|line| !line.contains('v')));
    }

    #[test]
    fn svg_wiring_structure() {
        let s = Svg.wiring(&market_word(), &labels()).unwrap();
        assert_eq!(s.matches("class=\"crossing\"").count(), 3);
        let ends: Vec<&str> = s
            .lines()
            .filter(|l| l.contains("label end"))
            .map(|l| l.rsplit_once('>').unwrap().0.rsplit_once('>').unwrap().1)
            .map(|t| t.trim_end_matches("</text"))
            .collect();
        assert_eq!(ends, vec!["WMT", "AXP", "PG", "HD"]);
        assert_eq!(s, Svg.wiring(&market_word(), &labels()).unwrap());
    }

    #[test]
    fn label_count_checked() {
        let err = Svg.wiring(&market_word(), &labels()[..3]).unwrap_err();
        assert_eq!(
            err,
            RenderError::LabelCount {
                expected: 4,
                found: 3
            }
        );
    }

    #[test]
    fn labels_are_escaped() {
        let w = WiringWord::empty(1);
        let s = Svg.wiring(&w, &["A&B".to_string()]).unwrap();
        assert!(s.contains("A&amp;B") && !s.contains("A&B"));
    }

    #[test]
    fn chord_directions() {
        let dp = DecoratedPermutation::uniform(
            Permutation::new(vec![2, 4, 1, 3]).unwrap(),
            Color::Right,
        );
        let s = Svg.chords(&dp);
        assert_eq!(s.matches("class=\"arc right\"").count(), 2);
        assert_eq!(s.matches("class=\"arc left\"").count(), 2);

        let id = DecoratedPermutation::uniform(Permutation::identity(5), Color::Right);
        assert_eq!(Svg.chords(&id).matches("class=\"loop right\"").count(), 5);

        let mut colors = BTreeMap::new();
        colors.insert(1, Color::Right);
        colors.insert(4, Color::Left);
        let fig =
            DecoratedPermutation::new(Permutation::new(vec![1, 3, 2, 4]).unwrap(), colors).unwrap();
        let s = Svg.chords(&fig);
        assert_eq!(s.matches("class=\"loop right\"").count(), 1);
        assert_eq!(s.matches("class=\"loop left\"").count(), 1);
        assert_eq!(s.matches("class=\"arc ").count(), 2);
        let a = Ascii.chords(&fig);
        assert_eq!(
            a,
            concat!(
                " 1   2   3   4\n",
                " o>               1 -> 1 loop right\n",
                "     o-->o        2 -> 3 right\n",
                "     o<--o        3 -> 2 left\n",
                "            <o    4 -> 4 loop left\n",
            )
        );
    }

    #[test]
    fn hook_footers() {
        let dp = DecoratedPermutation::uniform(
            Permutation::new(vec![2, 4, 1, 3]).unwrap(),
            Color::Right,
        );
        let terms = DimensionTerms::of(&dp);
        assert_eq!(terms.lift, vec![2, 4, 5, 7]);
        assert_eq!(terms.ranks, vec![1, 2, 2, 2]);
        let a = Ascii.hooks(&terms).unwrap();
        assert!(a.ends_with("Σ r − k² = 7 − 4 = 3\n"));
        assert!(a.contains("r[2,4] = 2"));
        assert!(Svg.hooks(&terms).unwrap().contains("7 − 4 = 3"));

        let id = DimensionTerms::of(&DecoratedPermutation::uniform(
            Permutation::identity(3),
            Color::Right,
        ));
        assert!(Ascii.hooks(&id).unwrap().ends_with("0 − 0 = 0\n"));

        let top = DimensionTerms::of(&DecoratedPermutation::uniform(
            Permutation::new(vec![3, 4, 1, 2]).unwrap(),
            Color::Right,
        ));
        assert_eq!(top.lift, vec![3, 4, 5, 6]);
        assert!(Ascii.hooks(&top).unwrap().ends_with("8 − 4 = 4\n"));
    }

    #[test]
    fn rank_count_checked() {
        let terms = DimensionTerms {
            lift: vec![2, 4, 5, 7],
            ranks: vec![1, 2],
            k: 2,
        };
        assert!(matches!(
            Svg.hooks(&terms),
            Err(RenderError::RankCount { .. })
        ));
    }

    #[test]
    fn renderer_lookup() {
        let reg = RendererRegistry::builtin();
        assert_eq!(reg.names(), vec!["ascii", "svg"]);
        assert!(reg.get("png").is_err());
    }
}
