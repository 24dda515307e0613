//! `stockpoly`: analyse stock crossings as positroid cells.
//!
//! Exit codes: 0 success, 2 bad input, 3 a report that fails its own
//! consistency check.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use stockpoly_core::decoration::DecorationRegistry;
use stockpoly_core::ingest::{parse_price_csv, stream_word, PriceTable};
use stockpoly_core::perm::{Color, DecoratedPermutation, Permutation, WiringWord};
use stockpoly_core::positroid::DimensionTerms;
use stockpoly_core::render::RendererRegistry;
use stockpoly_core::report::{self, AnalysisReport, AnalyzeOptions, FormatRegistry, ReportError};

#[derive(Parser)]
#[command(
    name = "stockpoly",
    version,
    about = "Stock crossings as positroid cells"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one date range.
    Analyze {
        #[command(flatten)]
        range: Range,
        /// Also enumerate polytope facets (ground sets up to 8 stocks).
        #[arg(long)]
        facets: bool,
        /// Report format: json or text.
        #[arg(long, default_value = "json")]
        format: String,
        /// Re-derive every field and fail with exit code 3 on a mismatch.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Cell dimension after each crossing, one line per event.
    Chain {
        #[command(flatten)]
        range: Range,
        /// Rule that colours fixed points: price, right or left.
        #[arg(long, default_value = "price")]
        decorate: String,
        #[arg(long, default_value = "text")]
        format: String,
        #[command(flatten)]
        out: Output,
    },
    /// Draw a wiring, chord or hook diagram.
    Render {
        #[command(subcommand)]
        diagram: Diagram,
    },
    /// Validate a JSON report written by `analyze`.
    Check { report: PathBuf },
}

#[derive(Args)]
struct Range {
    /// Price CSV: a `date` column followed by one column per ticker.
    csv: PathBuf,
    #[arg(long)]
    ref_date: NaiveDate,
    #[arg(long)]
    end_date: NaiveDate,
}

#[derive(Args)]
struct OptionalRange {
    csv: Option<PathBuf>,
    #[arg(long, requires = "csv")]
    ref_date: Option<NaiveDate>,
    #[arg(long, requires = "csv")]
    end_date: Option<NaiveDate>,
}

impl OptionalRange {
    fn load(&self) -> Result<Option<(PriceTable, NaiveDate, NaiveDate)>> {
        let Some(path) = &self.csv else {
            return Ok(None);
        };
        let (Some(r), Some(e)) = (self.ref_date, self.end_date) else {
            bail!("--ref-date and --end-date are required with a CSV file");
        };
        Ok(Some((load_table(path)?, r, e)))
    }
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Style {
    /// svg or ascii.
    #[arg(long, default_value = "svg")]
    format: String,
}

#[derive(Subcommand)]
enum Diagram {
    /// Wires from a CSV range, or from `--word` and `--labels`.
    Wiring {
        #[command(flatten)]
        range: OptionalRange,
        /// Comma-separated letters, e.g. 2,3,1.
        #[arg(long, conflicts_with = "csv", requires = "labels")]
        word: Option<String>,
        /// Comma-separated wire labels, top to bottom.
        #[arg(long, conflicts_with = "csv")]
        labels: Option<String>,
        #[command(flatten)]
        style: Style,
        #[command(flatten)]
        out: Output,
    },
    /// Arcs of a decorated permutation.
    Chords {
        #[command(flatten)]
        cell: CellInput,
        #[command(flatten)]
        style: Style,
        #[command(flatten)]
        out: Output,
    },
    /// Hooks of the affine lift, annotated with interval ranks.
    Hooks {
        #[command(flatten)]
        cell: CellInput,
        #[command(flatten)]
        style: Style,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct CellInput {
    #[command(flatten)]
    range: OptionalRange,
    /// One-line permutation, e.g. 2,4,1,3.
    #[arg(long, conflicts_with = "csv")]
    perm: Option<String>,
    /// Fixed points coloured left; the others are right.
    #[arg(long, requires = "perm", value_delimiter = ',')]
    left: Vec<usize>,
}

impl CellInput {
    fn decorated(&self) -> Result<DecoratedPermutation> {
        if let Some((table, r, e)) = self.range.load()? {
            return Ok(table.decorated_at(r, e)?);
        }
        let Some(perm) = &self.perm else {
            bail!("give either a CSV range or --perm");
        };
        let perm = Permutation::new(parse_list(perm)?)?;
        let colors = self.left.iter().map(|&i| (i, Color::Left));
        let mut colors: std::collections::BTreeMap<_, _> = colors.collect();
        for i in perm.fixed_points() {
            colors.entry(i).or_insert(Color::Right);
        }
        Ok(DecoratedPermutation::new(perm, colors)?)
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .with_context(|| format!("`{t}` is not a positive integer"))
        })
        .collect()
}

fn load_table(path: &Path) -> Result<PriceTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_price_csv(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: &Output, doc: &str) -> Result<()> {
    match &out.out {
        Some(path) => fs::write(path, doc).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

fn labels_at(table: &PriceTable, reference: NaiveDate) -> Result<Vec<String>> {
    (1..=table.n())
        .map(|i| Ok(table.tickers()[table.stock_at_rank(reference, i)?].clone()))
        .collect()
}

fn render(diagram: Diagram) -> Result<()> {
    let renderers = RendererRegistry::builtin();
    match diagram {
        Diagram::Wiring {
            range,
            word,
            labels,
            style,
            out,
        } => {
            let (word, labels) = match range.load()? {
                Some((table, r, e)) => {
                    let events = table.crossing_stream(r, e)?;
                    (stream_word(&events, table.n()), labels_at(&table, r)?)
                }
                None => {
                    let Some(labels) = labels else {
                        bail!("give either a CSV range or --labels (with --word)");
                    };
                    let labels: Vec<String> =
                        labels.split(',').map(|s| s.trim().to_string()).collect();
                    let letters = word
                        .as_deref()
                        .map(parse_list)
                        .transpose()?
                        .unwrap_or_default();
                    (WiringWord::new(labels.len(), letters)?, labels)
                }
            };
            emit(&out, &renderers.get(&style.format)?.wiring(&word, &labels)?)
        }
        Diagram::Chords { cell, style, out } => {
            let dp = cell.decorated()?;
            emit(&out, &renderers.get(&style.format)?.chords(&dp))
        }
        Diagram::Hooks { cell, style, out } => {
            let terms = DimensionTerms::of(&cell.decorated()?);
            emit(&out, &renderers.get(&style.format)?.hooks(&terms)?)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let formats = FormatRegistry::builtin();
    match cli.command {
        Command::Analyze {
            range,
            facets,
            format,
            check,
            out,
        } => {
            let fmt = formats.get(&format)?;
            let table = load_table(&range.csv)?;
            let rep = report::analyze(
                &table,
                range.ref_date,
                range.end_date,
                AnalyzeOptions { facets },
            )?;
            if check {
                report::check_report(&rep)?;
            }
            emit(&out, &fmt.analysis(&rep))
        }
        Command::Chain {
            range,
            decorate,
            format,
            out,
        } => {
            let fmt = formats.get(&format)?;
            let table = load_table(&range.csv)?;
            let rules = DecorationRegistry::builtin();
            let rep = report::chain(&table, range.ref_date, range.end_date, &decorate, &rules)?;
            emit(&out, &fmt.chain(&rep))
        }
        Command::Render { diagram } => render(diagram),
        Command::Check { report: path } => {
            let text =
                fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let rep: AnalysisReport = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            report::check_report(&rep)?;
            println!("ok");
            Ok(())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<ReportError>() {
        Some(ReportError::Inconsistent(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
