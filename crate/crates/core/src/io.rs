//! CSV ingestion, run configuration and report rendering.
//!
//! Header grammar: the first column is `id`; inputs are `i:<name>`, outputs
//! `o:<name>`. An interval column is a pair `i:<name>:lo` / `i:<name>:hi`
//! (likewise for outputs). When interval and point columns are mixed, point
//! columns become degenerate intervals.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{DeaError, Result};
use crate::exec::Execution;
use crate::fractional::BisectionConfig;
use crate::models::{Dataset, DmuRecord, ModelKind, PerturbationMask};
use crate::perturbation::RetentionReport;
use crate::properties::PropertyReport;
use crate::ranking::{EfficiencyRange, IntervalDataset, RankConfig, RankingResult};

#[derive(Debug, Clone, PartialEq)]
pub enum DataKind {
    Point(Dataset),
    Interval(IntervalDataset),
}

/// A parsed table: the data plus the column names it was read with.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedDataset {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub data: DataKind,
}

impl ParsedDataset {
    pub fn is_interval(&self) -> bool {
        matches!(self.data, DataKind::Interval(_))
    }

    /// Point data, or the interval data itself.
    pub fn into_interval(self) -> IntervalDataset {
        match self.data {
            DataKind::Point(ds) => IntervalDataset::from_point(ds),
            DataKind::Interval(iv) => iv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Side {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bound {
    Point,
    Lo,
    Hi,
}

struct Variable {
    side: Side,
    name: String,
    point: Option<usize>,
    lo: Option<usize>,
    hi: Option<usize>,
}

fn parse_error(row: usize, column: usize, message: impl Into<String>) -> DeaError {
    DeaError::Parse {
        row,
        column,
        message: message.into(),
    }
}

fn parse_header(cell: &str, column: usize) -> Result<(Side, String, Bound)> {
    let (side, rest) = if let Some(rest) = cell.strip_prefix("i:") {
        (Side::Input, rest)
    } else if let Some(rest) = cell.strip_prefix("o:") {
        (Side::Output, rest)
    } else {
        return Err(parse_error(
            1,
            column,
            format!("header '{cell}' must start with 'i:' or 'o:'"),
        ));
    };
    let (name, bound) = if let Some(name) = rest.strip_suffix(":lo") {
        (name, Bound::Lo)
    } else if let Some(name) = rest.strip_suffix(":hi") {
        (name, Bound::Hi)
    } else {
        (rest, Bound::Point)
    };
    if name.is_empty() {
        return Err(parse_error(1, column, format!("header '{cell}' has an empty name")));
    }
    Ok((side, name.to_string(), bound))
}

fn parse_value(cell: &str, row: usize, column: usize) -> Result<f64> {
    let value: f64 = cell
        .parse()
        .map_err(|_| parse_error(row, column, format!("'{cell}' is not a number")))?;
    if !value.is_finite() {
        return Err(parse_error(row, column, format!("'{cell}' is not finite")));
    }
    if value < 0.0 {
        return Err(parse_error(row, column, format!("negative value {value}")));
    }
    Ok(value)
}

/// Parses a CSV document. Rows and columns in errors are 1-based, with the
/// header on row 1.
pub fn parse_dataset(text: &str) -> Result<ParsedDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| parse_error(1, 1, format!("unreadable header: {e}")))?
        .clone();
    if headers.get(0) != Some("id") {
        return Err(parse_error(1, 1, "the first column must be 'id'"));
    }

    let mut variables: Vec<Variable> = Vec::new();
    let mut by_key: HashMap<(Side, String), usize> = HashMap::new();
    for (k, cell) in headers.iter().enumerate().skip(1) {
        let column = k + 1;
        let (side, name, bound) = parse_header(cell, column)?;
        let idx = *by_key.entry((side, name.clone())).or_insert_with(|| {
            variables.push(Variable {
                side,
                name,
                point: None,
                lo: None,
                hi: None,
            });
            variables.len() - 1
        });
        let var = &mut variables[idx];
        let slot = match bound {
            Bound::Point => &mut var.point,
            Bound::Lo => &mut var.lo,
            Bound::Hi => &mut var.hi,
        };
        if slot.is_some() {
            return Err(parse_error(1, column, format!("duplicate column '{cell}'")));
        }
        *slot = Some(k);
    }
    for var in &variables {
        let prefix = if var.side == Side::Input { "i" } else { "o" };
        match (var.point, var.lo, var.hi) {
            (Some(p), Some(_), _) | (Some(p), _, Some(_)) => {
                return Err(parse_error(
                    1,
                    p + 1,
                    format!("'{prefix}:{}' is given both as a point and as an interval", var.name),
                ));
            }
            (None, Some(c), None) | (None, None, Some(c)) => {
                return Err(parse_error(
                    1,
                    c + 1,
                    format!("interval column '{prefix}:{}' is missing its pair", var.name),
                ));
            }
            _ => {}
        }
    }
    let interval = variables.iter().any(|v| v.lo.is_some());
    let (inputs, outputs): (Vec<&Variable>, Vec<&Variable>) =
        variables.iter().partition(|v| v.side == Side::Input);
    if inputs.is_empty() || outputs.is_empty() {
        return Err(parse_error(1, 1, "need at least one input and one output column"));
    }

    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 2;
        let record = record.map_err(|e| parse_error(row, 1, format!("unreadable row: {e}")))?;
        if record.len() != headers.len() {
            return Err(parse_error(
                row,
                record.len().min(headers.len()) + 1,
                format!("expected {} cells, found {}", headers.len(), record.len()),
            ));
        }
        let id = record.get(0).unwrap_or_default().to_string();
        if id.is_empty() {
            return Err(parse_error(row, 1, "empty id"));
        }
        if let Some(first) = seen.insert(id.clone(), row) {
            return Err(parse_error(row, 1, format!("duplicate id '{id}' (first on row {first})")));
        }
        let read = |vars: &[&Variable]| -> Result<(Vec<f64>, Vec<f64>)> {
            let mut lo = Vec::with_capacity(vars.len());
            let mut hi = Vec::with_capacity(vars.len());
            for var in vars {
                match (var.point, var.lo, var.hi) {
                    (Some(c), _, _) => {
                        let v = parse_value(&record[c], row, c + 1)?;
                        lo.push(v);
                        hi.push(v);
                    }
                    (None, Some(a), Some(b)) => {
                        let l = parse_value(&record[a], row, a + 1)?;
                        let h = parse_value(&record[b], row, b + 1)?;
                        if l > h {
                            return Err(parse_error(row, a + 1, format!("lower bound {l} exceeds upper bound {h}")));
                        }
                        lo.push(l);
                        hi.push(h);
                    }
                    _ => unreachable!("pairs checked above"),
                }
            }
            Ok((lo, hi))
        };
        let (in_lo, in_hi) = read(&inputs)?;
        let (out_lo, out_hi) = read(&outputs)?;
        for (values, what) in [
            (&in_lo, "inputs"),
            (&in_hi, "inputs"),
            (&out_lo, "outputs"),
            (&out_hi, "outputs"),
        ] {
            if values.iter().all(|v| *v == 0.0) {
                return Err(parse_error(row, 1, format!("DMU '{id}' has all {what} zero")));
            }
        }
        lower.push(DmuRecord::new(id.clone(), in_lo, out_lo));
        upper.push(DmuRecord::new(id, in_hi, out_hi));
    }
    if lower.is_empty() {
        return Err(parse_error(2, 1, "no data rows"));
    }

    let lower = Dataset::new(lower)?;
    let data = if interval {
        DataKind::Interval(IntervalDataset::new(lower, Dataset::new(upper)?)?)
    } else {
        DataKind::Point(lower)
    };
    Ok(ParsedDataset {
        input_names: inputs.iter().map(|v| v.name.clone()).collect(),
        output_names: outputs.iter().map(|v| v.name.clone()).collect(),
        data,
    })
}

/// CSV with inputs before outputs. Values are written in shortest
/// round-trip form, so parsing the result gives back identical numbers.
pub fn serialize_dataset(parsed: &ParsedDataset) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string()];
    let push_names = |header: &mut Vec<String>, prefix: &str, names: &[String], interval: bool| {
        for name in names {
            if interval {
                header.push(format!("{prefix}:{name}:lo"));
                header.push(format!("{prefix}:{name}:hi"));
            } else {
                header.push(format!("{prefix}:{name}"));
            }
        }
    };
    let interval = parsed.is_interval();
    push_names(&mut header, "i", &parsed.input_names, interval);
    push_names(&mut header, "o", &parsed.output_names, interval);
    writer.write_record(&header).expect("writing to memory");
    match &parsed.data {
        DataKind::Point(ds) => {
            for dmu in ds.dmus() {
                let mut row = vec![dmu.id.clone()];
                row.extend(dmu.inputs.iter().chain(&dmu.outputs).map(|v| v.to_string()));
                writer.write_record(&row).expect("writing to memory");
            }
        }
        DataKind::Interval(iv) => {
            for (lo, hi) in iv.lower().dmus().iter().zip(iv.upper().dmus()) {
                let mut row = vec![lo.id.clone()];
                let pairs = lo.inputs.iter().zip(&hi.inputs).chain(lo.outputs.iter().zip(&hi.outputs));
                for (a, b) in pairs {
                    row.push(a.to_string());
                    row.push(b.to_string());
                }
                writer.write_record(&row).expect("writing to memory");
            }
        }
    }
    String::from_utf8(writer.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

impl FromStr for OutputFormat {
    type Err = DeaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Self::Table),
            "json" => Ok(Self::Json),
            other => Err(DeaError::InvalidInput(format!(
                "unknown format '{other}' (expected table or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub mask: PerturbationMask,
    pub include_self_classical: bool,
    pub interval_mode: bool,
    pub bisection: BisectionConfig,
    pub output_format: OutputFormat,
    pub precision: usize,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelKind::CcrRobustLp,
            mask: PerturbationMask::ALL,
            include_self_classical: true,
            interval_mode: false,
            bisection: BisectionConfig::default(),
            output_format: OutputFormat::Table,
            precision: 4,
            seed: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=12).contains(&self.precision) {
            return Err(DeaError::InvalidInput(format!(
                "precision {} must lie in 1..=12",
                self.precision
            )));
        }
        self.mask.validate()?;
        self.bisection.validate()
    }

    pub fn rank_config(&self) -> RankConfig {
        RankConfig {
            bisection: self.bisection,
            include_self_classical: self.include_self_classical,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Serialize)]
struct RankRecord<'a> {
    id: &'a str,
    model: ModelKind,
    delta_star: f64,
    r: f64,
    /// `null` when the classical program is unbounded.
    classical: Option<f64>,
    efficient: bool,
}

#[derive(Debug, Serialize)]
struct RangeRecord<'a> {
    id: &'a str,
    r_lower: f64,
    r_upper: f64,
    always_efficient: bool,
    never_efficient: bool,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn fixed(value: f64, precision: usize) -> String {
    if value.is_infinite() {
        if value > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{value:.precision$}")
    }
}

/// Left-aligned first column, every other column right-aligned.
fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut parts = Vec::new();
        for (k, cell) in cells.enumerate() {
            let w = widths[k];
            parts.push(if k == 0 { format!("{cell:<w$}") } else { format!("{cell:>w$}") });
        }
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

/// Rankings in dataset order. The table adds each DMU's position in the
/// sorted order.
pub fn render_rankings(results: &[RankingResult], format: OutputFormat, precision: usize) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let records: Vec<RankRecord> = results
                .iter()
                .map(|r| RankRecord {
                    id: &r.dmu_id,
                    model: r.model,
                    delta_star: r.delta_star,
                    r: r.r,
                    classical: r.classical_score.is_finite().then_some(r.classical_score),
                    efficient: r.efficient,
                })
                .collect();
            Ok(to_json(&records))
        }
        OutputFormat::Table => {
            let order = crate::ranking::sorted_order(results)?;
            let position: HashMap<&str, usize> =
                order.iter().enumerate().map(|(k, id)| (id.as_str(), k + 1)).collect();
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.dmu_id.clone(),
                        fixed(r.classical_score, precision),
                        fixed(r.delta_star, precision),
                        fixed(r.r, precision),
                        if r.efficient { "yes" } else { "no" }.to_string(),
                        position[r.dmu_id.as_str()].to_string(),
                    ]
                })
                .collect();
            Ok(render_table(&["id", "classical", "delta_star", "r", "efficient", "rank"], &rows))
        }
    }
}

pub fn render_ranges(ranges: &[EfficiencyRange], format: OutputFormat, precision: usize) -> String {
    match format {
        OutputFormat::Json => {
            let records: Vec<RangeRecord> = ranges
                .iter()
                .map(|r| RangeRecord {
                    id: &r.dmu_id,
                    r_lower: r.r_lower,
                    r_upper: r.r_upper,
                    always_efficient: r.always_efficient,
                    never_efficient: r.never_efficient,
                })
                .collect();
            to_json(&records)
        }
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = ranges
                .iter()
                .map(|r| {
                    let status = if r.always_efficient {
                        "always efficient"
                    } else if r.never_efficient {
                        "never efficient"
                    } else {
                        "undetermined"
                    };
                    vec![
                        r.dmu_id.clone(),
                        fixed(r.r_lower, precision),
                        fixed(r.r_upper, precision),
                        status.to_string(),
                    ]
                })
                .collect();
            render_table(&["id", "r_lower", "r_upper", "status"], &rows)
        }
    }
}

pub fn render_retention(report: &RetentionReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Table => {
            let status = if report.nominal_efficient { "efficient" } else { "inefficient" };
            let mut out = format!(
                "DMU {} ({status}), delta {}: retained {} of {} trials\n",
                report.dmu_id, report.delta, report.retained, report.trials
            );
            for seed in &report.violations {
                let _ = writeln!(out, "  flipped: seed {seed}");
            }
            out
        }
    }
}

pub fn render_properties(reports: &[PropertyReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(&reports),
        OutputFormat::Table => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.name.to_string(),
                        r.checked.to_string(),
                        r.violations.to_string(),
                        if r.passed() { "ok" } else { "FAILED" }.to_string(),
                    ]
                })
                .collect();
            let mut out = render_table(&["suite", "checked", "violations", "status"], &rows);
            for r in reports {
                for e in &r.examples {
                    let _ = writeln!(out, "  {}: {e}", r.name);
                }
            }
            out
        }
    }
}
