//! Comparison tables. Computed cells always come from the executor; the only
//! other numbers are reference rows marked as reported.

use std::fmt::Write;

use serde::Serialize;

use crate::exec::{execute, Violation};
use crate::model::{Plan, PlanStats};
use crate::report::reference::ReportedCounts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowSource {
    Computed,
    /// Published figure, shown for reference only.
    Reported,
    /// The oracle ran out of budget.
    Unknown,
    /// The oracle proved no plan exists within its caps.
    Infeasible,
    /// Outside the oracle's size limits; not attempted.
    Skipped,
}

impl RowSource {
    fn as_str(self) -> &'static str {
        match self {
            RowSource::Computed => "computed",
            RowSource::Reported => "reported",
            RowSource::Unknown => "unknown",
            RowSource::Infeasible => "infeasible",
            RowSource::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub series: String,
    pub algorithm: String,
    pub source: RowSource,
    pub sample: Option<usize>,
    pub buffer: Option<usize>,
    pub waste: Option<usize>,
    pub steps: Option<usize>,
    pub peak: Option<usize>,
}

impl TableRow {
    /// Executes `plan` and fills the row from its trace.
    pub fn computed(series: &str, algorithm: &str, plan: &Plan) -> Result<Self, Vec<Violation>> {
        let trace = execute(plan);
        if !trace.is_valid() {
            return Err(trace.violations);
        }
        Ok(Self::from_stats(series, algorithm, &trace.stats))
    }

    fn from_stats(series: &str, algorithm: &str, s: &PlanStats) -> Self {
        TableRow {
            series: series.to_string(),
            algorithm: algorithm.to_string(),
            source: RowSource::Computed,
            sample: Some(s.n_sample),
            buffer: Some(s.n_buffer),
            waste: Some(s.n_waste),
            steps: Some(s.n_steps),
            peak: Some(s.peak_storage),
        }
    }

    pub fn reported(r: &ReportedCounts) -> Self {
        TableRow {
            series: r.series.clone(),
            algorithm: r.algorithm.clone(),
            source: RowSource::Reported,
            sample: Some(r.sample),
            buffer: Some(r.buffer),
            waste: Some(r.waste),
            steps: r.steps,
            peak: None,
        }
    }

    pub fn missing(series: &str, algorithm: &str, source: RowSource) -> Self {
        TableRow {
            series: series.to_string(),
            algorithm: algorithm.to_string(),
            source,
            sample: None,
            buffer: None,
            waste: None,
            steps: None,
            peak: None,
        }
    }

    fn cells(&self) -> [String; 8] {
        let n = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        [
            self.series.clone(),
            self.algorithm.clone(),
            self.source.as_str().to_string(),
            n(self.sample),
            n(self.buffer),
            n(self.waste),
            n(self.steps),
            n(self.peak),
        ]
    }
}

const COLUMNS: [&str; 8] = ["series", "algorithm", "source", "S", "B", "W", "steps", "peak"];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ComparisonTable {
    pub rows: Vec<TableRow>,
}

impl ComparisonTable {
    pub fn push(&mut self, row: TableRow) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = COLUMNS.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.cells().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<[String; 8]> = self.rows.iter().map(TableRow::cells).collect();
        let mut width = COLUMNS.map(str::len);
        for row in &cells {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |row: &[String]| {
            let mut s = String::new();
            for (i, (c, w)) in row.iter().zip(width).enumerate() {
                // text columns left, counts right
                if i < 3 {
                    let _ = write!(s, "{c:<w$}  ");
                } else {
                    let _ = write!(s, "{c:>w$}  ");
                }
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = line(&COLUMNS.map(String::from));
        for row in &cells {
            out.push_str(&line(row));
        }
        out
    }

    /// `1 - sum(S of algorithm) / sum(S of baseline)` over the series where
    /// both have computed rows.
    pub fn sample_reduction(&self, algorithm: &str, baseline: &str) -> Option<f64> {
        self.reduction(algorithm, baseline, |r| r.sample)
    }

    pub fn waste_reduction(&self, algorithm: &str, baseline: &str) -> Option<f64> {
        self.reduction(algorithm, baseline, |r| r.waste)
    }

    fn reduction(&self, algorithm: &str, baseline: &str, field: impl Fn(&TableRow) -> Option<usize>) -> Option<f64> {
        let computed = |series: &str, algo: &str| {
            self.rows
                .iter()
                .find(|r| r.series == series && r.algorithm == algo && r.source == RowSource::Computed)
                .and_then(&field)
        };
        let mut series: Vec<&str> = self.rows.iter().map(|r| r.series.as_str()).collect();
        series.sort_unstable();
        series.dedup();
        let (mut a, mut b) = (0usize, 0usize);
        for s in series {
            if let (Some(x), Some(y)) = (computed(s, algorithm), computed(s, baseline)) {
                a += x;
                b += y;
            }
        }
        (b > 0).then(|| 1.0 - a as f64 / b as f64)
    }
}
