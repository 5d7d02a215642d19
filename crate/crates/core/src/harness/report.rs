use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::{Experiment, ExperimentConfig};
use crate::error::{Error, Result};

/// Arithmetic mean; zero for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Standard error of the mean: sample standard deviation over `sqrt(n)`.
/// Zero when fewer than two values.
pub fn std_error(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Median (average of the middle pair for even lengths); NaN when empty.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Per-replication values of one named quantity and their summaries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Statistic {
    pub name: String,
    pub values: Vec<f64>,
    pub mean: f64,
    pub std_error: f64,
    pub median: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theoretical: Option<f64>,
}

impl Statistic {
    /// Fails if any value is NaN or infinite.
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "statistic '{name}', replication {pos}"
            )));
        }
        Ok(Statistic {
            mean: mean(&values),
            std_error: std_error(&values),
            median: median(&values),
            theoretical: None,
            name,
            values,
        })
    }

    pub fn with_theoretical(mut self, value: f64) -> Self {
        self.theoretical = Some(value);
        self
    }

    /// `|mean - target| <= k · SE`.
    pub fn within_se(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn render(&self, out: &mut String) {
        match *self {
            Cell::Int(i) => write!(out, "{i}").unwrap(),
            Cell::Float(x) => write!(out, "{}", format_float(x)).unwrap(),
            Cell::Bool(b) => out.push_str(if b { "true" } else { "false" }),
            Cell::Empty => {}
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

/// Floats in CSV output: 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table written next to the JSON report.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<&'static str>) -> Self {
        Table {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    pub master_seed: u64,
    pub replications: usize,
    pub runtime_seconds: f64,
    pub statistics: Vec<Statistic>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl ExperimentReport {
    pub fn statistic(&self, name: &str) -> Option<&Statistic> {
        self.statistics.iter().find(|s| s.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// One CSV per statistic (`replication,value`) plus the experiment tables,
    /// as `(file name, contents)` in a fixed order.
    pub fn csv_files(&self) -> Vec<(String, String)> {
        let mut files = Vec::new();
        for stat in &self.statistics {
            let mut t = Table::new(stat.name.clone(), vec!["replication", "value"]);
            for (r, &v) in stat.values.iter().enumerate() {
                t.push(vec![r.into(), v.into()]);
            }
            files.push((format!("{}.csv", stat.name), t.to_csv()));
        }
        for t in &self.tables {
            files.push((format!("{}.csv", t.name), t.to_csv()));
        }
        files
    }

    /// Write `report.json` and every CSV into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(self)?)?;
        for (name, body) in self.csv_files() {
            fs::write(dir.join(name), body)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_value_fixture() {
        let v = [2.0, 4.0, 4.0, 5.0, 10.0];
        assert_eq!(mean(&v), 5.0);
        // sample variance = (9 + 1 + 1 + 0 + 25) / 4 = 9, SE = 3 / sqrt(5)
        assert_eq!(std_error(&v), (9.0f64 / 5.0).sqrt());
        assert_eq!(median(&v), 4.0);
        assert_eq!(median(&[1.0, 3.0]), 2.0);
        assert_eq!(std_error(&[1.0]), 0.0);
    }

    #[test]
    fn non_finite_statistic_rejected() {
        assert!(matches!(
            Statistic::new("x", vec![1.0, f64::NAN]),
            Err(Error::NonFinite(_))
        ));
        assert!(Statistic::new("x", vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn csv_formatting() {
        let mut t = Table::new("t", vec!["replication", "x", "ok", "y"]);
        t.push(vec![0usize.into(), 0.1.into(), true.into(), Cell::Empty]);
        assert_eq!(
            t.to_csv(),
            "replication,x,ok,y\n0,1.0000000000000001e-1,true,\n"
        );
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
    }
}
