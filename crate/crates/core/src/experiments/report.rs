use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Version tag written into every report.
pub const REPORT_VERSION: u32 = 1;

/// Where a target value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated in the source.
    Published,
    /// Computed here from stated formulas.
    Derived,
    /// No target; the output is descriptive.
    Exploratory,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Published => "published",
            Provenance::Derived => "derived",
            Provenance::Exploratory => "exploratory",
        }
    }
}

/// How `pass` is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassRule {
    /// Target inside the confidence interval.
    TargetInCi,
    /// |estimate − target| ≤ tolerance.
    AbsTolerance,
    /// |estimate/target − 1| ≤ tolerance.
    RelTolerance,
    /// estimate < tolerance.
    Below,
    /// Exact equality checked symbolically.
    Exact,
    /// A qualitative property decided by the experiment.
    Qualitative,
}

impl PassRule {
    pub fn label(self) -> &'static str {
        match self {
            PassRule::TargetInCi => "target_in_ci",
            PassRule::AbsTolerance => "abs_tolerance",
            PassRule::RelTolerance => "rel_tolerance",
            PassRule::Below => "below",
            PassRule::Exact => "exact",
            PassRule::Qualitative => "qualitative",
        }
    }
}

/// One estimated statistic with its target and verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatResult {
    pub experiment: String,
    pub statistic: String,
    pub params: BTreeMap<String, f64>,
    pub seed: Option<u64>,
    pub estimate: f64,
    /// Normal-approximation interval at level 0.99 where one applies.
    pub ci: Option<[f64; 2]>,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    pub provenance: Provenance,
    pub rule: PassRule,
    pub pass: bool,
    pub diagnostics: BTreeMap<String, f64>,
}

impl StatResult {
    pub fn new(experiment: &str, statistic: impl Into<String>, estimate: f64) -> Self {
        StatResult {
            experiment: experiment.into(),
            statistic: statistic.into(),
            params: BTreeMap::new(),
            seed: None,
            estimate,
            ci: None,
            target: None,
            tolerance: None,
            provenance: Provenance::Exploratory,
            rule: PassRule::Qualitative,
            pass: true,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn params(mut self, params: &BTreeMap<String, f64>, seed: Option<u64>) -> Self {
        self.params = params.clone();
        self.seed = seed;
        self
    }

    pub fn ci(mut self, lo: f64, hi: f64) -> Self {
        self.ci = Some([lo, hi]);
        self
    }

    pub fn target(mut self, target: f64, provenance: Provenance) -> Self {
        self.target = Some(target);
        self.provenance = provenance;
        self
    }

    pub fn diag(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.into(), value);
        self
    }

    /// Decides `pass` by a numeric rule.
    pub fn judge(mut self, rule: PassRule, tolerance: Option<f64>) -> Self {
        self.rule = rule;
        self.tolerance = tolerance;
        let (e, t, tol) = (self.estimate, self.target, tolerance.unwrap_or(0.0));
        self.pass = match rule {
            PassRule::TargetInCi => match (self.ci, t) {
                (Some([lo, hi]), Some(t)) => lo <= t && t <= hi,
                _ => false,
            },
            PassRule::AbsTolerance => t.is_some_and(|t| (e - t).abs() <= tol),
            PassRule::RelTolerance => t.is_some_and(|t| t != 0.0 && (e / t - 1.0).abs() <= tol),
            PassRule::Below => e < tol,
            PassRule::Exact | PassRule::Qualitative => self.pass,
        };
        self
    }

    /// Sets the verdict of an exact or qualitative check.
    pub fn verdict(mut self, rule: PassRule, pass: bool) -> Self {
        self.rule = rule;
        self.pass = pass;
        self
    }
}

#[derive(Serialize, Deserialize)]
struct ReportFile {
    version: u32,
    results: Vec<StatResult>,
}

/// One CSV row. Parameters and diagnostics are only in the JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub experiment: String,
    pub statistic: String,
    pub seed: Option<u64>,
    pub estimate: f64,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    pub provenance: Provenance,
    pub rule: PassRule,
    pub pass: bool,
}

impl From<&StatResult> for CsvRow {
    fn from(r: &StatResult) -> Self {
        CsvRow {
            experiment: r.experiment.clone(),
            statistic: r.statistic.clone(),
            seed: r.seed,
            estimate: r.estimate,
            ci_lo: r.ci.map(|c| c[0]),
            ci_hi: r.ci.map(|c| c[1]),
            target: r.target,
            tolerance: r.tolerance,
            provenance: r.provenance,
            rule: r.rule,
            pass: r.pass,
        }
    }
}

fn nonempty(results: &[StatResult]) -> Result<()> {
    if results.is_empty() {
        return Err(Error::Invalid("no results to report".into()));
    }
    if let Some(r) = results.iter().find(|r| !r.estimate.is_finite()) {
        return Err(Error::Check(format!("{}/{} has a non-finite estimate", r.experiment, r.statistic)));
    }
    Ok(())
}

pub fn to_json(results: &[StatResult]) -> Result<String> {
    nonempty(results)?;
    let mut s = serde_json::to_string_pretty(&ReportFile { version: REPORT_VERSION, results: results.to_vec() })?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(s: &str) -> Result<Vec<StatResult>> {
    let f: ReportFile = serde_json::from_str(s)?;
    if f.version != REPORT_VERSION {
        return Err(Error::Invalid(format!("report version {} not supported", f.version)));
    }
    Ok(f.results)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

pub fn to_csv(results: &[StatResult]) -> Result<String> {
    nonempty(results)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in results {
        w.serialize(CsvRow::from(r)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("csv: {e}")))
}

pub fn parse_csv(s: &str) -> Result<Vec<CsvRow>> {
    csv::Reader::from_reader(s.as_bytes()).deserialize().map(|r| r.map_err(csv_err)).collect()
}

/// Output format of a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub fn render(results: &[StatResult], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv(results),
        Format::Json => to_json(results),
    }
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir` and returns both paths.
pub fn emit_report(results: &[StatResult], dir: &Path, stem: &str) -> Result<[PathBuf; 2]> {
    let csv = to_csv(results)?;
    let json = to_json(results)?;
    std::fs::create_dir_all(dir)?;
    let paths = [dir.join(format!("{stem}.csv")), dir.join(format!("{stem}.json"))];
    std::fs::write(&paths[0], csv)?;
    std::fs::write(&paths[1], json)?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<StatResult> {
        let mut params = BTreeMap::new();
        params.insert("p".to_string(), 2000.0);
        vec![
            StatResult::new("drift", "mean_x", 0.1 + 0.2)
                .params(&params, Some(7))
                .ci(0.09, 0.31)
                .target(0.0944911, Provenance::Published)
                .judge(PassRule::TargetInCi, None)
                .diag("n", 1e7),
            StatResult::new("interface", "mean_length", 2.5),
        ]
    }

    #[test]
    fn round_trips() {
        let r = sample();
        assert_eq!(parse_json(&to_json(&r).unwrap()).unwrap(), r);
        let rows = parse_csv(&to_csv(&r).unwrap()).unwrap();
        assert_eq!(rows, r.iter().map(CsvRow::from).collect::<Vec<_>>());
        assert!(r[0].pass);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(to_json(&[]).is_err());
        assert!(to_csv(&[]).is_err());
    }

    #[test]
    fn csv_header_and_bytes_are_stable() {
        let a = to_csv(&sample()).unwrap();
        assert_eq!(a, to_csv(&sample()).unwrap());
        assert!(a.starts_with("experiment,statistic,seed,estimate,ci_lo,ci_hi,target,tolerance,provenance,rule,pass\n"));
        assert!(a.contains("drift,mean_x,7,0.30000000000000004,0.09,0.31,0.0944911,,published,target_in_ci,true"));
    }

    #[test]
    fn pass_rules() {
        let r = StatResult::new("e", "s", 1.02).target(1.0, Provenance::Derived);
        assert!(r.clone().judge(PassRule::RelTolerance, Some(0.03)).pass);
        assert!(!r.clone().judge(PassRule::AbsTolerance, Some(0.01)).pass);
        assert!(!r.clone().judge(PassRule::TargetInCi, None).pass);
        assert!(!r.judge(PassRule::Below, Some(1.0)).pass);
    }
}
