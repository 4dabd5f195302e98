use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;

use crate::corpus::{IndicatorKind, InterruptionSpec, StudyWindow};
use crate::error::{Error, Result};
use crate::inference::IrfOptions;
use crate::series::MonthStamp;
use crate::stationarity::{AdfLag, AdfRegression};
use crate::var::InfoCriterion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Markdown,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "md",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "markdown",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorConfig {
    /// Short key used on the command line, e.g. `ruble`.
    pub key: String,
    pub path: PathBuf,
    pub kind: IndicatorKind,
    /// Series name in tables, e.g. `Ruble`.
    pub label: String,
}

/// Statistical settings shared by every (page, topic, indicator) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSettings {
    pub alpha: f64,
    pub max_d: usize,
    pub adf_regression: AdfRegression,
    pub adf_lag: AdfLag,
    pub max_lag: usize,
    pub criterion: InfoCriterion,
    pub granger_dmax: usize,
    pub irf: IrfOptions,
    pub ljung_box_lags: usize,
    pub skip_leading: usize,
    pub include_constant: bool,
    pub include_trend: bool,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            max_d: 2,
            adf_regression: AdfRegression::default(),
            adf_lag: AdfLag::default(),
            max_lag: 6,
            criterion: InfoCriterion::Schwarz,
            granger_dmax: 0,
            irf: IrfOptions::default(),
            ljung_box_lags: 10,
            skip_leading: 0,
            include_constant: true,
            include_trend: true,
        }
    }
}

impl AnalysisSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if self.max_lag == 0 {
            return Err(Error::Config("max_lag must be at least 1".into()));
        }
        if self.irf.horizon == 0 {
            return Err(Error::Config("irf_horizon must be at least 1".into()));
        }
        if !(self.irf.ci_level > 0.0 && self.irf.ci_level < 1.0) {
            return Err(Error::Config(format!("irf_ci {} outside (0, 1)", self.irf.ci_level)));
        }
        if self.ljung_box_lags == 0 {
            return Err(Error::Config("ljung_box_lags must be at least 1".into()));
        }
        Ok(())
    }
}

/// Everything needed to reproduce a run. Paths are resolved against the
/// directory of the config file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub posts: PathBuf,
    pub labels: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub indicators: Vec<IndicatorConfig>,
    pub window: StudyWindow,
    pub pages: Vec<String>,
    pub topics: Vec<String>,
    pub interruptions: Vec<InterruptionSpec>,
    pub settings: AnalysisSettings,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: PathBuf,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("`{key}`: expected true or false, got `{value}`"))),
    }
}

fn parse_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn default_kind(key: &str) -> IndicatorKind {
    if key == "ruble" {
        IndicatorKind::InverseRate
    } else {
        IndicatorKind::MonthlyMean
    }
}

fn default_label(key: &str) -> String {
    let mut c = key.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Flat `key = value` lines; `#` starts a comment line. `interruption`
    /// (`Name @ YYYY-MM-DD`) may repeat; indicators use `indicator.<key>`,
    /// `indicator.<key>.kind` and `indicator.<key>.label`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut single: BTreeMap<String, String> = BTreeMap::new();
        let mut interruptions = Vec::new();
        let mut indicators: BTreeMap<String, [Option<String>; 3]> = BTreeMap::new();
        let mut indicator_order = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "interruption" {
                let (name, date) = value.split_once('@').ok_or_else(|| {
                    Error::Config(format!("line {}: expected `interruption = Name @ YYYY-MM-DD`", i + 1))
                })?;
                let cutoff = NaiveDate::parse_from_str(date.trim(), "%Y-%m-%d")
                    .map_err(|_| Error::Config(format!("line {}: bad date `{}`", i + 1, date.trim())))?;
                interruptions.push(InterruptionSpec {
                    name: name.trim().to_string(),
                    cutoff,
                });
                continue;
            }
            if let Some(rest) = key.strip_prefix("indicator.") {
                let (name, field) = match rest.split_once('.') {
                    Some((n, "kind")) => (n, 1),
                    Some((n, "label")) => (n, 2),
                    Some(_) => return Err(Error::Config(format!("line {}: unknown key `{key}`", i + 1))),
                    None => (rest, 0),
                };
                if !indicators.contains_key(name) {
                    indicator_order.push(name.to_string());
                }
                let slot = &mut indicators.entry(name.to_string()).or_default()[field];
                if slot.replace(value.to_string()).is_some() {
                    return Err(Error::Config(format!("line {}: `{key}` given twice", i + 1)));
                }
                continue;
            }
            if single.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Error::Config(format!("line {}: `{key}` given twice", i + 1)));
            }
        }

        let mut take = |key: &str| single.remove(key);
        let required = |v: Option<String>, key: &str| {
            v.ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
        };
        let posts = base.join(required(take("posts"), "posts")?);
        let labels = take("labels").map(|p| base.join(p));
        let lexicon = take("lexicon").map(|p| base.join(p));
        let first: MonthStamp = parse_value("window_start", &required(take("window_start"), "window_start")?)?;
        let last: MonthStamp = parse_value("window_end", &required(take("window_end"), "window_end")?)?;
        let window = StudyWindow::new(first, last)?;
        let pages = parse_list(&required(take("pages"), "pages")?);
        let topics = parse_list(&required(take("topics"), "topics")?);

        let mut s = AnalysisSettings::default();
        if let Some(v) = take("alpha") {
            s.alpha = parse_value("alpha", &v)?;
        }
        if let Some(v) = take("max_d") {
            s.max_d = parse_value("max_d", &v)?;
        }
        if let Some(v) = take("adf_regression") {
            s.adf_regression = v.parse()?;
        }
        if let Some(v) = take("adf_lag") {
            s.adf_lag = if v.eq_ignore_ascii_case("auto") {
                AdfLag::Auto
            } else {
                AdfLag::Fixed(parse_value("adf_lag", &v)?)
            };
        }
        if let Some(v) = take("max_lag") {
            s.max_lag = parse_value("max_lag", &v)?;
        }
        if let Some(v) = take("criterion") {
            s.criterion = v.parse()?;
        }
        if let Some(v) = take("granger_dmax") {
            s.granger_dmax = parse_value("granger_dmax", &v)?;
        }
        if let Some(v) = take("irf_horizon") {
            s.irf.horizon = parse_value("irf_horizon", &v)?;
        }
        if let Some(v) = take("irf_reps") {
            s.irf.boot_reps = parse_value("irf_reps", &v)?;
        }
        if let Some(v) = take("irf_ci") {
            s.irf.ci_level = parse_value("irf_ci", &v)?;
        }
        if let Some(v) = take("irf_orthogonalized") {
            s.irf.orthogonalized = parse_bool("irf_orthogonalized", &v)?;
        }
        if let Some(v) = take("ljung_box_lags") {
            s.ljung_box_lags = parse_value("ljung_box_lags", &v)?;
        }
        if let Some(v) = take("skip_leading") {
            s.skip_leading = parse_value("skip_leading", &v)?;
        }
        if let Some(v) = take("constant") {
            s.include_constant = parse_bool("constant", &v)?;
        }
        if let Some(v) = take("trend") {
            s.include_trend = parse_bool("trend", &v)?;
        }
        let seed = take("seed").map(|v| parse_value("seed", &v)).transpose()?.unwrap_or(0);
        let format = take("format").map(|v| v.parse()).transpose()?.unwrap_or_default();
        let out = base.join(take("out").unwrap_or_else(|| "varflow-out".into()));
        if let Some(k) = single.keys().next() {
            return Err(Error::Config(format!("unknown key `{k}`")));
        }
        s.validate()?;

        let indicators = indicator_order
            .into_iter()
            .map(|key| {
                let [path, kind, label] = indicators.remove(&key).expect("recorded key");
                let path = path.ok_or_else(|| Error::Config(format!("indicator `{key}` has no path")))?;
                Ok(IndicatorConfig {
                    path: base.join(path),
                    kind: kind.map(|k| k.parse()).transpose()?.unwrap_or_else(|| default_kind(&key)),
                    label: label.unwrap_or_else(|| default_label(&key)),
                    key,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if indicators.is_empty() {
            return Err(Error::Config("no indicator configured".into()));
        }
        if pages.is_empty() || topics.is_empty() {
            return Err(Error::Config("pages and topics must be non-empty".into()));
        }
        for spec in &interruptions {
            if !window.contains(spec.cutoff) {
                return Err(Error::Config(format!(
                    "interruption `{}` cutoff {} is outside the study window",
                    spec.name, spec.cutoff
                )));
            }
        }
        Ok(Self {
            posts,
            labels,
            lexicon,
            indicators,
            window,
            pages,
            topics,
            interruptions,
            settings: s,
            seed,
            format,
            out,
        })
    }

    /// Keep only the indicator with `key`, or all when `key` is `all`.
    pub fn select_indicator(&mut self, key: &str) -> Result<()> {
        if key == "all" {
            return Ok(());
        }
        self.indicators.retain(|i| i.key == key);
        if self.indicators.is_empty() {
            return Err(Error::Config(format!("indicator `{key}` is not configured")));
        }
        Ok(())
    }

    /// The config in its own file format with absolute paths; parsing the
    /// result gives back an equal config.
    pub fn to_manifest(&self) -> String {
        let abs = |p: &Path| std::path::absolute(p).unwrap_or_else(|_| p.to_path_buf()).display().to_string();
        let s = &self.settings;
        let mut m = String::new();
        let _ = writeln!(m, "# varflow {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(m, "posts = {}", abs(&self.posts));
        if let Some(p) = &self.labels {
            let _ = writeln!(m, "labels = {}", abs(p));
        }
        if let Some(p) = &self.lexicon {
            let _ = writeln!(m, "lexicon = {}", abs(p));
        }
        for i in &self.indicators {
            let _ = writeln!(m, "indicator.{} = {}", i.key, abs(&i.path));
            let _ = writeln!(m, "indicator.{}.kind = {}", i.key, i.kind);
            let _ = writeln!(m, "indicator.{}.label = {}", i.key, i.label);
        }
        let _ = writeln!(m, "window_start = {}", self.window.first());
        let _ = writeln!(m, "window_end = {}", self.window.last());
        let _ = writeln!(m, "pages = {}", self.pages.join(", "));
        let _ = writeln!(m, "topics = {}", self.topics.join(", "));
        for i in &self.interruptions {
            let _ = writeln!(m, "interruption = {} @ {}", i.name, i.cutoff);
        }
        let _ = writeln!(m, "alpha = {}", s.alpha);
        let _ = writeln!(m, "max_d = {}", s.max_d);
        let _ = writeln!(m, "adf_regression = {}", s.adf_regression);
        let _ = writeln!(
            m,
            "adf_lag = {}",
            match s.adf_lag {
                AdfLag::Auto => "auto".to_string(),
                AdfLag::Fixed(k) => k.to_string(),
            }
        );
        let _ = writeln!(m, "max_lag = {}", s.max_lag);
        let _ = writeln!(m, "criterion = {}", s.criterion);
        let _ = writeln!(m, "granger_dmax = {}", s.granger_dmax);
        let _ = writeln!(m, "irf_horizon = {}", s.irf.horizon);
        let _ = writeln!(m, "irf_reps = {}", s.irf.boot_reps);
        let _ = writeln!(m, "irf_ci = {}", s.irf.ci_level);
        let _ = writeln!(m, "irf_orthogonalized = {}", s.irf.orthogonalized);
        let _ = writeln!(m, "ljung_box_lags = {}", s.ljung_box_lags);
        let _ = writeln!(m, "skip_leading = {}", s.skip_leading);
        let _ = writeln!(m, "constant = {}", s.include_constant);
        let _ = writeln!(m, "trend = {}", s.include_trend);
        let _ = writeln!(m, "seed = {}", self.seed);
        let _ = writeln!(m, "format = {}", self.format);
        let _ = writeln!(m, "out = {}", abs(&self.out));
        m
    }
}
