use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;

use super::posts::{column_index, csv_reader, row_error};
use crate::error::{Error, Result};
use crate::series::{MonthStamp, SeriesRole, TimeSeries};

/// How raw observations become a monthly value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndicatorKind {
    /// Invert each observation, then average within the month.
    #[default]
    InverseRate,
    /// Average within the month, then invert the mean.
    InverseOfMean,
    MonthlyMean,
}

impl fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndicatorKind::InverseRate => "inverse_rate",
            IndicatorKind::InverseOfMean => "inverse_of_mean",
            IndicatorKind::MonthlyMean => "monthly_mean",
        })
    }
}

impl FromStr for IndicatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inverse_rate" => Ok(IndicatorKind::InverseRate),
            "inverse_of_mean" => Ok(IndicatorKind::InverseOfMean),
            "monthly_mean" => Ok(IndicatorKind::MonthlyMean),
            other => Err(Error::Config(format!("unknown indicator kind `{other}`"))),
        }
    }
}

impl IndicatorKind {
    /// Per-observation transform applied before averaging.
    pub fn transform_observation(self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite observation {x}")));
        }
        match self {
            IndicatorKind::InverseRate | IndicatorKind::InverseOfMean if x <= 0.0 => {
                Err(Error::Domain(format!("rate {x} is not strictly positive")))
            }
            IndicatorKind::InverseRate => Ok(1.0 / x),
            _ => Ok(x),
        }
    }
}

/// Monthly series from dated observations. Every month between the first
/// and last observation must be present.
pub fn indicator_from_observations(
    name: &str,
    observations: &[(NaiveDate, f64)],
    kind: IndicatorKind,
) -> Result<TimeSeries> {
    let mut months: BTreeMap<MonthStamp, (f64, usize)> = BTreeMap::new();
    for &(date, x) in observations {
        let v = kind.transform_observation(x)?;
        let e = months.entry(MonthStamp::of_date(date)).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    let (&start, _) = months
        .first_key_value()
        .ok_or_else(|| Error::DegenerateInput(format!("indicator `{name}` has no observations")))?;
    let mut values = Vec::with_capacity(months.len());
    for (i, (&month, &(sum, n))) in months.iter().enumerate() {
        let expected = start.add_months(i as i64);
        if month != expected {
            return Err(Error::Gap {
                name: name.to_string(),
                missing: expected,
            });
        }
        let mean = sum / n as f64;
        values.push(match kind {
            IndicatorKind::InverseOfMean => 1.0 / mean,
            _ => mean,
        });
    }
    TimeSeries::new(name, start, values, SeriesRole::Indicator)
}

/// Read `date,value` rows (daily or monthly dates); rows with an empty value
/// are skipped.
pub fn read_indicator<R: Read>(rdr: R, source: &str, name: &str, kind: IndicatorKind) -> Result<TimeSeries> {
    let mut rdr = csv_reader(rdr);
    let idx = column_index(rdr.headers()?, &["date", "value"], source)?;
    let mut obs = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let raw_date = record.get(idx[0]).unwrap_or("").trim();
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d")
            .ok()
            .or_else(|| NaiveDate::parse_from_str(&format!("{raw_date}-01"), "%Y-%m-%d").ok())
            .ok_or_else(|| row_error(source, &record, "date", format!("unparseable date `{raw_date}`")))?;
        let raw = record.get(idx[1]).unwrap_or("").trim();
        if raw.is_empty() {
            continue;
        }
        let x: f64 = raw
            .parse()
            .map_err(|_| row_error(source, &record, "value", format!("not a number: `{raw}`")))?;
        kind.transform_observation(x)
            .map_err(|e| row_error(source, &record, "value", e.to_string()))?;
        obs.push((date, x));
    }
    indicator_from_observations(name, &obs, kind)
}

pub fn load_indicator(path: &Path, name: &str, kind: IndicatorKind) -> Result<TimeSeries> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    read_indicator(file, &path.display().to_string(), name, kind)
}
