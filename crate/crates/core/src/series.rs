//! Monthly time-series container and the elementary transforms used by the
//! workflow: differencing, autocorrelation, calendar alignment and min-max
//! normalization.

use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};

use crate::error::{Error, Result};

/// A calendar month. Ordering is chronological.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonthStamp {
    year: i32,
    month: u32,
}

impl MonthStamp {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::Parameter(format!("month {month} outside 1..12")));
        }
        Ok(Self { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    pub fn of_date(date: NaiveDate) -> Self {
        Self {
            year: date.year(),
            month: date.month(),
        }
    }

    fn ordinal(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    fn from_ordinal(ordinal: i64) -> Self {
        Self {
            year: ordinal.div_euclid(12) as i32,
            month: ordinal.rem_euclid(12) as u32 + 1,
        }
    }

    /// Shift by `n` months (negative moves backwards).
    pub fn add_months(self, n: i64) -> Self {
        Self::from_ordinal(self.ordinal() + n)
    }

    /// Signed number of months from `self` to `other`.
    pub fn months_until(self, other: MonthStamp) -> i64 {
        other.ordinal() - self.ordinal()
    }

    pub fn first_day(self) -> NaiveDate {
        NaiveDate::from_ymd_opt(self.year, self.month, 1).expect("valid month")
    }

    pub fn last_day(self) -> NaiveDate {
        self.add_months(1).first_day().pred_opt().expect("date in range")
    }
}

impl fmt::Display for MonthStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for MonthStamp {
    type Err = Error;

    /// Accepts `YYYY-MM` or a full `YYYY-MM-DD` date.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(date) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
            return Ok(Self::of_date(date));
        }
        let (y, m) = s
            .split_once('-')
            .ok_or_else(|| Error::Parameter(format!("cannot parse month `{s}`")))?;
        let year = y
            .parse::<i32>()
            .map_err(|_| Error::Parameter(format!("cannot parse month `{s}`")))?;
        let month = m
            .parse::<u32>()
            .map_err(|_| Error::Parameter(format!("cannot parse month `{s}`")))?;
        Self::new(year, month)
    }
}

/// What a series represents inside a panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesRole {
    TopicCount,
    Indicator,
    Dummy,
}

/// A contiguous monthly series of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    start: MonthStamp,
    values: Vec<f64>,
    role: SeriesRole,
}

impl TimeSeries {
    pub fn new(
        name: impl Into<String>,
        start: MonthStamp,
        values: Vec<f64>,
        role: SeriesRole,
    ) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::DegenerateInput(format!("series `{name}` is empty")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::DegenerateInput(format!(
                "series `{name}` has a non-finite value at {}",
                start.add_months(i as i64)
            )));
        }
        Ok(Self {
            name,
            start,
            values,
            role,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> MonthStamp {
        self.start
    }

    /// Last month covered (inclusive).
    pub fn end(&self) -> MonthStamp {
        self.start.add_months(self.values.len() as i64 - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn role(&self) -> SeriesRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn months(&self) -> impl Iterator<Item = MonthStamp> + '_ {
        (0..self.values.len()).map(move |i| self.start.add_months(i as i64))
    }

    pub fn get(&self, month: MonthStamp) -> Option<f64> {
        let offset = self.start.months_until(month);
        usize::try_from(offset)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Sub-series covering `from..=to`; both months must lie inside the series.
    pub fn slice(&self, from: MonthStamp, to: MonthStamp) -> Result<Self> {
        let a = self.start.months_until(from);
        let b = self.start.months_until(to);
        if a < 0 || b < a || b >= self.values.len() as i64 {
            return Err(Error::Parameter(format!(
                "range {from}..{to} outside series `{}` ({}..{})",
                self.name,
                self.start,
                self.end()
            )));
        }
        Ok(Self {
            name: self.name.clone(),
            start: from,
            values: self.values[a as usize..=b as usize].to_vec(),
            role: self.role,
        })
    }
}

/// Sample autocorrelations, optionally with partial autocorrelations.
#[derive(Debug, Clone, PartialEq)]
pub struct AcfResult {
    pub correlations: Vec<f64>,
    pub partials: Option<Vec<f64>>,
}

impl AcfResult {
    pub fn max_lag(&self) -> usize {
        self.correlations.len() - 1
    }
}

/// `d`-th order difference. The start month advances by `d`.
pub fn difference(ts: &TimeSeries, d: usize) -> Result<TimeSeries> {
    if d == 0 {
        return Ok(ts.clone());
    }
    if ts.len() <= d {
        return Err(Error::DegenerateInput(format!(
            "cannot difference `{}` of length {} {} time(s)",
            ts.name,
            ts.len(),
            d
        )));
    }
    let mut values = ts.values.clone();
    for _ in 0..d {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(TimeSeries {
        name: ts.name.clone(),
        start: ts.start.add_months(d as i64),
        values,
        role: ts.role,
    })
}

/// Biased (1/n) sample autocorrelations r(0..=max_lag) of a slice.
pub(crate) fn autocorrelations(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = x.len();
    if n <= max_lag {
        return Err(Error::DegenerateInput(format!(
            "length {n} does not exceed max lag {max_lag}"
        )));
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let c0: f64 = centered.iter().map(|v| v * v).sum();
    let scale = mean.abs().max(1.0);
    if c0 <= (f64::EPSILON * scale).powi(2) * n as f64 {
        return Err(Error::DegenerateInput("zero-variance series".into()));
    }
    let mut r = Vec::with_capacity(max_lag + 1);
    r.push(1.0);
    for k in 1..=max_lag {
        let ck: f64 = centered[k..]
            .iter()
            .zip(&centered[..n - k])
            .map(|(a, b)| a * b)
            .sum();
        r.push((ck / c0).clamp(-1.0, 1.0));
    }
    Ok(r)
}

/// Durbin-Levinson recursion; returns PACF at lags 1..=L (index 0 holds 1).
fn durbin_levinson(r: &[f64]) -> Vec<f64> {
    let max_lag = r.len() - 1;
    let mut pacf = vec![1.0; max_lag + 1];
    let mut phi_prev: Vec<f64> = Vec::new();
    let mut v = 1.0;
    for k in 1..=max_lag {
        let num = r[k]
            - phi_prev
                .iter()
                .enumerate()
                .map(|(j, p)| p * r[k - 1 - j])
                .sum::<f64>();
        let phi_kk = if v > 0.0 { num / v } else { 0.0 };
        let mut phi = Vec::with_capacity(k);
        for j in 0..k - 1 {
            phi.push(phi_prev[j] - phi_kk * phi_prev[k - 2 - j]);
        }
        phi.push(phi_kk);
        v *= 1.0 - phi_kk * phi_kk;
        pacf[k] = phi_kk;
        phi_prev = phi;
    }
    pacf
}

/// Sample ACF using the biased 1/n estimator; PACF via Durbin-Levinson when
/// `with_partials` is set.
pub fn acf(ts: &TimeSeries, max_lag: usize, with_partials: bool) -> Result<AcfResult> {
    if max_lag < 1 {
        return Err(Error::Parameter("max_lag must be at least 1".into()));
    }
    let correlations = autocorrelations(&ts.values, max_lag)
        .map_err(|e| Error::DegenerateInput(format!("acf of `{}`: {e}", ts.name)))?;
    let partials = with_partials.then(|| durbin_levinson(&correlations));
    Ok(AcfResult {
        correlations,
        partials,
    })
}

/// Trim every series to the intersection of their month ranges.
pub fn align(series: &[TimeSeries]) -> Result<Vec<TimeSeries>> {
    let Some(first) = series.first() else {
        return Ok(Vec::new());
    };
    let mut lo = first.start;
    let mut hi = first.end();
    for ts in &series[1..] {
        lo = lo.max(ts.start);
        hi = hi.min(ts.end());
    }
    if lo > hi {
        // name the series whose ranges do not overlap
        let mut offenders = Vec::new();
        for (i, a) in series.iter().enumerate() {
            for b in &series[i + 1..] {
                if a.start > b.end() || b.start > a.end() {
                    for name in [&a.name, &b.name] {
                        if !offenders.contains(name) {
                            offenders.push(name.clone());
                        }
                    }
                }
            }
        }
        return Err(Error::Alignment { series: offenders });
    }
    series.iter().map(|ts| ts.slice(lo, hi)).collect()
}

/// `(x - min) / (max - min)`; a constant series maps to all zeros.
pub fn min_max_normalize(ts: &TimeSeries) -> TimeSeries {
    let min = ts.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ts.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = max - min;
    let values = if range > 0.0 {
        ts.values
            .iter()
            .map(|v| ((v - min) / range).clamp(0.0, 1.0))
            .collect()
    } else {
        vec![0.0; ts.len()]
    };
    TimeSeries {
        name: ts.name.clone(),
        start: ts.start,
        values,
        role: ts.role,
    }
}
