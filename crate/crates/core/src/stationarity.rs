//! Augmented Dickey-Fuller unit-root test and automatic differencing.
//!
//! The test regression is
//! `Δy_t = α + βt + γ y_{t-1} + Σ_{i=1..k} δ_i Δy_{t-i} + ε_t`
//! (the trend term is dropped for [`AdfRegression::Constant`]). The statistic is
//! the t-ratio of `γ`. P-values are read off the Dickey-Fuller tables by
//! linear interpolation, first across sample sizes and then across
//! probabilities, so they are confined to `[0.01, 0.99]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::series::{difference, TimeSeries};
use crate::stats::{interpolate, ols_single};

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdfRegression {
    Constant,
    #[default]
    ConstantAndTrend,
}

impl fmt::Display for AdfRegression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdfRegression::Constant => "constant",
            AdfRegression::ConstantAndTrend => "constant_and_trend",
        })
    }
}

impl FromStr for AdfRegression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "c" | "constant" => Ok(AdfRegression::Constant),
            "ct" | "trend" | "constant_and_trend" => Ok(AdfRegression::ConstantAndTrend),
            other => Err(Error::Config(format!("unknown ADF regression `{other}`"))),
        }
    }
}

/// Augmentation lag order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdfLag {
    /// `trunc((n - 1)^(1/3))`
    #[default]
    Auto,
    Fixed(usize),
}

impl AdfLag {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            AdfLag::Auto => ((n.saturating_sub(1)) as f64).cbrt().trunc() as usize,
            AdfLag::Fixed(k) => k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfResult {
    pub statistic: f64,
    pub p_value: f64,
    pub lag_order: usize,
    pub regression: AdfRegression,
    pub nobs: usize,
}

const TABLE_SIZES: [f64; 6] = [25.0, 50.0, 100.0, 250.0, 500.0, 100_000.0];
const TABLE_PROBS: [f64; 8] = [0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99];

// Dickey-Fuller percentiles, one row per probability, one column per sample size.
#[allow(clippy::approx_constant)]
const TAU_MU: [[f64; 6]; 8] = [
    [-3.75, -3.58, -3.51, -3.46, -3.44, -3.43],
    [-3.33, -3.22, -3.17, -3.14, -3.13, -3.12],
    [-3.00, -2.93, -2.89, -2.88, -2.87, -2.86],
    [-2.63, -2.60, -2.58, -2.57, -2.57, -2.57],
    [-0.37, -0.40, -0.42, -0.42, -0.43, -0.44],
    [0.00, -0.03, -0.05, -0.06, -0.07, -0.07],
    [0.34, 0.29, 0.26, 0.24, 0.24, 0.23],
    [0.72, 0.66, 0.63, 0.62, 0.61, 0.60],
];

const TAU_TAU: [[f64; 6]; 8] = [
    [-4.38, -4.15, -4.04, -3.99, -3.98, -3.96],
    [-3.95, -3.80, -3.73, -3.69, -3.68, -3.66],
    [-3.60, -3.50, -3.45, -3.43, -3.42, -3.41],
    [-3.24, -3.18, -3.15, -3.13, -3.13, -3.12],
    [-1.14, -1.19, -1.22, -1.23, -1.24, -1.25],
    [-0.80, -0.87, -0.90, -0.92, -0.93, -0.94],
    [-0.50, -0.58, -0.62, -0.64, -0.65, -0.66],
    [-0.15, -0.24, -0.28, -0.31, -0.32, -0.33],
];

/// Table p-value for a statistic computed on `n` differenced observations.
pub fn adf_p_value(statistic: f64, n: usize, regression: AdfRegression) -> f64 {
    let table = match regression {
        AdfRegression::Constant => &TAU_MU,
        AdfRegression::ConstantAndTrend => &TAU_TAU,
    };
    let at_n: Vec<f64> = table
        .iter()
        .map(|row| interpolate(&TABLE_SIZES, row, n as f64))
        .collect();
    interpolate(&at_n, &TABLE_PROBS, statistic)
}

pub fn adf_test(ts: &TimeSeries, regression: AdfRegression, lag: AdfLag) -> Result<AdfResult> {
    let x = ts.values();
    let k = lag.resolve(x.len());
    if x.len() < k + 10 {
        return Err(Error::DegenerateInput(format!(
            "ADF on `{}` needs at least {} observations for lag {k}, got {}",
            ts.name(),
            k + 10,
            x.len()
        )));
    }
    let dy: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let n = dy.len();
    let with_trend = regression == AdfRegression::ConstantAndTrend;

    let mut names = vec!["const".to_string(), "level(-1)".to_string()];
    if with_trend {
        names.push("trend".into());
    }
    names.extend((1..=k).map(|i| format!("diff(-{i})")));

    // rows t = k..n-1 over the differenced series
    let rows = n - k;
    let ncol = names.len();
    let mut design = DMatrix::zeros(rows, ncol);
    let mut response = DVector::zeros(rows);
    for (r, t) in (k..n).enumerate() {
        response[r] = dy[t];
        design[(r, 0)] = 1.0;
        design[(r, 1)] = x[t];
        let mut c = 2;
        if with_trend {
            design[(r, c)] = (t + 1) as f64;
            c += 1;
        }
        for i in 1..=k {
            design[(r, c)] = dy[t - i];
            c += 1;
        }
    }
    let (beta, se, _) = ols_single(&design, &response, &names)?;
    let statistic = beta[1] / se[1];
    if !statistic.is_finite() {
        return Err(Error::DegenerateInput(format!(
            "ADF statistic for `{}` is not finite (perfect fit)",
            ts.name()
        )));
    }
    Ok(AdfResult {
        statistic,
        p_value: adf_p_value(statistic, n, regression),
        lag_order: k,
        regression,
        nobs: rows,
    })
}

/// Result of differencing until the ADF test rejects the unit root.
#[derive(Debug, Clone)]
pub struct StationarityOutcome {
    pub series: TimeSeries,
    pub d: usize,
    /// ADF results at d = 0, 1, ..., in order of evaluation.
    pub tests: Vec<AdfResult>,
}

/// Smallest `d <= max_d` whose ADF p-value is below `alpha`.
pub fn ensure_stationary(
    ts: &TimeSeries,
    alpha: f64,
    max_d: usize,
    regression: AdfRegression,
    lag: AdfLag,
) -> Result<StationarityOutcome> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("alpha {alpha} outside (0, 1)")));
    }
    let mut tests = Vec::new();
    let mut current = ts.clone();
    for d in 0..=max_d {
        if d > 0 {
            current = difference(&current, 1)?;
        }
        let result = adf_test(&current, regression, lag)?;
        tests.push(result);
        if result.p_value < alpha {
            return Ok(StationarityOutcome {
                series: current,
                d,
                tests,
            });
        }
    }
    Err(Error::NonStationary {
        name: ts.name().to_string(),
        max_d,
        p_value: tests.last().map_or(1.0, |r| r.p_value),
    })
}
