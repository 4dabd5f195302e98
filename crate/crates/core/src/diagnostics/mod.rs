//! Post-estimation diagnostics: the Johansen trace test for co-integration
//! and the univariate Ljung–Box portmanteau test.

mod trace_table;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::series::autocorrelations;
use crate::stats::{chi_square_sf, interpolate, least_squares};
use crate::var::{PanelDataset, VarModel};
use trace_table::TRACE_QUANTILES;

/// Cumulative probabilities at which the trace quantile table is tabulated.
pub const TRACE_PROBABILITIES: [f64; 17] = [
    0.01, 0.025, 0.05, 0.10, 0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90, 0.95, 0.975, 0.99,
    0.995, 0.999,
];

/// Largest number of common trends covered by the quantile table.
pub const MAX_TRACE_DIM: usize = TRACE_QUANTILES.len();

/// Significance levels of [`JohansenResult::critical_values`].
pub const CRITICAL_LEVELS: [f64; 3] = [0.10, 0.05, 0.01];

#[derive(Debug, Clone, PartialEq)]
pub struct JohansenResult {
    pub names: Vec<String>,
    /// VAR lag order in levels; the error-correction form has `lag - 1`
    /// lagged differences.
    pub lag: usize,
    /// Descending, one per series.
    pub eigenvalues: Vec<f64>,
    /// r = 0..K-1
    pub rank_hypotheses: Vec<usize>,
    pub trace_stats: Vec<f64>,
    /// Quantiles at 10%, 5% and 1% for each rank hypothesis.
    pub critical_values: Vec<[f64; 3]>,
    /// Interpolated and clamped to [0.01, 0.99].
    pub p_values: Vec<f64>,
    pub nobs: usize,
}

impl JohansenResult {
    /// Smallest r not rejected at `alpha`, or K if every hypothesis is
    /// rejected.
    pub fn rank(&self, alpha: f64) -> usize {
        self.p_values
            .iter()
            .position(|&p| p >= alpha)
            .unwrap_or(self.p_values.len())
    }
}

/// Quantile of the asymptotic trace distribution with `m` common trends.
pub fn trace_quantile(m: usize, prob: f64) -> Result<f64> {
    let row = table_row(m)?;
    Ok(interpolate(&TRACE_PROBABILITIES, row, prob))
}

/// Upper-tail probability of `stat` under `m` common trends, clamped to
/// [0.01, 0.99].
pub fn trace_p_value(m: usize, stat: f64) -> Result<f64> {
    let row = table_row(m)?;
    let cdf = interpolate(row, &TRACE_PROBABILITIES, stat);
    Ok((1.0 - cdf).clamp(0.01, 0.99))
}

fn table_row(m: usize) -> Result<&'static [f64; 17]> {
    if m == 0 || m > MAX_TRACE_DIM {
        return Err(Error::Parameter(format!(
            "trace table covers 1..={MAX_TRACE_DIM} common trends, not {m}"
        )));
    }
    Ok(&TRACE_QUANTILES[m - 1])
}

/// Johansen trace test with the constant restricted to the co-integrating
/// relation. Dummies enter unrestricted; the trend flag is ignored.
pub fn johansen_trace(data: &PanelDataset, lag: usize) -> Result<JohansenResult> {
    let k = data.k();
    if k < 2 {
        return Err(Error::Parameter("Johansen test needs at least two series".into()));
    }
    if k > MAX_TRACE_DIM {
        return Err(Error::Parameter(format!(
            "Johansen test supports at most {MAX_TRACE_DIM} series"
        )));
    }
    data.check_estimable(lag)?;
    let y = data.endog();
    let e = data.n_exog();
    let t = data.len() - lag;
    let n2 = k * (lag - 1) + e;
    if t <= n2 + k + 1 {
        return Err(Error::DegenerateInput(format!(
            "{t} observations cannot support the error-correction regression"
        )));
    }

    let mut z0 = DMatrix::zeros(t, k);
    let mut z1 = DMatrix::zeros(t, k + 1);
    let mut z2 = DMatrix::zeros(t, n2);
    for r in 0..t {
        let s = r + lag;
        for j in 0..k {
            z0[(r, j)] = y[(s, j)] - y[(s - 1, j)];
            z1[(r, j)] = y[(s - 1, j)];
        }
        z1[(r, k)] = 1.0;
        let mut c = 0;
        for i in 1..lag {
            for j in 0..k {
                z2[(r, c)] = y[(s - i, j)] - y[(s - i - 1, j)];
                c += 1;
            }
        }
        for j in 0..e {
            z2[(r, c)] = data.exog()[(s, j)];
            c += 1;
        }
    }

    let (r0, r1) = if n2 == 0 {
        (z0, z1)
    } else {
        let mut names = Vec::with_capacity(n2);
        for i in 1..lag {
            for n in data.endog_names() {
                names.push(format!("d{n}(-{i})"));
            }
        }
        names.extend(data.exog_names().iter().cloned());
        let r0 = least_squares(&z2, &z0, &names)?.residuals;
        let r1 = least_squares(&z2, &z1, &names)?.residuals;
        (r0, r1)
    };

    let tf = t as f64;
    let s00 = r0.transpose() * &r0 / tf;
    let s01 = r0.transpose() * &r1 / tf;
    let s11 = r1.transpose() * &r1 / tf;
    let degenerate = || Error::DegenerateInput("singular moment matrix in Johansen test".into());
    let l_inv = s11
        .cholesky()
        .ok_or_else(degenerate)?
        .l()
        .try_inverse()
        .ok_or_else(degenerate)?;
    let s00_inv = s00.cholesky().ok_or_else(degenerate)?.inverse();
    let c = &l_inv * s01.transpose() * s00_inv * &s01 * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut eig: Vec<f64> = SymmetricEigen::new(c)
        .eigenvalues
        .iter()
        .map(|v| v.clamp(0.0, 1.0 - f64::EPSILON))
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig.truncate(k);

    let mut trace_stats = Vec::with_capacity(k);
    let mut critical_values = Vec::with_capacity(k);
    let mut p_values = Vec::with_capacity(k);
    for r in 0..k {
        let stat = -tf * eig[r..].iter().map(|l| (1.0 - l).ln()).sum::<f64>();
        let m = k - r;
        trace_stats.push(stat);
        critical_values.push(CRITICAL_LEVELS.map(|a| trace_quantile(m, 1.0 - a).expect("m in table")));
        p_values.push(trace_p_value(m, stat)?);
    }
    Ok(JohansenResult {
        names: data.endog_names().to_vec(),
        lag,
        eigenvalues: eig,
        rank_hypotheses: (0..k).collect(),
        trace_stats,
        critical_values,
        p_values,
        nobs: t,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LjungBoxResult {
    pub series: String,
    pub statistic: f64,
    pub lags: usize,
    pub fit_df: usize,
    pub p_value: f64,
}

/// `Q = n(n+2) Σ_{k=1..lags} r_k² / (n-k)` against chi-square(lags - fit_df).
pub fn ljung_box(residual: &[f64], series: &str, lags: usize, fit_df: usize) -> Result<LjungBoxResult> {
    if lags == 0 || lags <= fit_df {
        return Err(Error::Parameter(format!(
            "lags ({lags}) must exceed fitted degrees of freedom ({fit_df})"
        )));
    }
    let n = residual.len();
    if lags >= n {
        return Err(Error::DegenerateInput(format!(
            "{lags} lags need more than {n} residuals"
        )));
    }
    let r = autocorrelations(residual, lags)?;
    let nf = n as f64;
    let statistic = nf
        * (nf + 2.0)
        * (1..=lags).map(|k| r[k] * r[k] / (nf - k as f64)).sum::<f64>();
    Ok(LjungBoxResult {
        series: series.to_string(),
        statistic,
        lags,
        fit_df,
        p_value: chi_square_sf(statistic, (lags - fit_df) as f64),
    })
}

/// Ljung–Box on each equation's residuals of a fitted VAR.
pub fn ljung_box_residuals(model: &VarModel, lags: usize, fit_df: usize) -> Result<Vec<LjungBoxResult>> {
    model
        .endog_names()
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let col: Vec<f64> = model.residuals().column(j).iter().copied().collect();
            ljung_box(&col, name, lags, fit_df)
        })
        .collect()
}
