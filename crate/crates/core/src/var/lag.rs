use std::fmt;
use std::str::FromStr;

use super::dataset::PanelDataset;
use crate::error::{Error, Result};
use crate::stats::least_squares;

/// Information criterion used for lag selection. SC and BIC are the same
/// criterion under two names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InfoCriterion {
    #[default]
    Schwarz,
}

impl fmt::Display for InfoCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SC")
    }
}

impl FromStr for InfoCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sc" | "bic" | "schwarz" => Ok(InfoCriterion::Schwarz),
            other => Err(Error::Config(format!("unknown information criterion `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LagSelection {
    pub criterion: InfoCriterion,
    pub selected: usize,
    /// Criterion value for p = 1..=max_lag (index p - 1).
    pub values: Vec<f64>,
    /// Common effective sample size used for every candidate.
    pub sample: usize,
}

/// Choose `p` in `1..=max_lag` minimizing
/// `ln det Σ̃(p) + ln(T*)/T* · K · ncoef(p)` on the common sample of
/// `T* = T - max_lag` rows; ties go to the smaller lag.
pub fn select_lag(
    data: &PanelDataset,
    max_lag: usize,
    criterion: InfoCriterion,
) -> Result<LagSelection> {
    if max_lag == 0 {
        return Err(Error::Parameter("max_lag must be at least 1".into()));
    }
    data.check_estimable(max_lag)?;
    let sample = data.len() - max_lag;
    let t_star = sample as f64;
    let k = data.k();
    let mut values = Vec::with_capacity(max_lag);
    for p in 1..=max_lag {
        let (x, y) = data.design(p, max_lag);
        let ls = least_squares(&x, &y, &data.regressor_names(p))?;
        let sigma = ls.residuals.transpose() * &ls.residuals / t_star;
        let chol = sigma.cholesky().ok_or_else(|| {
            Error::DegenerateInput(format!("residual covariance at lag {p} is singular"))
        })?;
        let log_det: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let penalty = match criterion {
            InfoCriterion::Schwarz => t_star.ln() / t_star * (k * ls.ncoef) as f64,
        };
        values.push(log_det + penalty);
    }
    let mut selected = 1;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v < values[selected - 1] {
            selected = i + 1;
        }
    }
    Ok(LagSelection {
        criterion,
        selected,
        values,
        sample,
    })
}
