use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dataset::PanelDataset;
use crate::error::{Error, Result};
use crate::series::MonthStamp;

/// Discarded leading draws.
pub const BURN_IN: usize = 200;

/// A step dummy that is 0 before observation `switch_at` and 1 from it on.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDummy {
    pub name: String,
    pub switch_at: usize,
}

/// Data-generating process for [`simulate_var`].
#[derive(Debug, Clone)]
pub struct VarDesign {
    pub names: Vec<String>,
    /// A_1..A_p, each K x K.
    pub lags: Vec<DMatrix<f64>>,
    pub dummies: Vec<StepDummy>,
    /// K x E loadings on `dummies`.
    pub exog_coef: DMatrix<f64>,
    pub intercept: Option<DVector<f64>>,
    pub trend: Option<DVector<f64>>,
    /// Innovation covariance, symmetric positive definite.
    pub sigma: DMatrix<f64>,
}

impl VarDesign {
    /// Bivariate-or-larger design with no deterministic terms or dummies.
    pub fn pure(names: &[&str], lags: Vec<DMatrix<f64>>, sigma: DMatrix<f64>) -> Self {
        let k = names.len();
        Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            lags,
            dummies: Vec::new(),
            exog_coef: DMatrix::zeros(k, 0),
            intercept: None,
            trend: None,
            sigma,
        }
    }

    pub fn k(&self) -> usize {
        self.names.len()
    }
}

/// Simulate `t` months from `design`, deterministic in `seed`. The first
/// [`BURN_IN`] draws are discarded; during burn-in dummies are 0 and the trend
/// index is non-positive so the kept sample starts at trend index 1.
pub fn simulate_var(
    design: &VarDesign,
    start: MonthStamp,
    t: usize,
    seed: u64,
) -> Result<PanelDataset> {
    let k = design.k();
    if k == 0 || t == 0 {
        return Err(Error::Parameter("need at least one series and one month".into()));
    }
    for (l, a) in design.lags.iter().enumerate() {
        if a.shape() != (k, k) {
            return Err(Error::Parameter(format!("A_{} is not {k}x{k}", l + 1)));
        }
    }
    let e = design.dummies.len();
    if design.exog_coef.shape() != (k, e) {
        return Err(Error::Parameter(format!("exogenous coefficients must be {k}x{e}")));
    }
    for v in [&design.intercept, &design.trend].into_iter().flatten() {
        if v.len() != k {
            return Err(Error::Parameter(format!("deterministic coefficients must have length {k}")));
        }
    }
    if design.sigma.shape() != (k, k)
        || (&design.sigma - design.sigma.transpose()).amax() > 1e-12 * design.sigma.amax()
    {
        return Err(Error::Parameter("sigma must be a symmetric KxK matrix".into()));
    }
    let chol = design
        .sigma
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Parameter("sigma is not positive definite".into()))?;
    let l = chol.l();

    let total = BURN_IN + t;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = DMatrix::<f64>::zeros(total, k);
    for s in 0..total {
        let z = DVector::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
        let mut row = &l * z;
        for (lag, a) in design.lags.iter().enumerate() {
            if s > lag {
                row += a * y.row(s - lag - 1).transpose();
            }
        }
        let kept = s as i64 - BURN_IN as i64;
        if let Some(c) = &design.intercept {
            row += c;
        }
        if let Some(tau) = &design.trend {
            row += tau * (kept + 1) as f64;
        }
        for (j, d) in design.dummies.iter().enumerate() {
            if kept >= d.switch_at as i64 {
                row += design.exog_coef.column(j);
            }
        }
        y.set_row(s, &row.transpose());
    }
    let endog = y.rows(BURN_IN, t).into_owned();
    let exog = DMatrix::from_fn(t, e, |i, j| {
        if i >= design.dummies[j].switch_at {
            1.0
        } else {
            0.0
        }
    });
    PanelDataset::from_matrices(
        start,
        design.names.clone(),
        endog,
        design.dummies.iter().map(|d| d.name.clone()).collect(),
        exog,
        design.intercept.is_some(),
        design.trend.is_some(),
    )
}
