use nalgebra::{DMatrix, DVector};

use super::dataset::PanelDataset;
use crate::error::{Error, Result};
use crate::stats::least_squares;

/// A VAR(p) fitted equation by equation with OLS.
#[derive(Debug, Clone)]
pub struct VarModel {
    p: usize,
    data: PanelDataset,
    regressors: Vec<String>,
    /// ncoef x K, column i is equation i
    coef: DMatrix<f64>,
    std_errors: DMatrix<f64>,
    residuals: DMatrix<f64>,
    fitted: DMatrix<f64>,
    xtx_inv: DMatrix<f64>,
    /// Residual covariance with the `nobs - ncoef` denominator.
    sigma: DMatrix<f64>,
    r2: Vec<f64>,
    r2_adj: Vec<f64>,
}

/// Equation-by-equation OLS of each endogenous series on `p` lags of all
/// endogenous series, the dummies, and the deterministic terms.
pub fn fit_var(data: &PanelDataset, p: usize) -> Result<VarModel> {
    data.check_estimable(p)?;
    let (x, y) = data.design(p, p);
    let regressors = data.regressor_names(p);
    let ls = least_squares(&x, &y, &regressors)?;
    let nobs = ls.nobs;
    let df = ls.df_resid() as f64;
    let sigma = ls.residuals.transpose() * &ls.residuals / df;
    let std_errors = DMatrix::from_fn(ls.ncoef, data.k(), |i, j| {
        (sigma[(j, j)] * ls.xtx_inv[(i, i)]).sqrt()
    });
    let fitted = &y - &ls.residuals;

    let mut r2 = Vec::with_capacity(data.k());
    let mut r2_adj = Vec::with_capacity(data.k());
    for j in 0..data.k() {
        let yj = y.column(j);
        let ssr = ls.residuals.column(j).norm_squared();
        let (sst, dof_total) = if data.include_constant() {
            let mean = yj.mean();
            (yj.iter().map(|v| (v - mean).powi(2)).sum::<f64>(), nobs as f64 - 1.0)
        } else {
            (yj.norm_squared(), nobs as f64)
        };
        let value = if sst > 0.0 { (1.0 - ssr / sst).clamp(0.0, 1.0) } else { 0.0 };
        r2.push(value);
        r2_adj.push(1.0 - (1.0 - value) * dof_total / df);
    }

    Ok(VarModel {
        p,
        data: data.clone(),
        regressors,
        coef: ls.coef,
        std_errors,
        residuals: ls.residuals,
        fitted,
        xtx_inv: ls.xtx_inv,
        sigma,
        r2,
        r2_adj,
    })
}

impl VarModel {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.data.k()
    }

    pub fn data(&self) -> &PanelDataset {
        &self.data
    }

    pub fn endog_names(&self) -> &[String] {
        self.data.endog_names()
    }

    pub fn regressor_names(&self) -> &[String] {
        &self.regressors
    }

    pub fn regressor_index(&self, name: &str) -> Result<usize> {
        self.regressors
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Lookup(format!("no regressor named `{name}`")))
    }

    pub fn equation_index(&self, name: &str) -> Result<usize> {
        self.data.endog_index(name)
    }

    /// Stacked coefficients, one column per equation.
    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coef
    }

    pub fn std_errors(&self) -> &DMatrix<f64> {
        &self.std_errors
    }

    pub fn residuals(&self) -> &DMatrix<f64> {
        &self.residuals
    }

    pub fn fitted(&self) -> &DMatrix<f64> {
        &self.fitted
    }

    pub fn xtx_inv(&self) -> &DMatrix<f64> {
        &self.xtx_inv
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn nobs(&self) -> usize {
        self.residuals.nrows()
    }

    pub fn ncoef(&self) -> usize {
        self.regressors.len()
    }

    pub fn df_resid(&self) -> usize {
        self.nobs() - self.ncoef()
    }

    pub fn r2(&self) -> &[f64] {
        &self.r2
    }

    pub fn r2_adj(&self) -> &[f64] {
        &self.r2_adj
    }

    /// Lag-`l` coefficient matrix: entry (i, j) is the effect of series j at
    /// lag `l` in equation i.
    pub fn lag_matrix(&self, l: usize) -> DMatrix<f64> {
        assert!((1..=self.p).contains(&l), "lag {l} outside 1..={}", self.p);
        let k = self.k();
        let offset = (l - 1) * k;
        DMatrix::from_fn(k, k, |i, j| self.coef[(offset + j, i)])
    }

    /// K x E coefficients on the dummies.
    pub fn exog_coefficients(&self) -> DMatrix<f64> {
        let k = self.k();
        let offset = k * self.p;
        DMatrix::from_fn(k, self.data.n_exog(), |i, j| self.coef[(offset + j, i)])
    }

    fn deterministic_row(&self, name: &str) -> Option<DVector<f64>> {
        let idx = self.regressors.iter().position(|n| n == name)?;
        Some(DVector::from_fn(self.k(), |i, _| self.coef[(idx, i)]))
    }

    pub fn intercepts(&self) -> Option<DVector<f64>> {
        self.deterministic_row("const")
    }

    pub fn trend_coefficients(&self) -> Option<DVector<f64>> {
        self.deterministic_row("trend")
    }

    /// Covariance of the coefficients of one equation: `σ²_eq (X'X)^-1`.
    pub fn equation_cov(&self, eq: usize) -> DMatrix<f64> {
        &self.xtx_inv * self.sigma[(eq, eq)]
    }

    /// Covariance of all stacked coefficients, `Σ ⊗ (X'X)^-1`, equation-major.
    pub fn coef_cov(&self) -> DMatrix<f64> {
        self.sigma.kronecker(&self.xtx_inv)
    }

    /// Companion matrix of the lag polynomial (Kp x Kp).
    pub fn companion(&self) -> DMatrix<f64> {
        let k = self.k();
        let kp = k * self.p;
        let mut c = DMatrix::zeros(kp, kp);
        for l in 1..=self.p {
            c.view_mut((0, (l - 1) * k), (k, k))
                .copy_from(&self.lag_matrix(l));
        }
        for i in k..kp {
            c[(i, i - k)] = 1.0;
        }
        c
    }

    pub fn spectral_radius(&self) -> f64 {
        self.companion()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.spectral_radius() < 1.0
    }
}
