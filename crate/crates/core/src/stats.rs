//! Shared numerical helpers: least squares, distribution tails, table
//! interpolation and empirical quantiles.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Relative threshold on the R diagonal below which a column is treated as
/// linearly dependent on the columns before it.
const RANK_TOL: f64 = 1e-10;

/// Least-squares fit of one or more responses on a shared design.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    /// ncoef x nresp
    pub coef: DMatrix<f64>,
    /// nobs x nresp
    pub residuals: DMatrix<f64>,
    /// (X'X)^-1
    pub xtx_inv: DMatrix<f64>,
    pub nobs: usize,
    pub ncoef: usize,
}

impl LeastSquares {
    pub fn df_resid(&self) -> usize {
        self.nobs - self.ncoef
    }
}

/// QR-based OLS of every column of `y` on `x`. `names` labels the columns of
/// `x` and is used to report collinearity.
pub fn least_squares(x: &DMatrix<f64>, y: &DMatrix<f64>, names: &[String]) -> Result<LeastSquares> {
    let (nobs, ncoef) = x.shape();
    debug_assert_eq!(names.len(), ncoef);
    if y.nrows() != nobs {
        return Err(Error::Parameter(format!(
            "design has {nobs} rows but response has {}",
            y.nrows()
        )));
    }
    if nobs <= ncoef {
        return Err(Error::DegenerateInput(format!(
            "{nobs} observations for {ncoef} coefficients"
        )));
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let collinear: Vec<String> = (0..ncoef)
        .filter(|&j| {
            let norm = x.column(j).norm();
            norm == 0.0 || r[(j, j)].abs() <= RANK_TOL * norm
        })
        .map(|j| names[j].clone())
        .collect();
    if !collinear.is_empty() {
        return Err(Error::SingularDesign { columns: collinear });
    }
    let qty = qr.q().transpose() * y;
    let coef = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::SingularDesign {
            columns: names.to_vec(),
        })?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(ncoef, ncoef))
        .ok_or_else(|| Error::SingularDesign {
            columns: names.to_vec(),
        })?;
    let xtx_inv = &r_inv * r_inv.transpose();
    let residuals = y - x * &coef;
    Ok(LeastSquares {
        coef,
        residuals,
        xtx_inv,
        nobs,
        ncoef,
    })
}

/// Single-response convenience wrapper returning coefficients, their standard
/// errors and the residual vector.
pub(crate) fn ols_single(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    names: &[String],
) -> Result<(DVector<f64>, DVector<f64>, DVector<f64>)> {
    let y = DMatrix::from_column_slice(y.len(), 1, y.as_slice());
    let fit = least_squares(x, &y, names)?;
    let ssr = fit.residuals.column(0).norm_squared();
    let sigma2 = ssr / fit.df_resid() as f64;
    let se = fit.xtx_inv.diagonal().map(|v| (sigma2 * v).sqrt());
    Ok((fit.coef.column(0).into_owned(), se, fit.residuals.column(0).into_owned()))
}

/// Upper-tail probability of a chi-square(df) variate.
pub fn chi_square_sf(stat: f64, df: f64) -> f64 {
    let dist = ChiSquared::new(df).expect("positive degrees of freedom");
    if stat <= 0.0 {
        return 1.0;
    }
    (1.0 - dist.cdf(stat)).clamp(0.0, 1.0)
}

/// Two-sided p-value of a t statistic.
pub fn t_two_sided(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
}

/// Piecewise-linear interpolation through `(xs, ys)` with `xs` increasing;
/// values outside the table take the nearest endpoint.
pub fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let last = xs.len() - 1;
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + w * (ys[i + 1] - ys[i])
}

/// Empirical quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
