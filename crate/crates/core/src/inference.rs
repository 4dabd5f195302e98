//! Toda-Yamamoto Granger causality and impulse responses with residual
//! bootstrap bands.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stats::{chi_square_sf, quantile_sorted};
use crate::var::{fit_var, PanelDataset, VarModel};

#[derive(Debug, Clone, PartialEq)]
pub struct GrangerResult {
    pub cause: String,
    pub effect: String,
    pub wald_stat: f64,
    /// Number of restricted lags, equal to `p`.
    pub df: usize,
    pub p_value: f64,
    pub lag: usize,
    pub d_max: usize,
}

/// Wald test that lags `1..=p` of `cause` are jointly zero in the `effect`
/// equation of a VAR(p + d_max). The `d_max` extra lags are estimated but not
/// restricted, so the chi-square(p) reference holds whatever the integration
/// order up to `d_max`.
pub fn toda_yamamoto_granger(
    data: &PanelDataset,
    p: usize,
    d_max: usize,
    cause: &str,
    effect: &str,
) -> Result<GrangerResult> {
    if p == 0 {
        return Err(Error::Parameter("Granger lag must be at least 1".into()));
    }
    let model = fit_var(data, p + d_max)?;
    wald_granger(&model, p, cause, effect)
}

/// Wald restriction on an already fitted VAR whose order is at least `p`.
pub fn wald_granger(model: &VarModel, p: usize, cause: &str, effect: &str) -> Result<GrangerResult> {
    if p == 0 || p > model.p() {
        return Err(Error::Parameter(format!(
            "cannot restrict {p} lags of a VAR({})",
            model.p()
        )));
    }
    let eq = model.equation_index(effect)?;
    model.equation_index(cause)?;
    let idx: Vec<usize> = (1..=p)
        .map(|l| model.regressor_index(&format!("{cause}(-{l})")))
        .collect::<Result<_>>()?;
    let beta = nalgebra::DVector::from_iterator(
        p,
        idx.iter().map(|&i| model.coefficients()[(i, eq)]),
    );
    let cov = model.equation_cov(eq);
    let sub = DMatrix::from_fn(p, p, |a, b| cov[(idx[a], idx[b])]);
    let chol = sub.cholesky().ok_or_else(|| {
        Error::DegenerateInput(format!("covariance of `{cause}` lags in `{effect}` is singular"))
    })?;
    let solved = chol.solve(&beta);
    let wald_stat = beta.dot(&solved).max(0.0);
    Ok(GrangerResult {
        cause: cause.to_string(),
        effect: effect.to_string(),
        wald_stat,
        df: p,
        p_value: chi_square_sf(wald_stat, p as f64),
        lag: p,
        d_max: model.p() - p,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrfOptions {
    pub horizon: usize,
    pub orthogonalized: bool,
    pub boot_reps: usize,
    pub ci_level: f64,
    pub seed: u64,
}

impl Default for IrfOptions {
    fn default() -> Self {
        Self {
            horizon: 10,
            orthogonalized: true,
            boot_reps: 500,
            ci_level: 0.95,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrfResult {
    pub impulse: String,
    pub response: String,
    pub horizon: usize,
    pub point: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub orthogonalized: bool,
    pub boot_reps: usize,
    pub ci_level: f64,
    pub seed: u64,
    /// False when the fitted VAR has a companion root on or outside the unit circle.
    pub stable: bool,
}

/// Responses of every variable to every impulse: `point[h][(response, impulse)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IrfSet {
    pub names: Vec<String>,
    pub options: IrfOptions,
    pub point: Vec<DMatrix<f64>>,
    pub lower: Vec<DMatrix<f64>>,
    pub upper: Vec<DMatrix<f64>>,
    pub stable: bool,
}

impl IrfSet {
    pub fn get(&self, impulse: &str, response: &str) -> Result<IrfResult> {
        let find = |name: &str| {
            self.names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Lookup(format!("no endogenous series named `{name}`")))
        };
        let (j, i) = (find(impulse)?, find(response)?);
        let pick = |m: &[DMatrix<f64>]| m.iter().map(|x| x[(i, j)]).collect::<Vec<_>>();
        Ok(IrfResult {
            impulse: impulse.to_string(),
            response: response.to_string(),
            horizon: self.options.horizon,
            point: pick(&self.point),
            lower: pick(&self.lower),
            upper: pick(&self.upper),
            orthogonalized: self.options.orthogonalized,
            boot_reps: self.options.boot_reps,
            ci_level: self.options.ci_level,
            seed: self.options.seed,
            stable: self.stable,
        })
    }
}

/// Moving-average coefficients Φ_0 = I, Φ_h = Σ_{j=1..min(h,p)} Φ_{h-j} A_j.
pub fn ma_coefficients(model: &VarModel, horizon: usize) -> Vec<DMatrix<f64>> {
    let k = model.k();
    let lags: Vec<DMatrix<f64>> = (1..=model.p()).map(|l| model.lag_matrix(l)).collect();
    let mut phi: Vec<DMatrix<f64>> = Vec::with_capacity(horizon + 1);
    phi.push(DMatrix::identity(k, k));
    for h in 1..=horizon {
        let mut acc = DMatrix::zeros(k, k);
        for (j, a) in lags.iter().enumerate().take(h) {
            acc += &phi[h - j - 1] * a;
        }
        phi.push(acc);
    }
    phi
}

/// Lower Cholesky factor of the residual covariance.
pub fn impact_matrix(model: &VarModel) -> Result<DMatrix<f64>> {
    model
        .sigma()
        .clone()
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::Cholesky("residual covariance is not positive definite".into()))
}

fn point_responses(model: &VarModel, horizon: usize, orthogonalized: bool) -> Result<Vec<DMatrix<f64>>> {
    let phi = ma_coefficients(model, horizon);
    if orthogonalized {
        let p = impact_matrix(model)?;
        Ok(phi.iter().map(|m| m * &p).collect())
    } else {
        Ok(phi)
    }
}

/// Rebuild the sample from the fitted recursion with resampled residual rows.
fn bootstrap_sample(model: &VarModel, rng: &mut ChaCha8Rng) -> Result<PanelDataset> {
    let data = model.data();
    let (t, k, p) = (data.len(), data.k(), model.p());
    let resid = model.residuals();
    let n = resid.nrows();
    let means: Vec<f64> = (0..k).map(|j| resid.column(j).mean()).collect();
    let coef = model.coefficients();
    let e = data.n_exog();

    let mut y = data.endog().clone();
    for row in p..t {
        let draw = rng.random_range(0..n);
        for i in 0..k {
            let mut v = resid[(draw, i)] - means[i];
            let mut c = 0;
            for l in 1..=p {
                for j in 0..k {
                    v += coef[(c, i)] * y[(row - l, j)];
                    c += 1;
                }
            }
            for x in 0..e {
                v += coef[(c, i)] * data.exog()[(row, x)];
                c += 1;
            }
            if data.include_constant() {
                v += coef[(c, i)];
                c += 1;
            }
            if data.include_trend() {
                v += coef[(c, i)] * (row + 1) as f64;
            }
            y[(row, i)] = v;
        }
    }
    data.with_endog(y)
}

/// Impulse responses for all pairs with percentile bootstrap bands. Each
/// replicate draws from its own stream of `seed`, so the bands do not depend
/// on how replicates are scheduled across threads.
pub fn irf_set(model: &VarModel, options: IrfOptions) -> Result<IrfSet> {
    if options.horizon == 0 {
        return Err(Error::Parameter("IRF horizon must be at least 1".into()));
    }
    if !(options.ci_level > 0.0 && options.ci_level < 1.0) {
        return Err(Error::Parameter(format!("ci_level {} outside (0, 1)", options.ci_level)));
    }
    let h = options.horizon;
    let point = point_responses(model, h, options.orthogonalized)?;
    let k = model.k();

    let draws: Vec<Vec<DMatrix<f64>>> = (0..options.boot_reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(rep as u64);
            let sample = bootstrap_sample(model, &mut rng)?;
            let refit = fit_var(&sample, model.p())?;
            point_responses(&refit, h, options.orthogonalized)
        })
        .collect::<Result<_>>()?;

    let (lower, upper) = if draws.is_empty() {
        (point.clone(), point.clone())
    } else {
        let alpha = (1.0 - options.ci_level) / 2.0;
        let mut lower = Vec::with_capacity(h + 1);
        let mut upper = Vec::with_capacity(h + 1);
        for step in 0..=h {
            let mut lo = DMatrix::zeros(k, k);
            let mut hi = DMatrix::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    let mut v: Vec<f64> = draws.iter().map(|d| d[step][(i, j)]).collect();
                    v.sort_by(f64::total_cmp);
                    lo[(i, j)] = quantile_sorted(&v, alpha);
                    hi[(i, j)] = quantile_sorted(&v, 1.0 - alpha);
                }
            }
            lower.push(lo);
            upper.push(hi);
        }
        (lower, upper)
    };

    Ok(IrfSet {
        names: model.endog_names().to_vec(),
        options,
        point,
        lower,
        upper,
        stable: model.is_stable(),
    })
}

/// Response of `response` to a shock in `impulse` over `0..=horizon` months.
pub fn irf(model: &VarModel, impulse: &str, response: &str, options: IrfOptions) -> Result<IrfResult> {
    model.equation_index(impulse)?;
    model.equation_index(response)?;
    irf_set(model, options)?.get(impulse, response)
}
