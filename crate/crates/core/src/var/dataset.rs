use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::series::{MonthStamp, SeriesRole, TimeSeries};

/// Aligned endogenous series, exogenous step dummies and deterministic-term
/// flags for one VAR analysis. Rows of the matrices are months.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    start: MonthStamp,
    endog_names: Vec<String>,
    endog: DMatrix<f64>,
    exog_names: Vec<String>,
    exog: DMatrix<f64>,
    include_constant: bool,
    include_trend: bool,
}

impl PanelDataset {
    /// Build from series that already share start month and length
    /// (see [`crate::series::align`]).
    pub fn from_series(
        endog: &[TimeSeries],
        exog: &[TimeSeries],
        include_constant: bool,
        include_trend: bool,
    ) -> Result<Self> {
        let first = endog
            .first()
            .ok_or_else(|| Error::Parameter("at least one endogenous series required".into()))?;
        let (start, t) = (first.start(), first.len());
        for s in endog.iter().chain(exog) {
            if s.start() != start || s.len() != t {
                return Err(Error::Parameter(format!(
                    "series `{}` covers {}..{} but `{}` covers {}..{}; align first",
                    s.name(),
                    s.start(),
                    s.end(),
                    first.name(),
                    first.start(),
                    first.end()
                )));
            }
        }
        let endog_m = DMatrix::from_fn(t, endog.len(), |i, j| endog[j].values()[i]);
        let exog_m = DMatrix::from_fn(t, exog.len(), |i, j| exog[j].values()[i]);
        Self::from_matrices(
            start,
            endog.iter().map(|s| s.name().to_string()).collect(),
            endog_m,
            exog.iter().map(|s| s.name().to_string()).collect(),
            exog_m,
            include_constant,
            include_trend,
        )
    }

    pub fn from_matrices(
        start: MonthStamp,
        endog_names: Vec<String>,
        endog: DMatrix<f64>,
        exog_names: Vec<String>,
        exog: DMatrix<f64>,
        include_constant: bool,
        include_trend: bool,
    ) -> Result<Self> {
        if endog.ncols() == 0 || endog.ncols() != endog_names.len() {
            return Err(Error::Parameter(format!(
                "{} endogenous names for {} columns",
                endog_names.len(),
                endog.ncols()
            )));
        }
        if exog.ncols() != exog_names.len() || exog.nrows() != endog.nrows() {
            return Err(Error::Parameter(
                "exogenous block does not match the endogenous block".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for name in endog_names.iter().chain(&exog_names) {
            if !seen.insert(name.as_str()) {
                return Err(Error::Parameter(format!("duplicate series name `{name}`")));
            }
        }
        if endog.iter().chain(exog.iter()).any(|v| !v.is_finite()) {
            return Err(Error::DegenerateInput("non-finite value in panel".into()));
        }
        for (j, name) in exog_names.iter().enumerate() {
            let col = exog.column(j);
            if col.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(Error::Parameter(format!("dummy `{name}` has values other than 0/1")));
            }
            if col.as_slice().windows(2).any(|w| w[1] < w[0]) {
                return Err(Error::Parameter(format!("dummy `{name}` is not a step (decreases)")));
            }
        }
        Ok(Self {
            start,
            endog_names,
            endog,
            exog_names,
            exog,
            include_constant,
            include_trend,
        })
    }

    pub fn start(&self) -> MonthStamp {
        self.start
    }

    /// Number of months.
    pub fn len(&self) -> usize {
        self.endog.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.endog.nrows() == 0
    }

    pub fn k(&self) -> usize {
        self.endog.ncols()
    }

    pub fn n_exog(&self) -> usize {
        self.exog.ncols()
    }

    pub fn endog(&self) -> &DMatrix<f64> {
        &self.endog
    }

    pub fn exog(&self) -> &DMatrix<f64> {
        &self.exog
    }

    pub fn endog_names(&self) -> &[String] {
        &self.endog_names
    }

    pub fn exog_names(&self) -> &[String] {
        &self.exog_names
    }

    pub fn include_constant(&self) -> bool {
        self.include_constant
    }

    pub fn include_trend(&self) -> bool {
        self.include_trend
    }

    pub fn n_deterministic(&self) -> usize {
        self.include_constant as usize + self.include_trend as usize
    }

    pub fn endog_index(&self, name: &str) -> Result<usize> {
        self.endog_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Lookup(format!("no endogenous series named `{name}`")))
    }

    pub fn endog_series(&self, name: &str) -> Result<TimeSeries> {
        let j = self.endog_index(name)?;
        TimeSeries::new(
            name,
            self.start,
            self.endog.column(j).iter().copied().collect(),
            SeriesRole::Indicator,
        )
    }

    /// `T > K·p + E + 2`
    pub fn check_estimable(&self, p: usize) -> Result<()> {
        let needed = self.k() * p + self.n_exog() + 2;
        if p == 0 || self.len() <= needed {
            return Err(Error::DegenerateInput(format!(
                "{} months cannot support a VAR({p}) with {} series and {} dummies",
                self.len(),
                self.k(),
                self.n_exog()
            )));
        }
        Ok(())
    }

    /// Same exogenous block and flags, new endogenous values.
    pub fn with_endog(&self, endog: DMatrix<f64>) -> Result<Self> {
        Self::from_matrices(
            self.start,
            self.endog_names.clone(),
            endog,
            self.exog_names.clone(),
            self.exog.clone(),
            self.include_constant,
            self.include_trend,
        )
    }

    /// Drop the first `n` months.
    pub fn skip_leading(&self, n: usize) -> Result<Self> {
        if n >= self.len() {
            return Err(Error::DegenerateInput(format!(
                "cannot skip {n} of {} months",
                self.len()
            )));
        }
        let t = self.len() - n;
        Self::from_matrices(
            self.start.add_months(n as i64),
            self.endog_names.clone(),
            self.endog.rows(n, t).into_owned(),
            self.exog_names.clone(),
            self.exog.rows(n, t).into_owned(),
            self.include_constant,
            self.include_trend,
        )
    }

    /// Regressor names in design order: lags, dummies, constant, trend.
    pub(crate) fn regressor_names(&self, p: usize) -> Vec<String> {
        let mut names = Vec::with_capacity(self.k() * p + self.n_exog() + 2);
        for l in 1..=p {
            for n in &self.endog_names {
                names.push(format!("{n}(-{l})"));
            }
        }
        names.extend(self.exog_names.iter().cloned());
        if self.include_constant {
            names.push("const".into());
        }
        if self.include_trend {
            names.push("trend".into());
        }
        names
    }

    /// Design matrix and responses for rows `first_row..T` of a VAR(p).
    /// Trend takes the 1-based month index within the panel.
    pub(crate) fn design(&self, p: usize, first_row: usize) -> (DMatrix<f64>, DMatrix<f64>) {
        debug_assert!(first_row >= p);
        let k = self.k();
        let e = self.n_exog();
        let rows = self.len() - first_row;
        let ncoef = k * p + e + self.n_deterministic();
        let mut x = DMatrix::zeros(rows, ncoef);
        for r in 0..rows {
            let t = first_row + r;
            let mut c = 0;
            for l in 1..=p {
                for j in 0..k {
                    x[(r, c)] = self.endog[(t - l, j)];
                    c += 1;
                }
            }
            for j in 0..e {
                x[(r, c)] = self.exog[(t, j)];
                c += 1;
            }
            if self.include_constant {
                x[(r, c)] = 1.0;
                c += 1;
            }
            if self.include_trend {
                x[(r, c)] = (t + 1) as f64;
            }
        }
        let y = self.endog.rows(first_row, rows).into_owned();
        (x, y)
    }
}
