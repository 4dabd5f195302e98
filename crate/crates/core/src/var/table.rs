use std::fmt;

use super::model::VarModel;
use crate::error::Result;
use crate::stats::t_two_sided;

/// Significance marker: `+` p < 0.10, `*` p < 0.05, `**` p < 0.01,
/// `***` p < 0.001.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stars {
    None,
    Plus,
    One,
    Two,
    Three,
}

impl Stars {
    pub fn from_p_value(p: f64) -> Self {
        if p < 0.001 {
            Stars::Three
        } else if p < 0.01 {
            Stars::Two
        } else if p < 0.05 {
            Stars::One
        } else if p < 0.10 {
            Stars::Plus
        } else {
            Stars::None
        }
    }

    /// Variant without the `+` level, as used for causality tables.
    pub fn from_p_value_strict(p: f64) -> Self {
        match Self::from_p_value(p) {
            Stars::Plus => Stars::None,
            s => s,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stars::None => "",
            Stars::Plus => "+",
            Stars::One => "*",
            Stars::Two => "**",
            Stars::Three => "***",
        }
    }
}

impl fmt::Display for Stars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientCell {
    pub estimate: f64,
    pub std_error: f64,
    pub p_value: f64,
    pub stars: Stars,
}

impl CoefficientCell {
    pub fn new(estimate: f64, std_error: f64, p_value: f64) -> Self {
        Self {
            estimate,
            std_error,
            p_value,
            stars: Stars::from_p_value(p_value),
        }
    }

    /// `4506.965**`
    pub fn render(&self) -> String {
        format!("{:.3}{}", self.estimate, self.stars)
    }

    /// `4506.965** (1551.461)`
    pub fn render_with_se(&self) -> String {
        format!("{} ({:.3})", self.render(), self.std_error)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientRow {
    pub label: String,
    pub regressor: String,
    pub cell: CoefficientCell,
}

/// One equation of a fitted VAR laid out as a publication table: lagged
/// endogenous rows, dummies, constant, trend, then the fit footer.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub equation: String,
    pub rows: Vec<CoefficientRow>,
    pub nobs: usize,
    pub r2: f64,
    pub r2_adj: f64,
}

fn display_label(regressor: &str) -> String {
    match regressor {
        "const" => "Constant".into(),
        "trend" => "Trend".into(),
        r => match r.rfind("(-") {
            Some(i) if r.ends_with(')') => format!("{} {}", &r[..i], &r[i..]),
            _ => r.to_string(),
        },
    }
}

pub fn coefficient_table(model: &VarModel, equation: &str) -> Result<CoefficientTable> {
    let eq = model.equation_index(equation)?;
    let df = model.df_resid() as f64;
    let rows = model
        .regressor_names()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let estimate = model.coefficients()[(i, eq)];
            let std_error = model.std_errors()[(i, eq)];
            let p_value = t_two_sided(estimate / std_error, df);
            CoefficientRow {
                label: display_label(name),
                regressor: name.clone(),
                cell: CoefficientCell::new(estimate, std_error, p_value),
            }
        })
        .collect();
    Ok(CoefficientTable {
        equation: equation.to_string(),
        rows,
        nobs: model.nobs(),
        r2: model.r2()[eq],
        r2_adj: model.r2_adj()[eq],
    })
}
