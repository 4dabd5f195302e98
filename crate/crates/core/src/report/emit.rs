use std::fs;
use std::path::{Path, PathBuf};

use super::config::OutputFormat;
use super::table::{num, Table};
use super::workflow::{ReportBundle, TripleReport};
use crate::error::{Error, Result};
use crate::inference::IrfResult;
use crate::series::min_max_normalize;
use crate::var::Stars;

fn key_cells(r: &TripleReport) -> Vec<String> {
    vec![r.key.page.clone(), r.key.topic.clone(), r.key.indicator_label.clone()]
}

fn with_key(r: &TripleReport, rest: Vec<String>) -> Vec<String> {
    let mut row = key_cells(r);
    row.extend(rest);
    row
}

const KEY: [&str; 3] = ["page", "topic", "indicator"];

fn columns(rest: &[&'static str]) -> Vec<&'static str> {
    KEY.iter().copied().chain(rest.iter().copied()).collect()
}

/// File-system friendly form of a name.
pub fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            out.push(c);
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    out.trim_matches('-').to_string()
}

/// Relative path of one IRF file inside the bundle.
pub fn irf_file_name(r: &TripleReport, irf: &IrfResult) -> String {
    format!(
        "irf/{}__{}__{}__{}-to-{}.csv",
        slug(&r.key.page),
        slug(&r.key.topic),
        slug(&r.key.indicator),
        slug(&irf.impulse),
        slug(&irf.response)
    )
}

pub fn irf_table(irf: &IrfResult) -> Table {
    let mut t = Table::new(&format!("{} -> {}", irf.impulse, irf.response), &["horizon", "point", "lower", "upper"]);
    for h in 0..=irf.horizon {
        t.push(vec![h.to_string(), num(irf.point[h]), num(irf.lower[h]), num(irf.upper[h])]);
    }
    t
}

/// Every summary table of the bundle, in emission order.
pub fn bundle_tables(bundle: &ReportBundle, alpha: f64) -> Vec<Table> {
    let ok: Vec<&TripleReport> = bundle.triples.iter().filter_map(|t| t.result.as_deref().ok()).collect();

    let mut adf = Table::new(
        "adf",
        &columns(&["series", "difference", "regression", "lag", "nobs", "statistic", "p_value", "selected"]),
    );
    for r in &ok {
        for s in &r.stationarity {
            for (d, t) in s.tests.iter().enumerate() {
                adf.push(with_key(
                    r,
                    vec![
                        s.series.name().to_string(),
                        d.to_string(),
                        t.regression.to_string(),
                        t.lag_order.to_string(),
                        t.nobs.to_string(),
                        num(t.statistic),
                        num(t.p_value),
                        (d == s.d).to_string(),
                    ],
                ));
            }
        }
    }

    let mut lags = Table::new("lags", &columns(&["criterion", "lag", "value", "sample", "selected"]));
    for r in &ok {
        for (i, v) in r.lag.values.iter().enumerate() {
            lags.push(with_key(
                r,
                vec![
                    r.lag.criterion.to_string(),
                    (i + 1).to_string(),
                    num(*v),
                    r.lag.sample.to_string(),
                    (i + 1 == r.lag.selected).to_string(),
                ],
            ));
        }
    }

    let mut coef = Table::new(
        "var_coefficients",
        &columns(&["equation", "term", "regressor", "estimate", "std_error", "p_value", "stars", "cell"]),
    );
    let mut styled = Table::new("var_tables", &columns(&["term", "DV equation", "indicator equation"]));
    for r in &ok {
        for t in &r.tables {
            for row in &t.rows {
                coef.push(with_key(
                    r,
                    vec![
                        t.equation.clone(),
                        row.label.clone(),
                        row.regressor.clone(),
                        num(row.cell.estimate),
                        num(row.cell.std_error),
                        num(row.cell.p_value),
                        row.cell.stars.to_string(),
                        row.cell.render(),
                    ],
                ));
            }
        }
        let (dv, iv) = (&r.tables[0], &r.tables[1]);
        for (a, b) in dv.rows.iter().zip(&iv.rows) {
            styled.push(with_key(r, vec![a.label.clone(), a.cell.render_with_se(), b.cell.render_with_se()]));
        }
        styled.push(with_key(r, vec!["Num.Obs.".into(), dv.nobs.to_string(), iv.nobs.to_string()]));
        styled.push(with_key(r, vec!["R2".into(), format!("{:.3}", dv.r2), format!("{:.3}", iv.r2)]));
        styled.push(with_key(r, vec!["R2 Adj.".into(), format!("{:.3}", dv.r2_adj), format!("{:.3}", iv.r2_adj)]));
    }

    let mut granger = Table::new(
        "granger",
        &columns(&["cause", "effect", "lag", "d_max", "df", "wald", "p_value", "significant", "stars"]),
    );
    for r in &ok {
        for g in &r.granger {
            granger.push(with_key(
                r,
                vec![
                    g.cause.clone(),
                    g.effect.clone(),
                    g.lag.to_string(),
                    g.d_max.to_string(),
                    g.df.to_string(),
                    num(g.wald_stat),
                    num(g.p_value),
                    (g.p_value < alpha).to_string(),
                    Stars::from_p_value_strict(g.p_value).to_string(),
                ],
            ));
        }
    }

    let mut johansen = Table::new(
        "johansen",
        &columns(&["rank", "eigenvalue", "trace", "cv_10", "cv_5", "cv_1", "p_value", "nobs"]),
    );
    for r in &ok {
        let j = &r.johansen;
        for (i, &rank) in j.rank_hypotheses.iter().enumerate() {
            johansen.push(with_key(
                r,
                vec![
                    rank.to_string(),
                    num(j.eigenvalues[i]),
                    num(j.trace_stats[i]),
                    num(j.critical_values[i][0]),
                    num(j.critical_values[i][1]),
                    num(j.critical_values[i][2]),
                    num(j.p_values[i]),
                    j.nobs.to_string(),
                ],
            ));
        }
    }

    let mut lb = Table::new("ljung_box", &columns(&["series", "lags", "fit_df", "statistic", "p_value"]));
    for r in &ok {
        for l in &r.ljung_box {
            lb.push(with_key(
                r,
                vec![l.series.clone(), l.lags.to_string(), l.fit_df.to_string(), num(l.statistic), num(l.p_value)],
            ));
        }
    }

    let mut errors = Table::new("errors", &columns(&["error"]));
    for t in &bundle.triples {
        if let Err(e) = &t.result {
            errors.push(vec![t.key.page.clone(), t.key.topic.clone(), t.key.indicator_label.clone(), e.clone()]);
        }
    }

    let mut shares = Table::new("topic_shares", &["month", "page", "topic", "count", "normalized"]);
    for ((page, topic), ts) in &bundle.topic_counts {
        let norm = min_max_normalize(ts);
        for (i, month) in ts.months().enumerate() {
            shares.push(vec![
                month.to_string(),
                page.clone(),
                topic.clone(),
                num(ts.values()[i]),
                num(norm.values()[i]),
            ]);
        }
    }

    vec![adf, lags, coef, styled, granger, johansen, lb, errors, shares]
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::file(path, e))
}

/// Write the bundle to `out`. Files are first written to a sibling
/// `.partial` directory which then replaces `out`; an existing `out` is
/// replaced only if it is empty or holds a previous bundle.
pub fn emit_tables(bundle: &ReportBundle, out: &Path, format: OutputFormat, alpha: f64) -> Result<Vec<PathBuf>> {
    if out.exists() {
        let is_bundle = out.join("manifest.conf").is_file();
        let is_empty = fs::read_dir(out).map_err(|e| Error::file(out, e))?.next().is_none();
        if !is_bundle && !is_empty {
            return Err(Error::Config(format!(
                "{} exists and is not a previous report; refusing to replace it",
                out.display()
            )));
        }
    }
    let mut partial = out.as_os_str().to_owned();
    partial.push(".partial");
    let partial = PathBuf::from(partial);
    if partial.exists() {
        fs::remove_dir_all(&partial).map_err(|e| Error::file(&partial, e))?;
    }
    fs::create_dir_all(partial.join("irf")).map_err(|e| Error::file(&partial, e))?;

    let mut written = Vec::new();
    for table in bundle_tables(bundle, alpha) {
        let name = format!("{}.{}", table.name, format.extension());
        let body = match format {
            OutputFormat::Csv => table.to_csv()?,
            OutputFormat::Markdown => table.to_markdown(),
        };
        write(&partial.join(&name), &body)?;
        written.push(out.join(name));
    }
    for t in &bundle.triples {
        let Ok(r) = &t.result else { continue };
        for impulse in &r.irf.names {
            for response in &r.irf.names {
                let irf = r.irf.get(impulse, response)?;
                let name = irf_file_name(r, &irf);
                write(&partial.join(&name), &irf_table(&irf).to_csv()?)?;
                written.push(out.join(name));
            }
        }
    }
    write(&partial.join("manifest.conf"), &bundle.manifest)?;
    written.push(out.join("manifest.conf"));

    if out.exists() {
        fs::remove_dir_all(out).map_err(|e| Error::file(out, e))?;
    }
    fs::rename(&partial, out).map_err(|e| Error::file(out, e))?;
    Ok(written)
}
