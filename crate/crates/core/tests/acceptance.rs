//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines always reach the output; exits non-zero on failure.
//!
//! Criterion 8 needs the original study data: set `VARFLOW_STUDY_DATA` to a
//! run config over it.

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{dmatrix, dvector, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use varflow::corpus::{aggregate_grid, apply_labels, lexicon_filter, load_labels, load_posts, Lexicon, PostFilter, StudyWindow};
use varflow::diagnostics::{johansen_trace, ljung_box};
use varflow::inference::{impact_matrix, irf_set, toda_yamamoto_granger, IrfOptions};
use varflow::report::{run_workflow, RunConfig, DV_NAME};
use varflow::series::{MonthStamp, SeriesRole, TimeSeries};
use varflow::stationarity::{adf_test, AdfLag, AdfRegression};
use varflow::var::{coefficient_table, fit_var, simulate_var, PanelDataset, Stars, StepDummy, VarDesign};

enum Outcome {
    Pass(String),
    Fail(String),
    NotRun(String),
}

type Criterion = (&'static str, fn() -> Outcome);

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn start() -> MonthStamp {
    MonthStamp::new(2000, 1).unwrap()
}

fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn series(values: Vec<f64>) -> TimeSeries {
    TimeSeries::new("y", start(), values, SeriesRole::Indicator).unwrap()
}

fn panel(endog: DMatrix<f64>, constant: bool) -> PanelDataset {
    let t = endog.nrows();
    let names = (0..endog.ncols()).map(|j| ["x", "y", "z"][j].to_string()).collect();
    PanelDataset::from_matrices(start(), names, endog, Vec::new(), DMatrix::zeros(t, 0), constant, false).unwrap()
}

fn criterion_1() -> Outcome {
    let clock = Instant::now();
    let a = dmatrix![0.5, 0.1; 0.2, 0.3];
    let c = dvector![1.0, -0.5];
    let design = VarDesign {
        intercept: Some(c.clone()),
        ..VarDesign::pure(&["x", "y"], vec![a.clone()], dmatrix![1.0, 0.3; 0.3, 0.8])
    };
    let mut good = 0;
    for seed in 0..100 {
        let data = simulate_var(&design, start(), 500, seed).unwrap();
        let m = fit_var(&data, 1).unwrap();
        let mut all = true;
        for eq in 0..2 {
            let mut truth = vec![(m.regressor_index("const").unwrap(), c[eq])];
            for (j, name) in ["x(-1)", "y(-1)"].iter().enumerate() {
                truth.push((m.regressor_index(name).unwrap(), a[(eq, j)]));
            }
            for (i, v) in truth {
                all &= (m.coefficients()[(i, eq)] - v).abs() <= 3.0 * m.std_errors()[(i, eq)];
            }
        }
        good += all as usize;
    }
    let secs = clock.elapsed().as_secs_f64();
    verdict(good >= 95 && secs < 30.0, format!("{good}/100 seeds within 3 SE, {secs:.2} s"))
}

fn criterion_2() -> Outcome {
    let mut rw_kept = 0;
    let mut ar_floor = 0;
    for seed in 0..100 {
        let e = normals(500, seed);
        let mut rw = vec![0.0; 500];
        let mut ar = vec![0.0; 500];
        for t in 1..500 {
            rw[t] = rw[t - 1] + e[t];
            ar[t] = 0.5 * ar[t - 1] + e[t];
        }
        let reg = AdfRegression::default();
        rw_kept += (adf_test(&series(rw), reg, AdfLag::Auto).unwrap().p_value > 0.05) as usize;
        ar_floor += (adf_test(&series(ar), reg, AdfLag::Auto).unwrap().p_value == 0.01) as usize;
    }
    verdict(
        rw_kept >= 90 && ar_floor >= 90,
        format!("random walk p > 0.05 in {rw_kept}/100, AR(1) p = 0.01 in {ar_floor}/100"),
    )
}

fn bivariate(t: usize, cross: f64, seed: u64) -> PanelDataset {
    let e = normals(2 * (t + 50), seed);
    let mut y = DMatrix::zeros(t + 50, 2);
    for s in 1..t + 50 {
        y[(s, 0)] = e[2 * s];
        y[(s, 1)] = cross * y[(s - 1, 0)] + e[2 * s + 1];
    }
    panel(y.rows(50, t).into_owned(), true)
}

fn criterion_3() -> Outcome {
    let clock = Instant::now();
    let size = (0..200)
        .filter(|&s| toda_yamamoto_granger(&bivariate(200, 0.0, s), 1, 0, "x", "y").unwrap().p_value < 0.05)
        .count();
    let power = (0..200)
        .filter(|&s| toda_yamamoto_granger(&bivariate(200, 0.5, 10_000 + s), 1, 0, "x", "y").unwrap().p_value < 0.05)
        .count();
    let secs = clock.elapsed().as_secs_f64();
    let rate = size as f64 / 200.0;
    verdict(
        (0.01..=0.10).contains(&rate) && power >= 180 && secs < 120.0,
        format!("size {:.1}% ({size}/200), power {power}/200, {secs:.2} s", 100.0 * rate),
    )
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut chol_exact = true;
    for seed in 0..20 {
        let design = VarDesign::pure(&["x", "y"], vec![dmatrix![0.5, 0.2; -0.1, 0.4]], dmatrix![1.0, 0.4; 0.4, 2.0]);
        let m = fit_var(&simulate_var(&design, start(), 300, seed).unwrap(), 1).unwrap();
        let a = m.lag_matrix(1);
        let plain = irf_set(&m, IrfOptions { orthogonalized: false, boot_reps: 0, horizon: 12, ..IrfOptions::default() }).unwrap();
        let mut power = DMatrix::identity(2, 2);
        for h in 0..=12 {
            worst = worst.max((&plain.point[h] - &power).amax());
            power = &a * power;
        }
        let orth = irf_set(&m, IrfOptions { boot_reps: 0, ..IrfOptions::default() }).unwrap();
        let chol = impact_matrix(&m).unwrap();
        let direct = m.sigma().clone().cholesky().unwrap().l();
        chol_exact &= orth.point[0] == chol && chol == direct;
    }
    verdict(
        worst < 1e-10 && chol_exact,
        format!("max |Φ_h - A^h| = {worst:.1e}, Cholesky column exact: {chol_exact}"),
    )
}

fn criterion_5() -> Outcome {
    let lb = (0..500)
        .filter(|&s| ljung_box(&normals(200, s), "e", 10, 0).unwrap().p_value < 0.05)
        .count();
    let walks = |seed: u64, coint: bool| {
        let e = normals(1000, seed);
        let u = normals(500, seed + 50_000);
        let mut y = DMatrix::zeros(500, 2);
        for t in 1..500 {
            y[(t, 0)] = y[(t - 1, 0)] + e[2 * t];
            y[(t, 1)] = if coint { y[(t, 0)] + u[t] } else { y[(t - 1, 1)] + e[2 * t + 1] };
        }
        panel(y, true)
    };
    let detected = (0..100)
        .filter(|&s| johansen_trace(&walks(s, true), 2).unwrap().p_values[0] < 0.05)
        .count();
    let kept = (0..100)
        .filter(|&s| johansen_trace(&walks(s, false), 2).unwrap().p_values[0] >= 0.05)
        .count();
    let rate = lb as f64 / 500.0;
    verdict(
        (0.02..=0.09).contains(&rate) && detected >= 90 && kept >= 85,
        format!(
            "Ljung-Box size {:.1}%, Johansen rank >= 1 in {detected}/100, r = 0 kept in {kept}/100",
            100.0 * rate
        ),
    )
}

fn criterion_6() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let m = |mo| MonthStamp::new(2022, mo).unwrap();
    let window = StudyWindow::new(m(1), m(3)).unwrap();
    let lexicon = Lexicon::load(&dir.join("lexicon.tsv")).unwrap();
    let mut posts = load_posts(&dir.join("posts12.csv"), &PostFilter { pages: Some(["RT".into(), "RT DE".into()].into()), window: Some(window) }).unwrap();
    apply_labels(&mut posts, &load_labels(&dir.join("labels12.csv")).unwrap());
    let kept = lexicon_filter(&posts, &lexicon).unwrap();
    let pages = vec!["RT".to_string(), "RT DE".to_string()];
    let topics = vec!["Recent News Headlines".to_string(), "US-Russia-Ukraine Sanctions".to_string()];
    let counts = aggregate_grid(&kept, &window, &pages, &topics).unwrap();
    let expected: [(&str, &str, [f64; 3]); 4] = [
        ("RT", "Recent News Headlines", [1.0, 0.0, 2.0]),
        ("RT", "US-Russia-Ukraine Sanctions", [2.0, 1.0, 0.0]),
        ("RT DE", "Recent News Headlines", [1.0, 0.0, 1.0]),
        ("RT DE", "US-Russia-Ukraine Sanctions", [0.0, 3.0, 1.0]),
    ];
    let counts_ok = kept.len() == 12
        && counts.len() == 4
        && expected
            .iter()
            .all(|(p, t, v)| counts[&(p.to_string(), t.to_string())].values() == v);

    let cases = std::fs::read_to_string(dir.join("lexicon_cases.tsv")).unwrap();
    let mut agree = 0;
    let mut total = 0;
    let mut misses = Vec::new();
    for line in cases.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let mut f = line.splitn(3, '\t');
        let (lang, want, text) = (f.next().unwrap(), f.next().unwrap() == "1", f.next().unwrap());
        total += 1;
        if lexicon.matches(lang, text).unwrap() == want {
            agree += 1;
        } else {
            misses.push(text.to_string());
        }
    }
    let sancti = !lexicon.matches("en", "The sanctimonious speech").unwrap();
    verdict(
        counts_ok && agree == total && total == 20 && sancti,
        format!("hand counts match: {counts_ok}, lexicon cases {agree}/{total} {misses:?}"),
    )
}

fn criterion_7() -> Outcome {
    let boundary: Vec<&str> = [0.0999, 0.0499, 0.0099, 0.0009].iter().map(|&p| Stars::from_p_value(p).as_str()).collect();
    let above: Vec<&str> = [0.10, 0.05, 0.01, 0.001].iter().map(|&p| Stars::from_p_value(p).as_str()).collect();
    let design = VarDesign {
        names: vec!["DV".into(), "Ruble".into()],
        lags: vec![dmatrix![0.3, 0.2; 0.0, 0.4]],
        dummies: vec![
            StepDummy { name: "Interruption 1".into(), switch_at: 30 },
            StepDummy { name: "Interruption 2".into(), switch_at: 41 },
        ],
        exog_coef: dmatrix![1.0, 2.0; 0.0, 0.0],
        intercept: Some(dvector![0.0, 0.0]),
        trend: Some(dvector![0.0, 0.0]),
        sigma: DMatrix::identity(2, 2),
    };
    let m = fit_var(&simulate_var(&design, start(), 61, 1).unwrap(), 1).unwrap();
    let table = coefficient_table(&m, "DV").unwrap();
    let labels: Vec<&str> = table.rows.iter().map(|r| r.label.as_str()).collect();
    let order = ["DV (-1)", "Ruble (-1)", "Interruption 1", "Interruption 2", "Constant", "Trend"];
    let cell = varflow::var::CoefficientCell::new(4506.965, 1551.461, 0.004);
    let ok = boundary == ["+", "*", "**", "***"]
        && above == ["", "+", "*", "**"]
        && labels == order
        && cell.render() == "4506.965**"
        && cell.render_with_se() == "4506.965** (1551.461)";
    verdict(ok, format!("boundary stars {boundary:?}, rows {labels:?}"))
}

/// Significant Granger cells (indicator → topic) at 5% in the published
/// tables; every other cell of the grid is non-significant.
const RUBLE_SIGNIFICANT: [(&str, &str, f64); 2] = [
    ("RT DE", "Recent News Headlines", 0.0045),
    ("RT", "US-Russia-Ukraine Sanctions", 0.0385),
];
const OIL_SIGNIFICANT: [(&str, &str, f64); 6] = [
    ("RT Arabic", "Covid Pandemic and Related Issues", 0.0383),
    ("RT", "Covid Pandemic and Related Issues", 0.0107),
    ("RT DE", "Bitcoin Cryptocurrency Value", 0.0318),
    ("RT DE", "Covid Pandemic and Related Issues", 0.0002),
    ("RT en Español", "US-Russia-Ukraine Sanctions", 0.0228),
    ("RT", "US-Russia-Ukraine Sanctions", 0.0418),
];

fn criterion_8_stars() -> Outcome {
    let strict: Vec<&str> = RUBLE_SIGNIFICANT
        .iter()
        .chain(&OIL_SIGNIFICANT)
        .map(|c| Stars::from_p_value_strict(c.2).as_str())
        .collect();
    let ok = strict == ["**", "*", "*", "*", "*", "***", "*", "*"];
    verdict(ok, format!("published Granger p-values render as {strict:?}"))
}

fn criterion_8() -> Outcome {
    let Some(path) = std::env::var_os("VARFLOW_STUDY_DATA") else {
        return Outcome::NotRun("VARFLOW_STUDY_DATA is not set; the original posts and indicator data are not bundled".into());
    };
    let cfg = match RunConfig::load(Path::new(&path)) {
        Ok(c) => c,
        Err(e) => return Outcome::Fail(format!("cannot load config: {e}")),
    };
    let bundle = match run_workflow(&cfg) {
        Ok(b) => b,
        Err(e) => return Outcome::Fail(format!("workflow failed: {e}")),
    };
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for t in &bundle.triples {
        let Ok(r) = &t.result else { continue };
        let published: &[(&str, &str, f64)] = match t.key.indicator.as_str() {
            "ruble" => &RUBLE_SIGNIFICANT,
            "oil" => &OIL_SIGNIFICANT,
            _ => continue,
        };
        let expected = published.iter().any(|(p, tp, _)| *p == t.key.page && *tp == t.key.topic);
        let got = r.granger[0].p_value < 0.05;
        compared += 1;
        if expected != got {
            mismatches.push(format!("{}/{}/{}: p = {:.4}", t.key.page, t.key.topic, t.key.indicator, r.granger[0].p_value));
        }
    }
    let headline = bundle.triples.iter().find_map(|t| {
        let r = t.result.as_ref().ok()?;
        (t.key.page == "RT DE" && t.key.topic == "Recent News Headlines" && t.key.indicator == "ruble").then(|| {
            let row = r.tables[0].rows.iter().find(|row| row.label == format!("{} (-1)", t.key.indicator_label))?;
            Some(row.cell)
        })?
    });
    let coef = match headline {
        Some(c) => format!(
            "Ruble(-1) in {DV_NAME} equation {:.3} (published 4506.965, rel. diff {:.1}%)",
            c.estimate,
            100.0 * (c.estimate - 4506.965).abs() / 4506.965
        ),
        None => "headline coefficient unavailable".into(),
    };
    verdict(
        mismatches.is_empty() && compared > 0,
        format!("{compared} Granger cells compared, mismatches {mismatches:?}; {coef}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 VAR oracle recovery", criterion_1),
        ("2 ADF size and power", criterion_2),
        ("3 Granger size and power", criterion_3),
        ("4 IRF analytic identity", criterion_4),
        ("5 Ljung-Box and Johansen", criterion_5),
        ("6 pipeline fixture and lexicon rules", criterion_6),
        ("7 star mapping and row order", criterion_7),
        ("8 published significance stars", criterion_8_stars),
        ("8 published dataset reproduction", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Outcome::Pass(d) => println!("PASS     criterion {name}: {d}"),
            Outcome::Fail(d) => {
                failed += 1;
                println!("FAIL     criterion {name}: {d}");
            }
            Outcome::NotRun(d) => println!("NOT RUN  criterion {name}: {d}"),
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
