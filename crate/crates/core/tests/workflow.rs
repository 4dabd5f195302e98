mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

use nalgebra::dmatrix;
use varflow::inference::{irf_set, toda_yamamoto_granger, IrfOptions};
use varflow::report::{
    analyze_triple, emit_tables, run_workflow, triple_seed, AnalysisSettings, OutputFormat, RunConfig, TripleKey,
};
use varflow::series::{align, SeriesRole, TimeSeries};
use varflow::stationarity::ensure_stationary;
use varflow::var::{fit_var, select_lag, simulate_var, PanelDataset, StepDummy, VarDesign};

fn read_dir_sorted(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for sub in ["", "irf"] {
        for e in fs::read_dir(dir.join(sub)).unwrap() {
            let e = e.unwrap();
            if e.file_type().unwrap().is_file() {
                out.insert(format!("{sub}/{}", e.file_name().to_string_lossy()), fs::read(e.path()).unwrap());
            }
        }
    }
    out
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_varflow")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn composition_matches_direct_module_calls() {
    let design = VarDesign {
        names: vec!["a".into(), "b".into()],
        lags: vec![dmatrix![0.3, 0.4; 0.0, 0.5]],
        dummies: vec![StepDummy { name: "Interruption 1".into(), switch_at: 40 }],
        exog_coef: dmatrix![1.0; 0.0],
        intercept: Some(nalgebra::dvector![2.0, 1.0]),
        trend: None,
        sigma: dmatrix![1.0, 0.2; 0.2, 1.0],
    };
    let sim = simulate_var(&design, common::start(), 120, 11).unwrap();
    let dv = TimeSeries::new("a", sim.start(), sim.endog().column(0).iter().copied().collect(), SeriesRole::TopicCount).unwrap();
    let iv = TimeSeries::new("b", sim.start(), sim.endog().column(1).iter().copied().collect(), SeriesRole::Indicator).unwrap();
    let dummy = TimeSeries::new("Interruption 1", sim.start(), sim.exog().column(0).iter().copied().collect(), SeriesRole::Dummy).unwrap();

    let settings = AnalysisSettings {
        irf: IrfOptions { boot_reps: 40, ..IrfOptions::default() },
        max_lag: 4,
        ..AnalysisSettings::default()
    };
    let key = TripleKey {
        page: "RT".into(),
        topic: "T".into(),
        indicator: "ruble".into(),
        indicator_label: "Ruble".into(),
    };
    let seed = triple_seed(5, "RT", "T", "ruble");
    let report = analyze_triple(key, &dv, &iv, std::slice::from_ref(&dummy), &settings, seed).unwrap();

    // the same chain by hand
    let sd = ensure_stationary(&dv.clone().renamed("DV"), 0.05, 2, settings.adf_regression, settings.adf_lag).unwrap();
    let si = ensure_stationary(&iv.clone().renamed("Ruble"), 0.05, 2, settings.adf_regression, settings.adf_lag).unwrap();
    let aligned = align(&[sd.series, si.series, dummy]).unwrap();
    let data = PanelDataset::from_series(&aligned[..2], &aligned[2..], true, true).unwrap();
    let p = select_lag(&data, 4, settings.criterion).unwrap().selected;
    let model = fit_var(&data, p).unwrap();
    let g = toda_yamamoto_granger(&data, p, 0, "Ruble", "DV").unwrap();
    let irf = irf_set(&model, IrfOptions { seed, ..settings.irf }).unwrap();

    assert_eq!(report.lag.selected, p);
    assert_eq!(report.model.coefficients(), model.coefficients());
    assert_eq!(report.granger[0], g);
    assert_eq!(report.irf, irf);
    assert_eq!(report.granger[1].cause, "DV");
    assert_eq!(report.ljung_box.len(), 2);
    assert_eq!(report.johansen.rank_hypotheses, vec![0, 1]);
}

#[test]
fn workflow_is_deterministic_and_reproducible_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = common::write_study(dir.path(), 3, "");
    let cfg = RunConfig::load(&cfg_path).unwrap();
    let bundle = run_workflow(&cfg).unwrap();
    assert_eq!(bundle.triples.len(), 8);
    for t in &bundle.triples {
        assert!(t.result.is_ok(), "{:?}: {:?}", t.key, t.result.as_ref().err());
    }
    // lexicon filtering removed the two non-economic posts per month
    let total: f64 = bundle.topic_counts.values().flat_map(|ts| ts.values()).sum();
    let posts = fs::read_to_string(dir.path().join("data/posts.csv")).unwrap();
    let economic = posts.lines().filter(|l| !l.contains("sanctimonious") && !l.contains("Weather") && !l.contains("Fußball") && !l.contains("RT Arabic")).count() - 1;
    assert_eq!(total as usize, economic);

    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    emit_tables(&bundle, &out_a, OutputFormat::Csv, 0.05).unwrap();
    let again = run_workflow(&cfg).unwrap();
    emit_tables(&again, &out_b, OutputFormat::Csv, 0.05).unwrap();
    assert_eq!(read_dir_sorted(&out_a), read_dir_sorted(&out_b));

    // the manifest alone reproduces the bundle
    let from_manifest = RunConfig::load(&out_a.join("manifest.conf")).unwrap();
    assert_eq!(from_manifest, cfg);
    let out_c = dir.path().join("c");
    emit_tables(&run_workflow(&from_manifest).unwrap(), &out_c, OutputFormat::Csv, 0.05).unwrap();
    assert_eq!(read_dir_sorted(&out_a), read_dir_sorted(&out_c));

    // IRF files hold horizon + 1 rows
    let irfs: Vec<_> = fs::read_dir(out_a.join("irf")).unwrap().collect();
    assert_eq!(irfs.len(), 8 * 4);
    for e in irfs {
        let text = fs::read_to_string(e.unwrap().path()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("horizon,point,lower,upper"));
        assert_eq!(lines.count(), 9);
    }
}

#[test]
fn triples_are_isolated_from_other_pages() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = common::write_study(dir.path(), 4, "");
    let full = RunConfig::load(&cfg_path).unwrap();
    let mut reduced = full.clone();
    reduced.pages = vec!["RT DE".into()];
    let a = run_workflow(&full).unwrap();
    let b = run_workflow(&reduced).unwrap();
    for t in &b.triples {
        let same = a.triples.iter().find(|x| x.key == t.key).unwrap();
        let (x, y) = (same.result.as_ref().unwrap(), t.result.as_ref().unwrap());
        assert_eq!(x.model.coefficients(), y.model.coefficients());
        assert_eq!(x.granger, y.granger);
        assert_eq!(x.irf, y.irf);
        assert_eq!(x.johansen, y.johansen);
    }
}

#[test]
fn markdown_and_csv_carry_identical_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::load(&common::write_study(dir.path(), 5, "")).unwrap();
    let bundle = run_workflow(&cfg).unwrap();
    emit_tables(&bundle, &dir.path().join("csv"), OutputFormat::Csv, 0.05).unwrap();
    emit_tables(&bundle, &dir.path().join("md"), OutputFormat::Markdown, 0.05).unwrap();
    for name in ["granger", "var_coefficients", "johansen", "ljung_box", "adf", "lags", "var_tables"] {
        let csv_text = fs::read_to_string(dir.path().join(format!("csv/{name}.csv"))).unwrap();
        let md = fs::read_to_string(dir.path().join(format!("md/{name}.md"))).unwrap();
        let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
        let csv_rows: Vec<Vec<String>> = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
        let md_rows: Vec<Vec<String>> = md
            .lines()
            .skip(4)
            .map(|l| l.trim_matches('|').split(" | ").map(|c| c.trim().to_string()).collect())
            .collect();
        assert!(!csv_rows.is_empty(), "{name}");
        assert_eq!(csv_rows, md_rows, "{name}");
    }
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = common::write_study(dir.path(), 6, "");
    let cfg_s = cfg.to_str().unwrap();
    let out = dir.path().join("cli-out");
    let (code, err) = run_cli(&["analyze", "--config", cfg_s, "--out", out.to_str().unwrap(), "--indicator", "oil", "--format", "markdown"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.join("granger.md").is_file());
    let manifest = fs::read_to_string(out.join("manifest.conf")).unwrap();
    assert!(manifest.contains("format = markdown"));
    assert!(!manifest.contains("indicator.ruble"));

    // a topic with no posts yields zero-variance series: partial failure
    let partial = common::write_study(&dir.path().join("p"), 6, "");
    let text = fs::read_to_string(&partial).unwrap().replace(
        "topics = Recent News Headlines",
        "topics = Middle East Wars and Conflict, Recent News Headlines",
    );
    fs::write(&partial, text).unwrap();
    let (code, err) = run_cli(&["analyze", "--config", partial.to_str().unwrap(), "--indicator", "ruble"]);
    assert_eq!(code, 1, "{err}");
    let errors = fs::read_to_string(partial.parent().unwrap().join("out/errors.csv")).unwrap();
    assert_eq!(errors.lines().count(), 1 + 2);

    let (code, _) = run_cli(&["analyze", "--config", dir.path().join("missing.conf").to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _) = run_cli(&["analyze", "--config", cfg_s, "--indicator", "gold"]);
    assert_eq!(code, 2);

    // refuses to replace a directory that is not a report
    let foreign = dir.path().join("foreign");
    fs::create_dir_all(&foreign).unwrap();
    fs::write(foreign.join("notes.txt"), "keep").unwrap();
    let (code, _) = run_cli(&["analyze", "--config", cfg_s, "--out", foreign.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(fs::read_to_string(foreign.join("notes.txt")).unwrap(), "keep");
}
