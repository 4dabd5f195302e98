use std::collections::BTreeSet;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::config::{AnalysisSettings, IndicatorConfig, RunConfig};
use crate::corpus::{
    aggregate_grid, apply_labels, build_interruption, lexicon_filter, load_indicator, load_labels,
    load_posts, Lexicon, PostFilter, TopicCounts,
};
use crate::diagnostics::{johansen_trace, ljung_box_residuals, JohansenResult, LjungBoxResult};
use crate::error::{Error, Result};
use crate::inference::{irf_set, toda_yamamoto_granger, GrangerResult, IrfOptions, IrfSet};
use crate::series::{align, TimeSeries};
use crate::stationarity::{ensure_stationary, StationarityOutcome};
use crate::var::{
    coefficient_table, fit_var, select_lag, CoefficientTable, LagSelection, PanelDataset, VarModel,
};

/// Name of the topic-count series inside every model.
pub const DV_NAME: &str = "DV";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TripleKey {
    pub page: String,
    pub topic: String,
    /// Indicator key from the config, e.g. `ruble`.
    pub indicator: String,
    /// Indicator series name in the model, e.g. `Ruble`.
    pub indicator_label: String,
}

/// Every stage of the analysis for one (page, topic, indicator) triple.
#[derive(Debug, Clone)]
pub struct TripleReport {
    pub key: TripleKey,
    pub seed: u64,
    /// DV first, then the indicator.
    pub stationarity: Vec<StationarityOutcome>,
    pub data: PanelDataset,
    pub lag: LagSelection,
    pub model: VarModel,
    pub tables: Vec<CoefficientTable>,
    /// Indicator → DV, then DV → indicator.
    pub granger: Vec<GrangerResult>,
    pub irf: IrfSet,
    pub johansen: JohansenResult,
    pub ljung_box: Vec<LjungBoxResult>,
}

#[derive(Debug, Clone)]
pub struct TripleOutcome {
    pub key: TripleKey,
    pub result: std::result::Result<Box<TripleReport>, String>,
}

#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub manifest: String,
    pub triples: Vec<TripleOutcome>,
    pub topic_counts: TopicCounts,
}

impl ReportBundle {
    pub fn failures(&self) -> usize {
        self.triples.iter().filter(|t| t.result.is_err()).count()
    }
}

/// Per-triple seed: `base` mixed with a hash of the triple's names, so a
/// triple's draws do not depend on which other triples are configured.
pub fn triple_seed(base: u64, page: &str, topic: &str, indicator: &str) -> u64 {
    let mut h = Sha256::new();
    for part in [page, topic, indicator] {
        h.update(part.as_bytes());
        h.update([0x1f]);
    }
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    base ^ u64::from_le_bytes(bytes)
}

/// Stationarity → alignment → lag selection → VAR → Granger in both
/// directions → IRF → Johansen and Ljung–Box, for one DV / indicator pair.
pub fn analyze_triple(
    key: TripleKey,
    dv: &TimeSeries,
    indicator: &TimeSeries,
    dummies: &[TimeSeries],
    settings: &AnalysisSettings,
    seed: u64,
) -> Result<TripleReport> {
    settings.validate()?;
    let dv = dv.clone().renamed(DV_NAME);
    let iv = indicator.clone().renamed(key.indicator_label.clone());
    let stationarity = [&dv, &iv]
        .into_iter()
        .map(|s| ensure_stationary(s, settings.alpha, settings.max_d, settings.adf_regression, settings.adf_lag))
        .collect::<Result<Vec<_>>>()?;

    let mut all = vec![stationarity[0].series.clone(), stationarity[1].series.clone()];
    all.extend(dummies.iter().cloned());
    let aligned = align(&all)?;
    let mut data = PanelDataset::from_series(
        &aligned[..2],
        &aligned[2..],
        settings.include_constant,
        settings.include_trend,
    )?;
    if settings.skip_leading > 0 {
        data = data.skip_leading(settings.skip_leading)?;
    }

    let lag = select_lag(&data, settings.max_lag, settings.criterion)?;
    let p = lag.selected;
    let model = fit_var(&data, p)?;
    let tables = model
        .endog_names()
        .iter()
        .map(|eq| coefficient_table(&model, eq))
        .collect::<Result<Vec<_>>>()?;
    let label = key.indicator_label.as_str();
    let granger = vec![
        toda_yamamoto_granger(&data, p, settings.granger_dmax, label, DV_NAME)?,
        toda_yamamoto_granger(&data, p, settings.granger_dmax, DV_NAME, label)?,
    ];
    let irf = irf_set(&model, IrfOptions { seed, ..settings.irf })?;
    let johansen = johansen_trace(&data, p)?;
    let ljung_box = ljung_box_residuals(&model, settings.ljung_box_lags, 0)?;
    Ok(TripleReport {
        key,
        seed,
        stationarity,
        data,
        lag,
        model,
        tables,
        granger,
        irf,
        johansen,
        ljung_box,
    })
}

/// Inputs shared by every triple, loaded from the paths of a config.
#[derive(Debug, Clone)]
pub struct WorkflowInputs {
    pub topic_counts: TopicCounts,
    /// Sliced to the study window, in config order.
    pub indicators: Vec<(IndicatorConfig, TimeSeries)>,
    pub dummies: Vec<TimeSeries>,
}

/// Load posts, labels, lexicon and indicators and build the monthly series.
/// Posts from pages outside the config are ignored.
pub fn load_inputs(config: &RunConfig) -> Result<WorkflowInputs> {
    let mut posts = load_posts(
        &config.posts,
        &PostFilter {
            pages: None,
            window: Some(config.window),
        },
    )?;
    let pages: BTreeSet<&str> = config.pages.iter().map(String::as_str).collect();
    posts.retain(|p| pages.contains(p.page.as_str()));
    let seen: BTreeSet<&str> = posts.iter().map(|p| p.page.as_str()).collect();
    if let Some(missing) = config.pages.iter().find(|p| !seen.contains(p.as_str())) {
        return Err(Error::Config(format!("page `{missing}` has no posts")));
    }
    if let Some(path) = &config.labels {
        apply_labels(&mut posts, &load_labels(path)?);
    }
    if let Some(path) = &config.lexicon {
        posts = lexicon_filter(&posts, &Lexicon::load(path)?)?;
    }
    let topic_counts = aggregate_grid(&posts, &config.window, &config.pages, &config.topics)?;

    let indicators = config
        .indicators
        .iter()
        .map(|ic| {
            let ts = load_indicator(&ic.path, &ic.label, ic.kind)?;
            let sliced = ts.slice(config.window.first(), config.window.last()).map_err(|_| {
                Error::Config(format!(
                    "indicator `{}` covers {}..{}, not the study window {}..{}",
                    ic.key,
                    ts.start(),
                    ts.end(),
                    config.window.first(),
                    config.window.last()
                ))
            })?;
            if sliced.len() != config.window.len() {
                return Err(Error::Config(format!("indicator `{}` does not cover the study window", ic.key)));
            }
            Ok((ic.clone(), sliced))
        })
        .collect::<Result<Vec<_>>>()?;
    let dummies = config
        .interruptions
        .iter()
        .map(|spec| build_interruption(&config.window, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(WorkflowInputs {
        topic_counts,
        indicators,
        dummies,
    })
}

/// Analyze every configured triple. Load failures are returned as errors;
/// failures inside a triple are recorded in its outcome.
pub fn run_workflow(config: &RunConfig) -> Result<ReportBundle> {
    let inputs = load_inputs(config)?;
    Ok(run_with_inputs(config, inputs))
}

pub fn run_with_inputs(config: &RunConfig, inputs: WorkflowInputs) -> ReportBundle {
    let mut jobs = Vec::new();
    for page in &config.pages {
        for topic in &config.topics {
            for (ic, series) in &inputs.indicators {
                jobs.push((page, topic, ic, series));
            }
        }
    }
    let triples = jobs
        .into_par_iter()
        .map(|(page, topic, ic, series)| {
            let key = TripleKey {
                page: page.clone(),
                topic: topic.clone(),
                indicator: ic.key.clone(),
                indicator_label: ic.label.clone(),
            };
            let seed = triple_seed(config.seed, page, topic, &ic.key);
            let dv = &inputs.topic_counts[&(page.clone(), topic.clone())];
            let result = analyze_triple(key.clone(), dv, series, &inputs.dummies, &config.settings, seed)
                .map(Box::new)
                .map_err(|e| e.to_string());
            TripleOutcome { key, result }
        })
        .collect();
    ReportBundle {
        manifest: config.to_manifest(),
        triples,
        topic_counts: inputs.topic_counts,
    }
}
