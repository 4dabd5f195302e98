//! End-to-end workflow over (page, topic, indicator) triples and report
//! emission.

mod config;
mod emit;
mod table;
mod workflow;

pub use config::{AnalysisSettings, IndicatorConfig, OutputFormat, RunConfig};
pub use emit::{bundle_tables, emit_tables, irf_file_name, irf_table, slug};
pub use table::{num, Table};
pub use workflow::{
    analyze_triple, load_inputs, run_with_inputs, run_workflow, triple_seed, ReportBundle, TripleKey,
    TripleOutcome, TripleReport, WorkflowInputs, DV_NAME,
};
