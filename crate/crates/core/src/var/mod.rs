//! Vector autoregression: panel construction, OLS estimation, Schwarz lag
//! selection, publication-style coefficient tables and a seeded simulator
//! used as a test oracle.

mod dataset;
mod lag;
mod model;
mod simulate;
mod table;

pub use dataset::PanelDataset;
pub use lag::{select_lag, InfoCriterion, LagSelection};
pub use model::{fit_var, VarModel};
pub use simulate::{simulate_var, StepDummy, VarDesign, BURN_IN};
pub use table::{coefficient_table, CoefficientCell, CoefficientRow, CoefficientTable, Stars};
