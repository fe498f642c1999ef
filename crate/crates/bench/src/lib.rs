//! Reproducible experiment sweeps over routing instances: instance
//! generation, training runs, angle transfer and summary reports.

pub mod config;
pub mod error;
pub mod generate;
pub mod record;
pub mod report;
pub mod run;
pub mod transfer;

pub use config::{parse_p_range, Algorithm, ExperimentConfig};
pub use error::{BenchError, Result};
pub use generate::{cmd_generate, GenerateConfig, GenerateOutcome};
pub use record::{ExperimentRecord, TransferRecord};
pub use report::{cmd_report, GroupSummary, ReportOutcome};
pub use run::{cmd_run, vehicle_decomposition, RunOutcome};
pub use transfer::{cmd_transfer, TransferOutcome, TransferSummary};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const CONFIG: u8 = 1;
    pub const PARTIAL: u8 = 2;
}
