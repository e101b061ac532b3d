//! Experiment driver: seeded suites, CSV records and Markdown tables.

mod pipeline;
mod record;
mod report;
mod suite;

pub use pipeline::{validate_pipeline, validation_instance, PipelineCheck, PipelineReport};
pub use record::{
    format_g6, BenchRecord, Method, RecordError, RunStatus, CSV_HEADER, RUNTIME_COLUMNS,
};
pub use report::{improvement_percent, markdown_report, median, read_csv, write_csv, ReportError};
pub use suite::{methods_for, parse_seeds, run_method, run_suite, SuiteBudgets, SuiteOptions};
