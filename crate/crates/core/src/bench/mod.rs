//! Sub-sampling experiment harness and the synthetic welding corpus.

mod config;
mod experiment;
mod intents;
mod report;
mod sample;
mod synth;

use thiserror::Error;

pub use config::ExperimentConfig;
pub use experiment::{run_experiment, ExperimentReport, RawRow, SummaryRow};
pub use intents::generate_intents;
pub use report::render_report;
pub use sample::subsample_attributes;
pub use synth::{generate_synthetic, SynthConfig, SyntheticCorpus, WELDING_NS};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot sample {requested} attributes from {available}")]
    SampleTooLarge { requested: usize, available: usize },
    #[error("writing report: {0}")]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests;
