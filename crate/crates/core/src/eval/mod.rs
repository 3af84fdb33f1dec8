//! Metrics, cross-validation and the end-to-end benchmark.

mod benchmark;
mod cv;
mod metrics;

pub use benchmark::{run_benchmark, BenchmarkConfig, BenchmarkReport, DlRow, MlRow, NeuralTrackConfig};
pub use cv::{aggregate, cross_validate, cross_validate_folds, Classifier, CvResult, Estimator, MetricSummary};
pub use metrics::{confusion, metrics, ConfusionMatrix, MetricsReport, Objective};
