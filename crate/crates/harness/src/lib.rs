//! Experiment harness: probing, learning curves and generalization matrices
//! over models reached through a file-based adapter protocol.

pub mod adapter;
pub mod builtin;
pub mod curve;
pub mod error;
pub mod metrics;
pub mod probing;
pub mod protocol;
pub mod report;

pub use adapter::{Adapter, AdapterSpec, SubprocessAdapter};
pub use builtin::{Builtin, BuiltinAdapter};
pub use curve::{
    run_generalization_matrix, run_learning_curve, run_learning_curve_with, Condition, CurveRow, EvalSet, ExperimentConfig,
    LearningCurve,
};
pub use error::{Error, ErrorKind, Result};
pub use metrics::{score, SliceAccuracy};
pub use probing::{run_probing, ProbingReport};

pub use report::{emit_report, ReportFormat};
