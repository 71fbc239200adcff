//! File formats, sampling and experiment drivers.

pub mod barcode;
pub mod experiment;
pub mod formats;
pub mod sampling;
pub mod verify;
pub mod witness;

pub use barcode::{barcode_distances, barcode_embedding, BarcodeEmbedding};
pub use experiment::{
    evaluate_pair, run_distortion_experiment, DistortionSummary, ExperimentConfig,
    ExperimentReport, PairContext, PairEvaluation,
};
pub use formats::{fmt_f64, load_domain, parse_barcode_csv, BarcodeDiagram, TupleFile};
pub use verify::{run_all, SuiteReport, SuiteSizes, VerifyConfig};
pub use witness::nondoubling_witness;
