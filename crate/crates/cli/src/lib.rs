//! Reproducible experiment runner over `qchardy-core`: one named experiment per result, each
//! producing a table of (quantity, value, error, classification) rows.

mod error;
mod experiments;
mod report;
mod spec;

pub use error::{CliError, Result};
pub use experiments::{run, AF_SAMPLES, APERTURE_RAYS, LIPSCHITZ_DEPTH, ORACLE_TOLERANCE, STABILITY_TOLERANCE, THM2_BOUNDARY_ORACLE};
pub use report::{emit, ExperimentReport, Format, Metadata, Row, RowClass};
pub use spec::{Experiment, ExperimentSpec};
