//! Crate-wide error type aggregating the per-module errors.

use thiserror::Error;

use crate::bhk::BhkError;
use crate::dbscan::ScanError;
use crate::exactlin::LinAlgError;
use crate::examples::ExampleError;
use crate::oracle::OracleError;
use crate::potential::PotentialError;
use crate::quasismooth::QsError;

/// Any error produced by this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Bhk(#[from] BhkError),
    #[error(transparent)]
    Quasismooth(#[from] QsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Example(#[from] ExampleError),
    #[error(transparent)]
    Scan(#[from] ScanError),
}
