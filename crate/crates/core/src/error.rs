//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("orbital index out of range: {0}")]
    Index(String),
    #[error("inconsistent duplicate integral entry: {0}")]
    Consistency(String),
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("symmetry violation: {0}")]
    Symmetry(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("numerical drift: {0}")]
    Numerics(String),
    #[error("state preparation failure: {0}")]
    Preparation(String),
    #[error("degenerate ground state: {0}")]
    Degeneracy(String),
    #[error("encoding violation: {0}")]
    Encoding(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
