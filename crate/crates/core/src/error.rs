use thiserror::Error;

use crate::cyclotomic::CycloError;
use crate::gf::GfError;
use crate::triangular::TriError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Matrix(#[from] TriError),
    #[error(transparent)]
    Cyclotomic(#[from] CycloError),
    #[error("invalid group spec: {0}")]
    Spec(String),
    #[error("size guard exceeded: {0} (rerun with --force to override)")]
    Guard(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
