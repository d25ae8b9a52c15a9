//! Combinatorial models of normal crossings pairs and simplicial log pairs.

mod nc;
mod simplicial;
mod snc;

pub use nc::{
    is_simple, normalize_stratum, strictification, strictify, BlowupLog, BlowupStep, Branch,
    Breakdown, Crossing, NcComplex, NcStratum, Strictification,
};
pub use simplicial::{
    canonical_root_pair, fixed_locus_index, FixedComponent, FixedLocusData, SimplicialChart,
    MAX_GROUP_ORDER,
};
pub use snc::{SncComplex, StratumMeta};

use crate::monoid::MonoidError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("inconsistent incidence data: {0}")]
    InconsistentIncidence(String),
    #[error("unknown component {0:?}")]
    UnknownComponent(String),
    #[error("component {0:?} listed twice")]
    DuplicateComponent(String),
    #[error("crossing {index}: {reason}")]
    InvalidCrossing { index: usize, reason: String },
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("the complex has a non-simple crossing")]
    NotSimple,
    #[error("unknown stratum {0}")]
    UnknownStratum(String),
    #[error("unsupported group action: {0}")]
    UnsupportedAction(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
}
