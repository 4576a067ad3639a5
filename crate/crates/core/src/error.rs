//! Error type shared by all modules.

use crate::dualgraph::{CurveId, PointId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum K3Error {
    #[error("unknown point `{0}`")]
    UnknownPoint(PointId),
    #[error("unknown curve `{0}`")]
    UnknownCurve(CurveId),
    #[error("non-positive contact or multiplicity data at point `{0}`")]
    NonPositiveContact(PointId),
    #[error("branch multiplicity {mult} at point `{point}` is unsupported (only 1 or 2)")]
    UnsupportedBranchMultiplicity { point: PointId, mult: u32 },
    #[error("curve `{0}` is not a contractible (-1)-curve: {1}")]
    NotContractible(CurveId, String),
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("matrix is singular")]
    Singular,
    #[error("configuration is not connected")]
    Disconnected,
    #[error("configuration is not negative definite")]
    NotNegativeDefinite,
    #[error("configuration is not log terminal: discrepancy {0} outside [0,1)")]
    NotLogTerminal(String),
    #[error("gcd({q},{q1}) != 1")]
    NonCoprime { q: i64, q1: i64 },
    #[error("invalid Brieskorn data q={q}, q1={q1} (need 1 <= q1 < q, q >= 2)")]
    InvalidBrieskorn { q: i64, q1: i64 },
    #[error("weight {0} <= 1 in a Hirzebruch-Jung chain")]
    WeightTooSmall(i64),
    #[error("chain is not linear: {0}")]
    ChainNotLinear(String),
    #[error("fiber does not match case {case}: {reason}")]
    ShapeMismatch { case: String, reason: String },
    #[error("invalid branch data: {0}")]
    InvalidBranch(String),
    #[error("curve `{0}` needs an explicit split/non-split annotation")]
    UnannotatedCurve(CurveId),
    #[error("cannot transport intersection `{a}`.`{b}` through the cover: {reason}")]
    UnsupportedTransport {
        a: CurveId,
        b: CurveId,
        reason: String,
    },
    #[error("two sigma-fixed curves `{0}` and `{1}` intersect")]
    FixedCurvesMeet(CurveId, CurveId),
    #[error("unknown Kodaira type `{0}`")]
    UnknownKodairaType(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("{0} is not a valid del Pezzo degree (need >= 1)")]
    NotDelPezzo(i64),
    #[error("n = {0} is out of range (need n >= 1)")]
    BadChainLength(u32),
    #[error("arithmetic overflow in exact computation")]
    Overflow,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, K3Error>;
