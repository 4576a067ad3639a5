//! Exact intersection-theory bookkeeping for curve configurations on
//! algebraic surfaces.
//!
//! The crate models configurations of irreducible curves as weighted dual
//! graphs ([`dualgraph`]), performs blow-ups, blow-downs and chain
//! contractions with exact maintenance of K^2, the Picard number and the
//! Euler number ([`birational`]), resolves cyclic quotient singularities by
//! Hirzebruch-Jung continued fractions with exact discrepancies
//! ([`cyclic_sing`]), builds branched double covers fiber by fiber with K3
//! certificates ([`double_cover`]), tabulates Kodaira fibers and admissible
//! configurations of rational elliptic fibrations ([`fibration`]), and ships
//! a registry of scripted verification scenarios ([`scenarios`]).
//!
//! All arithmetic is exact: integers, i128 fraction-free elimination, and
//! rational numbers. No floating point anywhere.

pub mod birational;
pub mod cyclic_sing;
pub mod double_cover;
pub mod dualgraph;
pub mod emit;
pub mod error;
pub mod fibration;
pub mod scenarios;

pub use dualgraph::{
    dynkin_type, intersection_matrix, kodaira_type, Config, ConfigBuilder, CurveId, CurveNode,
    DynkinType, Edge, InvariantLedger, KodairaType, MarkedPoint, PointBranch, PointId, SigmaMark,
};
pub use error::{K3Error, Result};
