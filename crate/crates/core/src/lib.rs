//! Hamming deviation of rational relations given by non-deterministic finite transducers.
//!
//! The deviation of a transducer is the supremum of the Hamming distances between the input
//! and output words it relates. [`deviation::analyze_deviation`] computes it exactly;
//! [`witness`] holds bounded witness searches that certify the same answers, [`gadgets`]
//! generates hard instances with known answers and [`oracle`] evaluates everything by brute
//! force.

pub mod corpus;
pub mod deviation;
pub mod error;
pub mod format;
pub mod gadgets;
pub mod nft;
pub mod normalize;
pub mod oracle;
pub mod reductions;
pub mod report;
pub mod scc;
pub mod shift;
pub mod witness;
pub mod word;

pub use deviation::{analyze_deviation, exact, is_bounded, threshold, Bounds, DeviationResult, Verdict, DEFAULT_MAX_CONFIGS};
pub use error::EngineError;
pub use format::{parse_nft, serialize_nft, FormatError};
pub use nft::{Nft, NftBuilder, Run, StateId, Transition};
pub use word::{ExtNat, Word};
