//! Helstrom-centroid classification in linear time.
//!
//! The Helstrom quantum centroid (HQC) classifier scores a test state `|c⟩`
//! against two class centroids built from `k` tensor copies of every training
//! state. Evaluated directly this needs `d^k`-sized matrices and a full
//! eigendecomposition. This crate scores the same quantities from pairwise
//! overlaps `|⟨x|y⟩|` only:
//!
//! * [`classifier`] holds the fast path: an [`OverlapCache`] built once per
//!   train/test split, the fidelity (FID) score and the pairwise-rescaled
//!   HQCS score, both valid for any real `k > 0`.
//! * [`oracle`] rebuilds the centroids with explicit Kronecker powers and a
//!   dense symmetric eigensolver, for cross-checking at small sizes.
//! * [`eval`] runs stratified cross-validation, F1 scoring and `k` sweeps.
//! * [`difficulty`] types every point as safe, borderline, rare or outlier
//!   from its five HVDM nearest neighbours.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel drivers live in the `hqcs` crate.
#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod classifier;
pub mod difficulty;
pub mod encoding;
mod error;
pub mod eval;
pub(crate) mod math;
pub mod oracle;

pub use classifier::{ClassifierId, HqcsWeights, OverlapCache, ScoreReport};
pub use encoding::{amplitude_encode, overlap, BinaryDataset, CopyCount, EncodedSample, Label, RawSample};
pub use error::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;
