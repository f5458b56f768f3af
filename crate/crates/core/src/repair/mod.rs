//! Constructive repairs: lifting two-player SNOS correlations to NS,
//! maximal couplings, multi-marginal and SNOS reconstruction, and the
//! projection onto NS.
//!
//! Everything is exact.

mod bump;
mod coupling;
mod project;
mod reconstruct;

pub use bump::bump_up;
pub use coupling::{coupling_adjust, maximal_coupling};
pub use project::nearest_ns;
pub use reconstruct::{
    reconstruct_multi_marginal, reconstruct_snos, LocalMarginal, Reconstruction, ReconstructionProblem,
    SnosCertificate,
};
