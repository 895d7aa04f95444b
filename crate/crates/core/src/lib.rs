//! Exact intrinsic MacWilliams transforms, projector and twirl enumerators,
//! and LP/SDP feasibility bounds for quantum codes living inside group
//! representations.

pub mod enumerators;
pub mod cache;
pub mod codes;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod macwilliams;
pub mod rep;
pub mod scalar;
pub mod reproduce;
pub mod sdp;

pub use error::{Error, Result};
pub use linalg::{hs_inner, invert, rref_kernel, Matrix, RadicalMatrix, RationalMatrix};
pub use rep::{
    adjoint_depth, build_irrep_by_highest_weight, conjugation_sectors, su2_irrep, sym_power_rep,
    tensor_decompose, Decomposition, IrrepLabel, Rep, RepSpec, Sector, SparseOp,
};
pub use scalar::{rat, Radical, Rational, Scalar};
pub use codes::CodeSpec;
pub use enumerators::{CodeProjector, EnumeratorData, SectorEnumerator};
pub use lp::{LpProblem, LpResult, Verdict};
pub use macwilliams::{BlockMacWilliams, MacWilliamsMatrix};
pub use sdp::{DetectionMode, SdpProblem, SdpResult, SdpVerdict};
