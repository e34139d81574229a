//! Burnside process on complete flags over a prime field.
//!
//! The state space is the set of complete flags in F_q^n, acted on by the
//! upper triangular unipotent group. One step of the process picks a uniform
//! element of the stabilizer of the current flag, then a uniform flag fixed
//! by that element. The crate provides the sampler, exact transition kernels
//! for small cases, Green polynomial fixed point counts, RSK machinery for
//! the lumped walk on permutations, and statistical checks tying them
//! together.

pub mod acceptance;
pub mod error;
pub mod exec;
pub mod field;
pub mod flag;
pub mod green;
pub mod jordan;
pub mod matrix;
pub mod oracle;
pub mod partitions;
pub mod perm;
pub mod rsk;
pub mod sampler;
pub mod stats;
pub mod tableau;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use flag::CanonicalFlag;
pub use green::{green_polynomial, GreenTable, IntPolynomial};
pub use jordan::{jordan_data, jordan_matrix, jordan_type_of, JordanData};
pub use matrix::MatFq;
pub use partitions::Partition;
pub use perm::Permutation;
pub use sampler::{
    estimate_cell_size, run_chain, run_chains, CellEstimate, ChainConfig, StartState,
    StepSampler, Trajectory,
};
pub use tableau::Tableau;
