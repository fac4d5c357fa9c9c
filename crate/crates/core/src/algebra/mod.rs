//! Complex linear algebra and Hadamard matrices.

mod binary;
mod hadamard;
mod matrix;
pub mod source;

pub use binary::{bit_dot, BinaryTriple};
pub use hadamard::{
    dephase, fourier_matrix, is_hadamard, sylvester_hadamard, HadamardMatrix, HadamardReport,
    DEFAULT_TOL, MAX_SYLVESTER_EXPONENT,
};
pub use matrix::{inner, norm_sqr, normalized, projector_distance, ComplexMatrix, C64, ONE, ZERO};
