//! SIC-POVMs built from complex Hadamard matrices, with the tools to
//! certify their minimum measurement entropy and informational power.
//!
//! The centre of the crate is the dimension-8 Hoggar SIC-POVM obtained
//! from the Sylvester matrix with `v = -1 ± 2i`. Alongside construction it
//! provides:
//!
//! - [`infotheory`]: outcome statistics, Shannon entropy, mutual
//!   information and the closed-form SIC bounds;
//! - [`optimize`]: independent numerical certification by manifold
//!   descent and Blahut-Arimoto alternation;
//! - [`designs`]: frame potentials and the zero-block symmetric design;
//! - [`bloch`]: generalized Bloch vectors, simplices and the transpose
//!   reflection that relates twin families;
//! - [`checks`]: a registry of named verification checks.

pub mod algebra;
pub mod bloch;
pub mod checks;
pub mod designs;
pub mod error;
pub mod infotheory;
pub mod io;
pub mod optimize;
pub mod povm;
pub mod sic;

pub use error::{Error, Result};
