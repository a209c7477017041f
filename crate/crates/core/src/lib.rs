//! Exact verification engine for heterotic G2 systems on
//! 3-(alpha,delta)-Sasaki and (alpha,delta)-Sasaki 7-manifolds.

pub mod bianchi;
pub mod curvature;
pub mod exterior;
pub mod heisenberg;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod spinor;
pub mod structures;

pub use exterior::{EndForm, Form};
pub use scalar::{LaurentOrder, Quad, Scalar, Sym, SymbolTable};
