//! Dieudonné modules of Suzuki curves in characteristic 2.
//!
//! The crate builds explicit bases for the de Rham cohomology of the curve
//! `z^q + z = y^q0 (y^q + y)` over `F_q`, `q0 = 2^m`, `q = 2 q0^2`, computes
//! the Frobenius `F`, Verschiebung `V` and automorphism `tau` on it, and
//! decomposes the resulting mod-2 Dieudonné module into words.

pub mod error;
pub mod gf2m;
pub mod linalg;
pub mod cohomology;
pub mod suzuki_ff;
pub mod dieudonne;
pub mod known_results;
pub mod rep_theory;

pub use error::{Error, Result};
pub use dieudonne::{Decomposition, EModule, EoType, Word};
pub use gf2m::{FieldElem, FieldParams};
pub use linalg::{Matrix, SemilinearOp, Subspace};
pub use suzuki_ff::{ConeFunc, ConeMono, Curve, CurveParams, RawFunc};
