//! Group embeddings of finite abelian groups into `Z^n` under the Lee metric,
//! and the linear perfect / quasi-perfect Lee codes they induce.
//!
//! The crate is organised bottom-up:
//!
//! * [`lee`]: words, Lee distance, spheres and the `f(n, k)` lower bound.
//! * [`group`]: finite abelian groups in invariant-factor form.
//! * [`embedding`]: homomorphisms `Z^n -> G`, distance profiles, embedding
//!   numbers and the optimality test.
//! * [`planar`]: the explicit optimal embedding of every `Z_k` into `Z^2`.
//! * [`plsearch`]: backtracking search for linear `PL(n, 2)` codes.
//! * [`qpl`]: quasi-perfect codes in `Z^3`, syndrome decoding, tiling checks.
//! * [`volume`]: exact-rational packing bounds.
//! * [`render`]: SVG rendering of planar homomorphisms.

pub mod embedding;
pub mod error;
pub mod group;
pub mod lee;
pub mod planar;
pub mod plsearch;
pub mod qpl;
pub mod render;
pub mod volume;

pub use embedding::{DistanceProfile, EmbeddingNumber, Homomorphism};
pub use error::{Error, Result};
pub use group::{AbelianGroup, GroupElement};
pub use lee::Word;
