//! Growth models of finite posets and their coproduct structure.
//!
//! Posets are handled up to isomorphism through canonical labellings. Linear
//! combinations of posets carry exact polynomial coefficients, which lets a
//! growth model be run with symbolic couplings and its generators tested for
//! closure under the coproduct that splits a poset into an up-set and the
//! complementary down-set.

pub mod algebra;
pub mod counting;
pub mod error;
pub mod growth;
pub mod hopf;
pub mod poset;
pub mod subhopf;

pub use algebra::{Scalar, ScalarRatio, Var};
pub use error::{Error, Result};
pub use poset::{LabelledPoset, Poset};
