//! Exact computation of weight polynomials of indecomposable mixed tilting
//! sheaves on flag and affine flag varieties.
//!
//! The crate is layered:
//!
//! - [`coxeter`]: finite and affine Weyl groups as Coxeter systems with
//!   interned elements, Bruhat order and parabolic cosets.
//! - [`laurent`]: exact Laurent polynomials in `t` and the splitting rules.
//! - [`hecke`]: classes in the standard basis, the duality map,
//!   R-polynomials, the triangular self-dual solver and Kazhdan-Lusztig
//!   polynomials.
//! - [`tilting`]: the three weight computations (self-dual solve,
//!   pushforward to partial flags, inversion of the dual IC matrix) and the
//!   cross-validation reports.

pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod tilting;

pub use coxeter::{CoxeterDescriptor, CoxeterSystem, Element, OrderIdeal, ParabolicData, Side};
pub use error::{Error, Result};
pub use hecke::{Basis, Hecke, WeightVector};
pub use laurent::{LaurentPoly, SplitRule};
pub use tilting::{PushforwardResult, WeightMatrix};
