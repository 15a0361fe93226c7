//! Coxeter systems of finite and affine Weyl groups.
//!
//! Generator indexing: internal indices run `0..rank`. Words on the wire use
//! labels `index + first_generator()`, i.e. Bourbaki labels `1..=n` for a
//! finite type and `0..=n` (with `0` the affine node) for an affine type.

pub mod cartan;
pub mod parabolic;
mod system;

pub use cartan::{CoxeterDescriptor, Family};
pub use parabolic::{coset_partition, CosetSide, ParabolicData};
pub use system::{CoxeterSystem, Element, OrderIdeal, Side};
