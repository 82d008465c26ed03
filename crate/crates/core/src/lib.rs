//! Local Heun, Gauss 2F1 and 3F2 series together with executable catalogs of
//! their transformation identities.
//!
//! Every transformation is represented as a value that can be applied
//! numerically, so identities are checked by evaluating both sides at points
//! inside their joint disks of convergence.

pub mod error;
pub mod gauss;
pub mod heun;
pub mod hyper3f2;
pub mod numeric;
pub mod poly;
pub mod psymbol;
pub mod quadratic;
pub mod reduction;
pub mod scalar;
pub mod signed_perm;

pub use error::{HeunError, Result};
pub use numeric::*;
pub use scalar::C64;
