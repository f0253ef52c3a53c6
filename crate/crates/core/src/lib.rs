//! Construction, certification and analysis of bidouble covers of
//! `Q = P1 x P1` branched on curves of bidegrees `(2,3), (2,3), (4,1)`:
//! canonical surfaces with `K^2 = 24`, `p_g = 6`, `q = 0` embedded in `P5`.
//!
//! The polynomial and linear-algebra layers are generic over the scalar type;
//! the aliases below fix the instantiations used throughout.

pub mod bipoly;
pub mod branch;
pub mod canring;
pub mod cover;
pub mod elim;
mod error;
pub mod linalg;
pub mod scalar;

pub use bipoly::{dim_v, random_bipoly, BiDegree, BiPoly, QPoint, Var};
pub use elim::{QuadraticInU, UniPoly};
pub use error::{Error, Result};
pub use scalar::Fp;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Bihomogeneous form with exact rational coefficients.
pub type QBiPoly = BiPoly<Rational>;
/// Binary form with exact rational coefficients.
pub type QUniPoly = UniPoly<Rational>;
/// Bihomogeneous form over the prime field of the smoothness scan.
pub type FpBiPoly = BiPoly<Fp<{ scalar::SCAN_PRIME }>>;
/// Bihomogeneous form with complex double coefficients, for the cover model.
pub type CBiPoly = BiPoly<num_complex::Complex64>;

/// Schema tag carried by every JSON artifact.
pub const FORMAT_TAG: &str = "canonical24/v1";

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
