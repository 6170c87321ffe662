//! Exact computation of F_p-integrals of multivariate polynomials, the
//! F_p-Selberg integral and its closed forms, the Z[x,y] summation identity
//! behind the decoupled Selberg sum, and polynomial solutions of the sl_2
//! KZ equations reduced mod p.

pub mod cli;
pub mod closedform;
pub mod error;
pub mod fpintegral;
pub mod kz;
pub mod modarith;
pub mod polyring;
pub mod zidentity;

pub use error::{Error, Result};
pub use fpintegral::{Cycle, SelbergParams};
pub use modarith::{FpElement, PrimeField};
pub use polyring::{FpPoly, IntegerRing, LaurentPoly, MultiPoly, Ring, ZPoly};
