//! Numerical laboratory for strictly ergodic dynamical systems.
//!
//! The crate is organised around the objects that appear when one studies
//! extensions of a strictly ergodic base `(Z, S)`:
//!
//! * [`base`]: exact circle rotations (128-bit fixed point), continued
//!   fractions, Kakutani–Rokhlin towers, Sturmian and Thue–Morse codings.
//! * [`metrics`]: finite-horizon Besicovitch / Weyl pseudometric estimators,
//!   the mean-equicontinuity modulus, Banach visit densities and fiber
//!   diameter profiles.
//! * [`skew`]: fiber homeomorphisms (piecewise-linear circle maps, the
//!   projective action of `SL(2,R)`), cocycles, skew and relative products.
//! * [`coboundary`]: homeomorphism families spreading an open arc, the
//!   continuous path built from them, the tower-averaged parameter map and
//!   the certified coboundary builder.
//! * [`ergodicity`]: Birkhoff averages, unique-ergodicity gap statistics and
//!   the relative-product isomorphic-extension test.
//! * [`lyapunov`]: exponents of `SL(2,R)` cocycles, invariant directions and
//!   the three-way classification of projective skew products.
//! * [`cli`]: the batch driver behind the `ergolab` binary.

pub mod base;
pub mod cli;
pub mod coboundary;
pub mod ergodicity;
pub mod error;
pub mod format;
pub mod lyapunov;
pub mod metrics;
pub mod rng;
pub mod skew;
pub mod system;

pub use error::{Error, Result};
