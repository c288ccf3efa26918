//! Exact and floating-point machinery for ergodic averages over countable
//! abelian groups.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! * [`group`]: abelian groups with a canonical coordinate representation,
//!   Følner families, characters, finite fields and self-maps `a: G -> G`;
//! * [`systems`]: desk-scale measure-preserving actions (finite permutation
//!   systems, torus rotations, Bernoulli shifts) and their observables;
//! * [`averaging`]: Følner averages of vector-valued sequences, correlation
//!   profiles, tail suprema and finite-stage sequence inner products;
//! * [`vdc`]: van der Corput criterion checks with three-valued verdicts;
//! * [`spectral`]: Fejér densities, Wiener atom masses and exact spectral
//!   masses on finite dual quotients.
//!
//! Values that can be computed exactly are: cyclotomic character sums
//! ([`CyclotomicValue`]) and the symbolic [`Scalar`] type (rational
//! combinations of unit phasors). Everything else runs in `f64` with
//! compensated, fixed-order summation so results are bit-reproducible.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod angle;
pub mod averaging;
pub mod cyclotomic;
mod error;
pub mod group;
pub mod rational;
pub mod scalar;
pub mod spectral;
pub mod systems;
mod text;
pub mod vdc;

pub use angle::{Angle, IrrationalTag};
pub use cyclotomic::CyclotomicValue;
pub use error::{Error, Result};
pub use rational::Rational;
pub use scalar::{Coefficient, Scalar};

/// Default cap on `|F_N|` for any enumeration.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
