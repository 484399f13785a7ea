//! Exact generating functions for invariants of moduli spaces of semistable
//! sheaves of rank 1, 2 and 3 on the blown-up projective plane and on `P^2`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact: q-series live
//! on the fixed exponent lattice `(1/24)Z`, coefficients are arbitrary precision
//! rationals or rational functions in the auxiliary variable `w`.
//!
//! Layout, bottom up:
//!
//! - [`rational`], [`laurent`], [`wrational`]: coefficient rings.
//! - [`series`]: truncated Puiseux series over any [`series::Coefficient`].
//! - [`modular`]: eta, theta functions, Hurwitz class numbers, the Appell-type
//!   functions `g0`, `g1` and the blow-up factors.
//! - [`geometry`]: intersection theory, Chern data, walls.
//! - [`wallcross`]: the rank 1, 2, 3 generating functions on the ruled surface.
//! - [`blowup`]: transfer between the ruled surface and `P^2`.
//! - [`invariants`]: integer invariants, Poincare polynomials, Betti tables.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod blowup;
pub mod geometry;
pub mod invariants;
pub mod laurent;
pub mod modular;
mod poly;
pub mod rational;
pub mod series;
pub mod wallcross;
pub mod wrational;

pub use geometry::{ChernData, DivisorClass, Polarization, Surface};
pub use laurent::WLaurent;
pub use rational::Rational;
pub use series::{Coefficient, PuiseuxSeries, QExponent};
pub use wallcross::{Flavor, InvariantSeries, Refined, Unrefined, WallCrossing};
pub use wrational::WRational;
