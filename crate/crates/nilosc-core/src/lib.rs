//! High-precision arithmetic on nilmanifolds and oscillation diagnostics for
//! the sequences they generate.
//!
//! The crate is organized around five layers:
//!
//! * [`numeric`] — arbitrary-precision fixed-point reals ([`numeric::PreciseReal`])
//!   and circle points ([`numeric::CirclePoint`]) with certified error radii, so
//!   that floor/fractional-part decisions in nilsystem formulas are unambiguous
//!   at orbit lengths up to ~10⁶.
//! * [`heisenberg`] — exact arithmetic in the 3-dimensional Heisenberg group H
//!   and its (2m+1)-dimensional relatives H_m: group law, closed-form powers,
//!   fundamental-domain reduction, Mal'cev coordinates of the second kind, and
//!   the bracket sequence ω_n = nγ + C(n,2)B(α,β) − B(nα,[nβ]) mod 1.
//! * [`extension`] — abelian tower extensions S(x,z₁,…,z_p) = (Tx, γ(x)z₁,
//!   z₁z₂, …, z_{p−1}z_p) over any base system, with a one-shot closed form for
//!   Sⁿ built from exact binomial exponents.
//! * [`polyseq`] — generators for polynomial phase sequences, generalized
//!   (bracket) polynomial sequences, quasi-eigenfunction orbits, and affine
//!   unipotent torus realizations of polynomial phases.
//! * [`oscillation`] — Weyl averages, certified suprema over polynomial phase
//!   families, the Van der Corput inequality, second-order Cesàro means, and
//!   decay-rate fits.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so orbit batches and grid sweeps can be partitioned across
//! workers freely. The crate is `no_std`-compatible (requires `alloc`); the
//! default `std` feature additionally enables a parallel grid sweep.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod extension;
pub mod heisenberg;
pub mod numeric;
pub mod oscillation;
pub mod polyseq;
pub mod rng;

mod fft;

pub use numeric::{CirclePoint, NumericError, PreciseReal, UnitComplex};
