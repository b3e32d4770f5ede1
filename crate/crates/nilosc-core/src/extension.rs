//! Abelian tower extensions S(x, z₁, …, z_p) = (Tx, γ(x)z₁, z₁z₂, …, z_{p−1}z_p)
//! on X×𝕊ᵖ over a base system supplied as an orbit oracle.
//!
//! The twisting function is γ = λ·γ̃ for an eigenfunction γ̃ of the base (with
//! eigenvalue argument ξ) and a twist parameter λ ∈ 𝕊. λ is chosen
//! pseudo-randomly from a seed ([`choose_lambda`]): the set of λ for which the
//! construction degenerates is countable, so a generic choice works, and a
//! seeded generator keeps runs reproducible. No cocycle-equation solvability
//! test is attempted.
//!
//! Powers of S admit the closed form
//! Z_j = ξ^C(n,j+1) · γ(x)^C(n,j) · z₁^C(n,j−1) ⋯ z_{j−1}^C(n,1) · z_j,
//! proved by induction with the Pascal rule; [`closed_form_exponents`] exposes
//! the exact integer exponents so they can be checked symbolically. Because
//! the closed form is one-shot per n, orbit batches over disjoint n-ranges
//! can run concurrently.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;

use crate::numeric::{binomial, precision_bits, unit_exp, CirclePoint, NumericError};
use crate::rng::SplitMix64;

/// A base system (X, T) together with a continuous eigenfunction pair:
/// an eigenvalue argument ξ and a phase function x ↦ arg γ̃(x) satisfying
/// arg γ̃(Tx) − arg γ̃(x) ≡ ξ (mod 1).
pub trait BaseSystem {
    type Point: Clone;

    /// Tⁿx.
    fn orbit(&self, x: &Self::Point, n: u64) -> Result<Self::Point, NumericError>;

    /// ξ, the eigenvalue argument of the supplied eigenfunction.
    fn eigenvalue_phase(&self) -> CirclePoint;

    /// arg γ̃(x) ∈ [0,1).
    fn eigenfunction_phase(&self, x: &Self::Point) -> CirclePoint;
}

/// Rotation x ↦ x + ρ on the circle, with eigenfunction x ↦ e^{2πix}
/// (eigenvalue argument ρ).
#[derive(Debug, Clone)]
pub struct CircleRotation {
    rho: CirclePoint,
}

impl CircleRotation {
    pub fn new(rho: CirclePoint) -> Self {
        Self { rho }
    }

    pub fn rho(&self) -> &CirclePoint {
        &self.rho
    }
}

impl BaseSystem for CircleRotation {
    type Point = CirclePoint;

    fn orbit(&self, x: &CirclePoint, n: u64) -> Result<CirclePoint, NumericError> {
        Ok(x.add(&self.rho.scale_u64(n)?))
    }

    fn eigenvalue_phase(&self) -> CirclePoint {
        self.rho.clone()
    }

    fn eigenfunction_phase(&self, x: &CirclePoint) -> CirclePoint {
        x.clone()
    }
}

/// Heisenberg translation T_g on H/Γ as a base system, with the eigenfunction
/// x ↦ e^{2πix₁} (eigenvalue argument {α₁}).
#[derive(Debug, Clone)]
pub struct HeisenbergBase {
    g: crate::heisenberg::HeisenbergElement,
}

impl HeisenbergBase {
    pub fn new(g: crate::heisenberg::HeisenbergElement) -> Self {
        Self { g }
    }
}

impl BaseSystem for HeisenbergBase {
    type Point = crate::heisenberg::FundamentalPoint;

    fn orbit(&self, x: &Self::Point, n: u64) -> Result<Self::Point, NumericError> {
        self.g.orbit_point(x, n).map_err(|e| match e {
            crate::heisenberg::HeisenbergError::Numeric(n) => n,
            crate::heisenberg::HeisenbergError::DimensionMismatch => NumericError::PrecisionExhausted,
        })
    }

    fn eigenvalue_phase(&self) -> CirclePoint {
        self.g.a.frac_snapped()
    }

    fn eigenfunction_phase(&self, x: &Self::Point) -> CirclePoint {
        x.coords()[0].clone()
    }
}

/// A point (x, z₁,…,z_p) of X×𝕊ᵖ; the circle factors are stored as phases.
#[derive(Debug, Clone)]
pub struct ExtensionState<P> {
    pub base: P,
    pub z: Vec<CirclePoint>,
}

impl<P> ExtensionState<P> {
    pub fn new(base: P, z: Vec<CirclePoint>) -> Self {
        assert!(!z.is_empty(), "tower height p must be >= 1");
        Self { base, z }
    }

    pub fn p(&self) -> usize {
        self.z.len()
    }
}

/// Exact integer exponents of Z_j in the closed form for Sⁿ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormExponents {
    /// exponent of ξ: C(n, j+1)
    pub xi: BigInt,
    /// exponent of γ(x): C(n, j)
    pub gamma: BigInt,
    /// exponents of z₁..z_j: C(n, j−1), …, C(n, 1), C(n, 0)
    pub z: Vec<BigInt>,
}

/// The exponents appearing in Z_j (1-indexed j).
pub fn closed_form_exponents(n: u64, j: usize) -> ClosedFormExponents {
    ClosedFormExponents {
        xi: binomial(n, j as u32 + 1),
        gamma: binomial(n, j as u32),
        z: (1..=j).map(|i| binomial(n, (j - i) as u32)).collect(),
    }
}

/// The tower extension S with γ = λ·γ̃.
#[derive(Debug, Clone)]
pub struct TowerExtension<S: BaseSystem> {
    base: S,
    lambda: CirclePoint,
}

impl<S: BaseSystem> TowerExtension<S> {
    pub fn new(base: S, lambda: CirclePoint) -> Self {
        Self { base, lambda }
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    pub fn lambda(&self) -> &CirclePoint {
        &self.lambda
    }

    /// arg γ(x) = λ + arg γ̃(x) mod 1.
    pub fn gamma_phase(&self, x: &S::Point) -> CirclePoint {
        self.lambda.add(&self.base.eigenfunction_phase(x))
    }

    /// One application of S: (Tx, γ(x)z₁, z₁z₂, …, z_{p−1}z_p).
    pub fn step(&self, s: &ExtensionState<S::Point>) -> Result<ExtensionState<S::Point>, NumericError> {
        let p = s.p();
        let mut z = Vec::with_capacity(p);
        z.push(self.gamma_phase(&s.base).add(&s.z[0]));
        for j in 1..p {
            z.push(s.z[j - 1].add(&s.z[j]));
        }
        Ok(ExtensionState { base: self.base.orbit(&s.base, 1)?, z })
    }

    /// Sⁿ(s) in one shot via the binomial closed form; n = 0 returns s
    /// unchanged and n = 1 reproduces `step`.
    pub fn power_closed_form(
        &self,
        s: &ExtensionState<S::Point>,
        n: u64,
    ) -> Result<ExtensionState<S::Point>, NumericError> {
        let p = s.p();
        let xi = self.base.eigenvalue_phase();
        let gamma = self.gamma_phase(&s.base);
        let mut z = Vec::with_capacity(p);
        for j in 1..=p {
            let exps = closed_form_exponents(n, j);
            let mut phase = xi.scale_mod1(&exps.xi)?.add(&gamma.scale_mod1(&exps.gamma)?);
            for (zi, e) in s.z.iter().zip(&exps.z) {
                phase = phase.add(&zi.scale_mod1(e)?);
            }
            z.push(phase);
        }
        Ok(ExtensionState { base: self.base.orbit(&s.base, n)?, z })
    }

    /// The observable sequence F(Sⁿω) for n < len, evaluated through the
    /// closed form (no sequential dependency between the n's).
    pub fn observe<F>(
        &self,
        s: &ExtensionState<S::Point>,
        len: u64,
        f: F,
    ) -> Result<Vec<Complex64>, NumericError>
    where
        F: Fn(&S::Point, &[CirclePoint]) -> Complex64,
    {
        let mut out = Vec::with_capacity(len as usize);
        for n in 0..len {
            let state = self.power_closed_form(s, n)?;
            out.push(f(&state.base, &state.z));
        }
        Ok(out)
    }
}

/// The standard observable F(x, z₁,…,z_p) = f(x)·z_p with f given as a phase
/// function.
pub fn last_coordinate_observable<P>(
    f_phase: impl Fn(&P) -> CirclePoint,
) -> impl Fn(&P, &[CirclePoint]) -> Complex64 {
    move |x: &P, z: &[CirclePoint]| {
        unit_exp(&f_phase(x).add(z.last().expect("p >= 1"))).to_complex()
    }
}

/// A deterministic pseudo-random twist phase λ ∈ [0,1) at full precision.
///
/// The mantissa is assembled from consecutive SplitMix64 words of the seed,
/// so equal seeds give equal λ and the map seed ↦ λ is injective for
/// practical purposes (B ≥ 128 random bits).
pub fn choose_lambda(seed: u64) -> CirclePoint {
    let b = precision_bits();
    let mut rng = SplitMix64::new(seed);
    let words = b.div_ceil(64);
    let mut mantissa = BigUint::from(0u8);
    for _ in 0..words {
        mantissa = (mantissa << 64) | BigUint::from(rng.next_u64());
    }
    CirclePoint::from_fixed_point(&mantissa)
}
