//! Exact arithmetic in the 3-dimensional Heisenberg group H and its
//! (2m+1)-dimensional relatives H_m.
//!
//! H is ℝ³ with the product ⟨a,b,c⟩⟨x,y,z⟩ = ⟨a+x, b+y, c+z+ay⟩; H_m is
//! ℝ^m×ℝ^m×ℝ with the last coordinate twisted by the bilinear form
//! B(a,y) = Σᵢ aᵢyᵢ (H_1 = H). The integer lattice Γ is cocompact and
//! 𝓕 = [0,1)^{2m+1} is a fundamental domain of H_m/Γ: `reduce_fundamental`
//! computes the unique representative τ(x) = x·γ_x ∈ 𝓕 together with the
//! lattice element γ_x.
//!
//! Powers use the closed form gⁿ = ⟨nα, nβ, nγ + C(n,2)B(α,β)⟩ — O(1)
//! big-integer work per n with binomial coefficients computed exactly before
//! any fixed-point multiply — rather than iteration; the iterated path exists
//! only as a test oracle. Negative exponents are not provided: callers
//! needing them compose `inverse` with `power`.
//!
//! For H there is additionally the Mal'cev coordinate system of the second
//! kind, ⟨t₁,t₂,t₃⟩_II = ⟨t₁,t₂,t₃+t₁t₂⟩, with its own product, reduction
//! and closed-form orbit.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;


use crate::numeric::{binomial, CirclePoint, NumericError, PreciseReal};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeisenbergError {
    #[error("operands have different dimension m")]
    DimensionMismatch,
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Coordinate convention of a reduced point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    FirstKind,
    MalcevSecondKind,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::FirstKind => "first-kind",
            Convention::MalcevSecondKind => "malcev-2",
        }
    }
}

/// A point of the fundamental domain [0,1)^{2m+1}, tagged with the
/// coordinate convention it was produced in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalPoint {
    coords: Vec<CirclePoint>,
    convention: Convention,
}

impl FundamentalPoint {
    pub fn origin(dim: usize, convention: Convention) -> Self {
        Self { coords: vec![CirclePoint::zero(); dim], convention }
    }

    pub fn new(coords: Vec<CirclePoint>, convention: Convention) -> Self {
        Self { coords, convention }
    }

    pub fn coords(&self) -> &[CirclePoint] {
        &self.coords
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// ⟨a,b,c⟩ of H in first-kind coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergElement {
    pub a: PreciseReal,
    pub b: PreciseReal,
    pub c: PreciseReal,
}

impl HeisenbergElement {
    pub fn new(a: PreciseReal, b: PreciseReal, c: PreciseReal) -> Self {
        Self { a, b, c }
    }

    pub fn identity() -> Self {
        Self::new(PreciseReal::zero(), PreciseReal::zero(), PreciseReal::zero())
    }

    pub fn from_integers(a: &BigInt, b: &BigInt, c: &BigInt) -> Self {
        Self::new(
            PreciseReal::from_bigint(a),
            PreciseReal::from_bigint(b),
            PreciseReal::from_bigint(c),
        )
    }

    /// Group product ⟨a,b,c⟩⟨x,y,z⟩ = ⟨a+x, b+y, c+z+ay⟩.
    pub fn multiply(&self, other: &Self) -> Self {
        Self::new(
            self.a.add(&other.a),
            self.b.add(&other.b),
            self.c.add(&other.c).add(&self.a.mul(&other.b)),
        )
    }

    /// ⟨a,b,c⟩⁻¹ = ⟨−a, −b, ab−c⟩.
    pub fn inverse(&self) -> Self {
        Self::new(self.a.neg(), self.b.neg(), self.a.mul(&self.b).sub(&self.c))
    }

    /// gⁿ = ⟨nα₁, nα₂, nα₃ + C(n,2)α₁α₂⟩ in one shot.
    pub fn power(&self, n: u64) -> Self {
        let n_big = BigInt::from(n);
        let c2 = binomial(n, 2);
        let twist = self.a.mul(&self.b).mul_bigint(&c2).expect("binomial within guard budget");
        Self::new(
            self.a.mul_bigint(&n_big).expect("n within guard budget"),
            self.b.mul_bigint(&n_big).expect("n within guard budget"),
            self.c.mul_bigint(&n_big).expect("n within guard budget").add(&twist),
        )
    }

    /// τ(x) = ⟨{x₁}, {x₂}, {x₃ − x₁[x₂]}⟩ together with the unique lattice
    /// element γ_x = ⟨−[x₁], −[x₂], −[x₃ − x₁[x₂]]⟩ satisfying x·γ_x = τ(x).
    pub fn reduce_fundamental(&self) -> Result<(FundamentalPoint, HeisenbergElement), NumericError> {
        let f1 = self.a.floor_certified()?;
        let f2 = self.b.floor_certified()?;
        let t3 = self.c.sub(&self.a.mul(&PreciseReal::from_bigint(&f2)));
        let f3 = t3.floor_certified()?;
        let tau = FundamentalPoint::new(
            vec![self.a.frac()?, self.b.frac()?, t3.frac()?],
            Convention::FirstKind,
        );
        let gamma = HeisenbergElement::from_integers(&-f1, &-f2, &-f3);
        Ok((tau, gamma))
    }

    /// T_gⁿx ∈ 𝓕 by the closed orbit formula (one shot per n, no iteration):
    /// third coordinate nα₃+x₃+C(n,2)α₁α₂+nα₁x₂ − (nα₁+x₁)[nα₂+x₂], mod 1.
    pub fn orbit_point(
        &self,
        x: &FundamentalPoint,
        n: u64,
    ) -> Result<FundamentalPoint, HeisenbergError> {
        assert_eq!(x.convention(), Convention::FirstKind);
        if x.dim() != 3 {
            return Err(HeisenbergError::DimensionMismatch);
        }
        let n_big = BigInt::from(n);
        let (x1, x2, x3) =
            (x.coords[0].to_real(), x.coords[1].to_real(), x.coords[2].to_real());
        let y1 = self.a.mul_bigint(&n_big)?.add(&x1);
        let y2 = self.b.mul_bigint(&n_big)?.add(&x2);
        let y3 = self
            .c
            .mul_bigint(&n_big)?
            .add(&x3)
            .add(&self.a.mul(&self.b).mul_bigint(&binomial(n, 2))?)
            .add(&self.a.mul_bigint(&n_big)?.mul(&x2));
        let floor_y2 = y2.floor_certified()?;
        let t3 = y3.sub(&y1.mul(&PreciseReal::from_bigint(&floor_y2)));
        Ok(FundamentalPoint::new(
            vec![y1.frac()?, y2.frac()?, t3.frac()?],
            Convention::FirstKind,
        ))
    }
}

/// ⟨a,b,c⟩ of H_m with a,b ∈ ℝ^m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergMElement {
    pub a: Vec<PreciseReal>,
    pub b: Vec<PreciseReal>,
    pub c: PreciseReal,
}

/// The bilinear form B(a,y) = Σᵢ aᵢyᵢ.
pub fn bilinear(a: &[PreciseReal], y: &[PreciseReal]) -> Result<PreciseReal, HeisenbergError> {
    if a.len() != y.len() {
        return Err(HeisenbergError::DimensionMismatch);
    }
    let mut acc = PreciseReal::zero();
    for (ai, yi) in a.iter().zip(y) {
        acc = acc.add(&ai.mul(yi));
    }
    Ok(acc)
}

impl HeisenbergMElement {
    pub fn new(a: Vec<PreciseReal>, b: Vec<PreciseReal>, c: PreciseReal) -> Self {
        assert_eq!(a.len(), b.len());
        Self { a, b, c }
    }

    pub fn identity(m: usize) -> Self {
        Self::new(
            vec![PreciseReal::zero(); m],
            vec![PreciseReal::zero(); m],
            PreciseReal::zero(),
        )
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// ⟨a,b,c⟩⟨x,y,z⟩ = ⟨a+x, b+y, c+z+B(a,y)⟩.
    pub fn multiply(&self, other: &Self) -> Result<Self, HeisenbergError> {
        if self.m() != other.m() {
            return Err(HeisenbergError::DimensionMismatch);
        }
        let a = self.a.iter().zip(&other.a).map(|(u, v)| u.add(v)).collect();
        let b = self.b.iter().zip(&other.b).map(|(u, v)| u.add(v)).collect();
        let c = self.c.add(&other.c).add(&bilinear(&self.a, &other.b)?);
        Ok(Self::new(a, b, c))
    }

    /// ⟨a,b,c⟩⁻¹ = ⟨−a, −b, B(a,b)−c⟩.
    pub fn inverse(&self) -> Self {
        let a: Vec<_> = self.a.iter().map(PreciseReal::neg).collect();
        let b: Vec<_> = self.b.iter().map(PreciseReal::neg).collect();
        let c = bilinear(&self.a, &self.b).expect("equal dims").sub(&self.c);
        Self::new(a, b, c)
    }

    /// gⁿ = ⟨nα, nβ, nγ + C(n,2)B(α,β)⟩.
    pub fn power(&self, n: u64) -> Self {
        let n_big = BigInt::from(n);
        let scale = |v: &PreciseReal| v.mul_bigint(&n_big).expect("n within guard budget");
        let twist = bilinear(&self.a, &self.b)
            .expect("equal dims")
            .mul_bigint(&binomial(n, 2))
            .expect("binomial within guard budget");
        Self::new(
            self.a.iter().map(scale).collect(),
            self.b.iter().map(scale).collect(),
            scale(&self.c).add(&twist),
        )
    }

    /// τ(x̄) = ⟨{x}, {y}, {z − B(x,[y])}⟩ with γ_x̄ = ⟨−[x], −[y], −[z − B(x,[y])]⟩.
    pub fn reduce_fundamental(
        &self,
    ) -> Result<(FundamentalPoint, HeisenbergMElement), NumericError> {
        let m = self.m();
        let mut coords = Vec::with_capacity(2 * m + 1);
        let mut ga = Vec::with_capacity(m);
        let mut gb = Vec::with_capacity(m);
        let mut floors_b = Vec::with_capacity(m);
        for ai in &self.a {
            ga.push(PreciseReal::from_bigint(&-ai.floor_certified()?));
            coords.push(ai.frac()?);
        }
        for bi in &self.b {
            let f = bi.floor_certified()?;
            floors_b.push(PreciseReal::from_bigint(&f));
            gb.push(PreciseReal::from_bigint(&-f));
            coords.push(bi.frac()?);
        }
        let t = self.c.sub(&bilinear(&self.a, &floors_b).expect("equal dims"));
        let fc = t.floor_certified()?;
        coords.push(t.frac()?);
        let gamma = HeisenbergMElement::new(ga, gb, PreciseReal::from_bigint(&-fc));
        Ok((FundamentalPoint::new(coords, Convention::FirstKind), gamma))
    }

    /// ω_n = nγ + C(n,2)B(α,β) − B(nα, [nβ]) mod 1, the bracket sequence of
    /// the orbit of the origin.
    pub fn omega(&self, n: u64) -> Result<CirclePoint, HeisenbergError> {
        let n_big = BigInt::from(n);
        let mut total = self
            .c
            .mul_bigint(&n_big)?
            .add(&bilinear(&self.a, &self.b)?.mul_bigint(&binomial(n, 2))?);
        for (ai, bi) in self.a.iter().zip(&self.b) {
            let floor_nb = bi.mul_bigint(&n_big)?.floor_certified()?;
            total = total.sub(&ai.mul_bigint(&(n_big.clone() * floor_nb))?);
        }
        Ok(total.frac()?)
    }
}

/// ⟨t₁,t₂,t₃⟩_II, Mal'cev coordinates of the second kind on H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalcevIIElement {
    pub t1: PreciseReal,
    pub t2: PreciseReal,
    pub t3: PreciseReal,
}

impl MalcevIIElement {
    pub fn new(t1: PreciseReal, t2: PreciseReal, t3: PreciseReal) -> Self {
        Self { t1, t2, t3 }
    }

    pub fn identity() -> Self {
        Self::new(PreciseReal::zero(), PreciseReal::zero(), PreciseReal::zero())
    }

    /// ⟨t₁,t₂,t₃⟩_II ∗ ⟨s₁,s₂,s₃⟩_II = ⟨t₁+s₁, t₂+s₂, t₃+s₃ − t₂s₁⟩_II.
    pub fn multiply(&self, other: &Self) -> Self {
        Self::new(
            self.t1.add(&other.t1),
            self.t2.add(&other.t2),
            self.t3.add(&other.t3).sub(&self.t2.mul(&other.t1)),
        )
    }

    /// ⟨t₁,t₂,t₃⟩_II = ⟨t₁, t₂, t₃+t₁t₂⟩ in first-kind coordinates.
    pub fn to_first_kind(&self) -> HeisenbergElement {
        HeisenbergElement::new(
            self.t1.clone(),
            self.t2.clone(),
            self.t3.add(&self.t1.mul(&self.t2)),
        )
    }

    /// ⟨a,b,c⟩ = ⟨a, b, c−ab⟩_II.
    pub fn from_first_kind(g: &HeisenbergElement) -> Self {
        Self::new(g.a.clone(), g.b.clone(), g.c.sub(&g.a.mul(&g.b)))
    }

    /// gⁿ = ⟨nα₁, nα₂, nα₃ − C(n,2)α₁α₂⟩_II.
    pub fn power(&self, n: u64) -> Self {
        let n_big = BigInt::from(n);
        let twist = self
            .t1
            .mul(&self.t2)
            .mul_bigint(&binomial(n, 2))
            .expect("binomial within guard budget");
        Self::new(
            self.t1.mul_bigint(&n_big).expect("n within guard budget"),
            self.t2.mul_bigint(&n_big).expect("n within guard budget"),
            self.t3.mul_bigint(&n_big).expect("n within guard budget").sub(&twist),
        )
    }

    /// τ(x) = ⟨{x₁}, {x₂}, {x₃ + [x₁]x₂}⟩_II with
    /// γ_x = ⟨−[x₁], −[x₂], −[x₃ + [x₁]x₂]⟩_II.
    pub fn reduce_fundamental(&self) -> Result<(FundamentalPoint, MalcevIIElement), NumericError> {
        let f1 = self.t1.floor_certified()?;
        let f2 = self.t2.floor_certified()?;
        let t = self.t3.add(&self.t2.mul(&PreciseReal::from_bigint(&f1)));
        let f3 = t.floor_certified()?;
        let tau = FundamentalPoint::new(
            vec![self.t1.frac()?, self.t2.frac()?, t.frac()?],
            Convention::MalcevSecondKind,
        );
        let gamma = MalcevIIElement::new(
            PreciseReal::from_bigint(&-f1),
            PreciseReal::from_bigint(&-f2),
            PreciseReal::from_bigint(&-f3),
        );
        Ok((tau, gamma))
    }

    /// T_gⁿ0 ∈ 𝓕 in one shot: reduce gⁿ = ⟨nα₁, nα₂, nα₃ − C(n,2)α₁α₂⟩_II,
    /// whose third coordinate picks up +[nα₁]·nα₂ from the Mal'cev-II
    /// reduction.
    pub fn orbit_origin(&self, n: u64) -> Result<FundamentalPoint, NumericError> {
        let n_big = BigInt::from(n);
        let na1 = self.t1.mul_bigint(&n_big)?;
        let na2 = self.t2.mul_bigint(&n_big)?;
        let t3 = self
            .t3
            .mul_bigint(&n_big)?
            .sub(&self.t1.mul(&self.t2).mul_bigint(&binomial(n, 2))?)
            .add(&na2.mul(&PreciseReal::from_bigint(&na1.floor_certified()?)));
        Ok(FundamentalPoint::new(
            vec![na1.frac()?, na2.frac()?, t3.frac()?],
            Convention::MalcevSecondKind,
        ))
    }
}
