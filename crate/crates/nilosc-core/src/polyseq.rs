//! Generators for the sequence families under study: polynomial phases
//! e^{2πiP(n)}, generalized (bracket) polynomial sequences
//! φ(nα₁[nβ₁] + ⋯ + nα_m[nβ_m]), quasi-eigenfunction orbits, and affine
//! unipotent torus realizations of polynomial phases.
//!
//! Polynomial coefficients are stored mod 1 ([`PhasePoly`]): for integer
//! arguments e^{2πiP(n)} only depends on the fractional parts of the
//! coefficients, so the reduction is lossless and identifies ℝ_d[t] phases
//! with the coefficient torus.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::numeric::{binomial, unit_exp, CirclePoint, NumericError, PreciseReal, UnitComplex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyseqError {
    #[error("alpha and beta must have the same positive length")]
    DimensionMismatch,
    #[error("trigonometric observables must have zero constant term (frequency 0 not allowed)")]
    ZeroFrequency,
    #[error("matrix is not unipotent: (U-I)^dim != 0")]
    NotUnipotent,
    #[error("cannot parse bracket form `{0}`")]
    Parse(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// A real polynomial P ∈ ℝ_d[t] stored as circle-valued coefficients
/// (coefficient of t^j at index j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasePoly {
    coeffs: Vec<CirclePoint>,
}

impl PhasePoly {
    pub fn new(coeffs: Vec<CirclePoint>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial has at least the constant coefficient");
        Self { coeffs }
    }

    /// Reduce real coefficients mod 1. Integer shifts of any coefficient
    /// produce the identical polynomial, bit for bit.
    pub fn from_reals(coeffs: &[PreciseReal]) -> Self {
        Self::new(coeffs.iter().map(PreciseReal::frac_snapped).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![CirclePoint::zero()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CirclePoint] {
        &self.coeffs
    }

    /// P(n) mod 1, each term by one big-integer multiply-then-reduce.
    pub fn eval_phase(&self, n: u64) -> Result<CirclePoint, NumericError> {
        let n_big = BigInt::from(n);
        let mut power = BigInt::one();
        let mut acc = self.coeffs[0].clone();
        for c in &self.coeffs[1..] {
            power *= &n_big;
            acc = acc.add(&c.scale_mod1(&power)?);
        }
        Ok(acc)
    }
}

/// e^{2πiP(n)}.
pub fn poly_phase(p: &PhasePoly, n: u64) -> Result<UnitComplex, NumericError> {
    Ok(unit_exp(&p.eval_phase(n)?))
}

/// A trigonometric polynomial Σ c_m e^{2πim·} with zero constant term,
/// the observable class used on the circle factor.
#[derive(Debug, Clone)]
pub struct TrigPoly {
    terms: Vec<(i64, Complex64)>,
}

impl TrigPoly {
    pub fn new(terms: Vec<(i64, Complex64)>) -> Result<Self, PolyseqError> {
        if terms.iter().any(|(m, _)| *m == 0) {
            return Err(PolyseqError::ZeroFrequency);
        }
        Ok(Self { terms })
    }

    /// The character e^{2πim·}.
    pub fn character(m: i64) -> Result<Self, PolyseqError> {
        Self::new(vec![(m, Complex64::new(1.0, 0.0))])
    }

    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, x: &CirclePoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let scaled = x.scale_mod1(&BigInt::from(*m)).expect("small frequency");
            acc += c * unit_exp(&scaled).to_complex();
        }
        acc
    }
}

/// The bracket form φ(nα₁[nβ₁] + ⋯ + nα_m[nβ_m]).
#[derive(Debug, Clone)]
pub struct BracketForm {
    alpha: Vec<PreciseReal>,
    beta: Vec<PreciseReal>,
    phi: TrigPoly,
}

impl BracketForm {
    pub fn new(
        alpha: Vec<PreciseReal>,
        beta: Vec<PreciseReal>,
        phi: TrigPoly,
    ) -> Result<Self, PolyseqError> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(PolyseqError::DimensionMismatch);
        }
        Ok(Self { alpha, beta, phi })
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[PreciseReal] {
        &self.alpha
    }

    pub fn beta(&self) -> &[PreciseReal] {
        &self.beta
    }

    pub fn phi(&self) -> &TrigPoly {
        &self.phi
    }

    /// Σᵢ nαᵢ[nβᵢ] mod 1. The floors [nβᵢ] are certified.
    pub fn bracket_point(&self, n: u64) -> Result<CirclePoint, NumericError> {
        let n_big = BigInt::from(n);
        let mut acc = CirclePoint::zero();
        for (a, b) in self.alpha.iter().zip(&self.beta) {
            let floor_nb = b.mul_bigint(&n_big)?.floor_certified()?;
            acc = acc.add(&a.mul_bigint(&(&n_big * floor_nb))?.frac_snapped());
        }
        Ok(acc)
    }

    /// φ evaluated at the bracket expression.
    pub fn eval(&self, n: u64) -> Result<Complex64, NumericError> {
        Ok(self.phi.eval(&self.bracket_point(n)?))
    }

    /// Parse a compact text form, e.g. `phi=exp(m=1); a=[sqrt(2)]; b=[sqrt(3)]`.
    pub fn parse(text: &str) -> Result<Self, PolyseqError> {
        let mut phi: Option<TrigPoly> = None;
        let mut alpha: Option<Vec<PreciseReal>> = None;
        let mut beta: Option<Vec<PreciseReal>> = None;
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| PolyseqError::Parse(text.to_string()))?;
            match key.trim() {
                "phi" => {
                    let v = value.trim();
                    let inner = v
                        .strip_prefix("exp(m=")
                        .and_then(|r| r.strip_suffix(')'))
                        .ok_or_else(|| PolyseqError::Parse(text.to_string()))?;
                    let m: i64 = inner
                        .trim()
                        .parse()
                        .map_err(|_| PolyseqError::Parse(text.to_string()))?;
                    phi = Some(TrigPoly::character(m)?);
                }
                "a" | "b" => {
                    let v = value.trim();
                    let inner = v
                        .strip_prefix('[')
                        .and_then(|r| r.strip_suffix(']'))
                        .ok_or_else(|| PolyseqError::Parse(text.to_string()))?;
                    let list = crate::numeric::parse_constant_list(inner)
                        .map_err(|_| PolyseqError::Parse(text.to_string()))?;
                    if key.trim() == "a" {
                        alpha = Some(list);
                    } else {
                        beta = Some(list);
                    }
                }
                _ => return Err(PolyseqError::Parse(text.to_string())),
            }
        }
        match (phi, alpha, beta) {
            (Some(phi), Some(alpha), Some(beta)) => Self::new(alpha, beta, phi),
            _ => Err(PolyseqError::Parse(text.to_string())),
        }
    }
}

/// The affine map S y = Uy + b on 𝕋^dim with U unipotent over ℤ.
#[derive(Debug, Clone)]
pub struct AffineUnipotentSystem {
    u: Vec<Vec<BigInt>>,
    b: Vec<CirclePoint>,
    y0: Vec<CirclePoint>,
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

fn mat_identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

impl AffineUnipotentSystem {
    pub fn new(
        u: Vec<Vec<BigInt>>,
        b: Vec<CirclePoint>,
        y0: Vec<CirclePoint>,
    ) -> Result<Self, PolyseqError> {
        let dim = u.len();
        if dim == 0
            || u.iter().any(|row| row.len() != dim)
            || b.len() != dim
            || y0.len() != dim
        {
            return Err(PolyseqError::DimensionMismatch);
        }
        // (U − I)^dim = 0, exact integer arithmetic
        let mut nilpotent = u.clone();
        for (i, row) in nilpotent.iter_mut().enumerate() {
            row[i] -= BigInt::one();
        }
        let mut acc = mat_identity(dim);
        for _ in 0..dim {
            acc = mat_mul(&acc, &nilpotent);
        }
        if acc.iter().flatten().any(|e| !e.is_zero()) {
            return Err(PolyseqError::NotUnipotent);
        }
        Ok(Self { u, b, y0 })
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.u
    }

    pub fn translation(&self) -> &[CirclePoint] {
        &self.b
    }

    pub fn initial_point(&self) -> &[CirclePoint] {
        &self.y0
    }

    /// One application y ↦ Uy + b, exact integer action on phases.
    pub fn step(&self, y: &[CirclePoint]) -> Result<Vec<CirclePoint>, NumericError> {
        let mut out = Vec::with_capacity(self.dim());
        for (row, bi) in self.u.iter().zip(&self.b) {
            let mut acc = bi.clone();
            for (e, yj) in row.iter().zip(y) {
                if !e.is_zero() {
                    acc = acc.add(&yj.scale_mod1(e)?);
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Sⁿy₀ by iterated application.
    pub fn orbit(&self, n: u64) -> Result<Vec<CirclePoint>, NumericError> {
        let mut y = self.y0.clone();
        for _ in 0..n {
            y = self.step(&y)?;
        }
        Ok(y)
    }

    /// Sⁿy₀ in closed form: with N = U−I (nilpotent of order dim),
    /// Uⁿ = Σ_k C(n,k)·Nᵏ and Σ_{j<n} U^j = Σ_k C(n,k+1)·Nᵏ, all in exact
    /// integers, so Sⁿy₀ = Uⁿy₀ + (Σ_{j<n}U^j)b costs O(dim³) per n.
    pub fn orbit_closed(&self, n: u64) -> Result<Vec<CirclePoint>, NumericError> {
        let dim = self.dim();
        let mut nilpotent = self.u.clone();
        for (i, row) in nilpotent.iter_mut().enumerate() {
            row[i] -= BigInt::one();
        }
        let mut u_n = vec![vec![BigInt::zero(); dim]; dim]; // Σ C(n,k) N^k
        let mut s_n = vec![vec![BigInt::zero(); dim]; dim]; // Σ C(n,k+1) N^k
        let mut n_pow = mat_identity(dim);
        for k in 0..dim as u32 {
            let cu = binomial(n, k);
            let cs = binomial(n, k + 1);
            for i in 0..dim {
                for j in 0..dim {
                    u_n[i][j] += &cu * &n_pow[i][j];
                    s_n[i][j] += &cs * &n_pow[i][j];
                }
            }
            n_pow = mat_mul(&n_pow, &nilpotent);
        }
        let mut out = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut acc = CirclePoint::zero();
            for j in 0..dim {
                if !u_n[i][j].is_zero() {
                    acc = acc.add(&self.y0[j].scale_mod1(&u_n[i][j])?);
                }
                if !s_n[i][j].is_zero() {
                    acc = acc.add(&self.b[j].scale_mod1(&s_n[i][j])?);
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// The observable paired with [`poly_to_affine`]: f(y) = e^{2πi·y₁}.
pub fn affine_observable(point: &[CirclePoint]) -> UnitComplex {
    unit_exp(&point[0])
}

/// Realize e^{2πiP(n)} = f(Sⁿy₀) on a torus with an affine unipotent map.
///
/// The state carries the finite differences (P(n), ΔP(n), …, Δ^{m−1}P(n))
/// with m = max(deg P, 1); U shifts each difference by the next one and the
/// constant top difference Δ^m P sits in the translation vector. The
/// contract is f(Sⁿy₀) = e^{2πiP(n)} with f = e^{2πi·(first coordinate)};
/// the particular (U, b) is an implementation detail.
pub fn poly_to_affine(p: &PhasePoly) -> Result<AffineUnipotentSystem, PolyseqError> {
    let deg = p.degree();
    let m = deg.max(1);

    // forward differences of P at 0, mod 1
    let mut row: Vec<CirclePoint> = (0..=m as u64)
        .map(|j| p.eval_phase(j))
        .collect::<Result<_, _>>()?;
    let mut diffs = vec![row[0].clone()]; // Δ^0 P(0)
    for _ in 0..m {
        row = row.windows(2).map(|w| w[1].sub(&w[0])).collect();
        diffs.push(row[0].clone());
    }

    let mut u = mat_identity(m);
    for i in 0..m - 1 {
        u[i][i + 1] = BigInt::one();
    }
    let mut b = vec![CirclePoint::zero(); m];
    b[m - 1] = diffs[m].clone();
    let y0 = diffs[..m].to_vec();
    AffineUnipotentSystem::new(u, b, y0)
}

/// Orbit data of a quasi-eigenfunction of order k: along the orbit the phase
/// of f(Tⁿx)/f(x) is p_x(n) = θ₀C(n,k) + θ₁C(n,k−1) + ⋯ + θ_{k−1}C(n,1).
#[derive(Debug, Clone)]
pub struct QuasiEigenData {
    thetas: Vec<CirclePoint>,
}

impl QuasiEigenData {
    /// θ₀ is the eigenvalue argument; θ_j the argument of the j-th chain
    /// function at the base point. Order k = number of phases.
    pub fn new(thetas: Vec<CirclePoint>) -> Self {
        assert!(!thetas.is_empty(), "order k must be >= 1");
        Self { thetas }
    }

    pub fn order(&self) -> usize {
        self.thetas.len()
    }

    /// p_x(n) mod 1 with exact integer binomials.
    pub fn phase(&self, n: u64) -> Result<CirclePoint, NumericError> {
        let k = self.order() as u32;
        let mut acc = CirclePoint::zero();
        for (j, theta) in self.thetas.iter().enumerate() {
            acc = acc.add(&theta.scale_mod1(&binomial(n, k - j as u32))?);
        }
        Ok(acc)
    }
}

/// f(Tⁿx) = f(x)·e^{2πi p_x(n)}, with arg f(x) supplied as `f_x`.
pub fn quasi_eigen_orbit(
    q: &QuasiEigenData,
    f_x: &CirclePoint,
    n: u64,
) -> Result<UnitComplex, NumericError> {
    Ok(unit_exp(&f_x.add(&q.phase(n)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use num_bigint::BigUint;
    use num_integer::Integer;

    fn poly_from_f64(coeffs: &[f64]) -> PhasePoly {
        PhasePoly::from_reals(&coeffs.iter().copied().map(PreciseReal::from_f64).collect::<Vec<_>>())
    }

    #[test]
    fn poly_phase_cases() {
        let zero = PhasePoly::zero();
        for n in [0u64, 1, 17, 1000] {
            let v = poly_phase(&zero, n).unwrap();
            assert_eq!((v.re, v.im), (1.0, 0.0));
        }
        // P(t) = t/2 at n=3: e^{3πi} = −1
        let half_t = poly_from_f64(&[0.0, 0.5]);
        let v = poly_phase(&half_t, 3).unwrap();
        assert!((v.re + 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn poly_phase_quadruple_precision_oracle() {
        // P(t) = √2·t² at n = 10⁴ against a 4×B-bit computation
        let b = crate::numeric::precision_bits();
        let p = PhasePoly::from_reals(&[
            PreciseReal::zero(),
            PreciseReal::zero(),
            PreciseReal::sqrt_int(2),
        ]);
        let got = p.eval_phase(10_000).unwrap();

        // √2 at w = 4B bits, plain integer square root
        let w = 4 * b;
        let root = (BigUint::from(2u8) << (2 * w)).sqrt();
        let scaled = root * BigUint::from(10_000u64 * 10_000u64);
        let frac = scaled.mod_floor(&(BigUint::one() << w));
        let expected = BigInt::from(frac >> (w - b));
        let diff = (got.mantissa() - &expected).magnitude().clone();
        // ≥ 10⁻²⁰ relative error on the unit circle ⇔ phase agreement well
        // below 2^-66; the fixed-point phases agree to ~2^-150
        assert!(diff < (BigUint::one() << (b - 80)));
    }

    #[test]
    fn coefficient_integer_shift_is_lossless() {
        let mut rng = SplitMix64::new(137);
        for _ in 0..100 {
            let coeffs: Vec<PreciseReal> =
                (0..3).map(|_| PreciseReal::from_f64(rng.next_f64())).collect();
            let shift = rng.next_below(13) as i64 - 6;
            let j = rng.next_below(3) as usize;
            let mut shifted = coeffs.clone();
            shifted[j] = shifted[j].add(&PreciseReal::from_int(shift));
            let p = PhasePoly::from_reals(&coeffs);
            let q = PhasePoly::from_reals(&shifted);
            assert_eq!(p, q, "integer coefficient shift must be bit-identical");
            let n = rng.next_below(100_000);
            assert_eq!(
                p.eval_phase(n).unwrap().mantissa(),
                q.eval_phase(n).unwrap().mantissa()
            );
        }
    }

    #[test]
    fn bracket_eval_cases() {
        let phi = TrigPoly::character(1).unwrap();
        let form = BracketForm::new(
            vec![PreciseReal::sqrt_int(2)],
            vec![PreciseReal::sqrt_int(3).frac().unwrap().to_real()],
            phi,
        )
        .unwrap();
        // n=0 → φ(0) = 1
        let v0 = form.eval(0).unwrap();
        assert!((v0 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        // m=1, β ∈ (0,1), n=1: [β]=0 → φ(0)
        let v1 = form.eval(1).unwrap();
        assert!((v1 - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn bracket_cross_checks_against_omega() {
        // For m=1, γ=0: bracket_point(n) + ω_n = C(n,2)·αβ (mod 1), the three
        // quantities computed along independent routes.
        use crate::heisenberg::HeisenbergMElement;
        let alpha = PreciseReal::sqrt_int(2);
        let beta = PreciseReal::sqrt_int(3);
        let form = BracketForm::new(
            vec![alpha.clone()],
            vec![beta.clone()],
            TrigPoly::character(1).unwrap(),
        )
        .unwrap();
        let g = HeisenbergMElement::new(vec![alpha.clone()], vec![beta.clone()], PreciseReal::zero());
        for n in (0..=3000u64).step_by(97) {
            let bracket = form.bracket_point(n).unwrap();
            let omega = g.omega(n).unwrap();
            let rhs = alpha
                .mul(&beta)
                .mul_bigint(&binomial(n, 2))
                .unwrap()
                .frac_snapped();
            assert!(bracket.add(&omega).circle_dist_f64(&rhs) < 1e-30, "n={n}");
        }
    }

    #[test]
    fn bracket_parse() {
        let form = BracketForm::parse("phi=exp(m=1); a=[sqrt(2)]; b=[sqrt(3)]").unwrap();
        assert_eq!(form.m(), 1);
        assert_eq!(form.alpha()[0].mantissa(), PreciseReal::sqrt_int(2).mantissa());
        assert_eq!(form.phi().terms().len(), 1);
        let multi = BracketForm::parse("phi=exp(m=2); a=[sqrt(2), 0.5]; b=[sqrt(3), -1.25]").unwrap();
        assert_eq!(multi.m(), 2);
        assert!(BracketForm::parse("a=[1]").is_err());
        assert!(BracketForm::parse("phi=exp(m=0); a=[1]; b=[2]").is_err());
        assert!(BracketForm::parse("phi=exp(m=1); a=[sqrt]; b=[2]").is_err());
    }

    #[test]
    fn affine_rejects_non_unipotent() {
        let u = vec![vec![BigInt::from(2)]];
        let bad = AffineUnipotentSystem::new(u, vec![CirclePoint::zero()], vec![CirclePoint::zero()]);
        assert_eq!(bad.unwrap_err(), PolyseqError::NotUnipotent);
    }

    #[test]
    fn affine_orbit_cases() {
        // U = I, b = (α): rotation
        let alpha = PreciseReal::sqrt_int(2).frac().unwrap();
        let rot = AffineUnipotentSystem::new(
            vec![vec![BigInt::one()]],
            vec![alpha.clone()],
            vec![CirclePoint::zero()],
        )
        .unwrap();
        assert!(rot.orbit(0).unwrap()[0].mantissa().is_zero());
        for n in [1u64, 7, 100] {
            let got = &rot.orbit(n).unwrap()[0];
            assert!(got.circle_dist_f64(&alpha.scale_u64(n).unwrap()) < 1e-40);
        }
    }

    #[test]
    fn affine_iteration_matches_closed_form() {
        let mut rng = SplitMix64::new(139);
        // a 3-dimensional unipotent system with nontrivial integer entries
        let u = vec![
            vec![BigInt::one(), BigInt::from(2), BigInt::from(-1)],
            vec![BigInt::zero(), BigInt::one(), BigInt::from(3)],
            vec![BigInt::zero(), BigInt::zero(), BigInt::one()],
        ];
        let b: Vec<CirclePoint> = (0..3).map(|_| CirclePoint::from_f64(rng.next_f64())).collect();
        let y0: Vec<CirclePoint> = (0..3).map(|_| CirclePoint::from_f64(rng.next_f64())).collect();
        let sys = AffineUnipotentSystem::new(u, b, y0).unwrap();
        let mut y = sys.initial_point().to_vec();
        for n in 0..=200u64 {
            let closed = sys.orbit_closed(n).unwrap();
            for i in 0..3 {
                assert!(closed[i].circle_dist_f64(&y[i]) < 1e-38, "n={n} i={i}");
            }
            y = sys.step(&y).unwrap();
        }
    }

    #[test]
    fn poly_to_affine_constant_and_linear() {
        // constant c: 1-dimensional identity-plus-zero system
        let c = poly_from_f64(&[0.37]);
        let sys = poly_to_affine(&c).unwrap();
        assert_eq!(sys.dim(), 1);
        for n in [0u64, 5, 50] {
            let v = affine_observable(&sys.orbit(n).unwrap());
            let expected = poly_phase(&c, n).unwrap();
            assert!(v.dist(&expected) < 1e-14);
        }
        // P(t) = αt: rotation by α from y₀ = 0
        let lin = PhasePoly::from_reals(&[PreciseReal::zero(), PreciseReal::sqrt_int(2)]);
        let sys = poly_to_affine(&lin).unwrap();
        assert_eq!(sys.dim(), 1);
        assert!(sys.initial_point()[0].mantissa().is_zero());
    }

    #[test]
    fn poly_to_affine_quadratic_difference_state() {
        // P(t) = αt²: state (0, α), step (x,y) ↦ (x+y, y+2α)
        let alpha = PreciseReal::sqrt_int(5).frac().unwrap();
        let p = PhasePoly::from_reals(&[
            PreciseReal::zero(),
            PreciseReal::zero(),
            alpha.to_real(),
        ]);
        let sys = poly_to_affine(&p).unwrap();
        assert_eq!(sys.dim(), 2);
        assert!(sys.initial_point()[0].mantissa().is_zero());
        assert!(sys.initial_point()[1].circle_dist_f64(&alpha) < 1e-40);
        assert!(sys.translation()[1].circle_dist_f64(&alpha.scale_u64(2).unwrap()) < 1e-40);
        for n in 0..=100u64 {
            let first = &sys.orbit(n).unwrap()[0];
            assert!(first.circle_dist_f64(&p.eval_phase(n).unwrap()) < 1e-38, "n={n}");
        }
    }

    #[test]
    fn poly_to_affine_contract_random() {
        let mut rng = SplitMix64::new(149);
        for degree in 0..=4usize {
            for _ in 0..20 {
                let coeffs: Vec<PreciseReal> =
                    (0..=degree).map(|_| PreciseReal::from_f64(rng.next_f64())).collect();
                let p = PhasePoly::from_reals(&coeffs);
                let sys = poly_to_affine(&p).unwrap();
                for n in (0..1000u64).step_by(117) {
                    let got = &sys.orbit_closed(n).unwrap()[0];
                    let expected = p.eval_phase(n).unwrap();
                    assert!(
                        got.circle_dist_f64(&expected) < 1e-20,
                        "degree={degree} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn quasi_eigen_cases() {
        let f_x = CirclePoint::from_f64(0.21);
        // k=1: f(x)·e^{2πinθ₀}
        let theta0 = CirclePoint::from_f64(0.33);
        let q1 = QuasiEigenData::new(vec![theta0.clone()]);
        for n in [0u64, 1, 9, 400] {
            let got = quasi_eigen_orbit(&q1, &f_x, n).unwrap();
            let expected = unit_exp(&f_x.add(&theta0.scale_u64(n).unwrap()));
            assert!(got.dist(&expected) < 1e-14);
        }
        // n=0 → f(x) for any order
        let q3 = QuasiEigenData::new(vec![
            CirclePoint::from_f64(0.11),
            CirclePoint::from_f64(0.52),
            CirclePoint::from_f64(0.83),
        ]);
        let v = quasi_eigen_orbit(&q3, &f_x, 0).unwrap();
        assert!(v.dist(&unit_exp(&f_x)) < 1e-15);
    }

    #[test]
    fn quasi_eigen_matches_cocycle_iteration() {
        // k=3 chain: q_0(n) = θ₀ constant, q_j(n+1) = q_{j-1}(n) + q_j(n),
        // target phase F(n+1) = q_{k-1}(n) + F(n).
        let thetas = [0.31f64, 0.57, 0.79];
        let f_x = CirclePoint::from_f64(0.13);
        let q = QuasiEigenData::new(thetas.iter().map(|t| CirclePoint::from_f64(*t)).collect());
        let mut chain: Vec<CirclePoint> =
            thetas.iter().map(|t| CirclePoint::from_f64(*t)).collect();
        let mut target = f_x.clone();
        for n in 0..=300u64 {
            let got = quasi_eigen_orbit(&q, &f_x, n).unwrap();
            let expected = unit_exp(&target);
            assert!(got.dist(&expected) < 1e-12, "n={n}");
            target = target.add(chain.last().unwrap());
            for j in (1..chain.len()).rev() {
                chain[j] = chain[j].add(&chain[j - 1]);
            }
        }
    }

    #[test]
    fn quasi_eigen_pascal_recursion() {
        // p_x(n+1) − p_x(n) = q(n) + θ_{k−1} where q drops the last phase and
        // lowers the order by one — the Pascal rule at the phase level.
        let thetas: Vec<CirclePoint> =
            [0.41, 0.23, 0.67].iter().map(|t| CirclePoint::from_f64(*t)).collect();
        let q = QuasiEigenData::new(thetas.clone());
        let q_lower = QuasiEigenData::new(thetas[..2].to_vec());
        for n in 0..200u64 {
            let delta = q.phase(n + 1).unwrap().sub(&q.phase(n).unwrap());
            let rhs = q_lower.phase(n).unwrap().add(&thetas[2]);
            assert!(delta.circle_dist_f64(&rhs) < 1e-40, "n={n}");
        }
    }
}
