//! Arbitrary-precision fixed-point arithmetic on ℝ and ℝ/ℤ with certified
//! error tracking.
//!
//! Every real number is a [`PreciseReal`]: a big-integer mantissa interpreted
//! as `mantissa / 2^B`, where `B` is a process-wide precision fixed at startup
//! (default 192 bits), together with an error radius counted in units of
//! `2^-B` (ulps). Addition and integer scaling are exact at the mantissa
//! level; multiplication rounds once and accounts for it. Floor and
//! fractional-part decisions are certified: if the tracked error radius
//! straddles an integer boundary the operation refuses to guess and returns
//! [`NumericError::AmbiguousBoundary`] (unless the caller opts into the
//! snapping variants).
//!
//! Irrational constants enter exactly once, at construction (`sqrt(k)` via
//! integer square root, decimal strings via one rounded division); thereafter
//! all arithmetic is pure integer work, which keeps the error analysis linear
//! and auditable. No irrationality or ℚ-independence checking is performed
//! anywhere: hypotheses on the inputs are the caller's responsibility.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU32, Ordering};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default process-wide precision in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 192;
/// Smallest precision the library accepts.
pub const MIN_PRECISION_BITS: u32 = 128;
/// Largest precision the library accepts.
pub const MAX_PRECISION_BITS: u32 = 4096;
/// Guard-bit budget: integer factors in mod-1 scaling may use at most
/// `B - GUARD_BITS` bits, so certified floors survive factors up to 2^128
/// at the default precision.
pub const GUARD_BITS: u32 = 64;

static PRECISION_BITS: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_BITS);

/// Current process-wide precision `B` in bits.
pub fn precision_bits() -> u32 {
    PRECISION_BITS.load(Ordering::Relaxed)
}

/// Set the process-wide precision. Call once at startup, before any value is
/// constructed; values built under different precisions must not be mixed.
pub fn set_precision_bits(bits: u32) -> Result<(), NumericError> {
    if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&bits) {
        return Err(NumericError::InvalidPrecision { requested: bits });
    }
    PRECISION_BITS.store(bits, Ordering::Relaxed);
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    /// A floor/frac decision was requested on a value whose error radius
    /// straddles an integer boundary.
    #[error("value is within its error radius of an integer boundary")]
    AmbiguousBoundary,
    /// An integer factor exceeded the guard-bit budget for the current
    /// precision.
    #[error("precision exhausted: integer factor exceeds the guard-bit budget")]
    PrecisionExhausted,
    #[error("precision must be between 128 and 4096 bits, got {requested}")]
    InvalidPrecision { requested: u32 },
    #[error("cannot parse numeric constant `{0}`")]
    Parse(String),
}

/// Exact binomial coefficient C(n, k).
///
/// Computed as a running product with exact stepwise division, so there is no
/// intermediate overflow and no rounding before any fixed-point multiply.
pub fn binomial(n: u64, k: u32) -> BigInt {
    let k = k as u64;
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

fn modulus() -> BigInt {
    BigInt::one() << precision_bits()
}

/// Round `x / 2^shift` to nearest (ties away from zero).
fn round_shift(x: &BigInt, shift: u32) -> BigInt {
    let half = BigInt::one() << (shift - 1);
    if x.is_negative() {
        -((half - x) >> shift)
    } else {
        (x + half) >> shift
    }
}

fn biguint_to_u128_sat(x: &BigUint) -> u128 {
    x.to_u128().unwrap_or(u128::MAX)
}

/// A real number in process-wide fixed point: `value = mantissa / 2^B`, with
/// a certified error radius `err` in ulps (units of `2^-B`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreciseReal {
    mantissa: BigInt,
    err: u128,
}

impl PreciseReal {
    pub fn zero() -> Self {
        Self { mantissa: BigInt::zero(), err: 0 }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Exact conversion of an integer.
    pub fn from_int(v: i64) -> Self {
        Self { mantissa: BigInt::from(v) << precision_bits(), err: 0 }
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self { mantissa: v.clone() << precision_bits(), err: 0 }
    }

    /// `num / den` rounded to nearest; err is 1 ulp unless the quotient is
    /// exact.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        let scaled = (num << precision_bits()) * den.signum();
        let den = den.abs();
        let (q, r) = scaled.div_mod_floor(&den);
        if r.is_zero() {
            Self { mantissa: q, err: 0 }
        } else {
            // round to nearest
            let mantissa = if (&r << 1u32) >= den { q + 1 } else { q };
            Self { mantissa, err: 1 }
        }
    }

    /// Parse a plain decimal string such as `"-2.7"` or `"10"`.
    pub fn from_decimal_str(s: &str) -> Result<Self, NumericError> {
        let t = s.trim();
        let (neg, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = match t.split_once('.') {
            Some((i, f)) => (i, f),
            None => (t, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(NumericError::Parse(s.to_string()));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(NumericError::Parse(s.to_string()));
        }
        let digits: String = [int_part, frac_part].concat();
        let num: BigInt = digits.parse().map_err(|_| NumericError::Parse(s.to_string()))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let v = Self::from_ratio(&num, &den);
        Ok(if neg { v.neg() } else { v })
    }

    /// √k at full precision via integer square root; err ≤ 1 ulp.
    pub fn sqrt_int(k: u64) -> Self {
        let b = precision_bits();
        let scaled = BigUint::from(k) << (2 * b);
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        Self {
            mantissa: BigInt::from(root),
            err: if exact { 0 } else { 1 },
        }
    }

    /// Exact conversion of an `f64` (every finite double is dyadic).
    pub fn from_f64(x: f64) -> Self {
        debug_assert!(x.is_finite());
        let (frac, exp) = libm::frexp(x);
        let scaled = (frac * (1u64 << 53) as f64) as i64; // exact: 53-bit integer
        let shift = precision_bits() as i64 + exp as i64 - 53;
        if shift >= 0 {
            Self { mantissa: BigInt::from(scaled) << (shift as u32), err: 0 }
        } else {
            let m = round_shift(&BigInt::from(scaled), (-shift) as u32);
            Self { mantissa: m, err: 1 }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Error radius in ulps of `2^-B`.
    pub fn err_ulps(&self) -> u128 {
        self.err
    }

    pub fn is_exact(&self) -> bool {
        self.err == 0
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mantissa.to_f64().unwrap_or(f64::INFINITY);
        libm::ldexp(m, -(precision_bits() as i32))
    }

    /// Integer upper bound on |value|, used for error propagation.
    fn magnitude_units(&self) -> u128 {
        let abs = self.mantissa.magnitude() + BigUint::from(self.err);
        biguint_to_u128_sat(&((abs >> precision_bits()) + BigUint::one()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            mantissa: &self.mantissa + &other.mantissa,
            err: self.err.saturating_add(other.err),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            mantissa: &self.mantissa - &other.mantissa,
            err: self.err.saturating_add(other.err),
        }
    }

    pub fn neg(&self) -> Self {
        Self { mantissa: -&self.mantissa, err: self.err }
    }

    /// Fixed-point product with one rounding. Interval rule:
    /// `err = |a|·err_b + |b|·err_a + err_a·err_b·2^-B + rounding`.
    pub fn mul(&self, other: &Self) -> Self {
        let b = precision_bits();
        let prod = &self.mantissa * &other.mantissa;
        let exact = (prod.magnitude().trailing_zeros().unwrap_or(u64::from(b))) >= u64::from(b);
        let mantissa = round_shift(&prod, b);
        let cross = self
            .magnitude_units()
            .saturating_mul(other.err)
            .saturating_add(other.magnitude_units().saturating_mul(self.err));
        let err_prod =
            biguint_to_u128_sat(&((BigUint::from(self.err) * BigUint::from(other.err)) >> b));
        let rounding = u128::from(!exact);
        Self {
            mantissa,
            err: cross.saturating_add(err_prod).saturating_add(rounding),
        }
    }

    /// Exact product with a machine integer.
    pub fn mul_small(&self, k: i64) -> Self {
        Self {
            mantissa: &self.mantissa * BigInt::from(k),
            err: self.err.saturating_mul(k.unsigned_abs() as u128),
        }
    }

    /// Exact product with a big integer, subject to the guard-bit budget.
    pub fn mul_bigint(&self, k: &BigInt) -> Result<Self, NumericError> {
        check_guard(k)?;
        Ok(Self {
            mantissa: &self.mantissa * k,
            err: self
                .err
                .saturating_mul(biguint_to_u128_sat(k.magnitude())),
        })
    }

    fn boundary_parts(&self) -> (BigInt, BigInt) {
        self.mantissa.div_mod_floor(&modulus())
    }

    fn is_ambiguous(r: &BigInt, err: u128) -> bool {
        let err = BigInt::from(err);
        r <= &err || r >= &(modulus() - &err)
    }

    /// Certified ⌊x⌋: exact (never off by one) given the error radius.
    pub fn floor_certified(&self) -> Result<BigInt, NumericError> {
        let (q, r) = self.boundary_parts();
        if Self::is_ambiguous(&r, self.err) && self.err > 0 {
            return Err(NumericError::AmbiguousBoundary);
        }
        Ok(q)
    }

    /// ⌊x⌋ with boundary snapping: a value within err of an integer is
    /// treated as exactly that integer.
    pub fn floor_snapped(&self) -> BigInt {
        let (q, r) = self.boundary_parts();
        if r >= modulus() - BigInt::from(self.err) {
            q + 1
        } else {
            q
        }
    }

    /// Certified fractional part {x} ∈ [0,1); err preserved.
    pub fn frac(&self) -> Result<CirclePoint, NumericError> {
        let (_, r) = self.boundary_parts();
        if Self::is_ambiguous(&r, self.err) && self.err > 0 {
            return Err(NumericError::AmbiguousBoundary);
        }
        Ok(CirclePoint { value: Self { mantissa: r, err: self.err } })
    }

    /// {x} with boundary snapping: a value within err of an integer maps to
    /// the point 0 of the circle, with the snap distance added to err.
    pub fn frac_snapped(&self) -> CirclePoint {
        let (_, r) = self.boundary_parts();
        if Self::is_ambiguous(&r, self.err) && self.err > 0 {
            let dist = r.clone().min(modulus() - &r);
            let extra = biguint_to_u128_sat(dist.magnitude());
            return CirclePoint {
                value: Self { mantissa: BigInt::zero(), err: self.err.saturating_add(extra) },
            };
        }
        CirclePoint { value: Self { mantissa: r, err: self.err } }
    }
}

impl fmt::Display for PreciseReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl core::ops::Add for &PreciseReal {
    type Output = PreciseReal;
    fn add(self, rhs: &PreciseReal) -> PreciseReal {
        PreciseReal::add(self, rhs)
    }
}

impl core::ops::Sub for &PreciseReal {
    type Output = PreciseReal;
    fn sub(self, rhs: &PreciseReal) -> PreciseReal {
        PreciseReal::sub(self, rhs)
    }
}

impl core::ops::Mul for &PreciseReal {
    type Output = PreciseReal;
    fn mul(self, rhs: &PreciseReal) -> PreciseReal {
        PreciseReal::mul(self, rhs)
    }
}

impl core::ops::Neg for &PreciseReal {
    type Output = PreciseReal;
    fn neg(self) -> PreciseReal {
        PreciseReal::neg(self)
    }
}

fn check_guard(k: &BigInt) -> Result<(), NumericError> {
    if k.bits() > u64::from(precision_bits() - GUARD_BITS) {
        Err(NumericError::PrecisionExhausted)
    } else {
        Ok(())
    }
}

/// A point of ℝ/ℤ: a [`PreciseReal`] reduced to [0,1) in fixed point.
///
/// The circle is a group, so addition, negation and integer scaling never
/// raise boundary questions; ambiguity only ever appears when a real number
/// is split into floor and fractional part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirclePoint {
    value: PreciseReal,
}

impl CirclePoint {
    pub fn zero() -> Self {
        Self { value: PreciseReal::zero() }
    }

    /// The point {x}, certified (errors on an ambiguous boundary).
    pub fn from_real(x: &PreciseReal) -> Result<Self, NumericError> {
        x.frac()
    }

    pub fn from_f64(x: f64) -> Self {
        PreciseReal::from_f64(x).frac_snapped()
    }

    /// The exact point m/2^B (m reduced mod 2^B).
    pub fn from_fixed_point(m: &BigUint) -> Self {
        let m = BigInt::from(m.clone()).mod_floor(&modulus());
        Self { value: PreciseReal { mantissa: m, err: 0 } }
    }

    pub fn as_real(&self) -> &PreciseReal {
        &self.value
    }

    pub fn mantissa(&self) -> &BigInt {
        self.value.mantissa()
    }

    pub fn err_ulps(&self) -> u128 {
        self.value.err
    }

    /// Addition mod 1 (exact at the mantissa level).
    pub fn add(&self, other: &Self) -> Self {
        let m = (&self.value.mantissa + &other.value.mantissa).mod_floor(&modulus());
        Self {
            value: PreciseReal { mantissa: m, err: self.value.err.saturating_add(other.value.err) },
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let m = (-&self.value.mantissa).mod_floor(&modulus());
        Self { value: PreciseReal { mantissa: m, err: self.value.err } }
    }

    /// {n·x} by a single multiply-then-reduce. The mantissa work is exact, so
    /// the error radius scales by |n| with no new rounding, instead of
    /// accumulating across n repeated additions.
    pub fn scale_mod1(&self, n: &BigInt) -> Result<Self, NumericError> {
        check_guard(n)?;
        let m = (&self.value.mantissa * n).mod_floor(&modulus());
        Ok(Self {
            value: PreciseReal {
                mantissa: m,
                err: self
                    .value
                    .err
                    .saturating_mul(biguint_to_u128_sat(n.magnitude())),
            },
        })
    }

    pub fn scale_u64(&self, n: u64) -> Result<Self, NumericError> {
        self.scale_mod1(&BigInt::from(n))
    }

    /// Lift back to ℝ as the representative in [0,1).
    pub fn to_real(&self) -> PreciseReal {
        self.value.clone()
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.value.to_f64();
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    }

    /// Distance on the circle, |a−b| measured the short way around, as f64.
    pub fn circle_dist_f64(&self, other: &Self) -> f64 {
        let d = (&self.value.mantissa - &other.value.mantissa).mod_floor(&modulus());
        let wrap = modulus() - &d;
        let d = d.min(wrap);
        libm::ldexp(d.to_f64().unwrap_or(f64::INFINITY), -(precision_bits() as i32))
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// A point of the unit circle in ℂ, evaluated in double precision ("fast
/// mode"). Phases themselves stay in fixed point; only this final evaluation
/// is floating point. `unit_exp_full` is the full-precision path used by the
/// golden fixtures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitComplex {
    pub re: f64,
    pub im: f64,
}

impl UnitComplex {
    pub fn one() -> Self {
        Self { re: 1.0, im: 0.0 }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            re: self.re * other.re - self.im * other.im,
            im: self.re * other.im + self.im * other.re,
        }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn norm_sq(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn dist(&self, other: &Self) -> f64 {
        let dr = self.re - other.re;
        let di = self.im - other.im;
        libm::sqrt(dr * dr + di * di)
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re, self.im)
    }
}

/// e^{2πi·x} in double precision.
///
/// The phase is exact to the fixed-point granularity; the only losses are the
/// conversion of x to f64 (≤ 2^-53 relative) and the libm sin/cos rounding,
/// so the result is within ~2^-51 + 2π·err·2^-B of the true point.
pub fn unit_exp(x: &CirclePoint) -> UnitComplex {
    let t = 2.0 * core::f64::consts::PI * x.to_f64();
    UnitComplex { re: libm::cos(t), im: libm::sin(t) }
}

/// π at scale 2^bits (Machin's formula, exact integer series).
fn pi_fixed(bits: u32) -> BigInt {
    fn atan_inv(x: u64, bits: u32) -> BigInt {
        let x2 = BigInt::from(x * x);
        let mut power = (BigInt::one() << bits) / BigInt::from(x);
        let mut sum = power.clone();
        let mut k = 1u64;
        loop {
            power = &power / &x2;
            if power.is_zero() {
                break;
            }
            let contrib = &power / BigInt::from(2 * k + 1);
            if k % 2 == 1 {
                sum -= contrib;
            } else {
                sum += contrib;
            }
            k += 1;
        }
        sum
    }
    atan_inv(5, bits) * 16 - atan_inv(239, bits) * 4
}

/// (sin 2πx, cos 2πx) at full precision.
///
/// Internally works with 32 guard bits; the returned values carry
/// `err ≤ 7·err_in + 2` ulps (|d/dx sin 2πx| ≤ 2π < 7, plus series truncation
/// and final rounding).
pub fn unit_exp_full(x: &CirclePoint) -> (PreciseReal, PreciseReal) {
    const GUARD: u32 = 32;
    let b = precision_bits();
    let w = b + GUARD;

    // Octant decomposition: x = k/8 + t with t ∈ [0, 1/8).
    let m_w: BigInt = x.mantissa() << GUARD;
    let octant_width = BigInt::one() << (w - 3);
    let (k, t) = m_w.div_mod_floor(&octant_width);
    let k = k.to_u8().unwrap_or(0) % 8;

    // u = 2π·t at scale 2^w, u ∈ [0, π/4].
    let pi = pi_fixed(w);
    let u = round_shift(&((&pi * &t) << 1u32), w);

    let u2 = round_shift(&(&u * &u), w);
    // sin u
    let mut sin_u = u.clone();
    let mut term = u.clone();
    let mut j = 1u64;
    loop {
        term = round_shift(&(&term * &u2), w) / BigInt::from((2 * j) * (2 * j + 1));
        if term.is_zero() {
            break;
        }
        if j % 2 == 1 {
            sin_u -= &term;
        } else {
            sin_u += &term;
        }
        j += 1;
    }
    // cos u
    let one_w = BigInt::one() << w;
    let mut cos_u = one_w.clone();
    let mut term = one_w;
    let mut j = 1u64;
    loop {
        term = round_shift(&(&term * &u2), w) / BigInt::from((2 * j - 1) * (2 * j));
        if term.is_zero() {
            break;
        }
        if j % 2 == 1 {
            cos_u -= &term;
        } else {
            cos_u += &term;
        }
        j += 1;
    }

    // sin/cos of k·π/4 are 0, ±1 or ±√2/2.
    let h = BigInt::from((BigUint::one() << (2 * w + 1)).sqrt()) >> 1u32;
    let unit = BigInt::one() << w;
    let (sk, ck): (BigInt, BigInt) = match k {
        0 => (BigInt::zero(), unit.clone()),
        1 => (h.clone(), h.clone()),
        2 => (unit.clone(), BigInt::zero()),
        3 => (h.clone(), -h.clone()),
        4 => (BigInt::zero(), -unit.clone()),
        5 => (-h.clone(), -h.clone()),
        6 => (-unit.clone(), BigInt::zero()),
        _ => (-h.clone(), h.clone()),
    };

    // sin(kπ/4 + u), cos(kπ/4 + u)
    let sin_w = round_shift(&(&sk * &cos_u + &ck * &sin_u), w);
    let cos_w = round_shift(&(&ck * &cos_u - &sk * &sin_u), w);

    let err = x.err_ulps().saturating_mul(7).saturating_add(2);
    (
        PreciseReal { mantissa: round_shift(&sin_w, GUARD), err },
        PreciseReal { mantissa: round_shift(&cos_w, GUARD), err },
    )
}

/// Parse a constant: decimal strings (`"0.25"`, `"-2.7"`) or the symbolic
/// tokens `sqrt(k)` / `-sqrt(k)` for integer k.
pub fn parse_constant(s: &str) -> Result<PreciseReal, NumericError> {
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let v = if let Some(rest) = t.strip_prefix("sqrt(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| NumericError::Parse(s.to_string()))?;
        let k: u64 = inner
            .trim()
            .parse()
            .map_err(|_| NumericError::Parse(s.to_string()))?;
        PreciseReal::sqrt_int(k)
    } else {
        PreciseReal::from_decimal_str(t)?
    };
    Ok(if neg { v.neg() } else { v })
}

/// Parse a comma-separated list of constants.
pub fn parse_constant_list(s: &str) -> Result<Vec<PreciseReal>, NumericError> {
    s.split(',').map(parse_constant).collect()
}
