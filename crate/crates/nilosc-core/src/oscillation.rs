//! Weyl averages, certified suprema over polynomial phase families, the Van
//! der Corput inequality, second-order Cesàro means, and decay diagnostics.
//!
//! The sup of |A_N(P)| = |(1/N)Σ_{n<N} w_n e^{2πiP(n)}| over the non-compact
//! family ℝ_d[t] reduces exactly to the coefficient torus [0,1)^{d+1}: for
//! integer n the average depends only on the fractional parts of the
//! coefficients. This reduction is what makes the sweep finite and it is the
//! single most important correctness step in this module. Two further exact
//! reductions shape the sweep:
//!
//! * the constant coefficient only rotates A_N by a unit scalar, so |A_N| is
//!   constant along it and it is dropped from the sweep entirely;
//! * the linear coefficient enters as a pure linear phase, so for each fixed
//!   tuple of higher coefficients one discrete Fourier transform of the
//!   modulated sequence evaluates A_N on all M grid points of that
//!   coefficient at once (M a power of two ≥ 4N by default).
//!
//! The resulting [`SupEstimate`] is a certified bracket for the sup over the
//! family {P : coefficients of degree ≥ 2 on the declared grid, degree ≤ 1
//! coefficients anywhere in ℝ}; for d ≤ 1 that family is all of ℝ_d[t]. The
//! slack covering the continuum of linear coefficients is the smaller of two
//! rigorous bounds at the grid half-step s = 1/(2M): the additive Lipschitz
//! bound 2πs·(1/N)Σn|w_n| (from |e^{iu}−e^{iv}| ≤ |u−v|) and the
//! multiplicative Bernstein bound lower·r/(1−r) with r = πν·s = πν/(2M),
//! ν = N−1 (A_N is a trigonometric polynomial of degree ν in the linear
//! coefficient; centering its spectrum halves the derivative constant to
//! πν). The
//! declared step sizes of the higher coefficients are recorded in the grid
//! metadata — those are the sweep's blind spots, and users are expected to
//! read them.
//!
//! Averages accumulate in compensated (Kahan) summation in double precision;
//! a full-precision "golden" path revalidates the fast path on fixtures.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use crate::fft::{fft_pos, next_pow2};
use crate::numeric::{
    unit_exp, unit_exp_full, CirclePoint, NumericError, PreciseReal,
};
use crate::polyseq::PhasePoly;

#[cfg(feature = "std")]
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OscError {
    #[error("empty averaging range (N = 0)")]
    EmptyRange,
    #[error("correlation window H = {h} must be smaller than N = {n}")]
    BadWindow { h: usize, n: usize },
    #[error("grid too coarse: slack {slack} exceeds requested bound {bound}")]
    GridTooCoarse { slack: f64, bound: f64 },
    #[error("degenerate decay fit: {0}")]
    DegenerateFit(&'static str),
    #[error("sequence shorter than N")]
    SequenceTooShort,
    #[error("report lengths N must be strictly increasing")]
    NonIncreasingN,
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
struct KahanComplex {
    sum_re: f64,
    c_re: f64,
    sum_im: f64,
    c_im: f64,
}

impl KahanComplex {
    fn add(&mut self, v: Complex64) {
        let y = v.re - self.c_re;
        let t = self.sum_re + y;
        self.c_re = (t - self.sum_re) - y;
        self.sum_re = t;
        let y = v.im - self.c_im;
        let t = self.sum_im + y;
        self.c_im = (t - self.sum_im) - y;
        self.sum_im = t;
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re, self.sum_im)
    }
}

/// A weight sequence (w_n). Unimodular sequences produced by the generators
/// keep their phases in fixed point, which lets modulation by polynomial
/// phases stay exact until the final complex evaluation; arbitrary complex
/// sequences are carried as samples.
#[derive(Debug, Clone)]
pub enum WeylSeq {
    Phases(Vec<CirclePoint>),
    Samples(Vec<Complex64>),
}

impl WeylSeq {
    pub fn len(&self) -> usize {
        match self {
            WeylSeq::Phases(v) => v.len(),
            WeylSeq::Samples(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sample(&self, k: usize) -> Complex64 {
        match self {
            WeylSeq::Phases(v) => unit_exp(&v[k]).to_complex(),
            WeylSeq::Samples(v) => v[k],
        }
    }

    pub fn phase(&self, k: usize) -> Option<&CirclePoint> {
        match self {
            WeylSeq::Phases(v) => Some(&v[k]),
            WeylSeq::Samples(_) => None,
        }
    }

    /// (1/N)Σ|w_n|, the trivial upper bound for any Weyl average.
    pub fn mean_abs(&self, n: usize) -> f64 {
        match self {
            WeylSeq::Phases(_) => 1.0,
            WeylSeq::Samples(v) => {
                let mut acc = KahanComplex::default();
                for s in &v[..n] {
                    acc.add(Complex64::new(s.norm(), 0.0));
                }
                acc.value().re / n as f64
            }
        }
    }
}

/// {P(k)} for k = 0..len by exact forward differences: a degree-d polynomial
/// needs d circle additions per step instead of a big-integer power, and the
/// mantissas agree bit for bit with termwise `scale_mod1`.
fn phase_progression(p: &PhasePoly, len: usize) -> Result<Vec<CirclePoint>, NumericError> {
    let d = p.degree();
    let mut diffs: Vec<CirclePoint> = (0..=d as u64)
        .map(|k| p.eval_phase(k))
        .collect::<Result<_, _>>()?;
    for level in 1..=d {
        for idx in (level..=d).rev() {
            diffs[idx] = diffs[idx].sub(&diffs[idx - 1]);
        }
    }
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(diffs[0].clone());
        for i in 0..d {
            let next = diffs[i].add(&diffs[i + 1]);
            diffs[i] = next;
        }
    }
    Ok(out)
}

/// A_N(P) = (1/N)Σ_{n<N} w_n e^{2πiP(n)}.
#[derive(Debug, Clone)]
pub struct WeylAverage {
    pub n: usize,
    pub value: Complex64,
    pub poly: PhasePoly,
}

/// The average in fast mode: exact phases, compensated double-precision sum.
pub fn weyl_average(w: &WeylSeq, n: usize, p: &PhasePoly) -> Result<WeylAverage, OscError> {
    if n == 0 {
        return Err(OscError::EmptyRange);
    }
    if w.len() < n {
        return Err(OscError::SequenceTooShort);
    }
    let phases = phase_progression(p, n)?;
    let mut acc = KahanComplex::default();
    match w {
        WeylSeq::Phases(wp) => {
            for (wk, pk) in wp[..n].iter().zip(&phases) {
                acc.add(unit_exp(&wk.add(pk)).to_complex());
            }
        }
        WeylSeq::Samples(ws) => {
            for (wk, pk) in ws[..n].iter().zip(&phases) {
                acc.add(wk * unit_exp(pk).to_complex());
            }
        }
    }
    Ok(WeylAverage { n, value: acc.value() / n as f64, poly: p.clone() })
}

/// The average at full precision (golden mode): fixed-point sin/cos summed
/// exactly, rounded once at the end. Used to validate the fast path.
pub fn weyl_average_golden(w: &WeylSeq, n: usize, p: &PhasePoly) -> Result<Complex64, OscError> {
    if n == 0 {
        return Err(OscError::EmptyRange);
    }
    if w.len() < n {
        return Err(OscError::SequenceTooShort);
    }
    let phases = phase_progression(p, n)?;
    let mut re = PreciseReal::zero();
    let mut im = PreciseReal::zero();
    for (k, pk) in phases.iter().enumerate() {
        match w {
            WeylSeq::Phases(wp) => {
                let (s, c) = unit_exp_full(&wp[k].add(pk));
                re = re.add(&c);
                im = im.add(&s);
            }
            WeylSeq::Samples(ws) => {
                let (s, c) = unit_exp_full(pk);
                let wr = PreciseReal::from_f64(ws[k].re);
                let wi = PreciseReal::from_f64(ws[k].im);
                // (wr + i wi)(c + i s)
                re = re.add(&wr.mul(&c).sub(&wi.mul(&s)));
                im = im.add(&wr.mul(&s).add(&wi.mul(&c)));
            }
        }
    }
    let inv_n = PreciseReal::from_ratio(&BigInt::from(1), &BigInt::from(n));
    Ok(Complex64::new(re.mul(&inv_n).to_f64(), im.mul(&inv_n).to_f64()))
}

/// Grid specification for [`sup_over_degree`].
#[derive(Debug, Clone)]
pub struct GridSpec {
    /// Points per coefficient of degree ≥ 2.
    pub points_per_coeff: usize,
    /// DFT size for the linear-coefficient sweep; power of two ≥ 4N by
    /// default.
    pub transform_size: Option<usize>,
    /// Extra higher-coefficient tuples (c₂,…,c_d) evaluated alongside the
    /// lattice grid.
    pub injected: Vec<Vec<CirclePoint>>,
    /// Reject the estimate if the certified slack exceeds this bound.
    pub max_slack: Option<f64>,
}

impl GridSpec {
    /// 256 points per coefficient up to degree 2, 64 beyond.
    pub fn default_for_degree(degree: usize) -> Self {
        Self {
            points_per_coeff: if degree <= 2 { 256 } else { 64 },
            transform_size: None,
            injected: Vec::new(),
            max_slack: None,
        }
    }
}

/// Grid metadata recorded with an estimate: the sweep's declared blind spots.
#[derive(Debug, Clone, PartialEq)]
pub struct GridInfo {
    pub transform_size: usize,
    pub points_per_coeff: usize,
    pub injected: usize,
}

/// Certified bracket for sup|A_N| over polynomials with higher coefficients
/// on the declared grid and free linear/constant coefficients.
#[derive(Debug, Clone)]
pub struct SupEstimate {
    pub degree: usize,
    pub n: usize,
    /// Max over the evaluated grid; a true lower bound for the sup.
    pub lower: f64,
    /// lower + slack, capped at the trivial bound (1/N)Σ|w_n|.
    pub upper: f64,
    /// upper − lower.
    pub slack: f64,
    /// Coefficients (c₁,…,c_d) of the best grid polynomial; c₀ = 0.
    pub argmax: Vec<f64>,
    pub grid: GridInfo,
}

fn enumerate_tuples(degree: usize, grid_points: usize) -> Vec<Vec<usize>> {
    // index tuples for coefficients of degree 2..=degree
    let dims = degree.saturating_sub(1);
    let mut tuples = vec![Vec::new()];
    for _ in 0..dims {
        let mut next = Vec::with_capacity(tuples.len() * grid_points);
        for t in &tuples {
            for g in 0..grid_points {
                let mut t2 = t.clone();
                t2.push(g);
                next.push(t2);
            }
        }
        tuples = next;
    }
    tuples
}

struct TupleOutcome {
    best: f64,
    best_bin: usize,
    tuple: Vec<CirclePoint>,
}

fn sweep_tuple(
    w: &WeylSeq,
    n: usize,
    m_size: usize,
    tuple: &[CirclePoint],
) -> Result<TupleOutcome, OscError> {
    // modulation polynomial Σ_{j≥2} c_j t^j (zero constant and linear parts)
    let mut buf = vec![Complex64::zero(); m_size];
    if tuple.is_empty() {
        for (k, slot) in buf[..n].iter_mut().enumerate() {
            *slot = w.sample(k);
        }
    } else {
        let mut coeffs = vec![CirclePoint::zero(); 2];
        coeffs.extend(tuple.iter().cloned());
        let modulation = phase_progression(&PhasePoly::new(coeffs), n)?;
        match w {
            WeylSeq::Phases(wp) => {
                for (slot, (wk, mk)) in buf.iter_mut().zip(wp[..n].iter().zip(&modulation)) {
                    *slot = unit_exp(&wk.add(mk)).to_complex();
                }
            }
            WeylSeq::Samples(ws) => {
                for (slot, (wk, mk)) in buf.iter_mut().zip(ws[..n].iter().zip(&modulation)) {
                    *slot = wk * unit_exp(mk).to_complex();
                }
            }
        }
    }
    fft_pos(&mut buf);
    let mut best = -1.0f64;
    let mut best_bin = 0usize;
    for (bin, v) in buf.iter().enumerate() {
        let a = v.norm_sqr();
        if a > best {
            best = a;
            best_bin = bin;
        }
    }
    Ok(TupleOutcome {
        best: libm::sqrt(best) / n as f64,
        best_bin,
        tuple: tuple.to_vec(),
    })
}

/// Certified sup of |A_N(P)| over degree-d polynomial phases (coefficient
/// family described in the module docs).
pub fn sup_over_degree(
    w: &WeylSeq,
    n: usize,
    degree: usize,
    grid: &GridSpec,
) -> Result<SupEstimate, OscError> {
    if n == 0 {
        return Err(OscError::EmptyRange);
    }
    if w.len() < n {
        return Err(OscError::SequenceTooShort);
    }
    let mean_abs = w.mean_abs(n);

    if degree == 0 {
        let value = weyl_average(w, n, &PhasePoly::zero())?.value.norm();
        return Ok(SupEstimate {
            degree,
            n,
            lower: value,
            upper: value,
            slack: 0.0,
            argmax: Vec::new(),
            grid: GridInfo { transform_size: 0, points_per_coeff: 0, injected: 0 },
        });
    }

    let m_size = next_pow2(grid.transform_size.unwrap_or(4 * n).max(n));
    let g = grid.points_per_coeff.max(1);

    let mut tuples: Vec<Vec<CirclePoint>> = enumerate_tuples(degree, g)
        .into_iter()
        .map(|idx| {
            idx.into_iter()
                .map(|k| {
                    PreciseReal::from_ratio(&BigInt::from(k), &BigInt::from(g)).frac_snapped()
                })
                .collect()
        })
        .collect();
    for inj in &grid.injected {
        assert_eq!(inj.len(), degree.saturating_sub(1), "injected tuple has wrong arity");
        tuples.push(inj.clone());
    }
    let injected = grid.injected.len();

    #[cfg(feature = "std")]
    let outcomes: Result<Vec<TupleOutcome>, OscError> = tuples
        .par_iter()
        .map(|t| sweep_tuple(w, n, m_size, t))
        .collect();
    #[cfg(not(feature = "std"))]
    let outcomes: Result<Vec<TupleOutcome>, OscError> =
        tuples.iter().map(|t| sweep_tuple(w, n, m_size, t)).collect();
    let outcomes = outcomes?;

    // deterministic reduction: first strict maximum in tuple order
    let mut best: Option<&TupleOutcome> = None;
    for o in &outcomes {
        if best.map(|b| o.best > b.best).unwrap_or(true) {
            best = Some(o);
        }
    }
    let best = best.expect("at least one tuple");
    let lower = best.best;

    // Nearest grid point is within s = 1/(2M).
    // Additive: |A(c+δ)−A(c)| ≤ 2π|δ|·(1/N)Σ n|w_n|.
    // Bernstein: centering the spectrum (frequencies 0..ν shifted to ±ν/2)
    // gives ‖A'‖ ≤ πν·sup, so sup ≤ grid max / (1 − πν/(2M)).
    let nu = (n - 1) as f64;
    let weighted_m1 = match w {
        WeylSeq::Phases(_) => nu / 2.0,
        WeylSeq::Samples(v) => {
            let mut acc = KahanComplex::default();
            for (k, s) in v[..n].iter().enumerate() {
                acc.add(Complex64::new(k as f64 * s.norm(), 0.0));
            }
            acc.value().re / n as f64
        }
    };
    let additive = core::f64::consts::PI * weighted_m1 / m_size as f64;
    let bernstein_ratio = core::f64::consts::PI * nu / (2.0 * m_size as f64);
    let bernstein = if bernstein_ratio < 1.0 {
        lower * bernstein_ratio / (1.0 - bernstein_ratio)
    } else {
        f64::INFINITY
    };
    let mut slack = additive.min(bernstein);
    let mut upper = lower + slack;
    if upper > mean_abs {
        upper = mean_abs.max(lower);
        slack = upper - lower;
    }
    if let Some(bound) = grid.max_slack {
        if slack > bound {
            return Err(OscError::GridTooCoarse { slack, bound });
        }
    }

    let mut argmax = Vec::with_capacity(degree);
    argmax.push(best.best_bin as f64 / m_size as f64);
    argmax.extend(best.tuple.iter().map(|c| c.to_f64()));

    Ok(SupEstimate {
        degree,
        n,
        lower,
        upper,
        slack,
        argmax,
        grid: GridInfo { transform_size: m_size, points_per_coeff: g, injected },
    })
}

/// Both sides of the Van der Corput inequality for the modulated sequence
/// u_n = e^{2πinα}·w_n.
#[derive(Debug, Clone, Copy)]
pub struct VdcCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Tolerance covering floating accumulation in the Van der Corput check; the
/// inequality itself is exact.
pub const VDC_TOLERANCE: f64 = 9.313225746154785e-10; // 2^-30

/// Evaluate |(1/N)Σ_{n<N} u_n|² against
/// (N+H)/(N(H+1))·(1/N)Σ|u_n|² +
/// 2(N+H)/(N(H+1)²)·|Σ_{h=1}^H (H+1−h)(N−h)/N · (1/(N−h))Σ_{n<N−h} u_{n+h}ū_n|.
pub fn van_der_corput_check(
    w: &WeylSeq,
    n: usize,
    h: usize,
    alpha: &CirclePoint,
) -> Result<VdcCheck, OscError> {
    if n == 0 {
        return Err(OscError::EmptyRange);
    }
    if h >= n {
        return Err(OscError::BadWindow { h, n });
    }
    if w.len() < n {
        return Err(OscError::SequenceTooShort);
    }

    // u_n = e^{2πinα} w_n
    let mut u = Vec::with_capacity(n);
    let mut rot = CirclePoint::zero();
    for k in 0..n {
        match w {
            WeylSeq::Phases(wp) => u.push(unit_exp(&wp[k].add(&rot)).to_complex()),
            WeylSeq::Samples(ws) => u.push(ws[k] * unit_exp(&rot).to_complex()),
        }
        rot = rot.add(alpha);
    }

    let mut mean = KahanComplex::default();
    let mut norm = KahanComplex::default();
    for v in &u {
        mean.add(*v);
        norm.add(Complex64::new(v.norm_sqr(), 0.0));
    }
    let lhs = (mean.value() / n as f64).norm_sqr();
    let mean_norm_sq = norm.value().re / n as f64;

    let nf = n as f64;
    let hf = h as f64;
    let mut weighted = KahanComplex::default();
    for shift in 1..=h {
        let mut corr = KahanComplex::default();
        for k in 0..n - shift {
            corr.add(u[k + shift] * u[k].conj());
        }
        // (H+1−h)(N−h)/N · (1/(N−h)) Σ = (H+1−h)/N · Σ
        weighted.add(corr.value() * ((hf + 1.0 - shift as f64) / nf));
    }
    let rhs = (nf + hf) / (nf * (hf + 1.0)) * mean_norm_sq
        + 2.0 * (nf + hf) / (nf * (hf + 1.0) * (hf + 1.0)) * weighted.value().norm();
    Ok(VdcCheck { lhs, rhs, holds: lhs <= rhs + VDC_TOLERANCE })
}

/// Second-order Cesàro mean (1/(H+1)²)·Σ_{h=1}^{H}(H+1−h)·values_h, with
/// `values[i]` holding value_{i+1}.
pub fn cesaro2(values: &[Complex64], h: usize) -> Complex64 {
    assert!(h >= 1 && values.len() >= h, "need values_1..values_H");
    let mut acc = KahanComplex::default();
    for (i, v) in values[..h].iter().enumerate() {
        let weight = (h - i) as f64; // H + 1 − (i+1)
        acc.add(v * weight);
    }
    acc.value() / ((h + 1) as f64 * (h + 1) as f64)
}

/// Weyl-criterion magnitudes |(1/N)Σ_{n<N} e^{2πim·x_n}| for 1 ≤ m ≤ max_freq.
pub fn equidistribution_weyl_test(x: &[CirclePoint], n: usize, max_freq: u32) -> Vec<f64> {
    let n = n.min(x.len());
    let mut out = Vec::with_capacity(max_freq as usize);
    for m in 1..=max_freq {
        let mut acc = KahanComplex::default();
        for xk in &x[..n] {
            let scaled = xk.scale_mod1(&BigInt::from(m)).expect("small frequency");
            acc.add(unit_exp(&scaled).to_complex());
        }
        out.push((acc.value() / n as f64).norm());
    }
    out
}

/// Least-squares decay fit of log(sup) against log(N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub residual: f64,
}

/// Fit log(sup) = exponent·log(N) + const; residual is the RMS deviation.
pub fn decay_fit(points: &[(usize, f64)]) -> Result<DecayFit, OscError> {
    if points.len() < 3 {
        return Err(OscError::DegenerateFit("need at least 3 points"));
    }
    if points.iter().any(|(_, s)| *s <= 0.0) {
        return Err(OscError::DegenerateFit("sup bounds must be positive"));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|(n, s)| (libm::log(*n as f64), libm::log(*s)))
        .collect();
    let spread = logs
        .iter()
        .map(|(_, y)| *y)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), y| (lo.min(y), hi.max(y)));
    if spread.1 - spread.0 < 1e-12 {
        return Err(OscError::DegenerateFit("all sup values equal"));
    }
    let k = logs.len() as f64;
    let mean_x = logs.iter().map(|(x, _)| x).sum::<f64>() / k;
    let mean_y = logs.iter().map(|(_, y)| y).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let ss: f64 = logs
        .iter()
        .map(|(x, y)| {
            let r = y - (exponent * x + intercept);
            r * r
        })
        .sum();
    Ok(DecayFit { exponent, residual: libm::sqrt(ss / k) })
}

/// Per-N sup estimates for one sequence, with an optional decay fit.
#[derive(Debug, Clone)]
pub struct OscillationReport {
    pub sequence: String,
    pub points: Vec<SupEstimate>,
    pub fit: Option<DecayFit>,
}

impl OscillationReport {
    pub fn new(sequence: impl Into<String>) -> Self {
        Self { sequence: sequence.into(), points: Vec::new(), fit: None }
    }

    /// Append an estimate; the lengths N must be strictly increasing.
    pub fn push(&mut self, estimate: SupEstimate) -> Result<(), OscError> {
        if let Some(last) = self.points.last() {
            if estimate.n <= last.n {
                return Err(OscError::NonIncreasingN);
            }
        }
        self.points.push(estimate);
        Ok(())
    }

    /// Fit the decay of the certified upper bounds.
    pub fn fit_decay(&mut self) -> Result<DecayFit, OscError> {
        let pts: Vec<(usize, f64)> = self.points.iter().map(|p| (p.n, p.upper)).collect();
        let fit = decay_fit(&pts)?;
        self.fit = Some(fit);
        Ok(fit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn linear_phase_seq(alpha: &CirclePoint, n: usize) -> WeylSeq {
        let mut v = Vec::with_capacity(n);
        let mut acc = CirclePoint::zero();
        for _ in 0..n {
            v.push(acc.clone());
            acc = acc.add(alpha);
        }
        WeylSeq::Phases(v)
    }

    fn quadratic_phase_seq(c: &PreciseReal, n: usize) -> WeylSeq {
        let p = PhasePoly::from_reals(&[PreciseReal::zero(), PreciseReal::zero(), c.clone()]);
        WeylSeq::Phases(phase_progression(&p, n).unwrap())
    }

    fn random_samples(rng: &mut SplitMix64, n: usize) -> WeylSeq {
        WeylSeq::Samples(
            (0..n)
                .map(|_| {
                    Complex64::from_polar(rng.next_f64(), 2.0 * core::f64::consts::PI * rng.next_f64())
                })
                .collect(),
        )
    }

    #[test]
    fn progression_matches_direct_eval() {
        let mut rng = SplitMix64::new(151);
        for degree in 0..=4usize {
            let coeffs: Vec<CirclePoint> =
                (0..=degree).map(|_| CirclePoint::from_f64(rng.next_f64())).collect();
            let p = PhasePoly::new(coeffs);
            let prog = phase_progression(&p, 300).unwrap();
            for (k, got) in prog.iter().enumerate() {
                assert_eq!(
                    got.mantissa(),
                    p.eval_phase(k as u64).unwrap().mantissa(),
                    "degree={degree} k={k}"
                );
            }
        }
    }

    #[test]
    fn weyl_average_trivial_cases() {
        let ones = WeylSeq::Samples(vec![Complex64::new(1.0, 0.0); 100]);
        let avg = weyl_average(&ones, 100, &PhasePoly::zero()).unwrap();
        assert!((avg.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(weyl_average(&ones, 0, &PhasePoly::zero()).unwrap_err(), OscError::EmptyRange);

        // w_n = e^{−2πiP(n)} for the same P: phases cancel exactly
        let p = PhasePoly::from_reals(&[
            PreciseReal::from_f64(0.3),
            PreciseReal::sqrt_int(2),
            PreciseReal::sqrt_int(3),
        ]);
        let n = 500;
        let conj_phases: Vec<CirclePoint> = (0..n as u64)
            .map(|k| p.eval_phase(k).unwrap().neg())
            .collect();
        let w = WeylSeq::Phases(conj_phases);
        let avg = weyl_average(&w, n, &p).unwrap();
        assert!((avg.value - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn weyl_average_geometric_series_oracle() {
        // w_n = e^{2πinα}, P = 0: |A_N| = |sin(πNα)|/(N sin(πα)) for the
        // dyadic α actually used.
        let alpha = PreciseReal::sqrt_int(2).frac().unwrap();
        let n = 4096usize;
        let w = linear_phase_seq(&alpha, n);
        let avg = weyl_average(&w, n, &PhasePoly::zero()).unwrap();
        let na = alpha.scale_u64(n as u64).unwrap().to_f64();
        let a = alpha.to_f64();
        let expected = libm::sin(core::f64::consts::PI * na).abs()
            / (n as f64 * libm::sin(core::f64::consts::PI * a));
        assert!((avg.value.norm() - expected).abs() < 1e-12);
    }

    #[test]
    fn weyl_average_bounded_by_mean_abs() {
        let mut rng = SplitMix64::new(157);
        for _ in 0..20 {
            let n = 64 + rng.next_below(400) as usize;
            let w = random_samples(&mut rng, n);
            let p = PhasePoly::from_reals(&[
                PreciseReal::from_f64(rng.next_f64()),
                PreciseReal::from_f64(rng.next_f64()),
            ]);
            let avg = weyl_average(&w, n, &p).unwrap();
            assert!(avg.value.norm() <= w.mean_abs(n) + 1e-12);
        }
    }

    #[test]
    fn golden_validates_fast_path() {
        let mut rng = SplitMix64::new(163);
        let n = 400usize;
        let phases: Vec<CirclePoint> = (0..n).map(|_| CirclePoint::from_f64(rng.next_f64())).collect();
        let w = WeylSeq::Phases(phases);
        let p = PhasePoly::from_reals(&[PreciseReal::sqrt_int(2), PreciseReal::sqrt_int(5)]);
        let fast = weyl_average(&w, n, &p).unwrap().value;
        let golden = weyl_average_golden(&w, n, &p).unwrap();
        assert!((fast - golden).norm() < 1e-10);

        let ws = random_samples(&mut rng, n);
        let fast = weyl_average(&ws, n, &p).unwrap().value;
        let golden = weyl_average_golden(&ws, n, &p).unwrap();
        assert!((fast - golden).norm() < 1e-10);
    }

    #[test]
    fn sup_of_zero_sequence() {
        let w = WeylSeq::Samples(vec![Complex64::zero(); 256]);
        let est = sup_over_degree(&w, 256, 2, &GridSpec {
            points_per_coeff: 8,
            transform_size: None,
            injected: Vec::new(),
            max_slack: None,
        })
        .unwrap();
        assert_eq!(est.lower, 0.0);
        assert_eq!(est.upper, 0.0);
    }

    #[test]
    fn sup_linear_sweep_matches_brute_force() {
        // the FFT sweep evaluates exactly A_N(c₁ = k/M)
        let mut rng = SplitMix64::new(167);
        let n = 64usize;
        let w = random_samples(&mut rng, n);
        let est = sup_over_degree(&w, n, 1, &GridSpec {
            points_per_coeff: 1,
            transform_size: Some(256),
            injected: Vec::new(),
            max_slack: None,
        })
        .unwrap();
        let m = 256usize;
        let mut brute = -1.0f64;
        for k in 0..m {
            let c1 = PreciseReal::from_ratio(&BigInt::from(k), &BigInt::from(m)).frac_snapped();
            let p = PhasePoly::new(vec![CirclePoint::zero(), c1]);
            brute = brute.max(weyl_average(&w, n, &p).unwrap().value.norm());
        }
        assert!((est.lower - brute).abs() < 1e-10);
    }

    #[test]
    fn sup_pure_phase_bracket_contains_true_sup() {
        // pure linear phase: true sup over ℝ₁[t] is 1 at the conjugate coefficient
        let alpha = PreciseReal::sqrt_int(2).frac().unwrap();
        let n = 512usize;
        let w = linear_phase_seq(&alpha, n);
        let est = sup_over_degree(&w, n, 1, &GridSpec::default_for_degree(1)).unwrap();
        assert!(est.lower <= 1.0 + 1e-12);
        assert!(est.upper >= 1.0 - 1e-9, "upper = {}", est.upper);
        assert!(est.upper <= 1.0 + 1e-12, "capped at mean |w|");
    }

    #[test]
    fn sup_injected_conjugate_tuple_gives_exact_one() {
        // w_n = e^{2πin²√2}, degree 2, conjugate tuple c₂ = {−√2} injected:
        // the modulated sequence is identically 1 and the k=0 bin finds it.
        let n = 2048usize;
        let w = quadratic_phase_seq(&PreciseReal::sqrt_int(2), n);
        let conj = PreciseReal::sqrt_int(2).neg().frac().unwrap();
        let grid = GridSpec {
            points_per_coeff: 4,
            transform_size: None,
            injected: vec![vec![conj]],
            max_slack: None,
        };
        let est = sup_over_degree(&w, n, 2, &grid).unwrap();
        assert_eq!(est.lower, 1.0, "exact cancellation at the injected tuple");
        assert_eq!(est.upper, 1.0);
    }

    #[test]
    fn sup_refinement_monotonicity() {
        let mut rng = SplitMix64::new(173);
        let n = 512usize;
        let w = random_samples(&mut rng, n);
        // refine the transform size: lower never decreases, upper never increases
        let coarse = sup_over_degree(&w, n, 2, &GridSpec {
            points_per_coeff: 8,
            transform_size: Some(4 * n),
            injected: Vec::new(),
            max_slack: None,
        })
        .unwrap();
        let fine = sup_over_degree(&w, n, 2, &GridSpec {
            points_per_coeff: 16,
            transform_size: Some(16 * n),
            injected: Vec::new(),
            max_slack: None,
        })
        .unwrap();
        assert!(fine.lower >= coarse.lower - 1e-12);
        assert!(fine.upper <= coarse.upper + 1e-12);
    }

    #[test]
    fn sup_degree_monotonicity() {
        let mut rng = SplitMix64::new(179);
        let n = 256usize;
        let w = random_samples(&mut rng, n);
        let spec = GridSpec {
            points_per_coeff: 8,
            transform_size: Some(2048),
            injected: Vec::new(),
            max_slack: None,
        };
        let d1 = sup_over_degree(&w, n, 1, &spec).unwrap();
        let d2 = sup_over_degree(&w, n, 2, &spec).unwrap();
        let d3 = sup_over_degree(&w, n, 3, &spec).unwrap();
        // ℝ₁[t] ⊂ ℝ₂[t] ⊂ ℝ₃[t]; the zero tuple is on every grid
        assert!(d1.lower <= d2.lower + 1e-12);
        assert!(d2.lower <= d3.lower + 1e-12);
    }

    #[test]
    fn grid_too_coarse_is_reported() {
        let mut rng = SplitMix64::new(181);
        let n = 512usize;
        let w = random_samples(&mut rng, n);
        let err = sup_over_degree(&w, n, 1, &GridSpec {
            points_per_coeff: 1,
            transform_size: Some(n), // tiny transform: huge slack
            injected: Vec::new(),
            max_slack: Some(1e-6),
        })
        .unwrap_err();
        assert!(matches!(err, OscError::GridTooCoarse { .. }));
    }

    #[test]
    fn vdc_trivial_and_exact_cases() {
        let ones = WeylSeq::Samples(vec![Complex64::new(1.0, 0.0); 128]);
        let check = van_der_corput_check(&ones, 128, 0, &CirclePoint::zero()).unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!(check.rhs >= 1.0 - 1e-12);
        assert!(check.holds);

        // w_n = e^{2πinβ}, α = −β: u ≡ 1, lhs = 1, rhs = 1 at H = 0
        let beta = PreciseReal::sqrt_int(3).frac().unwrap();
        let w = linear_phase_seq(&beta, 256);
        let check = van_der_corput_check(&w, 256, 0, &beta.neg()).unwrap();
        assert!((check.lhs - 1.0).abs() < 1e-12);
        assert!((check.rhs - 1.0).abs() < 1e-12);
        assert!(check.holds);
        // near-equality degrades gracefully for small H
        for h in [1usize, 2, 4] {
            let c = van_der_corput_check(&w, 256, h, &beta.neg()).unwrap();
            assert!(c.holds);
            assert!(c.rhs >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn vdc_window_validation() {
        let ones = WeylSeq::Samples(vec![Complex64::new(1.0, 0.0); 16]);
        let err = van_der_corput_check(&ones, 16, 16, &CirclePoint::zero()).unwrap_err();
        assert_eq!(err, OscError::BadWindow { h: 16, n: 16 });
    }

    #[test]
    fn vdc_random_sequences_hold() {
        let mut rng = SplitMix64::new(191);
        for _ in 0..50 {
            let n = 32 + rng.next_below(512) as usize;
            let h = rng.next_below(n as u64) as usize;
            let w = random_samples(&mut rng, n);
            let alpha = CirclePoint::from_f64(rng.next_f64());
            let check = van_der_corput_check(&w, n, h, &alpha).unwrap();
            assert!(check.holds, "violation at n={n} h={h}: {} > {}", check.lhs, check.rhs);
        }
    }

    #[test]
    fn cesaro2_cases() {
        // values ≡ 1 → H/(2(H+1))
        for h in [1usize, 2, 10, 100] {
            let values = vec![Complex64::new(1.0, 0.0); h];
            let got = cesaro2(&values, h);
            let expected = h as f64 / (2.0 * (h as f64 + 1.0));
            assert!((got.re - expected).abs() < 1e-12 && got.im.abs() < 1e-15);
        }
        // H = 1 → values₁/4
        let v = vec![Complex64::new(0.3, -0.7)];
        let got = cesaro2(&v, 1);
        assert!((got - Complex64::new(0.075, -0.175)).norm() < 1e-15);
    }

    #[test]
    fn cesaro2_rotating_values_bound() {
        // values_h = e^{2πihθ}: |mean| ≤ 1/((H+1)·sin πθ) < 10/(H·sin πθ)
        let theta = PreciseReal::sqrt_int(5).frac().unwrap();
        let h = 10_000usize;
        let mut values = Vec::with_capacity(h);
        let mut acc = CirclePoint::zero();
        for _ in 0..h {
            acc = acc.add(&theta);
            values.push(unit_exp(&acc).to_complex());
        }
        let got = cesaro2(&values, h).norm();
        let bound = 10.0 / (h as f64 * libm::sin(core::f64::consts::PI * theta.to_f64()));
        assert!(got < bound, "{got} !< {bound}");
    }

    #[test]
    fn equidistribution_cases() {
        // point mass: magnitude 1 for every frequency
        let x = vec![CirclePoint::zero(); 500];
        for mag in equidistribution_weyl_test(&x, 500, 4) {
            assert!((mag - 1.0).abs() < 1e-12);
        }
        // rotation by {√2}: geometric series bound
        let alpha = PreciseReal::sqrt_int(2).frac().unwrap();
        let n = 100_000usize;
        let mut orbit = Vec::with_capacity(n);
        let mut acc = CirclePoint::zero();
        for _ in 0..n {
            orbit.push(acc.clone());
            acc = acc.add(&alpha);
        }
        let mags = equidistribution_weyl_test(&orbit, n, 1);
        let bound = 2.0 / (n as f64 * (2.0 * libm::sin(core::f64::consts::PI * alpha.to_f64())).abs());
        assert!(mags[0] <= bound, "{} !<= {bound}", mags[0]);
    }

    #[test]
    fn decay_fit_cases() {
        let flat = [(100usize, 1.0), (1000, 1.0), (10_000, 1.0)];
        assert!(matches!(decay_fit(&flat).unwrap_err(), OscError::DegenerateFit(_)));

        let sqrt_decay: Vec<(usize, f64)> = [100usize, 400, 1600, 6400]
            .iter()
            .map(|&n| (n, 3.0 / libm::sqrt(n as f64)))
            .collect();
        let fit = decay_fit(&sqrt_decay).unwrap();
        assert!((fit.exponent + 0.5).abs() < 1e-9);
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn report_requires_increasing_n() {
        let w = WeylSeq::Samples(vec![Complex64::new(1.0, 0.0); 64]);
        let est = sup_over_degree(&w, 64, 1, &GridSpec::default_for_degree(1)).unwrap();
        let mut report = OscillationReport::new("test");
        report.push(est.clone()).unwrap();
        assert_eq!(report.push(est).unwrap_err(), OscError::NonIncreasingN);
    }
}
