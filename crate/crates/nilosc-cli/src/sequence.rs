//! Sequence specs: parsing the per-kind CLI parameters into generators and
//! evaluating them as weight sequences or orbit record streams.

use num_bigint::BigInt;

use nilosc_core::extension::{
    choose_lambda, CircleRotation, ExtensionState, TowerExtension,
};
use nilosc_core::heisenberg::{
    Convention, FundamentalPoint, HeisenbergElement, HeisenbergMElement,
};
use nilosc_core::numeric::{parse_constant, parse_constant_list, CirclePoint, PreciseReal};
use nilosc_core::oscillation::WeylSeq;
use nilosc_core::polyseq::{
    AffineUnipotentSystem, BracketForm, PhasePoly, QuasiEigenData,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordConvention {
    FirstKind,
    Malcev2,
}

impl CoordConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoordConvention::FirstKind => "first-kind",
            CoordConvention::Malcev2 => "malcev-2",
        }
    }
}

/// Raw per-sequence CLI parameters; `Generator::build` validates them.
#[derive(Debug, Clone)]
pub struct SequenceParams {
    pub kind: String,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub gamma: String,
    pub freq: i64,
    pub expr: Option<String>,
    pub coeffs: Option<String>,
    pub rho: Option<String>,
    pub p: usize,
    pub x0: Option<String>,
    pub matrix: Option<String>,
    pub translation: Option<String>,
    pub y0: Option<String>,
    pub thetas: Option<String>,
    pub fx: Option<String>,
    pub seed: u64,
    pub coords: CoordConvention,
}

pub enum Generator {
    Heisenberg {
        g: HeisenbergMElement,
        freq: i64,
        coords: CoordConvention,
        x0: Option<FundamentalPoint>,
    },
    Bracket(BracketForm),
    PolyPhase(PhasePoly),
    Extension {
        tower: TowerExtension<CircleRotation>,
        state: ExtensionState<CirclePoint>,
    },
    Affine(AffineUnipotentSystem),
    QuasiEigen {
        data: QuasiEigenData,
        fx: CirclePoint,
    },
}

/// Orbit record streams, shaped per sequence kind.
pub enum OrbitRecords {
    /// Reduced nilmanifold / torus coordinates.
    Coords { convention: String, rows: Vec<(u64, Vec<f64>)> },
    /// Tower extension states {n, x, z}.
    Extension { rows: Vec<(u64, Vec<f64>, Vec<f64>)> },
    /// Scalar complex sequences {n, re, im}.
    Scalar { rows: Vec<(u64, f64, f64)> },
}

fn require<'a>(opt: &'a Option<String>, flag: &str, kind: &str) -> Result<&'a str, CliError> {
    opt.as_deref()
        .ok_or_else(|| CliError::usage(format!("--{flag} is required for sequence `{kind}`")))
}

fn circle_list(text: &str) -> Result<Vec<CirclePoint>, CliError> {
    Ok(parse_constant_list(text)?
        .iter()
        .map(PreciseReal::frac_snapped)
        .collect())
}

impl Generator {
    pub fn build(params: &SequenceParams) -> Result<Self, CliError> {
        match params.kind.as_str() {
            "heisenberg" => {
                let alpha = parse_constant_list(require(&params.alpha, "alpha", "heisenberg")?)?;
                let beta = parse_constant_list(require(&params.beta, "beta", "heisenberg")?)?;
                if alpha.is_empty() || alpha.len() != beta.len() {
                    return Err(CliError::usage(
                        "--alpha and --beta must list the same positive number of constants",
                    ));
                }
                let gamma = parse_constant(&params.gamma)?;
                let m = alpha.len();
                if params.coords == CoordConvention::Malcev2 && m != 1 {
                    return Err(CliError::usage("--coords malcev-2 requires m = 1"));
                }
                let x0 = match &params.x0 {
                    None => None,
                    Some(text) => {
                        if m != 1 || params.coords != CoordConvention::FirstKind {
                            return Err(CliError::usage(
                                "--x0 is only supported for m = 1 first-kind orbits",
                            ));
                        }
                        let coords = circle_list(text)?;
                        if coords.len() != 3 {
                            return Err(CliError::usage("--x0 needs exactly 3 coordinates"));
                        }
                        Some(FundamentalPoint::new(coords, Convention::FirstKind))
                    }
                };
                Ok(Generator::Heisenberg {
                    g: HeisenbergMElement::new(alpha, beta, gamma),
                    freq: params.freq,
                    coords: params.coords,
                    x0,
                })
            }
            "bracket" => {
                let expr = require(&params.expr, "expr", "bracket")?;
                Ok(Generator::Bracket(BracketForm::parse(expr)?))
            }
            "poly-phase" => {
                let coeffs = parse_constant_list(require(&params.coeffs, "coeffs", "poly-phase")?)?;
                Ok(Generator::PolyPhase(PhasePoly::from_reals(&coeffs)))
            }
            "extension" => {
                let rho = parse_constant(require(&params.rho, "rho", "extension")?)?.frac_snapped();
                if params.p == 0 {
                    return Err(CliError::usage("--p must be at least 1"));
                }
                let x0 = match &params.x0 {
                    Some(text) => parse_constant(text)?.frac_snapped(),
                    None => CirclePoint::zero(),
                };
                let tower =
                    TowerExtension::new(CircleRotation::new(rho), choose_lambda(params.seed));
                let state = ExtensionState::new(x0, vec![CirclePoint::zero(); params.p]);
                Ok(Generator::Extension { tower, state })
            }
            "affine" => {
                let matrix_text = require(&params.matrix, "matrix", "affine")?;
                let u: Vec<Vec<BigInt>> = matrix_text
                    .split(';')
                    .map(|row| {
                        row.split(',')
                            .map(|e| {
                                e.trim().parse::<i64>().map(BigInt::from).map_err(|_| {
                                    CliError::usage(format!("bad matrix entry `{e}`"))
                                })
                            })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                let b = circle_list(require(&params.translation, "translation", "affine")?)?;
                let y0 = circle_list(require(&params.y0, "y0", "affine")?)?;
                Ok(Generator::Affine(AffineUnipotentSystem::new(u, b, y0)?))
            }
            "quasi-eigen" => {
                let thetas = circle_list(require(&params.thetas, "thetas", "quasi-eigen")?)?;
                if thetas.is_empty() {
                    return Err(CliError::usage("--thetas needs at least one phase"));
                }
                let fx = match &params.fx {
                    Some(text) => parse_constant(text)?.frac_snapped(),
                    None => CirclePoint::zero(),
                };
                Ok(Generator::QuasiEigen { data: QuasiEigenData::new(thetas), fx })
            }
            other => Err(CliError::usage(format!(
                "unknown sequence kind `{other}` (expected heisenberg | bracket | poly-phase | extension | affine | quasi-eigen)"
            ))),
        }
    }

    /// Canonical text for output headers.
    pub fn describe(params: &SequenceParams) -> String {
        fn push(parts: &mut Vec<String>, key: &str, v: &Option<String>) {
            if let Some(v) = v {
                parts.push(format!("{key}={v}"));
            }
        }
        let mut parts = vec![params.kind.clone()];
        push(&mut parts, "alpha", &params.alpha);
        push(&mut parts, "beta", &params.beta);
        if params.kind == "heisenberg" {
            parts.push(format!("gamma={}", params.gamma));
            parts.push(format!("freq={}", params.freq));
            parts.push(format!("coords={}", params.coords.as_str()));
        }
        push(&mut parts, "expr", &params.expr);
        push(&mut parts, "coeffs", &params.coeffs);
        push(&mut parts, "rho", &params.rho);
        if params.kind == "extension" {
            parts.push(format!("p={}", params.p));
            parts.push(format!("seed={}", params.seed));
        }
        push(&mut parts, "x0", &params.x0);
        push(&mut parts, "matrix", &params.matrix);
        push(&mut parts, "translation", &params.translation);
        push(&mut parts, "y0", &params.y0);
        push(&mut parts, "thetas", &params.thetas);
        push(&mut parts, "fx", &params.fx);
        parts.join(" ")
    }

    /// The weight sequence w_0..w_{n−1} this spec generates.
    pub fn weyl_seq(&self, n: usize) -> Result<WeylSeq, CliError> {
        match self {
            Generator::Heisenberg { g, freq, .. } => {
                let freq = BigInt::from(*freq);
                let mut phases = Vec::with_capacity(n);
                for k in 0..n as u64 {
                    phases.push(g.omega(k)?.scale_mod1(&freq)?);
                }
                Ok(WeylSeq::Phases(phases))
            }
            Generator::Bracket(form) => {
                // single unit-coefficient character: stay in phase form
                let terms = form.phi().terms();
                if terms.len() == 1 && (terms[0].1 - 1.0).norm() < 1e-15 {
                    let freq = BigInt::from(terms[0].0);
                    let mut phases = Vec::with_capacity(n);
                    for k in 0..n as u64 {
                        phases.push(form.bracket_point(k)?.scale_mod1(&freq)?);
                    }
                    Ok(WeylSeq::Phases(phases))
                } else {
                    let mut samples = Vec::with_capacity(n);
                    for k in 0..n as u64 {
                        samples.push(form.eval(k)?);
                    }
                    Ok(WeylSeq::Samples(samples))
                }
            }
            Generator::PolyPhase(p) => {
                let mut phases = Vec::with_capacity(n);
                for k in 0..n as u64 {
                    phases.push(p.eval_phase(k)?);
                }
                Ok(WeylSeq::Phases(phases))
            }
            Generator::Extension { tower, state } => {
                let mut phases = Vec::with_capacity(n);
                for k in 0..n as u64 {
                    let s = tower.power_closed_form(state, k)?;
                    phases.push(s.z.last().expect("p >= 1").clone());
                }
                Ok(WeylSeq::Phases(phases))
            }
            Generator::Affine(sys) => {
                let mut phases = Vec::with_capacity(n);
                let mut y = sys.initial_point().to_vec();
                for _ in 0..n {
                    phases.push(y[0].clone());
                    y = sys.step(&y)?;
                }
                Ok(WeylSeq::Phases(phases))
            }
            Generator::QuasiEigen { data, fx } => {
                let mut phases = Vec::with_capacity(n);
                for k in 0..n as u64 {
                    phases.push(fx.add(&data.phase(k)?));
                }
                Ok(WeylSeq::Phases(phases))
            }
        }
    }

    /// Orbit records for `n` steps.
    pub fn orbit_records(&self, n: u64) -> Result<OrbitRecords, CliError> {
        match self {
            Generator::Heisenberg { g, coords, x0, .. } => {
                let mut rows = Vec::with_capacity(n as usize);
                for k in 0..n {
                    let point = match (coords, x0) {
                        (CoordConvention::Malcev2, _) => {
                            // the parameters are read as Mal'cev-II coordinates
                            let gm = nilosc_core::heisenberg::MalcevIIElement::new(
                                g.a[0].clone(),
                                g.b[0].clone(),
                                g.c.clone(),
                            );
                            gm.orbit_origin(k)?
                        }
                        (CoordConvention::FirstKind, Some(start)) => {
                            let gh = HeisenbergElement::new(
                                g.a[0].clone(),
                                g.b[0].clone(),
                                g.c.clone(),
                            );
                            gh.orbit_point(start, k)?
                        }
                        (CoordConvention::FirstKind, None) => g.power(k).reduce_fundamental()?.0,
                    };
                    rows.push((k, point.coords().iter().map(|c| c.to_f64()).collect()));
                }
                Ok(OrbitRecords::Coords { convention: coords.as_str().to_owned(), rows })
            }
            Generator::Extension { tower, state } => {
                let mut rows = Vec::with_capacity(n as usize);
                for k in 0..n {
                    let s = tower.power_closed_form(state, k)?;
                    rows.push((
                        k,
                        vec![s.base.to_f64()],
                        s.z.iter().map(|z| z.to_f64()).collect(),
                    ));
                }
                Ok(OrbitRecords::Extension { rows })
            }
            Generator::Affine(sys) => {
                let mut rows = Vec::with_capacity(n as usize);
                let mut y = sys.initial_point().to_vec();
                for k in 0..n {
                    rows.push((k, y.iter().map(|c| c.to_f64()).collect()));
                    y = sys.step(&y)?;
                }
                Ok(OrbitRecords::Coords { convention: "torus".to_owned(), rows })
            }
            _ => {
                let seq = self.weyl_seq(n as usize)?;
                let rows = (0..n)
                    .map(|k| {
                        let v = seq.sample(k as usize);
                        (k, v.re, v.im)
                    })
                    .collect();
                Ok(OrbitRecords::Scalar { rows })
            }
        }
    }
}
