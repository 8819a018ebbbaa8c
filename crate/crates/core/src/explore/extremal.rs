//! Local search for the largest ratio an inequality admits at fixed degree.
//!
//! The search runs over a parameterization of the hypothesis class, so every
//! iterate is admissible by construction:
//!
//! * unrestricted: the `2n + 2` real coordinates of the coefficients;
//! * zero-free: root moduli `1 + e^s` and arguments, monic;
//! * self-inversive: the pairing phase, the lower half of the coefficients
//!   and (for even degree) the real middle factor.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::generators::{
    disk_point, gen_poly, self_inversive_coeffs, self_inversive_half_len, stream_rng, GeneratorKind,
};
use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use crate::error::{LabError, Result};
use crate::inequalities::{check, ratio_ungated, CheckParams, CheckReport, InequalityId, PolyClass};
use crate::norms::NormExponent;
use crate::poly::Poly;

/// Largest degree the search accepts.
pub const MAX_SEARCH_DEGREE: usize = 16;

/// Offset from the unit circle used by the seeded zero-free start.
pub const SEED_CIRCLE_OFFSET: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalConfig {
    pub inequality_id: InequalityId,
    pub n: usize,
    pub alpha: Option<Complex64>,
    pub gamma: Option<Complex64>,
    pub p: NormExponent,
    pub restarts: usize,
    pub seed: u64,
    pub options: NelderMeadOptions,
}

impl ExtremalConfig {
    pub fn new(id: InequalityId, n: usize, alpha: Option<Complex64>, p: NormExponent) -> Self {
        Self {
            inequality_id: id,
            n,
            alpha,
            gamma: None,
            p,
            restarts: 50,
            seed: 0,
            options: NelderMeadOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartOutcome {
    pub start: String,
    pub ratio: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalResult {
    pub inequality_id: InequalityId,
    pub n: usize,
    pub p: NormExponent,
    pub alpha: Option<Complex64>,
    pub gamma: Option<Complex64>,
    pub restarts: usize,
    pub seed: u64,
    pub ratio_best: f64,
    /// Best polynomial found, scaled to unit coefficient 2-norm.
    pub witness: Poly,
    pub best_start: String,
    pub evaluations: usize,
    /// Full gated check of the witness.
    pub report: CheckReport,
    pub starts: Vec<StartOutcome>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Space {
    Coefficients,
    ZeroFreeRoots,
    SelfInversive,
}

fn space_for(id: InequalityId) -> Space {
    match id.polynomial_class() {
        PolyClass::Any => Space::Coefficients,
        PolyClass::ZeroFree => Space::ZeroFreeRoots,
        PolyClass::SelfInversive => Space::SelfInversive,
    }
}

fn decode(space: Space, n: usize, x: &[f64]) -> Result<Poly> {
    match space {
        Space::Coefficients => Poly::new(x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()),
        Space::ZeroFreeRoots => {
            let roots: Vec<Complex64> = x
                .chunks(2)
                .map(|c| Complex64::from_polar(1.0 + c[0].exp(), c[1]))
                .collect();
            Poly::from_roots(Complex64::new(1.0, 0.0), &roots)
        }
        Space::SelfInversive => {
            let u = Complex64::from_polar(1.0, x[0]);
            let h = self_inversive_half_len(n);
            let half: Vec<Complex64> = (0..h)
                .map(|j| Complex64::new(x[1 + 2 * j], x[2 + 2 * j]))
                .collect();
            let t = if n % 2 == 0 { x[1 + 2 * h] } else { 0.0 };
            Poly::new(self_inversive_coeffs(n, u, &half, t))
        }
    }
}

fn encode_coeffs(p: &Poly) -> Vec<f64> {
    p.coeffs().iter().flat_map(|c| [c.re, c.im]).collect()
}

fn encode_roots(roots: &[Complex64]) -> Vec<f64> {
    roots
        .iter()
        .flat_map(|r| [(r.norm() - 1.0).ln(), r.arg()])
        .collect()
}

fn encode_self_inversive(n: usize, phase: f64, half: &[Complex64], t: f64) -> Vec<f64> {
    let mut x = vec![phase];
    x.extend(half.iter().flat_map(|c| [c.re, c.im]));
    if n % 2 == 0 {
        x.push(t);
    }
    x
}

/// Starting points derived from the known equality and witness families.
fn seeded_starts(space: Space, n: usize) -> Vec<(String, Vec<f64>)> {
    let one = Complex64::new(1.0, 0.0);
    match space {
        Space::Coefficients => {
            let mono = Poly::monomial(one, n).expect("valid monomial");
            let two = Poly::binomial(Complex64::new(2.0, 0.0), n, one).expect("valid binomial");
            vec![
                ("seed:monomial".to_string(), encode_coeffs(&mono)),
                ("seed:2z^n+1".to_string(), encode_coeffs(&two)),
            ]
        }
        Space::ZeroFreeRoots => {
            let rho = 1.0 + SEED_CIRCLE_OFFSET;
            let roots: Vec<Complex64> = (0..n)
                .map(|k| Complex64::from_polar(rho, (2 * k + 1) as f64 * PI / n as f64))
                .collect();
            vec![("seed:z^n+1".to_string(), encode_roots(&roots))]
        }
        Space::SelfInversive => {
            let mut half = vec![Complex64::new(0.0, 0.0); self_inversive_half_len(n)];
            half[0] = one;
            vec![("seed:z^n+1".to_string(), encode_self_inversive(n, 0.0, &half, 0.0))]
        }
    }
}

fn random_start(space: Space, n: usize, seed: u64, k: usize) -> Result<Vec<f64>> {
    let mut rng = stream_rng(seed, k as u64);
    Ok(match space {
        Space::Coefficients => encode_coeffs(&gen_poly(&GeneratorKind::Unrestricted, n, &mut rng)?),
        Space::ZeroFreeRoots => (0..n)
            .flat_map(|_| {
                let s = rng.gen_range(0.05f64..=3.0).ln();
                [s, rng.gen_range(-PI..PI)]
            })
            .collect(),
        Space::SelfInversive => {
            let phase = rng.gen_range(-PI..PI);
            let half: Vec<Complex64> = (0..self_inversive_half_len(n))
                .map(|_| disk_point(&mut rng, 1.0))
                .collect();
            let t = rng.gen_range(-1.0..=1.0);
            encode_self_inversive(n, phase, &half, t)
        }
    })
}

struct Run {
    label: String,
    poly: Option<Poly>,
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

/// Maximizes the ratio of `cfg.inequality_id` from the seeded starts and
/// `cfg.restarts` random ones. The result is a lower bound on the supremum.
pub fn extremal_search(cfg: &ExtremalConfig) -> Result<ExtremalResult> {
    let n = cfg.n;
    if n == 0 || n > MAX_SEARCH_DEGREE {
        return Err(LabError::InvalidArgument(format!(
            "search degree must be in 1..={MAX_SEARCH_DEGREE}, got {n}"
        )));
    }
    let id = cfg.inequality_id;
    let params = CheckParams::new(cfg.alpha, cfg.gamma, cfg.p);
    // surface missing parameters before the search starts
    let probe = Poly::monomial(Complex64::new(1.0, 0.0), n)?;
    ratio_ungated(id, &probe, &params).or_else(|e| match e {
        LabError::DegenerateRhs => Ok(0.0),
        other => Err(other),
    })?;

    let space = space_for(id);
    let mut starts = seeded_starts(space, n);
    for k in 0..cfg.restarts {
        starts.push((format!("restart:{k}"), random_start(space, n, cfg.seed, k)?));
    }

    let runs: Vec<Run> = starts
        .into_par_iter()
        .map(|(label, x0)| {
            let objective = |x: &[f64]| match decode(space, n, x) {
                Ok(p) => ratio_ungated(id, &p, &params).map_or(f64::INFINITY, |r| -r),
                Err(_) => f64::INFINITY,
            };
            let r = nelder_mead(objective, &x0, &cfg.options);
            let poly = decode(space, n, &r.x).ok().map(|p| {
                let s = p.coeff_l2();
                p.scale(Complex64::new(1.0 / s, 0.0))
            });
            Run {
                label,
                poly,
                iterations: r.iterations,
                evaluations: r.evaluations,
                converged: r.converged,
            }
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let mut outcomes = Vec::with_capacity(runs.len());
    let mut best: Option<(CheckReport, Poly, String)> = None;
    for run in runs {
        let report = run.poly.as_ref().and_then(|p| check(id, p, &params).ok());
        outcomes.push(StartOutcome {
            start: run.label.clone(),
            ratio: report.as_ref().map_or(f64::NAN, |r| r.ratio),
            iterations: run.iterations,
            converged: run.converged,
        });
        if let (Some(report), Some(poly)) = (report, run.poly) {
            if best.as_ref().is_none_or(|(b, _, _)| report.ratio > b.ratio) {
                best = Some((report, poly, run.label));
            }
        }
    }
    let (report, witness, best_start) = best.ok_or_else(|| {
        LabError::InvalidArgument("no start produced an evaluable polynomial".to_string())
    })?;
    Ok(ExtremalResult {
        inequality_id: id,
        n,
        p: report.p,
        alpha: report.alpha,
        gamma: report.gamma,
        restarts: cfg.restarts,
        seed: cfg.seed,
        ratio_best: report.ratio,
        witness,
        best_start,
        evaluations,
        report,
        starts: outcomes,
    })
}
