//! Coefficient-multiplier operators.
//!
//! `D_α P = zP' - αP` acts diagonally on monomials, `z^j ↦ (j - α) z^j`, so
//! both it and the second-order operator
//! `D_γ D_α P = z²P'' + (1 - α - γ) zP' + αγ P` are computed coefficientwise.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use crate::poly::Poly;
use crate::roots::{classify, ZeroStatus, DEFAULT_BAND};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorParams {
    pub alpha: Complex64,
    pub gamma: Option<Complex64>,
    pub n: usize,
    /// `Re(α) <= n/2`.
    pub re_alpha_ok: bool,
    /// `Re(γ) <= n/2`; vacuously true without `γ`.
    pub re_gamma_ok: bool,
}

impl OperatorParams {
    pub fn new(alpha: Complex64, gamma: Option<Complex64>, n: usize) -> Self {
        let half = n as f64 / 2.0;
        Self {
            alpha,
            gamma,
            n,
            re_alpha_ok: alpha.re <= half,
            re_gamma_ok: gamma.is_none_or(|g| g.re <= half),
        }
    }

    pub fn admissible(&self) -> bool {
        self.re_alpha_ok && self.re_gamma_ok
    }
}

/// `zP'(z) - αP(z)`; the degree is recomputed when the top multiplier vanishes.
pub fn d_alpha(p: &Poly, alpha: Complex64) -> Poly {
    Poly::trimmed(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(j, &a)| (Complex64::new(j as f64, 0.0) - alpha) * a)
            .collect(),
    )
}

/// `D_γ(D_α P)`, coefficientwise `(j - γ)((j - α) a_j)`.
pub fn d2_compose(p: &Poly, alpha: Complex64, gamma: Complex64) -> Poly {
    d_alpha(&d_alpha(p, alpha), gamma)
}

/// The operator image of the conjugate reciprocal `Q`: `M = zQ' - αQ`
/// without `γ`, `N = z²Q'' + (1 - α - γ)zQ' + αγQ` with it.
pub fn conj_side(p: &Poly, alpha: Complex64, gamma: Option<Complex64>) -> Poly {
    apply(&p.conj_reciprocal(), alpha, gamma)
}

/// `D_α` or `D_γ D_α`, depending on whether `γ` is given.
pub fn apply(p: &Poly, alpha: Complex64, gamma: Option<Complex64>) -> Poly {
    match gamma {
        None => d_alpha(p, alpha),
        Some(g) => d2_compose(p, alpha, g),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominanceReport {
    /// `|P| <= |F|` on the sample grid.
    pub modulus_gate: bool,
    /// All roots of `F` in the closed unit disk.
    pub root_gate: ZeroStatus,
    pub hypothesis_met: bool,
    /// Largest `(|op P(z)| - |op F(z)|) / scale(z)` over the sampled points,
    /// where `scale(z) = Σ |b_j| max(1, |z|)^j` for `op F = Σ b_j z^j`.
    pub max_violation: f64,
    pub holds: bool,
    pub points_checked: usize,
}

pub const DOMINANCE_TOL: f64 = 1e-9;
const EXTERIOR_POINTS: usize = 64;

/// Checks `|op P(z)| <= |op F(z)|` on `samples` circle points and on 64
/// pseudo-random points with `1 < |z| <= 3`, where `op` is `D_α` or
/// `D_γ D_α`. The hypotheses (`|P| <= |F|` on the circle, `F` with all zeros in
/// the closed disk) are checked first; if they fail the report says so and
/// no dominance is asserted.
pub fn pointwise_dominance(
    p: &Poly,
    f: &Poly,
    alpha: Complex64,
    gamma: Option<Complex64>,
    samples: usize,
) -> DominanceReport {
    let samples = samples.max(1);
    let circle: Vec<Complex64> = (0..samples)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / samples as f64))
        .collect();
    let f_scale = f.max_coeff_modulus();
    let modulus_gate = circle
        .iter()
        .all(|&z| p.eval(z).norm() <= f.eval(z).norm() + DOMINANCE_TOL * f_scale);
    let root_gate = if f.degree() == 0 {
        ZeroStatus::AllInClosedDisk
    } else {
        classify(f, 1.0, DEFAULT_BAND)
            .map(|l| l.status)
            .unwrap_or(ZeroStatus::Ambiguous)
    };
    let roots_ok = matches!(
        root_gate,
        ZeroStatus::AllInClosedDisk
            | ZeroStatus::NoneInOpenDiskBoundaryTouch
            | ZeroStatus::Ambiguous
    ) && p.degree() <= f.degree();
    let hypothesis_met = modulus_gate && roots_ok;

    let op_p = apply(p, alpha, gamma);
    let op_f = apply(f, alpha, gamma);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0_u64);
    let exterior: Vec<Complex64> = (0..EXTERIOR_POINTS)
        .map(|_| {
            let r = 3.0 - 2.0 * rng.gen::<f64>();
            Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
        })
        .collect();
    let max_violation = circle
        .iter()
        .chain(exterior.iter())
        .map(|&z| {
            let scale = op_f.abs_eval(z.norm().max(1.0)).max(f64::MIN_POSITIVE);
            (op_p.eval(z).norm() - op_f.eval(z).norm()) / scale
        })
        .fold(f64::NEG_INFINITY, f64::max);
    DominanceReport {
        modulus_gate,
        root_gate,
        hypothesis_met,
        max_violation,
        holds: hypothesis_met && max_violation <= DOMINANCE_TOL,
        points_checked: samples + EXTERIOR_POINTS,
    }
}
