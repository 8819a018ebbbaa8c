//! Simultaneous root finding (Aberth–Ehrlich) and zero-location
//! classification against a disk `|z| <= r`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::poly::Poly;

pub const MAX_ITERATIONS: usize = 200;
/// Relative size of an Aberth correction below which a root is frozen.
pub const CORRECTION_TOL: f64 = 1e-13;
/// Residual bound required for a report to count as converged.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Default half-width of the boundary band used by [`classify`].
pub const DEFAULT_BAND: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootReport {
    pub roots: Vec<Complex64>,
    /// `|P(z)| / (max_j |a_j| · max(1, |z|)^n)` per root.
    pub residuals: Vec<f64>,
    pub min_modulus: f64,
    pub max_modulus: f64,
    pub converged: bool,
    #[serde(skip)]
    pub iterations: usize,
}

/// All `n` roots of `p`, with multiplicity. Exact zeros at the origin are
/// split off first; the rest go through Aberth–Ehrlich iteration followed
/// by a short Newton polish.
pub fn find_roots(p: &Poly) -> Result<RootReport> {
    let n = p.degree();
    if n == 0 {
        return Err(LabError::InvalidArgument(
            "root finding needs nominal degree >= 1".to_string(),
        ));
    }
    let coeffs = p.coeffs();
    let shift = coeffs.iter().take_while(|c| **c == ZERO).count();
    let mut roots = vec![ZERO; shift];
    let reduced = &coeffs[shift..];
    let m = reduced.len() - 1;
    let mut aberth_ok = true;
    let mut iterations = 0;
    match m {
        0 => {}
        1 => roots.push(-reduced[0] / reduced[1]),
        _ => {
            let (found, ok, iters) = aberth(reduced);
            aberth_ok = ok;
            iterations = iters;
            roots.extend(found.into_iter().map(|z| polish(reduced, z)));
        }
    }

    let scale = p.max_coeff_modulus();
    let residuals: Vec<f64> = roots
        .iter()
        .map(|&z| p.eval(z).norm() / (scale * z.norm().max(1.0).powi(n as i32)))
        .collect();
    let min_modulus = roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let max_modulus = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let converged = aberth_ok && residuals.iter().all(|&r| r <= RESIDUAL_TOL);
    Ok(RootReport {
        roots,
        residuals,
        min_modulus,
        max_modulus,
        converged,
        iterations,
    })
}

/// `P(z) / P'(z)` evaluated in the numerically safe direction, together
/// with a flag telling whether `|P(z)|` is already at rounding level.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let m = coeffs.len() - 1;
    let modulus = z.norm();
    let slack = 4.0 * (m as f64 + 1.0) * f64::EPSILON;
    if modulus <= 1.0 {
        let mut p = ZERO;
        let mut dp = ZERO;
        let mut abs = 0.0;
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            abs = abs * modulus + c.norm();
        }
        let tiny = p.norm() <= slack * abs;
        if dp == ZERO {
            return (ZERO, true);
        }
        (p / dp, tiny)
    } else {
        // P(z) = z^m R(1/z) with R the reversed polynomial
        let y = ONE / z;
        let ym = y.norm();
        let mut r = ZERO;
        let mut dr = ZERO;
        let mut abs = 0.0;
        for &c in coeffs.iter() {
            dr = dr * y + r;
            r = r * y + c;
            abs = abs * ym + c.norm();
        }
        let tiny = r.norm() <= slack * abs;
        if r == ZERO {
            return (ZERO, true);
        }
        let denom = y * (Complex64::new(m as f64, 0.0) - y * dr / r);
        if denom == ZERO {
            return (ZERO, true);
        }
        (ONE / denom, tiny)
    }
}

fn aberth(coeffs: &[Complex64]) -> (Vec<Complex64>, bool, usize) {
    let m = coeffs.len() - 1;
    let radius = (coeffs[0].norm() / coeffs[m].norm()).powf(1.0 / m as f64);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let theta = (2.0 * PI * k as f64 + GOLDEN_ANGLE) / m as f64;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; m];
    for iter in 1..=MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..m {
            if done[i] {
                continue;
            }
            let (ratio, tiny) = newton_ratio(coeffs, z[i]);
            if ratio == ZERO {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d == ZERO {
                        ZERO
                    } else {
                        ONE / d
                    }
                })
                .sum();
            let step = ratio / (ONE - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                all_done = false;
                continue;
            }
            z[i] -= step;
            if tiny || step.norm() <= CORRECTION_TOL * z[i].norm() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return (z, true, iter);
        }
    }
    (z, false, MAX_ITERATIONS)
}

fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let value = |z: Complex64| coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c).norm();
    let mut current = value(z);
    for _ in 0..3 {
        let (ratio, tiny) = newton_ratio(coeffs, z);
        if tiny || ratio == ZERO {
            break;
        }
        let candidate = z - ratio;
        let v = value(candidate);
        if v < current {
            z = candidate;
            current = v;
        } else {
            break;
        }
    }
    z
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ZeroStatus {
    AllInClosedDisk,
    NoneInClosedDisk,
    NoneInOpenDiskBoundaryTouch,
    Mixed,
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroLocation {
    pub status: ZeroStatus,
    pub radius: f64,
    pub band: f64,
    /// Roots with `|z| < r - band`.
    pub inside: usize,
    /// Roots with `|z|` within `band` of `r`.
    pub on_boundary: usize,
    /// Roots with `|z| > r + band`.
    pub outside: usize,
    pub converged: bool,
}

/// Classifies the zeros of `p` relative to the disk `|z| <= r`.
///
/// Roots whose modulus lies within `band` of `r` are treated as boundary
/// roots. A boundary root with no root strictly inside gives
/// `NoneInOpenDiskBoundaryTouch`; a boundary root next to strictly interior
/// roots and no exterior ones gives `Ambiguous`, because the sign of the
/// perturbation decides between "all in the closed disk" and "mixed".
pub fn classify(p: &Poly, r: f64, band: f64) -> Result<ZeroLocation> {
    if !(r > 0.0) || !(band >= 0.0) {
        return Err(LabError::InvalidArgument(format!(
            "classify needs r > 0 and band >= 0 (got r = {r}, band = {band})"
        )));
    }
    let empty = |status, converged| ZeroLocation {
        status,
        radius: r,
        band,
        inside: 0,
        on_boundary: 0,
        outside: 0,
        converged,
    };
    if p.is_zero() {
        return Ok(empty(ZeroStatus::Ambiguous, false));
    }
    if p.degree() == 0 {
        return Ok(empty(ZeroStatus::NoneInClosedDisk, true));
    }
    let report = find_roots(p)?;
    let mut loc = empty(ZeroStatus::Ambiguous, report.converged);
    for z in &report.roots {
        let m = z.norm();
        if m < r - band {
            loc.inside += 1;
        } else if m > r + band {
            loc.outside += 1;
        } else {
            loc.on_boundary += 1;
        }
    }
    if !report.converged {
        return Ok(loc);
    }
    loc.status = match (loc.inside > 0, loc.on_boundary > 0, loc.outside > 0) {
        (true, false, false) => ZeroStatus::AllInClosedDisk,
        (false, false, true) => ZeroStatus::NoneInClosedDisk,
        (false, true, _) => ZeroStatus::NoneInOpenDiskBoundaryTouch,
        (true, _, true) => ZeroStatus::Mixed,
        (true, true, false) => ZeroStatus::Ambiguous,
        (false, false, false) => unreachable!("degree >= 1 has at least one root"),
    };
    Ok(loc)
}

/// Hausdorff distance between two finite point sets in the plane.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let directed = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_z5_plus_1_roots() {
        let p = Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let rep = find_roots(&p).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.roots.len(), 5);
        let expected = 0.5f64.powf(0.2);
        assert!((expected - 0.870_550_563_296_124).abs() < 1e-12);
        for z in &rep.roots {
            assert!((z.norm() - expected).abs() < 1e-13);
        }
        assert!(rep.residuals.iter().all(|&r| r < 1e-14));
    }

    #[test]
    fn real_quadratic() {
        let p = Poly::from_real(&[2.0, -3.0, 1.0]).unwrap();
        let rep = find_roots(&p).unwrap();
        assert!(hausdorff(&rep.roots, &[c(1.0, 0.0), c(2.0, 0.0)]) < 1e-14);
    }

    #[test]
    fn multiple_root_at_origin() {
        let p = Poly::monomial(ONE, 5).unwrap();
        let rep = find_roots(&p).unwrap();
        assert_eq!(rep.roots, vec![ZERO; 5]);
        assert_eq!(rep.residuals, vec![0.0; 5]);
        assert!(rep.converged);
    }

    #[test]
    fn clustered_root_is_converged_by_residual() {
        // (z - 0.5)^4 (z + 2)
        let p = Poly::from_roots(ONE, &[c(0.5, 0.0); 4].iter().copied().chain([c(-2.0, 0.0)]).collect::<Vec<_>>())
            .unwrap();
        let rep = find_roots(&p).unwrap();
        assert!(rep.converged, "{rep:?}");
        assert!(rep.residuals.iter().all(|&r| r <= RESIDUAL_TOL));
    }

    #[test]
    fn degree_zero_is_rejected() {
        let p = Poly::from_real(&[3.0]).unwrap();
        assert!(matches!(find_roots(&p), Err(LabError::InvalidArgument(_))));
    }

    #[test]
    fn classify_examples() {
        let p = Poly::from_real(&[2.0, 1.0]).unwrap();
        assert_eq!(
            classify(&p, 1.0, DEFAULT_BAND).unwrap().status,
            ZeroStatus::NoneInClosedDisk
        );
        let p = Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        assert_eq!(
            classify(&p, 1.0, DEFAULT_BAND).unwrap().status,
            ZeroStatus::AllInClosedDisk
        );
        let p = Poly::from_real(&[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            classify(&p, 1.0, DEFAULT_BAND).unwrap().status,
            ZeroStatus::NoneInOpenDiskBoundaryTouch
        );
    }

    #[test]
    fn classify_mixed_and_ambiguous() {
        let p = Poly::from_real(&[2.0, -3.0, 1.0]).unwrap();
        assert_eq!(classify(&p, 1.5, 1e-9).unwrap().status, ZeroStatus::Mixed);
        // roots 1 and 0.5 against r = 1
        let p = Poly::from_roots(ONE, &[c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert_eq!(classify(&p, 1.0, 1e-9).unwrap().status, ZeroStatus::Ambiguous);
        // constant: no zeros at all
        let p = Poly::from_real(&[3.0]).unwrap();
        assert_eq!(
            classify(&p, 1.0, 1e-9).unwrap().status,
            ZeroStatus::NoneInClosedDisk
        );
        assert!(classify(&p, 0.0, 1e-9).is_err());
    }

    #[test]
    fn scaling_leaves_roots_unchanged() {
        let p = Poly::new(vec![c(0.3, -1.0), c(2.0, 0.5), c(-1.0, 0.25), c(0.7, 0.7)]).unwrap();
        let base = find_roots(&p).unwrap().roots;
        for s in [c(2.0, 0.0), c(0.0, 1.0), c(1e6, 0.0)] {
            let scaled = find_roots(&p.scale(s)).unwrap().roots;
            assert!(hausdorff(&base, &scaled) < 1e-12);
        }
    }
}
