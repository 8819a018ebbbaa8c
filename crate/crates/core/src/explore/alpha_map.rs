//! Scan of the α-plane for a fixed family of polynomials.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::inequalities::{check, CheckParams, InequalityId, Verdict};
use crate::norms::NormExponent;
use crate::poly::Poly;

pub const CSV_HEADER: &str = "re_alpha,im_alpha,max_ratio,verdict";

/// Rectangular grid with inclusive endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaGrid {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub re_steps: usize,
    pub im_steps: usize,
}

impl AlphaGrid {
    pub fn new(re: [f64; 2], im: [f64; 2], re_steps: usize, im_steps: usize) -> Result<Self> {
        let g = Self {
            re,
            im,
            re_steps,
            im_steps,
        };
        if re_steps == 0 || im_steps == 0 {
            return Err(LabError::InvalidArgument("grid needs at least one step per axis".into()));
        }
        if !re.iter().chain(&im).all(|x| x.is_finite()) || re[0] > re[1] || im[0] > im[1] {
            return Err(LabError::InvalidArgument(format!(
                "bad grid ranges re {re:?} im {im:?}"
            )));
        }
        Ok(g)
    }

    fn axis(range: [f64; 2], steps: usize, k: usize) -> f64 {
        if steps == 1 {
            range[0]
        } else {
            range[0] + (range[1] - range[0]) * k as f64 / (steps - 1) as f64
        }
    }

    pub fn re_at(&self, k: usize) -> f64 {
        Self::axis(self.re, self.re_steps, k)
    }

    pub fn im_at(&self, k: usize) -> f64 {
        Self::axis(self.im, self.im_steps, k)
    }

    pub fn re_spacing(&self) -> f64 {
        if self.re_steps > 1 {
            (self.re[1] - self.re[0]) / (self.re_steps - 1) as f64
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaCell {
    pub alpha: Complex64,
    pub max_ratio: f64,
    pub verdict: Verdict,
}

/// Smallest `Re α` on one grid row whose verdict is VIOLATED, if any.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowBoundary {
    pub im: f64,
    pub first_violation_re: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaMapResult {
    pub inequality_id: InequalityId,
    pub p: NormExponent,
    pub gamma: Option<Complex64>,
    pub grid: AlphaGrid,
    pub family_size: usize,
    /// Row-major: imaginary part outer, real part inner.
    pub cells: Vec<AlphaCell>,
    pub rows: Vec<RowBoundary>,
    pub errors: usize,
}

impl AlphaMapResult {
    /// Minimum over rows of the first violating real part.
    pub fn boundary_estimate(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.first_violation_re)
            .min_by(|a, b| a.total_cmp(b))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * (self.cells.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            let v = match c.verdict {
                Verdict::Holds => "HOLDS",
                Verdict::Violated => "VIOLATED",
                Verdict::Inconclusive => "INCONCLUSIVE",
            };
            let _ = writeln!(out, "{},{},{},{}", c.alpha.re, c.alpha.im, c.max_ratio, v);
        }
        out
    }
}

fn worst(a: Verdict, b: Verdict) -> Verdict {
    use Verdict::*;
    match (a, b) {
        (Violated, _) | (_, Violated) => Violated,
        (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
        _ => Holds,
    }
}

/// Per cell: the maximal ratio over `family` and the worst verdict, where a
/// single VIOLATED member marks the cell.
pub fn alpha_map(
    id: InequalityId,
    family: &[Poly],
    p: NormExponent,
    gamma: Option<Complex64>,
    grid: AlphaGrid,
) -> Result<AlphaMapResult> {
    if family.is_empty() {
        return Err(LabError::InvalidArgument("alpha map family is empty".into()));
    }
    if !id.takes_alpha() {
        return Err(LabError::InvalidArgument(format!("{id} has no free alpha to map")));
    }
    let total = grid.re_steps * grid.im_steps;
    let evaluated: Vec<(AlphaCell, usize)> = (0..total)
        .into_par_iter()
        .map(|k| {
            let alpha = Complex64::new(grid.re_at(k % grid.re_steps), grid.im_at(k / grid.re_steps));
            let mut max_ratio = 0.0f64;
            let mut verdict = Verdict::Holds;
            let mut errors = 0;
            for poly in family {
                match check(id, poly, &CheckParams::new(Some(alpha), gamma, p)) {
                    Ok(r) => {
                        max_ratio = max_ratio.max(r.ratio);
                        verdict = worst(verdict, r.verdict);
                    }
                    Err(_) => {
                        errors += 1;
                        verdict = worst(verdict, Verdict::Inconclusive);
                    }
                }
            }
            (
                AlphaCell {
                    alpha,
                    max_ratio,
                    verdict,
                },
                errors,
            )
        })
        .collect();
    let errors = evaluated.iter().map(|(_, e)| e).sum();
    let cells: Vec<AlphaCell> = evaluated.into_iter().map(|(c, _)| c).collect();
    let rows = cells
        .chunks(grid.re_steps)
        .map(|row| RowBoundary {
            im: row[0].alpha.im,
            first_violation_re: row
                .iter()
                .find(|c| c.verdict == Verdict::Violated)
                .map(|c| c.alpha.re),
        })
        .collect();
    Ok(AlphaMapResult {
        inequality_id: id,
        p,
        gamma,
        grid,
        family_size: family.len(),
        cells,
        rows,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_z5_plus_1() -> Poly {
        Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 2.0]).unwrap()
    }

    #[test]
    fn binomial_boundary_is_half_degree() {
        let grid = AlphaGrid::new([0.0, 5.0], [-3.0, 3.0], 101, 61).unwrap();
        let m = alpha_map(
            InequalityId::Thm1First,
            &[two_z5_plus_1()],
            NormExponent::Finite(2.0),
            None,
            grid,
        )
        .unwrap();
        assert_eq!(m.cells.len(), 101 * 61);
        for c in &m.cells {
            let expect = if c.alpha == Complex64::new(5.0, 0.0) {
                // right side vanishes
                Verdict::Inconclusive
            } else if c.alpha.re <= 2.5 + 1e-12 {
                Verdict::Holds
            } else {
                Verdict::Violated
            };
            assert_eq!(c.verdict, expect, "{}", c.alpha);
        }
        let b = m.boundary_estimate().unwrap();
        assert!(b > 2.5 && b - 2.5 <= grid.re_spacing() + 1e-12);
        let csv = m.to_csv();
        assert!(csv.starts_with("re_alpha,im_alpha,max_ratio,verdict\n"));
        assert_eq!(csv.lines().count(), 101 * 61 + 1);
        assert_eq!(m.errors, 1);
    }

    #[test]
    fn boundary_refines_with_steps() {
        let mut prev = f64::INFINITY;
        for steps in [11, 21, 41, 81] {
            let grid = AlphaGrid::new([0.0, 5.0], [0.0, 0.0], steps, 1).unwrap();
            let m = alpha_map(
                InequalityId::Thm1First,
                &[two_z5_plus_1()],
                NormExponent::Finite(2.0),
                None,
                grid,
            )
            .unwrap();
            let err = m.boundary_estimate().unwrap() - 2.5;
            assert!(err > 0.0 && err <= grid.re_spacing() + 1e-12);
            assert!(err <= prev);
            prev = err;
        }
    }

    #[test]
    fn monomial_map_is_flat() {
        let grid = AlphaGrid::new([-4.0, 8.0], [-2.0, 2.0], 13, 5).unwrap();
        let z5 = Poly::monomial(Complex64::new(1.0, 0.0), 5).unwrap();
        let m = alpha_map(InequalityId::Thm1First, &[z5], NormExponent::Finite(2.0), None, grid)
            .unwrap();
        for c in &m.cells {
            // at α = n both sides vanish
            let expect = if c.alpha == Complex64::new(5.0, 0.0) { 0.0 } else { 1.0 };
            assert!((c.max_ratio - expect).abs() < 1e-12, "{}", c.alpha);
        }
        assert!(m.boundary_estimate().is_none());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(AlphaGrid::new([1.0, 0.0], [0.0, 0.0], 3, 3).is_err());
        assert!(AlphaGrid::new([0.0, 1.0], [0.0, 0.0], 0, 3).is_err());
        let grid = AlphaGrid::new([0.0, 1.0], [0.0, 0.0], 2, 1).unwrap();
        assert!(alpha_map(InequalityId::Thm1First, &[], NormExponent::Sup, None, grid).is_err());
        assert!(alpha_map(
            InequalityId::Bernstein,
            &[two_z5_plus_1()],
            NormExponent::Sup,
            None,
            grid
        )
        .is_err());
    }
}
