//! Dense complex polynomials with an explicit nominal degree.
//!
//! Coefficients are stored in ascending order: `coeffs()[j]` multiplies `z^j`.
//! The nominal degree is `coeffs().len() - 1` and validating constructors
//! require the top coefficient to be nonzero. The only way to obtain the
//! zero polynomial is through an operation whose result vanishes identically
//! (the derivative of a constant, an operator annihilating every coefficient);
//! it is represented as the degree-0 constant `0` and norms treat it as `0`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LabError, Result};

/// Default upper bound on the nominal degree accepted by [`Poly::new`].
pub const DEFAULT_MAX_DEGREE: usize = 64;

/// Default tolerance for [`Poly::is_self_inversive`], relative to the largest
/// coefficient modulus.
pub const SELF_INVERSIVE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Validating constructor with the default degree cap.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::with_degree_cap(coeffs, DEFAULT_MAX_DEGREE)
    }

    pub fn with_degree_cap(coeffs: Vec<Complex64>, cap: usize) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(LabError::InvalidArgument(
                "coefficient list is empty".to_string(),
            ));
        }
        if let Some(index) = coeffs
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(LabError::NonFiniteCoefficient { index });
        }
        let degree = coeffs.len() - 1;
        if degree > cap {
            return Err(LabError::DegreeTooLarge { degree, cap });
        }
        if coeffs.iter().all(|c| *c == ZERO) {
            return Err(LabError::ZeroPolynomial);
        }
        if coeffs[degree] == ZERO {
            return Err(LabError::ZeroLeadingCoefficient { degree });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `c z^n`.
    pub fn monomial(c: Complex64, n: usize) -> Result<Self> {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// `a z^n + b`.
    pub fn binomial(a: Complex64, n: usize, b: Complex64) -> Result<Self> {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[0] += b;
        coeffs[n] += a;
        Self::new(coeffs)
    }

    /// The designated zero constant, produced only by operations whose
    /// result vanishes identically.
    pub fn zero() -> Self {
        Self { coeffs: vec![ZERO] }
    }

    /// Builds a polynomial from raw coefficients, dropping exactly-zero top
    /// coefficients. Returns the zero constant if every coefficient is zero.
    pub fn trimmed(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Self::zero();
        }
        Self { coeffs }
    }

    /// Expands `lead · Π (z - z_ν)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Result<Self> {
        if lead == ZERO {
            return Err(LabError::InvalidArgument(
                "leading coefficient must be nonzero".to_string(),
            ));
        }
        let mut coeffs = vec![lead];
        for &r in roots {
            coeffs = mul_linear(&coeffs, -r, ONE);
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `sqrt(Σ |a_j|^2)`, i.e. the `L_2` norm on the circle by Parseval.
    pub fn coeff_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `Σ |a_j| |z|^j`, the running-error scale of a Horner evaluation.
    pub fn abs_eval(&self, modulus: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * modulus + c.norm())
    }

    /// `P'` with nominal degree `max(n - 1, 0)`; the derivative of a
    /// constant is the zero constant.
    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| c * j as f64)
            .collect();
        Self::trimmed(coeffs)
    }

    /// `Q(z) = z^n · conj(P(1/conj(z)))`: coefficients reversed and
    /// conjugated. When `a_0 = 0` the result has lower degree.
    pub fn conj_reciprocal(&self) -> Self {
        Self::trimmed(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// `P(e^{iφ} z)`.
    pub fn rotate(&self, phi: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * Complex64::from_polar(1.0, phi * j as f64))
            .collect();
        Self::trimmed(coeffs)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::trimmed(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn add(&self, other: &Poly) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|j| {
                self.coeffs.get(j).copied().unwrap_or(ZERO)
                    + other.coeffs.get(j).copied().unwrap_or(ZERO)
            })
            .collect();
        Self::trimmed(coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::trimmed(out)
    }

    /// Tests `a_j = u · conj(a_{n-j})` for a unimodular `u`, with absolute
    /// tolerance `tol · max_j |a_j|`. The witness `u` is taken from the
    /// largest-modulus coefficient and its mirror.
    pub fn is_self_inversive(&self, tol: f64) -> SelfInversive {
        let negative = SelfInversive { flag: false, u: None };
        if self.is_zero() {
            return negative;
        }
        let n = self.degree();
        let scale = self.max_coeff_modulus();
        let (k, _) = self
            .coeffs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        let mirror = self.coeffs[n - k].conj();
        if mirror.norm() <= tol * scale {
            return negative;
        }
        let raw = self.coeffs[k] / mirror;
        if (raw.norm() - 1.0).abs() > tol {
            return negative;
        }
        let u = raw / raw.norm();
        let ok = (0..=n).all(|j| {
            (self.coeffs[j] - u * self.coeffs[n - j].conj()).norm() <= tol * scale
        });
        SelfInversive {
            flag: ok,
            u: ok.then_some(u),
        }
    }

    /// Replaces each root `z_j` with `|z_j| > 1` by `1/conj(z_j)` through the factor
    /// `(1 - conj(z_j) z) / (z - z_j)`; the modulus on the unit circle is
    /// unchanged and `T` has all its roots in the closed unit disk.
    ///
    /// `outside` must be the roots of `self` lying outside the unit disk,
    /// typically taken from [`crate::roots::find_roots`].
    pub fn blaschke_flip(&self, outside: &[Complex64]) -> Result<Self> {
        let mut coeffs = self.coeffs.clone();
        for &root in outside {
            if root.norm() <= 1.0 {
                return Err(LabError::InvalidArgument(format!(
                    "root {root} is not outside the unit disk"
                )));
            }
            let (quotient, remainder) = deflate(&coeffs, root);
            let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
                * root.norm().max(1.0).powi(coeffs.len() as i32 - 1);
            let rel = remainder / scale;
            if !(rel <= FLIP_REMAINDER_TOL) {
                return Err(LabError::InconsistentRoots {
                    root: format!("{root}"),
                    remainder: rel,
                });
            }
            coeffs = mul_linear(&quotient, ONE, -root.conj());
        }
        Ok(Self::trimmed(coeffs))
    }
}

const FLIP_REMAINDER_TOL: f64 = 1e-8;

/// Multiplies `coeffs` by `c0 + c1 z`.
fn mul_linear(coeffs: &[Complex64], c0: Complex64, c1: Complex64) -> Vec<Complex64> {
    let mut out = vec![ZERO; coeffs.len() + 1];
    for (j, &a) in coeffs.iter().enumerate() {
        out[j] += a * c0;
        out[j + 1] += a * c1;
    }
    out
}

/// Divides by `(z - root)`, returning the quotient and the modulus of the
/// remainder. Roots of modulus > 1 are deflated from the constant term
/// upwards, which is the stable direction for them.
fn deflate(coeffs: &[Complex64], root: Complex64) -> (Vec<Complex64>, f64) {
    let n = coeffs.len() - 1;
    if n == 0 {
        return (vec![ZERO], coeffs[0].norm());
    }
    let mut q = vec![ZERO; n];
    if root.norm() <= 1.0 {
        // forward: q_{n-1} = a_n, q_{j-1} = a_j + root q_j
        q[n - 1] = coeffs[n];
        for j in (1..n).rev() {
            q[j - 1] = coeffs[j] + root * q[j];
        }
        let rem = coeffs[0] + root * q[0];
        (q, rem.norm())
    } else {
        // backward: a_0 = -root q_0, a_j = q_{j-1} - root q_j
        let inv = ONE / root;
        q[0] = -coeffs[0] * inv;
        for j in 1..n {
            q[j] = (q[j - 1] - coeffs[j]) * inv;
        }
        // the mismatch e z^n at the top satisfies |P(root)| = |e| |root|^n
        let rem = (coeffs[n] - q[n - 1]).norm() * root.norm().powi(n as i32);
        (q, rem)
    }
}

/// Result of [`Poly::is_self_inversive`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelfInversive {
    pub flag: bool,
    pub u: Option<Complex64>,
}

/// A leading coefficient together with a multiset of roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootMultiset {
    pub lead: Complex64,
    pub roots: Vec<Complex64>,
}

impl RootMultiset {
    pub fn new(lead: Complex64, roots: Vec<Complex64>) -> Self {
        Self { lead, roots }
    }

    pub fn to_poly(&self) -> Result<Poly> {
        Poly::from_roots(self.lead, &self.roots)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if *c == ZERO && !(self.is_zero()) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{j}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            n: self.degree(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        Poly::from_json_value(&value).map_err(serde::de::Error::custom)
    }
}

impl Poly {
    /// Parses the canonical `{"n": int, "coeffs": [[re, im], ...]}` form,
    /// reporting the offending field path on failure. Unknown keys are
    /// ignored so that annotated outputs re-parse.
    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        let parse = |path: &str, message: &str| LabError::Parse {
            path: path.to_string(),
            message: message.to_string(),
        };
        let obj = value
            .as_object()
            .ok_or_else(|| parse("$", "expected an object with keys \"n\" and \"coeffs\""))?;
        let n = obj
            .get("n")
            .ok_or_else(|| parse("$.n", "missing"))?
            .as_u64()
            .ok_or_else(|| parse("$.n", "expected a nonnegative integer"))? as usize;
        let list = obj
            .get("coeffs")
            .ok_or_else(|| parse("$.coeffs", "missing"))?
            .as_array()
            .ok_or_else(|| parse("$.coeffs", "expected an array of [re, im] pairs"))?;
        if list.len() != n + 1 {
            return Err(parse(
                "$.coeffs",
                &format!("expected {} entries for n = {n}, found {}", n + 1, list.len()),
            ));
        }
        let mut coeffs = Vec::with_capacity(list.len());
        for (j, entry) in list.iter().enumerate() {
            let path = format!("$.coeffs[{j}]");
            let pair = entry
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| parse(&path, "expected a [re, im] pair"))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| parse(&format!("{path}[0]"), "expected a number"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| parse(&format!("{path}[1]"), "expected a number"))?;
            coeffs.push(Complex64::new(re, im));
        }
        Poly::new(coeffs).map_err(|e| match e {
            LabError::ZeroLeadingCoefficient { degree } => {
                parse(&format!("$.coeffs[{degree}]"), &e.to_string())
            }
            LabError::NonFiniteCoefficient { index } => {
                parse(&format!("$.coeffs[{index}]"), &e.to_string())
            }
            other => parse("$", &other.to_string()),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| LabError::Parse {
            path: "$".to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_value(&value)
    }
}
