//! Seeded polynomial and parameter generators.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::poly::Poly;

/// Smallest accepted modulus for a leading (or paired constant) coefficient.
pub const MIN_LEAD: f64 = 0.1;

/// Root modulus range for [`GeneratorKind::ZeroFree`].
pub const ZERO_FREE_MODULI: (f64, f64) = (1.05, 4.0);

/// Root modulus range for [`GeneratorKind::Boundary`].
pub const BOUNDARY_MODULI: (f64, f64) = (1.0, 1.01);

/// Independent stream `stream` of the generator seeded by `seed`.
///
/// Instance `k` of a run always draws from `stream_rng(seed, k)`, so results
/// do not depend on evaluation order or thread count.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GeneratorKind {
    /// Coefficients uniform in the unit disk, `|a_n| >= 0.1`.
    Unrestricted,
    /// Root moduli uniform in `[1.05, 4]`.
    ZeroFree,
    /// Root moduli uniform in `[1.0, 1.01]`.
    Boundary,
    /// Root moduli uniform in `[0, r]`.
    ZerosInDisk(f64),
    SelfInversive,
    /// `c z^n`.
    Monomial,
    /// `a z^n + b` with `|a| = |b|`.
    UnimodularBinomial,
    /// `a z^n + conj(a)`.
    ConjugateBinomial,
    /// The fixed binomial `a z^n + b` at the drawn degree.
    Binomial { a: Complex64, b: Complex64 },
}

impl GeneratorKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneratorKind::ZerosInDisk(r) if !(r.is_finite() && r > 0.0) => Err(
                LabError::InvalidArgument(format!("ZEROS_IN_DISK radius must be positive, got {r}")),
            ),
            GeneratorKind::Binomial { a, b }
                if a == Complex64::new(0.0, 0.0) || !(a.is_finite() && b.is_finite()) =>
            {
                Err(LabError::InvalidArgument(
                    "binomial needs a finite nonzero leading coefficient".to_string(),
                ))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Unrestricted => f.write_str("unrestricted"),
            GeneratorKind::ZeroFree => f.write_str("zero-free"),
            GeneratorKind::Boundary => f.write_str("boundary"),
            GeneratorKind::ZerosInDisk(r) => write!(f, "zeros-in-disk:{r}"),
            GeneratorKind::SelfInversive => f.write_str("self-inversive"),
            GeneratorKind::Monomial => f.write_str("monomial"),
            GeneratorKind::UnimodularBinomial => f.write_str("unimodular-binomial"),
            GeneratorKind::ConjugateBinomial => f.write_str("conjugate-binomial"),
            GeneratorKind::Binomial { a, b } => {
                write!(f, "binomial:{},{}:{},{}", a.re, a.im, b.re, b.im)
            }
        }
    }
}

/// Parses `"re,im"` into a complex number.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || LabError::InvalidArgument(format!("expected \"re,im\", got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

impl FromStr for GeneratorKind {
    type Err = LabError;

    /// Accepts the kebab-case names printed by `Display`, plus
    /// `zeros-in-disk:<r>` and `binomial:<re,im>:<re,im>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase().replace('_', "-");
        let (head, rest) = match lower.split_once(':') {
            Some((h, r)) => (h.to_string(), Some(r.to_string())),
            None => (lower.clone(), None),
        };
        let kind = match (head.as_str(), rest) {
            ("unrestricted", None) => GeneratorKind::Unrestricted,
            ("zero-free", None) => GeneratorKind::ZeroFree,
            ("boundary", None) => GeneratorKind::Boundary,
            ("self-inversive", None) => GeneratorKind::SelfInversive,
            ("monomial", None) => GeneratorKind::Monomial,
            ("unimodular-binomial", None) => GeneratorKind::UnimodularBinomial,
            ("conjugate-binomial", None) => GeneratorKind::ConjugateBinomial,
            ("zeros-in-disk", Some(r)) => GeneratorKind::ZerosInDisk(r.trim().parse().map_err(
                |_| LabError::InvalidArgument(format!("bad disk radius in {s:?}")),
            )?),
            ("binomial", Some(rest)) => {
                let (a, b) = rest.split_once(':').ok_or_else(|| {
                    LabError::InvalidArgument(format!("expected binomial:<re,im>:<re,im>, got {s:?}"))
                })?;
                GeneratorKind::Binomial {
                    a: parse_complex(a)?,
                    b: parse_complex(b)?,
                }
            }
            _ => {
                return Err(LabError::InvalidArgument(format!(
                    "unknown generator kind {s:?}"
                )))
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Uniform point in the closed disk of radius `r`.
pub fn disk_point<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Complex64 {
    let rho = r * rng.gen::<f64>().sqrt();
    Complex64::from_polar(rho, rng.gen_range(0.0..TAU))
}

fn lead_point<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let c = disk_point(rng, 1.0);
        if c.norm() >= MIN_LEAD {
            return c;
        }
    }
}

fn annulus_roots<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let rho = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
            Complex64::from_polar(rho, rng.gen_range(0.0..TAU))
        })
        .collect()
}

/// Coefficients with `a_j = u conj(a_(n-j))` built from the lower half.
///
/// `half` holds `a_0 .. a_(ceil(n/2)-1)`; for even `n` the middle coefficient
/// is `t sqrt(u)` with `t` real.
pub fn self_inversive_coeffs(n: usize, u: Complex64, half: &[Complex64], t: f64) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for (j, &a) in half.iter().enumerate() {
        coeffs[j] = a;
        coeffs[n - j] = u * a.conj();
    }
    if n % 2 == 0 {
        coeffs[n / 2] = u.sqrt() * t;
    }
    coeffs
}

/// Number of free complex coefficients in a self-inversive polynomial of
/// degree `n` (the middle one of even degree is counted separately).
pub fn self_inversive_half_len(n: usize) -> usize {
    n.div_ceil(2)
}

/// Draws a polynomial of degree `n` of the given kind.
pub fn gen_poly<R: Rng + ?Sized>(kind: &GeneratorKind, n: usize, rng: &mut R) -> Result<Poly> {
    if n == 0 && !matches!(kind, GeneratorKind::Unrestricted | GeneratorKind::Monomial) {
        return Err(LabError::InvalidArgument(format!("{kind} needs degree >= 1")));
    }
    match *kind {
        GeneratorKind::Unrestricted => {
            let mut coeffs: Vec<Complex64> = (0..n).map(|_| disk_point(rng, 1.0)).collect();
            coeffs.push(lead_point(rng));
            Poly::new(coeffs)
        }
        GeneratorKind::ZeroFree => {
            let lead = lead_point(rng);
            let roots = annulus_roots(rng, n, ZERO_FREE_MODULI.0, ZERO_FREE_MODULI.1);
            Poly::from_roots(lead, &roots)
        }
        GeneratorKind::Boundary => {
            let lead = lead_point(rng);
            let roots = annulus_roots(rng, n, BOUNDARY_MODULI.0, BOUNDARY_MODULI.1);
            Poly::from_roots(lead, &roots)
        }
        GeneratorKind::ZerosInDisk(r) => {
            let lead = lead_point(rng);
            let roots = annulus_roots(rng, n, 0.0, r);
            Poly::from_roots(lead, &roots)
        }
        GeneratorKind::SelfInversive => {
            let u = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let mut half: Vec<Complex64> = Vec::new();
            half.push(lead_point(rng));
            for _ in 1..self_inversive_half_len(n) {
                half.push(disk_point(rng, 1.0));
            }
            let t = rng.gen_range(-1.0..=1.0);
            Poly::new(self_inversive_coeffs(n, u, &half, t))
        }
        GeneratorKind::Monomial => Poly::monomial(lead_point(rng), n),
        GeneratorKind::UnimodularBinomial => {
            let a = lead_point(rng);
            let b = Complex64::from_polar(a.norm(), rng.gen_range(0.0..TAU));
            Poly::binomial(a, n, b)
        }
        GeneratorKind::ConjugateBinomial => {
            let a = lead_point(rng);
            Poly::binomial(a, n, a.conj())
        }
        GeneratorKind::Binomial { a, b } => Poly::binomial(a, n, b),
    }
}

/// How operator parameters are drawn for a polynomial of degree `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlphaPolicy {
    /// `Re ∈ [-n, n/2]`, `Im ∈ [-n, n]`.
    #[default]
    Admissible,
    /// `Re ∈ [-n, 2n]`, `Im ∈ [-n, n]`.
    FullPlane,
}

impl FromStr for AlphaPolicy {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "admissible" => Ok(AlphaPolicy::Admissible),
            "full-plane" => Ok(AlphaPolicy::FullPlane),
            _ => Err(LabError::InvalidArgument(format!("unknown alpha policy {s:?}"))),
        }
    }
}

pub fn sample_alpha<R: Rng + ?Sized>(policy: AlphaPolicy, n: usize, rng: &mut R) -> Complex64 {
    let nf = n as f64;
    let re_hi = match policy {
        AlphaPolicy::Admissible => nf / 2.0,
        AlphaPolicy::FullPlane => 2.0 * nf,
    };
    let re = rng.gen_range(-nf..=re_hi);
    let im = rng.gen_range(-nf..=nf);
    Complex64::new(re, im)
}
