//! Evaluation of the individual inequalities on concrete instances.
//!
//! Every check produces a [`CheckReport`] with both sides, their ratio, the
//! outcome of each hypothesis gate and a verdict. Gates on the operator
//! parameters (`Re α <= n/2`, `Re γ <= n/2`) only warn, so the same code
//! explores the inadmissible region; gates on the polynomial (zero location,
//! self-inversivity) fail hard and make the verdict inconclusive.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::norms::{norm, NormExponent, NormValue};
use crate::operators::{apply, d_alpha};
use crate::poly::{Poly, SELF_INVERSIVE_TOL};
use crate::roots::{classify, DEFAULT_BAND};

/// Ratios at or below `1 + VIOLATION_THRESHOLD` count as holding.
pub const VIOLATION_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "THM1_FIRST")]
    Thm1First,
    #[serde(rename = "THM1_SECOND")]
    Thm1Second,
    #[serde(rename = "THM2_FIRST")]
    Thm2First,
    #[serde(rename = "THM2_SECOND")]
    Thm2Second,
    #[serde(rename = "THM3_FIRST")]
    Thm3First,
    #[serde(rename = "THM3_SECOND")]
    Thm3Second,
    #[serde(rename = "COR1_FIRST")]
    Cor1First,
    #[serde(rename = "COR1_SECOND")]
    Cor1Second,
    #[serde(rename = "COR2_FIRST")]
    Cor2First,
    #[serde(rename = "COR2_SECOND")]
    Cor2Second,
    #[serde(rename = "BERNSTEIN")]
    Bernstein,
    #[serde(rename = "ZYGMUND")]
    Zygmund,
    #[serde(rename = "JAIN_SUP")]
    JainSup,
    #[serde(rename = "JAIN_SUP_NONVANISHING")]
    JainSupNonvanishing,
    #[serde(rename = "DEBRUIJN")]
    DeBruijn,
}

impl InequalityId {
    pub const ALL: [InequalityId; 15] = [
        Self::Thm1First,
        Self::Thm1Second,
        Self::Thm2First,
        Self::Thm2Second,
        Self::Thm3First,
        Self::Thm3Second,
        Self::Cor1First,
        Self::Cor1Second,
        Self::Cor2First,
        Self::Cor2Second,
        Self::Bernstein,
        Self::Zygmund,
        Self::JainSup,
        Self::JainSupNonvanishing,
        Self::DeBruijn,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Thm1First => "THM1_FIRST",
            Self::Thm1Second => "THM1_SECOND",
            Self::Thm2First => "THM2_FIRST",
            Self::Thm2Second => "THM2_SECOND",
            Self::Thm3First => "THM3_FIRST",
            Self::Thm3Second => "THM3_SECOND",
            Self::Cor1First => "COR1_FIRST",
            Self::Cor1Second => "COR1_SECOND",
            Self::Cor2First => "COR2_FIRST",
            Self::Cor2Second => "COR2_SECOND",
            Self::Bernstein => "BERNSTEIN",
            Self::Zygmund => "ZYGMUND",
            Self::JainSup => "JAIN_SUP",
            Self::JainSupNonvanishing => "JAIN_SUP_NONVANISHING",
            Self::DeBruijn => "DEBRUIJN",
        }
    }

    /// Kebab-case form used on the command line, e.g. `thm1-first`.
    pub fn cli_name(self) -> String {
        self.as_str().to_ascii_lowercase().replace('_', "-")
    }

    /// Whether the instance takes a free `α`.
    pub fn takes_alpha(self) -> bool {
        matches!(
            self,
            Self::Thm1First
                | Self::Thm1Second
                | Self::Thm2First
                | Self::Thm2Second
                | Self::Thm3First
                | Self::Thm3Second
                | Self::Cor2Second
                | Self::JainSup
                | Self::JainSupNonvanishing
        )
    }

    /// Whether the instance takes a free `γ`.
    pub fn takes_gamma(self) -> bool {
        matches!(self, Self::Thm1Second | Self::Thm2Second | Self::Thm3Second)
    }

    /// Polynomial class the hypothesis restricts to.
    pub fn polynomial_class(self) -> PolyClass {
        match self {
            Self::Thm2First
            | Self::Thm2Second
            | Self::Cor2First
            | Self::Cor2Second
            | Self::JainSupNonvanishing
            | Self::DeBruijn => PolyClass::ZeroFree,
            Self::Thm3First | Self::Thm3Second => PolyClass::SelfInversive,
            _ => PolyClass::Any,
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        let key = if key == "DE_BRUIJN" { "DEBRUIJN".to_string() } else { key };
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == key)
            .ok_or_else(|| LabError::InvalidArgument(format!("unknown inequality id {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PolyClass {
    Any,
    ZeroFree,
    SelfInversive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateStatus {
    Pass,
    Warn,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateResult {
    pub gate: &'static str,
    pub status: GateStatus,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Which {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub inequality_id: InequalityId,
    pub n: usize,
    pub p: NormExponent,
    pub alpha: Option<Complex64>,
    pub gamma: Option<Complex64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub hypothesis: Vec<GateResult>,
    pub verdict: Verdict,
    /// Sum of the relative tolerances achieved by every norm in the check.
    pub numeric_margin: f64,
    pub notes: Vec<String>,
}

/// Parameters of one instance. Fields the inequality does not use are
/// ignored; missing required ones are an error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckParams {
    pub alpha: Option<Complex64>,
    pub gamma: Option<Complex64>,
    pub p: NormExponent,
}

impl CheckParams {
    pub fn new(alpha: Option<Complex64>, gamma: Option<Complex64>, p: NormExponent) -> Self {
        Self { alpha, gamma, p }
    }
}

pub fn verdict_for(ratio: f64, margin: f64, gates: &[GateResult]) -> Verdict {
    if gates.iter().any(|g| g.status == GateStatus::Fail) {
        Verdict::Inconclusive
    } else if ratio <= 1.0 + VIOLATION_THRESHOLD {
        Verdict::Holds
    } else if margin < (ratio - 1.0) / 10.0 {
        Verdict::Violated
    } else {
        Verdict::Inconclusive
    }
}

enum Rhs {
    /// `constant · ‖P‖`
    Scaled(f64),
    /// `‖linear‖ · ‖P‖ / ‖1 + z‖`
    Linear(Poly),
}

struct Plan {
    p: NormExponent,
    alpha: Option<Complex64>,
    gamma: Option<Complex64>,
    lhs_poly: Poly,
    rhs: Rhs,
    gates: Vec<GateResult>,
    notes: Vec<String>,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn require(value: Option<Complex64>, name: &str, id: InequalityId) -> Result<Complex64> {
    value.ok_or_else(|| LabError::InvalidArgument(format!("{id} requires {name}")))
}

fn parameter_gate(name: &'static str, value: Complex64, n: usize) -> GateResult {
    let half = n as f64 / 2.0;
    if value.re <= half {
        GateResult {
            gate: name,
            status: GateStatus::Pass,
            detail: format!("Re = {} <= n/2 = {half}", value.re),
        }
    } else {
        GateResult {
            gate: name,
            status: GateStatus::Warn,
            detail: format!("Re = {} > n/2 = {half}; outside the hypothesis (exploration)", value.re),
        }
    }
}

fn zero_free_gate(p: &Poly) -> GateResult {
    let gate = "no_zeros_in_open_disk";
    if p.degree() == 0 {
        return GateResult {
            gate,
            status: GateStatus::Pass,
            detail: "constant polynomial".to_string(),
        };
    }
    match classify(p, 1.0, DEFAULT_BAND) {
        Err(e) => GateResult {
            gate,
            status: GateStatus::Warn,
            detail: format!("classification failed: {e}"),
        },
        Ok(loc) if loc.inside > 0 => GateResult {
            gate,
            status: GateStatus::Fail,
            detail: format!("{} root(s) strictly inside |z| < 1", loc.inside),
        },
        Ok(loc) if !loc.converged => GateResult {
            gate,
            status: GateStatus::Warn,
            detail: "root finder did not converge".to_string(),
        },
        Ok(loc) if loc.on_boundary > 0 => GateResult {
            gate,
            status: GateStatus::Warn,
            detail: format!(
                "{} root(s) within {} of the unit circle; closure of the hypothesis set",
                loc.on_boundary, loc.band
            ),
        },
        Ok(_) => GateResult {
            gate,
            status: GateStatus::Pass,
            detail: "all roots in |z| > 1".to_string(),
        },
    }
}

fn self_inversive_gate(p: &Poly) -> GateResult {
    let si = p.is_self_inversive(SELF_INVERSIVE_TOL);
    GateResult {
        gate: "self_inversive",
        status: if si.flag { GateStatus::Pass } else { GateStatus::Fail },
        detail: match si.u {
            Some(u) => format!("a_j = u conj(a_(n-j)) with u = {u}"),
            None => "no unimodular u pairs the coefficients".to_string(),
        },
    }
}

fn plan(id: InequalityId, poly: &Poly, params: &CheckParams, gated: bool) -> Result<Plan> {
    use InequalityId::*;
    let n = poly.degree();
    let nf = n as f64;
    let mut gates = Vec::new();
    let mut notes = Vec::new();
    let mut p = params.p;
    let sup_only = matches!(id, Bernstein | JainSup | JainSupNonvanishing);
    if sup_only && p != NormExponent::Sup {
        notes.push(format!("{id} is a sup-norm statement; exponent {p} replaced by inf"));
        p = NormExponent::Sup;
    }
    if p == NormExponent::Sup && matches!(id, Thm1First | Thm1Second | Thm2First | Thm2Second | Thm3First | Thm3Second | Cor1First | Cor1Second | Cor2First | Cor2Second) {
        notes.push("p = inf is evaluated as the limit of the finite-p statement".to_string());
    }

    let (alpha, gamma) = match id {
        Thm1First | Thm2First | Thm3First | JainSup | JainSupNonvanishing => {
            (Some(require(params.alpha, "alpha", id)?), None)
        }
        Thm1Second | Thm2Second | Thm3Second => (
            Some(require(params.alpha, "alpha", id)?),
            Some(require(params.gamma, "gamma", id)?),
        ),
        Cor1First => (Some(real(nf / 2.0)), None),
        Cor1Second => (Some(real(nf / 2.0)), Some(real(nf / 2.0))),
        Cor2First => (Some(real(1.0)), None),
        Cor2Second => (Some(require(params.alpha, "alpha", id)?), Some(real(0.0))),
        Bernstein | Zygmund | DeBruijn => (None, None),
    };

    if gated {
        // fixed parameters are gated too: the corollary with α = 1 needs n >= 2
        if let Some(a) = alpha {
            gates.push(parameter_gate("re_alpha", a, n));
        }
        if let Some(g) = gamma {
            gates.push(parameter_gate("re_gamma", g, n));
        }
        match id.polynomial_class() {
            PolyClass::ZeroFree => gates.push(zero_free_gate(poly)),
            PolyClass::SelfInversive => gates.push(self_inversive_gate(poly)),
            PolyClass::Any => {}
        }
    }

    let op_alpha = alpha.unwrap_or(real(0.0));
    let lhs_poly = match id {
        Bernstein | Zygmund | DeBruijn => d_alpha(poly, real(0.0)),
        _ => apply(poly, op_alpha, gamma),
    };
    let n_c = real(nf);
    let rhs = match id {
        Thm1First | Cor1First | JainSup => Rhs::Scaled((n_c - op_alpha).norm()),
        Thm1Second | Cor1Second => {
            let g = gamma.unwrap();
            Rhs::Scaled((n_c * (n_c - op_alpha - g) + op_alpha * g).norm())
        }
        Bernstein | Zygmund => Rhs::Scaled(nf),
        JainSupNonvanishing => Rhs::Scaled(0.5 * ((n_c - op_alpha).norm() + op_alpha.norm())),
        Thm2First | Thm3First | Cor2First => Rhs::Linear(Poly::trimmed(vec![op_alpha, n_c - op_alpha])),
        Thm2Second | Thm3Second | Cor2Second => {
            let g = gamma.unwrap();
            Rhs::Linear(Poly::trimmed(vec![op_alpha * g, n_c * (n_c - op_alpha - g)]))
        }
        DeBruijn => Rhs::Linear(Poly::trimmed(vec![real(0.0), n_c])),
    };
    Ok(Plan {
        p,
        alpha,
        gamma,
        lhs_poly,
        rhs,
        gates,
        notes,
    })
}

struct Sides {
    lhs: NormValue,
    rhs: f64,
    margin: f64,
    warnings: Vec<String>,
}

fn sides(poly: &Poly, plan: &Plan) -> Result<Sides> {
    let lhs = norm(&plan.lhs_poly, plan.p)?;
    let base = norm(poly, plan.p)?;
    let mut warnings: Vec<String> = lhs.warnings.iter().chain(&base.warnings).cloned().collect();
    let mut margin = lhs.achieved_tol + base.achieved_tol;
    let rhs = match &plan.rhs {
        Rhs::Scaled(c) => c * base.value,
        Rhs::Linear(linear) => {
            let l = norm(linear, plan.p)?;
            let unit = norm(&Poly::from_real(&[1.0, 1.0])?, plan.p)?;
            margin += l.achieved_tol + unit.achieved_tol;
            warnings.extend(l.warnings.iter().chain(&unit.warnings).cloned());
            l.value * base.value / unit.value
        }
    };
    if rhs == 0.0 && lhs.value != 0.0 {
        return Err(LabError::DegenerateRhs);
    }
    Ok(Sides {
        lhs,
        rhs,
        margin,
        warnings,
    })
}

fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// Evaluates inequality `id` on `poly`.
pub fn check(id: InequalityId, poly: &Poly, params: &CheckParams) -> Result<CheckReport> {
    let plan = plan(id, poly, params, true)?;
    let s = sides(poly, &plan)?;
    let ratio = ratio_of(s.lhs.value, s.rhs);
    let mut notes = plan.notes;
    notes.extend(s.warnings);
    Ok(CheckReport {
        inequality_id: id,
        n: poly.degree(),
        p: plan.p,
        alpha: plan.alpha,
        gamma: plan.gamma,
        lhs: s.lhs.value,
        rhs: s.rhs,
        ratio,
        verdict: verdict_for(ratio, s.margin, &plan.gates),
        hypothesis: plan.gates,
        numeric_margin: s.margin,
        notes,
    })
}

/// `lhs / rhs` without any hypothesis gating, for search loops that keep
/// their iterates inside the hypothesis set by construction.
pub fn ratio_ungated(id: InequalityId, poly: &Poly, params: &CheckParams) -> Result<f64> {
    let plan = plan(id, poly, params, false)?;
    let s = sides(poly, &plan)?;
    Ok(ratio_of(s.lhs.value, s.rhs))
}

pub fn check_thm1_first(p: &Poly, alpha: Complex64, e: NormExponent) -> Result<CheckReport> {
    check(InequalityId::Thm1First, p, &CheckParams::new(Some(alpha), None, e))
}

pub fn check_thm1_second(
    p: &Poly,
    alpha: Complex64,
    gamma: Complex64,
    e: NormExponent,
) -> Result<CheckReport> {
    check(InequalityId::Thm1Second, p, &CheckParams::new(Some(alpha), Some(gamma), e))
}

pub fn check_thm2_first(p: &Poly, alpha: Complex64, e: NormExponent) -> Result<CheckReport> {
    check(InequalityId::Thm2First, p, &CheckParams::new(Some(alpha), None, e))
}

pub fn check_thm2_second(
    p: &Poly,
    alpha: Complex64,
    gamma: Complex64,
    e: NormExponent,
) -> Result<CheckReport> {
    check(InequalityId::Thm2Second, p, &CheckParams::new(Some(alpha), Some(gamma), e))
}

pub fn check_thm3(
    p: &Poly,
    alpha: Complex64,
    gamma: Option<Complex64>,
    e: NormExponent,
    which: Which,
) -> Result<CheckReport> {
    let id = match which {
        Which::First => InequalityId::Thm3First,
        Which::Second => InequalityId::Thm3Second,
    };
    check(id, p, &CheckParams::new(Some(alpha), gamma, e))
}

/// Bernstein, Zygmund, Jain (both forms) and de Bruijn.
pub fn check_classical(
    p: &Poly,
    e: NormExponent,
    which: InequalityId,
    alpha: Option<Complex64>,
) -> Result<CheckReport> {
    use InequalityId::*;
    if !matches!(which, Bernstein | Zygmund | JainSup | JainSupNonvanishing | DeBruijn) {
        return Err(LabError::InvalidArgument(format!(
            "{which} is not a classical inequality"
        )));
    }
    check(which, p, &CheckParams::new(alpha, None, e))
}
