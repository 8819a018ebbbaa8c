//! Randomized falsification over a hypothesis class.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{gen_poly, sample_alpha, stream_rng, AlphaPolicy, GeneratorKind};
use crate::error::{LabError, Result};
use crate::inequalities::{check, CheckParams, InequalityId, PolyClass, Verdict};
use crate::norms::NormExponent;
use crate::poly::{Poly, DEFAULT_MAX_DEGREE};
use rand::Rng;

fn default_degree_range() -> [usize; 2] {
    [1, 12]
}

fn default_p_grid() -> Vec<NormExponent> {
    NormExponent::standard_grid()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzConfig {
    pub inequality_id: InequalityId,
    pub count: usize,
    #[serde(default = "default_degree_range")]
    pub degree_range: [usize; 2],
    #[serde(default = "default_p_grid")]
    pub p_grid: Vec<NormExponent>,
    /// Defaults to the class the inequality's hypothesis names.
    #[serde(default)]
    pub generator_kind: Option<GeneratorKind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub alpha_policy: AlphaPolicy,
}

impl FuzzConfig {
    pub fn new(id: InequalityId, count: usize, seed: u64) -> Self {
        Self {
            inequality_id: id,
            count,
            degree_range: default_degree_range(),
            p_grid: default_p_grid(),
            generator_kind: None,
            seed,
            alpha_policy: AlphaPolicy::Admissible,
        }
    }

    pub fn generator(&self) -> GeneratorKind {
        self.generator_kind
            .unwrap_or(match self.inequality_id.polynomial_class() {
                PolyClass::Any => GeneratorKind::Unrestricted,
                PolyClass::ZeroFree => GeneratorKind::ZeroFree,
                PolyClass::SelfInversive => GeneratorKind::SelfInversive,
            })
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.degree_range;
        if self.count == 0 {
            return Err(LabError::InvalidArgument("count must be at least 1".into()));
        }
        if lo < 1 || lo > hi || hi > DEFAULT_MAX_DEGREE {
            return Err(LabError::InvalidArgument(format!(
                "degree_range must satisfy 1 <= lo <= hi <= {DEFAULT_MAX_DEGREE}, got [{lo}, {hi}]"
            )));
        }
        if self.p_grid.is_empty() {
            return Err(LabError::InvalidArgument("p_grid is empty".into()));
        }
        self.generator().validate()
    }
}

/// One evaluated (instance, exponent) pair with everything needed to
/// reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzSample {
    pub index: u64,
    pub seed: u64,
    pub p: NormExponent,
    pub n: usize,
    pub alpha: Option<Complex64>,
    pub gamma: Option<Complex64>,
    pub poly: Poly,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub verdict: Verdict,
    pub numeric_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzError {
    pub index: u64,
    pub p: NormExponent,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerdictCounts {
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

impl VerdictCounts {
    fn record(&mut self, v: Option<Verdict>) {
        match v {
            Some(Verdict::Holds) => self.holds += 1,
            Some(Verdict::Violated) => self.violated += 1,
            Some(Verdict::Inconclusive) => self.inconclusive += 1,
            None => self.errors += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.holds + self.violated + self.inconclusive + self.errors
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentTally {
    pub p: NormExponent,
    pub counts: VerdictCounts,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub generator_kind: GeneratorKind,
    pub evaluations: usize,
    pub counts: VerdictCounts,
    pub by_exponent: Vec<ExponentTally>,
    pub max_ratio: Option<FuzzSample>,
    pub violations: Vec<FuzzSample>,
    pub errors: Vec<FuzzError>,
}

/// The polynomial and parameters of instance `index`.
pub fn fuzz_instance(
    cfg: &FuzzConfig,
    index: u64,
) -> Result<(Poly, Option<Complex64>, Option<Complex64>)> {
    let mut rng = stream_rng(cfg.seed, index);
    let [lo, hi] = cfg.degree_range;
    let n = rng.gen_range(lo..=hi);
    let poly = gen_poly(&cfg.generator(), n, &mut rng)?;
    let id = cfg.inequality_id;
    let alpha = id
        .takes_alpha()
        .then(|| sample_alpha(cfg.alpha_policy, n, &mut rng));
    let gamma = id
        .takes_gamma()
        .then(|| sample_alpha(cfg.alpha_policy, n, &mut rng));
    Ok((poly, alpha, gamma))
}

enum Outcome {
    Sample(FuzzSample),
    Failed(FuzzError),
}

fn run_instance(cfg: &FuzzConfig, index: u64) -> Vec<Outcome> {
    let (poly, alpha, gamma) = match fuzz_instance(cfg, index) {
        Ok(x) => x,
        Err(e) => {
            return cfg
                .p_grid
                .iter()
                .map(|&p| {
                    Outcome::Failed(FuzzError {
                        index,
                        p,
                        message: e.to_string(),
                    })
                })
                .collect()
        }
    };
    cfg.p_grid
        .iter()
        .map(|&p| match check(cfg.inequality_id, &poly, &CheckParams::new(alpha, gamma, p)) {
            Ok(r) => Outcome::Sample(FuzzSample {
                index,
                seed: cfg.seed,
                p,
                n: r.n,
                alpha: r.alpha,
                gamma: r.gamma,
                poly: poly.clone(),
                lhs: r.lhs,
                rhs: r.rhs,
                ratio: r.ratio,
                verdict: r.verdict,
                numeric_margin: r.numeric_margin,
            }),
            Err(e) => Outcome::Failed(FuzzError {
                index,
                p,
                message: e.to_string(),
            }),
        })
        .collect()
}

/// Runs `cfg.count` instances in parallel and merges them in index order.
pub fn fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    cfg.validate()?;
    let outcomes: Vec<Vec<Outcome>> = (0..cfg.count as u64)
        .into_par_iter()
        .map(|i| run_instance(cfg, i))
        .collect();

    let mut counts = VerdictCounts::default();
    let mut by_exponent: Vec<ExponentTally> = cfg
        .p_grid
        .iter()
        .map(|&p| ExponentTally {
            p,
            counts: VerdictCounts::default(),
            max_ratio: 0.0,
        })
        .collect();
    let mut max_ratio: Option<FuzzSample> = None;
    let mut violations = Vec::new();
    let mut errors = Vec::new();

    for per_instance in outcomes {
        for (slot, outcome) in per_instance.into_iter().enumerate() {
            let tally = &mut by_exponent[slot];
            match outcome {
                Outcome::Sample(s) => {
                    counts.record(Some(s.verdict));
                    tally.counts.record(Some(s.verdict));
                    tally.max_ratio = tally.max_ratio.max(s.ratio);
                    if max_ratio.as_ref().is_none_or(|m| s.ratio > m.ratio) {
                        max_ratio = Some(s.clone());
                    }
                    if s.verdict == Verdict::Violated {
                        violations.push(s);
                    }
                }
                Outcome::Failed(e) => {
                    counts.record(None);
                    tally.counts.record(None);
                    errors.push(e);
                }
            }
        }
    }

    Ok(FuzzReport {
        config: cfg.clone(),
        generator_kind: cfg.generator(),
        evaluations: counts.total(),
        counts,
        by_exponent,
        max_ratio,
        violations,
        errors,
    })
}
