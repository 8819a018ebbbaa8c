use std::f64::consts::TAU;

use bernlab_core::inequalities::{check, check_thm1_first, CheckParams};
use bernlab_core::norms::{lp_norm, mahler_measure, norm, sup_norm};
use bernlab_core::operators::{conj_side, d2_compose, d_alpha, pointwise_dominance};
use bernlab_core::roots::{classify, find_roots, hausdorff, ZeroStatus, DEFAULT_BAND};
use bernlab_core::{Complex64, InequalityId, NormExponent, Poly};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c(a, b))
}

/// Coefficients in the unit square, leading coefficient of modulus >= 0.1.
fn poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(coeff(), 1..=max_degree + 1).prop_filter_map("small lead", |v| {
        if v.last().unwrap().norm() < 0.1 {
            None
        } else {
            Poly::new(v).ok()
        }
    })
}

fn polar(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn roots(max: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(polar(lo, hi), 1..=max)
}

fn circle(k: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * k as f64 / m as f64)
}

fn exponents() -> [NormExponent; 3] {
    [NormExponent::Finite(1.5), NormExponent::Sup, NormExponent::Mahler]
}

fn admissible_alpha(n: usize) -> impl Strategy<Value = Complex64> {
    let nf = n as f64;
    (-nf..=nf / 2.0, -nf..=nf).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn conj_reciprocal_is_an_involution(p in poly(16)) {
        prop_assume!(p.coeffs()[0].norm() > 0.0);
        prop_assert_eq!(p.conj_reciprocal().conj_reciprocal(), p);
    }

    #[test]
    fn conj_reciprocal_has_same_modulus_on_circle(p in poly(16)) {
        prop_assume!(p.coeffs()[0].norm() > 0.0);
        let q = p.conj_reciprocal();
        let scale = p.abs_eval(1.0);
        for k in 0..256 {
            let z = circle(k, 256);
            prop_assert!((q.eval(z).norm() - p.eval(z).norm()).abs() <= 1e-13 * scale);
        }
    }

    #[test]
    fn rotation_matches_rotated_argument(p in poly(16), phi in 0.0..TAU, z in polar(0.0, 2.0)) {
        let w = Complex64::from_polar(1.0, phi) * z;
        let diff = (p.rotate(phi).eval(z) - p.eval(w)).norm();
        prop_assert!(diff <= 1e-14 * p.abs_eval(z.norm()).max(f64::MIN_POSITIVE) * 4.0);
    }

    #[test]
    fn blaschke_flip_preserves_modulus(
        inside in roots(6, 0.0, 0.9),
        outside in roots(6, 1.1, 4.0),
        lead in polar(0.5, 2.0),
    ) {
        let all: Vec<Complex64> = inside.iter().chain(&outside).copied().collect();
        let p = Poly::from_roots(lead, &all).unwrap();
        let t = p.blaschke_flip(&outside).unwrap();
        let sup = sup_norm(&p).value;
        for k in 0..256 {
            let z = circle(k, 256);
            prop_assert!((t.eval(z).norm() - p.eval(z).norm()).abs() <= 1e-10 * sup);
        }
        let loc = classify(&t, 1.0, DEFAULT_BAND).unwrap();
        prop_assert_eq!(loc.status, ZeroStatus::AllInClosedDisk);
    }

    #[test]
    fn roots_are_recovered(rs in roots(16, 0.0, 4.0), lead in polar(0.5, 2.0)) {
        let p = Poly::from_roots(lead, &rs).unwrap();
        let rep = find_roots(&p).unwrap();
        let d = hausdorff(&rep.roots, &rs);
        prop_assert!(rep.converged);
        prop_assert!(d <= 1e-8, "hausdorff {:e}", d);
    }

    #[test]
    fn roots_scale_invariant(p in poly(12)) {
        prop_assume!(p.degree() >= 1);
        let base = find_roots(&p).unwrap().roots;
        for s in [c(2.0, 0.0), c(0.0, 1.0), c(1e6, 0.0)] {
            let scaled = find_roots(&p.scale(s)).unwrap().roots;
            prop_assert!(hausdorff(&base, &scaled) <= 1e-12);
        }
    }

    #[test]
    fn classify_matches_construction(
        rs in roots(12, 0.0, 3.0),
        r in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        prop_assume!(rs.iter().all(|z| (z.norm() - r).abs() >= 2.0 * DEFAULT_BAND));
        let p = Poly::from_roots(c(1.0, 0.0), &rs).unwrap();
        let inside = rs.iter().filter(|z| z.norm() < r).count();
        let loc = classify(&p, r, DEFAULT_BAND).unwrap();
        let expect = if inside == rs.len() {
            ZeroStatus::AllInClosedDisk
        } else if inside == 0 {
            ZeroStatus::NoneInClosedDisk
        } else {
            ZeroStatus::Mixed
        };
        prop_assert_eq!(loc.status, expect);
    }

    #[test]
    fn parseval(p in poly(32)) {
        let v = lp_norm(&p, 2.0, 1e-13).unwrap().value;
        prop_assert!((v - p.coeff_l2()).abs() <= 1e-12 * p.coeff_l2());
    }

    #[test]
    fn homogeneity(p in poly(10), s in polar(0.1, 10.0)) {
        for e in exponents() {
            let a = norm(&p.scale(s), e).unwrap().value;
            let b = s.norm() * norm(&p, e).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-12 * b, "{}: {} vs {}", e, a, b);
        }
    }

    #[test]
    fn rotation_invariance(p in poly(10), phi in 0.0..TAU) {
        for e in exponents() {
            let a = norm(&p.rotate(phi), e).unwrap().value;
            let b = norm(&p, e).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-10 * b, "{}", e);
        }
    }

    #[test]
    fn conj_reciprocal_isometry(p in poly(10)) {
        prop_assume!(p.coeffs()[0].norm() > 1e-3);
        let q = p.conj_reciprocal();
        for e in exponents() {
            let a = norm(&q, e).unwrap().value;
            let b = norm(&p, e).unwrap().value;
            prop_assert!((a - b).abs() <= 1e-10 * b, "{}", e);
        }
    }

    #[test]
    fn monotone_in_p(p in poly(10)) {
        let ps = [0.125, 0.25, 0.5, 1.0, 2.0, 3.0, 8.0, 32.0];
        let vals: Vec<f64> = ps.iter().map(|&q| lp_norm(&p, q, 1e-11).unwrap().value).collect();
        for w in vals.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-10, "{:?}", vals);
        }
        prop_assert!(vals[vals.len() - 1] <= sup_norm(&p).value + 1e-10);
        let m = mahler_measure(&p).unwrap().value;
        prop_assert!(m <= vals[1] + 1e-8);
    }

    #[test]
    fn d_alpha_is_linear(p in poly(10), r in poly(10), a in coeff(), b in coeff(), alpha in coeff()) {
        let lhs = d_alpha(&p.scale(a).add(&r.scale(b)), alpha);
        let rhs = d_alpha(&p, alpha).scale(a).add(&d_alpha(&r, alpha).scale(b));
        let scale = 16.0 * f64::EPSILON * (12.0 + alpha.norm()) * (p.max_coeff_modulus() + r.max_coeff_modulus());
        let m = lhs.coeffs().len().max(rhs.coeffs().len());
        for j in 0..m {
            let x = lhs.coeffs().get(j).copied().unwrap_or_default();
            let y = rhs.coeffs().get(j).copied().unwrap_or_default();
            prop_assert!((x - y).norm() <= scale);
        }
    }

    #[test]
    fn composition_consistency(p in poly(12), alpha in coeff(), gamma in coeff()) {
        let a = alpha * 6.0;
        let g = gamma * 6.0;
        prop_assert_eq!(d2_compose(&p, a, g), d_alpha(&d_alpha(&p, a), g));
        let swapped = d2_compose(&p, g, a);
        let direct = d2_compose(&p, a, g);
        for (x, y) in direct.coeffs().iter().zip(swapped.coeffs()) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn containment_under_d_alpha(
        rs in roots(12, 0.0, 1.0),
        r in prop::sample::select(vec![0.5, 1.0, 2.0]),
        seed in 0.0..1.0f64,
    ) {
        let scaled: Vec<Complex64> = rs.iter().map(|z| z * r).collect();
        let f = Poly::from_roots(c(1.0, 0.0), &scaled).unwrap();
        let n = f.degree() as f64;
        let alpha = c(-n + seed * 1.5 * n, n * (2.0 * seed - 1.0));
        let g = d_alpha(&f, alpha);
        let rep = find_roots(&g).unwrap();
        prop_assert!(rep.max_modulus <= r + 1e-7, "{} > {}", rep.max_modulus, r);
    }

    #[test]
    fn conjugate_side_dominates_outside(
        rs in roots(10, 1.0, 4.0),
        lead in polar(0.5, 2.0),
        t in 0.0..1.0f64,
        u in 0.0..1.0f64,
    ) {
        let p = Poly::from_roots(lead, &rs).unwrap();
        let n = p.degree() as f64;
        let alpha = c(-n + 1.5 * n * t, n * (2.0 * u - 1.0));
        let q = p.conj_reciprocal();
        let rep = pointwise_dominance(&p, &q, alpha, None, 256);
        prop_assert!(rep.hypothesis_met);
        prop_assert!(rep.holds, "max violation {:e}", rep.max_violation);
        let cs = conj_side(&p, alpha, None);
        prop_assert_eq!(cs, d_alpha(&q, alpha));
    }

    #[test]
    fn binomial_sign_change_at_half_degree(n in 1usize..=12, im in -5.0..5.0f64, dx in 0.01..2.0f64) {
        let p = Poly::binomial(c(2.0, 0.0), n, c(1.0, 0.0)).unwrap();
        let half = n as f64 / 2.0;
        let e = NormExponent::Finite(2.0);
        let at = check_thm1_first(&p, c(half, im), e).unwrap().ratio;
        let left = check_thm1_first(&p, c(half - dx, im), e).unwrap().ratio;
        let right = check_thm1_first(&p, c(half + dx, im), e).unwrap().ratio;
        prop_assert!((at - 1.0).abs() <= 1e-9);
        prop_assert!(left < 1.0 && right > 1.0, "{} {}", left, right);
    }

    #[test]
    fn check_is_deterministic(p in poly(8), alpha in admissible_alpha(8)) {
        let params = CheckParams::new(Some(alpha), None, NormExponent::Finite(0.5));
        let a = check(InequalityId::Thm1First, &p, &params).unwrap();
        let b = check(InequalityId::Thm1First, &p, &params).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // The sup-norm check is the p -> inf limit of the finite ones.
    #[test]
    fn sup_ratio_is_limit_of_finite_ratios(p in poly(12), alpha in admissible_alpha(12)) {
        let at = |e| check_thm1_first(&p, alpha, e).unwrap().ratio;
        let sup = at(NormExponent::Sup);
        let finite = at(NormExponent::Finite(128.0));
        prop_assert!((finite - sup).abs() <= 0.02 * sup, "{} vs {}", finite, sup);
    }
}

#[test]
fn monomial_action_is_exact() {
    for j in 0..=64usize {
        let m = Poly::with_degree_cap(
            (0..=j).map(|k| if k == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect(),
            64,
        )
        .unwrap();
        for alpha in [c(0.0, 0.0), c(2.5, -1.0), c(-7.25, 3.5)] {
            let out = d_alpha(&m, alpha);
            let expect = c(j as f64, 0.0) - alpha;
            if expect == c(0.0, 0.0) {
                assert!(out.is_zero());
            } else {
                assert_eq!(out.degree(), j);
                assert_eq!(out.coeffs()[j], expect);
                assert!(out.coeffs()[..j].iter().all(|x| *x == c(0.0, 0.0)));
            }
        }
    }
}

/// The finite-p norms approach the limits within 2% at the ends of the
/// tested exponent ranges.
#[test]
fn limit_gaps_within_two_percent() {
    use bernlab_core::explore::{gen_poly, stream_rng, GeneratorKind};
    use rand::Rng;

    let mut sup_over = Vec::new();
    let mut mahler_over = Vec::new();
    for k in 0..100u64 {
        let mut rng = stream_rng(77, k);
        let n = rng.gen_range(1..=12usize);
        let p = gen_poly(&GeneratorKind::Unrestricted, n, &mut rng).unwrap();
        let seq: Vec<f64> = [16.0, 32.0, 64.0, 128.0]
            .iter()
            .map(|&q| lp_norm(&p, q, 1e-11).unwrap().value)
            .collect();
        let sup = sup_norm(&p).value;
        assert!(seq.windows(2).all(|w| w[0] <= w[1] + 1e-10));
        assert!(seq[3] <= sup + 1e-10);
        let gap = (sup - seq[3]) / sup;
        if gap > 0.02 {
            sup_over.push(gap);
        }

        let rs: Vec<Complex64> = (0..n)
            .map(|_| {
                let t = rng.gen_range(0.0..3.9f64);
                let rho = if t < 0.95 { t } else { t + 0.1 };
                Complex64::from_polar(rho, rng.gen_range(0.0..TAU))
            })
            .collect();
        let q = Poly::from_roots(c(1.0, 0.0), &rs).unwrap();
        let seq: Vec<f64> = [1.0, 0.5, 0.25, 0.125]
            .iter()
            .map(|&e| lp_norm(&q, e, 1e-11).unwrap().value)
            .collect();
        let m = mahler_measure(&q).unwrap().value;
        assert!(seq.windows(2).all(|w| w[0] + 1e-10 >= w[1]));
        assert!(seq[3] + 1e-8 >= m);
        let gap = (seq[3] - m) / m;
        if gap > 0.02 {
            mahler_over.push(gap);
        }
    }
    assert!(
        sup_over.is_empty() && mahler_over.is_empty(),
        "gap above 2%: {} of 100 at p = 128 (worst {:.2}%), {} of 100 at p = 0.125 (worst {:.2}%)",
        sup_over.len(),
        100.0 * sup_over.iter().cloned().fold(0.0, f64::max),
        mahler_over.len(),
        100.0 * mahler_over.iter().cloned().fold(0.0, f64::max),
    );
}
