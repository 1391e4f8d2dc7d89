mod common;

use common::{diff, p};
use num_complex::Complex64;
use num_traits::Zero;
use subelliptic::domain::{default_coeff_set, DomainSpec};
use subelliptic::effective::{self, select_component, zeta_chain, HypoStatus};
use subelliptic::kohn::KohnConfig;
use subelliptic::ledger::Order;
use subelliptic::localideal::{radical_extend, LocalIdeal};
use subelliptic::numcheck::{
    boundary_pseudoconvexity, finite_diff_levi, sample_hypo, sample_points, spot_check, verify_levi_bound, Extended,
};
use subelliptic::{parse_holo, Error, Poly, Var};

fn eval(q: &Poly, z: Complex64, w: Complex64) -> Complex64 {
    let vals = [z, z.conj(), w, w.conj()];
    q.terms()
        .map(|(m, c)| {
            let mut t = c.to_complex64();
            for (v, e) in vals.iter().zip(m.exps()) {
                t *= v.powu(e);
            }
            t
        })
        .sum()
}

fn specs() -> Vec<DomainSpec> {
    vec![
        DomainSpec::flat(),
        DomainSpec::family(3, 2, 4),
        DomainSpec::family(3, 2, 5),
        DomainSpec::family(3, 2, 6),
        DomainSpec::family(4, 3, 6),
        DomainSpec::remark(5),
    ]
}

#[test]
fn chains_are_repeated_w_derivatives() {
    for (tau, l, k) in [(3, 2, 4), (3, 2, 5), (3, 2, 6), (4, 3, 6)] {
        let spec = DomainSpec::family(tau, l, k);
        let run = zeta_chain(&spec, HypoStatus::Asserted, false).unwrap();
        assert_eq!(run.chain.len() as u32, tau);
        let mut h = spec.f[0].as_poly().clone();
        for (j, m) in run.chain.iter().enumerate() {
            h = diff(&h, Var::W);
            assert_eq!(m.poly, h);
            assert_eq!(m.order, Order::pow2_inv(j as u32 + 2));
        }
        assert!(!h.constant_term().is_zero());
        assert_eq!(run.final_order, Order::pow2_inv(tau + 1));
        assert!(run.sound);
    }
    let flat = zeta_chain(&DomainSpec::flat(), HypoStatus::Asserted, false).unwrap();
    assert_eq!(flat.final_order, Order::new(1, 4));
    assert_eq!(flat.chain.len(), 1);
}

#[test]
fn component_selection() {
    let two =
        DomainSpec::new("two", vec![parse_holo("w^3 + z*w").unwrap(), parse_holo("w^2").unwrap()], vec![]).unwrap();
    let c = select_component(&two).unwrap();
    assert_eq!((c.index, c.tau, c.multi_minima), (1, 2, false));
    let tie =
        DomainSpec::new("tie", vec![parse_holo("w^2").unwrap(), parse_holo("2*w^2 + w^3").unwrap()], vec![]).unwrap();
    let c = select_component(&tie).unwrap();
    assert_eq!((c.index, c.multi_minima), (0, true));
    let run = zeta_chain(&tie, HypoStatus::Asserted, false).unwrap();
    assert!(run.multi_minima);
}

#[test]
fn remark_hypothesis_gate() {
    let spec = DomainSpec::remark(5);
    let report = sample_hypo(&spec, 0.01, 1000, 42).unwrap();
    assert!(report.delta_hat.unwrap().0 >= 0.99);
    assert_eq!(report.hypo_status(), HypoStatus::Failed);
    assert!(matches!(zeta_chain(&spec, report.hypo_status(), false), Err(Error::HypothesisFailed(_))));
    let forced = zeta_chain(&spec, report.hypo_status(), true).unwrap();
    assert!(!forced.sound);
    assert_eq!(forced.hypo_status, HypoStatus::Failed);
}

#[test]
fn delta_hat_matches_direct_evaluation() {
    for spec in specs() {
        let report = sample_hypo(&spec, 0.05, 300, 9).unwrap();
        let fw: Vec<Poly> = spec.f.iter().map(|f| diff(f.as_poly(), Var::W)).collect();
        let gw: Vec<Poly> = spec.g.iter().map(|g| diff(g.as_poly(), Var::W)).collect();
        let mut best: f64 = 0.0;
        for pt in sample_points(0.05, 300, 9) {
            let a: f64 = fw.iter().map(|q| eval(q, pt.z(), pt.w()).norm_sqr()).sum();
            let b: f64 = gw.iter().map(|q| eval(q, pt.z(), pt.w()).norm_sqr()).sum();
            if a > 1e-14 {
                best = best.max(b / a);
            }
        }
        let got = report.delta_hat.unwrap().0;
        assert!((got - best).abs() <= 1e-12 * (1.0 + best), "{}: {got} vs {best}", spec.name);
        let expected = if spec.g.is_empty() { HypoStatus::VerifiedNumerically } else { HypoStatus::Failed };
        assert_eq!(report.hypo_status(), expected, "{}", spec.name);
    }
}

#[test]
fn remark_levi_determinant_is_nonnegative_near_the_origin() {
    let spec = DomainSpec::remark(5);
    let lambda = spec.levi_data().unwrap().lambda;
    assert_eq!(lambda, p("5*w^4 + 5*wb^4 + 25*w^4*wb^4 + 4*w*wb"));
    let report = boundary_pseudoconvexity(&spec, 0.1, 1000, 42).unwrap();
    let min = report.min_lambda_on_boundary.unwrap();
    assert!(min >= -1e-10);
    assert_eq!(report.violation_count, 0);
    // lambda depends on w only: 4|w|^2 - 10|w|^4 <= lambda, positive for |w| < 0.6.
    for pt in sample_points(0.1, 200, 3) {
        let w = pt.w();
        let v = eval(&lambda, pt.z(), w).re;
        assert!(v >= 4.0 * w.norm_sqr() - 10.0 * w.norm_sqr().powi(2) - 1e-15);
    }
}

#[test]
fn finite_differences_agree_with_symbolic_levi() {
    for spec in specs() {
        let pts = sample_points(0.5, 100, 42);
        let err = finite_diff_levi(&spec, &pts, 1e-4).unwrap();
        assert!(err <= 1e-5, "{}: {err}", spec.name);
    }
    let pts = sample_points(0.5, 10, 1);
    assert!(finite_diff_levi(&DomainSpec::flat(), &pts, 1e-1).is_err());
    assert!(finite_diff_levi(&DomainSpec::flat(), &pts, 1e-8).is_err());
}

#[test]
fn levi_bound_for_one_component_domains() {
    for spec in specs().into_iter().filter(|s| s.g.is_empty()) {
        let report = verify_levi_bound(&spec, 0.3, 200, 5).unwrap();
        let c = report.c_hat.unwrap();
        assert!((c - 1.0).abs() < 1e-9, "{}: {c}", spec.name);
        assert_eq!(report.violation_count, 0);
    }
    assert!(sample_hypo(&DomainSpec::flat(), 0.0, 10, 1).is_err());
    assert!(sample_hypo(&DomainSpec::flat(), 0.1, 0, 1).is_err());
}

#[test]
fn radical_certificates_pass_the_spot_check() {
    let spec = DomainSpec::family(3, 2, 5);
    let ld = spec.levi_data().unwrap();
    let ideal = LocalIdeal::new(vec![ld.r.clone(), ld.lambda.clone()]).unwrap();
    let ext = radical_extend(&ideal, 32).unwrap();
    let checks = spot_check(&ext, 0.05, 400, 11).unwrap();
    assert_eq!(checks.len(), ext.certificates.len());
    assert!(checks.iter().all(|c| c.bounded), "{checks:?}");
    assert!(checks.iter().all(|c| c.c_outer.is_finite() && c.c_outer != Extended::INFINITY));
}

#[test]
fn comparison_table() {
    let cmp = effective::compare(
        &DomainSpec::family(3, 2, 6),
        &KohnConfig::default(),
        8,
        &default_coeff_set(),
        HypoStatus::Asserted,
        false,
    )
    .unwrap();
    assert_eq!(cmp.type_bound.to_string(), "6");
    assert_eq!(cmp.optimal, Some(Order::new(1, 6)));
    assert_eq!(cmp.classic, Some(Order::new(1, 48)));
    assert_eq!(cmp.effective, Some(Order::new(1, 16)));
    let text = cmp.to_string();
    assert!(text.lines().next().unwrap().starts_with("domain"));
    assert!(text.contains("1/48"));
}
