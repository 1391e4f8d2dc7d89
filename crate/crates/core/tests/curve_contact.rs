mod common;

use common::{coeff, conj, mul, poly};
use num_rational::Rational64;
use num_traits::{One, Zero};
use proptest::prelude::*;
use subelliptic::domain::{contact_order, default_coeff_set, type_lower_bound, ContactOrder, DomainSpec};
use subelliptic::polyring::{substitute_curve, Curve};
use subelliptic::{GaussRational, Monomial, Poly, Var};

/// `sum c_s t^s` as a polynomial in the `z` slot.
fn series(terms: &[(u32, GaussRational)]) -> Poly {
    Poly::from_terms(terms.iter().map(|(s, c)| (Monomial::var_pow(Var::Z, *s), c.clone())))
}

fn power(q: &Poly, e: u32) -> Poly {
    (0..e).fold(Poly::one(), |acc, _| mul(&acc, q))
}

/// Expands `r(z(t), conj z(t), w(t), conj w(t))` monomial by monomial.
fn pullback(r: &Poly, z: &[(u32, GaussRational)], w: &[(u32, GaussRational)]) -> Poly {
    let zt = series(z);
    let wt = series(w);
    let slots = [zt.clone(), conj(&zt), wt.clone(), conj(&wt)];
    let mut out = Poly::zero();
    for (m, c) in r.terms() {
        let mut t = Poly::constant(c.clone());
        for (q, e) in slots.iter().zip(m.exps()) {
            t = mul(&t, &power(q, e));
        }
        out = &out + &t;
    }
    out
}

fn min_degree(q: &Poly) -> Option<u32> {
    q.terms().map(|(m, _)| m.degree()).min()
}

fn brute_contact(r: &Poly, z: &[(u32, GaussRational)], w: &[(u32, GaussRational)]) -> ContactOrder {
    let mult = z.iter().chain(w).filter(|(_, c)| !c.is_zero()).map(|(s, _)| *s).min().unwrap();
    match min_degree(&pullback(r, z, w)) {
        Some(v) => ContactOrder::Finite(Rational64::new(v as i64, mult as i64)),
        None => ContactOrder::Infinite,
    }
}

fn one() -> GaussRational {
    GaussRational::one()
}

fn brute_type(spec: &DomainSpec, cap: u32) -> ContactOrder {
    let r = spec.expand_r();
    let mut best = brute_contact(&r, &[], &[(1, one())]);
    for s in 1..=cap {
        for c in default_coeff_set() {
            best = best.max(brute_contact(&r, &[(s, c)], &[(1, one())]));
        }
    }
    best
}

fn fin(n: i64) -> ContactOrder {
    ContactOrder::Finite(Rational64::from_integer(n))
}

fn curve_terms() -> impl Strategy<Value = Vec<(u32, GaussRational)>> {
    prop::collection::vec((1u32..=3, coeff()), 0..=2)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn substitution_matches_expansion(r in poly(5, 2), z in curve_terms(), w in curve_terms()) {
        let curve = Curve::new(z.clone(), w.clone());
        prop_assert_eq!(substitute_curve(&r, &curve).unwrap().0, pullback(&r, &z, &w));
    }

    #[test]
    fn contact_matches_brute_force(f in common::holo(3, 4), z in curve_terms(), w0 in coeff()) {
        prop_assume!(!w0.is_zero());
        let spec = DomainSpec::new("random", vec![f], vec![]).unwrap();
        let r = spec.expand_r();
        let mut w = vec![(1, w0)];
        w.push((2, GaussRational::from_integer(1)));
        let curve = Curve::new(z.clone(), w.clone());
        prop_assert_eq!(contact_order(&r, &curve).unwrap(), brute_contact(&r, &z, &w));
    }
}

#[test]
fn type_bounds_match_brute_force() {
    let specs = [
        DomainSpec::flat(),
        DomainSpec::family(3, 2, 4),
        DomainSpec::family(3, 2, 5),
        DomainSpec::family(3, 2, 6),
        DomainSpec::family(4, 3, 6),
        DomainSpec::remark(5),
    ];
    let expected = [2, 6, 6, 6, 8, 4];
    for (spec, want) in specs.iter().zip(expected) {
        let got = type_lower_bound(spec, 8, &default_coeff_set()).unwrap();
        assert_eq!(got.value, brute_type(spec, 8), "{}", spec.name);
        assert_eq!(got.value, fin(want), "{}", spec.name);
        assert_eq!(got.curves_checked, 1 + 8 * default_coeff_set().len());
    }
}

#[test]
fn tangent_line_of_the_remark_domain() {
    let r = DomainSpec::remark(5).expand_r();
    let pb = pullback(&r, &[], &[(1, one())]);
    // |t|^4 + t^5 tb + t tb^5 + |t|^10
    assert_eq!(min_degree(&pb), Some(4));
    assert_eq!(contact_order(&r, &Curve::tangent_line()).unwrap(), fin(4));
}

#[test]
fn normal_line_and_singular_curves() {
    let r = DomainSpec::family(3, 2, 5).expand_r();
    assert_eq!(contact_order(&r, &Curve::normal_line()).unwrap(), fin(1));
    // (t^2, t^3) has multiplicity 2.
    let cusp = [(2, one())];
    let cusp_w = [(3, one())];
    let c = Curve::new(cusp.clone(), cusp_w.clone());
    assert_eq!(contact_order(&r, &c).unwrap(), brute_contact(&r, &cusp, &cusp_w));
    assert_eq!(contact_order(&r, &c).unwrap(), fin(1));
    assert!(contact_order(&r, &Curve::new([], [])).is_err());
    assert!(substitute_curve(&r, &Curve::new([(0, one())], [(1, one())])).is_err());
}
