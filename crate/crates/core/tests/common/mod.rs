#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;
use subelliptic::{GaussRational, HoloPoly, Monomial, Poly, Var};

pub fn coeff() -> impl Strategy<Value = GaussRational> {
    (-4i64..=4, 1i64..=3, -2i64..=2).prop_map(|(re, den, im)| GaussRational::from_parts((re, den), (im, 1)))
}

/// Polynomials with up to `terms` terms, each exponent at most `max_exp`.
pub fn poly(terms: usize, max_exp: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::array::uniform4(0..=max_exp), coeff()), 0..=terms)
        .prop_map(|ts| Poly::from_terms(ts.into_iter().map(|(e, c)| (Monomial::new(e), c))))
}

/// Holomorphic polynomials vanishing at the origin with total degree at most `deg`.
pub fn holo(terms: usize, deg: u32) -> impl Strategy<Value = HoloPoly> {
    prop::collection::vec((0..=deg, 0..=deg, coeff()), 1..=terms).prop_map(move |ts| {
        let p = Poly::from_terms(
            ts.into_iter()
                .filter(|(a, c, _)| a + c >= 1 && a + c <= deg)
                .map(|(a, c, k)| (Monomial::new([a, 0, c, 0]), k)),
        );
        HoloPoly::new(p).expect("holomorphic by construction")
    })
}

/// Derivative computed term by term from the exponent vectors.
pub fn diff(p: &Poly, v: Var) -> Poly {
    let i = Var::ALL.iter().position(|x| *x == v).unwrap();
    Poly::from_terms(p.terms().filter(|(m, _)| m.exps()[i] > 0).map(|(m, c)| {
        let mut e = m.exps();
        let n = e[i];
        e[i] -= 1;
        (Monomial::new(e), c * &GaussRational::from_integer(n as i64))
    }))
}

/// Conjugate computed by swapping exponent pairs and conjugating coefficients.
pub fn conj(p: &Poly) -> Poly {
    Poly::from_terms(p.terms().map(|(m, c)| {
        let [a, b, c2, d] = m.exps();
        (Monomial::new([b, a, d, c2]), c.conj())
    }))
}

/// Schoolbook product over term pairs.
pub fn mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Vec::new();
    for (m, a) in p.terms() {
        for (n, b) in q.terms() {
            let e: Vec<u32> = m.exps().iter().zip(n.exps()).map(|(x, y)| x + y).collect();
            out.push((Monomial::new([e[0], e[1], e[2], e[3]]), a * b));
        }
    }
    Poly::from_terms(out)
}

pub fn p(s: &str) -> Poly {
    subelliptic::parse_poly(s).unwrap()
}

// Membership in ideals containing a power of the maximal ideal reduces to
// linear algebra on the monomials below that power: exact Gaussian
// elimination over Q(i).

pub fn monomials_below(n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n - a {
            for c in 0..n - a - b {
                for d in 0..n - a - b - c {
                    out.push(Monomial::new([a, b, c, d]));
                }
            }
        }
    }
    out
}

pub struct Echelon {
    rows: BTreeMap<Monomial, BTreeMap<Monomial, GaussRational>>,
}

impl Echelon {
    pub fn reduce(&self, mut v: BTreeMap<Monomial, GaussRational>) -> BTreeMap<Monomial, GaussRational> {
        loop {
            let Some(piv) = v.keys().find(|m| self.rows.contains_key(m)).copied() else {
                return v;
            };
            let c = v[&piv].clone();
            for (m, a) in &self.rows[&piv] {
                let e = v.entry(*m).or_insert_with(GaussRational::zero);
                *e -= &(&c * a);
                if e.is_zero() {
                    v.remove(m);
                }
            }
        }
    }

    pub fn insert(&mut self, v: BTreeMap<Monomial, GaussRational>) {
        let v = self.reduce(v);
        let Some((piv, c)) = v.iter().next() else { return };
        let inv = GaussRational::one() / c.clone();
        let piv = *piv;
        let row = v.into_iter().map(|(m, a)| (m, &a * &inv)).collect();
        self.rows.insert(piv, row);
    }
}

pub fn truncated(q: &Poly, n: u32) -> BTreeMap<Monomial, GaussRational> {
    q.terms().filter(|(m, _)| m.degree() < n).map(|(m, c)| (*m, c.clone())).collect()
}

/// Membership of `f` in `(gens) + m^n`, valid in the local ring whenever
/// `m^n` already lies in the ideal.
pub fn oracle(gens: &[Poly], f: &Poly, n: u32) -> bool {
    let mut ech = Echelon { rows: BTreeMap::new() };
    let shifts = monomials_below(n);
    for g in gens {
        for s in &shifts {
            ech.insert(truncated(&g.mul_monomial(s), n));
        }
    }
    ech.reduce(truncated(f, n)).is_empty()
}

/// Whether every degree-`n` monomial lies in `(gens) + m^(n+1)`; by
/// Nakayama the local ideal then contains `m^n`.
pub fn contains_max_power(gens: &[Poly], n: u32) -> bool {
    let mut ech = Echelon { rows: BTreeMap::new() };
    let shifts = monomials_below(n + 1);
    for g in gens {
        for s in &shifts {
            ech.insert(truncated(&g.mul_monomial(s), n + 1));
        }
    }
    shifts
        .into_iter()
        .filter(|m| m.degree() == n)
        .all(|m| ech.reduce(truncated(&Poly::term(GaussRational::one(), m), n + 1)).is_empty())
}
