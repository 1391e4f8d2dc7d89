use std::collections::HashSet;

use num_traits::{One, Zero};

use super::order::LocalOrder;
use crate::error::{Error, Result};
use crate::polyring::{GaussRational, Monomial, Poly, Var};

/// Default budget of reduction steps per basis computation or membership
/// query.
pub const DEFAULT_STEP_CAP: u64 = 100_000;

/// Levels above the vanishing order at which membership in `I + m^N` is
/// tried once a full reduction runs out of budget.
const TRUNCATION_PROBES: u32 = 6;

/// Largest intermediate polynomial a reduction without a highest corner
/// may build.
pub const MAX_REDUCTION_TERMS: usize = 500;

#[derive(Clone, Debug)]
struct Elem {
    poly: Poly,
    lm: Monomial,
    ecart: u32,
}

impl Elem {
    /// Monic copy of `p`, `None` for zero.
    fn monic(p: &Poly) -> Option<Self> {
        let (lm, lc) = LocalOrder.leading(p)?;
        let lm = *lm;
        let inv = lc.inv().expect("leading coefficient is nonzero");
        let poly = p.scale(&inv);
        let ecart = LocalOrder.ecart(&poly);
        Some(Self { poly, lm, ecart })
    }

    fn lc(&self) -> GaussRational {
        self.poly.coeff(&self.lm)
    }
}

struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn new(cap: u64) -> Self {
        Self { used: 0, cap }
    }

    fn tick(&mut self, terms: usize) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            return Err(Error::Undecided(format!("reduction step cap {} exhausted", self.cap)));
        }
        if terms > MAX_REDUCTION_TERMS {
            return Err(Error::Undecided(format!("reduction grew past {MAX_REDUCTION_TERMS} terms")));
        }
        Ok(())
    }
}

/// A finitely generated ideal of the local ring at the origin, with a
/// standard basis for [`LocalOrder`].
#[derive(Clone, Debug)]
pub struct LocalIdeal {
    generators: Vec<Poly>,
    basis: Vec<Elem>,
    /// Every monomial of total degree `>= corner` lies in the ideal.
    corner: Option<u32>,
    step_cap: u64,
}

/// Standard basis of the ideal generated by `gens` with the default budget.
pub fn standard_basis(gens: &[Poly]) -> Result<LocalIdeal> {
    LocalIdeal::new(gens.to_vec())
}

impl LocalIdeal {
    pub fn new(generators: Vec<Poly>) -> Result<Self> {
        Self::with_step_cap(generators, DEFAULT_STEP_CAP)
    }

    pub fn with_step_cap(generators: Vec<Poly>, step_cap: u64) -> Result<Self> {
        let empty = Self { generators: Vec::new(), basis: Vec::new(), corner: None, step_cap };
        empty.extend(&generators)
    }

    /// The ideal with `more` appended to the generators. Pairs among the
    /// existing basis are not revisited.
    pub fn extend(&self, more: &[Poly]) -> Result<Self> {
        let mut generators = self.generators.clone();
        generators.extend(more.iter().cloned());
        let mut budget = Budget::new(self.step_cap);
        let (basis, corner) = complete(self.basis.clone(), more, &mut budget)?;
        Ok(Self { generators, basis, corner, step_cap: self.step_cap })
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// The minimal, monic standard basis.
    pub fn basis(&self) -> impl Iterator<Item = &Poly> {
        self.basis.iter().map(|e| &e.poly)
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.basis.iter().map(|e| e.lm)
    }

    /// Degree from which on every monomial belongs to the ideal, when the
    /// ideal is primary to the maximal ideal.
    pub fn corner(&self) -> Option<u32> {
        self.corner
    }

    pub fn step_cap(&self) -> u64 {
        self.step_cap
    }

    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|e| e.lm.is_one())
    }

    /// Weak normal form of `p`: zero iff `p` lies in the ideal.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        let mut budget = Budget::new(self.step_cap);
        reduce(p, &self.basis, self.corner, &mut budget)
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        if p.is_zero() || self.is_unit() {
            return Ok(true);
        }
        if let (Some(n), Some(v)) = (self.corner, p.vanishing_order().finite()) {
            if v >= n {
                return Ok(true);
            }
        }
        match self.normal_form(p) {
            Ok(h) => Ok(h.is_zero()),
            Err(Error::Undecided(reason)) if self.corner.is_none() => {
                if self.excluded_by_truncation(p)? {
                    Ok(false)
                } else {
                    Err(Error::Undecided(reason))
                }
            }
            Err(e) => Err(e),
        }
    }

    /// Whether `p` already fails to lie in some `I + m^N`. The basis
    /// truncated below `N` is a standard basis of `I + m^N`, so these
    /// reductions stay in a finite-dimensional space.
    fn excluded_by_truncation(&self, p: &Poly) -> Result<bool> {
        let Some(v) = p.vanishing_order().finite() else {
            return Ok(false);
        };
        let mut budget = Budget::new(self.step_cap);
        for n in v + 1..=v + TRUNCATION_PROBES {
            if !reduce(p, &self.basis, Some(n), &mut budget)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn contains_monomial(&self, m: &Monomial) -> Result<bool> {
        if self.corner.is_some_and(|n| m.degree() >= n) {
            return Ok(true);
        }
        if !self.basis.iter().any(|e| e.lm.divides(m)) {
            return Ok(false);
        }
        self.contains(&Poly::term(GaussRational::one(), *m))
    }

    /// `p^e` reduced modulo the corner (exact when no corner is known).
    pub fn truncated_pow(&self, p: &Poly, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * p;
            if let Some(n) = self.corner {
                acc.truncate_degree(n);
            }
        }
        acc
    }
}

fn corner_of(basis: &[Elem]) -> Option<u32> {
    if basis.iter().any(|e| e.lm.is_one()) {
        return Some(0);
    }
    let mut bound = 1;
    for v in Var::ALL {
        let e = basis.iter().filter(|g| g.lm.degree() == g.lm.exp(v)).map(|g| g.lm.exp(v)).min()?;
        bound += e - 1;
    }
    Some(bound)
}

fn spoly(a: &Elem, b: &Elem) -> Poly {
    let l = a.lm.lcm(&b.lm);
    let mut s = a.poly.mul_monomial(&l.checked_div(&a.lm).expect("lcm"));
    s.add_scaled_shifted(&-GaussRational::one(), &l.checked_div(&b.lm).expect("lcm"), &b.poly);
    s
}

/// Mora's normal form with ecart.
fn reduce(f: &Poly, basis: &[Elem], corner: Option<u32>, budget: &mut Budget) -> Result<Poly> {
    let mut h = f.clone();
    if let Some(n) = corner {
        h.truncate_degree(n);
    }
    let mut extra: Vec<Elem> = Vec::new();
    loop {
        let Some((lm, lc)) = LocalOrder.leading(&h).map(|(m, c)| (*m, c.clone())) else {
            return Ok(h);
        };
        let pick = basis
            .iter()
            .chain(extra.iter())
            .enumerate()
            .filter(|(_, g)| g.lm.divides(&lm))
            .min_by_key(|(_, g)| g.ecart)
            .map(|(i, _)| i);
        let Some(i) = pick else {
            return Ok(h);
        };
        let g = if i < basis.len() { basis[i].clone() } else { extra[i - basis.len()].clone() };
        let eh = LocalOrder.ecart(&h);
        if g.ecart > eh {
            extra.push(Elem { poly: h.clone(), lm, ecart: eh });
        }
        let q = lm.checked_div(&g.lm).expect("divisibility checked");
        let c = -(&lc / &g.lc());
        h.add_scaled_shifted(&c, &q, &g.poly);
        if let Some(n) = corner {
            h.truncate_degree(n);
        }
        budget.tick(if corner.is_none() { h.num_terms() } else { 0 })?;
    }
}

/// Buchberger completion with Mora reduction. Pairs are processed lowest
/// lcm degree first, ties by the local order, then by index.
fn complete(mut basis: Vec<Elem>, new: &[Poly], budget: &mut Budget) -> Result<(Vec<Elem>, Option<u32>)> {
    if basis.iter().any(|e| e.lm.is_one()) {
        return Ok((basis, Some(0)));
    }
    if new.iter().any(|p| !p.constant_term().is_zero()) {
        let unit = Elem::monic(&Poly::one()).expect("nonzero");
        return Ok((vec![unit], Some(0)));
    }
    let mut corner = corner_of(&basis);
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let first_new = basis.len();
    for p in new {
        let h = reduce(p, &basis, corner, budget)?;
        if let Some(e) = Elem::monic(&h) {
            let j = basis.len();
            for i in 0..j {
                pending.insert((i, j));
            }
            basis.push(e);
            corner = corner_of(&basis);
        }
    }
    if basis.len() == first_new {
        return Ok((basis, corner));
    }
    while let Some(&(i, j)) = pending.iter().max_by(|a, b| {
        let la = basis[a.0].lm.lcm(&basis[a.1].lm);
        let lb = basis[b.0].lm.lcm(&basis[b.1].lm);
        LocalOrder.cmp(&la, &lb).then_with(|| b.cmp(a))
    }) {
        pending.remove(&(i, j));
        let (a, b) = (&basis[i], &basis[j]);
        if a.lm.is_coprime(&b.lm) {
            continue;
        }
        let l = a.lm.lcm(&b.lm);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm.divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = spoly(a, b);
        let h = reduce(&s, &basis, corner, budget)?;
        let Some(e) = Elem::monic(&h) else {
            continue;
        };
        if e.lm.is_one() {
            return Ok((vec![e], Some(0)));
        }
        let n = basis.len();
        for k in 0..n {
            pending.insert((k, n));
        }
        basis.push(e);
        corner = corner_of(&basis);
    }
    Ok((minimize(basis), corner))
}

fn minimize(basis: Vec<Elem>) -> Vec<Elem> {
    let mut keep: Vec<Elem> = Vec::new();
    for (i, e) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, o)| j != i && o.lm.divides(&e.lm) && (o.lm != e.lm || j < i));
        if !redundant {
            keep.push(e.clone());
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn ideal(gens: &[&str]) -> LocalIdeal {
        standard_basis(&gens.iter().map(|s| p(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn single_monomial() {
        let i = ideal(&["w^2"]);
        assert_eq!(i.basis().cloned().collect::<Vec<_>>(), vec![p("w^2")]);
        assert!(!i.contains(&p("w")).unwrap());
        assert!(i.contains(&p("3*w^2*z + w^5")).unwrap());
    }

    #[test]
    fn local_units() {
        assert!(ideal(&["1 + w"]).is_unit());
        assert!(ideal(&["6"]).is_unit());
        assert!(!ideal(&["z", "w"]).is_unit());
        assert!(ideal(&["w + w^2", "1 - w"]).is_unit());
        // (1 + w)*w generates the same local ideal as w.
        assert!(ideal(&["w + w^2"]).contains(&p("w")).unwrap());
    }

    #[test]
    fn maximal_ideal() {
        let m = ideal(&["z", "zb", "w", "wb"]);
        assert!(!m.contains(&Poly::one()).unwrap());
        assert_eq!(m.corner(), Some(1));
        assert!(m.contains(&p("z*w + 7*wb^3")).unwrap());
    }

    #[test]
    fn row_derivative_example() {
        let i = ideal(&["3*w^2 + 2*z^5*w", "6*w + 2*z^5"]);
        assert!(i.contains(&p("w^2")).unwrap());
        assert!(i.contains(&p("z^10")).unwrap());
        assert!(i.contains(&p("3*w + z^5")).unwrap());
        assert!(!i.contains(&p("w")).unwrap());
        assert!(!i.contains(&p("z^9")).unwrap());
    }

    #[test]
    fn membership_is_stable_under_regeneration() {
        let gens = [p("3*w^2 + 2*z^5*w"), p("6*w + 2*z^5")];
        let a = standard_basis(&gens).unwrap();
        let b = standard_basis(&[gens[1].clone(), gens[0].clone()]).unwrap();
        for q in ["w^2", "z^10", "w", "z^9", "w*z^5"] {
            assert_eq!(a.contains(&p(q)).unwrap(), b.contains(&p(q)).unwrap(), "{q}");
        }
    }

    #[test]
    fn step_cap_reports_undecided() {
        let gens = vec![p("z + zb + w^3*wb^3"), p("w*wb + z^2"), p("zb^3 + w^2")];
        match LocalIdeal::with_step_cap(gens, 1) {
            Err(Error::Undecided(_)) => {}
            other => panic!("expected undecided, got {other:?}"),
        }
    }
}
