use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::standard_basis::LocalIdeal;
use crate::error::{Error, Result};
use crate::polyring::{GaussRational, Monomial, Poly, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadicalRule {
    Conjugation,
    HermitianSquare,
    MonomialRoot,
    AlgebraicPower,
}

impl RadicalRule {
    pub fn name(self) -> &'static str {
        match self {
            RadicalRule::Conjugation => "conjugation",
            RadicalRule::HermitianSquare => "hermitian-square",
            RadicalRule::MonomialRoot => "monomial-root",
            RadicalRule::AlgebraicPower => "algebraic-power",
        }
    }
}

/// The identity behind a certificate. Sources are indexed first over the
/// ideal's generators, then over earlier certificates of the same run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `element = conj(source)`.
    Conjugate { source: usize },
    /// `source = scale * element * conj(element)`.
    Square { source: usize, scale: GaussRational },
    /// `monomial` lies in the ideal and is a power product of the element
    /// and its conjugate.
    Monomial { monomial: Monomial },
    /// `element^exponent` lies in the ideal; `element` is `source` with
    /// its monomial content replaced by the radical of that content.
    Power { source: usize, exponent: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadicalCertificate {
    pub element: Poly,
    pub order: u32,
    pub rule: RadicalRule,
    pub witness: Witness,
}

/// Result of [`radical_extend`]: the certificates in commit order and the
/// ideal they generate together with the input.
#[derive(Clone, Debug)]
pub struct RadicalExtension {
    pub certificates: Vec<RadicalCertificate>,
    /// `stages[i]` is the ideal in force when certificate `i` was found.
    pub stages: Vec<LocalIdeal>,
    pub ideal: LocalIdeal,
    /// Membership queries that exhausted the reduction budget. Each was
    /// treated as giving no certificate.
    pub undecided: usize,
}

/// Membership queries of one radical search; an undecided query yields
/// `None` and is counted.
struct Search<'a> {
    w: &'a LocalIdeal,
    undecided: usize,
}

impl Search<'_> {
    fn member(&mut self, p: &Poly) -> Result<Option<bool>> {
        self.decide(self.w.contains(p))
    }

    fn member_monomial(&mut self, m: &Monomial) -> Result<Option<bool>> {
        self.decide(self.w.contains_monomial(m))
    }

    fn decide(&mut self, r: Result<bool>) -> Result<Option<bool>> {
        match r {
            Ok(b) => Ok(Some(b)),
            Err(Error::Undecided(_)) => {
                self.undecided += 1;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    /// Smallest `m <= cap` with `g^m` provably in the ideal; stops at the
    /// first undecided power.
    fn power_order(&mut self, g: &Poly, cap: u32) -> Result<Option<u32>> {
        let mut acc = Poly::one();
        for m in 1..=cap {
            acc = &acc * g;
            if let Some(n) = self.w.corner() {
                acc.truncate_degree(n);
            }
            match self.member(&acc)? {
                Some(true) => return Ok(Some(m)),
                Some(false) => {}
                None => return Ok(None),
            }
        }
        Ok(None)
    }
}

/// Smallest `m <= cap` with `g^m` in `ideal`.
pub fn min_algebraic_radical_order(g: &Poly, ideal: &LocalIdeal, cap: u32) -> Result<Option<u32>> {
    let mut acc = Poly::one();
    for m in 1..=cap {
        acc = &acc * g;
        if let Some(n) = ideal.corner() {
            acc.truncate_degree(n);
        }
        if ideal.contains(&acc)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Writes `p = scale * h * conj(h)` with `h` holomorphic and primitive, when
/// the coefficient matrix of `p` has rank one.
pub fn hermitian_root(p: &Poly) -> Option<(Poly, GaussRational)> {
    if p.is_zero() || !p.is_real() {
        return None;
    }
    // C[alpha][beta] with alpha the (z, w) exponents and beta the (zb, wb) ones.
    let mut matrix: BTreeMap<(u32, u32), BTreeMap<(u32, u32), GaussRational>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let [a, b, c_, d] = m.exps();
        matrix.entry((a, c_)).or_default().insert((b, d), c.clone());
    }
    let pivot =
        matrix.iter().find(|(alpha, row)| row.get(alpha).is_some_and(|c| !c.is_zero())).map(|(alpha, _)| *alpha)?;
    let c00 = matrix[&pivot][&pivot].clone();
    let column = Poly::from_terms(
        matrix.iter().filter_map(|((a, c), row)| row.get(&pivot).map(|x| (Monomial::new([*a, 0, *c, 0]), x.clone()))),
    );
    if &column * &column.conj() != p.scale(&c00) {
        return None;
    }
    let h = column.primitive();
    let hh = &h * &h.conj();
    let (m, c) = hh.first_term()?;
    let scale = &p.coeff(m) / c;
    Some((h, scale))
}

/// Replaces the monomial content `m` of `p` by its radical, when that
/// changes anything.
pub(crate) fn content_radical(p: &Poly) -> Option<(Poly, u32)> {
    let m = p.monomial_content();
    let rad = m.radical();
    if rad == m {
        return None;
    }
    let q = p.div_monomial(&m)?;
    let exponent = m.exps().into_iter().max().unwrap_or(1);
    Some((q.mul_monomial(&rad), exponent))
}

struct Candidate {
    element: Poly,
    order: u32,
    rule: RadicalRule,
    witness: Witness,
}

/// Applies the four radical rules to `ideal` until nothing new is found,
/// committing one certificate at a time (smallest order first, ties by
/// rule, then by source). Every committed element joins the ideal before
/// the next search.
pub fn radical_extend(ideal: &LocalIdeal, order_cap: u32) -> Result<RadicalExtension> {
    let mut current = ideal.clone();
    let mut certificates: Vec<RadicalCertificate> = Vec::new();
    let mut stages = Vec::new();
    let n_gens = ideal.generators().len();
    let mut undecided = 0;
    loop {
        let sources: Vec<(&Poly, u32)> = ideal
            .generators()
            .iter()
            .map(|g| (g, 1))
            .chain(certificates.iter().map(|c| (&c.element, c.order)))
            .collect();
        let mut search = Search { w: &current, undecided: 0 };
        let best = best_candidate(&mut search, &sources, n_gens, order_cap)?;
        undecided += search.undecided;
        let Some(best) = best else {
            break;
        };
        stages.push(current.clone());
        current = current.extend(std::slice::from_ref(&best.element))?;
        certificates.push(RadicalCertificate {
            element: best.element,
            order: best.order,
            rule: best.rule,
            witness: best.witness,
        });
    }
    Ok(RadicalExtension { certificates, stages, ideal: current, undecided })
}

fn best_candidate(w: &mut Search<'_>, sources: &[(&Poly, u32)], n_gens: usize, cap: u32) -> Result<Option<Candidate>> {
    let mut found: Vec<Candidate> = Vec::new();
    for (i, (g, k)) in sources.iter().enumerate() {
        let c = g.conj();
        if c != **g && w.member(&c)? == Some(false) {
            let order = if i < n_gens { 1 } else { *k };
            found.push(Candidate {
                element: c,
                order,
                rule: RadicalRule::Conjugation,
                witness: Witness::Conjugate { source: i },
            });
        }
    }
    for (i, (g, _)) in sources.iter().enumerate().take(n_gens) {
        if let Some((h, scale)) = hermitian_root(g) {
            if w.member(&h)? == Some(false) {
                found.push(Candidate {
                    element: h,
                    order: 2,
                    rule: RadicalRule::HermitianSquare,
                    witness: Witness::Square { source: i, scale },
                });
            }
        }
    }
    // Ties go to the earlier rule, so the monomial and power searches only
    // need to beat the best order found so far. Powers are cheaper and run
    // first to tighten the bound for monomials.
    let early = found.iter().map(|c| c.order).min();
    let exponent_limit = early.map_or(cap, |o| cap.min(o.saturating_sub(1) / 2));
    let mut powers = Vec::new();
    for (i, (g, _)) in sources.iter().enumerate() {
        let Some((cand, bound)) = content_radical(g) else {
            continue;
        };
        let exponent_cap = bound.min(exponent_limit);
        if exponent_cap == 0 || w.member(&cand)? != Some(false) {
            continue;
        }
        if let Some(m) = w.power_order(&cand, exponent_cap)? {
            powers.push(Candidate {
                element: cand,
                order: 2 * m,
                rule: RadicalRule::AlgebraicPower,
                witness: Witness::Power { source: i, exponent: m },
            });
        }
    }
    let degree_limit = [early.map(|o| o.saturating_sub(1)), powers.iter().map(|c| c.order).min()]
        .into_iter()
        .flatten()
        .fold(cap, u32::min);
    let mut open = Vec::new();
    for v in Var::ALL {
        if w.member(&Poly::var(v))? == Some(false) {
            open.push(v);
        }
    }
    for (v, mono) in monomial_roots(w, &open, degree_limit)? {
        found.push(Candidate {
            element: Poly::var(v),
            order: mono.degree(),
            rule: RadicalRule::MonomialRoot,
            witness: Witness::Monomial { monomial: mono },
        });
    }
    found.extend(powers);
    // `min_by_key` keeps the first minimum, so ties fall back to discovery
    // order: rule first, then source index.
    Ok(found.into_iter().min_by_key(|c| (c.order, c.rule)))
}

/// Power products of some `v` and its conjugate lying in `w`, at the
/// smallest degree where any variable has one.
fn monomial_roots(w: &mut Search<'_>, vars: &[Var], cap: u32) -> Result<Vec<(Var, Monomial)>> {
    let mut pending = vars.to_vec();
    let mut out = Vec::new();
    for d in 1..=cap {
        if pending.is_empty() {
            break;
        }
        let mut still = Vec::new();
        for v in pending {
            let vb = v.conj();
            let mut hit = None;
            let mut stuck = false;
            for a in (0..=d).rev() {
                let m = Monomial::var_pow(v, a).mul(&Monomial::var_pow(vb, d - a));
                match w.member_monomial(&m)? {
                    Some(true) => {
                        hit = Some(m);
                        break;
                    }
                    Some(false) => {}
                    // Higher degrees only get more expensive.
                    None => stuck = true,
                }
            }
            match hit {
                Some(m) => out.push((v, m)),
                None if !stuck => still.push(v),
                None => {}
            }
        }
        if !out.is_empty() {
            break;
        }
        pending = still;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localideal::standard_basis;
    use crate::polyring::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn hermitian_square_of_levi_determinant() {
        let h = p("3*w^2 + 2*z^5*w");
        let lambda = &h * &h.conj();
        let (root, scale) = hermitian_root(&lambda).unwrap();
        assert_eq!(root, h);
        assert_eq!(scale, GaussRational::from_integer(1));
        let neg = -(&lambda.scale(&GaussRational::from_integer(4)));
        let (root, scale) = hermitian_root(&neg).unwrap();
        assert_eq!(root, h);
        assert_eq!(scale, GaussRational::from_integer(-4));
        assert!(hermitian_root(&p("z*zb + w*wb")).is_none());
        assert!(hermitian_root(&p("z + zb")).is_none());
    }

    #[test]
    fn hermitian_square_certificate() {
        let i = standard_basis(&[p("w*wb") * (p("3*w + 2*z^5") * p("3*wb + 2*zb^5"))]).unwrap();
        let ext = radical_extend(&i, 8).unwrap();
        let first = &ext.certificates[0];
        assert_eq!(first.element, p("3*w^2 + 2*z^5*w"));
        assert_eq!(first.order, 2);
        assert_eq!(first.rule, RadicalRule::HermitianSquare);
        assert_eq!(ext.certificates[1].element, p("3*wb^2 + 2*zb^5*wb"));
        assert_eq!(ext.certificates[1].rule, RadicalRule::Conjugation);
    }

    #[test]
    fn monomial_root_of_power() {
        let i = standard_basis(&[p("z^5")]).unwrap();
        let ext = radical_extend(&i, 8).unwrap();
        assert_eq!(ext.certificates[0].element, p("zb^5"));
        let c = ext.certificates.iter().find(|c| c.element == p("z")).unwrap();
        assert_eq!(c.order, 5);
        assert_eq!(c.rule, RadicalRule::MonomialRoot);
    }

    #[test]
    fn conjugate_of_generator() {
        let i = standard_basis(&[p("w")]).unwrap();
        let ext = radical_extend(&i, 8).unwrap();
        assert_eq!(ext.certificates.len(), 1);
        assert_eq!(ext.certificates[0].element, p("wb"));
        assert_eq!(ext.certificates[0].order, 1);
        assert_eq!(ext.certificates[0].rule, RadicalRule::Conjugation);
    }

    #[test]
    fn power_of_radical_content() {
        let g = p("3*w^3 + z^6*w^2");
        let i = standard_basis(&[g]).unwrap();
        let ext = radical_extend(&i, 8).unwrap();
        let c = ext
            .certificates
            .iter()
            .find(|c| c.rule == RadicalRule::AlgebraicPower)
            .expect("algebraic power certificate");
        assert_eq!(c.element, p("3*w^2 + z^6*w"));
        assert_eq!(c.order, 4);
    }

    #[test]
    fn algebraic_orders() {
        let i = standard_basis(&[p("w^2")]).unwrap();
        assert_eq!(min_algebraic_radical_order(&p("w"), &i, 8).unwrap(), Some(2));
        let j = standard_basis(&[p("z")]).unwrap();
        assert_eq!(min_algebraic_radical_order(&Poly::one(), &j, 32).unwrap(), None);
    }
}
