use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::{fmt_rational, GaussRational};
use super::monomial::{Monomial, Var};

/// Order of vanishing at the origin: minimal total degree of a nonzero term.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum VanishingOrder {
    Finite(u32),
    Infinite,
}

impl VanishingOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            VanishingOrder::Finite(n) => Some(n),
            VanishingOrder::Infinite => None,
        }
    }
}

impl fmt::Display for VanishingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingOrder::Finite(n) => write!(f, "{n}"),
            VanishingOrder::Infinite => f.write_str("inf"),
        }
    }
}

/// Sparse polynomial in `z, zb, w, wb` with Gaussian-rational coefficients.
///
/// No zero coefficient is ever stored, so the empty map is the zero
/// polynomial and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, GaussRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        Self::term(GaussRational::one(), Monomial::var(v))
    }

    pub fn term(c: GaussRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussRational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (graded) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn constant_term(&self) -> GaussRational {
        self.coeff(&Monomial::ONE)
    }

    /// Maximal total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn vanishing_order(&self) -> VanishingOrder {
        self.terms.keys().map(Monomial::degree).min().map_or(VanishingOrder::Infinite, VanishingOrder::Finite)
    }

    /// Gcd of all monomials in the support (`1` for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::ONE,
            Some(first) => it.fold(*first, |acc, m| acc.gcd(m)),
        }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(Monomial::is_holomorphic)
    }

    /// True iff `conj(self) == self`, i.e. the polynomial is real valued.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(m, c)| {
            let cm = m.conj();
            match self.terms.get(&cm) {
                Some(other) => *other == c.conj(),
                None => false,
            }
        })
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * m * g`, in place.
    pub fn add_scaled_shifted(&mut self, c: &GaussRational, m: &Monomial, g: &Poly) {
        if c.is_zero() {
            return;
        }
        for (gm, gc) in &g.terms {
            self.add_term(gm.mul(m), &(c * gc));
        }
    }

    pub fn scale(&self, c: &GaussRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    /// Exact division by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.checked_div(m)?, c.clone());
        }
        Some(Poly { terms })
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugation of the germ: swaps barred and unbarred exponents and
    /// conjugates every coefficient.
    pub fn conj(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect() }
    }

    /// Formal partial derivative in one of the four variables.
    pub fn wirtinger(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        let i = v.index();
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), &(c * &GaussRational::from_integer(e as i64)));
        }
        out
    }

    /// Substitutes `subs[v]` for each variable `v`.
    pub fn compose(&self, subs: &[Poly; 4]) -> Poly {
        let mut powers: [Vec<Poly>; 4] = Default::default();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (vi, e) in m.exps().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let cache = &mut powers[vi];
                if cache.is_empty() {
                    cache.push(Poly::one());
                }
                while cache.len() <= *e as usize {
                    let next = cache.last().unwrap() * &subs[vi];
                    cache.push(next);
                }
                term = &term * &cache[*e as usize];
            }
            out = out + term;
        }
        out
    }

    /// Divides by a rational scalar so that the coefficients are Gaussian
    /// integers with no common rational-integer factor and the first term in
    /// canonical order has positive leading part. Zero stays zero.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        let Some((_, first)) = self.terms.iter().next() else {
            return Poly::zero();
        };
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(&c.denom_lcm());
        }
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c * &GaussRational::real(BigRational::from_integer(den.clone()));
            num = num.gcd(&scaled.numer_gcd());
        }
        let mut factor = BigRational::new(den, num);
        let lead_negative = if first.re().is_zero() { first.im().is_negative() } else { first.re().is_negative() };
        if lead_negative {
            factor = -factor;
        }
        self.scale(&GaussRational::real(factor))
    }

    /// First term in canonical order. This is the leading term for the
    /// local order of `localideal` as well.
    pub fn first_term(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().next()
    }

    /// Drops every term of total degree `>= n`.
    pub fn truncate_degree(&mut self, n: u32) {
        self.terms.retain(|m, _| m.degree() < n);
    }

    /// Writes the polynomial with custom variable names; used for curve
    /// pullbacks printed in `t, tb`.
    pub fn fmt_with(&self, names: &[&str; 4], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            for (part, imaginary) in [(c.re(), false), (c.im(), true)] {
                if part.is_zero() {
                    continue;
                }
                let neg = part.is_negative();
                if first {
                    if neg {
                        f.write_str("-")?;
                    }
                } else {
                    f.write_str(if neg { " - " } else { " + " })?;
                }
                first = false;
                let mag = part.abs();
                let unit = mag.is_one();
                let mut wrote = false;
                if !unit {
                    fmt_rational(&mag, f)?;
                    wrote = true;
                }
                if imaginary {
                    if wrote {
                        f.write_str("*")?;
                    }
                    f.write_str("i")?;
                    wrote = true;
                }
                if !m.is_one() {
                    if wrote {
                        f.write_str("*")?;
                    }
                    m.fmt_with(names, f)?;
                } else if !wrote {
                    f.write_str("1")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(&["z", "zb", "w", "wb"], f)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c);
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_scaled_shifted(c, m, rhs);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_poly(&s).map_err(serde::de::Error::custom)
    }
}

/// A polynomial in `z, w` only.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct HoloPoly(Poly);

impl HoloPoly {
    /// `None` when `p` involves `zb` or `wb`.
    pub fn new(p: Poly) -> Option<Self> {
        p.is_holomorphic().then_some(Self(p))
    }

    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    pub fn into_poly(self) -> Poly {
        self.0
    }

    pub fn d_w(&self) -> HoloPoly {
        HoloPoly(self.0.wirtinger(Var::W))
    }

    pub fn d_z(&self) -> HoloPoly {
        HoloPoly(self.0.wirtinger(Var::Z))
    }

    /// `|h|^2 = h * conj(h)`.
    pub fn norm_sqr(&self) -> Poly {
        &self.0 * &self.0.conj()
    }
}

impl fmt::Display for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
