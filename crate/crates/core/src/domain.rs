//! Model domains `2 Re(z) + |f|^2 - |g|^2 < 0`, their Levi determinant and
//! contact orders of curves.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyring::{substitute_curve, Curve, GaussRational, HoloPoly, Poly, VanishingOrder, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub name: String,
    pub f: Vec<HoloPoly>,
    pub g: Vec<HoloPoly>,
    pub sample_radius: f64,
    /// Admit components with a nonzero constant term.
    pub allow_constant: bool,
}

impl DomainSpec {
    pub fn new(name: impl Into<String>, f: Vec<HoloPoly>, g: Vec<HoloPoly>) -> Result<Self> {
        let spec = Self { name: name.into(), f, g, sample_radius: 0.1, allow_constant: false };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.allow_constant {
            return Ok(());
        }
        for (index, c) in self.f.iter().chain(self.g.iter()).enumerate() {
            if !c.as_poly().constant_term().is_zero() {
                return Err(Error::ComponentNotVanishing { index });
            }
        }
        Ok(())
    }

    /// `f = (w)`: the ball up to second order.
    pub fn flat() -> Self {
        Self::from_strs("flat", &["w"], &[])
    }

    /// `f = (w^tau + z^k w^l)`.
    pub fn family(tau: u32, l: u32, k: u32) -> Self {
        let f = format!("w^{tau} + z^{k}*w^{l}");
        Self::from_strs(&format!("family({tau},{l},{k})"), &[&f], &[])
    }

    /// `f = (w + w^k, w^2)`, `g = (w)`.
    pub fn remark(k: u32) -> Self {
        let f = format!("w + w^{k}");
        Self::from_strs(&format!("remark({k})"), &[&f, "w^2"], &["w"])
    }

    fn from_strs(name: &str, f: &[&str], g: &[&str]) -> Self {
        let parse = |s: &&str| crate::polyring::parse_holo(s).expect("built-in component parses");
        Self {
            name: name.to_string(),
            f: f.iter().map(parse).collect(),
            g: g.iter().map(parse).collect(),
            sample_radius: 0.1,
            allow_constant: false,
        }
    }

    /// `r = z + zb + sum |f_j|^2 - sum |g_j|^2`.
    pub fn expand_r(&self) -> Poly {
        let mut r = Poly::var(Var::Z) + Poly::var(Var::Zb);
        for f in &self.f {
            r = r + f.norm_sqr();
        }
        for g in &self.g {
            r = r - g.norm_sqr();
        }
        r
    }

    pub fn levi_data(&self) -> Result<LeviData> {
        LeviData::from_r(self.expand_r())
    }

    /// `sum |d_w f_j|^2`.
    pub fn f_w_norm_sqr(&self) -> Poly {
        self.f.iter().fold(Poly::zero(), |acc, f| acc + f.d_w().norm_sqr())
    }

    pub fn g_w_norm_sqr(&self) -> Poly {
        self.g.iter().fold(Poly::zero(), |acc, g| acc + g.d_w().norm_sqr())
    }
}

/// `r` with its first derivatives and the Levi determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct LeviData {
    pub r: Poly,
    pub lambda: Poly,
    pub r_z: Poly,
    pub r_zb: Poly,
    pub r_w: Poly,
    pub r_wb: Poly,
}

impl LeviData {
    pub fn from_r(r: Poly) -> Result<Self> {
        let r_z = r.wirtinger(Var::Z);
        if r_z.constant_term().is_zero() {
            return Err(Error::DegenerateNormalization);
        }
        let r_zb = r.wirtinger(Var::Zb);
        let r_w = r.wirtinger(Var::W);
        let r_wb = r.wirtinger(Var::Wb);
        let mut ld = Self { r, lambda: Poly::zero(), r_z, r_zb, r_w, r_wb };
        ld.lambda = levi_form(&ld);
        Ok(ld)
    }
}

/// `r_ww̄ r_z r_z̄ + r_zz̄ r_w r_w̄ - 2 Re(r_zw̄ r_w r_z̄)`.
pub fn levi_form(ld: &LeviData) -> Poly {
    let r_ww = ld.r_w.wirtinger(Var::Wb);
    let r_zz = ld.r_z.wirtinger(Var::Zb);
    let r_zw = ld.r_z.wirtinger(Var::Wb);
    let cross = &(&r_zw * &ld.r_w) * &ld.r_zb;
    &(&r_ww * &ld.r_z) * &ld.r_zb + &(&r_zz * &ld.r_w) * &ld.r_wb - &cross - cross.conj()
}

/// `r_z * L(h)` with `L = d_w - (r_w / r_z) d_z`.
pub fn apply_l(h: &Poly, ld: &LeviData) -> Poly {
    &ld.r_z * &h.wirtinger(Var::W) - &ld.r_w * &h.wirtinger(Var::Z)
}

/// Normalized order of contact of a curve with the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContactOrder {
    Finite(Rational64),
    Infinite,
}

impl fmt::Display for ContactOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContactOrder::Finite(q) if q.is_integer() => write!(f, "{}", q.numer()),
            ContactOrder::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            ContactOrder::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ContactOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ContactOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(ContactOrder::Infinite);
        }
        let (n, den) = s.split_once('/').unwrap_or((&s, "1"));
        let n: i64 = n.parse().map_err(serde::de::Error::custom)?;
        let den: i64 = den.parse().map_err(serde::de::Error::custom)?;
        if den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(ContactOrder::Finite(Rational64::new(n, den)))
    }
}

/// Vanishing order of `r ∘ γ` divided by the multiplicity of `γ`.
pub fn contact_order(r: &Poly, curve: &Curve) -> Result<ContactOrder> {
    if curve.is_constant() {
        return Err(Error::ConstantCurve(curve.to_string()));
    }
    let pb = substitute_curve(r, curve)?;
    let mult = match curve.multiplicity() {
        VanishingOrder::Finite(m) => m,
        VanishingOrder::Infinite => return Err(Error::ConstantCurve(curve.to_string())),
    };
    Ok(match pb.vanishing_order() {
        VanishingOrder::Finite(v) => ContactOrder::Finite(Rational64::new(v as i64, mult as i64)),
        VanishingOrder::Infinite => ContactOrder::Infinite,
    })
}

/// `{±1, ±i, ±2}`.
pub fn default_coeff_set() -> Vec<GaussRational> {
    let one = GaussRational::from_integer(1);
    let i = GaussRational::i();
    let two = GaussRational::from_integer(2);
    vec![one.clone(), -one, i.clone(), -i, two.clone(), -two]
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeBound {
    pub value: ContactOrder,
    pub witness: Curve,
    pub curves_checked: usize,
}

/// Largest normalized contact order over `(0, t)` and the monomial curves
/// `(c t^s, t)` with `c` in `coeffs` and `1 <= s <= degree_cap`.
pub fn type_lower_bound(spec: &DomainSpec, degree_cap: u32, coeffs: &[GaussRational]) -> Result<TypeBound> {
    let r = spec.expand_r();
    let mut curves = vec![Curve::tangent_line()];
    for s in 1..=degree_cap {
        for c in coeffs {
            curves.push(Curve::monomial(c.clone(), s));
        }
    }
    let orders: Vec<ContactOrder> = curves.par_iter().map(|c| contact_order(&r, c)).collect::<Result<_>>()?;
    // First maximum in enumeration order.
    let mut best = 0;
    for (i, o) in orders.iter().enumerate() {
        if *o > orders[best] {
            best = i;
        }
    }
    Ok(TypeBound { value: orders[best], witness: curves[best].clone(), curves_checked: curves.len() })
}
