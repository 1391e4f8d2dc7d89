use std::fmt;

use num_traits::Zero;

use super::coeff::GaussRational;
use super::monomial::{Monomial, Var};
use super::poly::{Poly, VanishingOrder};
use crate::error::Error;

/// Holomorphic curve germ `t -> (z(t), w(t))` with polynomial components.
///
/// Components are stored as polynomials in the `z` slot, which stands for `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    z: Poly,
    w: Poly,
}

impl Curve {
    /// Builds `(Σ a_s t^s, Σ b_s t^s)` from `(power, coefficient)` pairs.
    pub fn new(
        z: impl IntoIterator<Item = (u32, GaussRational)>,
        w: impl IntoIterator<Item = (u32, GaussRational)>,
    ) -> Self {
        Self { z: lift(z), w: lift(w) }
    }

    /// `(c t^s, t)`.
    pub fn monomial(c: GaussRational, s: u32) -> Self {
        Self::new([(s, c)], [(1, GaussRational::from_integer(1))])
    }

    /// `(0, t)`: the complex tangent line.
    pub fn tangent_line() -> Self {
        Self::new([], [(1, GaussRational::from_integer(1))])
    }

    /// `(t, 0)`.
    pub fn normal_line() -> Self {
        Self::new([(1, GaussRational::from_integer(1))], [])
    }

    pub fn passes_through_origin(&self) -> bool {
        self.z.constant_term().is_zero() && self.w.constant_term().is_zero()
    }

    /// Order of vanishing of the curve map itself at `t = 0`.
    pub fn multiplicity(&self) -> VanishingOrder {
        self.z.vanishing_order().min(self.w.vanishing_order())
    }

    pub fn is_constant(&self) -> bool {
        self.z.terms().all(|(m, _)| m.is_one()) && self.w.terms().all(|(m, _)| m.is_one())
    }

    /// Reparametrization `t -> u t`.
    pub fn rescale(&self, u: &GaussRational) -> Self {
        let ut = Poly::term(u.clone(), Monomial::var(Var::Z));
        let subs = [ut.clone(), ut.conj(), Poly::var(Var::W), Poly::var(Var::Wb)];
        Self { z: self.z.compose(&subs), w: self.w.compose(&subs) }
    }

    /// Component `z(t)` as a polynomial in the `z` slot.
    pub fn z_component(&self) -> &Poly {
        &self.z
    }

    pub fn w_component(&self) -> &Poly {
        &self.w
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["t", "tb", "", ""];
        f.write_str("(")?;
        self.z.fmt_with(&names, f)?;
        f.write_str(", ")?;
        self.w.fmt_with(&names, f)?;
        f.write_str(")")
    }
}

fn lift(it: impl IntoIterator<Item = (u32, GaussRational)>) -> Poly {
    Poly::from_terms(it.into_iter().map(|(s, c)| (Monomial::var_pow(Var::Z, s), c)))
}

/// `p ∘ γ`: a polynomial in `t` (the `z` slot) and `tb` (the `zb` slot).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback(pub Poly);

impl Pullback {
    pub fn vanishing_order(&self) -> VanishingOrder {
        self.0.vanishing_order()
    }
}

impl fmt::Display for Pullback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(&["t", "tb", "w", "wb"], f)
    }
}

/// Substitutes `z <- z(t)`, `w <- w(t)`, `zb <- conj(z)(tb)`, `wb <- conj(w)(tb)`.
pub fn substitute_curve(p: &Poly, curve: &Curve) -> Result<Pullback, Error> {
    if !curve.passes_through_origin() {
        return Err(Error::CurveNotThroughOrigin(curve.to_string()));
    }
    let subs = [curve.z.clone(), curve.z.conj(), curve.w.clone(), curve.w.conj()];
    Ok(Pullback(p.compose(&subs)))
}
