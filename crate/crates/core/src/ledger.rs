//! Exact orders of subellipticity.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A certified order: an exact positive rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order(BigRational);

impl Order {
    pub fn new(num: i64, den: i64) -> Self {
        Self(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn half() -> Self {
        Self::new(1, 2)
    }

    /// `2^-e`.
    pub fn pow2_inv(e: u32) -> Self {
        Self(BigRational::new(BigInt::one(), BigInt::one() << e))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn div_int(&self, k: u32) -> Self {
        Self(&self.0 / BigRational::from_integer(BigInt::from(k)))
    }

    pub fn halved(&self) -> Self {
        self.div_int(2)
    }

    pub fn recip(&self) -> Self {
        Self(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for Order {
    fn from(q: BigRational) -> Self {
        Self(q)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid order '{0}'")]
pub struct OrderParseError(String);

impl FromStr for Order {
    type Err = OrderParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OrderParseError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Self(BigRational::new(n, d)))
    }
}

impl serde::Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Order {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// How a multiplier was obtained. Source fields are multiplier ids.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Provenance {
    /// The defining function itself, order 1.
    DefiningFunction,
    /// The Levi determinant, order 1/2.
    LeviDeterminant,
    /// Conjugate of the source, same order.
    Conjugation { source: usize },
    /// Root of a hermitian square, half the source order.
    HermitianSquare { source: usize },
    /// A variable with a power product in the ideal: base order over `k`.
    MonomialRoot { k: u32 },
    /// Monomial-content radical of the source: base order over `k`.
    AlgebraicPower { source: usize, k: u32 },
    /// `r_z * L(source)`, half the source order.
    Row { source: usize },
    /// `d_w(source)` once `r_w` is in the ideal generated by multipliers of
    /// order at least `threshold`: the smaller of half the source order and
    /// `threshold`.
    RowDirect { source: usize, threshold: Order },
    /// `d_w f_component` under the hypothesis on `g_w`, order 1/4.
    EntryStep { component: usize },
    /// `d_w(source)`, half the source order.
    Derivative { source: usize },
}

impl Provenance {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Provenance::DefiningFunction => "defining-function",
            Provenance::LeviDeterminant => "levi-determinant",
            Provenance::Conjugation { .. } => "conjugation",
            Provenance::HermitianSquare { .. } => "hermitian-square",
            Provenance::MonomialRoot { .. } => "monomial-root",
            Provenance::AlgebraicPower { .. } => "algebraic-power",
            Provenance::Row { .. } => "row",
            Provenance::RowDirect { .. } => "row-direct",
            Provenance::EntryStep { .. } => "entry-step",
            Provenance::Derivative { .. } => "derivative",
        }
    }

    /// Order implied by the rule, given the orders of earlier multipliers
    /// and the base order of the current radical step.
    pub fn implied_order(&self, orders: &[Order], base: Option<&Order>) -> Option<Order> {
        let src = |i: &usize| orders.get(*i).cloned();
        Some(match self {
            Provenance::DefiningFunction => Order::one(),
            Provenance::LeviDeterminant => Order::half(),
            Provenance::Conjugation { source } => src(source)?,
            Provenance::HermitianSquare { source } => src(source)?.halved(),
            Provenance::MonomialRoot { k } => base?.div_int(*k),
            Provenance::AlgebraicPower { k, .. } => base?.div_int(*k),
            Provenance::Row { source } => src(source)?.halved(),
            Provenance::RowDirect { source, threshold } => src(source)?.halved().min(threshold.clone()),
            Provenance::EntryStep { .. } => Order::new(1, 4),
            Provenance::Derivative { source } => src(source)?.halved(),
        })
    }
}

/// A subelliptic multiplier with its certified order.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Multiplier {
    pub id: usize,
    pub poly: crate::polyring::Poly,
    pub order: Order,
    pub provenance: Provenance,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prints_as_fraction() {
        assert_eq!(Order::new(1, 2).div_int(20).to_string(), "1/40");
        assert_eq!(Order::one().to_string(), "1");
        assert_eq!(Order::pow2_inv(4).to_string(), "1/16");
        assert_eq!("3/96".parse::<Order>().unwrap(), Order::new(1, 32));
        assert!("1/0".parse::<Order>().is_err());
    }
}
