use std::cmp::Ordering;
use std::fmt;

/// One of the four formally independent variables of the real-analytic germ
/// ring at the origin of C^2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Var {
    Z,
    Zb,
    W,
    Wb,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::Z, Var::Zb, Var::W, Var::Wb];

    pub const fn index(self) -> usize {
        match self {
            Var::Z => 0,
            Var::Zb => 1,
            Var::W => 2,
            Var::Wb => 3,
        }
    }

    pub const fn conj(self) -> Var {
        match self {
            Var::Z => Var::Zb,
            Var::Zb => Var::Z,
            Var::W => Var::Wb,
            Var::Wb => Var::W,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Var::Z => "z",
            Var::Zb => "zb",
            Var::W => "w",
            Var::Wb => "wb",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "z" => Some(Var::Z),
            "zb" => Some(Var::Zb),
            "w" => Some(Var::W),
            "wb" => Some(Var::Wb),
            _ => None,
        }
    }

    pub const fn is_holomorphic(self) -> bool {
        matches!(self, Var::Z | Var::W)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `z^a zb^b w^c wb^d`, stored as `[a, b, c, d]`.
///
/// The derived-by-hand `Ord` is graded: lower total degree first, then the
/// exponent vector in descending lexicographic order. It only fixes the
/// canonical print order; algebraic orders live in `localideal`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: [u32; 4],
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; 4] };

    pub const fn new(exps: [u32; 4]) -> Self {
        Self { exps }
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut exps = [0; 4];
        exps[v.index()] = e;
        Self { exps }
    }

    pub fn exps(&self) -> [u32; 4] {
        self.exps
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.exps[v.index()]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps == [0; 4]
    }

    pub fn is_holomorphic(&self) -> bool {
        self.exps[1] == 0 && self.exps[3] == 0
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e -= o;
        }
        Some(Monomial { exps })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e += o;
        }
        Monomial { exps }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial { exps: self.exps.map(|e| e * k) }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = (*e).max(*o);
        }
        Monomial { exps }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = (*e).min(*o);
        }
        Monomial { exps }
    }

    /// Square-free part: every positive exponent replaced by 1.
    pub fn radical(&self) -> Monomial {
        Monomial { exps: self.exps.map(|e| e.min(1)) }
    }

    /// Swaps `z <-> zb` and `w <-> wb`.
    pub fn conj(&self) -> Monomial {
        let [a, b, c, d] = self.exps;
        Monomial { exps: [b, a, d, c] }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub(crate) fn fmt_with(&self, names: &[&str; 4], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, name) in self.exps.iter().zip(names.iter()) {
            if *e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(&["z", "zb", "w", "wb"], f)
    }
}

impl serde::Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Monomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let p = super::parse_poly(&s).map_err(serde::de::Error::custom)?;
        match p.first_term() {
            Some((m, c)) if p.num_terms() == 1 && num_traits::One::is_one(c) => Ok(*m),
            _ => Err(serde::de::Error::custom(format!("'{s}' is not a monomial"))),
        }
    }
}
