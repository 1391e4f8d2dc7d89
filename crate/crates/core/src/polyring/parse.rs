//! Reader for the canonical polynomial syntax.
//!
//! ```text
//! poly   := sign? term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := number "i"? | "i" | var ("^" nat)?
//! number := int ("/" nat)?
//! var    := "z" | "zb" | "w" | "wb"
//! ```
//!
//! Everything [`Poly`]'s `Display` prints parses back to an equal value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::GaussRational;
use super::monomial::{Monomial, Var};
use super::poly::{HoloPoly, Poly};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct PolyParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

pub fn parse_poly(src: &str) -> Result<Poly, PolyParseError> {
    Parser::new(src, false).parse()
}

/// Like [`parse_poly`], but only `z` and `w` are accepted.
pub fn parse_holo(src: &str) -> Result<HoloPoly, PolyParseError> {
    let p = Parser::new(src, true).parse()?;
    Ok(HoloPoly::new(p).expect("parser admitted only holomorphic variables"))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    holomorphic_only: bool,
}

impl Parser {
    fn new(src: &str, holomorphic_only: bool) -> Self {
        Self { chars: src.chars().collect(), pos: 0, holomorphic_only }
    }

    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T, PolyParseError> {
        Err(PolyParseError { column: at + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly, PolyParseError> {
        let mut out = Poly::zero();
        let mut negate = false;
        match self.peek() {
            None => return self.err(self.pos, "empty polynomial"),
            Some('-') => {
                negate = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (c, m) = self.term()?;
            out.add_term(m, &if negate { -c } else { c });
            match self.peek() {
                None => break,
                Some('+') => negate = false,
                Some('-') => negate = true,
                Some(ch) => return self.err(self.pos, format!("expected '+' or '-', found '{ch}'")),
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(GaussRational, Monomial), PolyParseError> {
        let mut coeff = GaussRational::one();
        let mut mono = Monomial::ONE;
        self.factor(&mut coeff, &mut mono)?;
        while self.peek() == Some('*') {
            self.pos += 1;
            self.factor(&mut coeff, &mut mono)?;
        }
        Ok((coeff, mono))
    }

    fn factor(&mut self, coeff: &mut GaussRational, mono: &mut Monomial) -> Result<(), PolyParseError> {
        let start = match self.peek() {
            None => return self.err(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        let ch = self.chars[start];
        if ch.is_ascii_digit() {
            let num = self.integer()?;
            let mut q = BigRational::from_integer(num);
            if self.chars.get(self.pos) == Some(&'/') {
                self.pos += 1;
                let den_at = self.pos;
                let den = self.integer()?;
                if den.is_zero() {
                    return self.err(den_at, "zero denominator");
                }
                q /= BigRational::from_integer(den);
            }
            *coeff = &*coeff * &GaussRational::real(q);
            if self.chars.get(self.pos) == Some(&'i') && !self.ident_continues(self.pos + 1) {
                self.pos += 1;
                *coeff = &*coeff * &GaussRational::i();
            }
            return Ok(());
        }
        if ch.is_ascii_alphabetic() {
            let mut end = start;
            while end < self.chars.len() && self.chars[end].is_ascii_alphabetic() {
                end += 1;
            }
            let ident: String = self.chars[start..end].iter().collect();
            self.pos = end;
            if ident == "i" {
                *coeff = &*coeff * &GaussRational::i();
                return Ok(());
            }
            let Some(var) = Var::from_name(&ident) else {
                return self.err(start, format!("unknown variable '{ident}'"));
            };
            if self.holomorphic_only && !var.is_holomorphic() {
                return self.err(start, format!("non-holomorphic variable '{ident}'"));
            }
            let mut e = 1u32;
            if self.peek() == Some('^') {
                self.pos += 1;
                self.skip_ws();
                let at = self.pos;
                let n = self.integer()?;
                e = u32::try_from(n).or_else(|_| self.err(at, "exponent too large"))?;
            }
            *mono = mono.mul(&Monomial::var_pow(var, e));
            return Ok(());
        }
        self.err(start, format!("unexpected character '{ch}'"))
    }

    fn ident_continues(&self, at: usize) -> bool {
        self.chars.get(at).is_some_and(|c| c.is_ascii_alphanumeric())
    }

    fn integer(&mut self) -> Result<BigInt, PolyParseError> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected a number");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_example_prints_and_parses() {
        let p = parse_poly("2*z^5*w + 3*w^2").unwrap();
        assert_eq!(p.to_string(), "3*w^2 + 2*z^5*w");
    }

    #[test]
    fn gaussian_coefficients() {
        let p = parse_poly("3i*w - i*z + 1/2*i + 2/3").unwrap();
        assert_eq!(p.to_string(), "2/3 + 1/2*i - i*z + 3*i*w");
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        let mixed = parse_poly("(1)").err().unwrap();
        assert_eq!(mixed.column, 1);
    }

    #[test]
    fn combined_real_and_imaginary_parts_round_trip() {
        let p = Poly::term(GaussRational::from_parts((-1, 2), (3, 1)), Monomial::new([1, 0, 0, 1]));
        let s = p.to_string();
        assert_eq!(s, "-1/2*z*wb + 3*i*z*wb");
        assert_eq!(parse_poly(&s).unwrap(), p);
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_poly("w + 3/0*z").unwrap_err();
        assert_eq!(e.column, 7);
        assert!(e.message.contains("zero denominator"));
        let e = parse_holo("w + zb").unwrap_err();
        assert_eq!(e.column, 5);
        assert!(e.message.contains("non-holomorphic"));
        let e = parse_poly("w + q").unwrap_err();
        assert!(e.message.contains("unknown variable"));
        assert!(parse_poly("").is_err());
        assert!(parse_poly("w +").is_err());
    }

    #[test]
    fn repeated_variables_multiply() {
        assert_eq!(parse_poly("w*w^2*2").unwrap(), parse_poly("2*w^3").unwrap());
    }
}
