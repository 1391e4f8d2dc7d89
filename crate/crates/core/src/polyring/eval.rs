use num_complex::Complex64;
use num_traits::{One, Zero};

use super::coeff::GaussRational;
use super::poly::Poly;

/// A point `(z0, w0)` of C^2; barred variables take the conjugates.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPoint {
    pub z: GaussRational,
    pub w: GaussRational,
}

impl Poly {
    /// Exact value at `(z0, w0)`. A real-valued polynomial yields an exactly
    /// real result.
    pub fn eval_exact(&self, pt: &ExactPoint) -> GaussRational {
        let vals = [pt.z.clone(), pt.z.conj(), pt.w.clone(), pt.w.conj()];
        let mut acc = GaussRational::zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (v, e) in vals.iter().zip(m.exps()) {
                if e > 0 {
                    t = &t * &v.pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        FloatPoly::from(self).eval(z, w)
    }
}

/// Floating-point copy of a [`Poly`] for repeated sampling.
#[derive(Clone, Debug)]
pub struct FloatPoly {
    terms: Vec<([u32; 4], Complex64)>,
    max_exp: [u32; 4],
}

impl From<&Poly> for FloatPoly {
    fn from(p: &Poly) -> Self {
        let terms: Vec<_> = p.terms().map(|(m, c)| (m.exps(), c.to_complex64())).collect();
        let mut max_exp = [0u32; 4];
        for (e, _) in &terms {
            for i in 0..4 {
                max_exp[i] = max_exp[i].max(e[i]);
            }
        }
        Self { terms, max_exp }
    }
}

impl FloatPoly {
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let base = [z, z.conj(), w, w.conj()];
        let powers: Vec<Vec<Complex64>> = (0..4)
            .map(|i| {
                let mut v = Vec::with_capacity(self.max_exp[i] as usize + 1);
                v.push(Complex64::one());
                for k in 1..=self.max_exp[i] as usize {
                    let prev = v[k - 1];
                    v.push(prev * base[i]);
                }
                v
            })
            .collect();
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            acc += c
                * powers[0][e[0] as usize]
                * powers[1][e[1] as usize]
                * powers[2][e[2] as usize]
                * powers[3][e[3] as usize];
        }
        acc
    }

    /// Real part only; the caller asserts the polynomial is real valued.
    pub fn eval_real(&self, z: Complex64, w: Complex64) -> f64 {
        self.eval(z, w).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn pt(z: (i64, i64), w: (i64, i64)) -> ExactPoint {
        ExactPoint {
            z: GaussRational::from_parts((z.0, 1), (z.1, 1)),
            w: GaussRational::from_parts((w.0, 1), (w.1, 1)),
        }
    }

    #[test]
    fn exact_examples() {
        let p = parse_poly("z + zb").unwrap();
        assert!(p.eval_exact(&pt((0, 1), (0, 0))).is_zero());
        let q = parse_poly("w*wb").unwrap();
        assert_eq!(q.eval_exact(&pt((0, 0), (1, 1))), GaussRational::from_integer(2));
    }

    #[test]
    fn float_matches_exact() {
        let p = parse_poly("3/2*z^2*wb - i*zb*w + 7").unwrap();
        let e = pt((1, -2), (3, 1));
        let exact = p.eval_exact(&e).to_complex64();
        let float = p.eval(Complex64::new(1.0, -2.0), Complex64::new(3.0, 1.0));
        assert!((exact - float).norm() < 1e-12);
    }
}
