//! Floating-point evidence for the analytic hypotheses. Nothing here
//! changes a symbolic result; reports only feed the gate of the effective
//! run.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domain::DomainSpec;
use crate::effective::HypoStatus;
use crate::error::{Error, Result};
use crate::localideal::RadicalExtension;
use crate::polyring::{FloatPoly, Poly, Var};

/// Samples with `|f_w|^2` below this count as degenerate.
pub const DEGENERATE: f64 = 1e-14;
pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_CAP: usize = 100;
/// Largest sampled ratio accepted as evidence for the hypothesis. A
/// sample maximum only bounds the supremum from below, so ratios just under
/// 1 are treated as failures.
pub const DELTA_ACCEPT: f64 = 0.99;
/// Most violations listed in a report; the count is kept separately.
const MAX_LISTED: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub z: [f64; 2],
    pub w: [f64; 2],
}

impl SamplePoint {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        Self { z: [z.re, z.im], w: [w.re, w.im] }
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z[0], self.z[1])
    }

    pub fn w(&self) -> Complex64 {
        Complex64::new(self.w[0], self.w[1])
    }
}

/// A nonnegative real or infinity; infinity serializes as `"infinity"`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Extended(pub f64);

impl Extended {
    pub const INFINITY: Extended = Extended(f64::INFINITY);

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("infinity")
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("infinity")
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Extended(x)),
            Raw::Text(t) if t == "infinity" => Ok(Extended::INFINITY),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"infinity\", got {t:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub point: SamplePoint,
    pub value: Extended,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub radius: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Max of `|g_w|^2 / |f_w|^2`.
    pub delta_hat: Option<Extended>,
    /// Min of `lambda / |f_w|^2` over non-degenerate samples.
    pub c_hat: Option<f64>,
    pub min_lambda: Option<f64>,
    pub min_lambda_on_boundary: Option<f64>,
    pub degenerate: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
}

impl SampleReport {
    fn empty(radius: f64, n_samples: usize, seed: u64) -> Self {
        Self {
            radius,
            n_samples,
            seed,
            delta_hat: None,
            c_hat: None,
            min_lambda: None,
            min_lambda_on_boundary: None,
            degenerate: 0,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, mut bad: Vec<Violation>) {
        self.violation_count = bad.len();
        bad.truncate(MAX_LISTED);
        self.violations = bad;
    }

    /// Gate for the effective run.
    pub fn hypo_status(&self) -> HypoStatus {
        match self.delta_hat {
            Some(d) if d.0 < DELTA_ACCEPT => HypoStatus::VerifiedNumerically,
            _ => HypoStatus::Failed,
        }
    }
}

fn disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.random::<f64>())
}

/// `n` points uniform in the polydisc `|z|, |w| <= radius`. A longer list
/// with the same seed extends a shorter one.
pub fn sample_points(radius: f64, n: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z = disc(&mut rng, radius);
            let w = disc(&mut rng, radius);
            SamplePoint::new(z, w)
        })
        .collect()
}

fn check_sampling(radius: f64, n: usize) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Invalid(format!("radius must be positive, got {radius}")));
    }
    if n == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    Ok(())
}

pub fn sample_hypo(spec: &DomainSpec, radius: f64, n: usize, seed: u64) -> Result<SampleReport> {
    check_sampling(radius, n)?;
    let fw = FloatPoly::from(&spec.f_w_norm_sqr());
    let gw = FloatPoly::from(&spec.g_w_norm_sqr());
    let pts = sample_points(radius, n, seed);
    let ratios: Vec<(f64, bool)> = pts
        .par_iter()
        .map(|p| {
            let a = fw.eval_real(p.z(), p.w());
            let b = gw.eval_real(p.z(), p.w());
            if a < DEGENERATE {
                (if b > DEGENERATE { f64::INFINITY } else { 0.0 }, true)
            } else {
                (b / a, false)
            }
        })
        .collect();
    let mut report = SampleReport::empty(radius, n, seed);
    report.degenerate = ratios.iter().filter(|r| r.1).count();
    report.delta_hat = Some(Extended(ratios.iter().map(|r| r.0).fold(0.0, f64::max)));
    report.record(
        pts.iter()
            .zip(&ratios)
            .filter(|(_, r)| r.0 >= DELTA_ACCEPT)
            .map(|(p, r)| Violation { point: *p, value: Extended(r.0) })
            .collect(),
    );
    Ok(report)
}

/// `c_hat = min lambda / |f_w|^2` together with the hypothesis ratio.
pub fn verify_levi_bound(spec: &DomainSpec, radius: f64, n: usize, seed: u64) -> Result<SampleReport> {
    let mut report = sample_hypo(spec, radius, n, seed)?;
    let lambda = FloatPoly::from(&spec.levi_data()?.lambda);
    let fw = FloatPoly::from(&spec.f_w_norm_sqr());
    let pts = sample_points(radius, n, seed);
    let vals: Vec<(f64, Option<f64>)> = pts
        .par_iter()
        .map(|p| {
            let l = lambda.eval_real(p.z(), p.w());
            let a = fw.eval_real(p.z(), p.w());
            (l, (a >= DEGENERATE).then_some(l / a))
        })
        .collect();
    report.min_lambda = vals.iter().map(|v| v.0).reduce(f64::min);
    report.c_hat = vals.iter().filter_map(|v| v.1).reduce(f64::min);
    report.record(
        pts.iter()
            .zip(&vals)
            .filter(|(_, v)| v.1.is_some_and(|c| c <= 0.0))
            .map(|(p, v)| Violation { point: *p, value: Extended(v.0) })
            .collect(),
    );
    Ok(report)
}

/// Solves `2 Re z = -(|f|^2 - |g|^2)` for `Re z` by fixed-point iteration.
fn boundary_re_z(q: &FloatPoly, y: f64, w: Complex64) -> Option<f64> {
    let mut x = 0.0;
    for _ in 0..FIXED_POINT_CAP {
        let next = -0.5 * q.eval_real(Complex64::new(x, y), w);
        if !next.is_finite() {
            return None;
        }
        if (next - x).abs() <= FIXED_POINT_TOL {
            return Some(next);
        }
        x = next;
    }
    None
}

/// Minimum of `lambda` over boundary points above sampled `(w, Im z)`.
pub fn boundary_pseudoconvexity(spec: &DomainSpec, radius: f64, n: usize, seed: u64) -> Result<SampleReport> {
    check_sampling(radius, n)?;
    let q = FloatPoly::from(&(spec.expand_r() - Poly::var(Var::Z) - Poly::var(Var::Zb)));
    let lambda = FloatPoly::from(&spec.levi_data()?.lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base: Vec<(f64, Complex64)> =
        (0..n).map(|_| (radius * (2.0 * rng.random::<f64>() - 1.0), disc(&mut rng, radius))).collect();
    let solved: Vec<Option<(SamplePoint, f64)>> = base
        .par_iter()
        .map(|&(y, w)| {
            let x = boundary_re_z(&q, y, w)?;
            let z = Complex64::new(x, y);
            Some((SamplePoint::new(z, w), lambda.eval_real(z, w)))
        })
        .collect();
    let solved: Vec<(SamplePoint, f64)> =
        solved.into_iter().collect::<Option<_>>().ok_or(Error::BoundarySolve { radius })?;
    let mut report = SampleReport::empty(radius, n, seed);
    report.min_lambda_on_boundary = solved.iter().map(|s| s.1).reduce(f64::min);
    report.record(
        solved.iter().filter(|s| s.1 < -1e-10).map(|s| Violation { point: s.0, value: Extended(s.1) }).collect(),
    );
    Ok(report)
}

/// `r` as a function of `(Re z, Im z, Re w, Im w)`.
struct RealFn(FloatPoly);

impl RealFn {
    fn at(&self, x: [f64; 4]) -> f64 {
        self.0.eval_real(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
    }

    fn d1(&self, x: [f64; 4], i: usize, h: f64) -> f64 {
        let (mut a, mut b) = (x, x);
        a[i] += h;
        b[i] -= h;
        (self.at(a) - self.at(b)) / (2.0 * h)
    }

    fn d2(&self, x: [f64; 4], i: usize, j: usize, h: f64) -> f64 {
        if i == j {
            let (mut a, mut b) = (x, x);
            a[i] += h;
            b[i] -= h;
            return (self.at(a) - 2.0 * self.at(x) + self.at(b)) / (h * h);
        }
        let shift = |si: f64, sj: f64| {
            let mut y = x;
            y[i] += si * h;
            y[j] += sj * h;
            self.at(y)
        };
        (shift(1.0, 1.0) - shift(1.0, -1.0) - shift(-1.0, 1.0) + shift(-1.0, -1.0)) / (4.0 * h * h)
    }
}

/// Levi determinant from central differences of `r` in real coordinates.
fn numeric_lambda(r: &RealFn, p: &SamplePoint, h: f64) -> f64 {
    let x = [p.z[0], p.z[1], p.w[0], p.w[1]];
    let i = Complex64::i();
    let r_z = 0.5 * (r.d1(x, 0, h) - i * r.d1(x, 1, h));
    let r_w = 0.5 * (r.d1(x, 2, h) - i * r.d1(x, 3, h));
    let r_zzb = 0.25 * (r.d2(x, 0, 0, h) + r.d2(x, 1, 1, h));
    let r_wwb = 0.25 * (r.d2(x, 2, 2, h) + r.d2(x, 3, 3, h));
    // d_z d_wb = (d_x - i d_y)(d_u + i d_v) / 4
    let r_zwb =
        0.25 * (Complex64::from(r.d2(x, 0, 2, h) + r.d2(x, 1, 3, h)) + i * (r.d2(x, 0, 3, h) - r.d2(x, 1, 2, h)));
    let cross = r_zwb * r_w * r_z.conj();
    r_wwb * r_z.norm_sqr() + r_zzb * r_w.norm_sqr() - 2.0 * cross.re
}

/// Max of `|lambda_num - lambda_sym| / (1 + |lambda_sym|)` over `points`.
pub fn finite_diff_levi(spec: &DomainSpec, points: &[SamplePoint], h: f64) -> Result<f64> {
    if !(1e-6..=1e-3).contains(&h) {
        return Err(Error::Invalid(format!("step {h} outside [1e-6, 1e-3]")));
    }
    let ld = spec.levi_data()?;
    let r = RealFn(FloatPoly::from(&ld.r));
    let lambda = FloatPoly::from(&ld.lambda);
    Ok(points
        .par_iter()
        .map(|p| {
            let sym = lambda.eval_real(p.z(), p.w());
            (numeric_lambda(&r, p, h) - sym).abs() / (1.0 + sym.abs())
        })
        .reduce(|| 0.0, f64::max))
}

/// Fitted constants for `|g|^(2k) <= C * sum |gen_i|^2`, where `gen_i`
/// generate the ideal the certificate was found in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub element: Poly,
    pub order: u32,
    /// Fitted `C` at the given radius and at a tenth of it.
    pub c_outer: Extended,
    pub c_inner: Extended,
    /// `C` did not grow by more than a factor 10 when shrinking.
    pub bounded: bool,
}

pub fn spot_check(ext: &RadicalExtension, radius: f64, n: usize, seed: u64) -> Result<Vec<SpotCheck>> {
    check_sampling(radius, n)?;
    ext.certificates
        .iter()
        .zip(&ext.stages)
        .map(|(cert, stage)| {
            let g = FloatPoly::from(&cert.element);
            let gens: Vec<FloatPoly> = stage.generators().iter().map(FloatPoly::from).collect();
            let fit = |rad: f64| {
                sample_points(rad, n, seed)
                    .par_iter()
                    .map(|p| {
                        let lhs = g.eval(p.z(), p.w()).norm().powi(2 * cert.order as i32);
                        let rhs: f64 = gens.iter().map(|q| q.eval(p.z(), p.w()).norm_sqr()).sum();
                        if rhs > 0.0 {
                            lhs / rhs
                        } else if lhs > 0.0 {
                            f64::INFINITY
                        } else {
                            0.0
                        }
                    })
                    .reduce(|| 0.0, f64::max)
            };
            let (outer, inner) = (fit(radius), fit(radius / 10.0));
            Ok(SpotCheck {
                element: cert.element.clone(),
                order: cert.order,
                c_outer: Extended(outer),
                c_inner: Extended(inner),
                bounded: inner.is_finite() && inner <= 10.0 * outer.max(f64::MIN_POSITIVE),
            })
        })
        .collect()
}
