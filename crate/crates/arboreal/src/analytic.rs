//! Real-analytic side of the integral point bound: high-precision real
//! period and elliptic logarithm via Carlson's R_F, and the two-dimensional
//! lattice reduction that shrinks the multiplier bound.
//!
//! Numbers are fixed-point: mant / 2^bits. The symmetric integral R_F is
//! evaluated by the duplication theorem, which handles the complex root
//! pair of a cubic with negative discriminant (connected real locus).

use crate::curves::Weierstrass;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("real locus is disconnected (discriminant > 0)")]
    Disconnected,
    #[error("model must be y^2 = cubic (a1 = a3 = 0)")]
    NotShort,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("lattice too skewed; raise the scaling constant C")]
    SkewedLattice,
}

// ---------------------------------------------------------------------------
// fixed-point reals

/// value = mant / 2^bits
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Real {
    pub mant: BigInt,
    pub bits: u32,
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real {
            mant: BigInt::zero(),
            bits,
        }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Real {
            mant: BigInt::from(v) << bits,
            bits,
        }
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        Real {
            mant: (q.numer() << bits) / q.denom(),
            bits,
        }
    }

    /// Parse a decimal literal like "35.785" exactly.
    pub fn from_decimal(s: &str, bits: u32) -> Self {
        let neg = s.starts_with('-');
        let t = s.trim_start_matches('-');
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let digits: BigInt = format!("{}{}", int, frac).parse().unwrap();
        let q = BigRational::new(if neg { -digits } else { digits }, scale);
        Real::from_rational(&q, bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.mant.to_f64().unwrap_or(f64::MAX) / 2f64.powi(self.bits as i32)
    }

    pub fn add(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            mant: &self.mant + &o.mant,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            mant: &self.mant - &o.mant,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Real {
        Real {
            mant: -&self.mant,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            mant: (&self.mant * &o.mant) >> self.bits,
            bits: self.bits,
        }
    }

    pub fn div(&self, o: &Real) -> Real {
        debug_assert_eq!(self.bits, o.bits);
        assert!(!o.mant.is_zero());
        Real {
            mant: (&self.mant << self.bits) / &o.mant,
            bits: self.bits,
        }
    }

    pub fn mul_i64(&self, k: i64) -> Real {
        Real {
            mant: &self.mant * BigInt::from(k),
            bits: self.bits,
        }
    }

    pub fn div_i64(&self, k: i64) -> Real {
        Real {
            mant: &self.mant / BigInt::from(k),
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Real {
        Real {
            mant: self.mant.abs(),
            bits: self.bits,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// Floor square root (value must be >= 0).
    pub fn sqrt(&self) -> Real {
        assert!(!self.mant.is_negative(), "sqrt of negative real");
        Real {
            mant: (&self.mant << self.bits).sqrt(),
            bits: self.bits,
        }
    }

    /// Nearest integer, ties to even.
    pub fn round_half_even(&self) -> BigInt {
        let one = BigInt::from(1);
        let floor = &self.mant >> self.bits;
        let frac = &self.mant - (&floor << self.bits);
        let half = BigInt::from(1) << (self.bits - 1);
        if frac > half || (frac == half && !(&floor % 2i32).is_zero()) {
            floor + one
        } else {
            floor
        }
    }
}

#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn real(r: Real) -> Self {
        let bits = r.bits;
        Complex {
            re: r,
            im: Real::zero(bits),
        }
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn div_i64(&self, k: i64) -> Complex {
        Complex {
            re: self.re.div_i64(k),
            im: self.im.div_i64(k),
        }
    }

    pub fn norm(&self) -> Real {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div(&self, o: &Complex) -> Complex {
        let n = o.norm();
        let conj = Complex {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let p = self.mul(&conj);
        Complex {
            re: p.re.div(&n),
            im: p.im.div(&n),
        }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Complex {
        let bits = self.re.bits;
        let r = self.norm().sqrt();
        let half_sum = r.add(&self.re).div_i64(2);
        let half_diff = r.sub(&self.re).div_i64(2);
        let re = if half_sum.is_negative() {
            Real::zero(bits)
        } else {
            half_sum.sqrt()
        };
        let im_mag = if half_diff.is_negative() {
            Real::zero(bits)
        } else {
            half_diff.sqrt()
        };
        let im = if self.im.is_negative() {
            im_mag.neg()
        } else {
            im_mag
        };
        Complex { re, im }
    }
}

// ---------------------------------------------------------------------------
// Carlson R_F

/// R_F(x, y, z) by the duplication theorem; arguments off the negative real
/// axis (here: one nonnegative real and a conjugate pair).
pub fn carlson_rf(mut x: Complex, mut y: Complex, mut z: Complex, bits: u32) -> Complex {
    let tol = Real {
        mant: BigInt::from(1),
        bits,
    };
    let tol = {
        // stop once the spread is below 2^-(bits/2); the tail series
        // restores full precision
        let mut t = tol;
        t.mant <<= bits / 2;
        t
    };
    for _ in 0..4 * bits {
        let mu = x.add(&y).add(&z).div_i64(3);
        let dx = x.sub(&mu).norm();
        let dy = y.sub(&mu).norm();
        let dz = z.sub(&mu).norm();
        let spread = dx.add(&dy).add(&dz);
        let scale = mu.norm();
        if spread.mant < (scale.mul(&tol).mul(&tol)).mant {
            break;
        }
        let sx = x.sqrt();
        let sy = y.sqrt();
        let sz = z.sqrt();
        let lambda = sx.mul(&sy).add(&sy.mul(&sz)).add(&sz.mul(&sx));
        x = x.add(&lambda).div_i64(4);
        y = y.add(&lambda).div_i64(4);
        z = z.add(&lambda).div_i64(4);
    }
    let mu = x.add(&y).add(&z).div_i64(3);
    let xd = Complex::real(Real::from_i64(1, bits)).sub(&x.div(&mu));
    let yd = Complex::real(Real::from_i64(1, bits)).sub(&y.div(&mu));
    let zd = Complex::real(Real::from_i64(1, bits)).sub(&z.div(&mu));
    let e2 = xd.mul(&yd).add(&yd.mul(&zd)).add(&zd.mul(&xd));
    let e3 = xd.mul(&yd).mul(&zd);
    // R_F ~ (1 - E2/10 + E3/14 + E2^2/24 - 3 E2 E3 / 44) / sqrt(mu)
    let one = Complex::real(Real::from_i64(1, bits));
    let mut series = one.sub(&e2.div_i64(10));
    series = series.add(&e3.div_i64(14));
    series = series.add(&e2.mul(&e2).div_i64(24));
    series = series.sub(&e2.mul(&e3).mul(&Complex::real(Real::from_i64(3, bits))).div_i64(44));
    series.div(&mu.sqrt())
}

// ---------------------------------------------------------------------------
// roots and periods

fn short_cubic(w: &Weierstrass) -> Result<(BigRational, BigRational, BigRational), AnalyticError> {
    if !w.a1.is_zero() || !w.a3.is_zero() {
        return Err(AnalyticError::NotShort);
    }
    Ok((w.a2.clone(), w.a4.clone(), w.a6.clone()))
}

fn eval_cubic(a: &Real, b: &Real, c: &Real, x: &Real) -> Real {
    x.mul(x).mul(x).add(&a.mul(x).mul(x)).add(&b.mul(x)).add(c)
}

/// The one real root of x^3 + a x^2 + b x + c (negative discriminant) by
/// Newton from an f64 seed.
fn real_root(a: &Real, b: &Real, c: &Real, bits: u32) -> Real {
    let (af, bf, cf) = (a.to_f64(), b.to_f64(), c.to_f64());
    // f64 seed by Cardano (one real root)
    let p = bf - af * af / 3.0;
    let q = 2.0 * af * af * af / 27.0 - af * bf / 3.0 + cf;
    let half_q = q / 2.0;
    let inner = (half_q * half_q + p * p * p / 27.0).max(0.0).sqrt();
    let seed = (-half_q + inner).cbrt() + (-half_q - inner).cbrt() - af / 3.0;
    let mut x = Real::from_rational(
        &BigRational::from_float(seed).unwrap_or_else(BigRational::zero),
        bits,
    );
    let three = Real::from_i64(3, bits);
    let two = Real::from_i64(2, bits);
    for _ in 0..64 {
        let f = eval_cubic(a, b, c, &x);
        let df = three
            .mul(&x)
            .mul(&x)
            .add(&two.mul(a).mul(&x))
            .add(b);
        if df.is_zero() {
            break;
        }
        let step = f.div(&df);
        x = x.sub(&step);
        if step.abs().mant < BigInt::from(2) {
            break;
        }
    }
    x
}

/// All three roots: the real one plus the conjugate pair from the deflated
/// quadratic.
fn cubic_roots(w: &Weierstrass, bits: u32) -> Result<(Real, Complex, Complex), AnalyticError> {
    let (a2, a4, a6) = short_cubic(w)?;
    if !w.discriminant().is_negative() {
        return Err(AnalyticError::Disconnected);
    }
    let a = Real::from_rational(&a2, bits);
    let b = Real::from_rational(&a4, bits);
    let c = Real::from_rational(&a6, bits);
    let e1 = real_root(&a, &b, &c, bits);
    // deflate: x^2 + (a2 + e1) x + (a4 + (a2 + e1) e1)
    let p = a.add(&e1);
    let q = b.add(&p.mul(&e1));
    let disc = p.mul(&p).sub(&q.mul_i64(4));
    // negative: conjugate pair
    let s = Complex {
        re: Real::zero(bits),
        im: disc.neg().sqrt(),
    };
    let half = |r: Complex| r.div_i64(2);
    let e2 = half(Complex::real(p.neg()).add(&s));
    let e3 = half(Complex::real(p.neg()).sub(&s));
    Ok((e1, e2, e3))
}

/// Fundamental real period of y^2 = cubic with connected real locus,
/// normalized against dx/(2y): omega_1 = 2 R_F(0, e1-e2, e1-e3).
pub fn real_period(w: &Weierstrass, bits: u32) -> Result<Real, AnalyticError> {
    let (e1, e2, e3) = cubic_roots(w, bits)?;
    let ce1 = Complex::real(e1);
    let rf = carlson_rf(
        Complex::real(Real::zero(bits)),
        ce1.sub(&e2),
        ce1.sub(&e3),
        bits,
    );
    Ok(rf.re.mul_i64(2))
}

/// (1/2) * integral_x^inf dt / sqrt(cubic) = R_F(x-e1, x-e2, x-e3).
fn ellint(w: &Weierstrass, x: &Real, bits: u32) -> Result<Real, AnalyticError> {
    let (e1, e2, e3) = cubic_roots(w, bits)?;
    let cx = Complex::real(x.clone());
    let rf = carlson_rf(
        Complex::real(x.sub(&e1)),
        cx.sub(&e2),
        cx.sub(&e3),
        bits,
    );
    Ok(rf.re)
}

#[derive(Clone, Debug)]
pub struct EllipticLogContext {
    pub curve: Weierstrass,
    pub omega1: Real,
    pub bits: u32,
}

impl EllipticLogContext {
    pub fn new(w: &Weierstrass, bits: u32) -> Result<Self, AnalyticError> {
        Ok(EllipticLogContext {
            curve: w.clone(),
            omega1: real_period(w, bits)?,
            bits,
        })
    }

    /// psi(P) in [0, omega1): ellint(x) on the negative-y branch, omega1 -
    /// ellint(x) on the positive.
    pub fn elliptic_log(&self, x: &BigRational, y: &BigRational) -> Result<Real, AnalyticError> {
        if !self.curve.equation(x, y).is_zero() {
            return Err(AnalyticError::NotOnCurve);
        }
        let xr = Real::from_rational(x, self.bits);
        let half_arc = ellint(&self.curve, &xr, self.bits)?;
        if y.is_positive() {
            Ok(self.omega1.sub(&half_arc))
        } else {
            // y = 0 lands on the real 2-torsion point, half_arc = omega1 / 2
            Ok(half_arc)
        }
    }

    /// x-coordinate of exp(psi) for psi in (0, omega1), by bisection on the
    /// strictly decreasing half-arc integral.
    pub fn elliptic_exp_x(&self, psi: &Real) -> Result<Real, AnalyticError> {
        let half = self.omega1.div_i64(2);
        let target = if psi.mant > half.mant {
            self.omega1.sub(psi)
        } else {
            psi.clone()
        };
        let (e1, _, _) = cubic_roots(&self.curve, self.bits)?;
        let one = Real::from_i64(1, self.bits);
        let mut lo = e1.clone();
        let mut width = one.clone();
        let mut hi = e1.add(&width);
        while ellint(&self.curve, &hi, self.bits)?.mant > target.mant {
            width = width.mul_i64(2);
            hi = e1.add(&width);
        }
        for _ in 0..self.bits + 8 {
            let mid = lo.add(&hi).div_i64(2);
            let v = ellint(&self.curve, &mid, self.bits)?;
            if v.mant > target.mant {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo.add(&hi).div_i64(2))
    }
}

// ---------------------------------------------------------------------------
// lattice reduction

/// Inputs of the two-dimensional reduction: C >= N0^2, the decay pair
/// (A, B) meaning |m omega + N psi| <= A exp(-B N^2), and the logs.
#[derive(Clone, Debug)]
pub struct BoundReductionInput {
    pub c: BigInt,
    pub n0: BigInt,
    pub decay_a: f64,
    pub decay_b: f64,
    pub omega: Real,
    pub psi: Real,
}

/// Published constants of the height-inequality chain, stored as
/// configuration (not re-derived here).
#[derive(Clone, Debug)]
pub struct ConstantTable {
    pub h_e: f64,
    pub mu_e: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c5: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
}

pub fn reference_constants() -> ConstantTable {
    ConstantTable {
        h_e: 8.841,
        mu_e: 2.9356,
        c1: 160.07,
        c2: 0.099617,
        c3: 8.0,
        c5: 35.785,
        c7: 0.555,
        c8: 24.032,
        c9: 3.962,
        c10: 4.074e40,
    }
}

/// Decay pair (A, B) from the constant table: A = c5 and B = c2 / 2.
pub fn decay_from_constants(t: &ConstantTable) -> (f64, f64) {
    (t.c5, t.c2 / 2.0)
}

/// Lagrange-Gauss reduction of the columns (1, round(C psi)) and
/// (0, round(C omega)); returns the shortest vector.
fn lagrange_gauss(mut b1: (BigInt, BigInt), mut b2: (BigInt, BigInt)) -> (BigInt, BigInt) {
    let norm = |v: &(BigInt, BigInt)| &v.0 * &v.0 + &v.1 * &v.1;
    if norm(&b1) > norm(&b2) {
        std::mem::swap(&mut b1, &mut b2);
    }
    loop {
        // m = round(<b1,b2> / <b1,b1>)
        let dot = &b1.0 * &b2.0 + &b1.1 * &b2.1;
        let n1 = norm(&b1);
        let mut m = &dot / &n1;
        let r = &dot - &m * &n1;
        if BigInt::from(2) * r.abs() > n1.clone() {
            if r.is_negative() {
                m -= 1;
            } else {
                m += 1;
            }
        }
        let cand = (&b2.0 - &m * &b1.0, &b2.1 - &m * &b1.1);
        if norm(&cand) >= n1 {
            return b1;
        }
        b2 = b1;
        b1 = cand;
    }
}

/// Shortest lattice vector gives the lower bound
/// (sqrt(lambda1^2 - N0^2) - (1/2 + N0)) / C on |m omega + N psi|, which is
/// incompatible with A exp(-B N^2) once N exceeds the returned N1.
pub fn reduce_multiplier_bound(inp: &BoundReductionInput) -> Result<u64, AnalyticError> {
    if inp.n0.is_zero() {
        return Ok(0);
    }
    let c_psi = scale_round(&inp.psi, &inp.c);
    let c_omega = scale_round(&inp.omega, &inp.c);
    let b1 = lagrange_gauss((BigInt::from(1), c_psi), (BigInt::from(0), c_omega));
    let lambda1_sq = &b1.0 * &b1.0 + &b1.1 * &b1.1;
    let n0_sq = &inp.n0 * &inp.n0;
    let diff = &lambda1_sq - &n0_sq;
    if !diff.is_positive() {
        return Err(AnalyticError::SkewedLattice);
    }
    let lower = (diff.sqrt().to_f64().unwrap() - (0.5 + inp.n0.to_f64().unwrap()))
        / inp.c.to_f64().unwrap();
    if lower <= 0.0 {
        return Err(AnalyticError::SkewedLattice);
    }
    // A exp(-B N^2) >= lower fails for N^2 > ln(A / lower) / B
    let ratio = inp.decay_a / lower;
    if ratio <= 1.0 {
        return Ok(0);
    }
    let crossover = (ratio.ln() / inp.decay_b).sqrt();
    let n1 = crossover.floor() as u64;
    let n0 = inp.n0.to_u64().unwrap_or(u64::MAX);
    Ok(n1.min(n0))
}

fn scale_round(v: &Real, c: &BigInt) -> BigInt {
    let scaled = Real {
        mant: &v.mant * c,
        bits: v.bits,
    };
    scaled.round_half_even()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{model_min, scalar_mul, CurvePoint};
    use crate::rat;

    const BITS: u32 = 350;

    #[test]
    fn real_basics() {
        let a = Real::from_decimal("35.785", BITS);
        assert!((a.to_f64() - 35.785).abs() < 1e-12);
        let b = Real::from_i64(2, BITS).sqrt();
        assert!((b.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        // half-to-even
        assert_eq!(
            Real::from_rational(&crate::ratio(5, 2), BITS).round_half_even(),
            BigInt::from(2)
        );
        assert_eq!(
            Real::from_rational(&crate::ratio(7, 2), BITS).round_half_even(),
            BigInt::from(4)
        );
    }

    #[test]
    fn rf_degenerate_case() {
        // R_F(x, x, x) = 1 / sqrt(x)
        let two = Complex::real(Real::from_i64(2, BITS));
        let rf = carlson_rf(two.clone(), two.clone(), two, BITS);
        let expect = 1.0 / 2f64.sqrt();
        assert!((rf.re.to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn period_of_min_curve() {
        let w = model_min();
        let omega = real_period(&w, BITS).unwrap().to_f64();
        // frozen from an independent quadrature of dx / (2y)
        assert!((omega - 4.707087761230185).abs() < 1e-12, "omega = {}", omega);
    }

    #[test]
    fn period_scaling() {
        // (x, y) -> (u^2 x, u^3 y) divides the period by u
        let w = model_min();
        let u = 2i64;
        let w2 = Weierstrass::short(
            rat(0),
            &w.a4 * rat(u.pow(4)),
            &w.a6 * rat(u.pow(6)),
        );
        let o1 = real_period(&w, BITS).unwrap().to_f64();
        let o2 = real_period(&w2, BITS).unwrap().to_f64();
        assert!((o1 / o2 - u as f64).abs() < 1e-10);
    }

    #[test]
    fn psi_of_generator() {
        let ctx = EllipticLogContext::new(&model_min(), BITS).unwrap();
        let psi = ctx.elliptic_log(&rat(1), &rat(1)).unwrap().to_f64();
        // frozen from an independent quadrature
        assert!((psi - 3.675916572994009).abs() < 1e-12, "psi = {}", psi);
    }

    #[test]
    fn log_is_homomorphism() {
        let w = model_min();
        let ctx = EllipticLogContext::new(&w, BITS).unwrap();
        let g = CurvePoint::affine_i64(1, 1);
        let psi1 = ctx.elliptic_log(&rat(1), &rat(1)).unwrap();
        for k in [2i64, 3, -1] {
            let p = scalar_mul(&w, k, &g);
            let (x, y) = p.xy().unwrap();
            let psik = ctx.elliptic_log(x, y).unwrap().to_f64();
            let expect = (psi1.to_f64() * k as f64).rem_euclid(ctx.omega1.to_f64());
            assert!(
                (psik - expect).abs() < 1e-10,
                "k = {}: {} vs {}",
                k,
                psik,
                expect
            );
        }
    }

    #[test]
    fn exp_log_roundtrip() {
        let bits = 120;
        let w = model_min();
        let ctx = EllipticLogContext::new(&w, bits).unwrap();
        let g = CurvePoint::affine_i64(1, 1);
        for k in 1..=10i64 {
            let p = scalar_mul(&w, k, &g);
            let (x, y) = p.xy().unwrap();
            let psi = ctx.elliptic_log(x, y).unwrap();
            if psi.is_zero() {
                continue;
            }
            let xr = ctx.elliptic_exp_x(&psi).unwrap();
            let expect = crate::curves::CurvePoint::Affine(x.clone(), y.clone());
            let _ = expect;
            let xf = x.numer().to_f64().unwrap() / x.denom().to_f64().unwrap();
            assert!(
                (xr.to_f64() - xf).abs() < 1e-20,
                "k = {}: {} vs {}",
                k,
                xr.to_f64(),
                xf
            );
        }
    }

    #[test]
    fn reduction_monotone_in_a() {
        let w = model_min();
        let omega = real_period(&w, BITS).unwrap();
        let ctx = EllipticLogContext::new(&w, BITS).unwrap();
        let psi = ctx.elliptic_log(&rat(1), &rat(1)).unwrap();
        let base = BoundReductionInput {
            c: BigInt::from(10).pow(60),
            n0: BigInt::from(10).pow(25),
            decay_a: 35.785,
            decay_b: 0.049805,
            omega: omega.clone(),
            psi: psi.clone(),
        };
        let n_full = reduce_multiplier_bound(&base).unwrap();
        // shortest vector ~ C^(1/2)-sized, so the crossover lands near 38
        assert_eq!(n_full, 38, "n_full = {}", n_full);
        let mut halved = base.clone();
        halved.decay_a /= 2.0;
        let n_half = reduce_multiplier_bound(&halved).unwrap();
        assert!(n_half <= n_full);
        let mut zero = base;
        zero.n0 = BigInt::zero();
        assert_eq!(reduce_multiplier_bound(&zero).unwrap(), 0);
    }

    #[test]
    fn decay_pair_from_table() {
        let t = reference_constants();
        let (a, b) = decay_from_constants(&t);
        assert_eq!(a, t.c5);
        assert!((b - 0.0498085).abs() < 5e-4);
    }
}
