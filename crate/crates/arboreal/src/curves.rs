//! Exact curve machinery over Q: Weierstrass / even / twisted models,
//! membership, the group law, Lutz-Nagell torsion, mod-p point counts,
//! quadratic twists, bounded-height point search, and the birational map
//! chains used to move points between models.

use crate::arith::{rational_sqrt, Budget};
use crate::poly::ParamPoly;
use crate::{rat, ratio};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point not on curve: {0}")]
    NotOnCurve(String),
    #[error("singular model")]
    Singular,
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("map chain hit an exception at step {0}")]
    Exception(String),
}

// ---------------------------------------------------------------------------
// models

/// Long Weierstrass coefficients [a1, a2, a3, a4, a6].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weierstrass {
    pub a1: BigRational,
    pub a2: BigRational,
    pub a3: BigRational,
    pub a4: BigRational,
    pub a6: BigRational,
}

impl Weierstrass {
    pub fn new(a: [BigRational; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = a;
        Weierstrass { a1, a2, a3, a4, a6 }
    }

    /// Short form y^2 = x^3 + a2 x^2 + a4 x + a6.
    pub fn short(a2: BigRational, a4: BigRational, a6: BigRational) -> Self {
        Weierstrass {
            a1: BigRational::zero(),
            a2,
            a3: BigRational::zero(),
            a4,
            a6,
        }
    }

    pub fn b_invariants(&self) -> (BigRational, BigRational, BigRational, BigRational) {
        let b2 = &self.a1 * &self.a1 + rat(4) * &self.a2;
        let b4 = rat(2) * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + rat(4) * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + rat(4) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> BigRational {
        let (b2, b4, b6, b8) = self.b_invariants();
        -&b2 * &b2 * &b8 - rat(8) * &b4 * &b4 * &b4 - rat(27) * &b6 * &b6 + rat(9) * b2 * b4 * b6
    }

    pub fn is_nonsingular(&self) -> bool {
        !self.discriminant().is_zero()
    }

    /// y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6 at (x, y).
    pub fn equation(&self, x: &BigRational, y: &BigRational) -> BigRational {
        y * y + &self.a1 * x * y + &self.a3 * y
            - x * x * x
            - &self.a2 * x * x
            - &self.a4 * x
            - &self.a6
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Shape {
    Weierstrass(Weierstrass),
    /// y^2 = h(t)
    Even(ParamPoly),
    /// g(t) y^2 = h(t)
    Twisted(ParamPoly, ParamPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    pub shape: Shape,
    pub label: String,
}

impl CurveModel {
    pub fn weierstrass(w: Weierstrass, label: &str) -> Self {
        CurveModel {
            shape: Shape::Weierstrass(w),
            label: label.into(),
        }
    }

    pub fn even(h: ParamPoly, label: &str) -> Self {
        assert!(!h.is_zero());
        CurveModel {
            shape: Shape::Even(h),
            label: label.into(),
        }
    }

    pub fn twisted(g: ParamPoly, h: ParamPoly, label: &str) -> Self {
        CurveModel {
            shape: Shape::Twisted(g, h),
            label: label.into(),
        }
    }

    /// Points at infinity of the smooth projective model: one for a
    /// Weierstrass or odd-degree model, two when the (twist-adjusted)
    /// leading coefficient is a rational square.
    pub fn points_at_infinity(&self) -> Vec<CurvePoint> {
        match &self.shape {
            Shape::Weierstrass(_) => vec![CurvePoint::Infinity(Branch::Single)],
            Shape::Even(h) | Shape::Twisted(_, h) => {
                let eff = match &self.shape {
                    Shape::Twisted(g, h) => g * h,
                    _ => h.clone(),
                };
                let d = eff.degree().unwrap_or(0);
                if d % 2 == 1 {
                    vec![CurvePoint::Infinity(Branch::Single)]
                } else if crate::arith::is_rational_square(eff.leading().unwrap()) {
                    vec![
                        CurvePoint::Infinity(Branch::Plus),
                        CurvePoint::Infinity(Branch::Minus),
                    ]
                } else {
                    vec![]
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Plus,
    Minus,
    Single,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Affine(BigRational, BigRational),
    Infinity(Branch),
}

impl CurvePoint {
    pub fn affine_i64(x: i64, y: i64) -> Self {
        CurvePoint::Affine(rat(x), rat(y))
    }

    pub fn infinity() -> Self {
        CurvePoint::Infinity(Branch::Single)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CurvePoint::Infinity(_))
    }

    pub fn xy(&self) -> Option<(&BigRational, &BigRational)> {
        match self {
            CurvePoint::Affine(x, y) => Some((x, y)),
            _ => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        match self {
            CurvePoint::Affine(x, y) => x.is_integer() && y.is_integer(),
            _ => false,
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Affine(x, y) => write!(f, "({}, {})", x, y),
            CurvePoint::Infinity(Branch::Single) => write!(f, "inf"),
            CurvePoint::Infinity(Branch::Plus) => write!(f, "inf+"),
            CurvePoint::Infinity(Branch::Minus) => write!(f, "inf-"),
        }
    }
}

/// Exact membership test.
pub fn on_model(m: &CurveModel, p: &CurvePoint) -> bool {
    match p {
        CurvePoint::Infinity(b) => m
            .points_at_infinity()
            .iter()
            .any(|q| matches!(q, CurvePoint::Infinity(bb) if bb == b)),
        CurvePoint::Affine(x, y) => match &m.shape {
            Shape::Weierstrass(w) => w.equation(x, y).is_zero(),
            Shape::Even(h) => y * y == h.eval(x),
            Shape::Twisted(g, h) => &g.eval(x) * y * y == h.eval(x),
        },
    }
}

// ---------------------------------------------------------------------------
// group law

pub fn negate(w: &Weierstrass, p: &CurvePoint) -> CurvePoint {
    match p {
        CurvePoint::Infinity(_) => p.clone(),
        CurvePoint::Affine(x, y) => {
            CurvePoint::Affine(x.clone(), -y - &w.a1 * x - &w.a3)
        }
    }
}

/// Chord-tangent addition on a long Weierstrass model.
pub fn group_law(w: &Weierstrass, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
    assert!(w.is_nonsingular(), "group law on a singular model");
    let (x1, y1) = match p {
        CurvePoint::Infinity(_) => return q.clone(),
        CurvePoint::Affine(x, y) => {
            assert!(w.equation(x, y).is_zero(), "P not on curve");
            (x, y)
        }
    };
    let (x2, y2) = match q {
        CurvePoint::Infinity(_) => return p.clone(),
        CurvePoint::Affine(x, y) => {
            assert!(w.equation(x, y).is_zero(), "Q not on curve");
            (x, y)
        }
    };
    let (lambda, nu) = if x1 != x2 {
        let dx = x2 - x1;
        ((y2 - y1) / &dx, (y1 * x2 - y2 * x1) / &dx)
    } else {
        let neg_y1 = -y1 - &w.a1 * x1 - &w.a3;
        if *y2 == neg_y1 {
            return CurvePoint::infinity();
        }
        let den = rat(2) * y1 + &w.a1 * x1 + &w.a3;
        let lambda = (rat(3) * x1 * x1 + rat(2) * &w.a2 * x1 + &w.a4 - &w.a1 * y1) / &den;
        let nu = (-(x1 * x1 * x1) + &w.a4 * x1 + rat(2) * &w.a6 - &w.a3 * y1) / &den;
        (lambda, nu)
    };
    let x3 = &lambda * &lambda + &w.a1 * &lambda - &w.a2 - x1 - x2;
    let y3 = -(&lambda + &w.a1) * &x3 - &nu - &w.a3;
    CurvePoint::Affine(x3, y3)
}

pub fn scalar_mul(w: &Weierstrass, k: i64, p: &CurvePoint) -> CurvePoint {
    if k == 0 {
        return CurvePoint::infinity();
    }
    let base = if k < 0 { negate(w, p) } else { p.clone() };
    let mut k = k.unsigned_abs();
    let mut acc = CurvePoint::infinity();
    let mut run = base;
    while k > 0 {
        if k & 1 == 1 {
            acc = group_law(w, &acc, &run);
        }
        k >>= 1;
        if k > 0 {
            run = group_law(w, &run, &run);
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// torsion (Lutz-Nagell)

/// Full rational torsion subgroup. The model is first scaled to integral
/// coefficients and completed to y^2 = x^3 + b2 x^2 + 8 b4 x + 16 b6; the
/// Lutz-Nagell candidates there are filtered by order testing (orders are
/// at most 12) and the result is cross-checked against point counts modulo
/// three good primes.
pub fn torsion(w: &Weierstrass) -> Vec<CurvePoint> {
    assert!(w.is_nonsingular());
    let (wi, fwd, back) = integral_even_model(w);
    let (a, b, c) = (
        wi.a2.to_integer(),
        wi.a4.to_integer(),
        wi.a6.to_integer(),
    );
    let disc = wi.discriminant().to_integer();
    let mut candidates: Vec<(BigInt, BigInt)> = vec![];
    // y = 0: integer roots of the cubic
    for x in integer_cubic_roots(&a, &b, &c) {
        candidates.push((x, BigInt::zero()));
    }
    // y != 0 with y^2 | disc
    for y in square_divisors(&disc.magnitude().clone()) {
        if y.is_zero() {
            continue;
        }
        let yb = y;
        let c_shift = &c - &yb * &yb;
        for x in integer_cubic_roots(&a, &b, &c_shift) {
            candidates.push((x.clone(), yb.clone()));
            candidates.push((x, -&yb));
        }
    }
    let mut tor: Vec<CurvePoint> = vec![CurvePoint::infinity()];
    for (x, y) in candidates {
        let p = CurvePoint::Affine(
            BigRational::from_integer(x),
            BigRational::from_integer(y),
        );
        if !wi.equation(p.xy().unwrap().0, p.xy().unwrap().1).is_zero() {
            continue;
        }
        if has_finite_order(&wi, &p) && !tor.contains(&p) {
            tor.push(p);
        }
    }
    // cross-check against reductions
    let mut gcd_count: Option<u64> = None;
    let mut used = 0;
    let mut p = 3u64;
    while used < 3 && p < 200 {
        if good_weierstrass_reduction(&wi, p) {
            let n = weierstrass_count_mod_p(&wi, p).unwrap();
            gcd_count = Some(match gcd_count {
                None => n,
                Some(g) => g.gcd(&n),
            });
            used += 1;
        }
        p += 2;
    }
    if let Some(g) = gcd_count {
        assert_eq!(
            g % tor.len() as u64,
            0,
            "torsion order must divide point counts mod good primes"
        );
    }
    let _ = fwd;
    let mut out: Vec<CurvePoint> = tor.into_iter().map(|p| back(&p)).collect();
    out.sort();
    out
}

/// Scale (x,y) -> (u^2 x, u^3 y) and complete the square so the result is
/// y^2 = x^3 + b2 x^2 + 8 b4 x + 16 b6 with integer coefficients. Returns
/// the model plus the forward and backward point maps.
#[allow(clippy::type_complexity)]
fn integral_even_model(
    w: &Weierstrass,
) -> (
    Weierstrass,
    Box<dyn Fn(&CurvePoint) -> CurvePoint + Sync>,
    Box<dyn Fn(&CurvePoint) -> CurvePoint + Sync>,
) {
    let mut u = BigInt::one();
    for a in [&w.a1, &w.a2, &w.a3, &w.a4, &w.a6] {
        u = u.lcm(a.denom());
    }
    let u = BigRational::from_integer(u);
    let ws = Weierstrass {
        a1: &w.a1 * &u,
        a2: &w.a2 * &u * &u,
        a3: &w.a3 * &u * &u * &u,
        a4: &w.a4 * &u * &u * &u * &u,
        a6: &w.a6 * &u * &u * &u * &u * &u * &u,
    };
    let (b2, b4, b6, _) = ws.b_invariants();
    let wi = Weierstrass::short(b2, rat(8) * b4, rat(16) * b6);
    let (a1s, a3s) = (ws.a1.clone(), ws.a3.clone());
    let (a1b, a3b) = (ws.a1.clone(), ws.a3.clone());
    let uf = u.clone();
    let fwd = move |p: &CurvePoint| match p {
        CurvePoint::Infinity(_) => p.clone(),
        CurvePoint::Affine(x, y) => {
            let xs = &uf * &uf * x;
            let ys = &uf * &uf * &uf * y;
            CurvePoint::Affine(
                rat(4) * &xs,
                rat(8) * &ys + rat(4) * &a1s * &xs + rat(4) * &a3s,
            )
        }
    };
    let ub = u;
    let back = move |p: &CurvePoint| match p {
        CurvePoint::Infinity(_) => p.clone(),
        CurvePoint::Affine(xx, yy) => {
            let xs = xx / rat(4);
            let ys = (yy / rat(4) - &a1b * &xs - &a3b) / rat(2);
            CurvePoint::Affine(&xs / (&ub * &ub), &ys / (&ub * &ub * &ub))
        }
    };
    (wi, Box::new(fwd), Box::new(back))
}

/// Every multiple of a torsion point on an integral model is integral, so
/// bail out as soon as a multiple goes fractional; orders are at most 12.
fn has_finite_order(w: &Weierstrass, p: &CurvePoint) -> bool {
    let mut q = p.clone();
    for _ in 1..=12 {
        q = group_law(w, &q, p);
        match &q {
            CurvePoint::Infinity(_) => return true,
            CurvePoint::Affine(x, y) => {
                if !x.is_integer() || !y.is_integer() {
                    return false;
                }
            }
        }
    }
    false
}

/// Integer roots of x^3 + a x^2 + b x + c, found from f64 real roots and a
/// nearby-integer check, each verified exactly.
fn integer_cubic_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let (af, bf, cf) = (
        a.to_f64().unwrap_or(f64::MAX),
        b.to_f64().unwrap_or(f64::MAX),
        c.to_f64().unwrap_or(f64::MAX),
    );
    let mut out = vec![];
    for r in real_cubic_roots(af, bf, cf) {
        let base = r.round() as i128;
        for dx in -2i128..=2 {
            let x = BigInt::from(base + dx);
            let v = (&x * &x * &x) + a * &x * &x + b * &x + c;
            if v.is_zero() && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Real roots of x^3 + a x^2 + b x + c by Cardano / trigonometric form.
fn real_cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    // depress: x = z - a/3
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    let mut roots = vec![];
    if disc > 0.0 {
        // three real roots
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = (3.0 * q / (p * m)).clamp(-1.0, 1.0).acos() / 3.0;
        for k in 0..3 {
            roots.push(m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift);
        }
    } else {
        let half_q = q / 2.0;
        let inner = half_q * half_q + p * p * p / 27.0;
        let s = inner.max(0.0).sqrt();
        let u = (-half_q + s).cbrt();
        let v = (-half_q - s).cbrt();
        roots.push(u + v + shift);
    }
    roots
}

/// All nonnegative y with y^2 | n (n > 0), from the factorization of n.
fn square_divisors(n: &BigUint) -> Vec<BigInt> {
    let fr = crate::arith::factor_uint(n, &Budget::default());
    let mut out = vec![BigInt::one()];
    for (p, e) in &fr.factors {
        let half = e / 2;
        if half == 0 {
            continue;
        }
        let pb = BigInt::from(p.clone());
        let mut next = vec![];
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..half {
                acc *= &pb;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    // an unfactored cofactor only loses candidates with huge y; torsion
    // coordinates stay small so this is harmless in practice
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// mod-p counting and twists

fn mod_p(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = q.numer().mod_floor(&pb).to_u64().unwrap();
    let den = den.to_u64().unwrap();
    let inv = crate::arith::mod_inverse_u64(den, p)?;
    Some(((num as u128 * inv as u128) % p as u128) as u64)
}

fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = (p - 1) / 2;
    let mut acc = 1u64;
    let mut b = a;
    let mut e2 = e;
    while e2 > 0 {
        if e2 & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e2 >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

fn poly_eval_mod_p(h: &ParamPoly, x: u64, p: u64) -> Option<u64> {
    let mut acc = 0u64;
    for c in h.coeffs().iter().rev() {
        let cv = mod_p(&c.clone(), p)?;
        acc = (acc * x + cv) % p;
    }
    Some(acc)
}

fn good_weierstrass_reduction(w: &Weierstrass, p: u64) -> bool {
    if p < 3 {
        return false;
    }
    for a in [&w.a1, &w.a2, &w.a3, &w.a4, &w.a6] {
        if mod_p(a, p).is_none() {
            return false;
        }
    }
    mod_p(&w.discriminant(), p).map(|d| d != 0).unwrap_or(false)
}

fn weierstrass_count_mod_p(w: &Weierstrass, p: u64) -> Option<u64> {
    let a1 = mod_p(&w.a1, p)?;
    let a2 = mod_p(&w.a2, p)?;
    let a3 = mod_p(&w.a3, p)?;
    let a4 = mod_p(&w.a4, p)?;
    let a6 = mod_p(&w.a6, p)?;
    let mut count = 1u64; // infinity
    for x in 0..p {
        for y in 0..p {
            let lhs = (y * y + a1 * x % p * y + a3 * y) % p;
            let rhs = (x * x % p * x + a2 * x % p * x + a4 * x + a6) % p;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    Some(count)
}

/// Points over F_p by full enumeration, plus the points at infinity of the
/// smooth model (for even-degree models: two iff the leading coefficient is
/// a square mod p).
pub fn count_points_mod_p(m: &CurveModel, p: u64) -> Result<u64, CurveError> {
    if p < 3 {
        return Err(CurveError::BadReduction(p));
    }
    match &m.shape {
        Shape::Weierstrass(w) => {
            if !good_weierstrass_reduction(w, p) {
                return Err(CurveError::BadReduction(p));
            }
            Ok(weierstrass_count_mod_p(w, p).unwrap())
        }
        Shape::Even(_) | Shape::Twisted(_, _) => {
            let (g, h) = match &m.shape {
                Shape::Even(h) => (ParamPoly::constant(BigRational::one()), h.clone()),
                Shape::Twisted(g, h) => (g.clone(), h.clone()),
                _ => unreachable!(),
            };
            let eff = &g * &h; // y'^2 = g*h with y' = g*y
            let lead = mod_p(eff.leading().unwrap(), p).ok_or(CurveError::BadReduction(p))?;
            if lead == 0 {
                return Err(CurveError::BadReduction(p));
            }
            if let Some(d) = eff.discriminant() {
                match mod_p(&d, p) {
                    Some(0) | None => return Err(CurveError::BadReduction(p)),
                    _ => {}
                }
            }
            let mut count = 0u64;
            for x in 0..p {
                let gv = poly_eval_mod_p(&g, x, p).ok_or(CurveError::BadReduction(p))?;
                let hv = poly_eval_mod_p(&h, x, p).ok_or(CurveError::BadReduction(p))?;
                if gv == 0 {
                    // g(x) y^2 = h(x) has no affine point unless h(x)=0 too,
                    // in which case the model is singular there; treated as
                    // no smooth affine point
                    continue;
                }
                // y^2 = h/g
                let inv = crate::arith::mod_inverse_u64(gv, p).unwrap();
                let v = hv * inv % p;
                count += match legendre(v, p) {
                    0 => 1,
                    1 => 2,
                    _ => 0,
                };
            }
            let deg = eff.degree().unwrap_or(0);
            count += if deg % 2 == 1 {
                1
            } else {
                match legendre(lead, p) {
                    1 => 2,
                    _ => 0,
                }
            };
            Ok(count)
        }
    }
}

/// Quadratic twist by a squarefree integer d.
pub fn quadratic_twist(m: &CurveModel, d: &BigInt) -> CurveModel {
    assert!(!d.is_zero());
    let dr = ParamPoly::constant(BigRational::from_integer(d.clone()));
    let label = format!("{}^({})", m.label, d);
    match &m.shape {
        Shape::Even(h) => {
            if d.is_one() {
                m.clone()
            } else {
                CurveModel::twisted(dr, h.clone(), &label)
            }
        }
        Shape::Twisted(g, h) => CurveModel::twisted(&dr * g, h.clone(), &label),
        Shape::Weierstrass(w) => {
            assert!(
                w.a1.is_zero() && w.a3.is_zero(),
                "twist needs a short model"
            );
            let d = BigRational::from_integer(d.clone());
            CurveModel::weierstrass(
                Weierstrass::short(
                    &w.a2 * &d,
                    &w.a4 * &d * &d,
                    &w.a6 * &d * &d * &d,
                ),
                &label,
            )
        }
    }
}

// ---------------------------------------------------------------------------
// point search

/// All affine rational points (t, y), t = p/q in lowest terms with
/// max(|p|, |q|) <= h_bound, sorted by height then coordinates.
pub fn rational_point_search(m: &CurveModel, h_bound: u64) -> Vec<CurvePoint> {
    assert!(h_bound >= 1);
    let mut found: Vec<CurvePoint> = (1..=h_bound as i64)
        .into_par_iter()
        .flat_map_iter(|q| {
            let m = m.clone();
            (-(h_bound as i64)..=h_bound as i64).filter_map(move |p| {
                if BigInt::from(p).gcd(&BigInt::from(q)) != BigInt::one() {
                    return None;
                }
                let t = ratio(p, q);
                let v = match &m.shape {
                    Shape::Even(h) => h.eval(&t),
                    Shape::Twisted(g, h) => {
                        let gv = g.eval(&t);
                        if gv.is_zero() {
                            return h.eval(&t).is_zero().then(|| {
                                CurvePoint::Affine(t.clone(), BigRational::zero())
                            });
                        }
                        h.eval(&t) / gv
                    }
                    Shape::Weierstrass(_) => {
                        // y^2 + (a1 x + a3) y = rhs: solve the quadratic in y
                        return None;
                    }
                };
                rational_sqrt(&v).map(|y| CurvePoint::Affine(t, y))
            })
        })
        .collect();
    // expand +/- y and handle Weierstrass separately
    if let Shape::Weierstrass(w) = &m.shape {
        found = (1..=h_bound as i64)
            .into_par_iter()
            .flat_map_iter(|q| {
                let w = w.clone();
                (-(h_bound as i64)..=h_bound as i64).flat_map(move |p| {
                    let mut pts = vec![];
                    if BigInt::from(p).gcd(&BigInt::from(q)) == BigInt::one() {
                        let x = ratio(p, q);
                        // y^2 + b y - c = 0 with b = a1 x + a3
                        let b = &w.a1 * &x + &w.a3;
                        let c = &x * &x * &x + &w.a2 * &x * &x + &w.a4 * &x + &w.a6;
                        let disc = &b * &b + rat(4) * &c;
                        if let Some(s) = rational_sqrt(&disc) {
                            for sgn in [BigRational::one(), -BigRational::one()] {
                                let y = (-&b + &sgn * &s) / rat(2);
                                let pt = CurvePoint::Affine(x.clone(), y);
                                if !pts.contains(&pt) {
                                    pts.push(pt);
                                }
                            }
                        }
                    }
                    pts
                })
            })
            .collect();
    } else {
        let mut with_neg = vec![];
        for p in found {
            if let CurvePoint::Affine(x, y) = &p {
                if !y.is_zero() {
                    with_neg.push(CurvePoint::Affine(x.clone(), -y));
                }
            }
            with_neg.push(p);
        }
        found = with_neg;
    }
    found.sort_by_key(point_height_key);
    found.dedup();
    found
}

fn point_height_key(p: &CurvePoint) -> (BigInt, String) {
    match p {
        CurvePoint::Affine(x, _) => (
            x.numer().abs().max(x.denom().abs()),
            p.to_string(),
        ),
        CurvePoint::Infinity(_) => (BigInt::zero(), p.to_string()),
    }
}

// ---------------------------------------------------------------------------
// map chains

type PointMap = Box<dyn Fn(&BigRational, &BigRational) -> Option<(BigRational, BigRational)> + Sync>;

pub struct MapStep {
    pub name: String,
    pub map: PointMap,
    /// Model the image must satisfy, when known.
    pub target: Option<CurveModel>,
}

pub struct RationalMapChain {
    pub label: String,
    pub steps: Vec<MapStep>,
}

impl RationalMapChain {
    /// Push an affine point through every step; an exception divisor hit
    /// reports the failing step.
    pub fn apply(&self, p: &CurvePoint) -> Result<CurvePoint, CurveError> {
        let (mut x, mut y) = match p.xy() {
            Some((x, y)) => (x.clone(), y.clone()),
            None => return Err(CurveError::Exception("infinite input".into())),
        };
        for step in &self.steps {
            let (nx, ny) =
                (step.map)(&x, &y).ok_or_else(|| CurveError::Exception(step.name.clone()))?;
            if let Some(target) = &step.target {
                let q = CurvePoint::Affine(nx.clone(), ny.clone());
                if !on_model(target, &q) {
                    return Err(CurveError::NotOnCurve(format!(
                        "step {} produced {} off {}",
                        step.name, q, target.label
                    )));
                }
            }
            x = nx;
            y = ny;
        }
        Ok(CurvePoint::Affine(x, y))
    }
}

// named models -------------------------------------------------------------

/// E1: -y^2 = t^3 + 2t^2 + t + 1.
pub fn model_e1() -> CurveModel {
    CurveModel::twisted(
        ParamPoly::from_i64(&[-1]),
        ParamPoly::from_i64(&[1, 1, 2, 1]),
        "E1",
    )
}

/// E1's integral Weierstrass form y^2 = x^3 - 2x^2 + x - 1 under x = -t.
pub fn model_e1_integral() -> Weierstrass {
    Weierstrass::short(rat(-2), rat(1), rat(-1))
}

/// E2: (t+1) y^2 = t^3 + 2t^2 + t + 1.
pub fn model_e2() -> CurveModel {
    CurveModel::twisted(
        ParamPoly::from_i64(&[1, 1]),
        ParamPoly::from_i64(&[1, 1, 2, 1]),
        "E2",
    )
}

/// C: -(t+1) y^2 = t^4 + 2t^3 + t^2 + t (normalized from -t(t^2+t) y^2 = f^3
/// by y -> y/t).
pub fn model_c() -> CurveModel {
    CurveModel::twisted(
        ParamPoly::from_i64(&[-1, -1]),
        ParamPoly::from_i64(&[0, 1, 1, 2, 1]),
        "C",
    )
}

/// C3: y^2 = t^4 + 2t^3 + t^2 + t.
pub fn model_c3() -> CurveModel {
    CurveModel::even(ParamPoly::from_i64(&[0, 1, 1, 2, 1]), "C3")
}

/// C3': y^2 = x^3 + x^2 + 2x + 1.
pub fn model_c3_prime() -> Weierstrass {
    Weierstrass::short(rat(1), rat(2), rat(1))
}

/// The minimal curve of the integral-point computation: y^2 = x^3 - x + 1.
pub fn model_min() -> Weierstrass {
    Weierstrass::short(rat(0), rat(-1), rat(1))
}

/// H: y^2 = x^6 - 2x^4 + x^2 - 1.
pub fn model_h() -> CurveModel {
    CurveModel::even(ParamPoly::from_i64(&[-1, 0, 1, 0, -2, 0, 1]), "H")
}

/// Script C: y^2 = X^6 + X^4 - 1.
pub fn model_script_c() -> CurveModel {
    CurveModel::even(ParamPoly::from_i64(&[-1, 0, 0, 0, 1, 0, 1]), "scriptC")
}

/// Script A: v^2 = a^6 - 2a^4 + 3a^2 - 1.
pub fn model_script_a() -> CurveModel {
    CurveModel::even(ParamPoly::from_i64(&[-1, 0, 3, 0, -2, 0, 1]), "scriptA")
}

/// Script B: y^2 = (1 - x^2)(-x^6 + 2x^4 - x^2 + 1).
pub fn model_script_b() -> CurveModel {
    let a = ParamPoly::from_i64(&[1, 0, -1]);
    let b = ParamPoly::from_i64(&[1, 0, -1, 0, 2, 0, -1]);
    CurveModel::even(&a * &b, "scriptB")
}

/// B_{3,2}: y^2 = (x - 3)(x^4 + 6x + 12), the c = 3 instance.
pub fn model_b32() -> CurveModel {
    let a = ParamPoly::from_i64(&[-3, 1]);
    let b = ParamPoly::from_i64(&[12, 6, 0, 0, 1]);
    CurveModel::even(&a * &b, "B32")
}

/// gamma = 1 curves of the four-component decomposition.
pub fn model_gamma1_e() -> CurveModel {
    CurveModel::even(ParamPoly::from_i64(&[0, 1, 1, -2, 1]), "E(g1)")
}

pub fn model_gamma1_c1() -> CurveModel {
    CurveModel::even(ParamPoly::from_i64(&[0, 1, 0, -2, 4, -3, 1]), "C1(g1)")
}

pub fn model_gamma1_c2() -> CurveModel {
    CurveModel::even(ParamPoly::from_i64(&[-1, -1, 2, -1]), "C2(g1)")
}

pub fn model_gamma1_c3() -> CurveModel {
    CurveModel::even(ParamPoly::from_i64(&[-1, 0, 2, -4, 3, -1]), "C3(g1)")
}

/// E' (gamma = 1): y^2 - 2xy + 2y = x^3.
pub fn model_gamma1_e_prime() -> Weierstrass {
    Weierstrass::new([rat(-2), rat(0), rat(2), rat(0), rat(0)])
}

/// C4: y^2 = f_t^4(0).
pub fn model_c4() -> CurveModel {
    CurveModel::even(crate::dynamics::iterate_value_poly(&rat(0), 4), "C4")
}

// named chains --------------------------------------------------------------

/// E2 -> quartic -> long model -> y^2 = x^3 - x + 1.
pub fn e2_to_min_chain() -> RationalMapChain {
    let quartic = CurveModel::even(ParamPoly::from_i64(&[1, 2, 3, 3, 1]), "E2-quartic");
    let long = CurveModel::weierstrass(
        Weierstrass::new([rat(3), ratio(3, 4), rat(4), rat(-4), rat(-3)]),
        "E2-long",
    );
    let minimal = CurveModel::weierstrass(model_min(), "min");
    RationalMapChain {
        label: "E2 -> y^2=x^3-x+1".into(),
        steps: vec![
            MapStep {
                name: "clear the twist: y -> y(t+1)".into(),
                map: Box::new(|t, y| Some((t.clone(), y * (t + rat(1))))),
                target: Some(quartic),
            },
            MapStep {
                name: "quartic to cubic".into(),
                map: Box::new(|x, y| {
                    let nx = rat(2) * (x * x - y) + rat(3) * x;
                    let ny = x * (rat(4) * x * x + rat(6) * x - rat(4) * y + ratio(3, 2));
                    Some((nx, ny))
                }),
                target: Some(long),
            },
            MapStep {
                name: "translate to minimal".into(),
                map: Box::new(|x, y| {
                    Some((x + rat(1), y + ratio(3, 2) * x + rat(2)))
                }),
                target: Some(minimal),
            },
        ],
    }
}

/// Affine E2 preimages of an affine point on y^2 = x^3 - x + 1.
pub fn invert_e2_chain(q: &CurvePoint) -> Vec<CurvePoint> {
    let (xq, yq) = match q.xy() {
        Some(v) => v,
        None => return vec![],
    };
    // undo the translation
    let x2 = xq - rat(1);
    let y2 = yq - ratio(3, 2) * &x2 - rat(2);
    // middle step: y = x^2 + (3x - X)/2 makes the second coordinate linear
    // in x: Y = x (2X + 3/2)
    let den = rat(2) * &x2 + ratio(3, 2);
    if den.is_zero() {
        return vec![];
    }
    let x = &y2 / &den;
    let y = &x * &x + (rat(3) * &x - &x2) / rat(2);
    // undo y -> y(t+1)
    let t = x;
    let tp1 = &t + rat(1);
    if tp1.is_zero() {
        return vec![];
    }
    let y_e2 = &y / &tp1;
    let p = CurvePoint::Affine(t, y_e2);
    if on_model(&model_e2(), &p) {
        vec![p]
    } else {
        vec![]
    }
}

/// C3 -> C3': (t, y) -> (1/t, y/t^2).
pub fn c3_to_c3prime_chain() -> RationalMapChain {
    let target = CurveModel::weierstrass(model_c3_prime(), "C3'");
    RationalMapChain {
        label: "C3 -> C3'".into(),
        steps: vec![MapStep {
            name: "(t,y) -> (1/t, y/t^2)".into(),
            map: Box::new(|t, y| {
                if t.is_zero() {
                    None
                } else {
                    Some((rat(1) / t, y / (t * t)))
                }
            }),
            target: Some(target),
        }],
    }
}

/// gamma = 1: E -> E' via (t,y) -> (2(t^2 - y) - 2t, t(4t^2 - 4t - 4y)).
pub fn gamma1_e_to_eprime_chain() -> RationalMapChain {
    let target = CurveModel::weierstrass(model_gamma1_e_prime(), "E'(g1)");
    RationalMapChain {
        label: "E(g1) -> E'(g1)".into(),
        steps: vec![MapStep {
            name: "(t,y) -> (2(t^2-y)-2t, t(4t^2-4t-4y))".into(),
            map: Box::new(|t, y| {
                let nx = rat(2) * (t * t - y) - rat(2) * t;
                let ny = t * (rat(4) * t * t - rat(4) * t - rat(4) * y);
                Some((nx, ny))
            }),
            target: Some(target),
        }],
    }
}

/// Affine E (gamma=1) preimages of an affine point on E': t = Y / 2X,
/// y = t^2 - t - X/2.
pub fn invert_gamma1_chain(q: &CurvePoint) -> Vec<CurvePoint> {
    let (xq, yq) = match q.xy() {
        Some(v) => v,
        None => return vec![],
    };
    if xq.is_zero() {
        return vec![];
    }
    let t = yq / (rat(2) * xq);
    let y = &t * &t - &t - xq / rat(2);
    let p = CurvePoint::Affine(t, y);
    if on_model(&model_gamma1_e(), &p) {
        vec![p]
    } else {
        vec![]
    }
}

// ---------------------------------------------------------------------------
// integral points via a generator

/// All points +/- k * gen + T, 1 <= k <= n, T torsion, with integral
/// coordinates; sorted, deduplicated.
pub fn integral_points_via_generator(
    w: &Weierstrass,
    gen: &CurvePoint,
    n: u64,
) -> Vec<CurvePoint> {
    let tor = torsion(w);
    let mut out: Vec<CurvePoint> = vec![];
    let mut kp = CurvePoint::infinity();
    for _ in 1..=n {
        kp = group_law(w, &kp, gen);
        for sgn in [1i64, -1] {
            let base = if sgn == 1 { kp.clone() } else { negate(w, &kp) };
            for t in &tor {
                let p = group_law(w, &base, t);
                if p.is_integral() && !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// parsing

/// Parse a curve equation: `y^2=x^3-x+1`, `-y^2=t^3+2*t^2+t+1`,
/// `(t+1)*y^2=t^3+2*t^2+t+1`, or a long Weierstrass form like
/// `y^2+3*x*y+4*y=x^3+3/4*x^2-4*x-3`.
pub fn parse_curve(s: &str) -> Result<CurveModel, CurveError> {
    let (lhs, rhs) = s
        .split_once('=')
        .ok_or_else(|| CurveError::Parse("missing '='".into()))?;
    let l = parse_ypoly(lhs)?;
    let r = parse_ypoly(rhs)?;
    let diff = l.sub(&r); // = 0
    let [q0, q1, q2] = diff.0;
    if q2.is_zero() {
        return Err(CurveError::Parse("no y^2 term".into()));
    }
    if q1.is_zero() && q2.degree() == Some(0) {
        // c2 y^2 + q0 = 0
        let c2 = q2.coeff(0);
        let h = (-&q0).scale(&c2.recip());
        if c2 == BigRational::one() {
            // a monic cubic right side is a short Weierstrass model
            if h.degree() == Some(3) && h.leading() == Some(&BigRational::one()) {
                let w = Weierstrass::short(h.coeff(2), h.coeff(1), h.coeff(0));
                return Ok(CurveModel::weierstrass(w, s.trim()));
            }
            return Ok(CurveModel::even(h, s.trim()));
        }
        return Ok(CurveModel::twisted(q2, -&q0, s.trim()));
    }
    if q2.degree() == Some(0) {
        // Weierstrass: normalize y^2-coefficient to 1
        let inv = q2.coeff(0).recip();
        let q1 = q1.scale(&inv);
        let q0 = q0.scale(&inv);
        if q1.degree().is_some_and(|d| d > 1) {
            return Err(CurveError::Parse("y-coefficient degree > 1".into()));
        }
        let a1 = q1.coeff(1);
        let a3 = q1.coeff(0);
        if q0.coeff(3) != rat(-1) || q0.degree() != Some(3) {
            return Err(CurveError::Parse("right side is not a monic cubic".into()));
        }
        let w = Weierstrass::new([a1, -q0.coeff(2), a3, -q0.coeff(1), -q0.coeff(0)]);
        return Ok(CurveModel::weierstrass(w, s.trim()));
    }
    // g(t) y^2 = h(t)
    if !q1.is_zero() {
        return Err(CurveError::Parse("mixed y terms with nonconstant g".into()));
    }
    Ok(CurveModel::twisted(q2, -&q0, s.trim()))
}

/// Parse a point `(p/q, r/s)`.
pub fn parse_point(s: &str) -> Result<CurvePoint, CurveError> {
    let t = s.trim();
    if t == "inf" || t == "oo" {
        return Ok(CurvePoint::infinity());
    }
    let inner = t
        .strip_prefix('(')
        .and_then(|u| u.strip_suffix(')'))
        .ok_or_else(|| CurveError::Parse(format!("bad point: {}", s)))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| CurveError::Parse(format!("bad point: {}", s)))?;
    let parse_rat = |u: &str| -> Result<BigRational, CurveError> {
        u.trim()
            .parse::<BigRational>()
            .map_err(|_| CurveError::Parse(format!("bad rational: {}", u)))
    };
    Ok(CurvePoint::Affine(parse_rat(a)?, parse_rat(b)?))
}

/// Polynomial in y (degree <= 2) with ParamPoly coefficients in the other
/// variable.
struct YPoly([ParamPoly; 3]);

impl YPoly {
    fn zero() -> Self {
        YPoly([ParamPoly::zero(), ParamPoly::zero(), ParamPoly::zero()])
    }

    fn constant(c: BigRational) -> Self {
        let mut z = Self::zero();
        z.0[0] = ParamPoly::constant(c);
        z
    }

    fn var_x() -> Self {
        let mut z = Self::zero();
        z.0[0] = ParamPoly::var();
        z
    }

    fn var_y() -> Self {
        let mut z = Self::zero();
        z.0[1] = ParamPoly::constant(BigRational::one());
        z
    }

    fn add(&self, o: &YPoly) -> YPoly {
        YPoly([
            &self.0[0] + &o.0[0],
            &self.0[1] + &o.0[1],
            &self.0[2] + &o.0[2],
        ])
    }

    fn sub(&self, o: &YPoly) -> YPoly {
        YPoly([
            &self.0[0] - &o.0[0],
            &self.0[1] - &o.0[1],
            &self.0[2] - &o.0[2],
        ])
    }

    fn neg(&self) -> YPoly {
        YPoly([-&self.0[0], -&self.0[1], -&self.0[2]])
    }

    fn mul(&self, o: &YPoly) -> Result<YPoly, CurveError> {
        let mut out = [
            ParamPoly::zero(),
            ParamPoly::zero(),
            ParamPoly::zero(),
        ];
        for i in 0..3 {
            for j in 0..3 {
                let prod = &self.0[i] * &o.0[j];
                if prod.is_zero() {
                    continue;
                }
                if i + j > 2 {
                    return Err(CurveError::Parse("y-degree above 2".into()));
                }
                out[i + j] = &out[i + j] + &prod;
            }
        }
        Ok(YPoly(out))
    }

    fn pow(&self, e: u32) -> Result<YPoly, CurveError> {
        let mut acc = YPoly::constant(BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

#[derive(Debug, PartialEq, Clone)]
enum Tok {
    Num(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>, CurveError> {
    let mut lx = Lexer {
        chars: s.chars().peekable(),
    };
    let mut out = vec![];
    while let Some(&c) = lx.chars.peek() {
        match c {
            ' ' | '\t' => {
                lx.chars.next();
            }
            '0'..='9' => {
                let mut n = String::new();
                while let Some(&d) = lx.chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        lx.chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Num(n.parse().unwrap()));
            }
            'a'..='z' | 'A'..='Z' => {
                lx.chars.next();
                out.push(Tok::Var(c));
            }
            '+' => {
                lx.chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                lx.chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                lx.chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                lx.chars.next();
                out.push(Tok::Slash);
            }
            '^' => {
                lx.chars.next();
                out.push(Tok::Caret);
            }
            '(' => {
                lx.chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                lx.chars.next();
                out.push(Tok::RParen);
            }
            _ => return Err(CurveError::Parse(format!("bad character '{}'", c))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<YPoly, CurveError> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<YPoly, CurveError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.factor()?)?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    let d = self.factor()?;
                    // division by a nonzero constant only
                    if !d.0[1].is_zero() || !d.0[2].is_zero() || d.0[0].degree() != Some(0) {
                        return Err(CurveError::Parse("division by non-constant".into()));
                    }
                    let inv = d.0[0].coeff(0).recip();
                    acc = acc.mul(&YPoly::constant(inv))?;
                }
                // implicit multiplication like 3x or (t+1)y^2 is not accepted
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<YPoly, CurveError> {
        let mut neg = false;
        while let Some(Tok::Minus) = self.peek() {
            self.next();
            neg = !neg;
        }
        let base = match self.next() {
            Some(Tok::Num(n)) => YPoly::constant(BigRational::from_integer(n)),
            Some(Tok::Var('y')) => YPoly::var_y(),
            Some(Tok::Var(_)) => YPoly::var_x(),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => e,
                    _ => return Err(CurveError::Parse("missing ')'".into())),
                }
            }
            t => return Err(CurveError::Parse(format!("unexpected token {:?}", t))),
        };
        let base = if let Some(Tok::Caret) = self.peek() {
            self.next();
            match self.next() {
                Some(Tok::Num(e)) => {
                    let e = e.to_u32().ok_or_else(|| {
                        CurveError::Parse("exponent too large".into())
                    })?;
                    base.pow(e)?
                }
                _ => return Err(CurveError::Parse("bad exponent".into())),
            }
        } else {
            base
        };
        Ok(if neg { base.neg() } else { base })
    }
}

fn parse_ypoly(s: &str) -> Result<YPoly, CurveError> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(CurveError::Parse("trailing tokens".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_named_points() {
        assert!(on_model(&model_e1(), &CurvePoint::affine_i64(-2, 1)));
        assert!(on_model(
            &model_e1(),
            &CurvePoint::Affine(ratio(-17, 4), ratio(-53, 8))
        ));
        assert!(on_model(
            &CurveModel::weierstrass(model_min(), "min"),
            &CurvePoint::affine_i64(56, 419)
        ));
        assert!(on_model(
            &model_e2(),
            &CurvePoint::Affine(rat(3), ratio(7, 2))
        ));
    }

    #[test]
    fn group_law_min_curve() {
        let w = model_min();
        let p = CurvePoint::affine_i64(1, 1);
        assert_eq!(group_law(&w, &p, &p), CurvePoint::affine_i64(-1, 1));
        assert_eq!(scalar_mul(&w, 3, &p), CurvePoint::affine_i64(0, -1));
        assert_eq!(scalar_mul(&w, 4, &p), CurvePoint::affine_i64(3, -5));
        assert_eq!(
            group_law(&w, &p, &negate(&w, &p)),
            CurvePoint::infinity()
        );
    }

    #[test]
    fn group_law_linearity() {
        let w = model_min();
        let p = CurvePoint::affine_i64(1, 1);
        for k in -5i64..=5 {
            for l in -5i64..=5 {
                let lhs = scalar_mul(&w, k + l, &p);
                let rhs = group_law(&w, &scalar_mul(&w, k, &p), &scalar_mul(&w, l, &p));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn group_law_associativity_sample() {
        let w = model_min();
        let g = CurvePoint::affine_i64(1, 1);
        let pts: Vec<CurvePoint> = (1..=6).map(|k| scalar_mul(&w, k, &g)).collect();
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    let l = group_law(&w, &group_law(&w, a, b), c);
                    let r = group_law(&w, a, &group_law(&w, b, c));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn torsion_named() {
        let t = torsion(&model_c3_prime());
        assert_eq!(t.len(), 3);
        assert!(t.contains(&CurvePoint::affine_i64(0, 1)));
        assert!(t.contains(&CurvePoint::affine_i64(0, -1)));
        assert_eq!(torsion(&model_min()), vec![CurvePoint::infinity()]);
        // y^2 = x^3 - x: full 2-torsion
        let w = Weierstrass::short(rat(0), rat(-1), rat(0));
        let t = torsion(&w);
        assert_eq!(t.len(), 4);
        assert!(t.contains(&CurvePoint::affine_i64(0, 0)));
        assert!(t.contains(&CurvePoint::affine_i64(1, 0)));
        assert!(t.contains(&CurvePoint::affine_i64(-1, 0)));
    }

    #[test]
    fn torsion_is_subgroup() {
        let w = model_c3_prime();
        let t = torsion(&w);
        for a in &t {
            for b in &t {
                assert!(t.contains(&group_law(&w, a, b)));
            }
        }
    }

    #[test]
    fn counts_mod_p() {
        assert_eq!(count_points_mod_p(&model_b32(), 5).unwrap(), 5);
        // Hasse bound on the minimal curve for good p <= 50
        let m = CurveModel::weierstrass(model_min(), "min");
        for p in [3u64, 5, 7, 11, 13, 17, 19, 29, 31, 37, 41, 43, 47] {
            if let Ok(n) = count_points_mod_p(&m, p) {
                let ap = p as i64 + 1 - n as i64;
                assert!((ap * ap) as f64 <= 4.0 * p as f64);
            }
        }
    }

    #[test]
    fn twist_counts_example1() {
        // primes of 2 * f(0) * f^2(0) = 2 * 3 * 12: {2, 3}
        for d in [1i64, 2, 3, 6, -1, -2, -3, -6] {
            let tw = quadratic_twist(&model_b32(), &BigInt::from(d));
            // Err means 5 | d: bad reduction, excluded
            if let Ok(n) = count_points_mod_p(&tw, 5) {
                assert!(n <= 7, "twist {} gave {}", d, n);
            }
        }
    }

    #[test]
    fn search_named_sets() {
        let pts = rational_point_search(&model_c(), 40);
        assert_eq!(pts, vec![CurvePoint::affine_i64(0, 0)]);
        let pts = rational_point_search(&model_script_c(), 40);
        assert_eq!(pts.len(), 4);
        for (x, y) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            assert!(pts.contains(&CurvePoint::affine_i64(x, y)));
        }
    }

    #[test]
    fn chain_forward() {
        let chain = e2_to_min_chain();
        let img = chain
            .apply(&CurvePoint::Affine(rat(3), ratio(7, 2)))
            .unwrap();
        assert_eq!(img, CurvePoint::affine_i64(0, -1));
    }

    #[test]
    fn chain_roundtrip() {
        let w = model_min();
        let chain = e2_to_min_chain();
        let g = CurvePoint::affine_i64(1, 1);
        for k in 1..=8i64 {
            for s in [k, -k] {
                let q = scalar_mul(&w, s, &g);
                for pre in invert_e2_chain(&q) {
                    assert!(on_model(&model_e2(), &pre));
                    assert_eq!(chain.apply(&pre).unwrap(), q);
                }
            }
        }
    }

    #[test]
    fn integral_points_min_curve() {
        let w = model_min();
        let pts = integral_points_via_generator(&w, &CurvePoint::affine_i64(1, 1), 40);
        let expect: Vec<CurvePoint> = [
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
            (3, 5),
            (3, -5),
            (5, 11),
            (5, -11),
            (56, 419),
            (56, -419),
        ]
        .iter()
        .map(|&(x, y)| CurvePoint::affine_i64(x, y))
        .collect();
        assert_eq!(pts.len(), expect.len());
        for p in &expect {
            assert!(pts.contains(p), "missing {}", p);
        }
    }

    #[test]
    fn e1_integral_points() {
        let w = model_e1_integral();
        let pts = integral_points_via_generator(&w, &CurvePoint::affine_i64(2, 1), 40);
        assert_eq!(
            pts,
            vec![CurvePoint::affine_i64(2, -1), CurvePoint::affine_i64(2, 1)]
        );
    }

    #[test]
    fn parse_curves() {
        let m = parse_curve("y^2=x^3-x+1").unwrap();
        assert_eq!(m.shape, Shape::Weierstrass(model_min()));
        let m = parse_curve("-y^2=t^3+2*t^2+t+1").unwrap();
        match &m.shape {
            Shape::Twisted(g, h) => {
                assert_eq!(*g, ParamPoly::from_i64(&[-1]));
                assert_eq!(*h, ParamPoly::from_i64(&[1, 1, 2, 1]));
            }
            s => panic!("{:?}", s),
        }
        let m = parse_curve("(t+1)*y^2=t^3+2*t^2+t+1").unwrap();
        assert!(matches!(m.shape, Shape::Twisted(_, _)));
        let m = parse_curve("y^2+3*x*y+4*y=x^3+3/4*x^2-4*x-3").unwrap();
        match &m.shape {
            Shape::Weierstrass(w) => {
                assert_eq!(w.a1, rat(3));
                assert_eq!(w.a2, ratio(3, 4));
                assert_eq!(w.a3, rat(4));
                assert_eq!(w.a4, rat(-4));
                assert_eq!(w.a6, rat(-3));
            }
            s => panic!("{:?}", s),
        }
        assert_eq!(
            parse_point("(-17/4, -53/8)").unwrap(),
            CurvePoint::Affine(ratio(-17, 4), ratio(-53, 8))
        );
    }

    #[test]
    fn c3_chain_and_torsion_consequence() {
        let chain = c3_to_c3prime_chain();
        // C3 rational points other than (0,0) would map into C3'(Q)
        let img = chain.apply(&CurvePoint::Affine(rat(-1), rat(1)));
        // t=-1: f^3 value is (-1)^4+2(-1)^3+1-1 = -1, not a square; the
        // point is not on C3, so only the exception matters here
        assert!(img.is_err() || !on_model(&model_c3(), &CurvePoint::Affine(rat(-1), rat(1))));
        assert!(chain
            .apply(&CurvePoint::affine_i64(0, 0))
            .is_err());
    }

    #[test]
    fn gamma1_chain() {
        let chain = gamma1_e_to_eprime_chain();
        let img = chain.apply(&CurvePoint::affine_i64(1, 1)).unwrap();
        assert_eq!(img, CurvePoint::affine_i64(-2, -4));
        let pre = invert_gamma1_chain(&CurvePoint::affine_i64(-2, -4));
        assert_eq!(pre, vec![CurvePoint::affine_i64(1, 1)]);
    }
}
