//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are exact `BigRational`s; index `i` holds the coefficient of
//! `t^i`. The zero polynomial is the empty coefficient list.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct ParamPoly {
    coeffs: Vec<BigRational>,
}

impl ParamPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ParamPoly { coeffs }
    }

    pub fn zero() -> Self {
        ParamPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        ParamPoly::new(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        ParamPoly::new(v)
    }

    /// The identity polynomial `t`.
    pub fn var() -> Self {
        ParamPoly::monomial(BigRational::one(), 1)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ParamPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> ParamPoly {
        if self.coeffs.len() <= 1 {
            return ParamPoly::zero();
        }
        ParamPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> ParamPoly {
        ParamPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: returns `(q, r)` with `self = q * div + r`.
    pub fn divrem(&self, div: &ParamPoly) -> (ParamPoly, ParamPoly) {
        let d = div.degree().expect("division by zero polynomial");
        let lc = div.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let q = rem.last().unwrap() / &lc;
            for i in 0..=d {
                let sub = &q * &div.coeffs[i];
                rem[k + i] -= sub;
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
            quot[k] = q;
        }
        (ParamPoly::new(quot), ParamPoly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &ParamPoly) -> ParamPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
            // keep coefficients small
            if let Some(lc) = b.leading().cloned() {
                b = b.scale(&lc.recip());
            }
        }
        match a.leading().cloned() {
            Some(lc) => a.scale(&lc.recip()),
            None => a,
        }
    }

    /// Separability test: gcd(p, p') is constant.
    pub fn is_separable(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            _ => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Resultant of `self` and `other` over the rationals.
    pub fn resultant(&self, other: &ParamPoly) -> BigRational {
        fn go(f: &ParamPoly, g: &ParamPoly) -> BigRational {
            let m = match f.degree() {
                None => return BigRational::zero(),
                Some(m) => m,
            };
            let n = match g.degree() {
                None => return BigRational::zero(),
                Some(n) => n,
            };
            if n == 0 {
                return pow_rat(g.leading().unwrap(), m as u32);
            }
            if m < n {
                let sign = if (m * n) % 2 == 1 {
                    -BigRational::one()
                } else {
                    BigRational::one()
                };
                return sign * go(g, f);
            }
            let (_, r) = f.divrem(g);
            match r.degree() {
                None => BigRational::zero(),
                Some(dr) => {
                    let sign = if (m * n) % 2 == 1 {
                        -BigRational::one()
                    } else {
                        BigRational::one()
                    };
                    sign * pow_rat(g.leading().unwrap(), (m - dr) as u32) * go(g, &r)
                }
            }
        }
        go(self, other)
    }

    /// Discriminant: `(-1)^{d(d-1)/2} Res(p, p') / lc(p)`.
    ///
    /// Rejects constant and zero polynomials.
    pub fn discriminant(&self) -> Option<BigRational> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let res = self.resultant(&self.derivative());
        let sign = if (d * (d - 1) / 2) % 2 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        Some(sign * res / self.leading().unwrap())
    }

    /// Smallest positive integer `d` with `d * self` integral.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        l.abs()
    }
}

fn pow_rat(b: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ParamPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ParamPoly::new(out)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn disc_quadratic() {
        // disc(x^2 + c) = -4c
        let p = ParamPoly::from_i64(&[3, 0, 1]);
        assert_eq!(p.discriminant().unwrap(), rat(-12));
        let p = ParamPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(p.discriminant().unwrap(), rat(4));
    }

    #[test]
    fn disc_quartic() {
        // x^4 + 6x^2 + 12, i.e. f_3^2 for gamma=0: disc = 27648
        let p = ParamPoly::from_i64(&[12, 0, 6, 0, 1]);
        assert_eq!(p.discriminant().unwrap(), rat(27648));
    }

    #[test]
    fn gcd_and_separability() {
        let p = ParamPoly::from_i64(&[-1, 0, 1]); // (t-1)(t+1)
        let q = ParamPoly::from_i64(&[-1, 1]); // t-1
        assert_eq!(p.gcd(&q), q);
        assert!(p.is_separable());
        let sq = &q * &q;
        assert!(!sq.is_separable());
    }

    #[test]
    fn divrem_roundtrip() {
        let p = ParamPoly::from_i64(&[1, 2, 0, 5, 7]);
        let d = ParamPoly::from_i64(&[3, 1, 2]);
        let (q, r) = p.divrem(&d);
        assert_eq!(&(&q * &d) + &r, p);
        assert!(r.degree().unwrap_or(0) < d.degree().unwrap());
    }
}
