//! Quadratic maps f(x) = (x - gamma)^2 + c: critical orbits, iterate
//! polynomials in the parameter t, and the discriminant recursion.

use crate::poly::ParamPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Largest supported iterate depth for symbolic work; coefficients grow
/// doubly exponentially past this.
pub const MAX_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadMap {
    pub gamma: BigRational,
    pub c: BigRational,
}

impl QuadMap {
    pub fn new(gamma: BigRational, c: BigRational) -> Self {
        QuadMap { gamma, c }
    }

    pub fn apply(&self, x: &BigRational) -> BigRational {
        let d = x - &self.gamma;
        &d * &d + &self.c
    }

    /// [f(gamma), f^2(gamma), ..., f^n(gamma)]; entry 1 is always c.
    pub fn critical_orbit(&self, n: usize) -> Vec<BigRational> {
        assert!(n >= 1);
        let mut out = Vec::with_capacity(n);
        let mut x = self.gamma.clone();
        for _ in 0..n {
            x = self.apply(&x);
            out.push(x.clone());
        }
        out
    }

    /// Recenter to put the critical point at 0: same dynamics as gamma=0
    /// with parameter c (the orbit values are unchanged).
    pub fn recentered_c(&self) -> BigRational {
        self.c.clone()
    }
}

/// f_t^n(gamma) as a polynomial in the parameter t, where f_t(x) =
/// (x - gamma)^2 + t. Degree 2^{n-1}; f_t^1(gamma) = t.
pub fn iterate_value_poly(gamma: &BigRational, n: usize) -> ParamPoly {
    assert!((1..=MAX_DEPTH).contains(&n), "depth out of range");
    let g = ParamPoly::constant(gamma.clone());
    let t = ParamPoly::var();
    let mut p = t.clone();
    for _ in 1..n {
        let d = &p - &g;
        p = &(&d * &d) + &t;
    }
    p
}

/// Discriminant of f^n as a polynomial in x, for a concrete map.
pub fn iterate_discriminant(m: &QuadMap, n: usize) -> Option<BigRational> {
    iterate_poly_in_x(m, n).discriminant()
}

/// f^n as a polynomial in x (the dynamical variable).
pub fn iterate_poly_in_x(m: &QuadMap, n: usize) -> ParamPoly {
    assert!((1..=MAX_DEPTH).contains(&n));
    let g = ParamPoly::constant(m.gamma.clone());
    let c = ParamPoly::constant(m.c.clone());
    let mut p = ParamPoly::var();
    for _ in 0..n {
        let d = &p - &g;
        p = &(&d * &d) + &c;
    }
    p
}

pub fn is_iterate_separable(m: &QuadMap, n: usize) -> bool {
    iterate_poly_in_x(m, n).is_separable()
}

/// Check disc(f^n) = +/- disc(f^{n-1})^2 * 2^{2^n} * f^n(gamma) exactly.
pub fn check_disc_recursion(m: &QuadMap, n: usize) -> bool {
    assert!(n >= 2);
    let dn = match iterate_discriminant(m, n) {
        Some(d) => d,
        None => return false,
    };
    let dprev = match iterate_discriminant(m, n - 1) {
        Some(d) => d,
        None => return false,
    };
    let orbit = m.critical_orbit(n);
    let mut pow2 = BigRational::one();
    for _ in 0..(1u64 << n) {
        pow2 *= BigRational::from_integer(BigInt::from(2));
    }
    let rhs = &dprev * &dprev * pow2 * &orbit[n - 1];
    dn == rhs || dn == -rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};
    use num_traits::Zero;

    #[test]
    fn orbits() {
        let m = QuadMap::new(rat(0), rat(3));
        assert_eq!(m.critical_orbit(3), vec![rat(3), rat(12), rat(147)]);
        let m = QuadMap::new(rat(0), rat(-2));
        assert_eq!(m.critical_orbit(3), vec![rat(-2), rat(2), rat(2)]);
        let m = QuadMap::new(rat(1), rat(0));
        assert_eq!(m.critical_orbit(3), vec![rat(0), rat(1), rat(0)]);
    }

    #[test]
    fn value_poly_gamma0() {
        // n=3: t^4 + 2t^3 + t^2 + t
        let p = iterate_value_poly(&rat(0), 3);
        assert_eq!(p, ParamPoly::from_i64(&[0, 1, 1, 2, 1]));
        assert_eq!(iterate_value_poly(&rat(0), 1), ParamPoly::var());
    }

    #[test]
    fn value_poly_matches_orbit() {
        let gammas = [rat(0), rat(1), ratio(-3, 2)];
        let cs = [rat(3), rat(-7), ratio(5, 4)];
        for g in &gammas {
            for c in &cs {
                let m = QuadMap::new(g.clone(), c.clone());
                let orbit = m.critical_orbit(5);
                for n in 1..=5 {
                    let p = iterate_value_poly(g, n);
                    assert_eq!(p.degree(), Some(1 << (n - 1)));
                    assert_eq!(p.eval(c), orbit[n - 1]);
                }
            }
        }
        // gamma=1, c=3: orbit 3, 7, 39
        let p = iterate_value_poly(&rat(1), 3);
        assert_eq!(p.eval(&rat(3)), rat(39));
    }

    #[test]
    fn disc_recursion_examples() {
        let m = QuadMap::new(rat(0), rat(3));
        assert_eq!(iterate_discriminant(&m, 2), Some(rat(27648)));
        assert!(check_disc_recursion(&m, 2));
        assert!(check_disc_recursion(&QuadMap::new(rat(0), rat(-1)), 2));
        assert!(check_disc_recursion(&QuadMap::new(rat(0), rat(5)), 3));
    }

    #[test]
    fn disc_recursion_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut tried = 0;
        while tried < 25 {
            let g = ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let c = ratio(rng.gen_range(-20..=20), rng.gen_range(1..=4));
            let m = QuadMap::new(g, c);
            if (1..=4).any(|n| !is_iterate_separable(&m, n)) {
                continue;
            }
            for n in 2..=4 {
                assert!(check_disc_recursion(&m, n), "failed for {:?} n={}", m, n);
            }
            tried += 1;
        }
    }

    #[test]
    fn orbit_monotone_for_positive_integer_c() {
        for c in 1..=30i64 {
            let m = QuadMap::new(rat(0), rat(c));
            let orbit = m.critical_orbit(5);
            for w in orbit.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn degenerate_orbit_hits_zero() {
        let m = QuadMap::new(rat(0), rat(-1));
        assert!(m.critical_orbit(2)[1].is_zero());
    }
}
