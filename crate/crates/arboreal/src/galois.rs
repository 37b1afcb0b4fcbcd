//! Level-by-level maximality certificates for Gal(f^n) via square classes
//! of the critical orbit.
//!
//! Level 1 is maximal iff -c is not a rational square. For n >= 2 the n-th
//! level fails to be maximal exactly when the class of f^n(gamma)(c) lies in
//! the F2-span of the classes of -c, f^2(gamma)(c), ..., f^{n-1}(gamma)(c).
//! A non-maximality witness is the solving subset together with the exact
//! rational square root of the product.

use crate::arith::{
    is_rational_square, rational_sqrt, span_solve, square_class_cached, ArithError, Budget,
    FactorCache, SquareClass,
};
use crate::dynamics::{iterate_value_poly, QuadMap};
use crate::poly::ParamPoly;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelStatus {
    Maximal,
    /// The witness lists generator indices (0 -> -c, i >= 1 -> f^{i+1}(gamma));
    /// multiplying those values with f^n(gamma)(c) gives sqrt^2.
    NonMaximal {
        witness: Vec<usize>,
        sqrt: BigRational,
    },
    /// Some orbit value vanished: the iterate is reducible for degenerate
    /// reasons and no certificate applies.
    Reducible,
    /// A square class stayed inexact under the factoring budget.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCertificate {
    pub level: usize,
    pub status: LevelStatus,
}

impl LevelCertificate {
    pub fn is_maximal(&self) -> bool {
        matches!(self.status, LevelStatus::Maximal)
    }
}

/// The Kummer generator set G_m of polynomials in t.
#[derive(Clone, Debug)]
pub struct GSet {
    pub level: usize,
    pub polys: Vec<ParamPoly>,
}

/// G_1 = {-t}; G_m = G_{m-1} union {f_t^m(gamma) g : g in G_{m-1}} union
/// {f_t^m(gamma)}. Size 2^m - 1.
pub fn g_set(gamma: &BigRational, m: usize) -> GSet {
    assert!((1..=6).contains(&m), "generator set level out of range");
    let mut polys = vec![-&ParamPoly::var()];
    for k in 2..=m {
        let fk = iterate_value_poly(gamma, k);
        let mut next = polys.clone();
        for g in &polys {
            next.push(&fk * g);
        }
        next.push(fk);
        polys = next;
    }
    GSet { level: m, polys }
}

/// Square classes of g(c) for g in G_k; errors with the index of the first
/// generator that evaluates to zero.
pub fn subfield_classes(
    m: &QuadMap,
    k: usize,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> Result<Vec<SquareClass>, usize> {
    let gs = g_set(&m.gamma, k);
    let mut out = Vec::with_capacity(gs.polys.len());
    for (i, g) in gs.polys.iter().enumerate() {
        let v = g.eval(&m.c);
        if v.is_zero() {
            return Err(i);
        }
        out.push(square_class_cached(&v, budget, cache));
    }
    Ok(out)
}

/// Span-test generators for level n: values of -c, f^2(gamma), ...,
/// f^{n-1}(gamma) at c. These generate the same group of classes as G_{n-1}.
fn span_generators(m: &QuadMap, n: usize) -> Option<Vec<BigRational>> {
    let orbit = m.critical_orbit(n.max(2) - 1);
    if orbit.iter().any(|v| v.is_zero()) {
        return None;
    }
    let mut gens = vec![-&m.c];
    for v in orbit.iter().take(n - 1).skip(1) {
        gens.push(v.clone());
    }
    Some(gens)
}

/// Certificate for level n in isolation (the small-iterate test assembles
/// the full trail).
pub fn level_status(
    m: &QuadMap,
    n: usize,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> LevelCertificate {
    assert!(n >= 1);
    let orbit = m.critical_orbit(n);
    if orbit.iter().any(|v| v.is_zero()) {
        return LevelCertificate {
            level: n,
            status: LevelStatus::Reducible,
        };
    }
    if n == 1 {
        let minus_c = -&m.c;
        let status = match rational_sqrt(&minus_c) {
            Some(r) => LevelStatus::NonMaximal {
                witness: vec![],
                sqrt: r,
            },
            None => LevelStatus::Maximal,
        };
        return LevelCertificate { level: n, status };
    }
    let target_value = orbit[n - 1].clone();
    // the empty combination first: f^n(gamma)(c) itself a square
    if is_rational_square(&target_value) {
        return LevelCertificate {
            level: n,
            status: LevelStatus::NonMaximal {
                witness: vec![],
                sqrt: rational_sqrt(&target_value).unwrap(),
            },
        };
    }
    let gen_values = match span_generators(m, n) {
        Some(g) => g,
        None => {
            return LevelCertificate {
                level: n,
                status: LevelStatus::Reducible,
            }
        }
    };
    let target = square_class_cached(&target_value, budget, cache);
    let gens: Vec<SquareClass> = gen_values
        .iter()
        .map(|v| square_class_cached(v, budget, cache))
        .collect();
    let status = match span_solve(&target, &gens) {
        Err(ArithError::InexactClass(_)) => LevelStatus::Unknown,
        Err(_) => LevelStatus::Unknown,
        Ok(None) => LevelStatus::Maximal,
        Ok(Some(subset)) => {
            let mut prod = target_value;
            for &i in &subset {
                prod *= &gen_values[i];
            }
            let sqrt = rational_sqrt(&prod)
                .expect("span witness must multiply to an exact square");
            LevelStatus::NonMaximal {
                witness: subset,
                sqrt,
            }
        }
    };
    LevelCertificate { level: n, status }
}

/// Certificate trail for levels 1..n.
pub fn certificate_trail(
    m: &QuadMap,
    n: usize,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> Vec<LevelCertificate> {
    (1..=n).map(|k| level_status(m, k, budget, cache)).collect()
}

/// True iff levels 1..n-1 are all maximal and level n is not. Exact for
/// n <= 3; for larger n the trail is certificate-only.
pub fn small_iterate(
    m: &QuadMap,
    n: usize,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> (Option<bool>, Vec<LevelCertificate>) {
    assert!((2..=6).contains(&n));
    let trail = certificate_trail(m, n, budget, cache);
    if trail.iter().any(|c| matches!(c.status, LevelStatus::Unknown)) {
        return (None, trail);
    }
    if trail.iter().any(|c| matches!(c.status, LevelStatus::Reducible)) {
        return (Some(false), trail);
    }
    let small = trail[..n - 1].iter().all(|c| c.is_maximal())
        && matches!(trail[n - 1].status, LevelStatus::NonMaximal { .. });
    (Some(small), trail)
}

/// Outcome of the ramified-prime support check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportCheck {
    Holds,
    Fails { stray_prime: num_bigint::BigUint },
    /// Precondition not met: level n is not NonMaximal here.
    NotApplicable,
    Unknown,
}

/// For a NonMaximal level n, the witness product has a squarefree part d;
/// check that every prime of d divides 2 * prod_{j<n} f^j(gamma)(c).
pub fn ramification_support_check(
    m: &QuadMap,
    n: usize,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> SupportCheck {
    let cert = level_status(m, n, budget, cache);
    let witness = match cert.status {
        LevelStatus::NonMaximal { witness, .. } => witness,
        LevelStatus::Unknown => return SupportCheck::Unknown,
        _ => return SupportCheck::NotApplicable,
    };
    if n == 1 {
        return SupportCheck::Holds;
    }
    let gen_values = span_generators(m, n).expect("non-degenerate by certificate");
    let mut d = SquareClass::one();
    for &i in &witness {
        d = d.mul(&square_class_cached(&gen_values[i], budget, cache));
    }
    if !d.is_exact() {
        return SupportCheck::Unknown;
    }
    let orbit = m.critical_orbit(n - 1);
    let mut prod = crate::rat(2);
    for v in &orbit {
        prod *= v;
    }
    let support = square_class_cached(&prod, budget, cache);
    if !support.is_exact() {
        return SupportCheck::Unknown;
    }
    let allowed = {
        use num_bigint::BigUint;
        use num_traits::Signed;
        let mut n = (prod.numer().abs() * prod.denom().abs()).to_biguint().unwrap();
        let mut primes: Vec<BigUint> = vec![];
        let fr = crate::arith::factor_uint(&n, budget);
        primes.extend(fr.factors.keys().cloned());
        n = fr.cofactor;
        (primes, n)
    };
    for p in &d.odd_support {
        let known = allowed.0.contains(p);
        if !known {
            if !allowed.1.is_zero() && !(allowed.1.clone() % p).is_zero() {
                return SupportCheck::Fails {
                    stray_prime: p.clone(),
                };
            }
            if allowed.1 == num_traits::One::one() {
                return SupportCheck::Fails {
                    stray_prime: p.clone(),
                };
            }
        }
    }
    SupportCheck::Holds
}

/// Stable JSON shape for certificates:
/// {gamma, c, level, status, witness, sqrt}.
#[derive(Serialize)]
pub struct CertificateJson {
    pub gamma: String,
    pub c: String,
    pub level: usize,
    pub status: String,
    pub witness: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt: Option<String>,
}

pub fn certificate_json(m: &QuadMap, cert: &LevelCertificate) -> CertificateJson {
    let (status, witness, sqrt) = match &cert.status {
        LevelStatus::Maximal => ("Maximal".into(), vec![], None),
        LevelStatus::NonMaximal { witness, sqrt } => (
            "NonMaximal".into(),
            witness.clone(),
            Some(sqrt.to_string()),
        ),
        LevelStatus::Reducible => ("Reducible".into(), vec![], None),
        LevelStatus::Unknown => ("Unknown".into(), vec![], None),
    };
    CertificateJson {
        gamma: m.gamma.to_string(),
        c: m.c.to_string(),
        level: cert.level,
        status,
        witness,
        sqrt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn g_sets() {
        let gs = g_set(&rat(0), 1);
        assert_eq!(gs.polys, vec![ParamPoly::from_i64(&[0, -1])]);
        let gs = g_set(&rat(0), 2);
        assert_eq!(
            gs.polys,
            vec![
                ParamPoly::from_i64(&[0, -1]),
                ParamPoly::from_i64(&[0, 0, -1, -1]),
                ParamPoly::from_i64(&[0, 1, 1]),
            ]
        );
        assert_eq!(g_set(&rat(1), 3).polys.len(), 7);
        assert_eq!(g_set(&crate::ratio(2, 3), 4).polys.len(), 15);
    }

    #[test]
    fn subfield_classes_c3() {
        let m = QuadMap::new(rat(0), rat(3));
        let classes = subfield_classes(&m, 2, &b(), None).unwrap();
        let reps: Vec<_> = classes.iter().map(|c| c.representative()).collect();
        assert_eq!(
            reps,
            vec![
                num_bigint::BigInt::from(-3),
                num_bigint::BigInt::from(-1),
                num_bigint::BigInt::from(3)
            ]
        );
    }

    #[test]
    fn level_statuses() {
        let m = QuadMap::new(rat(0), rat(3));
        assert!(level_status(&m, 1, &b(), None).is_maximal());
        assert!(level_status(&m, 2, &b(), None).is_maximal());
        match level_status(&m, 3, &b(), None).status {
            LevelStatus::NonMaximal { witness, sqrt } => {
                assert_eq!(witness, vec![1]); // f^2(0) = 12
                assert_eq!(sqrt, rat(42));
            }
            s => panic!("expected NonMaximal, got {:?}", s),
        }
        let m = QuadMap::new(rat(0), rat(-2));
        assert!(matches!(
            level_status(&m, 2, &b(), None).status,
            LevelStatus::NonMaximal { .. }
        ));
    }

    #[test]
    fn small_iterates() {
        let (s, _) = small_iterate(&QuadMap::new(rat(0), rat(3)), 3, &b(), None);
        assert_eq!(s, Some(true));
        let (s, _) = small_iterate(&QuadMap::new(rat(0), rat(5)), 3, &b(), None);
        assert_eq!(s, Some(false));
        let (s, trail) = small_iterate(&QuadMap::new(rat(0), rat(-2)), 3, &b(), None);
        assert_eq!(s, Some(false));
        assert!(matches!(
            trail[1].status,
            LevelStatus::NonMaximal { .. }
        ));
    }

    #[test]
    fn support_checks() {
        assert_eq!(
            ramification_support_check(&QuadMap::new(rat(0), rat(3)), 3, &b(), None),
            SupportCheck::Holds
        );
        assert_eq!(
            ramification_support_check(&QuadMap::new(rat(0), rat(-2)), 2, &b(), None),
            SupportCheck::Holds
        );
        assert_eq!(
            ramification_support_check(&QuadMap::new(rat(0), rat(5)), 3, &b(), None),
            SupportCheck::NotApplicable
        );
    }

    #[test]
    fn witness_soundness_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        for _ in 0..60 {
            let c = rat(rng.gen_range(-60..=60i64));
            if c == rat(0) {
                continue;
            }
            let m = QuadMap::new(rat(0), c);
            for n in 2..=3 {
                if let LevelStatus::NonMaximal { witness, sqrt } =
                    level_status(&m, n, &b(), None).status
                {
                    let orbit = m.critical_orbit(n);
                    if orbit.iter().any(|v| v.is_zero()) {
                        continue;
                    }
                    let gens = span_generators(&m, n).unwrap();
                    let mut prod = orbit[n - 1].clone();
                    for i in witness {
                        prod *= &gens[i];
                    }
                    assert_eq!(&sqrt * &sqrt, prod);
                }
            }
        }
    }

    #[test]
    fn gset_classes_closed_under_products() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let mut done = 0;
        while done < 15 {
            let g = rat(rng.gen_range(-3..=3i64));
            let c = rat(rng.gen_range(-30..=30i64));
            let m = QuadMap::new(g, c);
            let classes = match subfield_classes(&m, 3, &b(), None) {
                Ok(cs) => cs,
                Err(_) => continue,
            };
            if classes.iter().any(|c| !c.is_exact()) {
                continue;
            }
            let mut set: Vec<SquareClass> = classes.clone();
            set.push(SquareClass::one());
            for a in &classes {
                for bb in &classes {
                    let p = a.mul(bb);
                    assert!(set.contains(&p), "product left the class set");
                }
            }
            done += 1;
        }
    }
}
