//! Bounded-effort integer factorization, square classes of rationals, and
//! F2 linear algebra on square classes.
//!
//! Factoring never fails: whatever does not split within the budget is
//! carried as a composite cofactor and the result says so. Square classes
//! built from incomplete factorizations keep the unsplit part as an
//! `unknown_cofactor`, and everything downstream that needs exactness
//! refuses to guess.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("square class has unknown cofactor {0}; raise the factoring budget")]
    InexactClass(BigUint),
    #[error("cache io: {0}")]
    CacheIo(#[from] std::io::Error),
    #[error("cache parse error on line {0}")]
    CacheParse(usize),
}

/// Effort limits for `factor`. Results are deterministic for a fixed budget.
#[derive(Clone, Debug)]
pub struct Budget {
    /// Trial-division bound; the cofactor of an incomplete result has no
    /// prime factor below this.
    pub trial_bound: u64,
    /// Total iteration cap across all Pollard rho attempts.
    pub rho_iterations: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            trial_bound: 1_000_000,
            rho_iterations: 4_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorResult {
    pub factors: BTreeMap<BigUint, u32>,
    pub cofactor: BigUint,
    pub complete: bool,
}

impl FactorResult {
    pub fn unit() -> Self {
        FactorResult {
            factors: BTreeMap::new(),
            cofactor: BigUint::one(),
            complete: true,
        }
    }

    /// Recombine: product of prime powers times the cofactor.
    pub fn value(&self) -> BigUint {
        let mut v = self.cofactor.clone();
        for (p, e) in &self.factors {
            v *= p.pow(*e);
        }
        v
    }
}

// ---------------------------------------------------------------------------
// primality

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, b, m);
        }
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'base: for &a in &MR_BASES {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the fixed base set {2,3,...,41}: deterministic below
/// 3.3e24, a fixed-witness probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'base: for &a in &MR_BASES {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Inverse of a modulo m (extended Euclid), if gcd(a, m) = 1.
pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

// ---------------------------------------------------------------------------
// Pollard rho (Brent)

#[allow(unused_assignments)]
fn rho_brent_u64(n: u64, budget: &mut u64) -> Option<u64> {
    if n.is_even() {
        return Some(2);
    }
    for c in 1u64..=20 {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let f = |v: u64| (mulmod_u64(v, v, n) + c) % n;
        let mut ys = y;
        let mut r = 1u64;
        let mut q = 1u64;
        'outer: while d == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && d == 1 {
                ys = y;
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(y);
                    q = mulmod_u64(q, x.abs_diff(y), n);
                }
                if *budget < m {
                    *budget = 0;
                    return None;
                }
                *budget -= m;
                d = q.gcd(&n);
                k += m;
            }
            r *= 2;
            if *budget == 0 {
                return None;
            }
            if d == n {
                // backtrack one step at a time
                d = 1;
                loop {
                    ys = f(ys);
                    d = x.abs_diff(ys).gcd(&n);
                    if d > 1 {
                        break 'outer;
                    }
                }
            }
        }
        if d > 1 && d < n {
            return Some(d);
        }
    }
    None
}

#[allow(unused_assignments)]
fn rho_brent_big(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if let Some(v) = n.to_u64() {
        return rho_brent_u64(v, budget).map(BigUint::from);
    }
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32..=20 {
        let c = BigUint::from(c);
        let f = |v: &BigUint| (v * v + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x;
        let mut ys = y.clone();
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut d = BigUint::one();
        'outer: while d.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && d.is_one() {
                ys = y.clone();
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                if *budget < m {
                    *budget = 0;
                    return None;
                }
                *budget -= m;
                d = q.gcd(n);
                k += m;
            }
            r *= 2;
            if *budget == 0 {
                return None;
            }
            if &d == n {
                d = BigUint::one();
                loop {
                    ys = f(&ys);
                    let diff = if x > ys { &x - &ys } else { &ys - &x };
                    d = diff.gcd(n);
                    if d > one {
                        break 'outer;
                    }
                }
            }
        }
        if d > one && &d < n {
            return Some(d);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// factor

/// Factor |n| within the budget. Incompleteness lands in the cofactor.
pub fn factor(n: &BigInt, budget: &Budget) -> FactorResult {
    factor_uint(&n.abs().to_biguint().unwrap(), budget)
}

pub fn factor_uint(n: &BigUint, budget: &Budget) -> FactorResult {
    let mut out = FactorResult::unit();
    if n.is_zero() {
        panic!("factor(0)");
    }
    let mut rem = n.clone();
    if rem.is_one() {
        return out;
    }
    // strip very small primes cheaply before anything else
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if p > budget.trial_bound {
            break;
        }
        let pb = BigUint::from(p);
        while (&rem % &pb).is_zero() {
            rem /= &pb;
            *out.factors.entry(pb.clone()).or_insert(0) += 1;
        }
        if rem.is_one() {
            return out;
        }
    }
    let mut rho_budget = budget.rho_iterations;
    let mut stack = vec![rem];
    let mut stuck: Vec<BigUint> = vec![];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            *out.factors.entry(m).or_insert(0) += 1;
            continue;
        }
        if let Some(r) = perfect_power_root(&m) {
            // m = r^k splits for free
            let k = power_exponent(&m, &r);
            for _ in 0..k {
                stack.push(r.clone());
            }
            continue;
        }
        match rho_brent_big(&m, &mut rho_budget) {
            Some(d) => {
                stack.push(&m / &d);
                stack.push(d);
            }
            None => stuck.push(m),
        }
    }
    if !stuck.is_empty() {
        // rho gave up; honor the trial-bound invariant on what is left
        let mut cof = BigUint::one();
        for m in stuck {
            cof *= trial_divide_into(&mut out.factors, m, budget.trial_bound);
        }
        if !cof.is_one() {
            out.cofactor = cof;
            out.complete = false;
        }
    }
    out
}

/// Trial-divide `m` by all odd d <= bound, recording primes found; returns
/// the undivided remainder (1 if fully split or prime).
fn trial_divide_into(factors: &mut BTreeMap<BigUint, u32>, mut m: BigUint, bound: u64) -> BigUint {
    let mut d = 3u64;
    while d <= bound {
        let db = BigUint::from(d);
        if &db * &db > m {
            break;
        }
        while (&m % &db).is_zero() {
            m /= &db;
            *factors.entry(db.clone()).or_insert(0) += 1;
        }
        d += 2;
    }
    if m.is_one() {
        return m;
    }
    if is_probable_prime(&m) {
        *factors.entry(m).or_insert(0) += 1;
        return BigUint::one();
    }
    m
}

fn perfect_power_root(n: &BigUint) -> Option<BigUint> {
    for k in [2u32, 3, 5, 7] {
        let r = n.nth_root(k);
        if r.pow(k) == *n && r > BigUint::one() {
            return Some(r);
        }
    }
    None
}

fn power_exponent(n: &BigUint, r: &BigUint) -> u32 {
    let mut k = 0;
    let mut m = n.clone();
    while (&m % r).is_zero() {
        m /= r;
        k += 1;
    }
    debug_assert!(m.is_one());
    k
}

// ---------------------------------------------------------------------------
// square classes

/// A nonzero rational modulo squares: sign * 2^two_exponent * prod(odd
/// primes) * unknown_cofactor, up to a rational square. The class is exact
/// when `unknown_cofactor` is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareClass {
    pub sign: i8,
    pub two_exponent: u8,
    pub odd_support: Vec<BigUint>,
    pub unknown_cofactor: BigUint,
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass {
            sign: 1,
            two_exponent: 0,
            odd_support: vec![],
            unknown_cofactor: BigUint::one(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.unknown_cofactor.is_one()
    }

    pub fn is_trivial(&self) -> bool {
        self.sign == 1 && self.two_exponent == 0 && self.odd_support.is_empty() && self.is_exact()
    }

    /// Squarefree representative (meaningful only for exact classes).
    pub fn representative(&self) -> BigInt {
        let mut v = BigInt::one();
        if self.two_exponent == 1 {
            v *= 2;
        }
        for p in &self.odd_support {
            v *= BigInt::from(p.clone());
        }
        v *= BigInt::from(self.unknown_cofactor.clone());
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    /// Product of classes: symmetric difference of supports.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let mut support = vec![];
        let (mut i, mut j) = (0, 0);
        while i < self.odd_support.len() || j < other.odd_support.len() {
            match (self.odd_support.get(i), other.odd_support.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    support.push(a.clone());
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    support.push(b.clone());
                    j += 1;
                }
                (Some(a), None) => {
                    support.push(a.clone());
                    i += 1;
                }
                (None, Some(b)) => {
                    support.push(b.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let mut cof = &self.unknown_cofactor * &other.unknown_cofactor;
        if is_perfect_square(&cof) {
            cof = BigUint::one();
        }
        SquareClass {
            sign: self.sign * other.sign,
            two_exponent: self.two_exponent ^ other.two_exponent,
            odd_support: support,
            unknown_cofactor: cof,
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.representative())
        } else {
            write!(
                f,
                "{}*?{}",
                {
                    let mut c = self.clone();
                    c.unknown_cofactor = BigUint::one();
                    c.representative()
                },
                self.unknown_cofactor
            )
        }
    }
}

fn is_perfect_square(n: &BigUint) -> bool {
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Square class of a nonzero rational. Numerator and denominator land in the
/// same class since q = (num*den)/den^2.
pub fn square_class(q: &BigRational, budget: &Budget) -> SquareClass {
    square_class_cached(q, budget, None)
}

pub fn square_class_cached(
    q: &BigRational,
    budget: &Budget,
    cache: Option<&FactorCache>,
) -> SquareClass {
    assert!(!q.is_zero(), "square class of zero");
    let n = q.numer().abs().to_biguint().unwrap() * q.denom().abs().to_biguint().unwrap();
    let fr = match cache {
        Some(c) => c.factor(&n, budget),
        None => factor_uint(&n, budget),
    };
    let mut class = SquareClass::one();
    if q.is_negative() {
        class.sign = -1;
    }
    for (p, e) in &fr.factors {
        if e % 2 == 1 {
            if p.to_u64() == Some(2) {
                class.two_exponent = 1;
            } else {
                class.odd_support.push(p.clone());
            }
        }
    }
    if !fr.cofactor.is_one() && !is_perfect_square(&fr.cofactor) {
        class.unknown_cofactor = fr.cofactor;
    }
    class
}

/// Exact rational-square test by integer square roots; never factors.
pub fn is_rational_square(q: &BigRational) -> bool {
    if q.is_zero() {
        return true;
    }
    if q.is_negative() {
        return false;
    }
    let n = q.numer().to_biguint().unwrap();
    let d = q.denom().to_biguint().unwrap();
    is_perfect_square(&n) && is_perfect_square(&d)
}

/// Exact rational square root when it exists.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    if q.is_negative() {
        return None;
    }
    let n = q.numer().to_biguint().unwrap();
    let d = q.denom().to_biguint().unwrap();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &rn * &rn == n && &rd * &rd == d {
        Some(BigRational::new(BigInt::from(rn), BigInt::from(rd)))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// F2 span

/// Coordinates of a square class over F2, indexed by {-1, 2, p1, p2, ...}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassVector {
    words: Vec<u64>,
}

impl ClassVector {
    fn zero(bits: usize) -> Self {
        ClassVector {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn xor(&mut self, other: &ClassVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    fn leading(&self) -> Option<usize> {
        for (w, word) in self.words.iter().enumerate().rev() {
            if *word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }
}

/// Express `target` as a product of a subset of `generators` modulo squares,
/// by Gaussian elimination over F2. Returns the subset indices, or `None`
/// when the target is outside the span. All classes must be exact.
pub fn span_solve(
    target: &SquareClass,
    generators: &[SquareClass],
) -> Result<Option<Vec<usize>>, ArithError> {
    for c in std::iter::once(target).chain(generators) {
        if !c.is_exact() {
            return Err(ArithError::InexactClass(c.unknown_cofactor.clone()));
        }
    }
    assert!(generators.len() <= 64, "too many generators");
    // coordinate index: 0 -> sign, 1 -> prime 2, then odd primes sorted
    let mut primes: Vec<&BigUint> = vec![];
    for c in std::iter::once(target).chain(generators) {
        for p in &c.odd_support {
            if let Err(pos) = primes.binary_search(&p) {
                primes.insert(pos, p);
            }
        }
    }
    let bits = 2 + primes.len();
    let to_vec = |c: &SquareClass| {
        let mut v = ClassVector::zero(bits);
        if c.sign < 0 {
            v.set(0);
        }
        if c.two_exponent == 1 {
            v.set(1);
        }
        for p in &c.odd_support {
            v.set(2 + primes.binary_search(&p).unwrap());
        }
        v
    };
    // basis rows carry the subset mask that produced them
    let mut basis: Vec<(ClassVector, u64)> = vec![];
    for (i, g) in generators.iter().enumerate() {
        let mut v = to_vec(g);
        let mut mask = 1u64 << i;
        for (b, m) in &basis {
            if let Some(l) = b.leading() {
                if v.leading() == Some(l) {
                    v.xor(b);
                    mask ^= m;
                }
            }
        }
        if !v.is_zero() {
            basis.push((v, mask));
            basis.sort_by_key(|(b, _)| std::cmp::Reverse(b.leading()));
        }
    }
    let mut v = to_vec(target);
    let mut mask = 0u64;
    for (b, m) in &basis {
        if let (Some(bl), Some(vl)) = (b.leading(), v.leading()) {
            if bl == vl {
                v.xor(b);
                mask ^= m;
            }
        }
    }
    if v.is_zero() {
        Ok(Some((0..generators.len()).filter(|i| mask >> i & 1 == 1).collect()))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// factor cache

/// Concurrent integer -> FactorResult cache with optional line-file
/// persistence: `<n> <p1>^<e1> <p2>^<e2> ... [cofactor=<m>]`.
pub struct FactorCache {
    map: RwLock<BTreeMap<BigUint, FactorResult>>,
}

impl Default for FactorCache {
    fn default() -> Self {
        Self::new()
    }
}

impl FactorCache {
    pub fn new() -> Self {
        FactorCache {
            map: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn factor(&self, n: &BigUint, budget: &Budget) -> FactorResult {
        if let Some(hit) = self.map.read().unwrap().get(n) {
            // an incomplete entry can be retried under a bigger budget
            if hit.complete {
                return hit.clone();
            }
        }
        let fr = factor_uint(n, budget);
        let mut w = self.map.write().unwrap();
        match w.get(n) {
            Some(old) if old.complete => old.clone(),
            _ => {
                w.insert(n.clone(), fr.clone());
                fr
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn load(path: &Path) -> Result<Self, ArithError> {
        let cache = FactorCache::new();
        let file = std::fs::File::open(path)?;
        let mut map = cache.map.write().unwrap();
        for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse = || -> Option<(BigUint, FactorResult)> {
                let mut it = line.split_whitespace();
                let n: BigUint = it.next()?.parse().ok()?;
                let mut fr = FactorResult::unit();
                for tok in it {
                    if let Some(m) = tok.strip_prefix("cofactor=") {
                        fr.cofactor = m.parse().ok()?;
                        fr.complete = false;
                    } else {
                        let (p, e) = tok.split_once('^')?;
                        fr.factors.insert(p.parse().ok()?, e.parse().ok()?);
                    }
                }
                (fr.value() == n).then_some((n, fr))
            };
            let (n, fr) = parse().ok_or(ArithError::CacheParse(lineno + 1))?;
            map.insert(n, fr);
        }
        drop(map);
        Ok(cache)
    }

    pub fn save(&self, path: &Path) -> Result<(), ArithError> {
        let map = self.map.read().unwrap();
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for (n, fr) in map.iter() {
            write!(out, "{}", n)?;
            for (p, e) in &fr.factors {
                write!(out, " {}^{}", p, e)?;
            }
            if !fr.complete {
                write!(out, " cofactor={}", fr.cofactor)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn factor_small() {
        let fr = factor(&BigInt::from(147), &b());
        assert!(fr.complete);
        assert_eq!(fr.factors.get(&BigUint::from(3u32)), Some(&1));
        assert_eq!(fr.factors.get(&BigUint::from(7u32)), Some(&2));
        let fr = factor(&BigInt::from(-2809), &b());
        assert!(fr.complete);
        assert_eq!(fr.factors.get(&BigUint::from(53u32)), Some(&2));
        let fr = factor(&BigInt::from(1), &b());
        assert_eq!(fr, FactorResult::unit());
    }

    #[test]
    fn factor_semiprime() {
        // 1e9-ish primes force the rho path
        let p = BigInt::from(1_000_000_007u64);
        let q = BigInt::from(1_000_000_009u64);
        let fr = factor(&(&p * &q), &b());
        assert!(fr.complete);
        assert_eq!(fr.factors.len(), 2);
    }

    #[test]
    fn factor_value_roundtrip() {
        for n in [2u64, 96, 720720, 1 << 20, 999_999_937] {
            let fr = factor(&BigInt::from(n), &b());
            assert_eq!(fr.value(), BigUint::from(n));
        }
    }

    #[test]
    fn squares() {
        assert!(is_rational_square(&rat(1764)));
        assert!(!is_rational_square(&rat(147)));
        assert!(is_rational_square(&ratio(49, 4)));
        assert!(is_rational_square(&rat(0)));
        assert!(!is_rational_square(&rat(-4)));
        assert_eq!(rational_sqrt(&ratio(49, 4)), Some(ratio(7, 2)));
    }

    #[test]
    fn classes() {
        let c = square_class(&rat(147), &b());
        assert_eq!(c.representative(), BigInt::from(3));
        let c = square_class(&rat(-3), &b());
        assert_eq!(c.representative(), BigInt::from(-3));
        let c = square_class(&ratio(25, 9), &b());
        assert!(c.is_trivial());
        let c = square_class(&rat(12), &b());
        assert_eq!(c.representative(), BigInt::from(3));
    }

    #[test]
    fn class_of_q_r_squared() {
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..50 {
            let q = ratio((next() % 2000) as i64 - 1000, (next() % 999 + 1) as i64);
            if q.is_zero() {
                continue;
            }
            let r = ratio((next() % 50 + 1) as i64, (next() % 50 + 1) as i64);
            assert_eq!(
                square_class(&q, &b()),
                square_class(&(&q * &r * &r), &b())
            );
        }
    }

    #[test]
    fn span_basics() {
        let t = square_class(&rat(147), &b());
        let g1 = square_class(&rat(-3), &b());
        let g2 = square_class(&rat(12), &b());
        let s = span_solve(&t, &[g1.clone(), g2]).unwrap();
        assert_eq!(s, Some(vec![1]));
        assert_eq!(span_solve(&square_class(&rat(3), &b()), &[]).unwrap(), None);
        assert_eq!(
            span_solve(&SquareClass::one(), &[g1]).unwrap(),
            Some(vec![])
        );
    }

    #[test]
    fn span_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29];
        for _ in 0..200 {
            let k = rng.gen_range(1..=8usize);
            let mk = |rng: &mut rand::rngs::StdRng| {
                let mut v = if rng.gen_bool(0.3) { -1i64 } else { 1 };
                for &p in &primes {
                    if rng.gen_bool(0.3) {
                        v *= p;
                    }
                }
                square_class(&rat(v), &b())
            };
            let gens: Vec<_> = (0..k).map(|_| mk(&mut rng)).collect();
            let target = mk(&mut rng);
            let got = span_solve(&target, &gens).unwrap();
            // brute force over all subsets
            let mut found = false;
            for mask in 0..1u32 << k {
                let mut acc = SquareClass::one();
                for (i, g) in gens.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        acc = acc.mul(g);
                    }
                }
                if acc == target {
                    found = true;
                    break;
                }
            }
            assert_eq!(got.is_some(), found);
            if let Some(subset) = got {
                let mut acc = SquareClass::one();
                for i in subset {
                    acc = acc.mul(&gens[i]);
                }
                assert_eq!(acc, target);
            }
        }
    }

    #[test]
    fn span_rejects_inexact() {
        let mut c = SquareClass::one();
        c.unknown_cofactor = BigUint::from(91u32);
        assert!(span_solve(&c, &[]).is_err());
    }

    #[test]
    fn cache_roundtrip() {
        let cache = FactorCache::new();
        for n in [12u32, 147, 2809, 1764] {
            cache.factor(&BigUint::from(n), &b());
        }
        let dir = std::env::temp_dir().join("arboreal-cache-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.txt");
        cache.save(&path).unwrap();
        let loaded = FactorCache::load(&path).unwrap();
        assert_eq!(loaded.len(), cache.len());
        assert_eq!(
            loaded.factor(&BigUint::from(147u32), &b()),
            cache.factor(&BigUint::from(147u32), &b())
        );
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn incomplete_under_tiny_budget() {
        // two 11-digit primes; no rho iterations allowed
        let p: BigInt = "10000000019".parse().unwrap();
        let q: BigInt = "10000000033".parse().unwrap();
        let tiny = Budget {
            trial_bound: 100,
            rho_iterations: 0,
        };
        let fr = factor(&(&p * &q), &tiny);
        assert!(!fr.complete);
        assert_eq!(fr.value(), (&p * &q).to_biguint().unwrap());
    }
}
